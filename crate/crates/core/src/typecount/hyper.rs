//! Complete k-partite K_{d,..,d} search in k-uniform hypergraphs and a corpus
//! of K_{2,2}-free graphs for Zarankiewicz checks.

use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;

use crate::combin::rng;
use crate::error::{Error, Result};

/// Backtracking search for k disjoint parts of d vertices each such that every
/// transversal is an edge. Parts are filled in order, vertices increasing
/// inside a part, first vertices increasing across parts.
pub fn find_kddd(edges: &[Vec<usize>], k: usize, d: usize) -> Result<Option<Vec<Vec<usize>>>> {
    if k == 0 || d == 0 {
        return Err(Error::arg("k and d must be at least 1"));
    }
    let mut shadow: HashSet<Vec<usize>> = HashSet::new();
    let mut n = 0;
    for (i, e) in edges.iter().enumerate() {
        let mut s = e.clone();
        s.sort_unstable();
        s.dedup();
        if s.len() != k {
            return Err(Error::arg(format!("edge {i} does not have {k} distinct vertices")));
        }
        n = n.max(s[k - 1] + 1);
        for mask in 1u32..(1 << k) {
            shadow.insert((0..k).filter(|b| mask >> b & 1 == 1).map(|b| s[b]).collect());
        }
    }
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut used = FixedBitSet::with_capacity(n);
    Ok(place(&shadow, n, k, d, 0, &mut parts, &mut used).then_some(parts))
}

fn place(
    shadow: &HashSet<Vec<usize>>,
    n: usize,
    k: usize,
    d: usize,
    slot: usize,
    parts: &mut Vec<Vec<usize>>,
    used: &mut FixedBitSet,
) -> bool {
    if slot == k * d {
        return true;
    }
    let (t, pos) = (slot / d, slot % d);
    let lo = if pos > 0 {
        parts[t][pos - 1] + 1
    } else if t > 0 {
        parts[t - 1][0] + 1
    } else {
        0
    };
    for v in lo..n {
        if used.contains(v) || !transversals_ok(shadow, &parts[..t], v) {
            continue;
        }
        parts[t].push(v);
        used.insert(v);
        if place(shadow, n, k, d, slot + 1, parts, used) {
            return true;
        }
        used.set(v, false);
        parts[t].pop();
    }
    false
}

// Every choice of one vertex per earlier part, together with v, lies in an edge.
fn transversals_ok(shadow: &HashSet<Vec<usize>>, earlier: &[Vec<usize>], v: usize) -> bool {
    let mut idx = vec![0; earlier.len()];
    loop {
        let mut t: Vec<usize> = earlier.iter().zip(&idx).map(|(p, &i)| p[i]).collect();
        t.push(v);
        t.sort_unstable();
        if !shadow.contains(&t) {
            return false;
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return true;
            }
            idx[j] += 1;
            if idx[j] < earlier[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<FixedBitSet> {
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    for &(a, b) in edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    adj
}

/// No two vertices share two neighbours.
pub fn is_k22_free(n: usize, edges: &[(usize, usize)]) -> bool {
    let adj = adjacency(n, edges);
    (0..n).all(|a| (a + 1..n).all(|b| adj[a].intersection(&adj[b]).count() <= 1))
}

/// Inserts edges in seeded random order whenever the graph stays K_{2,2}-free.
pub fn greedy_k22_free(seed: u64, n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.shuffle(&mut rng(seed));
    let mut adj = vec![FixedBitSet::with_capacity(n); n];
    let mut out = Vec::new();
    for (a, b) in pairs {
        let clash = |x: usize, y: usize, adj: &[FixedBitSet]| {
            adj[y].ones().any(|w| w != x && adj[x].intersection(&adj[w]).next().is_some())
        };
        if clash(a, b, &adj) || clash(b, a, &adj) {
            continue;
        }
        adj[a].insert(b);
        adj[b].insert(a);
        out.push((a, b));
    }
    out.sort_unstable();
    out
}

/// Point-line incidence graph of PG(2, p): points first, then lines.
pub fn projective_incidence_graph(p: usize) -> Result<(usize, Vec<(usize, usize)>)> {
    if !crate::sqfint::is_prime(p as u64) {
        return Err(Error::arg(format!("{p} is not prime")));
    }
    // normalized homogeneous coordinates: first nonzero entry is 1
    let mut pts = Vec::new();
    for a in 0..p {
        for b in 0..p {
            pts.push([1, a, b]);
        }
    }
    for b in 0..p {
        pts.push([0, 1, b]);
    }
    pts.push([0, 0, 1]);
    let m = pts.len();
    let mut edges = Vec::new();
    for (i, x) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            if (x[0] * l[0] + x[1] * l[1] + x[2] * l[2]) % p == 0 {
                edges.push((i, m + j));
            }
        }
    }
    Ok((2 * m, edges))
}

/// |E|^2 <= l^3, the K_{2,2}-free edge bound.
pub fn within_zarankiewicz(l: usize, edges: usize) -> bool {
    (edges as u128).pow(2) <= (l as u128).pow(3)
}
