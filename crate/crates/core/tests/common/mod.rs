//! Oracles shared by the integration suites. Nothing here calls into the
//! library's solvers; families are plain `Vec<Vec<usize>>`.

#![allow(dead_code)]

use fhplab::rational::{ratio, Q};
use fhplab::SetFamily;
use num_integer::Integer;
use rand::Rng;

/// Random family with nonempty members, `n` members over `ground` points.
pub fn random_lists(seed: u64, n: usize, ground: usize) -> Vec<Vec<usize>> {
    let mut r = fhplab::combin::rng(seed);
    let density: f64 = r.gen_range(0.2..0.7);
    (0..n)
        .map(|_| {
            let mut m: Vec<usize> = (0..ground).filter(|_| r.gen_bool(density)).collect();
            if m.is_empty() {
                m.push(r.gen_range(0..ground));
            }
            m
        })
        .collect()
}

pub fn family(ground: usize, lists: &[Vec<usize>]) -> SetFamily {
    SetFamily::new(ground, lists).expect("valid family")
}

/// The i-th seeded family of the LP corpus: n, ground in 1..=12.
pub fn lp_corpus(i: u64) -> (usize, Vec<Vec<usize>>) {
    let mut r = fhplab::combin::rng(0xF00D + i);
    let n = r.gen_range(1..=12);
    let ground = r.gen_range(1..=12);
    (ground, random_lists(0xBEEF + i, n, ground))
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

/// Extreme rays of {x in R^dim : x >= 0, row . x >= 0 for each row} by the
/// double description method with the combinatorial adjacency test.
pub fn extreme_rays(dim: usize, rows: &[Vec<i128>]) -> Vec<Vec<i128>> {
    assert!(dim + rows.len() <= 128);
    // zero set bit c: constraint c is tight (c < dim: x_c >= 0; dim + j: row j)
    let mut rays: Vec<(Vec<i128>, u128)> = (0..dim)
        .map(|i| {
            let mut v = vec![0; dim];
            v[i] = 1;
            let all = (1u128 << dim) - 1;
            (v, all & !(1u128 << i))
        })
        .collect();
    for (j, row) in rows.iter().enumerate() {
        let bit = 1u128 << (dim + j);
        let s: Vec<i128> = rays
            .iter()
            .map(|(v, _)| v.iter().zip(row).map(|(a, b)| a * b).sum())
            .collect();
        let mut next: Vec<(Vec<i128>, u128)> = Vec::new();
        for (idx, (v, z)) in rays.iter().enumerate() {
            if s[idx] > 0 {
                next.push((v.clone(), *z));
            } else if s[idx] == 0 {
                next.push((v.clone(), *z | bit));
            }
        }
        for p in 0..rays.len() {
            if s[p] <= 0 {
                continue;
            }
            for q in 0..rays.len() {
                if s[q] >= 0 {
                    continue;
                }
                let common = rays[p].1 & rays[q].1;
                if (common.count_ones() as usize) + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(r, (_, z))| r != p && r != q && z & common == common);
                if blocked {
                    continue;
                }
                let mut v: Vec<i128> = rays[q]
                    .0
                    .iter()
                    .zip(&rays[p].0)
                    .map(|(a, b)| s[p] * a - s[q] * b)
                    .collect();
                gcd_normalize(&mut v);
                next.push((v, common | bit));
            }
        }
        rays = next;
    }
    rays.into_iter().map(|(v, _)| v).collect()
}

/// tau* as the minimum of sum(phi) over vertices of {phi >= 0 : phi(S) >= 1}.
pub fn oracle_cover(ground: usize, lists: &[Vec<usize>]) -> Q {
    // variables phi_0..phi_{g-1}, lambda; rows phi(S) - lambda >= 0
    let rows: Vec<Vec<i128>> = lists
        .iter()
        .map(|s| {
            let mut r = vec![0; ground + 1];
            for &e in s {
                r[e] = 1;
            }
            r[ground] = -1;
            r
        })
        .collect();
    extreme_rays(ground + 1, &rows)
        .into_iter()
        .filter(|v| v[ground] > 0)
        .map(|v| {
            let total: i128 = v[..ground].iter().sum();
            ratio(total as u128, v[ground] as u128)
        })
        .min()
        .expect("covering polyhedron has a vertex")
}

/// nu* as the maximum of sum(y) over vertices of the fractional matching polytope.
pub fn oracle_matching(ground: usize, lists: &[Vec<usize>]) -> Q {
    let n = lists.len();
    // variables y_0..y_{n-1}, lambda; rows lambda - sum_{S ni x} y_S >= 0
    let rows: Vec<Vec<i128>> = (0..ground)
        .map(|x| {
            let mut r = vec![0; n + 1];
            for (i, s) in lists.iter().enumerate() {
                if s.contains(&x) {
                    r[i] = -1;
                }
            }
            r[n] = 1;
            r
        })
        .collect();
    extreme_rays(n + 1, &rows)
        .into_iter()
        .filter(|v| v[n] > 0)
        .map(|v| {
            let total: i128 = v[..n].iter().sum();
            ratio(total as u128, v[n] as u128)
        })
        .max()
        .expect("matching polytope has a vertex")
}

/// Number of k-subsets of members with a common point, by direct intersection.
pub fn brute_cons(ground: usize, lists: &[Vec<usize>], k: usize) -> u128 {
    let n = lists.len();
    let mut count = 0;
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return 0;
    }
    loop {
        if (0..ground).any(|x| idx.iter().all(|&i| lists[i].contains(&x))) {
            count += 1;
        }
        // next k-subset in lexicographic order
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return count;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn brute_max_depth(ground: usize, lists: &[Vec<usize>]) -> usize {
    (0..ground)
        .map(|x| lists.iter().filter(|s| s.contains(&x)).count())
        .max()
        .unwrap_or(0)
}

pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}
