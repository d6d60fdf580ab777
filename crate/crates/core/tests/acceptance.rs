//! The thirteen acceptance criteria. Each prints one PASS/FAIL line with its
//! wall time against the pinned limit; the test fails unless exactly the
//! criteria in `known_red` fail.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use fhplab::combin::{rng, Colex, Multisets};
use fhplab::constructs::{
    build_block_counterexample, build_caps_family, build_shattered_pairs,
    build_two_order_cross, build_tp2_grid, furedi_extract, random_uniform_family, BlockParams,
};
use fhplab::formula::{var, Formula};
use fhplab::fraclp::{fractional_transversal, intersection_number, min_transversal_exact};
use fhplab::pseudofield::{definable_family, dim_meas_fit, lines_spec, PrimeField};
use fhplab::rational::{q, ratio, Q};
use fhplab::setfam::{
    check_fhp_instance, check_pk_property_mode, cons_k, measure_fhp_check, sequence_ratio,
    RationalWeights, TupleMode,
};
use fhplab::sqfint::{
    count_solutions_window, density_certificate, error_term_floor, p_satisfiable,
    random_admissible_shifts, GSystem, SpecialFormula,
};
use fhplab::typecount::hyper::{
    find_kddd, greedy_k22_free, is_k22_free, projective_incidence_graph, within_zarankiewicz,
};
use fhplab::typecount::{f_phi, CountOptions, FiniteStructure, TypeQuery};
use num_traits::{One, Zero};
use rand::Rng;

use common::*;

const CAP: usize = 1 << 22;

fn lp_duality() {
    let tri = family(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]);
    assert_eq!(intersection_number(&tri).unwrap().value, q(2, 3));
    assert_eq!(fractional_transversal(&tri).unwrap().tau_star, Some(q(3, 2)));
    for i in 0..200 {
        let (ground, lists) = lp_corpus(i);
        let f = family(ground, &lists);
        let iv = intersection_number(&f).unwrap().value;
        let tau = fractional_transversal(&f).unwrap().tau_star.unwrap();
        assert_eq!(&iv * &tau, Q::one(), "family {i}");
        let cover = oracle_cover(ground, &lists);
        let matching = oracle_matching(ground, &lists);
        assert_eq!(tau, cover, "family {i}: tau* against vertex enumeration");
        assert_eq!(tau, matching, "family {i}: tau* against the matching polytope");
        assert_eq!(iv, Q::one() / cover, "family {i}: i(F) against vertex enumeration");
    }
}

fn kelley() {
    for i in 0..200 {
        let (ground, lists) = lp_corpus(i);
        let f = family(ground, &lists);
        let iv = intersection_number(&f).unwrap().value;
        for len in 1..=5 {
            for seq in Multisets::new(lists.len(), len) {
                let r = sequence_ratio(&f, &seq).unwrap();
                let picked: Vec<Vec<usize>> = seq.iter().map(|&j| lists[j].clone()).collect();
                assert_eq!(r, ratio(brute_max_depth(ground, &picked) as u128, len as u128));
                assert!(r >= iv, "family {i}, sequence {seq:?}");
            }
        }
    }
}

fn block() {
    let params = BlockParams {
        k: 2,
        alpha: q(1, 3),
        gamma: q(1, 1),
        p_prime: 4,
        k_prime: 2,
        r: 3,
        m: 4,
    };
    let f = build_block_counterexample(&params, CAP).unwrap();
    let lists = f.to_lists();
    let c = cons_k(&f, 2).unwrap();
    assert_eq!(c.cons_count, 48);
    assert_eq!(c.cons_count, binom(3, 2) * 16);
    assert_eq!(brute_cons(f.ground_size(), &lists, 2), 48);
    assert_eq!(c.fraction, q(8, 11));
    assert_eq!(params.block_product(), q(2, 3));
    assert!(c.fraction > q(2, 3));
    for b in 0..3 {
        let others: Vec<usize> = (0..12).filter(|i| i / 4 != b).collect();
        for mask in 0u32..1 << others.len() {
            let mut idx: Vec<usize> = (b * 4..b * 4 + 4).collect();
            idx.extend(others.iter().enumerate().filter(|(t, _)| mask >> t & 1 == 1).map(|(_, &i)| i));
            idx.sort_unstable();
            let sub = f.subfamily(&idx).unwrap();
            let r = check_pk_property_mode(&sub, 4, 2, TupleMode::Distinct).unwrap();
            assert!(!r.holds, "block {b}, subfamily {idx:?}");
        }
    }
}

fn tp2_grid() {
    for m in [4usize, 5, 8] {
        let f = build_tp2_grid(3, m, CAP).unwrap();
        let r = check_fhp_instance(&f, 3, &q(1, 27)).unwrap();
        let expected = ratio((m * m * m) as u128, binom(3 * m as u64, 3));
        assert_eq!(r.cons.fraction, expected);
        assert_eq!(r.cons.cons_count, brute_cons(f.ground_size(), &f.to_lists(), 3));
        assert!(r.cons.fraction >= q(1, 27), "m = {m}");
        assert!(r.hypothesis_holds);
        assert_eq!(r.best_beta, q(1, m as i64));
        assert_eq!(brute_max_depth(f.ground_size(), &f.to_lists()), 3);
    }
}

fn cross() {
    for n in 4..=20usize {
        let f = build_two_order_cross(n, CAP).unwrap();
        let lists = f.to_lists();
        let two = cons_k(&f, 2).unwrap();
        let three = cons_k(&f, 3).unwrap();
        assert_eq!(two.fraction, Q::one(), "n = {n}");
        assert_eq!(three.cons_count, 0, "n = {n}");
        assert_eq!(brute_cons(f.ground_size(), &lists, 3), 0);
        let r = check_fhp_instance(&f, 2, &Q::one()).unwrap();
        assert_eq!(r.best_beta, q(2, n as i64));
        assert_eq!(brute_max_depth(f.ground_size(), &lists), 2);
    }
}

fn caps() {
    let (w, depth) = (3, 4);
    let f = build_caps_family(w, depth, CAP).unwrap();
    let sets: Vec<Vec<usize>> = f.to_lists();
    assert_eq!(sets.len(), w * depth);
    for row in 0..depth {
        for a in 0..w {
            for b in a + 1..w {
                let (x, y) = (&sets[row * w + a], &sets[row * w + b]);
                assert!(x.iter().all(|e| !y.contains(e)), "row {row}: {a} and {b} meet");
            }
        }
    }
    let mut branches = 0;
    for code in 0..w.pow(depth as u32) {
        let pick: Vec<usize> = (0..depth).map(|i| code / w.pow(i as u32) % w).collect();
        let common = (0..f.ground_size())
            .any(|e| (0..depth).all(|i| sets[i * w + pick[i]].contains(&e)));
        assert!(common, "branch {pick:?} is empty");
        branches += 1;
    }
    assert_eq!(branches, 81);
}

fn shattered_pairs() {
    let f = build_shattered_pairs(5, CAP).unwrap();
    assert_eq!(f.len(), 20);
    let r = check_pk_property_mode(&f, 4, 2, TupleMode::Distinct).unwrap();
    assert!(r.holds);
    assert_eq!(r.tuples_checked, 4845);
    // members (a,b), (c,d) meet iff a != d and c != b
    let pairs: Vec<(usize, usize)> = (0..5)
        .flat_map(|a| (0..5).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let meets = |x: (usize, usize), y: (usize, usize)| x.0 != y.1 && y.0 != x.1;
    let mut quads = 0;
    for quad in Colex::new(20, 4) {
        quads += 1;
        let ok = (0..4).any(|s| (s + 1..4).any(|t| meets(pairs[quad[s]], pairs[quad[t]])));
        assert!(ok, "quadruple {quad:?}");
    }
    assert_eq!(quads, 4845);
    let mut taus = Vec::new();
    for m in 3..=5usize {
        let f = build_shattered_pairs(m, CAP).unwrap();
        let (tau, witness) = min_transversal_exact(&f, 16).unwrap();
        // the witness hits everything and no smaller set of masks does
        let hits = |pts: &[usize]| {
            (0..m).all(|a| (0..m).filter(|&b| b != a).all(|b| {
                pts.iter().any(|&e| e >> a & 1 == 1 && e >> b & 1 == 0)
            }))
        };
        assert!(hits(&witness));
        assert!(Colex::new(1 << m, tau - 1).all(|c| !hits(&c)), "m = {m}");
        taus.push(tau);
    }
    assert!(
        taus.windows(2).all(|w| w[0] < w[1]),
        "transversal numbers {taus:?} for m = 3, 4, 5 are not strictly increasing"
    );
}

fn furedi() {
    for s in 0..50u64 {
        let f = random_uniform_family(1000 + s, 60, 25, 3).unwrap();
        let lists = f.to_lists();
        let got = furedi_extract(&f, 10_000, 7 + s).unwrap().expect("extraction found");
        assert_eq!(got.target, 13);
        assert!(got.indices.len() >= 13, "family {s}");
        assert!(got.trial <= 10_000);
        let mut class = [usize::MAX; 25];
        for (c, part) in got.parts.iter().enumerate() {
            for &e in part {
                assert_eq!(class[e], usize::MAX);
                class[e] = c;
            }
        }
        for &i in &got.indices {
            let mut colors: Vec<usize> = lists[i].iter().map(|&e| class[e]).collect();
            colors.sort_unstable();
            assert_eq!(colors, vec![0, 1, 2], "member {i} of family {s}");
        }
    }
}

fn mobius_squarefree_below(n: u64) -> u64 {
    // sum_d mu(d) floor((n - 1) / d^2)
    let lim = (n as f64).sqrt() as usize + 1;
    let mut mu = vec![1i64; lim + 1];
    let mut composite = vec![false; lim + 1];
    for p in 2..=lim {
        if composite[p] {
            continue;
        }
        for j in (p..=lim).step_by(p) {
            if j > p {
                composite[j] = true;
            }
            mu[j] = -mu[j];
        }
        for j in (p * p..=lim).step_by(p * p) {
            mu[j] = 0;
        }
    }
    let total: i64 = (1..=lim)
        .filter(|d| ((d * d) as u64) < n)
        .map(|d| mu[d] * ((n - 1) / (d * d) as u64) as i64)
        .sum();
    total as u64
}

fn naive_squarefree(a: i64) -> bool {
    a != 0 && (2..).take_while(|d| d * d <= a.abs()).all(|d| a % (d * d) != 0)
}

fn squarefree() {
    let n = 1_000_000u64;
    let count = count_solutions_window(&GSystem::shifts(&[0]), n as i64).unwrap();
    assert_eq!(count, 607_926);
    assert_eq!(count, mobius_squarefree_below(n));
    let expected = 6.0 / std::f64::consts::PI.powi(2) * n as f64;
    assert!((count as f64 - expected).abs() <= 1e-3 * expected);

    let cert = density_certificate(&SpecialFormula::squarefree_shifts(3), 10_000).unwrap();
    assert!(cert.epsilon_lower > Q::zero());
    let mut r = rng(2024);
    for s in 0..20 {
        let sys = random_admissible_shifts(&mut r, 3, 60).unwrap();
        for t in [1_000i64, 10_000, 100_000] {
            let got = count_solutions_window(&sys, t).unwrap();
            if t <= 10_000 {
                let brute = (1..t)
                    .filter(|&a| sys.c.iter().all(|&c| naive_squarefree(a + c)))
                    .count() as u64;
                assert_eq!(got, brute, "system {s}, t = {t}");
            }
            let lhs = ratio(got as u128 + error_term_floor(&sys, t), 1);
            let rhs = &cert.epsilon_lower * ratio(t as u128, 1);
            assert!(lhs >= rhs, "system {s} {:?} at t = {t}: {got}", sys.c);
        }
    }
    let four = GSystem::shifts(&[0, 1, 2, 3]);
    assert!(!p_satisfiable(&four, 2).unwrap().sat);
    assert!((0..4).all(|x| (0..4).any(|c| (x + c) % 4 == 0)));
}

fn finite_fields() {
    for p in [11u64, 31] {
        let field = PrimeField::new(p).unwrap();
        let fam = definable_family(&field, &lines_spec()).unwrap();
        let f = &fam.family;
        assert_eq!(f.len() as u64, p * p);
        assert!((0..f.len()).all(|i| f.member(i).count_ones(..) as u64 == p));
        let r = check_fhp_instance(f, 2, &q(1, 2)).unwrap();
        assert_eq!(r.best_beta, q(1, p as i64));
        let pi = p as i64;
        assert_eq!(r.cons.fraction, Q::one() - q(pi - 1, pi * pi - 1));
        // lines y = a x + b and y = c x + d meet iff a != c or b = d
        let params = &fam.parameters;
        let mut meeting = 0u128;
        for i in 0..params.len() {
            for j in i + 1..params.len() {
                if params[i][0] != params[j][0] {
                    meeting += 1;
                }
            }
        }
        assert_eq!(r.cons.cons_count, meeting);
        for i in 0..f.len() {
            let fit = dim_meas_fit(f.member(i).count_ones(..) as u128, p, 2, &Q::one()).unwrap();
            assert_eq!((fit.d, fit.mu.clone()), (1, Q::one()), "line {i} over F_{p}");
        }
    }
}

struct Corpus {
    name: String,
    s: FiniteStructure,
    query: TypeQuery,
    holds: Box<dyn Fn(u64, u64) -> bool>,
    size: u64,
}

fn random_graph(seed: u64, n: u64) -> Vec<(u64, u64)> {
    let mut r = rng(seed);
    let mut e = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.gen_bool(0.45) {
                e.push((a, b));
            }
        }
    }
    e
}

fn type_corpus() -> Vec<Corpus> {
    let edge = || Formula::Rel {
        name: "E".into(),
        args: vec![var("x"), var("y")],
    };
    let mut out = Vec::new();
    for n in [4u64, 5, 6] {
        out.push(Corpus {
            name: format!("equality on {n}"),
            s: FiniteStructure::pure_set(n).unwrap(),
            query: TypeQuery::new(Formula::Eq(var("x"), var("y")), &["x"], &["y"]),
            holds: Box::new(|x, y| x == y),
            size: n,
        });
        out.push(Corpus {
            name: format!("inequality on {n}"),
            s: FiniteStructure::pure_set(n).unwrap(),
            query: TypeQuery::new(Formula::Not(Box::new(Formula::Eq(var("x"), var("y")))), &["x"], &["y"]),
            holds: Box::new(|x, y| x != y),
            size: n,
        });
    }
    for (seed, n) in [(1u64, 5u64), (2, 6), (3, 6), (4, 6)] {
        let edges = random_graph(seed, n);
        let mut adj = vec![vec![false; n as usize]; n as usize];
        for &(a, b) in &edges {
            adj[a as usize][b as usize] = true;
            adj[b as usize][a as usize] = true;
        }
        let s = FiniteStructure::graph(n, &edges).unwrap();
        let a1 = adj.clone();
        out.push(Corpus {
            name: format!("edge, graph {seed}"),
            s: s.clone(),
            query: TypeQuery::new(edge(), &["x"], &["y"]),
            holds: Box::new(move |x, y| a1[x as usize][y as usize]),
            size: n,
        });
        let a2 = adj.clone();
        out.push(Corpus {
            name: format!("non-edge, graph {seed}"),
            s: s.clone(),
            query: TypeQuery::new(Formula::Not(Box::new(edge())), &["x"], &["y"]),
            holds: Box::new(move |x, y| !a2[x as usize][y as usize]),
            size: n,
        });
        let a3 = adj;
        let path = Formula::exists(
            "z",
            Formula::And(vec![
                Formula::Rel {
                    name: "E".into(),
                    args: vec![var("x"), var("z")],
                },
                Formula::Rel {
                    name: "E".into(),
                    args: vec![var("z"), var("y")],
                },
            ]),
        );
        out.push(Corpus {
            name: format!("two-step path, graph {seed}"),
            s,
            query: TypeQuery::new(path, &["x"], &["y"]),
            holds: Box::new(move |x, y| (0..n as usize).any(|z| a3[x as usize][z] && a3[z][y as usize])),
            size: n,
        });
    }
    out
}

/// f_phi by plain enumeration: every l-subset, every consistent type, every
/// pairwise m-inconsistent family grown in index order.
fn brute_f(c: &Corpus, m: usize, k: usize, l: usize) -> usize {
    let witnesses = |params: &[u64]| -> Vec<u64> {
        (0..c.size).filter(|&x| params.iter().all(|&b| (c.holds)(x, b))).collect()
    };
    let mut best = 0;
    for a in Colex::new(c.size as usize, l) {
        let mut types: Vec<Vec<u64>> = Vec::new();
        for size in 1..=k.min(l) {
            for pick in Colex::new(l, size) {
                let params: Vec<u64> = pick.iter().map(|&i| a[i] as u64).collect();
                if !witnesses(&params).is_empty() {
                    types.push(params);
                }
            }
        }
        let incons = |p: &[u64], q: &[u64]| {
            (1..=m.min(p.len())).any(|sp| {
                Colex::new(p.len(), sp).any(|ip| {
                    (1..=m.min(q.len())).any(|sq| {
                        Colex::new(q.len(), sq).any(|iq| {
                            let mut all: Vec<u64> = ip.iter().map(|&i| p[i]).collect();
                            all.extend(iq.iter().map(|&i| q[i]));
                            witnesses(&all).is_empty()
                        })
                    })
                })
            })
        };
        let t = types.len();
        let mut adj = vec![vec![false; t]; t];
        for i in 0..t {
            for j in i + 1..t {
                let v = incons(&types[i], &types[j]);
                adj[i][j] = v;
                adj[j][i] = v;
            }
        }
        fn grow(adj: &[Vec<bool>], chosen: &mut Vec<usize>, from: usize, best: &mut usize) {
            *best = (*best).max(chosen.len());
            for v in from..adj.len() {
                if chosen.iter().all(|&u| adj[u][v]) {
                    chosen.push(v);
                    grow(adj, chosen, v + 1, best);
                    chosen.pop();
                }
            }
        }
        grow(&adj, &mut Vec::new(), 0, &mut best);
    }
    best
}

fn type_counting() {
    let opts = CountOptions::default();
    for c in type_corpus() {
        let pool: Vec<u64> = (0..c.size).collect();
        let mut table: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
        for m in 1..=2 {
            for k in m..=3 {
                for l in 1..=c.size as usize {
                    let r = f_phi(&c.s, &c.query, m, k, &pool, l, &opts).unwrap();
                    assert!(r.exact, "{}: ({m},{k},{l}) not exact", c.name);
                    assert_eq!(r.value, brute_f(&c, m, k, l), "{}: ({m},{k},{l})", c.name);
                    if m == 1 {
                        let bound: u128 = (1..=k as u64).map(|i| binom(l as u64, i)).sum();
                        assert!(r.value as u128 <= bound, "{}: ({m},{k},{l})", c.name);
                    }
                    table.insert((m, k, l), r.value);
                }
            }
        }
        for (&(m, k, l), &v) in &table {
            for (&(m2, k2, l2), &v2) in &table {
                if m2 >= m && k2 >= k && l2 >= l {
                    assert!(v <= v2, "{}: f({m},{k},{l}) = {v} > f({m2},{k2},{l2}) = {v2}", c.name);
                }
            }
        }
    }
    let membership = TypeQuery::new(
        Formula::Rel {
            name: "E".into(),
            args: vec![var("x"), var("y")],
        },
        &["x"],
        &["y"],
    );
    for (k, m) in [(2usize, 3usize), (3, 2), (2, 4)] {
        let grid = build_tp2_grid(k, m, CAP).unwrap();
        let (s, pool) = FiniteStructure::from_family(&grid).unwrap();
        let r = f_phi(&s, &membership, 1, k, &pool, k * m, &opts).unwrap();
        assert!(r.value >= m.pow(k as u32), "grid k = {k}, m = {m}: {}", r.value);
    }
}

fn brute_kddd(n: usize, edges: &[Vec<usize>], k: usize, d: usize) -> bool {
    let set: std::collections::HashSet<Vec<usize>> = edges
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.sort_unstable();
            e
        })
        .collect();
    // assign each of k*d chosen vertices a part; parts ordered by first vertex
    fn assign(
        vs: &[usize],
        parts: &mut Vec<Vec<usize>>,
        k: usize,
        d: usize,
        set: &std::collections::HashSet<Vec<usize>>,
    ) -> bool {
        let Some((&v, rest)) = vs.split_first() else {
            let mut idx = vec![0; k];
            loop {
                let mut e: Vec<usize> = (0..k).map(|i| parts[i][idx[i]]).collect();
                e.sort_unstable();
                if !set.contains(&e) {
                    return false;
                }
                let mut i = 0;
                while i < k {
                    idx[i] += 1;
                    if idx[i] < d {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i == k {
                    return true;
                }
            }
        };
        for p in 0..k {
            if parts[p].len() < d && (p == 0 || !parts[p - 1].is_empty()) {
                parts[p].push(v);
                if assign(rest, parts, k, d, set) {
                    return true;
                }
                parts[p].pop();
            }
        }
        false
    }
    Colex::new(n, k * d).any(|vs| assign(&vs, &mut vec![Vec::new(); k], k, d, &set))
}

fn zarankiewicz() {
    let mut r = rng(77);
    for case in 0..40 {
        let n = r.gen_range(4..=12usize);
        let k = if case % 2 == 0 { 2 } else { 3 };
        let mut edges: Vec<Vec<usize>> = Colex::new(n, k).filter(|_| r.gen_bool(0.5)).collect();
        if case % 5 == 0 {
            edges.truncate(n);
        }
        if edges.is_empty() {
            continue;
        }
        for d in 1..=2 {
            if k * d > n {
                continue;
            }
            let got = find_kddd(&edges, k, d).unwrap();
            let span = edges.iter().flatten().max().map_or(0, |&v| v + 1);
            assert_eq!(got.is_some(), brute_kddd(span, &edges, k, d), "case {case}, k = {k}, d = {d}");
            if let Some(parts) = got {
                assert!(parts.iter().all(|p| p.len() == d));
            }
        }
    }
    let mut corpus: Vec<(usize, Vec<(usize, usize)>)> = Vec::new();
    for n in (4..=40).step_by(3) {
        for seed in 0..3 {
            corpus.push((n, greedy_k22_free(seed * 100 + n as u64, n)));
        }
    }
    for p in [2, 3] {
        corpus.push(projective_incidence_graph(p).unwrap());
    }
    for (n, edges) in &corpus {
        assert!(*n <= 40);
        assert!(is_k22_free(*n, edges));
        let mut common_ok = true;
        for a in 0..*n {
            for b in a + 1..*n {
                let shared = (0..*n)
                    .filter(|&c| {
                        let adj = |x: usize, y: usize| edges.contains(&(x.min(y), x.max(y)));
                        adj(a, c) && adj(b, c)
                    })
                    .count();
                common_ok &= shared <= 1;
            }
        }
        assert!(common_ok, "graph on {n} vertices has a K22");
        assert!(within_zarankiewicz(*n, edges.len()));
        assert!((edges.len() as f64) <= (*n as f64).powf(1.5) + 1e-9);
        if *n <= 12 {
            let as_edges: Vec<Vec<usize>> = edges.iter().map(|&(a, b)| vec![a, b]).collect();
            assert_eq!(find_kddd(&as_edges, 2, 2).unwrap(), None);
        }
    }
}

fn measure_equivalence() {
    let mut r = rng(13);
    for s in 0..50 {
        let n = r.gen_range(2..=7);
        let ground = r.gen_range(2..=7);
        let lists = random_lists(500 + s, n, ground);
        let f = family(ground, &lists);
        let den = r.gen_range(1..=6usize);
        // integer counts c_i with sum den give weights c_i / den
        let mut counts = vec![0usize; n];
        for _ in 0..den {
            counts[r.gen_range(0..n)] += 1;
        }
        let weights: BTreeMap<usize, Q> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i, ratio(c as u128, den as u128)))
            .collect();
        let w = RationalWeights::new(weights).unwrap();
        let rep = f.replicate(&counts).unwrap();
        let rep_lists = rep.to_lists();
        assert_eq!(rep.len(), den);
        for d in 2..=3usize {
            let alpha = q(1, 2);
            let mr = measure_fhp_check(&f, &w, d, &alpha).unwrap();
            let scale = ratio((den as u128).pow(d as u32), 1);
            let ordered = &mr.product_measure * &scale;
            let distinct: u128 = if den >= d {
                let fr = check_fhp_instance(&rep, d, &alpha).unwrap();
                assert_eq!(fr.cons.cons_count, brute_cons(ground, &rep_lists, d));
                fr.cons.cons_count
            } else {
                0
            };
            let fact: u128 = (1..=d as u128).product();
            // ordered tuples with a repeated index that still intersect
            let mut diagonal = 0u128;
            let mut idx = vec![0usize; d];
            loop {
                let repeated = (0..d).any(|a| (a + 1..d).any(|b| idx[a] == idx[b]));
                if repeated && (0..ground).any(|x| idx.iter().all(|&i| rep_lists[i].contains(&x))) {
                    diagonal += 1;
                }
                let mut pos = 0;
                while pos < d {
                    idx[pos] += 1;
                    if idx[pos] < den {
                        break;
                    }
                    idx[pos] = 0;
                    pos += 1;
                }
                if pos == d {
                    break;
                }
            }
            assert_eq!(ordered, ratio(fact * distinct + diagonal, 1), "family {s}, d = {d}");
            let correction = binom(d as u64, 2) * (den as u128).pow(d as u32 - 1);
            assert!(diagonal <= correction);
            assert_eq!(
                &mr.weighted_depth * ratio(den as u128, 1),
                ratio(brute_max_depth(ground, &rep_lists) as u128, 1)
            );
        }
    }
}

#[test]
fn acceptance() {
    let criteria: [(&str, u64, fn()); 13] = [
        ("lp duality", 60, lp_duality),
        ("kelley finitized", 120, kelley),
        ("block counterexample", 1, block),
        ("tp2 grid", 30, tp2_grid),
        ("two-order cross", 5, cross),
        ("caps family", 5, caps),
        ("shattered pairs", 60, shattered_pairs),
        ("furedi extraction", 120, furedi),
        ("square-free suite", 300, squarefree),
        ("finite-field lines", 120, finite_fields),
        ("type counting", 300, type_counting),
        ("zarankiewicz", 120, zarankiewicz),
        ("measure equivalence", 120, measure_equivalence),
    ];
    // Criterion 7 asks for strict growth of the transversal number at m = 3, 4, 5;
    // the exact values are 3, 4, 4 (both sides verified by brute force above).
    let known_red = [7];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run));
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(*limit);
        let verdict = match (&outcome, within) {
            (Ok(()), true) => "PASS",
            _ => "FAIL",
        };
        let note = match &outcome {
            Err(e) => e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default(),
            Ok(()) if !within => "time limit exceeded".into(),
            Ok(()) => String::new(),
        };
        println!(
            "{verdict} {:>2} {name:<22} {:>8.3}s / {limit}s {note}",
            i + 1,
            elapsed.as_secs_f64()
        );
        if verdict == "FAIL" {
            failed.push(i + 1);
        }
    }
    assert_eq!(failed, known_red, "failed criteria differ from the known set");
}
