//! Shattering, VC dimension and the dual shatter function.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::combin::{self, binomial, Colex};
use crate::error::{Error, Result};
use crate::setfam::SetFamily;

/// Subfamily counts above which `dual_shatter` samples instead of enumerating.
pub const EXHAUSTIVE_LIMIT: u128 = 20_000;
pub const SAMPLES: usize = 4_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualValue {
    pub atoms: usize,
    pub mode: SearchMode,
    pub witness: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShatterReport {
    pub vc_lower: usize,
    /// Exact VC dimension when the search finished below the cap.
    pub vc_exact: Option<usize>,
    pub cap: usize,
    pub witness: Vec<usize>,
    pub dual_values: BTreeMap<usize, DualValue>,
    /// Log-log slope of the dual shatter values; an estimate only.
    pub density_fit_estimate: Option<f64>,
    pub seed: u64,
}

/// True iff every subset of `subset` is the trace of some member.
pub fn is_shattered(family: &SetFamily, subset: &[usize]) -> Result<bool> {
    let s = subset.len();
    for &e in subset {
        if e >= family.ground_size() {
            return Err(Error::arg(format!("element {e} outside ground set")));
        }
    }
    if s == 0 {
        return Ok(true);
    }
    if s >= 64 || (family.len() as u128) < (1u128 << s) {
        return Ok(false);
    }
    let need = 1u128 << s;
    let mut traces = HashSet::new();
    for m in family.members() {
        let t: u64 = subset
            .iter()
            .enumerate()
            .filter(|(_, &e)| m.contains(e))
            .fold(0, |acc, (i, _)| acc | (1 << i));
        traces.insert(t);
        if traces.len() as u128 == need {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Largest shattered ground subset, searched level by level up to `cap`.
///
/// Shattered sets are closed under subsets, so level s+1 candidates are
/// built only from shattered s-sets.
pub fn vc_dimension(family: &SetFamily, cap: usize) -> ShatterReport {
    let ground = family.ground_size();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    let mut best: Vec<usize> = Vec::new();
    let mut size = 0usize;
    let mut exhausted = false;
    while size < cap {
        let shattered_now: BTreeSet<Vec<usize>> = level.iter().cloned().collect();
        let mut next = Vec::new();
        let mut seen = HashSet::new();
        for s in &level {
            let start = s.last().map_or(0, |&l| l + 1);
            for e in start..ground {
                let mut cand = s.clone();
                cand.push(e);
                if !seen.insert(cand.clone()) {
                    continue;
                }
                // every s-subset must already be shattered
                let closed = (0..cand.len()).all(|drop| {
                    let sub: Vec<usize> = cand
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != drop)
                        .map(|(_, &x)| x)
                        .collect();
                    shattered_now.contains(&sub)
                });
                if closed && is_shattered(family, &cand).unwrap_or(false) {
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            exhausted = true;
            break;
        }
        next.sort();
        best = next[0].clone();
        size += 1;
        level = next;
    }
    ShatterReport {
        vc_lower: size,
        vc_exact: exhausted.then_some(size),
        cap,
        witness: best,
        dual_values: BTreeMap::new(),
        density_fit_estimate: None,
        seed: 0,
    }
}

/// Number of distinct membership patterns the chosen members cut on the ground set.
pub fn venn_atoms(family: &SetFamily, chosen: &[usize]) -> usize {
    let mut patterns: HashSet<FixedBitSet> = HashSet::new();
    for e in 0..family.ground_size() {
        let mut p = FixedBitSet::with_capacity(chosen.len());
        for (slot, &i) in chosen.iter().enumerate() {
            if family.member(i).contains(e) {
                p.insert(slot);
            }
        }
        patterns.insert(p);
    }
    patterns.len()
}

/// Maximum Venn-atom count over n-member subfamilies, for each requested n.
///
/// Enumerates exhaustively up to [`EXHAUSTIVE_LIMIT`] subfamilies; above that it
/// samples [`SAMPLES`] seeded subfamilies and also extends the previous size's
/// best witness by every member, which keeps the values non-decreasing.
pub fn dual_shatter(
    family: &SetFamily,
    sizes: &[usize],
    seed: u64,
) -> Result<BTreeMap<usize, DualValue>> {
    let total = family.len();
    let mut sorted: Vec<usize> = sizes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = BTreeMap::new();
    let mut prev: Option<Vec<usize>> = None;
    let mut rng = combin::rng(seed);
    for &n in &sorted {
        if n > total {
            return Err(Error::arg(format!(
                "size {n} exceeds family size {total}"
            )));
        }
        let count = binomial(total as u64, n as u64);
        let mut best = (0usize, Vec::new());
        let consider = |cand: Vec<usize>, best: &mut (usize, Vec<usize>)| {
            let a = venn_atoms(family, &cand);
            if a > best.0 {
                *best = (a, cand);
            }
        };
        let mode = if count <= EXHAUSTIVE_LIMIT {
            for cand in Colex::new(total, n) {
                consider(cand, &mut best);
            }
            SearchMode::Exhaustive
        } else {
            for _ in 0..SAMPLES {
                let mut cand = rand::seq::index::sample(&mut rng, total, n).into_vec();
                cand.sort_unstable();
                consider(cand, &mut best);
            }
            if let Some(p) = &prev {
                let mut base = p.clone();
                let mut extra = 0;
                while base.len() < n {
                    if !base.contains(&extra) {
                        base.push(extra);
                    }
                    extra += 1;
                }
                base.sort_unstable();
                consider(base.clone(), &mut best);
                if p.len() + 1 == n {
                    for i in 0..total {
                        if !p.contains(&i) {
                            let mut c = p.clone();
                            c.push(i);
                            c.sort_unstable();
                            consider(c, &mut best);
                        }
                    }
                }
            }
            SearchMode::Sampled
        };
        prev = Some(best.1.clone());
        out.insert(
            n,
            DualValue {
                atoms: best.0,
                mode,
                witness: best.1,
            },
        );
    }
    Ok(out)
}

/// Least-squares slope of ln(value) against ln(n) over points with n, value >= 1.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x >= 1.0 && *y >= 1.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// VC dimension together with dual shatter values and their fitted exponent.
pub fn shatter_report(
    family: &SetFamily,
    cap: usize,
    sizes: &[usize],
    seed: u64,
) -> Result<ShatterReport> {
    let mut r = vc_dimension(family, cap);
    r.dual_values = dual_shatter(family, sizes, seed)?;
    let pts: Vec<(f64, f64)> = r
        .dual_values
        .iter()
        .map(|(&n, v)| (n as f64, v.atoms as f64))
        .collect();
    r.density_fit_estimate = log_log_slope(&pts);
    r.seed = seed;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn powerset(m: usize) -> SetFamily {
        let sets: Vec<Vec<usize>> = (0..1usize << m)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect())
            .collect();
        SetFamily::new(m, &sets).unwrap()
    }

    #[test]
    fn powerset_shatters() {
        assert!(is_shattered(&powerset(3), &[0, 1, 2]).unwrap());
        let r = vc_dimension(&powerset(4), 10);
        assert_eq!(r.vc_exact, Some(4));
        assert_eq!(r.witness, vec![0, 1, 2, 3]);
    }

    #[test]
    fn triangle_traces() {
        let tri = SetFamily::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        // traces on {0,1}: {0,1}, {1}, {0}; the empty trace is missing
        assert!(!is_shattered(&tri, &[0, 1]).unwrap());
        assert!(is_shattered(&tri, &[]).unwrap());
        assert_eq!(vc_dimension(&tri, 5).vc_exact, Some(1));
    }

    #[test]
    fn half_intervals() {
        let n = 8;
        let sets: Vec<Vec<usize>> = (0..n).map(|i| (0..=i).collect()).collect();
        let f = SetFamily::new(n, &sets).unwrap();
        assert_eq!(vc_dimension(&f, 5).vc_exact, Some(1));
    }

    #[test]
    fn cap_stops_search() {
        let r = vc_dimension(&powerset(4), 2);
        assert_eq!((r.vc_lower, r.vc_exact), (2, None));
    }

    #[test]
    fn dual_shatter_basics() {
        let one = SetFamily::new(3, &[vec![0]]).unwrap();
        assert_eq!(dual_shatter(&one, &[1], 0).unwrap()[&1].atoms, 2);
        assert!(dual_shatter(&one, &[2], 0).is_err());
    }
}
