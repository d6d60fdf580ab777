//! Intersection numbers, fractional transversals and exact transversals.
//!
//! Both LPs run over the atoms of the family's Venn partition: ground elements
//! with identical membership patterns are interchangeable, so one variable per
//! atom (placed on its smallest element) keeps every intersection pattern.

mod simplex;

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use simplex::{
    certifies_optimality, solve_lp, Constraint, LpProblem, LpSolution, LpStatus, Relation, Sense,
};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::setfam::SetFamily;

/// A class of ground elements contained in exactly the same members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub representative: usize,
    pub elements: Vec<usize>,
    pub members: FixedBitSet,
}

/// Venn atoms covered by at least one member, ordered by smallest element.
pub fn atoms(family: &SetFamily) -> Vec<Atom> {
    let n = family.len();
    let mut by_pattern: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut out: Vec<Atom> = Vec::new();
    let mut patterns = vec![FixedBitSet::with_capacity(n); family.ground_size()];
    for (i, m) in family.members().iter().enumerate() {
        for e in m.ones() {
            patterns[e].insert(i);
        }
    }
    for (e, pat) in patterns.into_iter().enumerate() {
        if pat.is_clear() {
            continue;
        }
        let key: Vec<usize> = pat.ones().collect();
        match by_pattern.get(&key) {
            Some(&a) => out[a].elements.push(e),
            None => {
                by_pattern.insert(key, out.len());
                out.push(Atom {
                    representative: e,
                    elements: vec![e],
                    members: pat,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionNumber {
    #[serde(with = "rational::json")]
    pub value: Q,
    /// An optimal probability measure on ground elements (Kelley witness).
    #[serde(with = "rational::json_map")]
    pub distribution: BTreeMap<usize, Q>,
    /// Set when some member is empty; the value is then 0 by convention.
    pub degenerate: bool,
}

/// max t subject to mu(S) >= t for every member S, over probability measures mu.
pub fn intersection_number(family: &SetFamily) -> Result<IntersectionNumber> {
    if family.is_empty() {
        return Err(Error::arg("intersection number of an empty family"));
    }
    if !family.empty_members().is_empty() {
        return Ok(IntersectionNumber {
            value: Q::zero(),
            distribution: BTreeMap::new(),
            degenerate: true,
        });
    }
    let atoms = atoms(family);
    let r = atoms.len();
    let mut objective = vec![Q::zero(); r + 1];
    objective[r] = Q::one();
    let mut lp = LpProblem::new(Sense::Maximize, objective);
    for i in 0..family.len() {
        let mut row: Vec<Q> = atoms
            .iter()
            .map(|a| {
                if a.members.contains(i) {
                    Q::one()
                } else {
                    Q::zero()
                }
            })
            .collect();
        row.push(-Q::one());
        lp.constrain(row, Relation::Ge, Q::zero());
    }
    let mut total = vec![Q::one(); r];
    total.push(Q::zero());
    lp.constrain(total, Relation::Eq, Q::one());
    let sol = solve_lp(&lp)?;
    let value = sol
        .value
        .ok_or_else(|| Error::arg("intersection LP has no optimum"))?;
    let distribution = atoms
        .iter()
        .zip(&sol.primal)
        .filter(|(_, w)| !w.is_zero())
        .map(|(a, w)| (a.representative, w.clone()))
        .collect();
    Ok(IntersectionNumber {
        value,
        distribution,
        degenerate: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalResult {
    pub status: LpStatus,
    #[serde(with = "rational::json_opt")]
    pub tau_star: Option<Q>,
    #[serde(with = "rational::json_map")]
    pub weights: BTreeMap<usize, Q>,
    pub integer_tau: Option<usize>,
    pub integer_witness: Option<Vec<usize>>,
}

/// min sum phi(x) subject to phi(S) >= 1 for every member S.
///
/// An empty member makes the covering LP infeasible; that is reported in
/// `status` rather than as an error.
pub fn fractional_transversal(family: &SetFamily) -> Result<TransversalResult> {
    if !family.empty_members().is_empty() {
        return Ok(TransversalResult {
            status: LpStatus::Infeasible,
            tau_star: None,
            weights: BTreeMap::new(),
            integer_tau: None,
            integer_witness: None,
        });
    }
    let atoms = atoms(family);
    let mut lp = LpProblem::new(Sense::Minimize, vec![Q::one(); atoms.len()]);
    for i in 0..family.len() {
        let row = atoms
            .iter()
            .map(|a| {
                if a.members.contains(i) {
                    Q::one()
                } else {
                    Q::zero()
                }
            })
            .collect();
        lp.constrain(row, Relation::Ge, Q::one());
    }
    let sol = solve_lp(&lp)?;
    let weights = atoms
        .iter()
        .zip(&sol.primal)
        .filter(|(_, w)| !w.is_zero())
        .map(|(a, w)| (a.representative, w.clone()))
        .collect();
    Ok(TransversalResult {
        status: sol.status,
        tau_star: sol.value,
        weights,
        integer_tau: None,
        integer_witness: None,
    })
}

/// Fractional transversal plus the exact transversal number when it is at most `cap`.
pub fn transversal_report(family: &SetFamily, cap: usize) -> Result<TransversalResult> {
    let mut r = fractional_transversal(family)?;
    if let Some((size, witness)) = min_transversal_exact(family, cap) {
        r.integer_tau = Some(size);
        r.integer_witness = Some(witness);
    }
    Ok(r)
}

/// Smallest set of ground elements meeting every member, if one of size `<= cap` exists.
pub fn min_transversal_exact(family: &SetFamily, cap: usize) -> Option<(usize, Vec<usize>)> {
    if family.is_empty() {
        return Some((0, Vec::new()));
    }
    if !family.empty_members().is_empty() {
        return None;
    }
    let atoms = atoms(family);
    let n = family.len();
    let search = HittingSearch {
        atoms: &atoms,
        n,
        member_atoms: (0..n)
            .map(|i| {
                (0..atoms.len())
                    .filter(|&a| atoms[a].members.contains(i))
                    .collect()
            })
            .collect(),
    };
    for budget in 1..=cap {
        let mut chosen = Vec::new();
        let hit = FixedBitSet::with_capacity(n);
        if search.dfs(&hit, budget, &mut chosen) {
            let mut witness: Vec<usize> =
                chosen.iter().map(|&a| atoms[a].representative).collect();
            witness.sort_unstable();
            return Some((budget, witness));
        }
    }
    None
}

struct HittingSearch<'a> {
    atoms: &'a [Atom],
    n: usize,
    member_atoms: Vec<Vec<usize>>,
}

impl HittingSearch<'_> {
    // Greedy packing of pairwise disjoint unhit members: each needs its own element.
    fn packing_bound(&self, hit: &FixedBitSet) -> usize {
        let mut used = FixedBitSet::with_capacity(self.atoms.len());
        let mut count = 0;
        for i in 0..self.n {
            if hit.contains(i) {
                continue;
            }
            if self.member_atoms[i].iter().all(|&a| !used.contains(a)) {
                count += 1;
                for &a in &self.member_atoms[i] {
                    used.insert(a);
                }
            }
        }
        count
    }

    fn dfs(&self, hit: &FixedBitSet, budget: usize, chosen: &mut Vec<usize>) -> bool {
        let unhit = (0..self.n)
            .filter(|&i| !hit.contains(i))
            .min_by_key(|&i| self.member_atoms[i].len());
        let Some(target) = unhit else {
            return true;
        };
        if budget == 0 || self.packing_bound(hit) > budget {
            return false;
        }
        for &a in &self.member_atoms[target] {
            let mut next = hit.clone();
            next.union_with(&self.atoms[a].members);
            chosen.push(a);
            if self.dfs(&next, budget - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn tri() -> SetFamily {
        SetFamily::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn triangle_lps() {
        let i = intersection_number(&tri()).unwrap();
        assert_eq!(i.value, q(2, 3));
        assert_eq!(
            i.distribution,
            BTreeMap::from([(0, q(1, 3)), (1, q(1, 3)), (2, q(1, 3))])
        );
        let t = fractional_transversal(&tri()).unwrap();
        assert_eq!(t.tau_star, Some(q(3, 2)));
        assert_eq!(t.weights.values().cloned().collect::<Vec<_>>(), vec![q(1, 2); 3]);
    }

    #[test]
    fn small_cases() {
        let single = SetFamily::new(4, &[vec![1, 3]]).unwrap();
        assert_eq!(intersection_number(&single).unwrap().value, q(1, 1));
        let two = SetFamily::new(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(intersection_number(&two).unwrap().value, q(1, 2));
        let singletons = SetFamily::new(5, &(0..5).map(|i| vec![i]).collect::<Vec<_>>()).unwrap();
        assert_eq!(
            fractional_transversal(&singletons).unwrap().tau_star,
            Some(q(5, 1))
        );
    }

    #[test]
    fn empty_member_is_degenerate() {
        let f = SetFamily::new(2, &[vec![0], vec![]]).unwrap();
        let i = intersection_number(&f).unwrap();
        assert!(i.degenerate);
        assert_eq!(i.value, q(0, 1));
        assert_eq!(fractional_transversal(&f).unwrap().status, LpStatus::Infeasible);
        assert_eq!(min_transversal_exact(&f, 3), None);
    }

    #[test]
    fn exact_transversals() {
        assert_eq!(min_transversal_exact(&tri(), 3), Some((2, vec![0, 1])));
        let star = SetFamily::new(4, &[vec![0, 1], vec![0, 2], vec![0, 3]]).unwrap();
        assert_eq!(min_transversal_exact(&star, 3), Some((1, vec![0])));
        assert_eq!(min_transversal_exact(&tri(), 1), None);
        assert_eq!(min_transversal_exact(&tri(), 0), None);
    }

    #[test]
    fn atoms_merge_twins() {
        let f = SetFamily::new(5, &[vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let a = atoms(&f);
        assert_eq!(a.len(), 3);
        assert_eq!(a[1].elements, vec![1, 2]);
    }
}
