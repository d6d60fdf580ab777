//! Finite set systems and instance-level fractional Helly checks.
//!
//! A [`SetFamily`] is an ordered tuple of subsets of `{0, .., ground_size - 1}`.
//! Repeated members are allowed and counted separately: `cons_k` ranges over
//! k-element *index* subsets, so two copies of one set form a consistent pair.
//! Consistency of a finite subfamily always means a shared ground element.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::rational::{self, ratio, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    ground_size: usize,
    members: Vec<FixedBitSet>,
    labels: Option<Vec<String>>,
}

impl SetFamily {
    /// Builds a family from explicit element lists, rejecting out-of-range elements.
    pub fn new(ground_size: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let mut members = Vec::with_capacity(sets.len());
        for (i, set) in sets.iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(ground_size);
            for &e in set {
                if e >= ground_size {
                    return Err(Error::arg(format!(
                        "set {i}: element {e} outside ground set of size {ground_size}"
                    )));
                }
                bits.insert(e);
            }
            members.push(bits);
        }
        Ok(SetFamily {
            ground_size,
            members,
            labels: None,
        })
    }

    pub fn from_bitsets(ground_size: usize, members: Vec<FixedBitSet>) -> Result<Self> {
        let mut out = Vec::with_capacity(members.len());
        for (i, m) in members.iter().enumerate() {
            let mut bits = FixedBitSet::with_capacity(ground_size);
            for e in m.ones() {
                if e >= ground_size {
                    return Err(Error::arg(format!(
                        "set {i}: element {e} outside ground set of size {ground_size}"
                    )));
                }
                bits.insert(e);
            }
            out.push(bits);
        }
        Ok(SetFamily {
            ground_size,
            members: out,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.members.len() {
            return Err(Error::arg(format!(
                "{} labels for {} sets",
                labels.len(),
                self.members.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &FixedBitSet {
        &self.members[i]
    }

    pub fn members(&self) -> &[FixedBitSet] {
        &self.members
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn elements(&self, i: usize) -> Vec<usize> {
        self.members[i].ones().collect()
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        (0..self.len()).map(|i| self.elements(i)).collect()
    }

    /// Indices of empty members; each one makes every tuple containing it inconsistent.
    pub fn empty_members(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.members[i].is_clear())
            .collect()
    }

    /// Number of members containing each ground element.
    pub fn depths(&self) -> Vec<usize> {
        let mut d = vec![0usize; self.ground_size];
        for m in &self.members {
            for e in m.ones() {
                d[e] += 1;
            }
        }
        d
    }

    pub fn subfamily(&self, indices: &[usize]) -> Result<SetFamily> {
        let mut members = Vec::with_capacity(indices.len());
        let mut labels = self.labels.as_ref().map(|_| Vec::new());
        for &i in indices {
            let m = self
                .members
                .get(i)
                .ok_or_else(|| Error::arg(format!("index {i} out of range")))?;
            members.push(m.clone());
            if let (Some(out), Some(src)) = (labels.as_mut(), self.labels.as_ref()) {
                out.push(src[i].clone());
            }
        }
        Ok(SetFamily {
            ground_size: self.ground_size,
            members,
            labels,
        })
    }

    /// Repeats member `i` `counts[i]` times, in index order.
    pub fn replicate(&self, counts: &[usize]) -> Result<SetFamily> {
        if counts.len() != self.len() {
            return Err(Error::arg("one count per member required"));
        }
        let idx: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c))
            .collect();
        self.subfamily(&idx)
    }

    /// Whether the members at `indices` share a ground element.
    pub fn is_consistent(&self, indices: &[usize]) -> bool {
        let Some((&first, rest)) = indices.split_first() else {
            return true;
        };
        let mut acc = self.members[first].clone();
        for &i in rest {
            acc.intersect_with(&self.members[i]);
        }
        !acc.is_clear()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::arg(format!(
                "member index {i} out of range for family of {}",
                self.len()
            )))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConsReport {
    pub k: usize,
    pub cons_count: u128,
    pub total: u128,
    #[serde(with = "rational::json")]
    pub fraction: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectingWitness {
    pub size: usize,
    pub element: Option<usize>,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub empty_members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FhpReport {
    pub n: usize,
    pub k: usize,
    #[serde(with = "rational::json")]
    pub alpha: Q,
    pub cons: ConsReport,
    #[serde(with = "rational::json")]
    pub best_beta: Q,
    pub max_depth: usize,
    pub witness_element: Option<usize>,
    pub witness_indices: Vec<usize>,
    pub hypothesis_holds: bool,
    pub diagnostics: Diagnostics,
}

/// Counts k-element index subsets whose members share a ground element.
pub fn cons_k(family: &SetFamily, k: usize) -> Result<ConsReport> {
    let n = family.len();
    if k == 0 || k > n {
        return Err(Error::arg(format!("k = {k} must lie in 1..={n}")));
    }
    let mut scratch: Vec<FixedBitSet> = vec![FixedBitSet::with_capacity(family.ground_size); k];
    let count = count_consistent(family, k, 0, 0, &mut scratch);
    let total = binomial(n as u64, k as u64);
    Ok(ConsReport {
        k,
        cons_count: count,
        total,
        fraction: ratio(count, total),
    })
}

// Depth-first over increasing index subsets; an empty running intersection
// prunes the whole subtree.
fn count_consistent(
    family: &SetFamily,
    k: usize,
    depth: usize,
    start: usize,
    scratch: &mut [FixedBitSet],
) -> u128 {
    let n = family.len();
    let mut total = 0u128;
    for i in start..=(n - (k - depth)) {
        let member = &family.members[i];
        if depth == 0 {
            scratch[0].clone_from(member);
        } else {
            let (prev, cur) = scratch.split_at_mut(depth);
            cur[0].clone_from(&prev[depth - 1]);
            cur[0].intersect_with(member);
        }
        if scratch[depth].is_clear() {
            continue;
        }
        if depth + 1 == k {
            total += 1;
        } else {
            total += count_consistent(family, k, depth + 1, i + 1, scratch);
        }
    }
    total
}

/// Largest intersecting subfamily: the deepest ground element and every member containing it.
pub fn max_intersecting(family: &SetFamily) -> Result<IntersectingWitness> {
    if family.is_empty() {
        return Err(Error::arg("max_intersecting needs a nonempty family"));
    }
    let depths = family.depths();
    let mut best: Option<(usize, usize)> = None;
    for (e, &d) in depths.iter().enumerate() {
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((e, d));
        }
    }
    Ok(match best {
        None => IntersectingWitness {
            size: 0,
            element: None,
            indices: vec![],
        },
        Some((e, d)) => IntersectingWitness {
            size: d,
            element: Some(e),
            indices: (0..family.len())
                .filter(|&i| d > 0 && family.members[i].contains(e))
                .collect(),
        },
    })
}

pub fn check_fhp_instance(family: &SetFamily, k: usize, alpha: &Q) -> Result<FhpReport> {
    let cons = cons_k(family, k)?;
    let w = max_intersecting(family)?;
    let n = family.len();
    Ok(FhpReport {
        n,
        k,
        alpha: alpha.clone(),
        hypothesis_holds: cons.fraction >= *alpha,
        cons,
        best_beta: ratio(w.size as u128, n as u128),
        max_depth: w.size,
        witness_element: w.element,
        witness_indices: w.indices,
        diagnostics: Diagnostics {
            empty_members: family.empty_members(),
        },
    })
}

/// Which p-tuples the (p,k)-check ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleMode {
    /// Non-decreasing index tuples: a member may occur several times.
    WithRepetition,
    /// Strictly increasing index tuples.
    Distinct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PkReport {
    pub p: usize,
    pub k: usize,
    pub mode: TupleMode,
    pub holds: bool,
    pub counterexample: Option<Vec<usize>>,
    pub tuples_checked: u128,
}

/// Checks that every p-tuple of members contains k positions with a common element.
///
/// Tuples are visited in lexicographic order, so the reported counterexample is
/// the lexicographically first one.
pub fn check_pk_property(family: &SetFamily, p: usize, k: usize) -> Result<PkReport> {
    check_pk_property_mode(family, p, k, TupleMode::WithRepetition)
}

pub fn check_pk_property_mode(
    family: &SetFamily,
    p: usize,
    k: usize,
    mode: TupleMode,
) -> Result<PkReport> {
    if k == 0 || p < k {
        return Err(Error::arg(format!("need p >= k >= 1, got p = {p}, k = {k}")));
    }
    let mut search = PkSearch {
        family,
        p,
        k,
        mode,
        depth: vec![0; family.ground_size],
        hot: 0,
        tuple: Vec::with_capacity(p),
        checked: 0,
    };
    let counterexample = if family.is_empty() {
        None
    } else {
        search.run(0)
    };
    Ok(PkReport {
        p,
        k,
        mode,
        holds: counterexample.is_none(),
        counterexample,
        tuples_checked: search.checked,
    })
}

struct PkSearch<'a> {
    family: &'a SetFamily,
    p: usize,
    k: usize,
    mode: TupleMode,
    depth: Vec<usize>,
    // number of ground elements whose multiplicity-weighted depth reached k
    hot: usize,
    tuple: Vec<usize>,
    checked: u128,
}

impl PkSearch<'_> {
    fn completions(&self, last: usize) -> u128 {
        let n = self.family.len() as u64;
        let r = (self.p - self.tuple.len()) as u64;
        match self.mode {
            TupleMode::WithRepetition => binomial(n - last as u64 + r - 1, r),
            TupleMode::Distinct => binomial(n - last as u64 - 1, r),
        }
    }

    fn push(&mut self, i: usize) {
        self.tuple.push(i);
        for e in self.family.members[i].ones() {
            self.depth[e] += 1;
            if self.depth[e] == self.k {
                self.hot += 1;
            }
        }
    }

    fn pop(&mut self) {
        let i = self.tuple.pop().expect("nonempty tuple");
        for e in self.family.members[i].ones() {
            if self.depth[e] == self.k {
                self.hot -= 1;
            }
            self.depth[e] -= 1;
        }
    }

    fn run(&mut self, start: usize) -> Option<Vec<usize>> {
        let n = self.family.len();
        let remaining = self.p - self.tuple.len();
        let end = match self.mode {
            TupleMode::WithRepetition => n,
            TupleMode::Distinct => (n + 1).saturating_sub(remaining),
        };
        for i in start..end {
            self.push(i);
            if self.tuple.len() == self.p {
                self.checked += 1;
                if self.hot == 0 {
                    let found = self.tuple.clone();
                    self.pop();
                    return Some(found);
                }
            } else if self.hot > 0 {
                // every completion keeps the witness element
                self.checked += self.completions(i);
            } else {
                let next = match self.mode {
                    TupleMode::WithRepetition => i,
                    TupleMode::Distinct => i + 1,
                };
                if let Some(found) = self.run(next) {
                    self.pop();
                    return Some(found);
                }
            }
            self.pop();
        }
        None
    }
}

/// Largest intersecting sub-multiset of the sequence, divided by its length.
pub fn sequence_ratio(family: &SetFamily, sequence: &[usize]) -> Result<Q> {
    if sequence.is_empty() {
        return Err(Error::arg("sequence_ratio needs a nonempty sequence"));
    }
    let mut depth = vec![0usize; family.ground_size];
    for &i in sequence {
        family.check_index(i)?;
        for e in family.members[i].ones() {
            depth[e] += 1;
        }
    }
    let best = depth.into_iter().max().unwrap_or(0);
    Ok(ratio(best as u128, sequence.len() as u128))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorfulReport {
    pub d: usize,
    pub rainbow_count: u128,
    pub total: u128,
    #[serde(with = "rational::json")]
    pub fraction: Q,
    #[serde(with = "rational::json")]
    pub alpha: Q,
    pub hypothesis_holds: bool,
    #[serde(with = "rational::json_vec")]
    pub per_family_best_beta: Vec<Q>,
    #[serde(with = "rational::json")]
    pub best_beta: Q,
    pub best_family: usize,
    /// The convex-set colorful constant alpha/(d+1), kept for comparison.
    #[serde(with = "rational::json")]
    pub reference_beta: Q,
}

/// Counts rainbow d-tuples (one member from each family) with a common element.
pub fn colorful_check(families: &[SetFamily], alpha: &Q) -> Result<ColorfulReport> {
    let Some(first) = families.first() else {
        return Err(Error::arg("colorful_check needs at least one family"));
    };
    let ground = first.ground_size;
    for (i, f) in families.iter().enumerate() {
        if f.ground_size != ground {
            return Err(Error::arg(format!(
                "family {i} has ground size {}, expected {ground}",
                f.ground_size
            )));
        }
        if f.is_empty() {
            return Err(Error::arg(format!("family {i} is empty")));
        }
    }
    let d = families.len();
    let mut scratch = vec![FixedBitSet::with_capacity(ground); d];
    let count = count_rainbow(families, 0, &mut scratch);
    let total = families
        .iter()
        .try_fold(1u128, |acc, f| acc.checked_mul(f.len() as u128))
        .ok_or_else(|| Error::Overflow("rainbow tuple count".into()))?;
    let mut per_family = Vec::with_capacity(d);
    for f in families {
        let w = max_intersecting(f)?;
        per_family.push(ratio(w.size as u128, f.len() as u128));
    }
    let (best_family, best_beta) = per_family
        .iter()
        .enumerate()
        .fold((0, Q::zero()), |(bi, bv), (i, v)| {
            if *v > bv {
                (i, v.clone())
            } else {
                (bi, bv)
            }
        });
    let fraction = ratio(count, total);
    Ok(ColorfulReport {
        d,
        rainbow_count: count,
        total,
        hypothesis_holds: fraction >= *alpha,
        fraction,
        alpha: alpha.clone(),
        per_family_best_beta: per_family,
        best_beta,
        best_family,
        reference_beta: alpha / ratio(d as u128 + 1, 1),
    })
}

fn count_rainbow(families: &[SetFamily], level: usize, scratch: &mut [FixedBitSet]) -> u128 {
    let mut total = 0;
    for m in &families[level].members {
        if level == 0 {
            scratch[0].clone_from(m);
        } else {
            let (prev, cur) = scratch.split_at_mut(level);
            cur[0].clone_from(&prev[level - 1]);
            cur[0].intersect_with(m);
        }
        if scratch[level].is_clear() {
            continue;
        }
        total += if level + 1 == families.len() {
            1
        } else {
            count_rainbow(families, level + 1, scratch)
        };
    }
    total
}

/// A finitely supported probability measure on member indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalWeights {
    #[serde(with = "rational::json_map")]
    weights: BTreeMap<usize, Q>,
}

impl RationalWeights {
    pub fn new(weights: BTreeMap<usize, Q>) -> Result<Self> {
        if weights.values().any(|w| w.is_negative()) {
            return Err(Error::arg("weights must be non-negative"));
        }
        let sum: Q = weights.values().sum();
        if !sum.is_one() {
            return Err(Error::arg(format!(
                "weights sum to {}, expected 1",
                rational::render(&sum)
            )));
        }
        Ok(RationalWeights { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::arg("uniform weights over an empty index set"));
        }
        Self::new((0..n).map(|i| (i, ratio(1, n as u128))).collect())
    }

    pub fn point_mass(i: usize) -> Self {
        RationalWeights {
            weights: BTreeMap::from([(i, Q::one())]),
        }
    }

    pub fn get(&self, i: usize) -> Q {
        self.weights.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.weights
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(&i, w)| (i, w))
    }

    pub fn as_map(&self) -> &BTreeMap<usize, Q> {
        &self.weights
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub d: usize,
    #[serde(with = "rational::json")]
    pub alpha: Q,
    /// Product-measure mass of consistent ordered d-tuples, diagonal included.
    #[serde(with = "rational::json")]
    pub product_measure: Q,
    #[serde(with = "rational::json")]
    pub weighted_depth: Q,
    pub witness_element: Option<usize>,
    pub hypothesis_holds: bool,
}

pub fn measure_fhp_check(
    family: &SetFamily,
    weights: &RationalWeights,
    d: usize,
    alpha: &Q,
) -> Result<MeasureReport> {
    if d == 0 {
        return Err(Error::arg("d must be at least 1"));
    }
    for (i, _) in weights.support() {
        family.check_index(i)?;
    }
    let support: Vec<(usize, Q)> = weights.support().map(|(i, w)| (i, w.clone())).collect();
    let mut scratch = vec![FixedBitSet::with_capacity(family.ground_size); d];
    let product_measure = weighted_tuples(family, &support, d, 0, &Q::one(), &mut scratch);

    let mut depth = vec![Q::zero(); family.ground_size];
    for (i, w) in &support {
        for e in family.members[*i].ones() {
            depth[e] += w;
        }
    }
    let mut witness = None;
    let mut weighted_depth = Q::zero();
    for (e, v) in depth.into_iter().enumerate() {
        if witness.is_none() || v > weighted_depth {
            witness = Some(e);
            weighted_depth = v;
        }
    }
    Ok(MeasureReport {
        d,
        alpha: alpha.clone(),
        hypothesis_holds: product_measure >= *alpha,
        product_measure,
        weighted_depth,
        witness_element: witness,
    })
}

fn weighted_tuples(
    family: &SetFamily,
    support: &[(usize, Q)],
    d: usize,
    level: usize,
    mass: &Q,
    scratch: &mut [FixedBitSet],
) -> Q {
    let mut total = Q::zero();
    for (i, w) in support {
        let m = &family.members[*i];
        if level == 0 {
            scratch[0].clone_from(m);
        } else {
            let (prev, cur) = scratch.split_at_mut(level);
            cur[0].clone_from(&prev[level - 1]);
            cur[0].intersect_with(m);
        }
        if scratch[level].is_clear() {
            continue;
        }
        let next = mass * w;
        total += if level + 1 == d {
            next
        } else {
            weighted_tuples(family, support, d, level + 1, &next, scratch)
        };
    }
    total
}

/// Lower bound C(n,p)/C(n-k,p-k) on cons_k for any n-member family with the (p,k)-property.
pub fn wfhp_counting_bound(n: usize, p: usize, k: usize) -> Result<Q> {
    if !(k >= 1 && p >= k && n >= p) {
        return Err(Error::arg(format!(
            "need n >= p >= k >= 1, got n = {n}, p = {p}, k = {k}"
        )));
    }
    let num = binomial(n as u64, p as u64);
    let den = binomial((n - k) as u64, (p - k) as u64);
    Ok(ratio(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn tri() -> SetFamily {
        SetFamily::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn cons_on_triangle() {
        let r = cons_k(&tri(), 2).unwrap();
        assert_eq!((r.cons_count, r.total), (3, 3));
        assert_eq!(r.fraction, q(1, 1));
        assert_eq!(cons_k(&tri(), 3).unwrap().cons_count, 0);
        let rep = SetFamily::new(1, &[vec![0], vec![0]]).unwrap();
        assert_eq!(cons_k(&rep, 2).unwrap().cons_count, 1);
    }

    #[test]
    fn cons_argument_errors() {
        assert!(cons_k(&tri(), 0).is_err());
        assert!(cons_k(&tri(), 4).is_err());
    }

    #[test]
    fn max_intersecting_ties_break_low() {
        let w = max_intersecting(&tri()).unwrap();
        assert_eq!((w.size, w.element), (2, Some(0)));
        assert_eq!(w.indices, vec![0, 2]);
        let disjoint = SetFamily::new(3, &[vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(max_intersecting(&disjoint).unwrap().size, 1);
        let empty = SetFamily::new(3, &[]).unwrap();
        assert!(max_intersecting(&empty).is_err());
    }

    #[test]
    fn fhp_instance_on_triangle() {
        let r = check_fhp_instance(&tri(), 2, &q(1, 2)).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.best_beta, q(2, 3));
        let r0 = check_fhp_instance(&tri(), 3, &Q::zero()).unwrap();
        assert!(r0.hypothesis_holds);
    }

    #[test]
    fn pk_disjoint_pair() {
        let f = SetFamily::new(2, &[vec![0], vec![1]]).unwrap();
        let r = check_pk_property(&f, 2, 2).unwrap();
        assert!(!r.holds);
        assert_eq!(r.counterexample, Some(vec![0, 1]));
        assert!(check_pk_property(&f, 1, 2).is_err());
    }

    #[test]
    fn pk_counts_every_tuple() {
        let r = check_pk_property_mode(&tri(), 3, 2, TupleMode::Distinct).unwrap();
        assert!(r.holds);
        assert_eq!(r.tuples_checked, 1);
        let r = check_pk_property(&tri(), 3, 2).unwrap();
        assert_eq!(r.tuples_checked, binomial(5, 3));
    }

    #[test]
    fn pk_empty_member_fails_alone() {
        let f = SetFamily::new(2, &[vec![], vec![0]]).unwrap();
        let r = check_pk_property(&f, 2, 2).unwrap();
        assert_eq!(r.counterexample, Some(vec![0, 0]));
    }

    #[test]
    fn sequence_ratios() {
        assert_eq!(sequence_ratio(&tri(), &[0, 1, 2]).unwrap(), q(2, 3));
        let single = SetFamily::new(2, &[vec![1]]).unwrap();
        assert_eq!(sequence_ratio(&single, &[0; 5]).unwrap(), q(1, 1));
        let two = SetFamily::new(2, &[vec![0], vec![1]]).unwrap();
        assert_eq!(sequence_ratio(&two, &[0, 0, 1]).unwrap(), q(2, 3));
        assert!(sequence_ratio(&two, &[]).is_err());
        assert!(sequence_ratio(&two, &[2]).is_err());
    }

    #[test]
    fn colorful_triangle_pair() {
        // every ordered pair of triangle edges shares a vertex
        let r = colorful_check(&[tri(), tri()], &q(1, 2)).unwrap();
        assert_eq!((r.rainbow_count, r.total), (9, 9));
        assert_eq!(r.best_beta, q(2, 3));
        assert_eq!(r.reference_beta, q(1, 6));
        let one = colorful_check(&[tri()], &q(1, 2)).unwrap();
        let fhp = check_fhp_instance(&tri(), 1, &q(1, 2)).unwrap();
        assert_eq!(one.fraction, fhp.cons.fraction);
        assert_eq!(one.best_beta, fhp.best_beta);
        let other = SetFamily::new(4, &[vec![3]]).unwrap();
        assert!(colorful_check(&[tri(), other], &q(1, 2)).is_err());
    }

    #[test]
    fn measure_checks() {
        let r = measure_fhp_check(&tri(), &RationalWeights::uniform(3).unwrap(), 2, &q(1, 2))
            .unwrap();
        assert_eq!(r.product_measure, q(1, 1));
        assert_eq!(r.weighted_depth, q(2, 3));
        let two = SetFamily::new(2, &[vec![0], vec![1]]).unwrap();
        let r = measure_fhp_check(&two, &RationalWeights::uniform(2).unwrap(), 2, &q(1, 2))
            .unwrap();
        assert_eq!(r.product_measure, q(1, 2));
        assert_eq!(r.weighted_depth, q(1, 2));
        let r = measure_fhp_check(&tri(), &RationalWeights::point_mass(1), 4, &q(1, 1)).unwrap();
        assert_eq!((r.product_measure, r.weighted_depth), (q(1, 1), q(1, 1)));
        let bad = BTreeMap::from([(0, q(1, 2))]);
        assert!(RationalWeights::new(bad).is_err());
    }

    #[test]
    fn wfhp_bound_values() {
        assert_eq!(wfhp_counting_bound(12, 4, 2).unwrap(), q(11, 1));
        assert_eq!(
            wfhp_counting_bound(9, 3, 3).unwrap(),
            ratio(binomial(9, 3), 1)
        );
        assert!(wfhp_counting_bound(3, 4, 2).is_err());
    }

    #[test]
    fn labels_and_subfamilies() {
        let f = tri()
            .with_labels(vec!["a".into(), "b".into(), "c".into()])
            .unwrap();
        let s = f.subfamily(&[2, 0]).unwrap();
        assert_eq!(s.labels().unwrap(), &["c".to_string(), "a".to_string()]);
        assert_eq!(s.elements(0), vec![0, 2]);
        assert!(tri().with_labels(vec![]).is_err());
        assert!(SetFamily::new(3, &[vec![5]]).is_err());
    }
}
