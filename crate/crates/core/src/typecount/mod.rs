//! Positive phi-types over finite parameter sets in a finite ambient
//! structure, the counting function f_phi(m, k, l), internal dividing checks,
//! complete k-partite subhypergraph search and power-saving probes.
//!
//! Consistency always means a common witness in the given finite structure,
//! which only approximates consistency in a saturated model.

pub mod clique;
pub mod dividing;
pub mod hyper;

use std::collections::BTreeMap;
use std::thread;

use fixedbitset::FixedBitSet;
use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::combin::{binomial, rng, Colex};
use crate::error::{Error, Result};
use crate::formula::{eval_at, Formula, Interpretation};
use crate::setfam::SetFamily;
use crate::vc::{log_log_slope, SearchMode};
use clique::{max_clique, Graph};

pub const AMBIENT_CAVEAT: &str =
    "consistency is satisfiability in the given finite structure, not in a saturated model";
/// Largest universe^|x| for which witness sets are tabulated.
pub const WITNESS_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub arity: usize,
    pub table: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawStructure", into = "RawStructure")]
pub struct FiniteStructure {
    size: u64,
    relations: BTreeMap<String, Table>,
    functions: BTreeMap<String, Table>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct RawStructure {
    size: u64,
    #[serde(default)]
    relations: BTreeMap<String, Table>,
    #[serde(default)]
    functions: BTreeMap<String, Table>,
}

impl TryFrom<RawStructure> for FiniteStructure {
    type Error = Error;

    fn try_from(raw: RawStructure) -> Result<Self> {
        FiniteStructure::new(raw.size, raw.relations, raw.functions)
    }
}

impl From<FiniteStructure> for RawStructure {
    fn from(s: FiniteStructure) -> Self {
        RawStructure {
            size: s.size,
            relations: s.relations,
            functions: s.functions,
        }
    }
}

impl FiniteStructure {
    pub fn new(
        size: u64,
        relations: BTreeMap<String, Table>,
        functions: BTreeMap<String, Table>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::arg("universe must be nonempty"));
        }
        for (kind, tables, bound) in [("relation", &relations, 2), ("function", &functions, size)] {
            for (name, t) in tables {
                let expected = size
                    .checked_pow(t.arity as u32)
                    .filter(|&n| n <= WITNESS_CAP)
                    .ok_or_else(|| Error::arg(format!("{kind} {name}: table too large")))?;
                if t.table.len() as u64 != expected {
                    return Err(Error::arg(format!(
                        "{kind} {name}: table has {} entries, expected {expected}",
                        t.table.len()
                    )));
                }
                if let Some(pos) = t.table.iter().position(|&v| v >= bound) {
                    return Err(Error::arg(format!(
                        "{kind} {name}: entry {pos} is out of range"
                    )));
                }
            }
        }
        Ok(FiniteStructure {
            size,
            relations,
            functions,
        })
    }

    /// Universe {0..n-1} with equality only.
    pub fn pure_set(n: u64) -> Result<Self> {
        Self::new(n, BTreeMap::new(), BTreeMap::new())
    }

    /// A symmetric binary relation E on {0..n-1}.
    pub fn graph(n: u64, edges: &[(u64, u64)]) -> Result<Self> {
        let mut table = vec![0; (n * n) as usize];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::arg(format!("edge ({a},{b}) leaves the universe")));
            }
            table[(a * n + b) as usize] = 1;
            table[(b * n + a) as usize] = 1;
        }
        Self::new(n, BTreeMap::from([("E".into(), Table { arity: 2, table })]), BTreeMap::new())
    }

    /// Universe = ground points followed by one element per member; E(x, y)
    /// holds when point x lies in member y. Returns the member elements as the
    /// natural parameter pool.
    pub fn from_family(family: &SetFamily) -> Result<(Self, Vec<u64>)> {
        let g = family.ground_size() as u64;
        let n = g + family.len() as u64;
        let mut table = vec![0; (n * n) as usize];
        for i in 0..family.len() {
            for x in family.member(i).ones() {
                table[(x as u64 * n + g + i as u64) as usize] = 1;
            }
        }
        let s = Self::new(n, BTreeMap::from([("E".into(), Table { arity: 2, table })]), BTreeMap::new())?;
        Ok((s, (g..n).collect()))
    }

    fn lookup(&self, t: &Table, args: &[u64], what: &str) -> Result<u64> {
        if args.len() != t.arity {
            return Err(Error::Formula(format!(
                "{what} takes {} arguments, got {}",
                t.arity,
                args.len()
            )));
        }
        Ok(t.table[args.iter().fold(0, |acc, &a| acc * self.size + a) as usize])
    }
}

impl Interpretation for FiniteStructure {
    fn size(&self) -> u64 {
        self.size
    }

    fn function(&self, name: &str, args: &[u64]) -> Result<u64> {
        let t = self
            .functions
            .get(name)
            .ok_or_else(|| Error::Formula(format!("unknown function {name}")))?;
        self.lookup(t, args, name)
    }

    fn relation(&self, name: &str, args: &[u64]) -> Result<bool> {
        let t = self
            .relations
            .get(name)
            .ok_or_else(|| Error::Formula(format!("unknown relation {name}")))?;
        Ok(self.lookup(t, args, name)? == 1)
    }
}

/// phi(x; y) with object variables `x_vars` and parameter variables `y_vars`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeQuery {
    pub phi: Formula,
    pub x_vars: Vec<String>,
    pub y_vars: Vec<String>,
}

impl TypeQuery {
    pub fn new(phi: Formula, x_vars: &[&str], y_vars: &[&str]) -> Self {
        TypeQuery {
            phi,
            x_vars: x_vars.iter().map(|s| s.to_string()).collect(),
            y_vars: y_vars.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.y_vars.is_empty() {
            return Err(Error::arg("phi needs at least one parameter variable"));
        }
        for v in self.phi.free_vars() {
            if !self.x_vars.contains(&v) && !self.y_vars.contains(&v) {
                return Err(Error::Formula(format!("unbound variable {v}")));
            }
        }
        Ok(())
    }
}

/// The instances phi(x, b) for b in A^|y|, with their witness sets.
#[derive(Clone, Debug)]
pub struct Instances {
    pub params: Vec<Vec<u64>>,
    pub witnesses: Vec<FixedBitSet>,
    x_arity: usize,
    size: u64,
}

fn decode(mut i: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for s in out.iter_mut().rev() {
        *s = i % base;
        i /= base;
    }
    out
}

impl Instances {
    pub fn build(s: &FiniteStructure, query: &TypeQuery, a: &[u64]) -> Result<Self> {
        query.validate()?;
        if let Some(bad) = a.iter().find(|&&e| e >= s.size) {
            return Err(Error::arg(format!("parameter {bad} is not a universe element")));
        }
        let xs = query.x_vars.len();
        let points = s
            .size
            .checked_pow(xs as u32)
            .filter(|&n| n <= WITNESS_CAP)
            .ok_or_else(|| Error::Cap {
                what: "witness tuples".into(),
                needed: (s.size as u128).saturating_pow(xs as u32),
                cap: WITNESS_CAP as u128,
            })?;
        let ys = query.y_vars.len();
        let count = (a.len() as u64).pow(ys as u32);
        let mut vars = query.x_vars.clone();
        vars.extend(query.y_vars.iter().cloned());
        let mut params = Vec::with_capacity(count as usize);
        let mut witnesses = Vec::with_capacity(count as usize);
        let mut vals = vec![0; xs + ys];
        for j in 0..count {
            let b: Vec<u64> = decode(j, a.len() as u64, ys)
                .into_iter()
                .map(|i| a[i as usize])
                .collect();
            vals[xs..].copy_from_slice(&b);
            let mut w = FixedBitSet::with_capacity(points as usize);
            for x in 0..points {
                vals[..xs].copy_from_slice(&decode(x, s.size, xs));
                if eval_at(s, &query.phi, &vars, &vals)? {
                    w.insert(x as usize);
                }
            }
            params.push(b);
            witnesses.push(w);
        }
        Ok(Instances {
            params,
            witnesses,
            x_arity: xs,
            size: s.size,
        })
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    /// Common witnesses of the instances at `ids`; every tuple when `ids` is empty.
    pub fn common(&self, ids: &[usize]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.size.pow(self.x_arity as u32) as usize);
        acc.insert_range(..);
        for &i in ids {
            acc.intersect_with(&self.witnesses[i]);
        }
        acc
    }
}

/// A consistent set of at most k instances of phi.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositiveType {
    pub instances: Vec<Vec<u64>>,
    pub witnesses: Vec<Vec<u64>>,
    #[serde(skip)]
    instance_witnesses: Vec<FixedBitSet>,
}

impl PositiveType {
    fn from_ids(inst: &Instances, ids: &[usize], common: &FixedBitSet) -> Self {
        PositiveType {
            instances: ids.iter().map(|&i| inst.params[i].clone()).collect(),
            witnesses: common
                .ones()
                .map(|w| decode(w as u64, inst.size, inst.x_arity))
                .collect(),
            instance_witnesses: ids.iter().map(|&i| inst.witnesses[i].clone()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }
}

/// All nonempty consistent sets of at most k instances over A, in
/// lexicographic order of instance indices.
pub fn enumerate_types(
    s: &FiniteStructure,
    query: &TypeQuery,
    a: &[u64],
    k: usize,
    cap: usize,
) -> Result<Vec<PositiveType>> {
    if k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    let inst = Instances::build(s, query, a)?;
    enumerate_from(&inst, k, cap)
}

fn enumerate_from(inst: &Instances, k: usize, cap: usize) -> Result<Vec<PositiveType>> {
    let mut out = Vec::new();
    let mut ids = Vec::new();
    let all = inst.common(&[]);
    extend_types(inst, k, 0, &all, &mut ids, &mut out, cap)?;
    Ok(out)
}

fn extend_types(
    inst: &Instances,
    k: usize,
    start: usize,
    common: &FixedBitSet,
    ids: &mut Vec<usize>,
    out: &mut Vec<PositiveType>,
    cap: usize,
) -> Result<()> {
    for i in start..inst.len() {
        let mut next = common.clone();
        next.intersect_with(&inst.witnesses[i]);
        if next.is_clear() {
            continue;
        }
        ids.push(i);
        if out.len() == cap {
            return Err(Error::Cap {
                what: format!("positive types (partial count {})", out.len()),
                needed: out.len() as u128 + 1,
                cap: cap as u128,
            });
        }
        out.push(PositiveType::from_ids(inst, ids, &next));
        if ids.len() < k {
            extend_types(inst, k, i + 1, &next, ids, out, cap)?;
        }
        ids.pop();
    }
    Ok(())
}

/// Some p0 in p, q0 in q of size at most m have no common witness.
pub fn m_inconsistent(p: &PositiveType, q: &PositiveType, m: usize) -> bool {
    // larger subsets only shrink the common witness set
    let a = m.min(p.len());
    let b = m.min(q.len());
    let width = p
        .instance_witnesses
        .first()
        .or(q.instance_witnesses.first())
        .map_or(0, FixedBitSet::len);
    for sp in Colex::new(p.len(), a) {
        let mut base = FixedBitSet::with_capacity(width);
        base.insert_range(..);
        for &i in &sp {
            base.intersect_with(&p.instance_witnesses[i]);
        }
        for sq in Colex::new(q.len(), b) {
            let mut acc = base.clone();
            for &j in &sq {
                acc.intersect_with(&q.instance_witnesses[j]);
            }
            if acc.is_clear() {
                return true;
            }
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountOptions {
    pub type_cap: usize,
    /// Parameter subsets enumerated exhaustively up to this many.
    pub subset_cap: u128,
    pub samples: usize,
    pub clique_budget: u64,
    pub seed: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            type_cap: 20_000,
            subset_cap: 5_000,
            samples: 500,
            clique_budget: 2_000_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub value: usize,
    /// Exhaustive over parameter sets and every clique search finished.
    pub exact: bool,
    pub greedy_lower: usize,
    pub mode: SearchMode,
    pub subsets_examined: usize,
    pub parameters: Vec<u64>,
    pub witness_family: Vec<PositiveType>,
    pub caveat: String,
}

struct SubsetOutcome {
    value: usize,
    greedy: usize,
    exact: bool,
    family: Vec<PositiveType>,
}

fn best_family(
    s: &FiniteStructure,
    query: &TypeQuery,
    a: &[u64],
    m: usize,
    k: usize,
    opts: &CountOptions,
) -> Result<SubsetOutcome> {
    let inst = Instances::build(s, query, a)?;
    let types = enumerate_from(&inst, k, opts.type_cap)?;
    let mut g = Graph::new(types.len());
    for i in 0..types.len() {
        for j in i + 1..types.len() {
            if m_inconsistent(&types[i], &types[j], m) {
                g.add_edge(i, j);
            }
        }
    }
    let res = max_clique(&g, opts.clique_budget);
    Ok(SubsetOutcome {
        value: res.clique.len(),
        greedy: res.greedy.len(),
        exact: res.exact,
        family: res.clique.iter().map(|&i| types[i].clone()).collect(),
    })
}

/// Largest pairwise m-inconsistent family of types of size at most k over a
/// parameter set of size l drawn from `pool`.
pub fn f_phi(
    s: &FiniteStructure,
    query: &TypeQuery,
    m: usize,
    k: usize,
    pool: &[u64],
    l: usize,
    opts: &CountOptions,
) -> Result<CountReport> {
    if m == 0 || k == 0 {
        return Err(Error::arg("m and k must be at least 1"));
    }
    if l > pool.len() {
        return Err(Error::arg(format!(
            "l = {l} exceeds the parameter pool size {}",
            pool.len()
        )));
    }
    let total = binomial(pool.len() as u64, l as u64);
    let (mode, subsets): (SearchMode, Vec<Vec<u64>>) = if total <= opts.subset_cap {
        (
            SearchMode::Exhaustive,
            Colex::new(pool.len(), l)
                .map(|c| c.iter().map(|&i| pool[i]).collect())
                .collect(),
        )
    } else {
        let mut r = rng(opts.seed);
        (
            SearchMode::Sampled,
            (0..opts.samples)
                .map(|_| {
                    let mut idx = index::sample(&mut r, pool.len(), l).into_vec();
                    idx.sort_unstable();
                    idx.into_iter().map(|i| pool[i]).collect()
                })
                .collect(),
        )
    };
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let chunk = subsets.len().div_ceil(workers).max(1);
    let outcomes: Vec<SubsetOutcome> = thread::scope(|sc| {
        let handles: Vec<_> = subsets
            .chunks(chunk)
            .map(|part| {
                sc.spawn(move || {
                    part.iter()
                        .map(|a| best_family(s, query, a, m, k, opts))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("type counting worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();

    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value > outcomes[best].value {
            best = i;
        }
    }
    let exact = mode == SearchMode::Exhaustive && outcomes.iter().all(|o| o.exact);
    let greedy_lower = outcomes.iter().map(|o| o.greedy).max().unwrap_or(0);
    let (value, parameters, family) = match outcomes.into_iter().nth(best) {
        Some(o) => (o.value, subsets[best].clone(), o.family),
        None => (0, Vec::new(), Vec::new()),
    };
    Ok(CountReport {
        m,
        k,
        l,
        value,
        exact,
        greedy_lower,
        mode,
        subsets_examined: subsets.len(),
        parameters,
        witness_family: family,
        caveat: AMBIENT_CAVEAT.into(),
    })
}

/// sum_{i=1..k} C(n, i): the number of nonempty instance sets of size at most k.
pub fn type_count_bound(instances: u64, k: usize) -> u128 {
    (1..=k as u64).map(|i| binomial(instances, i)).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbePoint {
    pub l: usize,
    pub value: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerSavingReport {
    pub k: usize,
    pub d: usize,
    pub points: Vec<ProbePoint>,
    /// Least-squares log-log slope; an estimate, not a bound.
    pub exponent_estimate: Option<f64>,
    pub threshold: f64,
    pub below_threshold: Option<bool>,
    pub caveat: String,
}

/// Fits the growth exponent of f_phi(m, k, l) in l and compares it with the
/// Zarankiewicz exponent k - 1/d^(k-1).
#[allow(clippy::too_many_arguments)]
pub fn power_saving_probe(
    s: &FiniteStructure,
    query: &TypeQuery,
    m: usize,
    k: usize,
    pool: &[u64],
    l_values: &[usize],
    d: usize,
    opts: &CountOptions,
) -> Result<PowerSavingReport> {
    if l_values.len() < 3 {
        return Err(Error::arg("power_saving_probe needs at least 3 values of l"));
    }
    if l_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::arg("l values must be strictly increasing"));
    }
    if d == 0 {
        return Err(Error::arg("d must be at least 1"));
    }
    let mut points = Vec::with_capacity(l_values.len());
    for &l in l_values {
        let r = f_phi(s, query, m, k, pool, l, opts)?;
        points.push(ProbePoint {
            l,
            value: r.value,
            exact: r.exact,
        });
    }
    let fit: Vec<(f64, f64)> = points.iter().map(|p| (p.l as f64, p.value as f64)).collect();
    let exponent_estimate = log_log_slope(&fit);
    let threshold = k as f64 - 1.0 / (d as f64).powi(k as i32 - 1);
    Ok(PowerSavingReport {
        k,
        d,
        points,
        below_threshold: exponent_estimate.map(|e| e <= threshold),
        exponent_estimate,
        threshold,
        caveat: format!("log-log regression estimate; {AMBIENT_CAVEAT}"),
    })
}
