//! Internal (phi, Delta, n, k)-dividing: a Delta-indiscernible sequence of
//! parameters inside a domain B, starting at an instance of a type, whose
//! instances are k-inconsistent.

use serde::{Deserialize, Serialize};

use super::{FiniteStructure, Instances, PositiveType, TypeQuery};
use crate::combin::Colex;
use crate::error::{Error, Result};
use crate::formula::{eval_at, Formula};

pub const MAX_SEQUENCE: usize = 6;
pub const NODE_BUDGET: u64 = 2_000_000;

/// A formula delta(y_1, .., y_r; c) whose blocks `seq_blocks` take sequence
/// terms (each block as long as the parameter tuple) and whose `param_vars`
/// range over C.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaFormula {
    pub formula: Formula,
    pub seq_blocks: Vec<Vec<String>>,
    #[serde(default)]
    pub param_vars: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DividingStatus {
    Divides,
    DoesNotDivide,
    /// The node budget ran out before the search space was exhausted.
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DividingReport {
    pub status: DividingStatus,
    pub instance: Option<Vec<u64>>,
    pub sequence: Vec<Vec<u64>>,
    pub nodes: u64,
}

// Every (delta, c) pair, flattened with the variables bound in order.
struct Test<'a> {
    formula: &'a Formula,
    vars: Vec<String>,
    blocks: usize,
    c: Vec<u64>,
}

fn tests<'a>(delta: &'a [DeltaFormula], c_set: &[u64], arity: usize) -> Result<Vec<Test<'a>>> {
    let mut out = Vec::new();
    for (i, d) in delta.iter().enumerate() {
        if d.seq_blocks.is_empty() || d.seq_blocks.iter().any(|b| b.len() != arity) {
            return Err(Error::arg(format!(
                "delta {i}: each sequence block needs {arity} variables"
            )));
        }
        let mut vars: Vec<String> = d.seq_blocks.concat();
        vars.extend(d.param_vars.iter().cloned());
        for v in d.formula.free_vars() {
            if !vars.contains(&v) {
                return Err(Error::Formula(format!("unbound variable {v} in delta {i}")));
            }
        }
        let slots = d.param_vars.len();
        let combos = (c_set.len() as u64).pow(slots as u32);
        if slots > 0 && c_set.is_empty() {
            continue;
        }
        for j in 0..combos {
            let mut rest = j;
            let mut c = vec![0; slots];
            for s in c.iter_mut().rev() {
                *s = c_set[(rest % c_set.len() as u64) as usize];
                rest /= c_set.len() as u64;
            }
            out.push(Test {
                formula: &d.formula,
                vars: vars.clone(),
                blocks: d.seq_blocks.len(),
                c,
            });
        }
    }
    Ok(out)
}

impl Test<'_> {
    fn eval(&self, s: &FiniteStructure, seq: &[Vec<u64>], idx: &[usize]) -> Result<bool> {
        let mut vals: Vec<u64> = idx.iter().flat_map(|&i| seq[i].iter().copied()).collect();
        vals.extend(&self.c);
        eval_at(s, self.formula, &self.vars, &vals)
    }
}

struct Search<'a> {
    s: &'a FiniteStructure,
    inst: &'a Instances,
    tests: &'a [Test<'a>],
    n: usize,
    k: usize,
    nodes: u64,
    budget: u64,
    seq: Vec<Vec<u64>>,
    ids: Vec<usize>,
}

impl Search<'_> {
    fn consistent_with_last(&self) -> Result<bool> {
        let j = self.seq.len() - 1;
        // k-subsets that contain the newest term must have no common witness
        if j + 1 >= self.k {
            for sub in Colex::new(j, self.k - 1) {
                let mut ids: Vec<usize> = sub.iter().map(|&i| self.ids[i]).collect();
                ids.push(self.ids[j]);
                if !self.inst.common(&ids).is_clear() {
                    return Ok(false);
                }
            }
        }
        // increasing tuples ending at j agree with the first such tuple
        for t in self.tests {
            let r = t.blocks;
            if j + 1 < r {
                continue;
            }
            let reference: Vec<usize> = (0..r).collect();
            let want = t.eval(self.s, &self.seq, &reference)?;
            for sub in Colex::new(j, r - 1) {
                let mut idx = sub;
                idx.push(j);
                if t.eval(self.s, &self.seq, &idx)? != want {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn extend(&mut self) -> Result<Option<bool>> {
        if self.seq.len() == self.n {
            return Ok(Some(true));
        }
        for id in 0..self.inst.len() {
            let b = self.inst.params[id].clone();
            self.nodes += 1;
            if self.nodes > self.budget {
                return Ok(None);
            }
            self.seq.push(b);
            self.ids.push(id);
            if self.consistent_with_last()? {
                match self.extend()? {
                    Some(true) => return Ok(Some(true)),
                    None => return Ok(None),
                    Some(false) => {}
                }
            }
            self.seq.pop();
            self.ids.pop();
        }
        Ok(Some(false))
    }
}

/// Searches for an instance phi(x, b) of `p` and a Delta-indiscernible
/// sequence over C of length n in B^|y| starting at b whose instances are
/// k-inconsistent.
#[allow(clippy::too_many_arguments)]
pub fn internal_dividing_check(
    s: &FiniteStructure,
    query: &TypeQuery,
    p: &PositiveType,
    domain: &[u64],
    c_set: &[u64],
    delta: &[DeltaFormula],
    n: usize,
    k: usize,
    budget: u64,
) -> Result<DividingReport> {
    if n > MAX_SEQUENCE {
        return Err(Error::Cap {
            what: "sequence length".into(),
            needed: n as u128,
            cap: MAX_SEQUENCE as u128,
        });
    }
    if k < 2 || n < k {
        return Err(Error::arg("need 2 <= k <= n"));
    }
    if let Some(c) = c_set.iter().find(|c| !domain.contains(c)) {
        return Err(Error::arg(format!("C must lie inside B; {c} does not")));
    }
    let inst = Instances::build(s, query, domain)?;
    let tests = tests(delta, c_set, query.y_vars.len())?;
    let mut nodes = 0;
    for b in &p.instances {
        let Some(start) = inst.params.iter().position(|x| x == b) else {
            continue;
        };
        let mut search = Search {
            s,
            inst: &inst,
            tests: &tests,
            n,
            k,
            nodes: 0,
            budget: budget.saturating_sub(nodes),
            seq: vec![b.clone()],
            ids: vec![start],
        };
        let outcome = search.extend()?;
        nodes += search.nodes;
        match outcome {
            Some(true) => {
                return Ok(DividingReport {
                    status: DividingStatus::Divides,
                    instance: Some(b.clone()),
                    sequence: search.seq,
                    nodes,
                })
            }
            None => {
                return Ok(DividingReport {
                    status: DividingStatus::Indeterminate,
                    instance: None,
                    sequence: Vec::new(),
                    nodes,
                })
            }
            Some(false) => {}
        }
    }
    Ok(DividingReport {
        status: DividingStatus::DoesNotDivide,
        instance: None,
        sequence: Vec::new(),
        nodes,
    })
}
