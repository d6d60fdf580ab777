//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! All variables are non-negative. Duals are read off the final tableau from
//! the reduced costs of each row's identity column (its slack, or its
//! artificial for `>=`/`=` rows), so complementary slackness holds exactly.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "rational::json_vec")]
    pub coeffs: Vec<Q>,
    pub relation: Relation,
    #[serde(with = "rational::json")]
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub sense: Sense,
    #[serde(with = "rational::json_vec")]
    pub objective: Vec<Q>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<Q>) -> Self {
        LpProblem {
            sense,
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn constrain(&mut self, coeffs: Vec<Q>, relation: Relation, rhs: Q) -> &mut Self {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != n {
                return Err(Error::arg(format!(
                    "constraint {i} has {} coefficients, expected {n}",
                    c.coeffs.len()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    #[serde(with = "rational::json_opt")]
    pub value: Option<Q>,
    #[serde(with = "rational::json_vec")]
    pub primal: Vec<Q>,
    /// One multiplier per constraint, signed for the problem's own sense.
    #[serde(with = "rational::json_vec")]
    pub dual: Vec<Q>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        LpSolution {
            status,
            value: None,
            primal: Vec::new(),
            dual: Vec::new(),
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    // reduced costs; the last entry holds minus the objective value
    obj: Vec<Q>,
    basis: Vec<usize>,
    // columns that may never enter (artificials in phase two)
    blocked: Vec<bool>,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.obj.len() - 1
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for v in self.rows[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, p) in r.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        if !self.obj[col].is_zero() {
            let f = self.obj[col].clone();
            for (v, p) in self.obj.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Runs Bland's rule to optimality. Returns false when unbounded.
    fn optimize(&mut self) -> bool {
        let rhs = self.rhs();
        loop {
            let entering = (0..rhs).find(|&j| !self.blocked[j] && self.obj[j].is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for (i, r) in self.rows.iter().enumerate() {
                if !r[col].is_positive() {
                    continue;
                }
                let ratio = &r[rhs] / &r[col];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, costs: &[Q]) {
        let rhs = self.rhs();
        for j in 0..=rhs {
            let c = if j < rhs { costs[j].clone() } else { Q::zero() };
            let mut acc = c;
            for (i, r) in self.rows.iter().enumerate() {
                let cb = &costs[self.basis[i]];
                if !cb.is_zero() && !r[j].is_zero() {
                    acc -= cb * &r[j];
                }
            }
            self.obj[j] = acc;
        }
    }
}

/// Solves the problem exactly. Infeasibility and unboundedness are statuses, not errors.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    problem.validate()?;
    let n = problem.num_vars();
    let m = problem.constraints.len();

    // rows with negative right-hand side are negated so that b >= 0
    let mut flipped = vec![false; m];
    let mut rels = Vec::with_capacity(m);
    for (i, c) in problem.constraints.iter().enumerate() {
        let rel = if c.rhs.is_negative() {
            flipped[i] = true;
            match c.relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            }
        } else {
            c.relation
        };
        rels.push(rel);
    }

    let n_slack = rels.iter().filter(|r| **r != Relation::Eq).count();
    let n_art = rels.iter().filter(|r| **r != Relation::Le).count();
    let ncols = n + n_slack + n_art;
    let mut rows = vec![vec![Q::zero(); ncols + 1]; m];
    let mut identity_col = vec![0usize; m];
    let mut is_art = vec![false; ncols];
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (i, c) in problem.constraints.iter().enumerate() {
        let sign = if flipped[i] { -Q::from_integer(1.into()) } else { Q::from_integer(1.into()) };
        for (j, a) in c.coeffs.iter().enumerate() {
            rows[i][j] = a * &sign;
        }
        rows[i][ncols] = &c.rhs * &sign;
        match rels[i] {
            Relation::Le => {
                rows[i][next_slack] = Q::from_integer(1.into());
                identity_col[i] = next_slack;
                next_slack += 1;
            }
            Relation::Ge => {
                rows[i][next_slack] = Q::from_integer((-1).into());
                next_slack += 1;
                rows[i][next_art] = Q::from_integer(1.into());
                identity_col[i] = next_art;
                is_art[next_art] = true;
                next_art += 1;
            }
            Relation::Eq => {
                rows[i][next_art] = Q::from_integer(1.into());
                identity_col[i] = next_art;
                is_art[next_art] = true;
                next_art += 1;
            }
        }
    }

    let mut t = Tableau {
        rows,
        obj: vec![Q::zero(); ncols + 1],
        basis: identity_col.clone(),
        blocked: vec![false; ncols],
    };

    if n_art > 0 {
        let phase1: Vec<Q> = (0..ncols)
            .map(|j| {
                if is_art[j] {
                    Q::from_integer((-1).into())
                } else {
                    Q::zero()
                }
            })
            .collect();
        t.set_costs(&phase1);
        t.optimize();
        if t.obj[ncols].is_positive() {
            return Ok(LpSolution::without_optimum(LpStatus::Infeasible));
        }
        // pivot zero-level artificials out of the basis where possible
        for i in 0..m {
            if is_art[t.basis[i]] {
                if let Some(j) = (0..ncols).find(|&j| !is_art[j] && !t.rows[i][j].is_zero()) {
                    t.pivot(i, j);
                }
            }
        }
        t.blocked = is_art.clone();
    }

    let mut costs = vec![Q::zero(); ncols];
    for (j, c) in problem.objective.iter().enumerate() {
        costs[j] = match problem.sense {
            Sense::Maximize => c.clone(),
            Sense::Minimize => -c,
        };
    }
    t.set_costs(&costs);
    if !t.optimize() {
        return Ok(LpSolution::without_optimum(LpStatus::Unbounded));
    }

    let mut primal = vec![Q::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            primal[b] = t.rows[i][ncols].clone();
        }
    }
    let value: Q = problem
        .objective
        .iter()
        .zip(&primal)
        .map(|(c, x)| c * x)
        .sum();
    let dual = (0..m)
        .map(|i| {
            let mut y = -t.obj[identity_col[i]].clone();
            if flipped[i] {
                y = -y;
            }
            if problem.sense == Sense::Minimize {
                y = -y;
            }
            y
        })
        .collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        value: Some(value),
        primal,
        dual,
    })
}

/// Exact optimality certificate: primal and dual feasibility, equal objective
/// values, and complementary slackness.
pub fn certifies_optimality(problem: &LpProblem, sol: &LpSolution) -> bool {
    if sol.status != LpStatus::Optimal {
        return false;
    }
    let n = problem.num_vars();
    if sol.primal.len() != n || sol.dual.len() != problem.constraints.len() {
        return false;
    }
    if sol.primal.iter().any(|x| x.is_negative()) {
        return false;
    }
    let max = problem.sense == Sense::Maximize;
    for (c, y) in problem.constraints.iter().zip(&sol.dual) {
        let lhs: Q = c.coeffs.iter().zip(&sol.primal).map(|(a, x)| a * x).sum();
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Ge => lhs >= c.rhs,
            Relation::Eq => lhs == c.rhs,
        };
        if !ok {
            return false;
        }
        // sign of the multiplier
        let sign_ok = match (c.relation, max) {
            (Relation::Eq, _) => true,
            (Relation::Le, true) | (Relation::Ge, false) => !y.is_negative(),
            (Relation::Ge, true) | (Relation::Le, false) => !y.is_positive(),
        };
        if !sign_ok || (!y.is_zero() && lhs != c.rhs) {
            return false;
        }
    }
    for j in 0..n {
        let col: Q = problem
            .constraints
            .iter()
            .zip(&sol.dual)
            .map(|(c, y)| &c.coeffs[j] * y)
            .sum();
        let c = &problem.objective[j];
        let feasible = if max { col >= *c } else { col <= *c };
        if !feasible || (!sol.primal[j].is_zero() && col != *c) {
            return false;
        }
    }
    let dual_value: Q = problem
        .constraints
        .iter()
        .zip(&sol.dual)
        .map(|(c, y)| &c.rhs * y)
        .sum();
    sol.value.as_ref() == Some(&dual_value)
}
