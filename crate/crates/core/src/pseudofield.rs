//! Definable families over prime fields F_p: point counts, Lang-Weil style
//! (dimension, measure) fits, and fractional Helly experiments.

use std::thread;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{eval_at, Formula, Interpretation};
use crate::rational::{self, ratio, Q};
use crate::setfam::{check_fhp_instance, colorful_check, measure_fhp_check, ColorfulReport, FhpReport, MeasureReport, RationalWeights, SetFamily};
use crate::sqfint::is_prime;

pub const MAX_PRIME: u64 = 61;
pub const MAX_DIM: usize = 3;
/// Largest denominator accepted for a fitted measure.
pub const MU_DENOMINATOR_CAP: u64 = 4;

/// F_p with explicit operation tables.
#[derive(Clone, Debug)]
pub struct PrimeField {
    p: u64,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_cap(p, MAX_PRIME)
    }

    /// Builds the tables and verifies the field axioms exhaustively.
    pub fn with_cap(p: u64, cap: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::arg(format!("{p} is not prime")));
        }
        if p > cap {
            return Err(Error::Cap {
                what: "field characteristic".into(),
                needed: p as u128,
                cap: cap as u128,
            });
        }
        let n = p as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u32;
                mul[a * n + b] = (a * b % n) as u32;
            }
        }
        let field = PrimeField { p, add, mul };
        field.verify_axioms()?;
        Ok(field)
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    fn a(&self, x: u64, y: u64) -> u64 {
        self.add[(x * self.p + y) as usize] as u64
    }

    fn m(&self, x: u64, y: u64) -> u64 {
        self.mul[(x * self.p + y) as usize] as u64
    }

    fn verify_axioms(&self) -> Result<()> {
        let p = self.p;
        let fail = |what: &str| Err(Error::Construction(format!("F_{p}: {what} fails")));
        for x in 0..p {
            if self.a(x, 0) != x || self.m(x, 1) != x {
                return fail("identity");
            }
            if !(0..p).any(|y| self.a(x, y) == 0) {
                return fail("additive inverse");
            }
            if x != 0 && !(0..p).any(|y| self.m(x, y) == 1) {
                return fail("multiplicative inverse");
            }
            for y in 0..p {
                if self.a(x, y) != self.a(y, x) || self.m(x, y) != self.m(y, x) {
                    return fail("commutativity");
                }
                for z in 0..p {
                    if self.a(self.a(x, y), z) != self.a(x, self.a(y, z))
                        || self.m(self.m(x, y), z) != self.m(x, self.m(y, z))
                    {
                        return fail("associativity");
                    }
                    if self.m(x, self.a(y, z)) != self.a(self.m(x, y), self.m(x, z)) {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }
}

impl Interpretation for PrimeField {
    fn size(&self) -> u64 {
        self.p
    }

    fn constant(&self, c: i64) -> Result<u64> {
        Ok(c.rem_euclid(self.p as i64) as u64)
    }

    fn add(&self, x: u64, y: u64) -> Result<u64> {
        Ok(self.a(x, y))
    }

    fn mul(&self, x: u64, y: u64) -> Result<u64> {
        Ok(self.m(x, y))
    }

    fn neg(&self, x: u64) -> Result<u64> {
        Ok((self.p - x) % self.p)
    }
}

/// {phi(F_p, b) : b in psi(F_p, e)}: `phi` has free variables among
/// `point_vars` and `param_vars`; `psi` among `param_vars` and `extra_vars`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefinableSpec {
    pub point_vars: Vec<String>,
    pub param_vars: Vec<String>,
    pub phi: Formula,
    #[serde(default = "always")]
    pub psi: Formula,
    #[serde(default)]
    pub extra_vars: Vec<String>,
    #[serde(default)]
    pub e: Vec<u64>,
}

fn always() -> Formula {
    Formula::True
}

impl DefinableSpec {
    pub fn new(point_vars: &[&str], param_vars: &[&str], phi: Formula) -> Self {
        DefinableSpec {
            point_vars: point_vars.iter().map(|s| s.to_string()).collect(),
            param_vars: param_vars.iter().map(|s| s.to_string()).collect(),
            phi,
            psi: Formula::True,
            extra_vars: Vec::new(),
            e: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.point_vars.len() > MAX_DIM || self.param_vars.len() > MAX_DIM {
            return Err(Error::Cap {
                what: "point or parameter dimension".into(),
                needed: self.point_vars.len().max(self.param_vars.len()) as u128,
                cap: MAX_DIM as u128,
            });
        }
        if self.extra_vars.len() != self.e.len() {
            return Err(Error::arg("extra_vars and e differ in length"));
        }
        for v in self.phi.free_vars() {
            if !self.point_vars.contains(&v) && !self.param_vars.contains(&v) {
                return Err(Error::Formula(format!("unbound variable {v} in phi")));
            }
        }
        for v in self.psi.free_vars() {
            if !self.param_vars.contains(&v) && !self.extra_vars.contains(&v) {
                return Err(Error::Formula(format!("unbound variable {v} in psi")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct DefinableFamily {
    pub q: u64,
    pub dim: usize,
    pub family: SetFamily,
    pub parameters: Vec<Vec<u64>>,
}

impl DefinableFamily {
    /// Set when psi(F_p, e) is empty.
    pub fn empty_parameter_set(&self) -> bool {
        self.parameters.is_empty()
    }
}

/// Tuple number `i` of F_p^d, first coordinate most significant.
pub fn decode_point(mut i: u64, p: u64, d: usize) -> Vec<u64> {
    let mut out = vec![0; d];
    for slot in out.iter_mut().rev() {
        *slot = i % p;
        i /= p;
    }
    out
}

pub fn encode_point(point: &[u64], p: u64) -> u64 {
    point.iter().fold(0, |acc, &c| acc * p + c)
}

fn workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get()).min(16)
}

pub fn definable_family(field: &PrimeField, spec: &DefinableSpec) -> Result<DefinableFamily> {
    spec.validate()?;
    let p = field.order();
    let d = spec.point_vars.len();
    let points = p.pow(d as u32);
    let params = p.pow(spec.param_vars.len() as u32);

    let mut psi_vars = spec.param_vars.clone();
    psi_vars.extend(spec.extra_vars.iter().cloned());
    let mut parameters = Vec::new();
    for i in 0..params {
        let mut vals = decode_point(i, p, spec.param_vars.len());
        let b = vals.clone();
        vals.extend(spec.e.iter().map(|&v| v % p));
        if eval_at(field, &spec.psi, &psi_vars, &vals)? {
            parameters.push(b);
        }
    }

    let mut phi_vars = spec.point_vars.clone();
    phi_vars.extend(spec.param_vars.iter().cloned());
    let chunk = parameters.len().div_ceil(workers()).max(1);
    let sets: Vec<Vec<usize>> = thread::scope(|s| {
        let handles: Vec<_> = parameters
            .chunks(chunk)
            .map(|part| {
                let phi_vars = &phi_vars;
                s.spawn(move || -> Result<Vec<Vec<usize>>> {
                    let mut out = Vec::with_capacity(part.len());
                    let mut vals = vec![0; phi_vars.len()];
                    for b in part {
                        vals[d..].copy_from_slice(b);
                        let mut set = Vec::new();
                        for x in 0..points {
                            vals[..d].copy_from_slice(&decode_point(x, p, d));
                            if eval_at(field, &spec.phi, phi_vars, &vals)? {
                                set.push(x as usize);
                            }
                        }
                        out.push(set);
                    }
                    Ok(out)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("point counting worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();
    let labels = parameters
        .iter()
        .map(|b| format!("{b:?}"))
        .collect();
    let family = SetFamily::new(points as usize, &sets)?.with_labels(labels)?;
    Ok(DefinableFamily {
        q: p,
        dim: d,
        family,
        parameters,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimMeasFit {
    pub d: u32,
    #[serde(with = "rational::json")]
    pub mu: Q,
    #[serde(with = "rational::json")]
    pub residual: Q,
    #[serde(with = "rational::json")]
    pub constant: Q,
    /// residual <= C q^(d - 1/2).
    pub within_bound: bool,
    /// Another dimension produced an equally simple measure.
    pub ambiguous: bool,
}

/// Simplest rational (smallest denominator, then smallest numerator) in [lo, hi], lo > 0.
pub fn simplest_between(lo: &Q, hi: &Q) -> Q {
    let c = lo.ceil();
    if &c <= hi {
        return c;
    }
    let f = lo.floor();
    let inner = simplest_between(&(Q::one() / (hi - &f)), &(Q::one() / (lo - &f)));
    f + Q::one() / inner
}

// A rational not exceeding sqrt(x), with 9 decimal digits.
fn sqrt_floor(x: u64) -> Q {
    let scale: u128 = 1_000_000_000;
    let target = x as u128 * scale * scale;
    let mut r = ((x as f64).sqrt() * scale as f64) as u128;
    while r * r > target {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= target {
        r += 1;
    }
    ratio(r, scale)
}

/// Fits count ~ mu q^d over d in 0..=max_dim. For each d the measure is the
/// simplest positive rational within C q^(-1/2) of count / q^d; the fit keeps
/// the d whose measure has the smallest height max(num, den), and flags ties.
pub fn dim_meas_fit(count: u128, q: u64, max_dim: u32, constant: &Q) -> Result<DimMeasFit> {
    if q < 2 {
        return Err(Error::arg("q must be at least 2"));
    }
    if constant.is_negative() {
        return Err(Error::arg("the constant C must be non-negative"));
    }
    let full = (q as u128)
        .checked_pow(max_dim)
        .ok_or_else(|| Error::Overflow(format!("{q}^{max_dim}")))?;
    if count > full {
        return Err(Error::arg(format!("count {count} exceeds q^n = {full}")));
    }
    if count == 0 {
        return Ok(DimMeasFit {
            d: 0,
            mu: Q::zero(),
            residual: Q::zero(),
            constant: constant.clone(),
            within_bound: true,
            ambiguous: false,
        });
    }
    // slightly narrower than C / sqrt(q), so every accepted mu is honest
    let width = constant / (sqrt_floor(q) + ratio(1, 1_000_000_000));
    let mut best: Option<(num_bigint::BigInt, u32, Q)> = None;
    let mut tie = false;
    for d in 0..=max_dim {
        let qd = (q as u128).pow(d);
        let center = ratio(count, qd);
        let lo = &center - &width;
        let hi = &center + &width;
        let mu = if lo.is_positive() {
            simplest_between(&lo, &hi)
        } else if center.denom() <= &MU_DENOMINATOR_CAP.into() {
            // window reaches 0: only an exact small fraction is a measure
            center.clone()
        } else {
            continue;
        };
        if mu.denom() > &MU_DENOMINATOR_CAP.into() {
            continue;
        }
        let height = mu.numer().abs().max(mu.denom().clone());
        match &best {
            Some((h, _, _)) if &height > h => {}
            Some((h, _, _)) if &height == h => tie = true,
            _ => {
                best = Some((height, d, mu));
                tie = false;
            }
        }
    }
    let (_, d, mu) = best.expect("d = 0 always yields an integer measure");
    let residual = (ratio(count, 1) - &mu * ratio((q as u128).pow(d), 1)).abs();
    // residual^2 q <= C^2 q^(2d)
    let within_bound = &residual * &residual * ratio(q as u128, 1)
        <= constant * constant * ratio((q as u128).pow(2 * d), 1);
    Ok(DimMeasFit {
        d,
        mu,
        residual,
        constant: constant.clone(),
        within_bound,
        ambiguous: tie,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FfFhpReport {
    pub q: u64,
    pub dim: usize,
    pub members: usize,
    pub empty_parameter_set: bool,
    pub fhp: Option<FhpReport>,
}

pub fn ff_fhp_experiment(
    field: &PrimeField,
    spec: &DefinableSpec,
    k: usize,
    alpha: &Q,
) -> Result<FfFhpReport> {
    let fam = definable_family(field, spec)?;
    let fhp = if fam.family.is_empty() {
        None
    } else {
        Some(check_fhp_instance(&fam.family, k, alpha)?)
    };
    Ok(FfFhpReport {
        q: fam.q,
        dim: fam.dim,
        members: fam.family.len(),
        empty_parameter_set: fam.empty_parameter_set(),
        fhp,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorfulFfReport {
    pub q: u64,
    pub colorful: ColorfulReport,
    /// Counting measure on each parameter set, pushed through the weighted check.
    pub counting_measures: Vec<MeasureReport>,
}

pub fn colorful_ff_experiment(
    field: &PrimeField,
    specs: &[DefinableSpec],
    alpha: &Q,
) -> Result<ColorfulFfReport> {
    let mut families = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        if i > 0 && spec.point_vars.len() != specs[0].point_vars.len() {
            return Err(Error::arg("colorful families must share the point sort"));
        }
        families.push(definable_family(field, spec)?.family);
    }
    let colorful = colorful_check(&families, alpha)?;
    let d = families.len();
    let counting_measures = families
        .iter()
        .map(|f| measure_fhp_check(f, &RationalWeights::uniform(f.len())?, d, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(ColorfulFfReport {
        q: field.order(),
        colorful,
        counting_measures,
    })
}

/// Lines y = a x + b, parameters (a, b).
pub fn lines_spec() -> DefinableSpec {
    use crate::formula::{var, Term};
    DefinableSpec::new(
        &["x", "y"],
        &["a", "b"],
        Formula::Eq(
            var("y"),
            Term::Add(vec![Term::Mul(vec![var("a"), var("x")]), var("b")]),
        ),
    )
}

/// Circles (x - a)^2 + (y - b)^2 = 1, parameters (a, b).
pub fn circles_spec() -> DefinableSpec {
    use crate::formula::{var, Term};
    let sq = |t: Term| Term::Mul(vec![t.clone(), t]);
    DefinableSpec::new(
        &["x", "y"],
        &["a", "b"],
        Formula::Eq(
            Term::Add(vec![
                sq(Term::Sub(vec![var("x"), var("a")])),
                sq(Term::Sub(vec![var("y"), var("b")])),
            ]),
            Term::Const(1),
        ),
    )
}
