//! Arithmetic of (Z, +, Sqf): p-adic valuations, the predicates P_m and
//! U_{p,l}, special formulas and G-systems, local (p-adic) satisfiability,
//! an explicit density certificate, window counting, and Dickson admissibility.
//!
//! Conventions: v_p(0) is infinite, so 0 lies in every U_{p,l} and in no P_m.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combin::factorial;
use crate::error::{Error, Result};
use crate::rational::{self, ratio, Q};
use crate::setfam::{check_fhp_instance, FhpReport, SetFamily};

/// Largest residue modulus `p_satisfiable` will enumerate.
pub const RESIDUE_CAP: u64 = 10_000_000;
/// Denominator used to round certificate bounds outward.
pub const CERT_DENOMINATOR: u64 = 1_000_000_000_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, l: i64) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite(v) => i64::from(v) >= l,
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn valuation_unchecked(a: i128, p: u64) -> Valuation {
    if a == 0 {
        return Valuation::Infinite;
    }
    let p = p as i128;
    let mut a = a;
    let mut v = 0;
    while a % p == 0 {
        a /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// p-adic valuation by trial division.
pub fn vp(a: i64, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::arg(format!("{p} is not prime")));
    }
    Ok(valuation_unchecked(a as i128, p))
}

fn vp_u64(m: u64, p: u64) -> u32 {
    match valuation_unchecked(m as i128, p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => 0,
    }
}

/// a in P_m iff v_p(a) < 2 + v_p(m) for every prime p.
pub fn in_pm(a: i64, m: u64) -> bool {
    in_pm_wide(a as i128, m)
}

fn in_pm_wide(a: i128, m: u64) -> bool {
    if a == 0 || m == 0 {
        return false;
    }
    let mut rest = a.unsigned_abs();
    let mut p: u128 = 2;
    // only primes with p^2 <= |a| can divide a squared
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            let mut v = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                v += 1;
            }
            if v >= 2 + vp_u64(m, p as u64) {
                return false;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    true
}

/// a in U_{p,l} iff v_p(a) >= l.
pub fn in_upl(a: i64, p: u64, l: i64) -> Result<bool> {
    Ok(vp(a, p)?.at_least(l))
}

/// An integer-linear form c_x x + sum z_i w_i + sum z'_j w'_j + constant.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    #[serde(default)]
    pub x: i64,
    #[serde(default)]
    pub z: Vec<i64>,
    #[serde(default)]
    pub zp: Vec<i64>,
    #[serde(default)]
    pub constant: i64,
}

impl LinearForm {
    pub fn eval(&self, x: i128, c: &[i64], cp: &[i64]) -> i128 {
        let mut v = self.x as i128 * x + self.constant as i128;
        for (a, b) in self.z.iter().zip(c) {
            v += *a as i128 * *b as i128;
        }
        for (a, b) in self.zp.iter().zip(cp) {
            v += *a as i128 * *b as i128;
        }
        v
    }
}

/// Boolean combination of atoms `t(x, z, z') not in U_{p, level}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PCondition {
    True,
    NotIn { form: LinearForm, level: u32 },
    Not(Box<PCondition>),
    And(Vec<PCondition>),
    Or(Vec<PCondition>),
}

impl PCondition {
    pub fn max_level(&self) -> u32 {
        match self {
            PCondition::True => 0,
            PCondition::NotIn { level, .. } => *level,
            PCondition::Not(c) => c.max_level(),
            PCondition::And(cs) | PCondition::Or(cs) => {
                cs.iter().map(PCondition::max_level).max().unwrap_or(0)
            }
        }
    }

    pub fn eval(&self, p: u64, x: i128, c: &[i64], cp: &[i64]) -> bool {
        match self {
            PCondition::True => true,
            PCondition::NotIn { form, level } => {
                !valuation_unchecked(form.eval(x, c, cp), p).at_least(i64::from(*level))
            }
            PCondition::Not(inner) => !inner.eval(p, x, c, cp),
            PCondition::And(cs) => cs.iter().all(|f| f.eval(p, x, c, cp)),
            PCondition::Or(cs) => cs.iter().any(|f| f.eval(p, x, c, cp)),
        }
    }

    fn forms(&self, out: &mut Vec<LinearForm>) {
        match self {
            PCondition::True => {}
            PCondition::NotIn { form, .. } => out.push(form.clone()),
            PCondition::Not(c) => c.forms(out),
            PCondition::And(cs) | PCondition::Or(cs) => cs.iter().for_each(|f| f.forms(out)),
        }
    }
}

/// theta_p-conditions AND (k x + z_i in P_m) AND (k x + z'_j not in P_m).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialFormula {
    pub lead_k: i64,
    pub modulus_m: u64,
    pub positive_slots: usize,
    #[serde(default)]
    pub negative_slots: usize,
    /// Keyed by prime.
    #[serde(default)]
    pub p_conditions: BTreeMap<u64, PCondition>,
}

impl SpecialFormula {
    /// `slots` positive conditions k x + z_i in P_1 with k = 1 and no p-conditions.
    pub fn squarefree_shifts(slots: usize) -> Self {
        SpecialFormula {
            lead_k: 1,
            modulus_m: 1,
            positive_slots: slots,
            negative_slots: 0,
            p_conditions: BTreeMap::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lead_k == 0 {
            return Err(Error::arg("leading coefficient k must be nonzero"));
        }
        if self.modulus_m == 0 {
            return Err(Error::arg("modulus m must be positive"));
        }
        for (&p, cond) in &self.p_conditions {
            if !is_prime(p) {
                return Err(Error::arg(format!("p-condition keyed by non-prime {p}")));
            }
            let mut forms = Vec::new();
            cond.forms(&mut forms);
            for f in forms {
                if f.z.len() > self.positive_slots || f.zp.len() > self.negative_slots {
                    return Err(Error::arg(format!(
                        "p-condition at {p} references undeclared variables"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.negative_slots == 0
    }

    /// Drops the negative slots and every p-condition mentioning them.
    pub fn positive_part(&self) -> SpecialFormula {
        let conds = self
            .p_conditions
            .iter()
            .filter(|(_, c)| {
                let mut forms = Vec::new();
                c.forms(&mut forms);
                forms.iter().all(|f| f.zp.iter().all(|&v| v == 0))
            })
            .map(|(&p, c)| (p, c.clone()))
            .collect();
        SpecialFormula {
            negative_slots: 0,
            p_conditions: conds,
            ..self.clone()
        }
    }

    /// 2 + v_p(m).
    pub fn level(&self, p: u64) -> u32 {
        2 + vp_u64(self.modulus_m, p)
    }

    /// max(|k|, n, largest prime carrying a p-condition) + 1.
    pub fn cutoff(&self) -> u64 {
        let b0 = self.p_conditions.keys().copied().max().unwrap_or(0);
        self.lead_k
            .unsigned_abs()
            .max(self.positive_slots as u64)
            .max(b0)
            + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSystem {
    pub formula: SpecialFormula,
    pub c: Vec<i64>,
    #[serde(default)]
    pub c_prime: Vec<i64>,
}

impl GSystem {
    pub fn new(formula: SpecialFormula, c: Vec<i64>, c_prime: Vec<i64>) -> Result<Self> {
        formula.validate()?;
        if c.len() != formula.positive_slots || c_prime.len() != formula.negative_slots {
            return Err(Error::arg(format!(
                "parameter lengths ({}, {}) do not match slots ({}, {})",
                c.len(),
                c_prime.len(),
                formula.positive_slots,
                formula.negative_slots
            )));
        }
        Ok(GSystem {
            formula,
            c,
            c_prime,
        })
    }

    /// Shorthand for x + c_i in Sqf for every i.
    pub fn shifts(c: &[i64]) -> Self {
        GSystem {
            formula: SpecialFormula::squarefree_shifts(c.len()),
            c: c.to_vec(),
            c_prime: Vec::new(),
        }
    }

    /// No positive parameter equals a negative one.
    pub fn is_nontrivial(&self) -> bool {
        self.c.iter().all(|a| !self.c_prime.contains(a))
    }

    /// The associated p-condition: theta_p AND (k x + c_i not in U_{p, 2 + v_p(m)}).
    pub fn local_condition_holds(&self, p: u64, x: i128) -> bool {
        let f = &self.formula;
        let level = i64::from(f.level(p));
        let k = f.lead_k as i128;
        let theta = f
            .p_conditions
            .get(&p)
            .is_none_or(|c| c.eval(p, x, &self.c, &self.c_prime));
        theta
            && self
                .c
                .iter()
                .all(|&ci| !valuation_unchecked(k * x + ci as i128, p).at_least(level))
    }

    /// Full truth value of psi(a, c, c').
    pub fn holds(&self, a: i64) -> bool {
        let f = &self.formula;
        let x = a as i128;
        let k = f.lead_k as i128;
        f.p_conditions
            .iter()
            .all(|(&p, cond)| cond.eval(p, x, &self.c, &self.c_prime))
            && self
                .c
                .iter()
                .all(|&ci| in_pm_wide(k * x + ci as i128, f.modulus_m))
            && self
                .c_prime
                .iter()
                .all(|&ci| !in_pm_wide(k * x + ci as i128, f.modulus_m))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSat {
    pub p: u64,
    pub sat: bool,
    /// Smallest residue satisfying the local condition, modulo `modulus`.
    pub witness: Option<u64>,
    pub modulus: u64,
}

/// Decides the associated p-condition by enumerating residues mod p^L, where
/// L is the largest level the condition mentions.
pub fn p_satisfiable(sys: &GSystem, p: u64) -> Result<LocalSat> {
    if !is_prime(p) {
        return Err(Error::arg(format!("{p} is not prime")));
    }
    let f = &sys.formula;
    let theta_level = f.p_conditions.get(&p).map_or(0, PCondition::max_level);
    let level = theta_level.max(f.level(p));
    let modulus = p
        .checked_pow(level)
        .filter(|&q| q <= RESIDUE_CAP)
        .ok_or_else(|| Error::Cap {
            what: format!("residues mod {p}^{level}"),
            needed: (p as u128).saturating_pow(level),
            cap: RESIDUE_CAP as u128,
        })?;
    let witness = (0..modulus).find(|&x| sys.local_condition_holds(p, x as i128));
    Ok(LocalSat {
        p,
        sat: witness.is_some(),
        witness,
        modulus,
    })
}

/// Checks every prime up to the formula's cutoff; above it each local
/// condition excludes at most n < p residues mod p and is always satisfiable.
pub fn first_local_obstruction(sys: &GSystem) -> Result<Option<u64>> {
    let bound = sys.formula.cutoff().max(2);
    for p in primes_up_to(bound) {
        if !p_satisfiable(sys, p)?.sat {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCertificate {
    pub slots: usize,
    pub cutoff_b: u64,
    pub modulus_d: String,
    pub tail_prime: u64,
    #[serde(with = "rational::json")]
    pub epsilon_lower: Q,
    #[serde(with = "rational::json")]
    pub epsilon_upper: Q,
    /// Set when the bracket cannot certify a positive epsilon.
    pub degenerate: bool,
}

/// Brackets eps = (1 / 2D) prod_{p > B} (1 - n / p^{l_p}).
///
/// D = prod_{p <= B} p^{max(l'_p, l_p)}, where l'_p is the largest level in
/// theta_p and l_p = 2 + v_p(m): one residue class mod D then forces every
/// associated p-condition for p <= B. The product over B < p <= tail is
/// rounded outward step by step; the tail beyond is at least 1 - 2n/tail.
/// Reported bounds use denominator [`CERT_DENOMINATOR`].
pub fn density_certificate(formula: &SpecialFormula, tail_prime: u64) -> Result<DensityCertificate> {
    formula.validate()?;
    if !formula.is_positive() {
        return Err(Error::arg("density certificates need a positive special formula"));
    }
    let n = formula.positive_slots as u64;
    let b = formula.cutoff();
    if tail_prime < b {
        return Err(Error::arg(format!(
            "tail prime {tail_prime} is below the cutoff B = {b}"
        )));
    }
    let mut d = num_bigint::BigInt::one();
    for p in primes_up_to(b) {
        let lp = formula
            .p_conditions
            .get(&p)
            .map_or(0, PCondition::max_level)
            .max(formula.level(p));
        d *= num_traits::pow(num_bigint::BigInt::from(p), lp as usize);
    }
    // product over B < p <= tail, rounded down (lo) and up (hi) at each step
    let scale = num_traits::pow(num_bigint::BigInt::from(10), 40);
    let mut lo = scale.clone();
    let mut hi = scale.clone();
    let mut degenerate = false;
    let nq = num_bigint::BigInt::from(n);
    for p in primes_up_to(tail_prime).into_iter().filter(|&p| p > b) {
        let q = num_traits::pow(num_bigint::BigInt::from(p), formula.level(p) as usize);
        if nq >= q {
            degenerate = true;
        }
        let keep = &q - &nq;
        lo = (&lo * &keep).div_floor(&q);
        hi = (&hi * &keep).div_ceil(&q);
    }
    let denom: num_bigint::BigInt = scale * &d * 2;
    let upper = Q::new(hi, denom.clone());
    let tail_factor = Q::one() - ratio(2 * n as u128, tail_prime as u128);
    if tail_factor <= Q::zero() || lo <= num_bigint::BigInt::zero() {
        degenerate = true;
    }
    let lower = if degenerate {
        Q::zero()
    } else {
        Q::new(lo, denom) * tail_factor
    };
    Ok(DensityCertificate {
        slots: n as usize,
        cutoff_b: b,
        modulus_d: d.to_string(),
        tail_prime,
        epsilon_lower: rational::floor_to(&lower, CERT_DENOMINATOR),
        epsilon_upper: rational::ceil_to(&upper, CERT_DENOMINATOR),
        degenerate,
    })
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// sum_i (sqrt|c_i| + sqrt|k t + c_i|) + 1, as a float for reporting.
pub fn error_term(sys: &GSystem, t: i64) -> f64 {
    let k = sys.formula.lead_k as f64;
    sys.c
        .iter()
        .map(|&c| (c as f64).abs().sqrt() + (k * t as f64 + c as f64).abs().sqrt())
        .sum::<f64>()
        + 1.0
}

/// The error term with each square root rounded down; never exceeds the real value.
pub fn error_term_floor(sys: &GSystem, t: i64) -> u128 {
    let k = sys.formula.lead_k as i128;
    sys.c
        .iter()
        .map(|&c| {
            isqrt((c as i128).unsigned_abs()) + isqrt((k * t as i128 + c as i128).unsigned_abs())
        })
        .sum::<u128>()
        + 1
}

/// Membership of k a + c in P_m for a = 0 .. t-1, by sieving prime powers.
fn pm_window(k: i64, c: i64, m: u64, t: u64) -> Result<Vec<bool>> {
    let top = (k as i128)
        .checked_mul(t as i128)
        .and_then(|v| v.checked_add(c as i128))
        .filter(|v| v.unsigned_abs() < (1u128 << 62))
        .ok_or_else(|| Error::Overflow(format!("form {k}*x + {c} over window {t}")))?;
    let max_abs = top.unsigned_abs().max((c as i128).unsigned_abs());
    let mut ok = vec![true; t as usize];
    for a in 0..t {
        if k as i128 * a as i128 + c as i128 == 0 {
            ok[a as usize] = false;
        }
    }
    for p in primes_up_to(isqrt(max_abs) as u64) {
        let e = 2 + vp_u64(m, p);
        let Some(q) = (p as u128).checked_pow(e).filter(|&q| q <= max_abs) else {
            continue;
        };
        let q = q as i128;
        let kk = (k as i128).rem_euclid(q);
        let target = (-(c as i128)).rem_euclid(q);
        let g = kk.gcd(&q);
        if target % g != 0 {
            continue;
        }
        let step = q / g;
        let a0 = if step == 1 {
            0
        } else {
            let inv = mod_inverse((kk / g).rem_euclid(step), step)
                .expect("coprime after dividing by gcd");
            ((target / g) * inv).rem_euclid(step)
        };
        let mut a = a0;
        while a < t as i128 {
            ok[a as usize] = false;
            a += step;
        }
    }
    Ok(ok)
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let g = num_integer::Integer::extended_gcd(&a, &m);
    (g.gcd == 1).then(|| g.x.rem_euclid(m))
}

/// Solutions of the system strictly between 0 and t.
pub fn count_solutions_window(sys: &GSystem, t: i64) -> Result<u64> {
    Ok(solutions_window(sys, t)?.len() as u64)
}

/// The solutions a with 0 < a < t, in increasing order.
pub fn solutions_window(sys: &GSystem, t: i64) -> Result<Vec<i64>> {
    if t < 1 {
        return Err(Error::arg("window bound t must be at least 1"));
    }
    let f = &sys.formula;
    let len = t as u64;
    let mut valid = vec![true; len as usize];
    valid[0] = false;
    for &c in &sys.c {
        let w = pm_window(f.lead_k, c, f.modulus_m, len)?;
        valid.iter_mut().zip(&w).for_each(|(v, &inside)| *v &= inside);
    }
    for &c in &sys.c_prime {
        let w = pm_window(f.lead_k, c, f.modulus_m, len)?;
        valid.iter_mut().zip(&w).for_each(|(v, &inside)| *v &= !inside);
    }
    let mut out = Vec::new();
    for (a, &v) in valid.iter().enumerate() {
        if !v {
            continue;
        }
        let x = a as i128;
        let theta = f
            .p_conditions
            .iter()
            .all(|(&p, cond)| cond.eval(p, x, &sys.c, &sys.c_prime));
        if theta {
            out.push(a as i64);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqfFhpReport {
    pub window: i64,
    pub fhp: FhpReport,
    pub empty_members: Vec<usize>,
    pub certificate: DensityCertificate,
    /// alpha * gamma * delta / (max(s,1) max(s',1) (s+s')^s) with delta = eps_lower / 2.
    #[serde(with = "rational::json")]
    pub theoretical_beta: Q,
}

/// Solution sets of one special formula under several parameter choices,
/// restricted to (0, window), checked as a finite FHP instance.
pub fn sqf_fhp_experiment(
    formula: &SpecialFormula,
    parameters: &[(Vec<i64>, Vec<i64>)],
    k: usize,
    alpha: &Q,
    window: i64,
    tail_prime: u64,
) -> Result<SqfFhpReport> {
    if window < 2 {
        return Err(Error::arg("window must be at least 2"));
    }
    let mut sets = Vec::with_capacity(parameters.len());
    let mut labels = Vec::with_capacity(parameters.len());
    for (c, cp) in parameters {
        let sys = GSystem::new(formula.clone(), c.clone(), cp.clone())?;
        sets.push(
            solutions_window(&sys, window)?
                .into_iter()
                .map(|a| (a - 1) as usize)
                .collect::<Vec<_>>(),
        );
        labels.push(format!("{c:?}|{cp:?}"));
    }
    let family = SetFamily::new((window - 1) as usize, &sets)?.with_labels(labels)?;
    let fhp = check_fhp_instance(&family, k, alpha)?;
    let certificate = density_certificate(&formula.positive_part(), tail_prime.max(formula.cutoff()))?;
    let s = formula.positive_slots as u64;
    let sp = formula.negative_slots as u64;
    let width = s + sp;
    let gamma = if width == 0 {
        Q::one()
    } else {
        ratio(factorial(width), (width as u128).pow(width as u32))
    };
    let delta = &certificate.epsilon_lower / Q::from_integer(2.into());
    let denom = ratio(
        (s.max(1) as u128) * (sp.max(1) as u128) * (width as u128).pow(s as u32),
        1,
    );
    Ok(SqfFhpReport {
        window,
        empty_members: family.empty_members(),
        fhp,
        certificate,
        theoretical_beta: alpha * gamma * delta / denom,
    })
}

/// Draws a shift system x + c_i in Sqf with c_0 = 0 and distinct shifts in
/// 1..=max_shift that has no local obstruction.
pub fn random_admissible_shifts(
    rng: &mut impl Rng,
    slots: usize,
    max_shift: i64,
) -> Result<GSystem> {
    if slots == 0 || max_shift < slots as i64 {
        return Err(Error::arg("need 1 <= slots <= max_shift"));
    }
    loop {
        let mut c = vec![0i64];
        while c.len() < slots {
            let v = rng.gen_range(1..=max_shift);
            if !c.contains(&v) {
                c.push(v);
            }
        }
        c.sort_unstable();
        let sys = GSystem::shifts(&c);
        if first_local_obstruction(&sys)?.is_none() {
            return Ok(sys);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub obstruction: Option<u64>,
    pub primes_checked: Vec<u64>,
}

/// Whether no prime divides prod (a_i t + b_i) for every integer t.
///
/// Only primes up to the number of forms, and primes dividing some gcd(a_i, b_i),
/// can obstruct; both are checked along with every prime up to `prime_bound`.
pub fn dickson_admissible(forms: &[(i64, i64)], prime_bound: u64) -> Result<Admissibility> {
    if forms.is_empty() {
        return Err(Error::arg("need at least one linear form"));
    }
    if let Some((a, b)) = forms.iter().find(|(a, _)| *a < 1) {
        return Err(Error::arg(format!("form {a}x + {b}: leading coefficient must be >= 1")));
    }
    let mut primes = primes_up_to(prime_bound.max(forms.len() as u64));
    for &(a, b) in forms {
        let g = a.unsigned_abs().gcd(&b.unsigned_abs());
        let mut rest = g;
        let mut p = 2;
        while rest > 1 && p * p <= rest {
            if rest % p == 0 {
                primes.push(p);
                while rest % p == 0 {
                    rest /= p;
                }
            }
            p += 1;
        }
        if rest > 1 {
            primes.push(rest);
        }
    }
    primes.sort_unstable();
    primes.dedup();
    for &r in &primes {
        let ri = r as i128;
        let avoids = (0..ri).any(|t| {
            forms
                .iter()
                .all(|&(a, b)| (a as i128 * t + b as i128).rem_euclid(ri) != 0)
        });
        if !avoids {
            return Ok(Admissibility {
                admissible: false,
                obstruction: Some(r),
                primes_checked: primes.iter().copied().take_while(|&p| p <= r).collect(),
            });
        }
    }
    Ok(Admissibility {
        admissible: true,
        obstruction: None,
        primes_checked: primes,
    })
}
