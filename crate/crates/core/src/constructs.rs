//! Deterministic generators for the explicit finite constructions, plus
//! seeded random families and rainbow (Füredi) extraction.
//!
//! Every generator takes an explicit `cap` on the ground-set size and fails
//! with [`Error::Cap`] instead of truncating.

use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combin::{self, binomial, factorial, Colex};
use crate::error::{Error, Result};
use crate::rational::{self, ratio, Q};
use crate::setfam::SetFamily;

/// Default bound on generated ground sets.
pub const DEFAULT_CAP: usize = 1 << 20;

fn check_cap(what: &str, needed: u128, cap: usize) -> Result<usize> {
    if needed > cap as u128 {
        Err(Error::Cap {
            what: what.to_string(),
            needed,
            cap: cap as u128,
        })
    } else {
        Ok(needed as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockParams {
    pub k: usize,
    #[serde(with = "rational::json")]
    pub alpha: Q,
    #[serde(with = "rational::json")]
    pub gamma: Q,
    pub p_prime: usize,
    pub k_prime: usize,
    pub r: usize,
    pub m: usize,
}

impl BlockParams {
    /// prod_{j<k} (1 - j/r), which must exceed alpha.
    pub fn block_product(&self) -> Q {
        (0..self.k)
            .map(|j| Q::one() - ratio(j as u128, self.r as u128))
            .product()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Construction(msg));
        if self.k < 2 {
            return fail(format!("k = {} must be at least 2", self.k));
        }
        if self.alpha <= Q::from_integer(0.into()) || self.alpha >= Q::one() {
            return fail("alpha must lie strictly between 0 and 1".into());
        }
        if self.gamma <= Q::from_integer(0.into()) || self.gamma > Q::one() {
            return fail("gamma must lie in (0, 1]".into());
        }
        if !(self.p_prime >= self.k_prime && self.k_prime >= 2) {
            return fail(format!(
                "need p' >= k' >= 2, got p' = {}, k' = {}",
                self.p_prime, self.k_prime
            ));
        }
        if self.r < self.k {
            return fail(format!("r = {} must be at least k = {}", self.r, self.k));
        }
        let prod = self.block_product();
        if prod <= self.alpha {
            return fail(format!(
                "prod_(j<k)(1 - j/r) = {} does not exceed alpha = {}",
                rational::render(&prod),
                rational::render(&self.alpha)
            ));
        }
        let min_m = (ratio(self.p_prime as u128, 1) / &self.gamma).ceil();
        if ratio(self.m as u128, 1) < min_m {
            return fail(format!(
                "m = {} is below ceil(p'/gamma) = {}",
                self.m,
                min_m.to_integer()
            ));
        }
        Ok(())
    }
}

/// Blocks B_t = {t*m, .., t*m + m - 1}; ground = k-sets meeting k distinct blocks
/// at one point each; member i = ground points containing i.
pub fn build_block_counterexample(params: &BlockParams, cap: usize) -> Result<SetFamily> {
    params.validate()?;
    let (k, r, m) = (params.k, params.r, params.m);
    let needed = binomial(r as u64, k as u64).saturating_mul((m as u128).saturating_pow(k as u32));
    let size = check_cap("block ground set", needed, cap)?;
    let n = r * m;
    let mut sets = vec![Vec::new(); n];
    let mut e = 0usize;
    for blocks in Colex::new(r, k) {
        let mut pick = vec![0usize; k];
        loop {
            for (slot, &b) in blocks.iter().enumerate() {
                sets[b * m + pick[slot]].push(e);
            }
            e += 1;
            // odometer over one element per chosen block
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                pick[pos] += 1;
                if pick[pos] < m {
                    break;
                }
                pick[pos] = 0;
                if pos == 0 {
                    pos = usize::MAX;
                    break;
                }
            }
            if pos == usize::MAX {
                break;
            }
        }
    }
    debug_assert_eq!(e, size);
    let labels = (0..n).map(|i| format!("B{}:{}", i / m, i % m)).collect();
    SetFamily::new(size, &sets)?.with_labels(labels)
}

/// Ground = functions [k] -> [m] (f(0) most significant); member S_{i,j} = {f : f(i) = j}.
pub fn build_tp2_grid(k: usize, m: usize, cap: usize) -> Result<SetFamily> {
    if k == 0 || m == 0 {
        return Err(Error::arg("k and m must be positive"));
    }
    let size = check_cap("grid ground set", (m as u128).saturating_pow(k as u32), cap)?;
    let mut sets = vec![Vec::new(); k * m];
    for f in 0..size {
        let mut rest = f;
        for i in (0..k).rev() {
            sets[i * m + rest % m].push(f);
            rest /= m;
        }
    }
    let labels = (0..k)
        .flat_map(|i| (0..m).map(move |j| format!("S{i},{j}")))
        .collect();
    SetFamily::new(size, &sets)?.with_labels(labels)
}

/// Ground = [n] x [n]; member V_t = {(i, j) : i = t or j = t}.
pub fn build_two_order_cross(n: usize, cap: usize) -> Result<SetFamily> {
    if n < 2 {
        return Err(Error::arg("n must be at least 2"));
    }
    let size = check_cap("cross ground set", (n as u128) * (n as u128), cap)?;
    let sets: Vec<Vec<usize>> = (0..n)
        .map(|t| {
            (0..size)
                .filter(|&p| p / n == t || p % n == t)
                .collect()
        })
        .collect();
    let labels = (0..n).map(|t| format!("V{t}")).collect();
    SetFamily::new(size, &sets)?.with_labels(labels)
}

/// Nonempty strings over [w] of length at most `depth`, shortest first then lexicographic.
pub fn cap_strings(w: usize, depth: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * w);
        for s in &level {
            for j in 0..w {
                let mut t = s.clone();
                t.push(j);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// Atoms = strings s over [w] with 1 <= |s| <= depth; F_{i,j} = {s : |s| > i, s(i) = j}.
pub fn build_caps_family(w: usize, depth: usize, cap: usize) -> Result<SetFamily> {
    if w == 0 || depth == 0 {
        return Err(Error::arg("branching and depth must be positive"));
    }
    let needed: u128 = (1..=depth as u32)
        .map(|l| (w as u128).saturating_pow(l))
        .fold(0u128, |a, b| a.saturating_add(b));
    let size = check_cap("caps ground set", needed, cap)?;
    let strings = cap_strings(w, depth);
    debug_assert_eq!(strings.len(), size);
    let mut sets = Vec::with_capacity(w * depth);
    let mut labels = Vec::with_capacity(w * depth);
    for i in 0..depth {
        for j in 0..w {
            sets.push(
                strings
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| s.len() > i && s[i] == j)
                    .map(|(idx, _)| idx)
                    .collect::<Vec<_>>(),
            );
            labels.push(format!("F{i},{j}"));
        }
    }
    SetFamily::new(size, &sets)?.with_labels(labels)
}

/// Ground = subsets e of [m] (as bitmasks); one member {e : a in e, b not in e}
/// per ordered pair a != b, in lexicographic order of (a, b).
pub fn build_shattered_pairs(m: usize, cap: usize) -> Result<SetFamily> {
    if m < 2 {
        return Err(Error::arg("m must be at least 2"));
    }
    if m >= 64 {
        return Err(Error::Cap {
            what: "shattered-pairs ground set".into(),
            needed: u128::MAX,
            cap: cap as u128,
        });
    }
    let size = check_cap("shattered-pairs ground set", 1u128 << m, cap)?;
    let mut sets = Vec::with_capacity(m * (m - 1));
    let mut labels = Vec::with_capacity(m * (m - 1));
    for a in 0..m {
        for b in 0..m {
            if a == b {
                continue;
            }
            sets.push(
                (0..size)
                    .filter(|e| (e >> a) & 1 == 1 && (e >> b) & 1 == 0)
                    .collect::<Vec<_>>(),
            );
            labels.push(format!("({a},{b})"));
        }
    }
    SetFamily::new(size, &sets)?.with_labels(labels)
}

/// `n` members over `ground` points; each point joins each member with probability `density`.
pub fn random_family(seed: u64, n: usize, ground: usize, density: f64) -> Result<SetFamily> {
    let mut rng = combin::rng(seed);
    let sets: Vec<Vec<usize>> = (0..n)
        .map(|_| (0..ground).filter(|_| rng.gen_bool(density)).collect())
        .collect();
    SetFamily::new(ground, &sets)
}

/// `n` uniformly random k-element members over `ground` points (repeats allowed).
pub fn random_uniform_family(seed: u64, n: usize, ground: usize, k: usize) -> Result<SetFamily> {
    if k > ground {
        return Err(Error::arg("k exceeds ground size"));
    }
    let mut rng = combin::rng(seed);
    let sets: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut s = rand::seq::index::sample(&mut rng, ground, k).into_vec();
            s.sort_unstable();
            s
        })
        .collect();
    SetFamily::new(ground, &sets)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FurediExtraction {
    pub k: usize,
    #[serde(with = "rational::json")]
    pub gamma: Q,
    pub target: usize,
    /// Color classes X_1, .., X_k of the successful coloring.
    pub parts: Vec<Vec<usize>>,
    /// Members meeting every color class exactly once.
    pub indices: Vec<usize>,
    pub trial: u64,
    pub seed: u64,
}

/// Tries seeded uniform k-colorings of the ground set until the rainbow
/// subfamily reaches floor((k!/k^k) |F|).
pub fn furedi_extract(
    family: &SetFamily,
    trials: u64,
    seed: u64,
) -> Result<Option<FurediExtraction>> {
    if family.is_empty() {
        return Err(Error::arg("furedi_extract needs a nonempty family"));
    }
    if trials == 0 {
        return Err(Error::arg("trials must be at least 1"));
    }
    let k = family.member(0).count_ones(..);
    for i in 0..family.len() {
        let size = family.member(i).count_ones(..);
        if size != k {
            return Err(Error::arg(format!(
                "member {i} has {size} elements, expected {k}"
            )));
        }
    }
    if k == 0 {
        return Err(Error::arg("members must be nonempty"));
    }
    let gamma = ratio(factorial(k as u64), (k as u128).pow(k as u32));
    let target = (&gamma * ratio(family.len() as u128, 1)).floor().to_integer();
    let target: usize = target.try_into().unwrap_or(usize::MAX);
    let mut rng = combin::rng(seed);
    let ground = family.ground_size();
    let mut color = vec![0usize; ground];
    let mut seen = vec![false; k];
    for trial in 1..=trials {
        for c in color.iter_mut() {
            *c = rng.gen_range(0..k);
        }
        let indices: Vec<usize> = (0..family.len())
            .filter(|&i| {
                seen.iter_mut().for_each(|s| *s = false);
                family.member(i).ones().all(|e| {
                    let fresh = !seen[color[e]];
                    seen[color[e]] = true;
                    fresh
                })
            })
            .collect();
        if indices.len() >= target {
            let mut parts = vec![Vec::new(); k];
            for (e, &c) in color.iter().enumerate() {
                parts[c].push(e);
            }
            return Ok(Some(FurediExtraction {
                k,
                gamma,
                target,
                parts,
                indices,
                trial,
                seed,
            }));
        }
    }
    Ok(None)
}
