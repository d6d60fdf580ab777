//! Counting helpers and deterministic subset enumeration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Binomial coefficient; saturates at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

pub fn factorial(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// The seeded generator used for every randomized routine: ChaCha8 keyed by a 64-bit seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Iterates k-subsets of `0..n` in colexicographic order.
///
/// `{0,1}, {0,2}, {1,2}, {0,3}, ...`
pub struct Colex {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Colex {
    pub fn new(n: usize, k: usize) -> Self {
        Colex {
            n,
            cur: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Colex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        // bump the first position that can move without colliding with its successor
        let mut i = 0;
        loop {
            if i == k {
                self.done = true;
                break;
            }
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for (j, slot) in self.cur.iter_mut().enumerate().take(i) {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}

/// Iterates non-decreasing p-tuples over `0..n` in lexicographic order.
pub struct Multisets {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl Multisets {
    pub fn new(n: usize, p: usize) -> Self {
        Multisets {
            n,
            cur: vec![0; p],
            done: n == 0 && p > 0,
        }
    }
}

impl Iterator for Multisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let p = self.cur.len();
        match (0..p).rev().find(|&i| self.cur[i] + 1 < self.n) {
            Some(i) => {
                let v = self.cur[i] + 1;
                for slot in &mut self.cur[i..] {
                    *slot = v;
                }
            }
            None => self.done = true,
        }
        Some(out)
    }
}
