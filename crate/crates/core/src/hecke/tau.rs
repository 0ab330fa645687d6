//! Ramanujan's tau function from `Delta = q prod (1 - q^n)^24`.
//!
//! The Euler product is expanded by the pentagonal number theorem and raised
//! to the 24th power with the log-derivative recurrence for powers of a
//! series with unit constant term: if `f = g^k` then
//! `n f_n = sum_{i=1}^{n} ((k + 1) i - n) g_i f_{n-i}`. Because `g` has only
//! `O(sqrt N)` nonzero terms this costs `O(N^{3/2})` exact operations.

use super::GL2FormData;
use crate::arith::Sieve;
use crate::{Error, Result};

pub const MAX_TAU_N: usize = 1_000_000;

/// Exact `tau(1..=N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauSeries {
    values: Vec<i128>,
}

impl TauSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `tau(n)` for `1 <= n <= N`.
    pub fn tau(&self, n: usize) -> i128 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[i128] {
        &self.values
    }

    /// `tau(n) / n^{11/2}`.
    pub fn normalized(&self, n: usize) -> f64 {
        self.tau(n) as f64 / (n as f64).powf(5.5)
    }

    /// `(p, tau(p) / p^{11/2})` for every prime `p <= N`.
    pub fn normalized_primes(&self) -> Vec<(u64, f64)> {
        Sieve::new(self.len() as u64)
            .primes()
            .map(|p| (p, self.normalized(p as usize)))
            .collect()
    }

    pub fn to_gl2(&self) -> GL2FormData {
        GL2FormData::new(self.normalized_primes())
    }
}

/// Coefficients of `prod_{n >= 1} (1 - q^n)` below `q^len` as sparse pairs.
pub(crate) fn euler_product_terms(len: usize) -> Vec<(usize, i128)> {
    let mut terms = vec![(0usize, 1i128)];
    let mut k = 1usize;
    loop {
        let sign = if k.is_multiple_of(2) { 1 } else { -1 };
        let a = k * (3 * k - 1) / 2;
        let b = k * (3 * k + 1) / 2;
        if a >= len {
            break;
        }
        terms.push((a, sign));
        if b < len {
            terms.push((b, sign));
        }
        k += 1;
    }
    terms.sort_unstable();
    terms
}

pub fn ramanujan_tau(n: usize) -> Result<TauSeries> {
    if n == 0 || n > MAX_TAU_N {
        return Err(Error::invalid("N", format!("must lie in 1..={MAX_TAU_N}, got {n}")));
    }
    // tau(n) is the coefficient of q^{n-1} in prod (1 - q^k)^24.
    let g = euler_product_terms(n);
    const POWER: i128 = 24;
    let mut f = vec![0i128; n];
    f[0] = 1;
    for idx in 1..n {
        let mut acc: i128 = 0;
        for &(i, gi) in g.iter().skip(1) {
            if i > idx {
                break;
            }
            let weight = (POWER + 1) * i as i128 - idx as i128;
            let term = weight
                .checked_mul(gi)
                .and_then(|w| w.checked_mul(f[idx - i]))
                .ok_or(Error::Overflow(idx + 1))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow(idx + 1))?;
        }
        debug_assert_eq!(acc % idx as i128, 0);
        f[idx] = acc / idx as i128;
    }
    Ok(TauSeries { values: f })
}
