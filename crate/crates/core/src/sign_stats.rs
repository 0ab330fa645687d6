//! Sign changes, short-interval comparisons and density statistics for the
//! real sequences `A(m, 1)` (self-dual forms) and `A(m, m)`.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{gcd, Sieve};
use crate::hecke::{complete_homogeneous, schur_from_elementary, CoefficientTable, ExponentPair, PrimeLocalData};
use crate::{Error, Result};

pub const DEFAULT_ZERO_TOL: f64 = 1e-12;
const REAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Which {
    #[serde(rename = "A_m1")]
    Am1,
    #[serde(rename = "A_mm")]
    Amm,
}

/// `a(1), ..., a(X)`, indexed from one.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSequence {
    values: Vec<f64>,
    label: String,
}

fn real_part(index: u64, z: Complex64) -> Result<f64> {
    if z.im.abs() > REAL_TOL * z.norm().max(1.0) {
        return Err(Error::NotReal { index, imag: z.im });
    }
    Ok(z.re)
}

impl RealSequence {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Self {
        RealSequence {
            values,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, m: u64) -> Result<f64> {
        if m == 0 || m as usize > self.values.len() {
            return Err(Error::OutOfBounds {
                m,
                n: 1,
                bound_m: self.values.len() as u64,
                bound_n: 1,
            });
        }
        Ok(self.values[m as usize - 1])
    }

    fn covers(&self, x: u64) -> Result<()> {
        self.get(x.max(1)).map(|_| ())
    }

    /// The first `x` terms of `A(m, 1)` or `A(m, m)` read from a table.
    pub fn from_table(table: &CoefficientTable, x: u64, which: Which) -> Result<Self> {
        let values = (1..=x)
            .map(|m| {
                let z = match which {
                    Which::Am1 => table.get(m, 1)?,
                    Which::Amm => table.get(m, m)?,
                };
                real_part(m, z)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(RealSequence::new(values, label_for(which)))
    }

    /// The first `x` terms built multiplicatively from local data, without
    /// materialising a two-dimensional table.
    pub fn from_locals(locals: &[PrimeLocalData], x: u64, which: Which) -> Result<Self> {
        let sieve = Sieve::new(x.max(2));
        let by_prime: HashMap<u64, &PrimeLocalData> = locals.iter().map(|l| (l.p, l)).collect();
        let mut powers: HashMap<u64, Vec<Complex64>> = HashMap::new();
        for p in sieve.primes() {
            let local = by_prime.get(&p).ok_or(Error::MissingPrime(p))?;
            let mut max_exp = 0usize;
            let mut q = 1u64;
            while q <= x / p {
                q *= p;
                max_exp += 1;
            }
            let (e1, e2) = (local.satake.e1(), local.satake.e2());
            let column = match which {
                Which::Am1 => complete_homogeneous(&e1, &e2, max_exp),
                Which::Amm => (0..=max_exp as u32)
                    .map(|a| schur_from_elementary(ExponentPair::new(a, a), &e1, &e2))
                    .collect(),
            };
            powers.insert(p, column);
        }
        let mut values = vec![Complex64::new(0.0, 0.0); x as usize + 1];
        if x >= 1 {
            values[1] = Complex64::new(1.0, 0.0);
        }
        for m in 2..=x {
            let (p, a) = sieve.factor(m)[0];
            let rest = m / p.pow(a);
            values[m as usize] = powers[&p][a as usize] * values[rest as usize];
        }
        let reals = (1..=x)
            .map(|m| real_part(m, values[m as usize]))
            .collect::<Result<Vec<f64>>>()?;
        Ok(RealSequence::new(reals, label_for(which)))
    }
}

fn label_for(which: Which) -> &'static str {
    match which {
        Which::Am1 => "A(m,1)",
        Which::Amm => "A(m,m)",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignChangeReport {
    pub changes: usize,
    #[serde(skip)]
    pub positions: Vec<(u64, u64)>,
    pub positives: usize,
    pub negatives: usize,
    pub zeros: usize,
}

/// Sign changes within the subsequence of terms with `|a| > zero_tol`.
pub fn count_sign_changes(seq: &RealSequence, zero_tol: f64) -> SignChangeReport {
    let mut report = SignChangeReport {
        changes: 0,
        positions: Vec::new(),
        positives: 0,
        negatives: 0,
        zeros: 0,
    };
    let mut last: Option<(u64, bool)> = None;
    for (i, &v) in seq.values.iter().enumerate() {
        let m = i as u64 + 1;
        if v.abs() <= zero_tol {
            report.zeros += 1;
            continue;
        }
        let positive = v > 0.0;
        if positive {
            report.positives += 1;
        } else {
            report.negatives += 1;
        }
        if let Some((prev, prev_sign)) = last {
            if prev_sign != positive {
                report.positions.push((prev, m));
            }
        }
        last = Some((m, positive));
    }
    report.changes = report.positions.len();
    report
}

/// Parameters of the short-interval comparison: `x ~ X`, intervals of
/// length `H`, dyadic `m ~ M`. `theta` and `delta` are carried as metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShortIntervalConfig {
    #[serde(rename = "X")]
    pub x: u64,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub theta: f64,
    pub delta: f64,
    /// `m` ranges over `[M, 2M)` when set, `[M, 2M]` otherwise.
    #[serde(skip)]
    pub half_open: bool,
}

impl ShortIntervalConfig {
    pub fn new(x: u64, h: u64, m: u64) -> Result<Self> {
        if m < 1 || m >= h {
            return Err(Error::invalid("M", format!("need 1 <= M < H, got M = {m}, H = {h}")));
        }
        if h > x {
            return Err(Error::invalid("H", format!("need H <= X, got H = {h}, X = {x}")));
        }
        Ok(ShortIntervalConfig {
            x,
            h,
            m,
            theta: 0.6,
            delta: 0.0,
            half_open: false,
        })
    }

    /// `H = ceil(X^h_exp)` and `M = ceil(X^m_exp)`.
    pub fn with_exponents(x: u64, h_exp: f64, m_exp: f64) -> Result<Self> {
        let h = (x as f64).powf(h_exp).ceil() as u64;
        let m = (x as f64).powf(m_exp).ceil() as u64;
        ShortIntervalConfig::new(x, h, m)
    }

    fn m_range(&self) -> std::ops::Range<u64> {
        if self.half_open {
            self.m..2 * self.m
        } else {
            self.m..2 * self.m + 1
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShortIntervalSums {
    #[serde(rename = "S1")]
    pub s1: f64,
    #[serde(rename = "S2")]
    pub s2: f64,
}

impl ShortIntervalSums {
    pub fn strict(&self) -> bool {
        self.s1 < self.s2 * (1.0 - 1e-12)
    }
}

/// `S1 = |sum a(mk)|` and `S2 = sum |a(mk)|` over `m ~ M`, `(m, k) = 1`,
/// `x <= mk <= x + H`.
pub fn short_interval_sums(seq: &RealSequence, cfg: &ShortIntervalConfig, x: u64) -> Result<ShortIntervalSums> {
    seq.covers(x + cfg.h)?;
    let (mut signed, mut s2) = (0.0, 0.0);
    for m in cfg.m_range() {
        let k_lo = x.div_ceil(m);
        let k_hi = (x + cfg.h) / m;
        for k in k_lo..=k_hi {
            if k == 0 || gcd(m, k) != 1 {
                continue;
            }
            let v = seq.get(m * k)?;
            signed += v;
            s2 += v.abs();
        }
    }
    Ok(ShortIntervalSums { s1: signed.abs(), s2 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    #[serde(rename = "X")]
    pub x: u64,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub stride: u64,
    pub total_x: usize,
    pub with_change: usize,
    pub strict_count: usize,
    pub violations: usize,
    pub lower_bound_estimate: f64,
}

/// Scans `x = X, X + s, ..., <= 2X` with stride `s = max(1, H/4)`.
///
/// `with_change` counts intervals `[x, x + H]` containing a sign change,
/// `strict_count` those with `S1 < S2`, and `violations` any with `S1 > S2`.
/// The lower-bound estimate is a greedy count of pairwise disjoint changed
/// intervals.
pub fn interval_change_scan(seq: &RealSequence, cfg: &ShortIntervalConfig, zero_tol: f64) -> Result<ScanReport> {
    let stride = (cfg.h / 4).max(1);
    seq.covers(2 * cfg.x + cfg.h)?;
    let xs: Vec<u64> = (cfg.x..=2 * cfg.x).step_by(stride as usize).collect();
    let rows: Vec<(bool, ShortIntervalSums)> = xs
        .par_iter()
        .map(|&x| {
            let window = RealSequence::new(seq.values[(x - 1) as usize..(x + cfg.h) as usize].to_vec(), "");
            let changed = count_sign_changes(&window, zero_tol).changes > 0;
            Ok((changed, short_interval_sums(seq, cfg, x)?))
        })
        .collect::<Result<_>>()?;
    let mut report = ScanReport {
        x: cfg.x,
        h: cfg.h,
        m: cfg.m,
        stride,
        total_x: xs.len(),
        with_change: 0,
        strict_count: 0,
        violations: 0,
        lower_bound_estimate: 0.0,
    };
    let mut free_from = 0u64;
    for (&x, (changed, sums)) in xs.iter().zip(&rows) {
        if *changed {
            report.with_change += 1;
            if x >= free_from {
                report.lower_bound_estimate += 1.0;
                free_from = x + cfg.h + 1;
            }
        }
        if sums.strict() {
            report.strict_count += 1;
        }
        if sums.s1 > sums.s2 * (1.0 + 1e-12) {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityRecord {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// Proportion of non-vanishing terms up to `X` against the product of
/// `1 - 1/p` over primes `p <= X` with vanishing term.
pub fn nonvanishing_density(seq: &RealSequence, x: u64, zero_tol: f64) -> Result<DensityRecord> {
    seq.covers(x)?;
    let nonzero = seq.values[..x as usize].iter().filter(|v| v.abs() > zero_tol).count();
    let lhs = nonzero as f64 / x as f64;
    let sieve = Sieve::new(x.max(2));
    let rhs = sieve
        .primes()
        .take_while(|&p| p <= x)
        .filter(|&p| seq.values[p as usize - 1].abs() <= zero_tol)
        .map(|p| 1.0 - 1.0 / p as f64)
        .product::<f64>();
    Ok(DensityRecord { lhs, rhs, ratio: lhs / rhs })
}

/// `sum_{m <= X} |a(m)|`.
pub fn partial_sum_abs(seq: &RealSequence, x: u64) -> Result<f64> {
    seq.covers(x)?;
    Ok(seq.values[..x as usize].iter().map(|v| v.abs()).sum())
}

/// `sum |a(p^l)|` over prime powers `p^l` (with `l >= 1`) in `[X, 2X]`.
pub fn prime_power_abs_sum(seq: &RealSequence, x: u64) -> Result<f64> {
    seq.covers(2 * x)?;
    let sieve = Sieve::new((2 * x).max(2));
    let mut total = 0.0;
    for p in sieve.primes() {
        let mut q = p;
        loop {
            if q >= x {
                total += seq.values[q as usize - 1].abs();
            }
            match q.checked_mul(p) {
                Some(next) if next <= 2 * x => q = next,
                _ => break,
            }
        }
    }
    Ok(total)
}

/// `sum_{m <= X} a(m)^2 / X`.
pub fn rankin_selberg_ratio(seq: &RealSequence, x: u64) -> Result<f64> {
    seq.covers(x)?;
    Ok(seq.values[..x as usize].iter().map(|v| v * v).sum::<f64>() / x as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignBalance {
    pub pos_frac: f64,
    pub neg_frac: f64,
}

/// Shares of positive and negative terms among the non-vanishing `a(m)`, `m <= X`.
pub fn sign_balance(seq: &RealSequence, x: u64, zero_tol: f64) -> Result<SignBalance> {
    seq.covers(x)?;
    let (mut pos, mut neg) = (0usize, 0usize);
    for &v in &seq.values[..x as usize] {
        if v > zero_tol {
            pos += 1;
        } else if v < -zero_tol {
            neg += 1;
        }
    }
    let total = (pos + neg).max(1) as f64;
    Ok(SignBalance {
        pos_frac: pos as f64 / total,
        neg_frac: neg as f64 / total,
    })
}

/// Quadratic minorants of `1_{a < 0}`: `(a^2 - 3a)/4` on `[-1, 3]` for
/// `A(p, 1)` and `(a^2 - 8a)/9` on `[-1, 8]` for `A(p, p)`.
pub fn negativity_detector(a: f64, which: Which) -> f64 {
    match which {
        Which::Am1 => (a * a - 3.0 * a) / 4.0,
        Which::Amm => (a * a - 8.0 * a) / 9.0,
    }
}

/// `sum_{m in range} |a(m)|` for a table column, convenience for tables.
pub fn table_partial_sum_abs(table: &CoefficientTable, x: u64) -> Result<f64> {
    partial_sum_abs(&RealSequence::from_table(table, x, Which::Am1)?, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{extend_multiplicative, ramanujan_tau, sym2_lift, SatakeTriple};
    use crate::arith::primes_up_to;
    use crate::rng;
    use rand::Rng;

    fn seq(v: &[f64]) -> RealSequence {
        RealSequence::new(v.to_vec(), "toy")
    }

    fn multiplicative(x: u64, local: impl Fn(u64, u32) -> f64) -> RealSequence {
        let sieve = Sieve::new(x);
        let values = (1..=x)
            .map(|m| sieve.factor(m).iter().map(|&(p, a)| local(p, a)).product())
            .collect();
        RealSequence::new(values, "toy")
    }

    #[test]
    fn sign_change_examples() {
        assert_eq!(count_sign_changes(&seq(&[1.0, -1.0, 1.0]), 0.0).changes, 2);
        let r = count_sign_changes(&seq(&[1.0, 0.0, -1.0]), 0.0);
        assert_eq!(r.changes, 1);
        assert_eq!(r.positions, vec![(1, 3)]);
        let r = count_sign_changes(&seq(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!((r.changes, r.zeros), (0, 3));
        let r = count_sign_changes(&seq(&[2.0, -1e-13, -3.0, 4.0]), DEFAULT_ZERO_TOL);
        assert_eq!((r.changes, r.positives, r.negatives, r.zeros), (2, 2, 1, 1));
    }

    #[test]
    fn sign_changes_scale_invariant() {
        let mut r = rng::stream(61, 0);
        let v: Vec<f64> = (0..500).map(|_| r.gen_range(-1.0..1.0)).collect();
        let base = count_sign_changes(&seq(&v), 0.0);
        let scaled: Vec<f64> = v.iter().map(|x| x * 3.7).collect();
        let negated: Vec<f64> = v.iter().map(|x| -x).collect();
        assert_eq!(count_sign_changes(&seq(&scaled), 0.0).changes, base.changes);
        let neg = count_sign_changes(&seq(&negated), 0.0);
        assert_eq!(neg.changes, base.changes);
        assert_eq!((neg.positives, neg.negatives), (base.negatives, base.positives));
    }

    #[test]
    fn config_validation() {
        assert!(ShortIntervalConfig::new(100, 10, 10).is_err());
        assert!(ShortIntervalConfig::new(100, 200, 3).is_err());
        let c = ShortIntervalConfig::with_exponents(10_000, 1.0 / 6.0, 0.1).unwrap();
        assert_eq!((c.h, c.m), (5, 3));
    }

    #[test]
    fn short_sums_toys() {
        let cfg = ShortIntervalConfig::new(1000, 40, 3).unwrap();
        let pos = seq(&vec![0.5; 3000]);
        let s = short_interval_sums(&pos, &cfg, 1000).unwrap();
        assert_eq!(s.s1, s.s2);
        assert!(s.s2 > 0.0);
        let alt: Vec<f64> = (1..=3000).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let s = short_interval_sums(&seq(&alt), &cfg, 1000).unwrap();
        assert!(s.s1 < s.s2);
        assert!(short_interval_sums(&pos, &cfg, 2980).is_err());
    }

    /// Direct enumeration over n in [x, x + H] and divisors m ~ M.
    #[test]
    fn short_sums_match_enumeration() {
        let mut r = rng::stream(62, 0);
        let v: Vec<f64> = (0..3000).map(|_| r.gen_range(-1.0..1.0)).collect();
        let s = seq(&v);
        let cfg = ShortIntervalConfig::new(1000, 37, 4).unwrap();
        for x in [1000, 1234, 1999] {
            let (mut signed, mut abs) = (0.0, 0.0);
            for n in x..=x + 37 {
                for m in 4..=8u64 {
                    if n % m == 0 && gcd(m, n / m) == 1 {
                        signed += v[n as usize - 1];
                        abs += v[n as usize - 1].abs();
                    }
                }
            }
            let got = short_interval_sums(&s, &cfg, x).unwrap();
            assert!((got.s1 - signed.abs()).abs() < 1e-12 && (got.s2 - abs).abs() < 1e-12);
        }
    }

    #[test]
    fn scan_toys() {
        let cfg = ShortIntervalConfig::new(1000, 8, 3).unwrap();
        let pos = seq(&vec![1.0; 2100]);
        let r = interval_change_scan(&pos, &cfg, 0.0).unwrap();
        assert_eq!((r.with_change, r.strict_count, r.violations), (0, 0, 0));
        assert_eq!(r.lower_bound_estimate, 0.0);
        let alt: Vec<f64> = (1..=2100).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = interval_change_scan(&seq(&alt), &cfg, 0.0).unwrap();
        assert_eq!(r.with_change, r.total_x);
        assert_eq!(r.stride, 2);
        // greedy starts at 1000, 1010, ..., 2000
        assert_eq!(r.lower_bound_estimate, 101.0);
    }

    #[test]
    fn density_toys() {
        let none = multiplicative(1000, |_, _| 1.0);
        let r = nonvanishing_density(&none, 1000, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        let odd = multiplicative(1000, |p, _| if p == 2 { 0.0 } else { 1.0 });
        let r = nonvanishing_density(&odd, 1000, 0.0).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.5, 0.5, 1.0));
    }

    #[test]
    fn density_reproduces_sieve_product() {
        let mut r = rng::stream(63, 0);
        let vanish: Vec<u64> = primes_up_to(100).into_iter().filter(|_| r.gen_bool(0.3)).collect();
        let s = multiplicative(100_000, |p, _| if vanish.contains(&p) { 0.0 } else { -1.5 });
        let d = nonvanishing_density(&s, 100_000, 0.0).unwrap();
        assert!((d.ratio - 1.0).abs() <= 0.1, "{d:?} for {vanish:?}");
    }

    fn d3_sum(x: u64) -> f64 {
        let mut count = 0u64;
        for a in 1..=x {
            for b in 1..=x / a {
                count += x / (a * b);
            }
        }
        count as f64
    }

    #[test]
    fn partial_sums_on_degenerate_data() {
        let locals: Vec<PrimeLocalData> = primes_up_to(1000)
            .into_iter()
            .map(|p| PrimeLocalData::new(p, SatakeTriple::identity()).unwrap())
            .collect();
        let s = RealSequence::from_locals(&locals, 1000, Which::Am1).unwrap();
        assert_eq!(partial_sum_abs(&s, 1).unwrap(), 1.0);
        assert!((partial_sum_abs(&s, 1000).unwrap() - d3_sum(1000)).abs() < 1e-6);
        let table = extend_multiplicative(&locals, 1000, 1).unwrap();
        assert!((table_partial_sum_abs(&table, 1000).unwrap() - d3_sum(1000)).abs() < 1e-6);
        // prime powers in [100, 200] with d3(p^l) = C(l + 2, 2)
        let sieve = Sieve::new(200);
        let expected: f64 = (100..=200u64)
            .filter_map(|n| match sieve.factor(n).as_slice() {
                [(_, l)] => Some(((l + 1) * (l + 2) / 2) as f64),
                _ => None,
            })
            .sum();
        assert_eq!(prime_power_abs_sum(&s, 100).unwrap(), expected);
    }

    #[test]
    fn sequence_from_locals_matches_table() {
        let mut r = rng::stream(64, 0);
        let locals = crate::hecke::random_self_dual_locals(&mut r, 200);
        let table = extend_multiplicative(&locals, 200, 200).unwrap();
        for which in [Which::Am1, Which::Amm] {
            let a = RealSequence::from_table(&table, 200, which).unwrap();
            let b = RealSequence::from_locals(&locals, 200, which).unwrap();
            for (u, v) in a.values().iter().zip(b.values()) {
                assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0));
            }
        }
        let generic = crate::hecke::random_tempered_locals(&mut r, 50);
        assert!(matches!(
            RealSequence::from_locals(&generic, 50, Which::Am1),
            Err(Error::NotReal { .. })
        ));
        assert!(RealSequence::from_locals(&generic, 50, Which::Amm).is_ok());
        assert!(matches!(
            RealSequence::from_locals(&locals[1..], 50, Which::Am1),
            Err(Error::MissingPrime(2))
        ));
    }

    #[test]
    fn balance_toys() {
        let alt: Vec<f64> = (1..=100).map(|m| if m % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let b = sign_balance(&seq(&alt), 100, 0.0).unwrap();
        assert_eq!((b.pos_frac, b.neg_frac), (0.5, 0.5));
        let b = sign_balance(&seq(&[1.0, 2.0, 0.0]), 3, 0.0).unwrap();
        assert_eq!((b.pos_frac, b.neg_frac), (1.0, 0.0));
    }

    #[test]
    fn negativity_detectors_are_minorants() {
        for i in 0..=4000 {
            let a = -1.0 + i as f64 * 1e-3;
            let ind = if a < 0.0 { 1.0 } else { 0.0 };
            if a <= 3.0 {
                assert!(negativity_detector(a, Which::Am1) <= ind + 1e-15, "a = {a}");
            }
        }
        for i in 0..=9000 {
            let a = -1.0 + i as f64 * 1e-3;
            let ind = if a < 0.0 { 1.0 } else { 0.0 };
            assert!(negativity_detector(a, Which::Amm) <= ind + 1e-15, "a = {a}");
        }
    }

    #[test]
    fn sym2_tau_short_interval() {
        let tau = ramanujan_tau(20_300).unwrap();
        let locals = sym2_lift(&tau.to_gl2()).unwrap();
        let s = RealSequence::from_locals(&locals, 20_300, Which::Am1).unwrap();
        let cfg = ShortIntervalConfig::with_exponents(10_000, 0.6, 0.1).unwrap();
        let sums = short_interval_sums(&s, &cfg, 10_000).unwrap();
        assert!(sums.strict(), "{sums:?}");
        let cfg = ShortIntervalConfig::with_exponents(10_000, 1.0 / 6.0, 0.1).unwrap();
        let scan = interval_change_scan(&s, &cfg, DEFAULT_ZERO_TOL).unwrap();
        assert!(scan.with_change * 2 >= scan.total_x, "{scan:?}");
        assert_eq!(scan.violations, 0);
    }
}
