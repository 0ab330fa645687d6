//! Exact Schur-basis algebra for W-invariant polynomials on the torus, the
//! Bernstein approximation scheme behind the effective Sato-Tate law, and
//! Monte-Carlo versus quadrature comparisons of `A(p, p)`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::is_prime;
use crate::hecke::{schur_from_elementary, ExponentPair, SatakeTriple};
use crate::measures::{density, sample, MeasureSpec, QuadratureGrid, TorusPoint};
use crate::{Error, Result};

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A polynomial in `e1, e2` with exact rational coefficients (`e3 = 1`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EPoly {
    coeffs: BTreeMap<(u32, u32), BigRational>,
}

impl EPoly {
    pub fn constant(c: BigRational) -> Self {
        EPoly::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert((a, b), c);
        }
        EPoly { coeffs }
    }

    pub fn e1() -> Self {
        EPoly::monomial(1, 0, BigRational::one())
    }

    pub fn e2() -> Self {
        EPoly::monomial(0, 1, BigRational::one())
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigRational {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.coeffs.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = EPoly::zero();
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.coeffs {
            out.coeffs.insert(*k, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(EPoly::one(), |acc, _| acc * self.clone())
    }

    pub fn eval(&self, x: &SatakeTriple) -> Complex64 {
        let (e1, e2) = (x.e1(), x.e2());
        self.coeffs
            .iter()
            .map(|(&(a, b), c)| e1.powu(a) * e2.powu(b) * to_f64(c))
            .sum()
    }

    /// Leading monomial: largest `a + 2b`, ties broken by smallest `b`.
    fn leading(&self) -> Option<((u32, u32), BigRational)> {
        self.coeffs
            .iter()
            .max_by_key(|(&(a, b), _)| (a + 2 * b, std::cmp::Reverse(b)))
            .map(|(k, v)| (*k, v.clone()))
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRational) {
        let entry = self.coeffs.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }
}

impl Add for EPoly {
    type Output = EPoly;
    fn add(mut self, o: EPoly) -> EPoly {
        for (k, v) in o.coeffs {
            self.add_term(k, v);
        }
        self
    }
}

impl Sub for EPoly {
    type Output = EPoly;
    fn sub(mut self, o: EPoly) -> EPoly {
        for (k, v) in o.coeffs {
            self.add_term(k, -v);
        }
        self
    }
}

impl Mul for EPoly {
    type Output = EPoly;
    fn mul(self, o: EPoly) -> EPoly {
        let mut out = EPoly::zero();
        for (&(a1, b1), c1) in &self.coeffs {
            for (&(a2, b2), c2) in &o.coeffs {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl Zero for EPoly {
    fn zero() -> Self {
        EPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for EPoly {
    fn one() -> Self {
        EPoly::constant(BigRational::one())
    }
}

/// A finite combination `sum c_{l1,l2} S_{l1,l2}` with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct WInvariantLaurent {
    #[serde(serialize_with = "serialize_schur_coeffs")]
    schur_coeffs: BTreeMap<(u32, u32), BigRational>,
}

fn serialize_schur_coeffs<S: serde::Serializer>(
    map: &BTreeMap<(u32, u32), BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for ((l1, l2), c) in map {
        m.serialize_entry(&format!("{l1},{l2}"), &c.to_string())?;
    }
    m.end()
}

impl WInvariantLaurent {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), BigRational)>>(terms: I) -> Self {
        let mut out = WInvariantLaurent::default();
        for (k, v) in terms {
            let entry = out.schur_coeffs.entry(k).or_insert_with(BigRational::zero);
            *entry += v;
            if entry.is_zero() {
                out.schur_coeffs.remove(&k);
            }
        }
        out
    }

    pub fn coeff(&self, l1: u32, l2: u32) -> BigRational {
        self.schur_coeffs.get(&(l1, l2)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.schur_coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.schur_coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schur_coeffs.is_empty()
    }

    pub fn l1_norm(&self) -> BigRational {
        self.schur_coeffs.values().map(|c| c.abs()).sum()
    }

    pub fn eval(&self, x: &SatakeTriple) -> Complex64 {
        self.schur_coeffs
            .iter()
            .map(|(&(l1, l2), c)| crate::hecke::schur_eval(ExponentPair::new(l1, l2), x) * to_f64(c))
            .sum()
    }

    pub fn to_epoly(&self) -> EPoly {
        self.schur_coeffs
            .iter()
            .fold(EPoly::zero(), |acc, (&(l1, l2), c)| acc + schur_poly(l1, l2).scale(c))
    }
}

pub const SCHUR_DEGREE_LIMIT: u32 = 24;

fn schur_poly(l1: u32, l2: u32) -> EPoly {
    schur_from_elementary(ExponentPair::new(l1, l2), &EPoly::e1(), &EPoly::e2())
}

/// `S_{l1,l2}` as a polynomial in `e1, e2`; its leading term is `e1^l1 e2^l2`.
pub fn schur_to_epoly(l1: u32, l2: u32) -> Result<EPoly> {
    if l1 + l2 > SCHUR_DEGREE_LIMIT {
        return Err(Error::invalid("l1 + l2", format!("must not exceed {SCHUR_DEGREE_LIMIT}")));
    }
    Ok(schur_poly(l1, l2))
}

/// Rewrites `f` in the Schur basis by repeatedly cancelling its leading term.
pub fn expand_in_schur(f: &EPoly) -> WInvariantLaurent {
    let mut rest = f.clone();
    let mut out = BTreeMap::new();
    let mut cache: BTreeMap<(u32, u32), EPoly> = BTreeMap::new();
    while let Some((key, c)) = rest.leading() {
        let basis = cache.entry(key).or_insert_with(|| schur_poly(key.0, key.1));
        rest = rest - basis.scale(&c);
        out.insert(key, c);
    }
    WInvariantLaurent { schur_coeffs: out }
}

pub const BERNSTEIN_MAX_POWER: u32 = 12;

/// Schur coefficients of `((S_{1,1} + 1) / 9)^l`. Since `S_{1,1} + 1 = e1 e2`
/// this is the expansion of `(e1 e2 / 9)^l`.
pub fn bernstein_coeffs(l: u32) -> Result<WInvariantLaurent> {
    if l > BERNSTEIN_MAX_POWER {
        return Err(Error::invalid("l", format!("must not exceed {BERNSTEIN_MAX_POWER}")));
    }
    let c = BigRational::new(BigInt::one(), BigInt::from(9u32).pow(l));
    Ok(expand_in_schur(&EPoly::monomial(l, l, c)))
}

/// `sum_j w(j/n) C(n, j) x^j (1 - x)^{n - j}` for `w_samples = [w(0), ..., w(1)]`.
pub fn bernstein_approx(w_samples: &[f64], x: f64) -> Result<f64> {
    if w_samples.len() < 2 {
        return Err(Error::invalid("w_samples", "need n >= 1, i.e. at least two samples"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::invalid("x", "must lie in [0, 1]"));
    }
    let n = w_samples.len() - 1;
    if x == 0.0 {
        return Ok(w_samples[0]);
    }
    if x == 1.0 {
        return Ok(w_samples[n]);
    }
    if n <= 60 {
        let mut binom = 1.0f64;
        let mut acc = 0.0;
        for (j, w) in w_samples.iter().enumerate() {
            acc += w * binom * x.powi(j as i32) * (1.0 - x).powi((n - j) as i32);
            binom = binom * (n - j) as f64 / (j + 1) as f64;
        }
        return Ok(acc);
    }
    let mut ln_fact = vec![0.0f64; n + 1];
    for k in 1..=n {
        ln_fact[k] = ln_fact[k - 1] + (k as f64).ln();
    }
    let (lx, ly) = (x.ln(), (1.0 - x).ln());
    Ok(w_samples
        .iter()
        .enumerate()
        .map(|(j, w)| {
            let ln_b = ln_fact[n] - ln_fact[j] - ln_fact[n - j] + j as f64 * lx + (n - j) as f64 * ly;
            w * ln_b.exp()
        })
        .sum())
}

/// A continuous bump: zero outside `[lo, hi]`, one on `[lo + ramp, hi - ramp]`,
/// joined by cubic smoothsteps. `|w'| <= 1.5 / ramp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateauWeight {
    lo: f64,
    hi: f64,
    ramp: f64,
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t * t * (3.0 - 2.0 * t)
}

impl PlateauWeight {
    pub fn new(lo: f64, hi: f64, ramp: f64) -> Result<Self> {
        if !(ramp > 0.0) || hi - lo < 2.0 * ramp {
            return Err(Error::invalid("ramp", "need ramp > 0 and hi - lo >= 2 ramp"));
        }
        Ok(PlateauWeight { lo, hi, ramp })
    }

    pub fn eval(&self, t: f64) -> f64 {
        smoothstep((t - self.lo) / self.ramp) * smoothstep((self.hi - t) / self.ramp)
    }

    pub fn max_slope(&self) -> f64 {
        1.5 / self.ramp
    }

    /// `[w(0), w(1/n), ..., w(1)]`.
    pub fn samples(&self, n: usize) -> Vec<f64> {
        (0..=n).map(|j| self.eval(j as f64 / n as f64)).collect()
    }
}

/// Minorant and majorant of `1_{[alpha, beta]}(A)` written in the variable
/// `(A + 1) / 9`, with ramps of width `delta` measured in `A`.
pub fn indicator_brackets(alpha: f64, beta: f64, delta: f64) -> Result<(PlateauWeight, PlateauWeight)> {
    let to_tilde = |a: f64| (a + 1.0) / 9.0;
    let ramp = delta / 9.0;
    let lower = PlateauWeight::new(to_tilde(alpha), to_tilde(beta), ramp)?;
    let upper = PlateauWeight::new(to_tilde(alpha - delta), to_tilde(beta + delta), ramp)?;
    Ok((lower, upper))
}

/// Principal branch of the Lambert W function for `x >= 0`.
pub fn lambert_w(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut w = if x < 1.0 { x } else { x.ln() - x.ln().ln().max(0.0) };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 1e-15 * w.abs().max(1.0) {
            break;
        }
    }
    w
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorTermDiagnostic {
    pub p: u64,
    pub t: f64,
    pub n: u64,
    pub delta: f64,
    pub bernstein_term: f64,
    pub spectral_term: f64,
    pub smoothing_term: f64,
    pub uniformity_term: f64,
}

/// The three error terms of the effective law for the Lambert-W choice of
/// `n` and `delta = n^{-1/5}`. Constants are taken to be one.
pub fn error_term_diagnostic(p: u64, t: f64, eta_prime: f64, a: f64) -> Result<ErrorTermDiagnostic> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !(t > 1.0) {
        return Err(Error::invalid("T", "must exceed 1"));
    }
    let log2p = (2.0 * p as f64).ln();
    let arg = 5.0 * t.powf(5.0 / 3.0 - 5.0 * eta_prime) * log2p;
    let n = ((lambert_w(arg) / (8.0 * a * log2p)).floor() as u64).max(1);
    let delta = (n as f64).powf(-0.2);
    Ok(ErrorTermDiagnostic {
        p,
        t,
        n,
        delta,
        bernstein_term: (n as f64).powf(-1.0 / 3.0) * delta.powf(-2.0 / 3.0),
        spectral_term: (2.0 * p as f64).powf(n as f64) / t.powf(1.0 / 3.0 - eta_prime),
        smoothing_term: delta,
        uniformity_term: ((p as f64).ln() / t.ln()).powf(1.5),
    })
}

/// `A(p, p)` values of a synthetic family drawn from the Plancherel measure.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    pub samples: Vec<f64>,
    pub p: u64,
    pub seed: u64,
}

impl EmpiricalDistribution {
    pub fn generate(p: u64, count: usize, seed: u64) -> Result<Self> {
        let spec = MeasureSpec::plancherel(p)?;
        let samples = sample(&spec, count, seed)?
            .iter()
            .map(TorusPoint::adjoint_value)
            .collect();
        Ok(EmpiricalDistribution { samples, p, seed })
    }

    pub fn fraction_in(&self, lo: f64, hi: f64) -> f64 {
        let hits = self.samples.iter().filter(|&&v| v >= lo && v <= hi).count();
        hits as f64 / self.samples.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorMass {
    pub mass: f64,
    pub uncertainty: f64,
}

const REFINE_LEVELS: u32 = 2;

fn clamped_adjoint(pt: &TorusPoint) -> f64 {
    pt.adjoint_value().clamp(-1.0, 8.0)
}

fn cell_mass(spec: &MeasureSpec, x0: f64, y0: f64, size: f64, lo: f64, hi: f64, level: u32) -> (f64, f64) {
    let corners = [(x0, y0), (x0 + size, y0), (x0, y0 + size), (x0 + size, y0 + size)];
    let centre = (x0 + size / 2.0, y0 + size / 2.0);
    let inside = |(x, y): (f64, f64)| {
        let v = clamped_adjoint(&TorusPoint::new(x, y));
        v >= lo && v <= hi
    };
    let hits = corners.iter().filter(|&&c| inside(c)).count() + inside(centre) as usize;
    let weight = size
        * size
        * corners
            .iter()
            .map(|&(x, y)| density(spec, &TorusPoint::new(x, y)))
            .sum::<f64>()
        / 4.0;
    match hits {
        5 => (weight, 0.0),
        0 => (0.0, 0.0),
        _ if level == REFINE_LEVELS => {
            let frac = hits as f64 / 5.0;
            (weight * frac, weight * frac.max(1.0 - frac))
        }
        _ => {
            let half = size / 2.0;
            let mut acc = (0.0, 0.0);
            for (dx, dy) in [(0.0, 0.0), (half, 0.0), (0.0, half), (half, half)] {
                let (m, u) = cell_mass(spec, x0 + dx, y0 + dy, half, lo, hi, level + 1);
                acc.0 += m;
                acc.1 += u;
            }
            acc
        }
    }
}

/// `mu({A(p, p) in [lo, hi]})`. Grid cells whose corner and centre tests
/// disagree are split twice; cells still undecided contribute their share of
/// hits, and their mass bounds the reported uncertainty.
pub fn indicator_mass(spec: &MeasureSpec, lo: f64, hi: f64, grid: &QuadratureGrid) -> IndicatorMass {
    let k = grid.resolution();
    let h = grid.step();
    let rows: Vec<(f64, f64)> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut acc = (0.0, 0.0);
            for j in 0..k {
                let (m, u) = cell_mass(spec, i as f64 * h, j as f64 * h, h, lo, hi, 0);
                acc.0 += m;
                acc.1 += u;
            }
            acc
        })
        .collect();
    let (mass, uncertainty) = rows.into_iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
    IndicatorMass { mass, uncertainty }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StCompareRecord {
    pub p: u64,
    pub interval: [f64; 2],
    pub samples: usize,
    pub empirical: f64,
    pub mass: f64,
    pub mass_uncertainty: f64,
    pub diff: f64,
}

pub const ST_GRID_RESOLUTION: usize = 256;

fn check_interval(lo: f64, hi: f64) -> Result<()> {
    if !(-1.0..=8.0).contains(&lo) || !(-1.0..=8.0).contains(&hi) || lo > hi {
        return Err(Error::invalid("interval", "need -1 <= a <= b <= 8"));
    }
    Ok(())
}

fn compare_one(dist: &EmpiricalDistribution, lo: f64, hi: f64, grid: &QuadratureGrid) -> StCompareRecord {
    let empirical = dist.fraction_in(lo, hi);
    let m = indicator_mass(&MeasureSpec::Plancherel { p: dist.p }, lo, hi, grid);
    StCompareRecord {
        p: dist.p,
        interval: [lo, hi],
        samples: dist.samples.len(),
        empirical,
        mass: m.mass,
        mass_uncertainty: m.uncertainty,
        diff: (empirical - m.mass).abs(),
    }
}

/// Fraction of `n_samples` Plancherel draws with `A(p, p) in [a, b]` against
/// the quadrature mass of the same event.
pub fn effective_st_compare(p: u64, n_samples: usize, interval: [f64; 2], seed: u64) -> Result<StCompareRecord> {
    check_interval(interval[0], interval[1])?;
    if n_samples < 100 {
        return Err(Error::invalid("samples", "need at least 100"));
    }
    let dist = EmpiricalDistribution::generate(p, n_samples, seed)?;
    let grid = QuadratureGrid::new(ST_GRID_RESOLUTION)?;
    Ok(compare_one(&dist, interval[0], interval[1], &grid))
}

/// The same comparison on the cells `[-1, 0], [0, 1], ..., [7, 8]`, sharing
/// one sample.
pub fn compare_on_unit_cells(p: u64, n_samples: usize, seed: u64) -> Result<Vec<StCompareRecord>> {
    if n_samples < 100 {
        return Err(Error::invalid("samples", "need at least 100"));
    }
    let dist = EmpiricalDistribution::generate(p, n_samples, seed)?;
    let grid = QuadratureGrid::new(ST_GRID_RESOLUTION)?;
    Ok((-1..8)
        .map(|lo| compare_one(&dist, lo as f64, lo as f64 + 1.0, &grid))
        .collect())
}
