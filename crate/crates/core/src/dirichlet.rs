//! Finite Dirichlet polynomials, the `M(s) K(s) D(s)` factorisation of the
//! short-interval sum, local Euler factors and the mean value theorem.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Sieve;
use crate::hecke::{complete_homogeneous, CoefficientTable, PrimeLocalData};
use crate::{Error, Result};

/// `F(s) = sum a_n n^{-s}` over a finite set of `n`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DirichletPolynomial {
    terms: BTreeMap<u128, Complex64>,
    range: String,
}

impl DirichletPolynomial {
    pub fn new(range: impl Into<String>) -> Self {
        DirichletPolynomial {
            terms: BTreeMap::new(),
            range: range.into(),
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (u128, Complex64)>>(terms: I, range: impl Into<String>) -> Self {
        let mut poly = DirichletPolynomial::new(range);
        for (n, a) in terms {
            poly.add_term(n, a);
        }
        poly
    }

    pub fn add_term(&mut self, n: u128, a: Complex64) {
        assert!(n >= 1, "Dirichlet polynomial indices start at 1");
        *self.terms.entry(n).or_insert(Complex64::new(0.0, 0.0)) += a;
    }

    pub fn range(&self) -> &str {
        &self.range
    }

    pub fn terms(&self) -> impl Iterator<Item = (&u128, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, n: u128) -> Complex64 {
        self.terms.get(&n).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_index(&self) -> Option<u128> {
        self.terms.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<u128> {
        self.terms.keys().next_back().copied()
    }

    /// Dirichlet convolution, i.e. the polynomial of the pointwise product.
    pub fn mul(&self, other: &DirichletPolynomial) -> Result<DirichletPolynomial> {
        let mut out = DirichletPolynomial::new(format!("({}) * ({})", self.range, other.range));
        for (&m, &a) in &self.terms {
            for (&n, &b) in &other.terms {
                let mn = m.checked_mul(n).ok_or_else(|| Error::IndexOverflow(format!("{m} * {n}")))?;
                out.add_term(mn, a * b);
            }
        }
        Ok(out)
    }

    /// `sum |a_n|^2 / n`.
    pub fn weighted_norm(&self) -> f64 {
        self.terms.iter().map(|(&n, a)| a.norm_sqr() / n as f64).sum()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "re", "im"])?;
        for (n, a) in &self.terms {
            w.write_record([n.to_string(), a.re.to_string(), a.im.to_string()])
                ?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R, path: &str) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(input);
        let headers = reader.headers().map_err(|e| parse_err(path, 1, e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["n", "re", "im"] {
            return Err(parse_err(path, 1, "expected header n,re,im".into()));
        }
        let mut poly = DirichletPolynomial::new(path);
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| parse_err(path, line, e.to_string()))?;
            let field = |k: usize| record.get(k).ok_or_else(|| parse_err(path, line, "missing field".into()));
            let n: u128 = field(0)?.trim().parse().map_err(|e| parse_err(path, line, format!("n: {e}")))?;
            if n == 0 {
                return Err(parse_err(path, line, "n must be positive".into()));
            }
            let re: f64 = field(1)?.trim().parse().map_err(|e| parse_err(path, line, format!("re: {e}")))?;
            let im: f64 = field(2)?.trim().parse().map_err(|e| parse_err(path, line, format!("im: {e}")))?;
            poly.add_term(n, Complex64::new(re, im));
        }
        Ok(poly)
    }
}

fn parse_err(path: &str, line: usize, reason: String) -> Error {
    Error::Parse {
        path: path.to_string(),
        line: line as u64,
        reason,
    }
}

/// `F(s)` with `n^{-s} = exp(-s log n)`.
pub fn dirichlet_eval(poly: &DirichletPolynomial, s: Complex64) -> Complex64 {
    poly.terms
        .iter()
        .map(|(&n, &a)| a * (-s * (n as f64).ln()).exp())
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MkdPolynomials {
    pub m_poly: DirichletPolynomial,
    pub k_poly: DirichletPolynomial,
    pub d_poly: DirichletPolynomial,
}

/// Whether `m ~ M` means `M <= m <= 2M` (default) or `M <= m < 2M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DyadicRange {
    #[default]
    Closed,
    HalfOpen,
}

impl DyadicRange {
    fn upper(&self, m: u64) -> u64 {
        match self {
            DyadicRange::Closed => 2 * m,
            DyadicRange::HalfOpen => 2 * m - 1,
        }
    }
}

/// `M(s) = sum_{m ~ M} A(m,1) m^{-s}`, `K(s) = sum_{X/3M <= k <= 3X/M} A(k,1) k^{-s}`
/// and `D(s) = sum_{d <= 2M} mu(d) prod_{p | d} (A(p,1) p^{-s} - A(p,1) p^{-2s} + p^{-3s})^2`.
///
/// Only squarefree `d` contribute. Each local factor expands, with `a = A(p,1)`
/// and `u = p^{-s}`, to `a^2 u^2 - 2a^2 u^3 + (a^2 + 2a) u^4 - 2a u^5 + u^6`.
pub fn build_mkd(table: &CoefficientTable, x: u64, m: u64, range: DyadicRange) -> Result<MkdPolynomials> {
    if m == 0 {
        return Err(Error::invalid("M", "must be positive"));
    }
    let coeff = |n: u64| table.get(n, 1);
    let mut m_poly = DirichletPolynomial::new(format!("m ~ {m}"));
    for n in m..=range.upper(m) {
        m_poly.add_term(n as u128, coeff(n)?);
    }
    let k_lo = x.div_ceil(3 * m).max(1);
    let k_hi = 3 * x / m;
    let mut k_poly = DirichletPolynomial::new(format!("{k_lo} <= k <= {k_hi}"));
    for k in k_lo..=k_hi {
        k_poly.add_term(k as u128, coeff(k)?);
    }

    let d_max = 2 * m;
    let sieve = Sieve::new(d_max.max(2));
    let mut d_poly = DirichletPolynomial::new(format!("squarefree d <= {d_max}"));
    for d in 1..=d_max {
        let mu = sieve.mobius(d);
        if mu == 0 {
            continue;
        }
        let mut partial: Vec<(u128, Complex64)> = vec![(1, Complex64::new(mu as f64, 0.0))];
        for (p, _) in sieve.factor(d) {
            let a = coeff(p)?;
            let local = [
                (2u32, a * a),
                (3, a * a * -2.0),
                (4, a * a + a * 2.0),
                (5, a * -2.0),
                (6, Complex64::new(1.0, 0.0)),
            ];
            let mut next = Vec::with_capacity(partial.len() * local.len());
            for &(n, c) in &partial {
                for &(k, b) in &local {
                    let pk = (p as u128).checked_pow(k).ok_or_else(|| Error::IndexOverflow(format!("d = {d}")))?;
                    let nk = n.checked_mul(pk).ok_or_else(|| Error::IndexOverflow(format!("d = {d}")))?;
                    next.push((nk, c * b));
                }
            }
            partial = next;
        }
        for (n, c) in partial {
            d_poly.add_term(n, c);
        }
    }
    Ok(MkdPolynomials { m_poly, k_poly, d_poly })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DEstimate {
    pub sigma: f64,
    pub t: f64,
    #[serde(rename = "M")]
    pub m: u64,
    pub d_abs: f64,
    /// `sum_{d <= 2M} |A(d,1)|^2 / d^{2 sigma}`.
    pub coefficient_sum: f64,
    /// `M^{1 - 2 sigma} log M`.
    pub power_bound: f64,
}

/// Evaluates `|D(sigma + it)|` next to the two majorants of its estimate.
pub fn d_estimate(table: &CoefficientTable, d_poly: &DirichletPolynomial, m: u64, sigma: f64, t: f64) -> Result<DEstimate> {
    let d_abs = dirichlet_eval(d_poly, Complex64::new(sigma, t)).norm();
    let mut coefficient_sum = 0.0;
    for d in 1..=2 * m {
        coefficient_sum += table.get(d, 1)?.norm_sqr() / (d as f64).powf(2.0 * sigma);
    }
    let mf = m as f64;
    Ok(DEstimate {
        sigma,
        t,
        m,
        d_abs,
        coefficient_sum,
        power_bound: mf.powf(1.0 - 2.0 * sigma) * mf.ln(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EulerFactorRecord {
    pub p: u64,
    pub s: [f64; 2],
    #[serde(rename = "J")]
    pub j: usize,
    pub series: [f64; 2],
    pub closed: [f64; 2],
    pub series_residual: f64,
    pub ratio_identity_residual: f64,
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

const EULER_TAIL_TOL: f64 = 1e-12;

/// Compares `sum_{j <= J} A(p^j, 1) p^{-js}` with
/// `(1 - A(p,1) p^{-s} + A(1,p) p^{-2s} - p^{-3s})^{-1}`, and the shifted
/// ratio `sum A(p^{j+1},1) p^{-js} / sum A(p^j,1) p^{-js}` with
/// `A(p,1) - A(1,p) p^{-s} + p^{-2s}`.
pub fn euler_factor_check(local: &PrimeLocalData, s: Complex64, j: usize) -> Result<EulerFactorRecord> {
    if s.re < 1.1 {
        return Err(Error::invalid("s", "need Re s >= 1.1"));
    }
    if j < 20 {
        return Err(Error::invalid("J", "need J >= 20"));
    }
    let (e1, e2) = (local.satake.e1(), local.satake.e2());
    let h = complete_homogeneous(&e1, &e2, j + 1);
    let u = (-s * (local.p as f64).ln()).exp();
    let mut series = Complex64::new(0.0, 0.0);
    let mut shifted = Complex64::new(0.0, 0.0);
    let mut power = Complex64::new(1.0, 0.0);
    for k in 0..=j {
        series += h[k] * power;
        shifted += h[k + 1] * power;
        power *= u;
    }
    let closed = 1.0 / (1.0 - e1 * u + e2 * u * u - u * u * u);
    let ratio_closed = e1 - e2 * u + u * u;

    // |A(p^k, 1)| <= C(k + 2, 2) for tempered data; bound the neglected tail.
    let r = u.norm();
    let mut tail = 0.0;
    let mut rk = r.powi(j as i32 + 1);
    for k in j + 1..j + 200 {
        tail += ((k + 1) * (k + 2) / 2) as f64 * rk;
        rk *= r;
    }
    let warning = (tail > EULER_TAIL_TOL).then(|| format!("truncation tail bound {tail:e} exceeds {EULER_TAIL_TOL:e}"));
    Ok(EulerFactorRecord {
        p: local.p,
        s: [s.re, s.im],
        j,
        series: [series.re, series.im],
        closed: [closed.re, closed.im],
        series_residual: (series - closed).norm(),
        ratio_identity_residual: (shifted / series - ratio_closed).norm(),
        tail_bound: tail,
        warning,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MvtRecord {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "T")]
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

const MVT_CHUNK: usize = 1024;

/// Simpson step for the second moment: at most `0.01` and `1 / (10 log N)`.
pub fn mvt_step(n: u64) -> f64 {
    let ln = (n as f64).ln();
    if ln > 0.0 {
        0.01f64.min(1.0 / (10.0 * ln))
    } else {
        0.01
    }
}

/// `int_{-T}^{T} |F(1/2 + it)|^2 dt` against `(N + T) sum |a_n|^2 / n`, for
/// `F` supported on `N <= n <= 2N`.
///
/// The integral uses composite Simpson on an even number of panels of width
/// at most [`mvt_step`]. Nodes are processed in chunks; within a chunk each
/// `n^{-it}` advances by a fixed rotation.
pub fn mvt_ratio(poly: &DirichletPolynomial, n: u64, t: f64) -> Result<MvtRecord> {
    if !(t >= 1.0) {
        return Err(Error::invalid("T", "need T >= 1"));
    }
    if n == 0 {
        return Err(Error::invalid("N", "must be positive"));
    }
    if let (Some(lo), Some(hi)) = (poly.min_index(), poly.max_index()) {
        if lo < n as u128 || hi > 2 * n as u128 {
            return Err(Error::invalid("poly", format!("support must lie in [{n}, {}]", 2 * n)));
        }
    }
    let rhs = (n as f64 + t) * poly.weighted_norm();
    if poly.is_empty() || rhs == 0.0 {
        return Ok(MvtRecord { n, t, lhs: 0.0, rhs, ratio: 0.0 });
    }

    let mut panels = (2.0 * t / mvt_step(n)).ceil() as usize;
    panels += panels % 2;
    let h = 2.0 * t / panels as f64;
    let terms: Vec<(f64, Complex64)> = poly
        .terms
        .iter()
        .map(|(&k, &a)| ((k as f64).ln(), a / (k as f64).sqrt()))
        .collect();
    let nodes = panels + 1;
    let chunks = nodes.div_ceil(MVT_CHUNK);
    let partial: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * MVT_CHUNK;
            let end = (start + MVT_CHUNK).min(nodes);
            let t0 = -t + start as f64 * h;
            let mut current: Vec<Complex64> = terms
                .iter()
                .map(|&(ln, b)| b * Complex64::from_polar(1.0, -t0 * ln))
                .collect();
            let steps: Vec<Complex64> = terms.iter().map(|&(ln, _)| Complex64::from_polar(1.0, -h * ln)).collect();
            let mut acc = 0.0;
            for i in start..end {
                let value: Complex64 = current.iter().sum();
                let w = if i == 0 || i == panels {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                acc += w * value.norm_sqr();
                for (z, r) in current.iter_mut().zip(&steps) {
                    *z *= r;
                }
            }
            acc
        })
        .collect();
    let lhs = partial.iter().sum::<f64>() * h / 3.0;
    Ok(MvtRecord {
        n,
        t,
        lhs,
        rhs,
        ratio: lhs / rhs,
    })
}
