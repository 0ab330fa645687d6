//! Sato-Tate and p-adic Plancherel measures on the maximal torus of SU(3),
//! and the spectral weights used to average over families of forms.
//!
//! Points of the torus are parametrised by `(theta1, theta2)`, with
//! `theta3 = -theta1 - theta2`. Densities are taken with respect to the raw
//! Lebesgue measure `dtheta1 dtheta2` on `[0, 2 pi)^2`, normalised so both
//! measures have total mass one:
//!
//! ```text
//! mu_inf: (1 / 24 pi^2) prod_{l<j} |e^{i theta_l} - e^{i theta_j}|^2
//! mu_p:   (W(1/p) / 24 pi^2) prod_{l<j} |e^{i theta_l} - e^{i theta_j}|^2 / |e^{i theta_l} - e^{i theta_j} / p|^2
//! ```
//!
//! with `W(q) = 1 + 2q + 2q^2 + q^3` the Poincaré polynomial of S3.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::arith::is_prime;
use crate::hecke::SatakeTriple;
use crate::qpoly::QPolynomial;
use crate::weyl::{WeylElement, WEYL_GROUP};
use crate::{rng, Error, Result};

/// A point `(theta1, theta2)` of the torus, angles reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    theta1: f64,
    theta2: f64,
}

fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl TorusPoint {
    pub fn new(theta1: f64, theta2: f64) -> Self {
        TorusPoint {
            theta1: reduce_angle(theta1),
            theta2: reduce_angle(theta2),
        }
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.theta1, self.theta2, reduce_angle(-self.theta1 - self.theta2)]
    }

    pub fn satake(&self) -> SatakeTriple {
        SatakeTriple::from_angles(self.theta1, self.theta2)
    }

    /// Permutes the three angles and drops the third.
    pub fn permute(&self, w: WeylElement) -> TorusPoint {
        let a = w.apply(self.angles());
        TorusPoint::new(a[0], a[1])
    }

    /// `A(p, p) = S_{1,1} = |e1|^2 - 1` at this point, a real number in `[-1, 8]`.
    pub fn adjoint_value(&self) -> f64 {
        self.satake().e1().norm_sqr() - 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureSpec {
    SatoTate,
    Plancherel { p: u64 },
}

impl MeasureSpec {
    pub fn plancherel(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(MeasureSpec::Plancherel { p })
    }

    fn normaliser(&self) -> f64 {
        let w = match *self {
            MeasureSpec::SatoTate => 1.0,
            MeasureSpec::Plancherel { p } => weyl_poincare_at(1.0 / p as f64),
        };
        w / (24.0 * PI * PI)
    }

    /// Pointwise upper bound on [`density`].
    ///
    /// The Vandermonde factor is at most 27 on the torus. For `mu_p` each
    /// pair factor `|1 - z|^2 / |1 - z/p|^2` with `|z| = 1` is decreasing in
    /// `Re z`, hence at most `4 / (1 + 1/p)^2`.
    pub fn density_bound(&self) -> f64 {
        match *self {
            MeasureSpec::SatoTate => 27.0 * self.normaliser(),
            MeasureSpec::Plancherel { p } => {
                let r = 1.0 / p as f64;
                self.normaliser() * (4.0 / ((1.0 + r) * (1.0 + r))).powi(3)
            }
        }
    }
}

/// Density of the measure at `pt` with respect to `dtheta1 dtheta2`.
pub fn density(spec: &MeasureSpec, pt: &TorusPoint) -> f64 {
    let a = pt.angles();
    let pairs = [(0, 1), (0, 2), (1, 2)];
    let mut prod = spec.normaliser();
    for (l, j) in pairs {
        let c = (a[l] - a[j]).cos();
        let vandermonde = 2.0 - 2.0 * c;
        match *spec {
            MeasureSpec::SatoTate => prod *= vandermonde,
            MeasureSpec::Plancherel { p } => {
                let r = 1.0 / p as f64;
                prod *= vandermonde / (1.0 - 2.0 * r * c + r * r);
            }
        }
    }
    prod
}

/// Periodic trapezoid rule with `K x K` nodes on `[0, 2 pi)^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureGrid {
    resolution: usize,
}

impl QuadratureGrid {
    pub const DEFAULT_RESOLUTION: usize = 64;
    pub const MAX_RESOLUTION: usize = 1024;

    pub fn new(resolution: usize) -> Result<Self> {
        if resolution < 8 {
            return Err(Error::invalid("resolution", format!("K must be at least 8, got {resolution}")));
        }
        Ok(QuadratureGrid { resolution })
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn step(&self) -> f64 {
        TAU / self.resolution as f64
    }

    pub fn weight(&self) -> f64 {
        self.step() * self.step()
    }

    pub fn node(&self, i: usize, j: usize) -> TorusPoint {
        TorusPoint::new(i as f64 * self.step(), j as f64 * self.step())
    }

    pub fn doubled(&self) -> QuadratureGrid {
        QuadratureGrid {
            resolution: self.resolution * 2,
        }
    }
}

impl Default for QuadratureGrid {
    fn default() -> Self {
        QuadratureGrid {
            resolution: Self::DEFAULT_RESOLUTION,
        }
    }
}

/// `int f dmu` by the periodic trapezoid rule. Rows are summed in parallel
/// and reduced in row order, so the result does not depend on scheduling.
pub fn integrate<F>(spec: &MeasureSpec, f: F, grid: &QuadratureGrid) -> Complex64
where
    F: Fn(&TorusPoint) -> Complex64 + Sync,
{
    let k = grid.resolution();
    let rows: Vec<Complex64> = (0..k)
        .into_par_iter()
        .map(|i| {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..k {
                let pt = grid.node(i, j);
                acc += f(&pt) * density(spec, &pt);
            }
            acc
        })
        .collect();
    rows.into_iter().sum::<Complex64>() * grid.weight()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub resolution: usize,
}

/// Doubles the grid from `start` until two successive values agree within
/// `tol`, failing once the resolution would exceed `max_resolution`.
pub fn integrate_to_tolerance<F>(
    spec: &MeasureSpec,
    f: F,
    start: &QuadratureGrid,
    tol: f64,
    max_resolution: usize,
) -> Result<Quadrature>
where
    F: Fn(&TorusPoint) -> Complex64 + Sync,
{
    let mut grid = *start;
    let mut previous = integrate(spec, &f, &grid);
    while grid.resolution() * 2 <= max_resolution {
        grid = grid.doubled();
        let value = integrate(spec, &f, &grid);
        if (value - previous).norm() <= tol {
            return Ok(Quadrature {
                value,
                resolution: grid.resolution(),
            });
        }
        previous = value;
    }
    Err(Error::QuadratureNonConvergence { tol, max_resolution })
}

const SAMPLE_CHUNK: usize = 4096;

/// I.i.d. draws by rejection against the uniform envelope on the torus.
/// Chunk `c` of 4096 points uses stream `c` of `seed`.
pub fn sample(spec: &MeasureSpec, count: usize, seed: u64) -> Result<Vec<TorusPoint>> {
    if count == 0 {
        return Err(Error::invalid("count", "must be at least 1"));
    }
    let bound = spec.density_bound();
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let parts: Vec<Result<Vec<TorusPoint>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let n = SAMPLE_CHUNK.min(count - c * SAMPLE_CHUNK);
            let mut rng = rng::stream(seed, c as u64);
            let mut out = Vec::with_capacity(n);
            while out.len() < n {
                let pt = TorusPoint::new(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
                let d = density(spec, &pt);
                if d > bound {
                    return Err(Error::EnvelopeExceeded { density: d, bound });
                }
                if rng.gen::<f64>() * bound < d {
                    out.push(pt);
                }
            }
            Ok(out)
        })
        .collect();
    let mut points = Vec::with_capacity(count);
    for part in parts {
        points.extend(part?);
    }
    Ok(points)
}

/// `W(q) = sum_w q^{length(w)}` as a formal polynomial.
pub fn weyl_poincare() -> QPolynomial {
    WEYL_GROUP
        .iter()
        .fold(QPolynomial::zero(), |acc, w| &acc + &QPolynomial::monomial(w.length() as usize, 1))
}

pub fn weyl_poincare_at(q: f64) -> f64 {
    weyl_poincare().eval(q)
}

pub fn write_samples_csv<W: Write>(points: &[TorusPoint], mut out: W) -> Result<()> {
    writeln!(out, "theta1,theta2")?;
    for pt in points {
        writeln!(out, "{},{}", pt.theta1, pt.theta2)?;
    }
    Ok(())
}

pub fn write_density_csv<W: Write>(spec: &MeasureSpec, grid: &QuadratureGrid, mut out: W) -> Result<()> {
    writeln!(out, "theta1,theta2,density")?;
    for i in 0..grid.resolution() {
        for j in 0..grid.resolution() {
            let pt = grid.node(i, j);
            writeln!(out, "{},{},{}", pt.theta1, pt.theta2, density(spec, &pt))?;
        }
    }
    Ok(())
}

/// Spectral parameters `(nu1, nu2)` with `nu3 = -nu1 - nu2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    pub nu1: Complex64,
    pub nu2: Complex64,
}

impl SpectralPoint {
    pub fn new(nu1: Complex64, nu2: Complex64) -> Self {
        SpectralPoint { nu1, nu2 }
    }

    pub fn imaginary(t1: f64, t2: f64) -> Self {
        SpectralPoint::new(Complex64::new(0.0, t1), Complex64::new(0.0, t2))
    }

    pub fn nu3(&self) -> Complex64 {
        -self.nu1 - self.nu2
    }

    pub fn nus(&self) -> [Complex64; 3] {
        [self.nu1, self.nu2, self.nu3()]
    }

    /// Langlands parameters `(2 nu1 + nu2, nu2 - nu1, -nu1 - 2 nu2)`.
    pub fn langlands(&self) -> [Complex64; 3] {
        [
            self.nu1 * 2.0 + self.nu2,
            self.nu2 - self.nu1,
            -self.nu1 - self.nu2 * 2.0,
        ]
    }

    pub fn from_langlands(alpha: [Complex64; 3]) -> Self {
        SpectralPoint::new((alpha[0] - alpha[1]) / 3.0, (alpha[1] - alpha[2]) / 3.0)
    }

    /// Weyl action by permuting the Langlands parameters.
    pub fn act(&self, w: WeylElement) -> SpectralPoint {
        SpectralPoint::from_langlands(w.apply(self.langlands()))
    }

    pub fn scale(&self, s: f64) -> SpectralPoint {
        SpectralPoint::new(self.nu1 * s, self.nu2 * s)
    }

    pub fn sub(&self, other: &SpectralPoint) -> SpectralPoint {
        SpectralPoint::new(self.nu1 - other.nu1, self.nu2 - other.nu2)
    }
}

/// Parameters of the spectral weight `h_T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub t: f64,
    pub nu0: SpectralPoint,
    pub eta: f64,
    pub a: u32,
}

impl WeightParams {
    pub const DEFAULT_ETA: f64 = 0.05;
    pub const DEFAULT_A: u32 = 4;

    pub fn new(t: f64, nu0: SpectralPoint, eta: f64, a: u32) -> Result<Self> {
        if !(t > 1.0) {
            return Err(Error::invalid("T", "must exceed 1"));
        }
        if nu0.nu1.re.abs() > 1e-12 || nu0.nu2.re.abs() > 1e-12 {
            return Err(Error::invalid("nu0", "must be purely imaginary"));
        }
        if !(eta > 0.0 && eta < 0.1) {
            return Err(Error::invalid("eta", "must lie in (0, 1/10)"));
        }
        if a < 1 {
            return Err(Error::invalid("A", "must be at least 1"));
        }
        Ok(WeightParams { t, nu0, eta, a })
    }

    pub fn with_defaults(t: f64, nu0: SpectralPoint) -> Result<Self> {
        WeightParams::new(t, nu0, Self::DEFAULT_ETA, Self::DEFAULT_A)
    }
}

fn psi(u: &SpectralPoint) -> Complex64 {
    let s: Complex64 = u.nus().iter().map(|v| v * v).sum();
    (s * 3.0).exp()
}

fn pole_polynomial(nu: &SpectralPoint, params: &WeightParams) -> Complex64 {
    let t2 = params.t * params.t;
    let mut prod = Complex64::new(1.0, 0.0);
    for n in 0..=params.a {
        let shift = (1.0 + 2.0 * n as f64).powi(2) / 9.0;
        for v in nu.nus() {
            prod *= (v * v - shift) / t2;
        }
    }
    prod
}

/// `h_T(nu) = P(nu)^2 (sum_w psi((w.nu - T nu0) / T^{1 - eta}))^2`.
///
/// Evaluated as `|P(nu)|^2 |sum_w psi(...)|^2`, which coincides with the
/// squared form wherever both factors are real (in particular on the
/// tempered axis `nu in (iR)^2` and on `R^2`).
pub fn h_t_eval(nu: &SpectralPoint, params: &WeightParams) -> f64 {
    let centre = params.nu0.scale(params.t);
    let width = params.t.powf(1.0 - params.eta);
    let gauss: Complex64 = WEYL_GROUP
        .iter()
        .map(|&w| psi(&nu.act(w).sub(&centre).scale(1.0 / width)))
        .sum();
    pole_polynomial(nu, params).norm_sqr() * gauss.norm_sqr()
}

const POLE_TOL: f64 = 1e-12;

/// `spec(nu) = (3 / 256 pi^5) prod_j 3 nu_j tan(3 pi nu_j / 2)`.
///
/// On the tempered axis each factor is `-3t tanh(3 pi t / 2) <= 0`, so the
/// value there is non-positive; the sign is absorbed by `dnu1 dnu2 = -dt1 dt2`.
pub fn spec_density(nu: &SpectralPoint) -> Result<Complex64> {
    let mut prod = Complex64::new(3.0 / (256.0 * PI.powi(5)), 0.0);
    for (index, v) in nu.nus().into_iter().enumerate() {
        let t = 3.0 * v.re;
        let odd = 2.0 * ((t - 1.0) / 2.0).round() + 1.0;
        if v.im.abs() <= POLE_TOL && (t - odd).abs() <= 3.0 * POLE_TOL {
            return Err(Error::Pole {
                index: index + 1,
                value: v.to_string(),
            });
        }
        prod *= v * 3.0 * (v * (1.5 * PI)).tan();
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{schur_eval, ExponentPair};

    #[test]
    fn density_examples() {
        let st = MeasureSpec::SatoTate;
        assert_eq!(density(&st, &TorusPoint::new(0.0, 0.0)), 0.0);
        let pl = MeasureSpec::plancherel(7).unwrap();
        assert_eq!(density(&pl, &TorusPoint::new(1.3, 1.3)), 0.0);
        let third = TorusPoint::new(2.0 * PI / 3.0, -2.0 * PI / 3.0);
        let expected = 27.0 / (24.0 * PI * PI);
        assert!((density(&st, &third) - expected).abs() < 1e-14);
    }

    #[test]
    fn plancherel_requires_prime() {
        assert!(matches!(MeasureSpec::plancherel(4), Err(Error::NotPrime(4))));
        assert!(MeasureSpec::plancherel(2).is_ok());
    }

    #[test]
    fn angle_reduction() {
        let pt = TorusPoint::new(-0.5, 7.0);
        assert!((pt.theta1() - (TAU - 0.5)).abs() < 1e-15);
        assert!((pt.theta2() - (7.0 - TAU)).abs() < 1e-15);
        let tiny = TorusPoint::new(-1e-300, 0.0);
        assert!(tiny.theta1() < TAU);
    }

    #[test]
    fn grid_rejects_coarse_resolution() {
        assert!(QuadratureGrid::new(4).is_err());
        let g = QuadratureGrid::new(8).unwrap();
        assert!((g.weight() * 64.0 - TAU * TAU).abs() < 1e-12);
    }

    #[test]
    fn total_mass_is_one() {
        let grid = QuadratureGrid::new(64).unwrap();
        let one = |_: &TorusPoint| Complex64::new(1.0, 0.0);
        let st = integrate(&MeasureSpec::SatoTate, one, &grid);
        assert!((st - 1.0).norm() <= 1e-10);
        for p in [2, 3, 5, 7, 101] {
            let m = integrate(&MeasureSpec::plancherel(p).unwrap(), one, &grid);
            assert!((m - 1.0).norm() <= 1e-8, "p = {p}: {m}");
        }
    }

    #[test]
    fn standard_character_has_unit_norm() {
        let norm_sq = |pt: &TorusPoint| Complex64::new(pt.satake().e1().norm_sqr(), 0.0);
        let a = integrate(&MeasureSpec::SatoTate, norm_sq, &QuadratureGrid::new(64).unwrap());
        let b = integrate(&MeasureSpec::SatoTate, norm_sq, &QuadratureGrid::new(128).unwrap());
        assert!((a - 1.0).norm() <= 1e-8);
        assert!((a - b).norm() <= 1e-12);
    }

    #[test]
    fn schur_orthonormality_under_sato_tate() {
        let grid = QuadratureGrid::new(64).unwrap();
        let pairs: Vec<ExponentPair> = (0..=2).flat_map(|a| (0..=2).map(move |b| ExponentPair::new(a, b))).collect();
        for &u in &pairs {
            for &v in &pairs {
                let g = integrate(
                    &MeasureSpec::SatoTate,
                    |pt| {
                        let x = pt.satake();
                        schur_eval(u, &x) * schur_eval(v, &x).conj()
                    },
                    &grid,
                );
                let delta = if u == v { 1.0 } else { 0.0 };
                assert!((g - delta).norm() <= 1e-7, "{u:?} {v:?}: {g}");
            }
        }
    }

    #[test]
    fn density_is_weyl_invariant() {
        let specs = [MeasureSpec::SatoTate, MeasureSpec::Plancherel { p: 3 }];
        let mut r = rng::stream(31, 0);
        for _ in 0..200 {
            let pt = TorusPoint::new(r.gen_range(0.0..TAU), r.gen_range(0.0..TAU));
            for spec in &specs {
                let d0 = density(spec, &pt);
                for w in WEYL_GROUP {
                    assert!((density(spec, &pt.permute(w)) - d0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn envelope_dominates_density() {
        let grid = QuadratureGrid::new(256).unwrap();
        for spec in [
            MeasureSpec::SatoTate,
            MeasureSpec::Plancherel { p: 2 },
            MeasureSpec::Plancherel { p: 1009 },
        ] {
            let bound = spec.density_bound();
            for i in 0..256 {
                for j in 0..256 {
                    assert!(density(&spec, &grid.node(i, j)) <= bound);
                }
            }
        }
    }

    #[test]
    fn plancherel_tends_to_sato_tate() {
        let grid = QuadratureGrid::new(32).unwrap();
        let sup_diff = |p: u64| {
            let spec = MeasureSpec::Plancherel { p };
            let mut worst = 0.0f64;
            for i in 0..32 {
                for j in 0..32 {
                    let pt = grid.node(i, j);
                    worst = worst.max((density(&spec, &pt) - density(&MeasureSpec::SatoTate, &pt)).abs());
                }
            }
            worst
        };
        let diffs: Vec<f64> = [2, 11, 101, 1009].iter().map(|&p| sup_diff(p)).collect();
        assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
    }

    #[test]
    fn sampler_is_deterministic() {
        let spec = MeasureSpec::Plancherel { p: 3 };
        let a = sample(&spec, 5000, 42).unwrap();
        let b = sample(&spec, 5000, 42).unwrap();
        let c = sample(&spec, 5000, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert!(sample(&spec, 0, 1).is_err());
    }

    fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn sampled_moments() {
        let pts = sample(&MeasureSpec::Plancherel { p: 5 }, 100_000, 1).unwrap();
        let adj: Vec<f64> = pts.iter().map(|p| p.adjoint_value()).collect();
        let (m, se) = mean_and_stderr(&adj);
        assert!((m - 0.24).abs() <= 3.0 * se, "{m} +- {se}");

        let pts = sample(&MeasureSpec::SatoTate, 100_000, 2).unwrap();
        let e1: Vec<Complex64> = pts.iter().map(|p| p.satake().e1()).collect();
        let re: Vec<f64> = e1.iter().map(|z| z.re).collect();
        let im: Vec<f64> = e1.iter().map(|z| z.im).collect();
        for part in [re, im] {
            let (m, se) = mean_and_stderr(&part);
            assert!(m.abs() <= 3.0 * se, "{m} +- {se}");
        }
    }

    #[test]
    fn poincare_polynomial() {
        assert_eq!(weyl_poincare().coeffs(), &[1, 2, 2, 1]);
        assert_eq!(weyl_poincare_at(0.0), 1.0);
        assert_eq!(weyl_poincare_at(1.0), 6.0);
    }

    #[test]
    fn langlands_round_trip() {
        let nu = SpectralPoint::new(Complex64::new(0.1, 2.0), Complex64::new(-0.3, 0.5));
        let back = SpectralPoint::from_langlands(nu.langlands());
        assert!((back.nu1 - nu.nu1).norm() < 1e-15 && (back.nu2 - nu.nu2).norm() < 1e-15);
        let l = nu.langlands();
        assert!((l[0] + l[1] + l[2]).norm() < 1e-15);
    }

    fn weight_params() -> WeightParams {
        WeightParams::with_defaults(20.0, SpectralPoint::imaginary(0.37, 0.11)).unwrap()
    }

    #[test]
    fn weight_is_nonnegative_and_invariant() {
        let params = weight_params();
        let mut r = rng::stream(32, 0);
        for _ in 0..200 {
            let nu = if r.gen_bool(0.5) {
                SpectralPoint::imaginary(r.gen_range(-30.0..30.0), r.gen_range(-30.0..30.0))
            } else {
                SpectralPoint::new(
                    Complex64::new(r.gen_range(-0.3..0.3), r.gen_range(-30.0..30.0)),
                    Complex64::new(r.gen_range(-0.3..0.3), r.gen_range(-30.0..30.0)),
                )
            };
            let h = h_t_eval(&nu, &params);
            assert!(h >= 0.0);
            for w in WEYL_GROUP {
                let hw = h_t_eval(&nu.act(w), &params);
                assert!((hw - h).abs() <= 1e-9 * h.max(1e-300), "{hw} vs {h}");
            }
        }
    }

    #[test]
    fn weight_decays_away_from_centre() {
        let params = weight_params();
        let centre = params.nu0.scale(params.t);
        let peak = h_t_eval(&centre, &params);
        assert!(peak > 0.0);
        let r = 10.0 * params.t.powf(1.0 - params.eta);
        for k in 0..8 {
            let phi = k as f64 * TAU / 8.0;
            let nu = SpectralPoint::new(
                centre.nu1 + Complex64::new(0.0, r * phi.cos()),
                centre.nu2 + Complex64::new(0.0, r * phi.sin()),
            );
            assert!(h_t_eval(&nu, &params) <= 1e-6 * peak);
        }
    }

    #[test]
    fn weight_params_validation() {
        let nu0 = SpectralPoint::imaginary(1.0, 0.0);
        assert!(WeightParams::new(1.0, nu0, 0.05, 4).is_err());
        assert!(WeightParams::new(10.0, nu0, 0.2, 4).is_err());
        assert!(WeightParams::new(10.0, nu0, 0.05, 0).is_err());
        assert!(WeightParams::new(10.0, SpectralPoint::new(Complex64::new(0.1, 0.0), Complex64::new(0.0, 1.0)), 0.05, 4).is_err());
    }

    #[test]
    fn spectral_density_values() {
        let nu = SpectralPoint::imaginary(1.0, 1.0);
        let v = spec_density(&nu).unwrap();
        // 3 nu tan(3 pi nu / 2) at nu = i t equals -3 t tanh(3 pi t / 2).
        let factor = |t: f64| -3.0 * t * (1.5 * PI * t).tanh();
        let expected = 3.0 / (256.0 * PI.powi(5)) * factor(1.0) * factor(1.0) * factor(-2.0);
        assert!((v.re - expected).abs() <= 1e-15 * expected.abs());
        assert!(v.im.abs() <= 1e-15 * expected.abs());
        const FROZEN: f64 = -2.0672142529507666e-3;
        assert!((v.re - FROZEN).abs() <= 1e-17);

        let perm = SpectralPoint::new(nu.nu3(), nu.nu1);
        assert!((spec_density(&perm).unwrap() - v).norm() <= 1e-15);
    }

    #[test]
    fn spectral_density_poles() {
        let third = SpectralPoint::new(Complex64::new(1.0 / 3.0, 0.0), Complex64::new(0.2, 0.0));
        assert!(matches!(spec_density(&third), Err(Error::Pole { index: 1, .. })));
        let minus_one = SpectralPoint::new(Complex64::new(0.2, 0.0), Complex64::new(-1.0, 0.0));
        assert!(matches!(spec_density(&minus_one), Err(Error::Pole { index: 2, .. })));
        let nu3_pole = SpectralPoint::new(Complex64::new(-0.5, 0.0), Complex64::new(-0.5, 0.0));
        // nu3 = 1, an odd multiple of 1/3
        assert!(matches!(spec_density(&nu3_pole), Err(Error::Pole { index: 3, .. })));
        assert!(spec_density(&SpectralPoint::new(Complex64::new(2.0 / 3.0, 0.0), Complex64::new(0.1, 0.0))).is_ok());
    }

    #[test]
    fn csv_headers() {
        let mut buf = Vec::new();
        write_samples_csv(&[TorusPoint::new(1.0, 2.0)], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "theta1,theta2\n1,2\n");
        let mut buf = Vec::new();
        write_density_csv(&MeasureSpec::SatoTate, &QuadratureGrid::new(8).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("theta1,theta2,density\n0,0,0\n"));
        assert_eq!(text.lines().count(), 65);
    }
}
