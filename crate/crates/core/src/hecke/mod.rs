//! Exact coefficient calculus for SL(3) Hecke eigenforms.
//!
//! Index convention: `A(p^b1, p^b2)` is the Schur polynomial of the
//! partition `(b1 + b2, b2, 0)` evaluated at the Satake parameters of the
//! form at `p`. So `A(p, 1)` is the character of the standard
//! representation, `A(1, p)` that of its dual and `A(p, p)` that of the
//! adjoint representation shifted by the trivial one.

mod lift;
mod schur;
mod table;
mod tau;

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;

use crate::arith::is_prime;
use crate::{Error, Result};

pub use lift::sym2_lift;
pub use schur::{coeff_from_satake, complete_homogeneous, schur_eval, schur_from_elementary};
pub use table::{extend_multiplicative, hecke_residual, mobius_expand, CoefficientTable};
pub use tau::{ramanujan_tau, TauSeries};

pub const SATAKE_PRODUCT_TOL: f64 = 1e-12;
pub const TEMPERED_TOL: f64 = 1e-12;

/// Local data of a form at a prime: three complex numbers with product one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatakeTriple {
    alpha: [Complex64; 3],
    tempered: bool,
}

impl SatakeTriple {
    pub fn new(alpha: [Complex64; 3]) -> Result<Self> {
        if alpha.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidSatake("non-finite parameter".into()));
        }
        let prod = alpha[0] * alpha[1] * alpha[2];
        if (prod - 1.0).norm() > SATAKE_PRODUCT_TOL {
            return Err(Error::InvalidSatake(format!(
                "product of parameters is {prod}, not 1"
            )));
        }
        let tempered = alpha.iter().all(|a| (a.norm() - 1.0).abs() <= TEMPERED_TOL);
        Ok(SatakeTriple { alpha, tempered })
    }

    /// The tempered triple `(e^{i t1}, e^{i t2}, e^{-i(t1 + t2)})`.
    pub fn from_angles(theta1: f64, theta2: f64) -> Self {
        let alpha = [
            Complex64::from_polar(1.0, theta1),
            Complex64::from_polar(1.0, theta2),
            Complex64::from_polar(1.0, -(theta1 + theta2)),
        ];
        SatakeTriple {
            alpha,
            tempered: true,
        }
    }

    /// The degenerate point `(1, 1, 1)`.
    pub fn identity() -> Self {
        SatakeTriple::from_angles(0.0, 0.0)
    }

    /// Uniform (Haar) random tempered triple.
    pub fn random_tempered<R: Rng + ?Sized>(rng: &mut R) -> Self {
        SatakeTriple::from_angles(rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU))
    }

    pub fn alpha(&self) -> [Complex64; 3] {
        self.alpha
    }

    pub fn is_tempered(&self) -> bool {
        self.tempered
    }

    pub fn e1(&self) -> Complex64 {
        self.alpha[0] + self.alpha[1] + self.alpha[2]
    }

    pub fn e2(&self) -> Complex64 {
        let [a, b, c] = self.alpha;
        a * b + b * c + c * a
    }
}

/// Exponents `(b1, b2)` of `A(p^b1, p^b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentPair {
    pub beta1: u32,
    pub beta2: u32,
}

impl ExponentPair {
    pub fn new(beta1: u32, beta2: u32) -> Self {
        ExponentPair { beta1, beta2 }
    }

    /// The associated partition `(b1 + b2, b2, 0)`, without the trailing zero.
    pub fn partition(&self) -> (u32, u32) {
        (self.beta1 + self.beta2, self.beta2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimeLocalData {
    pub p: u64,
    pub satake: SatakeTriple,
}

impl PrimeLocalData {
    pub fn new(p: u64, satake: SatakeTriple) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeLocalData { p, satake })
    }
}

/// Normalised Hecke eigenvalues `lambda_g(p)` of a GL(2) form at primes.
#[derive(Debug, Clone, PartialEq)]
pub struct GL2FormData {
    pub pairs: Vec<(u64, f64)>,
    pub ramanujan: bool,
}

impl GL2FormData {
    pub fn new(pairs: Vec<(u64, f64)>) -> Self {
        let ramanujan = pairs.iter().all(|&(_, l)| l.abs() <= 2.0);
        GL2FormData { pairs, ramanujan }
    }
}

/// Local data for every prime up to `limit`, Haar-random and tempered.
pub fn random_tempered_locals<R: Rng + ?Sized>(rng: &mut R, limit: u64) -> Vec<PrimeLocalData> {
    crate::arith::primes_up_to(limit)
        .into_iter()
        .map(|p| PrimeLocalData {
            p,
            satake: SatakeTriple::random_tempered(rng),
        })
        .collect()
}

/// Random self-dual tempered local data `(b, 1, 1/b)` with `|b| = 1`.
pub fn random_self_dual_locals<R: Rng + ?Sized>(rng: &mut R, limit: u64) -> Vec<PrimeLocalData> {
    crate::arith::primes_up_to(limit)
        .into_iter()
        .map(|p| PrimeLocalData {
            p,
            satake: SatakeTriple::from_angles(rng.gen_range(0.0..TAU), 0.0),
        })
        .collect()
}
