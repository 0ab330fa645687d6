//! Kostant q-partitions and Lusztig q-analogues of weight multiplicity for A2.

use std::ops::{Add, Sub};

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::is_prime;
use crate::hecke::{schur_eval, ExponentPair};
use crate::measures::{integrate_to_tolerance, MeasureSpec, QuadratureGrid};
use crate::qpoly::QPolynomial;
use crate::weyl::{WeylElement, WEYL_GROUP};
use crate::{Error, Result};

/// An integral weight of GL(3) modulo the diagonal `(1, 1, 1)`, stored with
/// minimum coordinate zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Weight {
    coords: [i64; 3],
}

impl Weight {
    pub fn new(coords: [i64; 3]) -> Self {
        let m = *coords.iter().min().unwrap();
        Weight {
            coords: [coords[0] - m, coords[1] - m, coords[2] - m],
        }
    }

    pub fn zero() -> Self {
        Weight::new([0, 0, 0])
    }

    pub fn coords(&self) -> [i64; 3] {
        self.coords
    }

    pub fn lambda1() -> Self {
        Weight::new([1, 0, 0])
    }

    pub fn lambda2() -> Self {
        Weight::new([1, 1, 0])
    }

    pub fn rho() -> Self {
        Weight::new([2, 1, 0])
    }

    pub fn positive_roots() -> [Weight; 3] {
        [Weight::new([1, -1, 0]), Weight::new([0, 1, -1]), Weight::new([1, 0, -1])]
    }

    /// `aleph(l2, l1) = l1 * lambda1 + l2 * lambda2`, the highest weight
    /// whose spherical function at `p` is `A(p^l1, p^l2)`.
    pub fn aleph(l2: u32, l1: u32) -> Self {
        let (l1, l2) = (l1 as i64, l2 as i64);
        Weight::new([l1 + l2, l2, 0])
    }

    pub fn permute(&self, w: WeylElement) -> Self {
        Weight::new(w.apply(self.coords))
    }

    pub fn is_dominant(&self) -> bool {
        self.coords[0] >= self.coords[1] && self.coords[1] >= self.coords[2]
    }

    pub fn in_root_lattice(&self) -> bool {
        self.coords.iter().sum::<i64>().rem_euclid(3) == 0
    }

    /// Representative with coordinate sum zero, if one exists in `Z^3`.
    fn sum_zero(&self) -> Option<[i64; 3]> {
        if !self.in_root_lattice() {
            return None;
        }
        let s = self.coords.iter().sum::<i64>() / 3;
        Some([self.coords[0] - s, self.coords[1] - s, self.coords[2] - s])
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, o: Weight) -> Weight {
        Weight::new([
            self.coords[0] + o.coords[0],
            self.coords[1] + o.coords[1],
            self.coords[2] + o.coords[2],
        ])
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, o: Weight) -> Weight {
        Weight::new([
            self.coords[0] - o.coords[0],
            self.coords[1] - o.coords[1],
            self.coords[2] - o.coords[2],
        ])
    }
}

/// `P_q(beta) = sum q^{n1 + n2 + n3}` over `beta = n1 a1 + n2 a2 + n3 (a1 + a2)`.
///
/// With `beta` written as `(b1, b2, b3)`, coordinate sum zero, the long-root
/// count `k` determines `n1 = b1 - k` and `n2 = -b3 - k`.
pub fn kostant_partition(beta: Weight) -> QPolynomial {
    let Some([b1, _, b3]) = beta.sum_zero() else {
        return QPolynomial::zero();
    };
    if b1 < 0 || b3 > 0 {
        return QPolynomial::zero();
    }
    let mut poly = QPolynomial::zero();
    for k in 0..=b1.min(-b3) {
        poly = &poly + &QPolynomial::monomial((b1 - b3 - k) as usize, 1);
    }
    poly
}

/// `sum_w (-1)^{l(w)} P_q(w(lambda + rho) - (beta + rho))`.
pub fn lusztig_q_analog(lambda: Weight, beta: Weight) -> QPolynomial {
    let shifted = lambda + Weight::rho();
    let target = beta + Weight::rho();
    WEYL_GROUP.iter().fold(QPolynomial::zero(), |acc, &w| {
        let term = kostant_partition(shifted.permute(w) - target);
        if w.sign() > 0 {
            &acc + &term
        } else {
            &acc - &term
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KatoRecord {
    pub l1: u32,
    pub l2: u32,
    pub p: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

pub const KATO_MAX_INDEX: u32 = 6;
const KATO_TOLERANCE: f64 = 1e-10;

/// Compares the exact value of the q-analogue at `q = 1/p` with the
/// integral of `Re S_{l1,l2}` against the Plancherel measure at `p`.
pub fn kato_check(l1: u32, l2: u32, p: u64, grid: &QuadratureGrid) -> Result<KatoRecord> {
    if l1 > KATO_MAX_INDEX || l2 > KATO_MAX_INDEX {
        return Err(Error::invalid("l1/l2", format!("indices are limited to {KATO_MAX_INDEX}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let exact = lusztig_q_analog(Weight::aleph(l2, l1), Weight::zero()).eval_at_inverse(p);
    let lhs = exact.to_f64().unwrap_or(f64::NAN);
    let pair = ExponentPair::new(l1, l2);
    let rhs = integrate_to_tolerance(
        &MeasureSpec::Plancherel { p },
        |pt| Complex64::new(schur_eval(pair, &pt.satake()).re, 0.0),
        grid,
        KATO_TOLERANCE,
        QuadratureGrid::MAX_RESOLUTION,
    )?
    .value
    .re;
    Ok(KatoRecord {
        l1,
        l2,
        p,
        lhs,
        rhs,
        diff: (lhs - rhs).abs(),
    })
}
