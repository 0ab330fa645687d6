//! Schur polynomials of SL(3) via Jacobi–Trudi.
//!
//! With `e3 = x1 x2 x3 = 1` the complete homogeneous polynomials obey
//! `h_k = e1 h_{k-1} - e2 h_{k-2} + h_{k-3}`, so every Schur polynomial is an
//! integer polynomial in `e1, e2`. Evaluating through this route has no
//! Vandermonde denominator and is stable at coincident parameters.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{ExponentPair, PrimeLocalData, SatakeTriple};

/// `h_0, ..., h_upto` over any commutative ring, given `e1` and `e2`.
pub fn complete_homogeneous<T>(e1: &T, e2: &T, upto: usize) -> Vec<T>
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut h: Vec<T> = Vec::with_capacity(upto + 1);
    h.push(T::one());
    for k in 1..=upto {
        let mut next = e1.clone() * h[k - 1].clone();
        if k >= 2 {
            next = next - e2.clone() * h[k - 2].clone();
        }
        if k >= 3 {
            next = next + h[k - 3].clone();
        }
        h.push(next);
    }
    h
}

/// `s_(l1, l2, 0) = h_{l1} h_{l2} - h_{l1+1} h_{l2-1}` from a precomputed
/// `h` table (which must reach index `l1 + 1` when `l2 > 0`).
fn jacobi_trudi<T>(h: &[T], l1: usize, l2: usize) -> T
where
    T: Clone + Mul<Output = T> + Sub<Output = T>,
{
    if l2 == 0 {
        h[l1].clone()
    } else {
        h[l1].clone() * h[l2].clone() - h[l1 + 1].clone() * h[l2 - 1].clone()
    }
}

/// Schur polynomial attached to `A(p^b1, p^b2)` as an element of any ring
/// holding `e1, e2`.
pub fn schur_from_elementary<T>(pair: ExponentPair, e1: &T, e2: &T) -> T
where
    T: Clone + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let (l1, l2) = pair.partition();
    let h = complete_homogeneous(e1, e2, l1 as usize + 1);
    jacobi_trudi(&h, l1 as usize, l2 as usize)
}

/// `S_{b2,b1}(x)`, the Schur polynomial of the partition `(b1 + b2, b2, 0)`.
pub fn schur_eval(pair: ExponentPair, x: &SatakeTriple) -> Complex64 {
    schur_from_elementary(pair, &x.e1(), &x.e2())
}

/// All local coefficients `A(p^a, p^b)` for `0 <= a, b <= max_exp`.
pub fn coeff_from_satake(local: &PrimeLocalData, max_exp: u32) -> BTreeMap<(u32, u32), Complex64> {
    let grid = LocalGrid::new(&local.satake, max_exp, max_exp);
    let mut out = BTreeMap::new();
    for a in 0..=max_exp {
        for b in 0..=max_exp {
            out.insert((a, b), grid.get(a, b));
        }
    }
    out
}

/// Dense `A(p^a, p^b)` grid used when building tables.
#[derive(Debug, Clone)]
pub(crate) struct LocalGrid {
    max_b: u32,
    values: Vec<Complex64>,
}

impl LocalGrid {
    pub(crate) fn new(x: &SatakeTriple, max_a: u32, max_b: u32) -> Self {
        let h = complete_homogeneous(&x.e1(), &x.e2(), (max_a + max_b + 1) as usize);
        let mut values = Vec::with_capacity(((max_a + 1) * (max_b + 1)) as usize);
        for a in 0..=max_a {
            for b in 0..=max_b {
                values.push(jacobi_trudi(&h, (a + b) as usize, b as usize));
            }
        }
        LocalGrid { max_b, values }
    }

    pub(crate) fn get(&self, a: u32, b: u32) -> Complex64 {
        self.values[(a * (self.max_b + 1) + b) as usize]
    }
}
