use num_complex::Complex64;

use super::{GL2FormData, PrimeLocalData, SatakeTriple};
use crate::{Error, Result};

const LAMBDA_SLACK: f64 = 1e-12;

/// Satake data of the symmetric-square lift.
///
/// Writing `lambda = b + 1/b` with `|b| = 1`, the lift has Satake triple
/// `(b^2, 1, b^-2)` and hence `A(p, 1) = lambda^2 - 1`. At `lambda = 2` we
/// take `b = 1` and at `lambda = -2`, `b = -1`.
pub fn sym2_lift(g: &GL2FormData) -> Result<Vec<PrimeLocalData>> {
    let bad: Vec<u64> = g
        .pairs
        .iter()
        .filter(|(_, l)| !l.is_finite() || l.abs() > 2.0 + LAMBDA_SLACK)
        .map(|&(p, _)| p)
        .collect();
    if !bad.is_empty() {
        return Err(Error::NonTempered(bad));
    }
    g.pairs
        .iter()
        .map(|&(p, lambda)| {
            let theta = (lambda / 2.0).clamp(-1.0, 1.0).acos();
            let b2 = Complex64::from_polar(1.0, 2.0 * theta);
            let satake = SatakeTriple::new([b2, Complex64::new(1.0, 0.0), b2.conj()])?;
            PrimeLocalData::new(p, satake)
        })
        .collect()
}
