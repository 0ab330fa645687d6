//! Integer polynomials in a formal variable `q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Exact integer polynomial; `coeffs[k]` is the coefficient of `q^k`.
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct QPolynomial {
    coeffs: Vec<i64>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![1] }
    }

    pub fn monomial(power: usize, coeff: i64) -> Self {
        let mut c = vec![0; power + 1];
        c[power] = coeff;
        QPolynomial::new(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * q + c as f64)
    }

    /// Exact value at `q = 1/p`.
    pub fn eval_at_inverse(&self, p: u64) -> BigRational {
        let mut acc = BigRational::zero();
        let mut pow = BigRational::one();
        let step = BigRational::new(BigInt::one(), BigInt::from(p));
        for &c in &self.coeffs {
            acc += &pow * BigInt::from(c);
            pow *= &step;
        }
        acc
    }

    pub fn eval_at_inverse_f64(&self, p: u64) -> f64 {
        self.eval_at_inverse(p).to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let c = (0..n)
            .map(|i| self.coeffs.get(i).copied().unwrap_or(0) + rhs.coeffs.get(i).copied().unwrap_or(0))
            .collect();
        QPolynomial::new(c)
    }
}

impl Neg for &QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        QPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        self + &(-rhs)
    }
}

impl Mul for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut c = vec![0i64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPolynomial::new(c)
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "{}", if c < 0 { " - " } else { " + " })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "q")?,
                (1, _) => write!(f, "{a}q")?,
                (_, 1) => write!(f, "q^{k}")?,
                _ => write!(f, "{a}q^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_evaluates() {
        let p = QPolynomial::new(vec![1, 2, 2, 1, 0, 0]);
        assert_eq!(p.coeffs(), &[1, 2, 2, 1]);
        assert_eq!(p.eval(1.0), 6.0);
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.to_string(), "1 + 2q + 2q^2 + q^3");
    }

    #[test]
    fn arithmetic() {
        let a = QPolynomial::new(vec![0, 1, 1]);
        let b = QPolynomial::new(vec![1, -1]);
        assert_eq!((&a * &b).coeffs(), &[0, 1, 0, -1]);
        assert!((&a - &a).is_zero());
        let exact = a.eval_at_inverse(2);
        assert_eq!(exact, BigRational::new(3.into(), 4.into()));
    }
}
