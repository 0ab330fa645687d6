use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;

use super::schur::LocalGrid;
use super::PrimeLocalData;
use crate::arith::{divisors, gcd, Sieve};
use crate::{Error, Result};

/// Dense table of `A(m, n)` for `1 <= m <= bound_m`, `1 <= n <= bound_n`,
/// generated from local data by multiplicativity. Immutable once built.
#[derive(Debug, Clone)]
pub struct CoefficientTable {
    bound_m: u64,
    bound_n: u64,
    entries: Vec<Complex64>,
    locals: Vec<PrimeLocalData>,
}

impl CoefficientTable {
    pub fn bound_m(&self) -> u64 {
        self.bound_m
    }

    pub fn bound_n(&self) -> u64 {
        self.bound_n
    }

    pub fn locals(&self) -> &[PrimeLocalData] {
        &self.locals
    }

    pub fn contains(&self, m: u64, n: u64) -> bool {
        (1..=self.bound_m).contains(&m) && (1..=self.bound_n).contains(&n)
    }

    pub fn get(&self, m: u64, n: u64) -> Result<Complex64> {
        if !self.contains(m, n) {
            return Err(Error::OutOfBounds {
                m,
                n,
                bound_m: self.bound_m,
                bound_n: self.bound_n,
            });
        }
        Ok(self.entries[((m - 1) * self.bound_n + (n - 1)) as usize])
    }

    /// Largest `|A(m, n) - conj(A(n, m))|` over pairs where both are stored.
    pub fn max_hermitian_defect(&self) -> f64 {
        let k = self.bound_m.min(self.bound_n);
        let mut worst = 0.0f64;
        for m in 1..=k {
            for n in m..=k {
                let d = (self.entries[((m - 1) * self.bound_n + n - 1) as usize]
                    - self.entries[((n - 1) * self.bound_n + m - 1) as usize].conj())
                .norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// CSV export with header `m,n,re,im`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "m,n,re,im")?;
        for m in 1..=self.bound_m {
            for n in 1..=self.bound_n {
                let v = self.entries[((m - 1) * self.bound_n + (n - 1)) as usize];
                writeln!(out, "{m},{n},{},{}", v.re, v.im)?;
            }
        }
        Ok(())
    }
}

fn max_exponent(p: u64, bound: u64) -> u32 {
    let mut e = 0;
    let mut q = p;
    while q <= bound {
        e += 1;
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    e
}

/// Builds `A(m, n) = prod_p A(p^{v_p(m)}, p^{v_p(n)})` on the given bounds.
pub fn extend_multiplicative(
    locals: &[PrimeLocalData],
    bound_m: u64,
    bound_n: u64,
) -> Result<CoefficientTable> {
    if bound_m == 0 || bound_n == 0 {
        return Err(Error::invalid("bounds", "table bounds must be positive"));
    }
    let limit = bound_m.max(bound_n);
    let sieve = Sieve::new(limit);

    let mut by_prime: BTreeMap<u64, &PrimeLocalData> = BTreeMap::new();
    for l in locals {
        if by_prime.insert(l.p, l).is_some() {
            return Err(Error::invalid("locals", format!("prime {} listed twice", l.p)));
        }
    }
    let mut grids: Vec<Option<LocalGrid>> = vec![None; limit as usize + 1];
    for p in sieve.primes() {
        let local = by_prime.get(&p).ok_or(Error::MissingPrime(p))?;
        grids[p as usize] = Some(LocalGrid::new(
            &local.satake,
            max_exponent(p, bound_m),
            max_exponent(p, bound_n),
        ));
    }

    let factors: Vec<Vec<(u64, u32)>> = (1..=limit).map(|k| sieve.factor(k)).collect();
    let mut entries = Vec::with_capacity((bound_m * bound_n) as usize);
    for m in 1..=bound_m {
        let fm = &factors[(m - 1) as usize];
        for n in 1..=bound_n {
            let fn_ = &factors[(n - 1) as usize];
            entries.push(merged_product(fm, fn_, &grids));
        }
    }

    Ok(CoefficientTable {
        bound_m,
        bound_n,
        entries,
        locals: locals.to_vec(),
    })
}

fn merged_product(fm: &[(u64, u32)], fn_: &[(u64, u32)], grids: &[Option<LocalGrid>]) -> Complex64 {
    let mut value = Complex64::new(1.0, 0.0);
    let (mut i, mut j) = (0, 0);
    while i < fm.len() || j < fn_.len() {
        let pm = fm.get(i).map_or(u64::MAX, |f| f.0);
        let pn = fn_.get(j).map_or(u64::MAX, |f| f.0);
        let p = pm.min(pn);
        let a = if pm == p {
            i += 1;
            fm[i - 1].1
        } else {
            0
        };
        let b = if pn == p {
            j += 1;
            fn_[j - 1].1
        } else {
            0
        };
        let grid = grids[p as usize].as_ref().expect("grid for every prime below the bound");
        value *= grid.get(a, b);
    }
    value
}

/// `|A(m,1) A(m1,m2) - sum_{c1 c2 c3 = m, c1 | m1, c2 | m2} A(m1 c3 / c1, m2 c1 / c2)|`.
pub fn hecke_residual(table: &CoefficientTable, m: u64, m1: u64, m2: u64) -> Result<f64> {
    if m == 0 || m1 == 0 || m2 == 0 {
        return Err(Error::invalid("indices", "indices must be positive"));
    }
    let lhs = table.get(m, 1)? * table.get(m1, m2)?;
    let mut rhs = Complex64::new(0.0, 0.0);
    for c1 in divisors(gcd(m, m1)) {
        for c2 in divisors(gcd(m / c1, m2)) {
            let c3 = m / (c1 * c2);
            rhs += table.get(m1 * c3 / c1, m2 * c1 / c2)?;
        }
    }
    Ok((lhs - rhs).norm())
}

/// `sum_{d | (m1, m2)} mu(d) A(m1/d, 1) A(1, m2/d)`.
pub fn mobius_expand(table: &CoefficientTable, m1: u64, m2: u64) -> Result<Complex64> {
    if m1 == 0 || m2 == 0 {
        return Err(Error::invalid("indices", "indices must be positive"));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for d in divisors(gcd(m1, m2)) {
        let mu = crate::arith::mobius(d);
        if mu != 0 {
            total += table.get(m1 / d, 1)? * table.get(1, m2 / d)? * mu as f64;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::{random_tempered_locals, schur_eval, ExponentPair, SatakeTriple};
    use crate::rng::stream;
    use rand::Rng;

    fn degenerate_locals(limit: u64) -> Vec<PrimeLocalData> {
        crate::arith::primes_up_to(limit)
            .into_iter()
            .map(|p| PrimeLocalData::new(p, SatakeTriple::identity()).unwrap())
            .collect()
    }

    #[test]
    fn unit_entry_and_products() {
        let t = extend_multiplicative(&degenerate_locals(10), 10, 10).unwrap();
        assert_eq!(t.get(1, 1).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(t.get(6, 1).unwrap(), Complex64::new(9.0, 0.0));
    }

    #[test]
    fn single_prime_entry_matches_schur() {
        let mut rng = stream(21, 0);
        let locals = random_tempered_locals(&mut rng, 8);
        let t = extend_multiplicative(&locals, 8, 8).unwrap();
        let at2 = locals.iter().find(|l| l.p == 2).unwrap();
        let expected = schur_eval(ExponentPair::new(2, 1), &at2.satake);
        assert!((t.get(4, 2).unwrap() - expected).norm() < 1e-14);
    }

    #[test]
    fn missing_prime_is_named() {
        let mut locals = degenerate_locals(20);
        locals.retain(|l| l.p != 13);
        match extend_multiplicative(&locals, 20, 1) {
            Err(Error::MissingPrime(13)) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn out_of_bounds_is_reported() {
        let t = extend_multiplicative(&degenerate_locals(5), 5, 5).unwrap();
        assert!(matches!(t.get(6, 1), Err(Error::OutOfBounds { m: 6, n: 1, .. })));
        assert!(matches!(hecke_residual(&t, 5, 5, 1), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn hermitian_and_multiplicative() {
        let mut rng = stream(22, 0);
        let locals = random_tempered_locals(&mut rng, 60);
        let t = extend_multiplicative(&locals, 60, 60).unwrap();
        assert!(t.max_hermitian_defect() <= 1e-9);
        for _ in 0..500 {
            let (a, b, c, d) = (
                rng.gen_range(1..=7u64),
                rng.gen_range(1..=7u64),
                rng.gen_range(1..=8u64),
                rng.gen_range(1..=8u64),
            );
            if gcd(a * b, c * d) != 1 {
                continue;
            }
            let lhs = t.get(a * c, b * d).unwrap();
            let rhs = t.get(a, b).unwrap() * t.get(c, d).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
        }
    }

    #[test]
    fn residual_examples() {
        let mut rng = stream(23, 0);
        let locals = random_tempered_locals(&mut rng, 125);
        let t = extend_multiplicative(&locals, 125, 125).unwrap();
        assert_eq!(hecke_residual(&t, 1, 7, 9).unwrap(), 0.0);
        for p in [2u64, 3, 5, 7] {
            // A(p,1)^2 = A(p^2,1) + A(1,p)
            assert!(hecke_residual(&t, p, p, 1).unwrap() <= 1e-10);
        }
        assert!(hecke_residual(&t, 5, 5, 5).unwrap() <= 1e-8);
    }

    #[test]
    fn residual_by_direct_enumeration() {
        // Independent route: enumerate all ordered triples (c1, c2, c3).
        let mut rng = stream(24, 0);
        let locals = random_tempered_locals(&mut rng, 144);
        let t = extend_multiplicative(&locals, 144, 144).unwrap();
        for &(m, m1, m2) in &[(6u64, 4u64, 6u64), (12, 12, 2), (4, 6, 9), (9, 3, 3)] {
            let mut rhs = Complex64::new(0.0, 0.0);
            for c1 in 1..=m {
                for c2 in 1..=m {
                    if m % (c1 * c2) != 0 || m1 % c1 != 0 || m2 % c2 != 0 {
                        continue;
                    }
                    let c3 = m / (c1 * c2);
                    rhs += t.get(m1 * c3 / c1, m2 * c1 / c2).unwrap();
                }
            }
            let lhs = t.get(m, 1).unwrap() * t.get(m1, m2).unwrap();
            assert!((lhs - rhs).norm() <= 1e-9);
            assert!(hecke_residual(&t, m, m1, m2).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn mobius_examples() {
        let mut rng = stream(25, 0);
        let locals = random_tempered_locals(&mut rng, 50);
        let t = extend_multiplicative(&locals, 50, 50).unwrap();
        assert_eq!(mobius_expand(&t, 12, 1).unwrap(), t.get(12, 1).unwrap());
        for p in [2u64, 3, 5, 7] {
            let app = mobius_expand(&t, p, p).unwrap();
            let ap1 = t.get(p, 1).unwrap();
            assert!((app - (ap1.norm_sqr() - 1.0)).norm() <= 1e-12);
            assert!((app - t.get(p, p).unwrap()).norm() <= 1e-12);
        }
        for m1 in 1..=50 {
            for m2 in 1..=50 {
                let d = mobius_expand(&t, m1, m2).unwrap() - t.get(m1, m2).unwrap();
                assert!(d.norm() <= 1e-8, "({m1}, {m2})");
            }
        }
    }

    #[test]
    fn csv_export() {
        let t = extend_multiplicative(&degenerate_locals(2), 2, 1).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "m,n,re,im\n1,1,1,0\n2,1,3,0\n");
    }
}
