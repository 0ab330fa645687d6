//! Verification suites behind `verify --suite ...`.
//!
//! Every suite draws its randomness from `rng::stream(seed, k)` with a fixed
//! stream index `k` per suite, so a suite's report depends only on the seed.
//! `tol`, when given, replaces the default bound of the residual checks.

use std::collections::BTreeMap;

use clap::ValueEnum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use serde_json::json;

use super::{Check, SuiteOutcome};
use crate::arith::primes_up_to;
use crate::dirichlet::{build_mkd, d_estimate, euler_factor_check, mvt_ratio, DirichletPolynomial, DyadicRange};
use crate::hecke::{
    extend_multiplicative, hecke_residual, mobius_expand, ramanujan_tau, random_self_dual_locals,
    random_tempered_locals, schur_eval, sym2_lift, ExponentPair, PrimeLocalData, SatakeTriple,
};
use crate::kl_poly::kato_check;
use crate::measures::{integrate, MeasureSpec, QuadratureGrid, TorusPoint};
use crate::rng::{child_seed, stream};
use crate::sato_tate::{bernstein_coeffs, compare_on_unit_cells, expand_in_schur, EPoly};
use crate::sign_stats::{
    count_sign_changes, interval_change_scan, nonvanishing_density, partial_sum_abs, rankin_selberg_ratio,
    sign_balance, RealSequence, ShortIntervalConfig, Which, DEFAULT_ZERO_TOL,
};
use crate::{Complex64, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Hecke,
    Schur,
    Kato,
    Measures,
    Bernstein,
    Satotate,
    Signs,
    Euler,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 8] = [
        Suite::Hecke,
        Suite::Schur,
        Suite::Kato,
        Suite::Measures,
        Suite::Bernstein,
        Suite::Satotate,
        Suite::Signs,
        Suite::Euler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Hecke => "hecke",
            Suite::Schur => "schur",
            Suite::Kato => "kato",
            Suite::Measures => "measures",
            Suite::Bernstein => "bernstein",
            Suite::Satotate => "satotate",
            Suite::Signs => "signs",
            Suite::Euler => "euler",
            Suite::All => "all",
        }
    }

    fn stream_index(self) -> u64 {
        Suite::INDIVIDUAL.iter().position(|&s| s == self).map_or(0, |i| i as u64 + 1)
    }
}

pub fn run_suite(suite: Suite, seed: u64, tol: Option<f64>) -> Result<SuiteOutcome> {
    if suite == Suite::All {
        let mut checks = Vec::new();
        let mut details = BTreeMap::new();
        for s in Suite::INDIVIDUAL {
            let out = run_suite(s, seed, tol)?;
            checks.extend(out.checks);
            details.insert(s.name(), out.details);
        }
        return Ok(SuiteOutcome {
            checks,
            details: json!(details),
        });
    }
    let seed = child_seed(seed, suite.stream_index());
    match suite {
        Suite::Hecke => hecke(seed, tol),
        Suite::Schur => schur(tol),
        Suite::Kato => kato(tol),
        Suite::Measures => measures(tol),
        Suite::Bernstein => bernstein(),
        Suite::Satotate => satotate(seed),
        Suite::Signs => signs(),
        Suite::Euler => euler(seed, tol),
        Suite::All => unreachable!("handled above"),
    }
}

const HECKE_TABLE_BOUND: u64 = 2500;
const HECKE_TRIPLES: usize = 200;
const HECKE_MAX_INDEX: u64 = 50;

fn hecke(seed: u64, tol: Option<f64>) -> Result<SuiteOutcome> {
    let bound = tol.unwrap_or(1e-8);
    let mut r = stream(seed, 0);
    let locals = random_tempered_locals(&mut r, HECKE_TABLE_BOUND);
    let table = extend_multiplicative(&locals, HECKE_TABLE_BOUND, HECKE_TABLE_BOUND)?;

    let mut worst_hecke = 0.0f64;
    for _ in 0..HECKE_TRIPLES {
        let m = r.gen_range(1..=HECKE_MAX_INDEX);
        let m1 = r.gen_range(1..=HECKE_MAX_INDEX);
        let m2 = r.gen_range(1..=HECKE_MAX_INDEX);
        worst_hecke = worst_hecke.max(hecke_residual(&table, m, m1, m2)?);
    }
    let mut worst_mobius = 0.0f64;
    for m1 in 1..=HECKE_MAX_INDEX {
        for m2 in 1..=HECKE_MAX_INDEX {
            let diff = (mobius_expand(&table, m1, m2)? - table.get(m1, m2)?).norm();
            worst_mobius = worst_mobius.max(diff);
        }
    }
    Ok(SuiteOutcome {
        checks: vec![
            Check::at_most("hecke_residual", worst_hecke, bound),
            Check::at_most("mobius_expand", worst_mobius, bound),
        ],
        details: json!({
            "table_bound": HECKE_TABLE_BOUND,
            "triples": HECKE_TRIPLES,
            "max_index": HECKE_MAX_INDEX,
            "max_hecke_residual": worst_hecke,
            "max_mobius_residual": worst_mobius,
            "hermitian_defect": table.max_hermitian_defect(),
        }),
    })
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn schur(tol: Option<f64>) -> Result<SuiteOutcome> {
    let one = EPoly::constant(BigRational::one());
    let base = EPoly::e1() * EPoly::e2() - one;
    let expansion = expand_in_schur(&(base.clone() * base));
    let expected: BTreeMap<(u32, u32), BigRational> = [((0, 0), 1), ((1, 1), 2), ((2, 2), 1), ((3, 0), 1), ((0, 3), 1)]
        .into_iter()
        .map(|(k, c)| (k, rational(c)))
        .collect();
    let mut mismatches = expansion.terms().filter(|(k, c)| expected.get(k) != Some(c)).count();
    mismatches += expected.keys().filter(|&&(a, b)| expansion.coeff(a, b) != expected[&(a, b)]).count();

    // At the identity each S_{l1,l2} is the dimension of its representation.
    let identity = SatakeTriple::identity();
    let at_identity: f64 = expansion
        .terms()
        .map(|(&(a, b), c)| c.to_f64().unwrap_or(f64::NAN) * schur_eval(ExponentPair::new(a, b), &identity).re)
        .sum();
    let dimensions: BTreeMap<String, f64> = expected
        .keys()
        .map(|&(a, b)| (format!("{a},{b}"), schur_eval(ExponentPair::new(a, b), &identity).re))
        .collect();
    Ok(SuiteOutcome {
        checks: vec![
            Check::at_most("schur_expansion_mismatches", mismatches as f64, 0.0),
            Check::at_most("degenerate_point_sum", (at_identity - 64.0).abs(), tol.unwrap_or(1e-12)),
        ],
        details: json!({
            "expansion": expansion,
            "dimensions": dimensions,
            "value_at_identity": at_identity,
        }),
    })
}

const KATO_PRIMES: [u64; 4] = [2, 3, 5, 7];
const KATO_DEGREE: u32 = 5;

fn kato(tol: Option<f64>) -> Result<SuiteOutcome> {
    let bound = tol.unwrap_or(1e-6);
    let grid = QuadratureGrid::new(QuadratureGrid::DEFAULT_RESOLUTION)?;
    let mut records = Vec::new();
    for p in KATO_PRIMES {
        for total in 0..=KATO_DEGREE {
            for l1 in 0..=total {
                records.push(kato_check(l1, total - l1, p, &grid)?);
            }
        }
    }
    let worst = records.iter().map(|r| r.diff).fold(0.0, f64::max);
    let anchor = records
        .iter()
        .find(|r| (r.l1, r.l2, r.p) == (1, 1, 2))
        .expect("anchor lies in the scanned range");
    let anchor_err = (anchor.lhs - 0.75).abs().max((anchor.rhs - 0.75).abs());
    Ok(SuiteOutcome {
        checks: vec![
            Check::at_most("kato_identity", worst, bound),
            Check::at_most("kato_anchor_1_1_p2", anchor_err, bound),
        ],
        details: json!({ "records": records }),
    })
}

const MASS_PRIMES: [u64; 5] = [2, 3, 5, 7, 101];

fn measures(tol: Option<f64>) -> Result<SuiteOutcome> {
    let grid = QuadratureGrid::new(QuadratureGrid::DEFAULT_RESOLUTION)?;
    let one = |_: &TorusPoint| Complex64::new(1.0, 0.0);
    let mut masses = BTreeMap::new();
    masses.insert("sato_tate".to_string(), integrate(&MeasureSpec::SatoTate, one, &grid).re);
    for p in MASS_PRIMES {
        masses.insert(format!("plancherel_{p}"), integrate(&MeasureSpec::plancherel(p)?, one, &grid).re);
    }
    let mass_err = masses.values().map(|m| (m - 1.0).abs()).fold(0.0, f64::max);

    let pairs: Vec<ExponentPair> = (0..=2).flat_map(|a| (0..=2).map(move |b| ExponentPair::new(a, b))).collect();
    let mut ortho_err = 0.0f64;
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
            ortho_err = ortho_err.max((g - delta).norm());
        }
    }
    Ok(SuiteOutcome {
        checks: vec![
            Check::at_most("total_mass", mass_err, tol.unwrap_or(1e-8)),
            Check::at_most("schur_orthonormality", ortho_err, tol.unwrap_or(1e-7)),
        ],
        details: json!({
            "resolution": grid.resolution(),
            "masses": masses,
            "max_orthonormality_error": ortho_err,
        }),
    })
}

const BERNSTEIN_POWERS: u32 = 10;

fn bernstein() -> Result<SuiteOutcome> {
    let mut norms = BTreeMap::new();
    let mut all_bounded = true;
    let mut largest = 0.0f64;
    for l in 0..=BERNSTEIN_POWERS {
        let norm = bernstein_coeffs(l)?.l1_norm();
        all_bounded &= norm <= BigRational::one();
        largest = largest.max(norm.to_f64().unwrap_or(f64::NAN));
        norms.insert(l.to_string(), norm.to_string());
    }
    Ok(SuiteOutcome {
        checks: vec![Check::exact("bernstein_l1_norm", all_bounded, largest, 1.0)],
        details: json!({ "l1_norms": norms }),
    })
}

const ST_PRIMES: [u64; 2] = [2, 5];
const ST_SAMPLES: usize = 100_000;
const ST_SLACK: f64 = 0.01;

fn satotate(seed: u64) -> Result<SuiteOutcome> {
    let mut checks = Vec::new();
    let mut cells = BTreeMap::new();
    for (i, p) in ST_PRIMES.into_iter().enumerate() {
        let records = compare_on_unit_cells(p, ST_SAMPLES, child_seed(seed, i as u64))?;
        let excess = records
            .iter()
            .map(|r| r.diff - r.mass_uncertainty)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::at_most(format!("st_cells_p{p}"), excess, ST_SLACK));
        cells.insert(p.to_string(), records);
    }
    Ok(SuiteOutcome {
        checks,
        details: json!({ "samples": ST_SAMPLES, "cells": cells }),
    })
}

/// `ceil(x^(1/k))` in exact integer arithmetic.
pub fn ceil_root(x: u64, k: u32) -> u64 {
    let mut r = (x as f64).powf(1.0 / k as f64).ceil() as u64;
    while r > 1 && (r - 1).checked_pow(k).is_some_and(|v| v >= x) {
        r -= 1;
    }
    while r.checked_pow(k).is_some_and(|v| v < x) {
        r += 1;
    }
    r.max(1)
}

/// The Sym^2 lift of Ramanujan's Delta as `A(m, 1)` for `m <= n`.
pub fn sym2_tau_sequence(n: u64) -> Result<RealSequence> {
    let tau = ramanujan_tau(n as usize)?;
    let locals = sym2_lift(&tau.to_gl2())?;
    RealSequence::from_locals(&locals, n, Which::Am1)
}

const SIGNS_LENGTH: u64 = 100_000;
const SIGNS_SCAN_X: u64 = 49_000;
const RANKIN_SELBERG_X: [u64; 3] = [1_000, 10_000, 100_000];

fn signs() -> Result<SuiteOutcome> {
    let seq = sym2_tau_sequence(SIGNS_LENGTH)?;
    let x = SIGNS_LENGTH as f64;
    let changes = count_sign_changes(&seq, DEFAULT_ZERO_TOL);

    let h = ceil_root(SIGNS_SCAN_X, 6);
    let m = ceil_root(SIGNS_SCAN_X, 10);
    let scan = interval_change_scan(&seq, &ShortIntervalConfig::new(SIGNS_SCAN_X, h, m)?, DEFAULT_ZERO_TOL)?;
    let strict_fraction = scan.strict_count as f64 / scan.total_x as f64;

    let abs_sum = partial_sum_abs(&seq, SIGNS_LENGTH)?;
    let mut rs = BTreeMap::new();
    for xr in RANKIN_SELBERG_X {
        rs.insert(xr.to_string(), rankin_selberg_ratio(&seq, xr)?);
    }
    let rs_min = rs.values().copied().fold(f64::INFINITY, f64::min);
    let rs_max = rs.values().copied().fold(f64::NEG_INFINITY, f64::max);
    let balance = sign_balance(&seq, SIGNS_LENGTH, DEFAULT_ZERO_TOL)?;
    let density = nonvanishing_density(&seq, SIGNS_LENGTH, DEFAULT_ZERO_TOL)?;

    Ok(SuiteOutcome {
        checks: vec![
            Check::at_least("sign_changes", changes.changes as f64, x.powf(5.0 / 6.0) / 10.0),
            Check::at_most("scan_s1_exceeds_s2", scan.violations as f64, 0.0),
            Check::at_least("scan_strict_fraction", strict_fraction, 0.5),
            Check::at_least("partial_sum_abs", abs_sum, x.powf(0.9)),
            Check::at_least("rankin_selberg_min", rs_min, 0.1),
            Check::at_most("rankin_selberg_max", rs_max, 10.0),
            Check::at_most("sign_balance", (balance.pos_frac - 0.5).abs(), 0.1),
            Check::at_least("nonvanishing_ratio_min", density.ratio, 0.5),
            Check::at_most("nonvanishing_ratio_max", density.ratio, 2.0),
        ],
        details: json!({
            "length": SIGNS_LENGTH,
            "sign_changes": changes,
            "scan": scan,
            "partial_sum_abs": abs_sum,
            "rankin_selberg": rs,
            "sign_balance": balance,
            "nonvanishing": density,
        }),
    })
}

const MVT_SIZES: [u64; 3] = [64, 256, 1024];
const MVT_DRAWS_PER_CELL: usize = 6;
const MVT_CONSTANT: f64 = 8.0;
const D_CONSTANT: f64 = 4.0;

fn euler(seed: u64, tol: Option<f64>) -> Result<SuiteOutcome> {
    let bound = tol.unwrap_or(1e-9);
    let mut r = stream(seed, 0);

    let degenerate = euler_factor_check(&PrimeLocalData::new(2, SatakeTriple::identity())?, Complex64::new(2.0, 0.0), 60)?;
    let mut series_err = degenerate.series_residual;
    let mut ratio_err = degenerate.ratio_identity_residual;
    let primes = primes_up_to(100);
    for _ in 0..20 {
        let p = primes[r.gen_range(0..primes.len())];
        let local = PrimeLocalData::new(p, SatakeTriple::from_angles(r.gen_range(0.0..std::f64::consts::TAU), 0.0))?;
        for re in [1.2, 1.5, 2.0] {
            for im in [-5.0, 0.0, 2.5, 5.0] {
                let rec = euler_factor_check(&local, Complex64::new(re, im), 120)?;
                series_err = series_err.max(rec.series_residual);
                ratio_err = ratio_err.max(rec.ratio_identity_residual);
            }
        }
    }

    let mut mvt = Vec::new();
    for n in MVT_SIZES {
        for t in MVT_SIZES {
            for _ in 0..MVT_DRAWS_PER_CELL {
                let poly = DirichletPolynomial::from_terms(
                    (n..=2 * n).map(|k| (k as u128, Complex64::new(if r.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0))),
                    format!("random signs on [{n}, {}]", 2 * n),
                );
                mvt.push(mvt_ratio(&poly, n, t as f64)?);
            }
        }
    }
    let mvt_worst = mvt.iter().map(|m| m.ratio).fold(0.0, f64::max);

    let mut d_records = Vec::new();
    for m in [100u64, 1000] {
        let locals = random_self_dual_locals(&mut r, 2 * m);
        let table = extend_multiplicative(&locals, 2 * m, 1)?;
        let mkd = build_mkd(&table, 2 * m, m, DyadicRange::Closed)?;
        for sigma in [0.5, 0.75, 1.0] {
            for t in [0.0, 1.0, 10.0] {
                d_records.push(d_estimate(&table, &mkd.d_poly, m, sigma, t)?);
            }
        }
    }
    let d_sum_ratio = d_records.iter().map(|e| e.d_abs / e.coefficient_sum).fold(0.0, f64::max);
    let d_power_ratio = d_records
        .iter()
        .filter(|e| e.sigma == 0.5)
        .map(|e| e.d_abs / e.power_bound)
        .fold(0.0, f64::max);

    Ok(SuiteOutcome {
        checks: vec![
            Check::at_most("euler_series", series_err, bound),
            Check::at_most("euler_ratio_identity", ratio_err, bound),
            Check::at_most("mvt_ratio", mvt_worst, MVT_CONSTANT),
            Check::at_most("d_estimate_coefficient_sum", d_sum_ratio, D_CONSTANT),
            Check::at_most("d_estimate_power_bound_half_line", d_power_ratio, D_CONSTANT),
        ],
        details: json!({
            "degenerate": degenerate,
            "mvt": mvt,
            "d_estimate": d_records,
        }),
    })
}
