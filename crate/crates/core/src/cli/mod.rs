//! Command-line front end.
//!
//! Every command produces a [`Report`]: a list of named checks with their
//! values and bounds, plus free-form details. Reports carry no timestamps or
//! timings, and JSON objects are emitted with sorted keys, so the same
//! configuration and seed always produce the same bytes.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on a
//! configuration or I/O error.

pub mod ingest;
pub mod suites;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::dirichlet::{mvt_ratio, DirichletPolynomial};
use crate::hecke::{extend_multiplicative, random_tempered_locals, ramanujan_tau, sym2_lift};
use crate::kl_poly::kato_check;
use crate::measures::{sample, write_density_csv, write_samples_csv, MeasureSpec, QuadratureGrid};
use crate::rng::stream;
use crate::sato_tate::{compare_on_unit_cells, effective_st_compare};
use crate::sign_stats::{
    count_sign_changes, interval_change_scan, nonvanishing_density, partial_sum_abs, rankin_selberg_ratio,
    sign_balance, RealSequence, ShortIntervalConfig, Which, DEFAULT_ZERO_TOL,
};
use crate::{Complex64, Error, Result};

pub use suites::{ceil_root, run_suite, sym2_tau_sequence, Suite};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub value: f64,
    pub bound: f64,
}

impl Check {
    fn with(name: impl Into<String>, ok: bool, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            value,
            bound,
        }
    }

    /// Passes iff `value <= bound`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check::with(name, value <= bound, value, bound)
    }

    /// Passes iff `value >= bound`; NaN fails.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check::with(name, value >= bound, value, bound)
    }

    /// A check decided elsewhere, e.g. in exact arithmetic.
    pub fn exact(name: impl Into<String>, ok: bool, value: f64, bound: f64) -> Self {
        Check::with(name, ok, value, bound)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub checks: Vec<Check>,
    pub details: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub status: Status,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Report {
    fn new(command: impl Into<String>, seed: u64, outcome: SuiteOutcome) -> Self {
        let ok = outcome.checks.iter().all(Check::passed);
        Report {
            command: command.into(),
            seed,
            status: if ok { Status::Pass } else { Status::Fail },
            checks: outcome.checks,
            details: outcome.details,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }
}

/// Interval length for the short-interval scan: `auto` or an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HChoice {
    /// `H = ceil(X^(1/6))`.
    Auto,
    Fixed(u64),
}

impl FromStr for HChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(HChoice::Auto);
        }
        s.parse()
            .map(HChoice::Fixed)
            .map_err(|_| format!("expected `auto` or a positive integer, got {s:?}"))
    }
}

/// A closed interval written `a,b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval(pub [f64; 2]);

impl FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        match s.split_once(',') {
            Some((a, b)) => Ok(Interval([parse(a)?, parse(b)?])),
            None => Err(format!("expected `a,b`, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignSource {
    /// Symmetric square of Ramanujan's Delta.
    #[value(name = "sym2-tau")]
    Sym2Tau,
    /// GL(2) eigenvalues `p,lambda`, lifted to the symmetric square.
    Gl2csv,
    /// A real sequence `m,value`.
    Seqcsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    /// Normalised `tau(p) / p^{11/2}` as `p,lambda`.
    #[value(name = "tau-gl2")]
    TauGl2,
    /// `A(m, 1)` of the symmetric square of Delta as `m,value`.
    #[value(name = "sym2-tau")]
    Sym2Tau,
    /// A coefficient table over random tempered local data.
    Table,
    /// Torus samples from the Sato-Tate or Plancherel measure.
    Samples,
    /// Measure density on the quadrature grid.
    Density,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
    },
    /// Generate a data file.
    Gen {
        #[arg(value_enum)]
        kind: GenKind,
        /// Destination of the generated CSV.
        #[arg(long)]
        data: PathBuf,
        /// Length for `tau-gl2` and `sym2-tau`, table bound for `table`,
        /// sample count for `samples`, grid resolution for `density`.
        #[arg(long, default_value_t = 1000)]
        size: u64,
        /// Prime of the Plancherel measure; Sato-Tate when omitted.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Compare the q-analogue at 1/p with the Plancherel moment of S_{l1,l2}.
    Kato {
        #[arg(long, default_value_t = 1)]
        l1: u32,
        #[arg(long, default_value_t = 1)]
        l2: u32,
        #[arg(long, default_value_t = 2)]
        p: u64,
    },
    /// Empirical versus quadrature masses of A(p,p) under the Plancherel measure.
    Satotate {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Interval `a,b` within [-1, 8]; the nine unit cells when omitted.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<Interval>,
    },
    /// Sign-change statistics of A(m,1).
    Signs {
        #[arg(long, value_enum, default_value = "sym2-tau")]
        source: SignSource,
        /// Input file for `gl2csv` and `seqcsv`.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long = "X", default_value_t = 10_000)]
        x: u64,
        #[arg(long = "H", default_value = "auto")]
        h: HChoice,
        /// Dyadic parameter; `ceil(X^(1/10))` when omitted.
        #[arg(long = "M")]
        m: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
        zero_tol: f64,
    },
    /// Mean-value calibration for a Dirichlet polynomial supported on [N, 2N].
    Mvt {
        #[arg(long = "N", default_value_t = 512)]
        n: u64,
        #[arg(long = "T", default_value_t = 512.0)]
        t: f64,
        /// Polynomial `n,re,im`; random signs on [N, 2N] when omitted.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        draws: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Gen { .. } => "gen",
            Command::Kato { .. } => "kato",
            Command::Satotate { .. } => "satotate",
            Command::Signs { .. } => "signs",
            Command::Mvt { .. } => "mvt",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Parser)]
#[command(name = "gl3-hecke", version, about = "GL(3) Hecke coefficient experiments and verification suites")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Root seed of every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Replaces the default bound of residual checks.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

/// Runs the command and returns its report without writing anything.
pub fn execute(config: &RunConfig) -> Result<Report> {
    if let Some(tol) = config.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::invalid("tol", "must be a positive finite number"));
        }
    }
    let seed = config.seed;
    let outcome = match &config.command {
        Command::Verify { suite } => {
            let out = run_suite(*suite, seed, config.tol)?;
            return Ok(Report::new(format!("verify {}", suite.name()), seed, out));
        }
        Command::Gen { kind, data, size, p } => gen(*kind, data, *size, *p, seed)?,
        Command::Kato { l1, l2, p } => {
            let grid = QuadratureGrid::new(QuadratureGrid::DEFAULT_RESOLUTION)?;
            let rec = kato_check(*l1, *l2, *p, &grid)?;
            SuiteOutcome {
                checks: vec![Check::at_most("kato_identity", rec.diff, config.tol.unwrap_or(1e-6))],
                details: json!(rec),
            }
        }
        Command::Satotate { p, samples, interval } => {
            let records = match interval {
                Some(Interval(ab)) => vec![effective_st_compare(*p, *samples, *ab, seed)?],
                None => compare_on_unit_cells(*p, *samples, seed)?,
            };
            let excess = records
                .iter()
                .map(|r| r.diff - r.mass_uncertainty)
                .fold(f64::NEG_INFINITY, f64::max);
            SuiteOutcome {
                checks: vec![Check::at_most("empirical_vs_quadrature", excess, 0.01)],
                details: json!({ "records": records }),
            }
        }
        Command::Signs {
            source,
            input,
            x,
            h,
            m,
            zero_tol,
        } => signs(*source, input.as_deref(), *x, *h, *m, *zero_tol)?,
        Command::Mvt { n, t, input, draws } => mvt(*n, *t, input.as_deref(), *draws, seed)?,
    };
    Ok(Report::new(config.command.name(), seed, outcome))
}

/// Executes, prints the report to stdout, writes it to `--out` when given,
/// and returns the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config).and_then(|report| {
        if let Some(path) = &config.out {
            std::fs::write(path, report.to_json()).map_err(|e| io_error("out", path, e))?;
        }
        Ok(report)
    }) {
        Ok(report) => {
            print!("{}", report.to_json());
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn io_error(field: &'static str, path: &Path, e: std::io::Error) -> Error {
    Error::invalid(field, format!("{}: {e}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| io_error("data", path, e))
}

fn gen(kind: GenKind, data: &Path, size: u64, p: Option<u64>, seed: u64) -> Result<SuiteOutcome> {
    if size == 0 {
        return Err(Error::invalid("size", "must be positive"));
    }
    let spec = match p {
        Some(p) => MeasureSpec::plancherel(p)?,
        None => MeasureSpec::SatoTate,
    };
    let rows = match kind {
        GenKind::TauGl2 => {
            let pairs = ramanujan_tau(size as usize)?.normalized_primes();
            let mut w = csv::Writer::from_writer(create(data)?);
            w.write_record(["p", "lambda"])?;
            for (p, lambda) in &pairs {
                w.write_record([p.to_string(), lambda.to_string()])?;
            }
            w.flush()?;
            pairs.len()
        }
        GenKind::Sym2Tau => {
            let seq = sym2_tau_sequence(size)?;
            let mut w = csv::Writer::from_writer(create(data)?);
            w.write_record(["m", "value"])?;
            for (i, v) in seq.values().iter().enumerate() {
                w.write_record([(i + 1).to_string(), v.to_string()])?;
            }
            w.flush()?;
            seq.len()
        }
        GenKind::Table => {
            let locals = random_tempered_locals(&mut stream(seed, 0), size);
            let table = extend_multiplicative(&locals, size, size)?;
            let mut out = create(data)?;
            table.write_csv(&mut out)?;
            out.flush()?;
            (size * size) as usize
        }
        GenKind::Samples => {
            let points = sample(&spec, size as usize, seed)?;
            let mut out = create(data)?;
            write_samples_csv(&points, &mut out)?;
            out.flush()?;
            points.len()
        }
        GenKind::Density => {
            let grid = QuadratureGrid::new(size as usize)?;
            let mut out = create(data)?;
            write_density_csv(&spec, &grid, &mut out)?;
            out.flush()?;
            grid.resolution() * grid.resolution()
        }
    };
    Ok(SuiteOutcome {
        checks: Vec::new(),
        details: json!({
            "kind": kind.to_possible_value().map(|v| v.get_name().to_string()),
            "data": data.display().to_string(),
            "rows": rows,
        }),
    })
}

fn load_sequence(source: SignSource, input: Option<&Path>, len: u64) -> Result<(RealSequence, Vec<String>)> {
    let need_input = || input.ok_or_else(|| Error::invalid("input", "required for file sources"));
    match source {
        SignSource::Sym2Tau => Ok((sym2_tau_sequence(len)?, Vec::new())),
        SignSource::Gl2csv => {
            let g = ingest::read_gl2csv(need_input()?)?;
            let locals = sym2_lift(&g.form)?;
            Ok((RealSequence::from_locals(&locals, len, Which::Am1)?, g.warnings))
        }
        SignSource::Seqcsv => Ok((ingest::read_seqcsv(need_input()?)?, Vec::new())),
    }
}

fn signs(source: SignSource, input: Option<&Path>, x: u64, h: HChoice, m: Option<u64>, zero_tol: f64) -> Result<SuiteOutcome> {
    if x < 2 {
        return Err(Error::invalid("X", "must be at least 2"));
    }
    if !(zero_tol >= 0.0) {
        return Err(Error::invalid("zero_tol", "must be non-negative"));
    }
    let h = match h {
        HChoice::Auto => ceil_root(x, 6),
        HChoice::Fixed(h) => h,
    };
    let m = m.unwrap_or_else(|| ceil_root(x, 10));
    let cfg = ShortIntervalConfig::new(x, h, m)?;
    let (seq, warnings) = load_sequence(source, input, 2 * x + h)?;
    if (seq.len() as u64) < 2 * x + h {
        return Err(Error::invalid(
            "X",
            format!("the scan needs {} terms, the sequence has {}", 2 * x + h, seq.len()),
        ));
    }
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let prefix = RealSequence::new(seq.values()[..x as usize].to_vec(), seq.label());
    let changes = count_sign_changes(&prefix, zero_tol);
    let scan = interval_change_scan(&seq, &cfg, zero_tol)?;
    Ok(SuiteOutcome {
        checks: vec![Check::at_most("scan_s1_exceeds_s2", scan.violations as f64, 0.0)],
        details: json!({
            "source": seq.label(),
            "warnings": warnings,
            "sign_changes": changes,
            "scan": scan,
            "partial_sum_abs": partial_sum_abs(&seq, x)?,
            "rankin_selberg_ratio": rankin_selberg_ratio(&seq, x)?,
            "sign_balance": sign_balance(&seq, x, zero_tol)?,
            "nonvanishing": nonvanishing_density(&seq, x, zero_tol)?,
        }),
    })
}

fn mvt(n: u64, t: f64, input: Option<&Path>, draws: usize, seed: u64) -> Result<SuiteOutcome> {
    let polys = match input {
        Some(path) => {
            let file = File::open(path).map_err(|e| io_error("input", path, e))?;
            vec![DirichletPolynomial::read_csv(file, &path.display().to_string())?]
        }
        None => {
            if draws == 0 {
                return Err(Error::invalid("draws", "must be positive"));
            }
            (0..draws as u64)
                .map(|d| {
                    let mut r = stream(seed, d);
                    DirichletPolynomial::from_terms(
                        (n..=2 * n).map(|k| (k as u128, Complex64::new(if r.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0))),
                        format!("random signs on [{n}, {}]", 2 * n),
                    )
                })
                .collect()
        }
    };
    let records = polys.iter().map(|poly| mvt_ratio(poly, n, t)).collect::<Result<Vec<_>>>()?;
    let worst = records.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(SuiteOutcome {
        checks: vec![Check::at_most("mvt_ratio", worst, 8.0)],
        details: json!({ "records": records }),
    })
}
