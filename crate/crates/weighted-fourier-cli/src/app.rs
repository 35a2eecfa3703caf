//! Argument parsing, dispatch and report emission.

use crate::plot::{emit_plot_data, xi_over_u_series, XiPoint};
use crate::suites::{self, SuiteResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use weighted_fourier::criteria::{evaluate, evaluate_many, parse_exponent, CriteriaError, CriterionReport, ExponentConfig};
use weighted_fourier::extremal::{bracket_constant, Budget, ConstantBracket, ExtremalError, Resolution};
use weighted_fourier::funcspace::io::{read_sequence_csv, read_step_csv};
use weighted_fourier::funcspace::{Direction, FuncError, Grid, StepFunction, TailSpec, WeightSpec};
use weighted_fourier::hardy::{brute_force_K, hardy_K, HardyError, HardyKind, HardyProblem};
use weighted_fourier::norms::{self, NormsError, Rearr, SequenceData};
use weighted_fourier::{ExtReal, Exponent};

pub const SEED_ENV: &str = "WFI_SEED";

#[derive(Debug, Parser)]
#[command(name = "wfi", version, about = "Weighted Fourier inequalities: criteria, Hardy constants, norms and sampled brackets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Directory for plot-ready CSV series.
    #[arg(long, global = true)]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Radial non-increasing weight on the Fourier side, e.g. `pow(1/4)`, `2*ind(1)@d=3`, `table(u.csv)`.
    #[arg(long)]
    pub u: String,
    /// Radial non-decreasing weight on the function side.
    #[arg(long)]
    pub v: String,
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub q: String,
    /// Dimension; a `@d=n` suffix on the weights takes precedence.
    #[arg(long)]
    pub d: Option<u32>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regime classification and the deciding constants.
    Criteria(WeightArgs),
    /// Characterization constant of a weighted Hardy inequality.
    Hardy {
        #[arg(long)]
        kind: String,
        /// Weight on the left (for `reverse`, the weight w). DSL or step CSV; sequences for `headsum` as `n,value` CSV.
        #[arg(long)]
        u: String,
        /// Weight on the right (for `reverse`, the function ν).
        #[arg(long)]
        v: String,
        #[arg(long, default_value = "1")]
        p: String,
        #[arg(long)]
        q: String,
        /// Also run the brute-force lower bound.
        #[arg(long)]
        oracle: bool,
        #[arg(long, env = SEED_ENV, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 24)]
        iters: usize,
    },
    /// Optimal-space and sequence norms.
    Norms {
        #[arg(long, value_enum)]
        kind: NormKind,
        /// Function: DSL (non-increasing profile) or step CSV.
        #[arg(long)]
        f: Option<String>,
        /// Sequence: `n,value` CSV path or a comma-separated list.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long)]
        u: Option<String>,
        #[arg(long)]
        phi: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long, default_value_t = 1)]
        d: u32,
        #[arg(long, value_enum, default_value_t = Variant::Default)]
        variant: Variant,
    },
    /// Bracket for the best constant from sampled test functions.
    Estimate {
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long = "N", alias = "n", default_value_t = 4096)]
        n: usize,
        #[arg(long = "L", alias = "l", default_value_t = 64.0)]
        l: f64,
        #[arg(long, env = SEED_ENV, default_value_t = 7)]
        seed: u64,
        /// Random signals and sign restarts per construction.
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Runs acceptance suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Criteria over a grid of exponents.
    Sweep {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Comma-separated exponents.
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long, default_value_t = 1)]
        d: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormKind {
    #[value(name = "optimalY")]
    OptimalY,
    Morrey,
    #[value(name = "expL")]
    ExpL,
    Theta,
    Gamma,
    Bochkarev,
    Blocks,
    Lorentz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Default,
    Star,
    #[value(name = "starstar")]
    StarStar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub lower: ExtReal,
    /// `K / lower`.
    pub band: ExtReal,
    pub cells: usize,
    pub iters: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyReport {
    pub kind: HardyKind,
    pub u: String,
    pub v: String,
    pub p: Exponent,
    pub q: Exponent,
    pub constant: ExtReal,
    pub oracle: Option<OracleReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormsReport {
    pub kind: String,
    pub inputs: BTreeMap<String, String>,
    pub value: ExtReal,
    /// Second member of a pair (`expL`: the logarithmic-growth functional).
    pub second: Option<ExtReal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub u: String,
    pub v: String,
    pub config: ExponentConfig,
    pub budget: Budget,
    pub bracket: ConstantBracket,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "report", rename_all = "snake_case")]
pub enum Report {
    Criteria {
        result: CriterionReport,
        /// `ξ/U` series; empty unless `q < 2` and `ξ` is finite.
        xi_over_u: Vec<XiPoint>,
    },
    Hardy(HardyReport),
    Norms(NormsReport),
    Estimate(EstimateReport),
    Verify(VerifyReport),
    Sweep {
        results: Vec<CriterionReport>,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input or a violated precondition (exit 2).
    Validation(String),
    /// Anything else (exit 1).
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<FuncError> for CliError {
    fn from(e: FuncError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CriteriaError> for CliError {
    fn from(e: CriteriaError) -> Self {
        match e {
            CriteriaError::Divergent(_) => CliError::Internal(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<HardyError> for CliError {
    fn from(e: HardyError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<NormsError> for CliError {
    fn from(e: NormsError) -> Self {
        match e {
            NormsError::InvalidExponent(_) | NormsError::InvalidInput(_) | NormsError::Func(_) => {
                CliError::Validation(e.to_string())
            }
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ExtremalError> for CliError {
    fn from(e: ExtremalError) -> Self {
        match e {
            ExtremalError::Precondition(_) | ExtremalError::InvalidSignal(_) | ExtremalError::ZeroDenominator => {
                CliError::Validation(e.to_string())
            }
            ExtremalError::Other(_) => CliError::Internal(e.to_string()),
        }
    }
}

fn exponent(name: &str, s: &str) -> Result<Exponent, CliError> {
    parse_exponent(s).map_err(|e| CliError::Validation(format!("--{name}: {e}")))
}

fn need<'a>(name: &str, v: &'a Option<String>) -> Result<&'a str, CliError> {
    v.as_deref()
        .ok_or_else(|| CliError::Validation(format!("--{name} is required for this kind")))
}

fn is_csv(s: &str) -> bool {
    s.to_ascii_lowercase().ends_with(".csv")
}

/// A function given as a step CSV or as a weight DSL (its actual values).
pub fn read_function(s: &str) -> Result<StepFunction, CliError> {
    if is_csv(s) {
        return Ok(read_step_csv(Path::new(s))?);
    }
    let w = WeightSpec::parse(s, Direction::RadialNonIncreasing)?;
    Ok(w.base().scale(w.scale))
}

/// A sequence from an `n,value` CSV or a comma-separated list.
pub fn read_sequence(s: &str) -> Result<Vec<f64>, CliError> {
    if is_csv(s) {
        return Ok(read_sequence_csv(Path::new(s))?);
    }
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| {
            let x = x.trim();
            x.parse::<f64>()
                .ok()
                .or_else(|| weighted_fourier::exponent::parse_rational(x).ok().map(weighted_fourier::exponent::qf))
                .ok_or_else(|| CliError::Validation(format!("bad sequence entry `{x}`")))
        })
        .collect()
}

fn weights(a: &WeightArgs) -> Result<(WeightSpec, WeightSpec, ExponentConfig), CliError> {
    let mut u = WeightSpec::parse(&a.u, Direction::RadialNonIncreasing)?;
    let mut v = WeightSpec::parse(&a.v, Direction::RadialNonDecreasing)?;
    let d = match a.d {
        Some(d) => {
            if !a.u.contains('@') {
                u = u.with_dim(d);
            }
            if !a.v.contains('@') {
                v = v.with_dim(d);
            }
            d
        }
        None => u.d.max(v.d),
    };
    if u.d != v.d {
        return Err(CliError::Validation(format!(
            "weights live in different dimensions (u: d={}, v: d={})",
            u.d, v.d
        )));
    }
    let cfg = ExponentConfig::new(exponent("p", &a.p)?, exponent("q", &a.q)?, d)?;
    Ok((u, v, cfg))
}

fn hardy_input(kind: HardyKind, s: &str, left: bool) -> Result<StepFunction, CliError> {
    // sequences: an `n,value` CSV or an inline list such as `1,1/2,1/4`
    if kind == HardyKind::HeadSum && (is_csv(s) || !s.contains('(')) {
        let vals = read_sequence(s)?;
        let tail = if left {
            TailSpec::Zero
        } else {
            TailSpec::Power { a: 0.into() }
        };
        return Ok(HardyProblem::sequence_with_tail(&vals, tail)?);
    }
    read_function(s)
}

/// Oracle grid: breakpoints of both weights plus a geometric net on `[2^-6, 2^6]`.
fn oracle_grid(prob: &HardyProblem) -> Result<Grid, CliError> {
    if prob.kind == HardyKind::HeadSum {
        let n = prob.u.grid().last().max(prob.v.grid().last()).ceil().max(1.0) as usize;
        return Ok(Grid::uniform(n.min(64), 1.0));
    }
    let mut pts: Vec<f64> = prob.u.breakpoints_union(&prob.v);
    pts.extend((-6..=6).map(|k| 2f64.powi(k)));
    pts.push(0.0);
    pts.retain(|x| x.is_finite() && *x >= 0.0);
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    Ok(Grid::new(pts)?)
}

fn dispatch(cmd: &Command) -> Result<Report, CliError> {
    match cmd {
        Command::Criteria(a) => {
            let (u, v, cfg) = weights(a)?;
            let result = evaluate(&u, &v, &cfg)?;
            let xi_over_u = xi_over_u_series(&u, &cfg);
            Ok(Report::Criteria { result, xi_over_u })
        }
        Command::Hardy {
            kind,
            u,
            v,
            p,
            q,
            oracle,
            seed,
            iters,
        } => {
            let k: HardyKind = kind.parse()?;
            let prob = HardyProblem::new(
                k,
                hardy_input(k, u, true)?,
                hardy_input(k, v, false)?,
                exponent("p", p)?,
                exponent("q", q)?,
            )?;
            let constant = hardy_K(&prob)?;
            let oracle = if *oracle {
                let grid = oracle_grid(&prob)?;
                let lower = brute_force_K(&prob, &grid, *iters, *seed);
                let band = match (constant.value(), lower) {
                    (Some(c), l) if l > 0.0 => ExtReal::finite(c / l),
                    (None, _) => constant.clone(),
                    _ => ExtReal::indeterminate("oracle found no positive ratio"),
                };
                Some(OracleReport {
                    lower: ExtReal::from_f64(lower, "oracle search failed"),
                    band,
                    cells: grid.cells(),
                    iters: *iters,
                    seed: *seed,
                })
            } else {
                None
            };
            Ok(Report::Hardy(HardyReport {
                kind: k,
                u: u.clone(),
                v: v.clone(),
                p: prob.p,
                q: prob.q,
                constant,
                oracle,
            }))
        }
        Command::Norms {
            kind,
            f,
            seq,
            u,
            phi,
            p,
            q,
            d,
            variant,
        } => norms_report(*kind, f, seq, u, phi, p, q, *d, *variant).map(Report::Norms),
        Command::Estimate {
            weights: a,
            n,
            l,
            seed,
            budget,
        } => {
            let (u, v, cfg) = weights(a)?;
            let budget = Budget {
                res: Resolution::new(*n, *l)?,
                draws: *budget,
                restarts: *budget,
                seed: *seed,
            };
            let bracket = bracket_constant(&u, &v, &cfg, &budget)?;
            Ok(Report::Estimate(EstimateReport {
                u: u.to_string(),
                v: v.to_string(),
                config: cfg,
                budget,
                bracket,
            }))
        }
        Command::Verify { suite } => {
            let names: Vec<&str> = if suite == "all" {
                suites::NAMES.to_vec()
            } else {
                suite.split(',').map(str::trim).collect()
            };
            let mut results = Vec::new();
            for name in names {
                let r = suites::run(name).ok_or_else(|| {
                    CliError::Validation(format!(
                        "unknown suite `{name}`; expected one of {}",
                        suites::NAMES.join(", ")
                    ))
                })?;
                eprintln!("{}", r.line());
                results.push(r);
            }
            Ok(Report::Verify(VerifyReport {
                passed: results.iter().all(|r| r.pass),
                suites: results,
            }))
        }
        Command::Sweep { u, v, p, q, d } => {
            let u = WeightSpec::parse(u, Direction::RadialNonIncreasing)?;
            let v = WeightSpec::parse(v, Direction::RadialNonDecreasing)?;
            let list = |name: &str, s: &str| -> Result<Vec<Exponent>, CliError> {
                s.split(',').map(|x| exponent(name, x.trim())).collect()
            };
            let mut cases = Vec::new();
            for pp in list("p", p)? {
                for qq in list("q", q)? {
                    let cfg = ExponentConfig::new(pp, qq, *d)?;
                    cases.push((u.clone().with_dim(*d), v.clone().with_dim(*d), cfg));
                }
            }
            let results = evaluate_many(&cases)
                .into_iter()
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Report::Sweep { results })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn norms_report(
    kind: NormKind,
    f: &Option<String>,
    seq: &Option<String>,
    u: &Option<String>,
    phi: &Option<String>,
    p: &Option<String>,
    q: &Option<String>,
    d: u32,
    variant: Variant,
) -> Result<NormsReport, CliError> {
    let mut inputs = BTreeMap::new();
    for (k, v) in [("f", f), ("seq", seq), ("u", u), ("phi", phi), ("p", p), ("q", q)] {
        if let Some(v) = v {
            inputs.insert(k.to_string(), v.clone());
        }
    }
    inputs.insert("d".into(), d.to_string());
    let rearr = |default: Rearr| match variant {
        Variant::Default => default,
        Variant::Star => Rearr::Star,
        Variant::StarStar => Rearr::StarStar,
    };
    let sequence = || -> Result<SequenceData, CliError> { Ok(SequenceData::new(read_sequence(need("seq", seq)?)?)?) };
    let (value, second) = match kind {
        NormKind::OptimalY => {
            let w = WeightSpec::parse(need("u", u)?, Direction::RadialNonIncreasing)?;
            let v = norms::optimal_Y_norm(&read_function(need("f", f)?)?, &w, exponent("q", need("q", q)?)?)?;
            (v, None)
        }
        NormKind::Morrey => {
            let v = norms::morrey_optimal_norm(
                &read_function(need("f", f)?)?,
                exponent("q", need("q", q)?)?,
                &read_function(need("phi", phi)?)?,
                d,
            )?;
            (v, None)
        }
        NormKind::ExpL => {
            let (a, b) = norms::expL_pair(&read_function(need("f", f)?)?, d)?;
            (a, Some(b))
        }
        NormKind::Theta => (
            norms::theta_norm_with(&sequence()?, exponent("p", need("p", p)?)?, rearr(Rearr::Star))?,
            None,
        ),
        NormKind::Gamma => (
            norms::gamma_norm_with(&sequence()?, exponent("q", need("q", q)?)?, rearr(Rearr::StarStar))?,
            None,
        ),
        NormKind::Bochkarev => (
            ExtReal::finite(norms::bochkarev_norm(&sequence()?, exponent("p", need("p", p)?)?)?),
            None,
        ),
        NormKind::Blocks => {
            let e = match (p, q) {
                (Some(p), _) => exponent("p", p)?,
                (None, Some(q)) => exponent("q", q)?,
                _ => return Err(CliError::Validation("--p (Θ blocks) or --q (Γ blocks) is required".into())),
            };
            (ExtReal::finite(norms::dyadic_block_norms(&sequence()?, e)?), None)
        }
        NormKind::Lorentz => (
            norms::lorentz_norm(
                &sequence()?,
                exponent("p", need("p", p)?)?,
                exponent("q", need("q", q)?)?,
            )?,
            None,
        ),
    };
    let name = NormKind::value_variants()
        .iter()
        .find(|k| **k == kind)
        .and_then(|k| k.to_possible_value())
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    Ok(NormsReport {
        kind: name,
        inputs,
        value,
        second,
    })
}

/// Rows `path,value` for every scalar leaf of the JSON form.
pub fn flatten_csv(value: &serde_json::Value) -> String {
    fn walk(prefix: &str, v: &serde_json::Value, out: &mut Vec<(String, String)>) {
        match v {
            serde_json::Value::Object(m) => {
                for (k, x) in m {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            serde_json::Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            serde_json::Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    let mut w = String::new();
    w.push_str("key,value\n");
    for (k, v) in rows {
        w.push_str(&csv_field(&k));
        w.push(',');
        w.push_str(&csv_field(&v));
        w.push('\n');
    }
    w
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    let value = serde_json::to_value(report).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => flatten_csv(&value),
    })
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let report = dispatch(&cli.command)?;
    let text = render(&report, cli.format)?;
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    if let Some(dir) = &cli.plot_dir {
        emit_plot_data(&report, dir).map_err(|e| CliError::Internal(format!("{}: {e}", dir.display())))?;
    }
    Ok(report)
}

/// Parses `argv` and runs the command; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match execute(&cli) {
        Ok(Report::Verify(v)) if !v.passed => 1,
        Ok(_) => 0,
        Err(e) => {
            eprintln!("wfi: {e}");
            match e {
                CliError::Validation(_) => 2,
                CliError::Internal(_) => 1,
            }
        }
    }
}
