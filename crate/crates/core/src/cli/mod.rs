//! Command-line front end. Every subcommand is turned into a [`RunConfig`],
//! and [`run`] maps a config to a report document plus an exit code:
//! 0 yes/computed, 1 no, 2 inconclusive, 3 input error.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::balayage::{
    balayage_genus0, balayage_genus1, lindelof_preservation_check, mass_growth_check, Genus0Options, MassGrowthOptions,
};
use crate::conditions::{
    blaschke_with, kahane_outer_density, lindelof_genus1, mr_compare, separated_from_axis, weak_blaschke_genus1,
    ConditionVerdict, Extent, KahaneOptions, PiecewiseLinear, ProfileRow, Slack,
};
use crate::entire::{
    check_a1_bound, check_a3, check_b3_c3, growth_report, B3C3Mode, CanonicalProduct, TailDescriptor, VerifyOptions,
};
use crate::error::{invalid, Error, Result};
use crate::io::{self, ParseOptions};
use crate::logmetrics::{block_density, DensityParams, DensityVariant, IntervalKind, IntervalLogs};
use crate::measures::{AtomicCharge, Divisor, GridSpec, IntervalGrid};
use crate::numeric::{QuadOptions, Tri};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "potential-axis",
    version,
    about = "Interval logarithms, balayage onto iR and growth checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// radius grid `rmin:rmax:ratio`
    #[arg(long, global = true, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    /// numerical tolerance; each command has its own default
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// recorded in the report; no command draws random numbers
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        RunConfig {
            inputs: self.command.inputs(),
            command: self.command,
            grid: self.grid,
            tol: self.tol,
            format: self.format,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantArg {
    #[value(name = "limsup_log", alias = "limsup-log")]
    LimsupLog,
    #[value(name = "inf_log", alias = "inf-log")]
    InfLog,
    #[value(name = "best_b", alias = "best-b")]
    BestB,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionArg {
    Blaschke,
    WeakBlaschke,
    Lindelof,
    Separation,
    Mr,
    Kahane,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Density,
    Distribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    Evaluate,
    Growth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyCheck {
    A1,
    A3,
    B3,
    C3,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum Command {
    /// Logarithmic block densities of a sequence
    Density {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::All)]
        variant: VariantArg,
        /// use the two-sided interval function instead of the sum of logs
        #[arg(long)]
        bar: bool,
    },
    /// Conditions on a charge, or comparison of two sequences
    Check {
        #[arg(long, value_enum)]
        condition: ConditionArg,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        z: Option<PathBuf>,
        #[arg(long)]
        w: Option<PathBuf>,
        /// slack `eps log(R/r)`, several values allowed
        #[arg(long, num_args = 1..)]
        eps: Vec<f64>,
        /// slack `b log(R/r)`
        #[arg(long)]
        b: Option<f64>,
        /// slack `o(log(R/r))`, checked against this threshold
        #[arg(long)]
        vanishing: Option<f64>,
        #[arg(long)]
        bar: bool,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        /// treat the input as the whole charge, not a truncation
        #[arg(long)]
        finite: bool,
        /// atoms beyond this radius count toward separation
        #[arg(long, default_value_t = 1.0)]
        tail_radius: f64,
        /// constant `k` for the Kahane check; fitted when omitted
        #[arg(long)]
        k: Option<f64>,
    },
    /// Balayage onto the imaginary axis
    Balayage {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        genus: u8,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
        #[arg(long, value_enum, default_value_t = Emit::Distribution)]
        emit: Emit,
        /// extra ordinates besides the signed grid
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        at: Vec<f64>,
        /// genus one only: mass growth and Lindelof preservation
        #[arg(long)]
        diagnostics: bool,
    },
    /// Evaluate a canonical product or report its growth
    Product {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "tail", value_parser = parse_tail)]
        tails: Vec<TailDescriptor>,
        #[arg(long, value_enum, default_value_t = ProductMode::Evaluate)]
        mode: ProductMode,
        /// points `re,im`
        #[arg(long = "at", value_parser = parse_point, allow_negative_numbers = true)]
        at: Vec<Complex64>,
        /// directions for the indicator, radians
        #[arg(long, num_args = 1.., allow_negative_numbers = true)]
        theta: Vec<f64>,
        #[arg(long, default_value_t = 256)]
        angular_samples: usize,
    },
    /// Checks of the equivalence conditions for concrete U, M, q
    Verify {
        #[arg(long, value_enum)]
        check: VerifyCheck,
        /// U = log|f_U|; omitted means U = 0
        #[arg(long)]
        u: Option<PathBuf>,
        #[arg(long = "u-tail", value_parser = parse_tail)]
        u_tails: Vec<TailDescriptor>,
        #[arg(long)]
        m: PathBuf,
        #[arg(long = "m-tail", value_parser = parse_tail)]
        m_tails: Vec<TailDescriptor>,
        /// the product f of a1
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long = "f-tail", value_parser = parse_tail)]
        f_tails: Vec<TailDescriptor>,
        /// constant q
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = 0.2)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        y0: f64,
    },
    /// Run a saved configuration
    Report {
        #[arg(long)]
        config: PathBuf,
    },
}

impl Command {
    fn inputs(&self) -> Vec<PathBuf> {
        let mut out = Vec::new();
        match self {
            Command::Density { input, .. } | Command::Balayage { input, .. } | Command::Product { input, .. } => {
                out.push(input.clone())
            }
            Command::Check { input, z, w, .. } => out.extend([input, z, w].into_iter().flatten().cloned()),
            Command::Verify { u, m, f, .. } => {
                out.extend(u.iter().cloned());
                out.push(m.clone());
                out.extend(f.iter().cloned());
            }
            Command::Report { config } => out.push(config.clone()),
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))
    }
}

/// The finished report: the text to print and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub exit_code: i32,
}

pub fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    GridSpec::parse(s).map_err(|e| e.to_string())
}

pub fn parse_point(s: &str) -> std::result::Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("point must be re,im, got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|_| format!("bad real part {re:?}"))?;
    let im: f64 = im.trim().parse().map_err(|_| format!("bad imaginary part {im:?}"))?;
    Ok(Complex64::new(re, im))
}

pub fn parse_tail(s: &str) -> std::result::Result<TailDescriptor, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |i: usize| -> std::result::Result<f64, String> {
        parts
            .get(i)
            .ok_or_else(|| format!("tail {s:?} is missing a field"))?
            .parse::<f64>()
            .map_err(|_| format!("bad number in tail {s:?}"))
    };
    if parts.len() != if parts[0] == "count" { 3 } else { 4 } {
        return Err(format!(
            "tail {s:?}: expected arith:n:step:phi, sym:n:step:phi or count:radius:density"
        ));
    }
    let count = |x: f64| -> std::result::Result<u64, String> {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as u64)
        } else {
            Err(format!("tail {s:?}: n must be a nonnegative integer"))
        }
    };
    match parts[0] {
        "arith" => Ok(TailDescriptor::Arithmetic {
            n: count(num(1)?)?,
            step: num(2)?,
            phi: num(3)?,
        }),
        "sym" => Ok(TailDescriptor::SymmetricArithmetic {
            n: count(num(1)?)?,
            step: num(2)?,
            phi: num(3)?,
        }),
        "count" => Ok(TailDescriptor::CountingBound {
            radius: num(1)?,
            density: num(2)?,
        }),
        other => Err(format!("unknown tail kind {other:?}")),
    }
}

fn exit_for(t: Tri) -> i32 {
    match t {
        Tri::Yes => EXIT_YES,
        Tri::No => EXIT_NO,
        Tri::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn outcome_name(code: i32) -> &'static str {
    match code {
        EXIT_YES => "yes",
        EXIT_NO => "no",
        EXIT_INCONCLUSIVE => "inconclusive",
        _ => "error",
    }
}

/// Seventeen significant digits, so every value round-trips.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Option<f64>>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    fn profile(rows: &[ProfileRow]) -> Self {
        let mut t = Table::new(vec!["r", "R", "value"]);
        for p in rows {
            t.rows.push(vec![Some(p.r), p.big_r, Some(p.value)]);
        }
        t
    }

    fn render(&self, config: &Value) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# config: {config}");
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.map(fmt_num).unwrap_or_default()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// What a command computed before rendering.
struct Outcome {
    code: i32,
    result: Value,
    table: Table,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn read_charge(path: &Path) -> Result<AtomicCharge> {
    Ok(io::read(path, ParseOptions::default())?.charge())
}

fn read_divisor(path: &Path) -> Result<Divisor> {
    let text = std::fs::read_to_string(path)?;
    io::parse_divisor(&text, ParseOptions::default())
}

fn read_product(path: &Path, tails: &[TailDescriptor]) -> Result<CanonicalProduct> {
    let mut p = CanonicalProduct::new(&read_divisor(path)?);
    for &t in tails {
        p = p.with_tail(t)?;
    }
    Ok(p)
}

fn verdict_outcome(v: &ConditionVerdict, extra: Value) -> Outcome {
    let mut result = to_value(v);
    if let (Value::Object(map), Value::Object(more)) = (&mut result, extra) {
        map.extend(more);
    }
    Outcome {
        code: exit_for(v.holds),
        result,
        table: Table::profile(&v.profile),
    }
}

fn run_density(
    input: &Path,
    variant: VariantArg,
    bar: bool,
    grid: Option<GridSpec>,
    tol: Option<f64>,
) -> Result<Outcome> {
    let charge = read_charge(input)?;
    let mut params = DensityParams::default();
    if let Some(g) = grid {
        params.grid = g;
    }
    if let Some(t) = tol {
        params.b_tol = t;
    }
    if bar {
        params.kind = IntervalKind::Bar;
    }
    let variants: Vec<DensityVariant> = match variant {
        VariantArg::LimsupLog => vec![DensityVariant::LimsupLog],
        VariantArg::InfLog => vec![DensityVariant::InfLog],
        VariantArg::BestB => vec![DensityVariant::BestB],
        VariantArg::All => vec![DensityVariant::LimsupLog, DensityVariant::InfLog, DensityVariant::BestB],
    };
    let reports = variants
        .iter()
        .map(|&v| block_density(&charge, v, &params))
        .collect::<Result<Vec<_>>>()?;
    let interval = IntervalGrid::geometric(params.grid)?;
    let logs = IntervalLogs::new(&charge);
    let mut table = Table::new(vec!["r", "R", "value"]);
    for &(r, big_r) in interval.pairs() {
        table
            .rows
            .push(vec![Some(r), Some(big_r), Some(logs.eval(params.kind, r, big_r))]);
    }
    Ok(Outcome {
        code: EXIT_YES,
        result: json!({ "grid": params.grid, "reports": reports }),
        table,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    condition: ConditionArg,
    input: Option<&Path>,
    z: Option<&Path>,
    w: Option<&Path>,
    eps: &[f64],
    b: Option<f64>,
    vanishing: Option<f64>,
    bar: bool,
    r0: f64,
    finite: bool,
    tail_radius: f64,
    k: Option<f64>,
    grid: Option<GridSpec>,
    tol: Option<f64>,
) -> Result<Outcome> {
    let need_input = || -> Result<AtomicCharge> {
        read_charge(input.ok_or_else(|| invalid(format!("--input is required for {condition:?}")))?)
    };
    let v = match condition {
        ConditionArg::Blaschke => {
            blaschke_with(&need_input()?, r0, if finite { Extent::Finite } else { Extent::Sample })?
        }
        ConditionArg::WeakBlaschke => weak_blaschke_genus1(&need_input()?, r0)?,
        ConditionArg::Lindelof => lindelof_genus1(&need_input()?, r0)?,
        ConditionArg::Separation => separated_from_axis(&need_input()?, tail_radius),
        ConditionArg::Kahane => {
            let mut opts = KahaneOptions {
                r0,
                ..KahaneOptions::default()
            };
            if let Some(t) = tol {
                opts.tolerance = t;
            }
            let k = k.map(PiecewiseLinear::constant);
            kahane_outer_density(&need_input()?, k.as_ref(), opts)?
        }
        ConditionArg::Mr => {
            let z = read_charge(z.ok_or_else(|| invalid("--z is required for mr"))?)?;
            let w = read_charge(w.ok_or_else(|| invalid("--w is required for mr"))?)?;
            let slack = match (eps.is_empty(), b, vanishing) {
                (true, None, None) => Slack::None,
                (false, None, None) => Slack::Eps(eps.to_vec()),
                (true, Some(b), None) => Slack::BLog(b),
                (true, None, Some(t)) => Slack::Vanishing { threshold: t },
                _ => return Err(invalid("give at most one of --eps, --b, --vanishing")),
            };
            let spec = grid.unwrap_or(GridSpec::new(1.0, 1e6, 1.25));
            let kind = if bar { IntervalKind::Bar } else { IntervalKind::Log };
            let v = mr_compare(&z, &w, &IntervalGrid::geometric(spec)?, &slack, kind)?;
            return Ok(verdict_outcome(&v, json!({ "grid": spec })));
        }
    };
    Ok(verdict_outcome(&v, json!({})))
}

/// `-grid` reversed, `0`, `grid`, plus any explicit ordinates.
fn ordinates(spec: GridSpec, extra: &[f64]) -> Result<Vec<f64>> {
    let pts = spec.points()?;
    let mut ys: Vec<f64> = pts
        .iter()
        .rev()
        .map(|y| -y)
        .chain([0.0])
        .chain(pts.iter().copied())
        .collect();
    ys.extend_from_slice(extra);
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    Ok(ys)
}

#[allow(clippy::too_many_arguments)]
fn run_balayage(
    input: &Path,
    genus: u8,
    r0: f64,
    emit: Emit,
    at: &[f64],
    diagnostics: bool,
    grid: Option<GridSpec>,
) -> Result<Outcome> {
    let charge = read_charge(input)?;
    let result = if genus == 0 {
        balayage_genus0(
            &charge,
            Genus0Options {
                r0,
                ..Genus0Options::default()
            },
        )?
    } else {
        balayage_genus1(&charge, r0)?
    };
    let spec = grid.unwrap_or(GridSpec::new(1.0 / 128.0, 128.0, 2.0));
    let ys = ordinates(spec, at)?;
    let mut table = Table::new(vec!["y", "value"]);
    let samples: Vec<(f64, f64)> = ys
        .iter()
        .map(|&y| {
            let v = match emit {
                Emit::Density => result.density(y),
                Emit::Distribution => result.distribution(y),
            };
            (y, v)
        })
        .collect();
    for &(y, v) in &samples {
        table.rows.push(vec![Some(y), Some(v)]);
    }
    let mut out = json!({ "ordinate_grid": spec, "emit": emit, "samples": samples, "balayage": result });
    let mut code = EXIT_YES;
    if diagnostics {
        if genus != 1 {
            return Err(invalid("--diagnostics needs --genus 1"));
        }
        let growth = mass_growth_check(&result, MassGrowthOptions::default())?;
        let lindelof = lindelof_preservation_check(&charge, r0)?;
        code = exit_for(growth.holds.and(lindelof.holds));
        out["mass_growth"] = to_value(&growth);
        out["lindelof_preservation"] = to_value(&lindelof);
    }
    Ok(Outcome {
        code,
        result: out,
        table,
    })
}

fn run_product(
    input: &Path,
    tails: &[TailDescriptor],
    mode: ProductMode,
    at: &[Complex64],
    theta: &[f64],
    angular_samples: usize,
    grid: Option<GridSpec>,
) -> Result<Outcome> {
    let product = read_product(input, tails)?;
    match mode {
        ProductMode::Evaluate => {
            if at.is_empty() {
                return Err(invalid("--at is required for evaluate"));
            }
            let mut table = Table::new(vec!["re", "im", "value", "error_bound"]);
            let values: Vec<Value> = at
                .iter()
                .map(|&z| {
                    let v = product.log_abs(z);
                    table
                        .rows
                        .push(vec![Some(z.re), Some(z.im), Some(v.value), Some(v.error_bound)]);
                    json!({ "z": [z.re, z.im], "log_abs": v })
                })
                .collect();
            Ok(Outcome {
                code: EXIT_YES,
                result: json!({ "zeros": product.zeros().len(), "tails": product.tails(), "values": values }),
                table,
            })
        }
        ProductMode::Growth => {
            let spec = grid.unwrap_or(GridSpec::new(10.0, 1e3, 2.0));
            let thetas: Vec<f64> = if theta.is_empty() {
                vec![0.0, PI / 2.0, PI, 1.5 * PI]
            } else {
                theta.to_vec()
            };
            let g = growth_report(product.evaluator(), spec, &thetas, angular_samples)?;
            let mut table = Table::new(vec!["r", "value"]);
            for &(r, v) in &g.sup_profile {
                table.rows.push(vec![Some(r), Some(v)]);
            }
            Ok(Outcome {
                code: EXIT_YES,
                result: json!({ "growth": g }),
                table,
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    check: VerifyCheck,
    u: Option<&Path>,
    u_tails: &[TailDescriptor],
    m: &Path,
    m_tails: &[TailDescriptor],
    f: Option<&Path>,
    f_tails: &[TailDescriptor],
    q: f64,
    eps: f64,
    threshold: f64,
    p: f64,
    y0: f64,
    grid: Option<GridSpec>,
    tol: Option<f64>,
) -> Result<Outcome> {
    let mut opts = VerifyOptions {
        y0,
        ..VerifyOptions::default()
    };
    if let Some(t) = tol {
        opts.tolerance = t;
    }
    if let Some(g) = grid {
        let pos = g.points()?;
        opts.samples = pos.iter().map(|y| -y).chain(pos.iter().copied()).collect();
    }
    opts.quad = QuadOptions::abs(1e-8);
    let up = u.map(|path| read_product(path, u_tails)).transpose()?;
    let mp = read_product(m, m_tails)?;
    let u_fn = |z: Complex64| up.as_ref().map_or(0.0, |p| p.log_abs(z).value);
    let m_fn = mp.evaluator();
    let q_fn = |_: f64| q;
    match check {
        VerifyCheck::A3 => Ok(verdict_outcome(
            &check_a3(u_fn, m_fn, q_fn, &opts)?,
            json!({ "options": opts }),
        )),
        VerifyCheck::B3 | VerifyCheck::C3 => {
            let mode = if check == VerifyCheck::B3 {
                B3C3Mode::B3 { threshold }
            } else {
                B3C3Mode::C3 { eps }
            };
            let v = check_b3_c3(u_fn, m_fn, q_fn, mode, &opts)?;
            Ok(verdict_outcome(&v, json!({ "mode": mode, "options": opts })))
        }
        VerifyCheck::A1 => {
            let fp = read_product(f.ok_or_else(|| invalid("--f is required for a1"))?, f_tails)?;
            let report = check_a1_bound(u_fn, &fp, m_fn, p, &opts, None)?;
            Ok(verdict_outcome(&report.verdict, json!({ "p": p, "options": opts })))
        }
    }
}

fn dispatch(config: &RunConfig) -> Result<Outcome> {
    let grid = config.grid;
    let tol = config.tol;
    match &config.command {
        Command::Density { input, variant, bar } => run_density(input, *variant, *bar, grid, tol),
        Command::Check {
            condition,
            input,
            z,
            w,
            eps,
            b,
            vanishing,
            bar,
            r0,
            finite,
            tail_radius,
            k,
        } => run_check(
            *condition,
            input.as_deref(),
            z.as_deref(),
            w.as_deref(),
            eps,
            *b,
            *vanishing,
            *bar,
            *r0,
            *finite,
            *tail_radius,
            *k,
            grid,
            tol,
        ),
        Command::Balayage {
            input,
            genus,
            r0,
            emit,
            at,
            diagnostics,
        } => run_balayage(input, *genus, *r0, *emit, at, *diagnostics, grid),
        Command::Product {
            input,
            tails,
            mode,
            at,
            theta,
            angular_samples,
        } => run_product(input, tails, *mode, at, theta, *angular_samples, grid),
        Command::Verify {
            check,
            u,
            u_tails,
            m,
            m_tails,
            f,
            f_tails,
            q,
            eps,
            threshold,
            p,
            y0,
        } => run_verify(
            *check,
            u.as_deref(),
            u_tails,
            m,
            m_tails,
            f.as_deref(),
            f_tails,
            *q,
            *eps,
            *threshold,
            *p,
            *y0,
            grid,
            tol,
        ),
        Command::Report { .. } => Err(invalid("a saved configuration cannot itself be a report")),
    }
}

fn error_report(config: &Value, err: &Error) -> Report {
    let body = json!({ "config": config, "outcome": "error", "exit_code": EXIT_INPUT, "error": err.to_string() });
    Report {
        text: format!("{}\n", serde_json::to_string_pretty(&body).unwrap_or_default()),
        exit_code: EXIT_INPUT,
    }
}

/// Runs a configuration. A `report` command loads the saved configuration
/// and runs that instead; the embedded config is the loaded one.
pub fn run(config: &RunConfig) -> Report {
    let config = match &config.command {
        Command::Report { config: path } => {
            match std::fs::read_to_string(path)
                .map_err(Error::from)
                .and_then(|t| RunConfig::from_json(&t))
            {
                Ok(c) => c,
                Err(e) => return error_report(&to_value(config), &e),
            }
        }
        _ => config.clone(),
    };
    let cfg_value = to_value(&config);
    let outcome = match dispatch(&config) {
        Ok(o) => o,
        Err(e) => return error_report(&cfg_value, &e),
    };
    let text = match config.format {
        Format::Csv => outcome.table.render(&cfg_value),
        Format::Json => {
            let body = json!({
                "config": cfg_value,
                "outcome": outcome_name(outcome.code),
                "exit_code": outcome.code,
                "result": outcome.result,
            });
            format!("{}\n", serde_json::to_string_pretty(&body).unwrap_or_default())
        }
    };
    Report {
        text,
        exit_code: outcome.code,
    }
}

/// Parses `args` (program name first) and runs them. Usage errors become
/// exit code 3 with clap's message as the text.
pub fn run_args<I, T>(args: I) -> Report
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into_config()),
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_YES,
                _ => EXIT_INPUT,
            };
            Report {
                text: e.render().to_string(),
                exit_code: code,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    fn naturals(step: usize, n: usize) -> tempfile::NamedTempFile {
        let text: String = (1..=n).map(|k| format!("{} 0\n", k * step)).collect();
        file(&text)
    }

    fn args(parts: &[&str]) -> Vec<String> {
        std::iter::once("potential-axis")
            .chain(parts.iter().copied())
            .map(String::from)
            .collect()
    }

    #[test]
    fn tail_and_point_parsing() {
        assert_eq!(
            parse_tail("sym:10:1:1.5").unwrap(),
            TailDescriptor::SymmetricArithmetic {
                n: 10,
                step: 1.0,
                phi: 1.5
            }
        );
        assert_eq!(
            parse_tail("count:5:2").unwrap(),
            TailDescriptor::CountingBound {
                radius: 5.0,
                density: 2.0
            }
        );
        assert!(parse_tail("arith:1.5:1:0").is_err());
        assert!(parse_tail("arith:1:1").is_err());
        assert_eq!(parse_point("-1,2").unwrap(), Complex64::new(-1.0, 2.0));
        assert!(parse_point("1").is_err());
    }

    #[test]
    fn number_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, PI] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_num(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn mr_subsequence_is_yes_with_zero_constant() {
        let even = naturals(2, 5000);
        let nat = naturals(1, 10000);
        let rep = run_args(args(&[
            "check",
            "--condition",
            "mr",
            "--z",
            even.path().to_str().unwrap(),
            "--w",
            nat.path().to_str().unwrap(),
            "--grid",
            "1:1e4:1.5",
        ]));
        assert_eq!(rep.exit_code, EXIT_YES, "{}", rep.text);
        let v: Value = serde_json::from_str(&rep.text).unwrap();
        assert_eq!(v["result"]["witness"]["c"].as_f64(), Some(0.0));
    }

    #[test]
    fn genus0_distribution_of_delta1_at_i() {
        let d = file("1 0\n");
        let rep = run_args(args(&[
            "balayage",
            "--genus",
            "0",
            "--input",
            d.path().to_str().unwrap(),
            "--emit",
            "distribution",
            "--format",
            "csv",
        ]));
        assert_eq!(rep.exit_code, EXIT_YES, "{}", rep.text);
        let mut lines = rep.text.lines();
        assert!(lines.next().unwrap().starts_with("# config: "));
        assert_eq!(lines.next(), Some("y,value"));
        let row = lines
            .map(|l| l.split(',').map(|c| c.parse::<f64>().unwrap()).collect::<Vec<_>>())
            .find(|r| r[0] == 1.0)
            .unwrap();
        assert!((row[1] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn best_b_for_naturals() {
        let nat = naturals(1, 100_000);
        let rep = run_args(args(&[
            "density",
            "--input",
            nat.path().to_str().unwrap(),
            "--variant",
            "best_b",
            "--grid",
            "1:1e5:1.25",
        ]));
        assert_eq!(rep.exit_code, EXIT_YES, "{}", rep.text);
        let v: Value = serde_json::from_str(&rep.text).unwrap();
        let b = v["result"]["reports"][0]["value"].as_f64().unwrap();
        assert!((b - 1.0).abs() < 0.05, "b = {b}");
    }

    #[test]
    fn input_errors_exit_3() {
        let bad = file("x y\n");
        let rep = run_args(args(&[
            "check",
            "--condition",
            "blaschke",
            "--input",
            bad.path().to_str().unwrap(),
        ]));
        assert_eq!(rep.exit_code, EXIT_INPUT);
        assert!(rep.text.contains("line 1"), "{}", rep.text);
        assert_eq!(run_args(args(&["check", "--condition", "nope"])).exit_code, EXIT_INPUT);
        assert_eq!(
            run_args(args(&["check", "--condition", "lindelof"])).exit_code,
            EXIT_INPUT,
            "missing --input"
        );
    }

    #[test]
    fn saved_config_reproduces_report() {
        let d = file("1 0\n2 1\n");
        let direct = run_args(args(&[
            "balayage",
            "--genus",
            "1",
            "--r0",
            "0.5",
            "--input",
            d.path().to_str().unwrap(),
        ]));
        assert_eq!(direct.exit_code, EXIT_YES);
        let v: Value = serde_json::from_str(&direct.text).unwrap();
        let cfg = file(&v["config"].to_string());
        let again = run_args(args(&["report", "--config", cfg.path().to_str().unwrap()]));
        assert_eq!(again, direct);
    }
}
