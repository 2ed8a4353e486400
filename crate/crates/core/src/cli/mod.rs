//! Command-line interface.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 invalid
//! parameters, 4 verification failure, 5 numerical abort.

pub mod figures;
pub mod output;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::RogonError;
use crate::params::{FieldPair, Order, PointST, RogonParams};
use crate::residual::{self, FdOrder, Region};
use crate::rogon::{self, eval_grid};
use crate::solver::{self, ConservedSeries, Grid, Observer, SimState, SolverConfig, Stepper};
use output::{OutputSet, RunManifest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARAM: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;
pub const EXIT_NUMERIC: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "rogonlab",
    version,
    about = "Rogue-wave solutions of the coupled volatility / option-pricing wave model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a closed-form rogon on an (S, t) grid.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Intensity-vs-S slices at fixed times.
    #[command(allow_negative_numbers = true)]
    Slices(SlicesArgs),
    /// Finite-difference residual of the closed form against the PDE.
    #[command(allow_negative_numbers = true)]
    Residual(ResidualArgs),
    /// Split-step simulation seeded from a closed-form rogon.
    #[command(allow_negative_numbers = true)]
    Simulate(SimulateArgs),
    /// Datasets for the four published figures.
    #[command(allow_negative_numbers = true)]
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Rogon order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=2))]
    pub order: u32,
    /// Scaling α (> 0).
    #[arg(long)]
    pub alpha: f64,
    /// Market potential β (> 0).
    #[arg(long)]
    pub beta: f64,
    /// Volatility amplitude weight.
    #[arg(long = "a")]
    pub a: f64,
    /// Option-price amplitude weight.
    #[arg(long = "b")]
    pub b: f64,
    /// Gauge / carrier wavenumber.
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
}

impl ModelArgs {
    fn params(&self) -> Result<(RogonParams, Order), CliError> {
        let p = RogonParams::new(self.alpha, self.beta, self.a, self.b, self.k)?;
        Ok((p, Order::from_int(self.order)?))
    }
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    #[arg(long = "s-min", default_value_t = -4.0)]
    pub s_min: f64,
    #[arg(long = "s-max", default_value_t = 4.0)]
    pub s_max: f64,
    #[arg(long = "t-min", default_value_t = -2.0)]
    pub t_min: f64,
    #[arg(long = "t-max", default_value_t = 2.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 401, value_parser = clap::value_parser!(u64).range(1..))]
    pub ns: u64,
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u64).range(1..))]
    pub nt: u64,
}

fn check_range(lo: f64, hi: f64, flag: &str) -> Result<(), CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(CliError::param(format!(
            "--{flag}-min/--{flag}-max must be finite with min <= max, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Output path stem; writes <out>.csv and the manifest <out>.json.
    #[arg(long, default_value = "rogon")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SlicesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated slice times.
    #[arg(long, required = true, value_delimiter = ',')]
    pub times: Vec<f64>,
    #[arg(long = "s-min", default_value_t = -4.0)]
    pub s_min: f64,
    #[arg(long = "s-max", default_value_t = 4.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 401, value_parser = clap::value_parser!(u64).range(1..))]
    pub ns: u64,
    /// Move k to the nearest 2πm/L (uses --L).
    #[arg(long = "snap-k")]
    pub snap_k: bool,
    /// Period used by --snap-k.
    #[arg(long = "L", default_value_t = 100.0)]
    pub length: f64,
    /// Output path stem; writes <out>_t<time>.csv, <out>_slices.py, <out>.json.
    #[arg(long, default_value = "slices")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldChoice {
    /// The closed-form rogon.
    Analytic,
    /// The rogon with its carrier removed (negative control).
    Corrupted,
}

#[derive(Debug, Clone, Args)]
pub struct ResidualArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long = "s-min", default_value_t = -5.0)]
    pub s_min: f64,
    #[arg(long = "s-max", default_value_t = 5.0)]
    pub s_max: f64,
    #[arg(long = "t-min", default_value_t = -3.0)]
    pub t_min: f64,
    #[arg(long = "t-max", default_value_t = 3.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u64).range(2..))]
    pub ns: u64,
    #[arg(long, default_value_t = 61, value_parser = clap::value_parser!(u64).range(2..))]
    pub nt: u64,
    /// Finite-difference step in S and t.
    #[arg(long, default_value_t = 5e-3)]
    pub h: f64,
    #[arg(long = "fd-order", default_value = "8", value_parser = ["2", "4", "6", "8"])]
    pub fd_order: String,
    /// Pass threshold on the max residual.
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Also run a convergence study and print its table.
    #[arg(long)]
    pub study: bool,
    #[arg(long, value_enum, default_value_t = FieldChoice::Analytic)]
    pub field: FieldChoice,
    /// Output path stem; writes <out>_report.json and the manifest <out>.json.
    #[arg(long, default_value = "residual")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Domain length.
    #[arg(long = "L", default_value_t = 100.0)]
    pub length: f64,
    /// Grid points (power of two).
    #[arg(long = "N", default_value_t = 2048)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = -5.0)]
    pub t0: f64,
    #[arg(long = "t-end", default_value_t = 5.0)]
    pub t_end: f64,
    /// Move k to the nearest 2πm/L instead of rejecting it.
    #[arg(long = "snap-k")]
    pub snap_k: bool,
    /// 2/3-rule dealiasing after each nonlinear substep.
    #[arg(long)]
    pub dealias: bool,
    /// Write a field snapshot every this many steps.
    #[arg(long = "snapshot-every", value_parser = clap::value_parser!(u64).range(1..))]
    pub snapshot_every: Option<u64>,
    /// Record conserved quantities every this many steps.
    #[arg(long = "record-every", default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub record_every: u64,
    /// Output path stem; writes <out>_series.csv, snapshots, and <out>.json.
    #[arg(long, default_value = "simulate")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(long = "out-dir", default_value = "figures")]
    pub out_dir: PathBuf,
    #[arg(long, default_value_t = figures::FIGURE_NS as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub ns: u64,
    #[arg(long, default_value_t = figures::FIGURE_NT as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub nt: u64,
}

/// Failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn param(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_PARAM,
            message: message.into(),
        }
    }
}

impl From<RogonError> for CliError {
    fn from(e: RogonError) -> Self {
        let code = match e {
            RogonError::InvalidParameter { .. }
            | RogonError::NonPeriodicCarrier { .. }
            | RogonError::GridTooLarge { .. } => EXIT_PARAM,
            RogonError::NonFinite { .. } | RogonError::SingularDenominator { .. } => EXIT_NUMERIC,
        };
        let message = match &e {
            RogonError::InvalidParameter { name, message } => {
                format!("invalid value for --{name}: {message}")
            }
            other => other.to_string(),
        };
        CliError { code, message }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("I/O error: {e}"),
        }
    }
}

/// Honours `ROGONLAB_THREADS` for the internal thread pool.
fn configure_threads() {
    if let Some(n) = std::env::var("ROGONLAB_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // Fails harmlessly if the pool was already built in this process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr, summaries to stdout.
pub fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    configure_threads();
    match execute(cli, &argv) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: Cli, argv: &[String]) -> Result<(), CliError> {
    match cli.command {
        Command::Eval(a) => cmd_eval(&a, argv),
        Command::Slices(a) => cmd_slices(&a, argv),
        Command::Residual(a) => cmd_residual(&a, argv),
        Command::Simulate(a) => cmd_simulate(&a, argv),
        Command::Figures(a) => cmd_figures(&a, argv),
    }
}

fn to_usize(v: u64, flag: &str) -> Result<usize, CliError> {
    usize::try_from(v).map_err(|_| CliError::param(format!("--{flag} {v} is too large")))
}

fn params_json(p: &RogonParams, order: Order) -> serde_json::Value {
    json!({
        "order": order.as_int(),
        "alpha": p.alpha,
        "beta": p.beta,
        "a": p.a,
        "b": p.b,
        "k": p.k,
    })
}

pub fn cmd_eval(args: &EvalArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let (p, order) = args.model.params()?;
    let w = &args.window;
    check_range(w.s_min, w.s_max, "s")?;
    check_range(w.t_min, w.t_max, "t")?;
    let grid = eval_grid(
        &p,
        order,
        (w.s_min, w.s_max),
        (w.t_min, w.t_max),
        to_usize(w.ns, "ns")?,
        to_usize(w.nt, "nt")?,
    )?;

    let (dir, stem) = output::split_out(&args.out);
    let mut out = OutputSet::new(dir)?;
    out.write(&format!("{stem}.csv"), &output::grid_csv(&grid))?;

    let mut parameters = params_json(&p, order);
    parameters["window"] = json!({
        "s_min": w.s_min, "s_max": w.s_max, "t_min": w.t_min, "t_max": w.t_max,
        "ns": w.ns, "nt": w.nt,
    });
    let mut manifest = RunManifest::new("eval", argv, parameters);
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    let path = out.finish(&format!("{stem}.json"), manifest)?;

    let max_sigma = grid
        .values
        .iter()
        .map(FieldPair::intensity_sigma)
        .fold(0.0, f64::max);
    let max_psi = grid
        .values
        .iter()
        .map(FieldPair::intensity_psi)
        .fold(0.0, f64::max);
    println!(
        "eval: {} points, max I_sigma = {}, max I_psi = {}; manifest {}",
        grid.values.len(),
        output::fmt_f64(max_sigma),
        output::fmt_f64(max_psi),
        path.display()
    );
    Ok(())
}

/// Writes one slice CSV per time and the overlay script; returns
/// `(time, file name)` pairs.
#[allow(clippy::too_many_arguments)]
fn write_slices(
    out: &mut OutputSet,
    prefix: &str,
    script: &str,
    p: &RogonParams,
    order: Order,
    times: &[f64],
    s_range: (f64, f64),
    ns: usize,
    title: &str,
) -> Result<Vec<(f64, String)>, CliError> {
    let mut files = Vec::with_capacity(times.len());
    for &t in times {
        if !t.is_finite() {
            return Err(CliError::param(format!(
                "--times entries must be finite, got {t}"
            )));
        }
        let g = eval_grid(p, order, s_range, (t, t), ns, 1)?;
        let name = format!("{prefix}{}.csv", output::time_label(t));
        out.write(&name, &output::grid_csv(&g))?;
        files.push((t, name));
    }
    out.write(script, &output::slices_script(&files, title))?;
    Ok(files)
}

pub fn cmd_slices(args: &SlicesArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let (mut p, order) = args.model.params()?;
    check_range(args.s_min, args.s_max, "s")?;
    let mut notes = Vec::new();
    if args.snap_k {
        let g = Grid::new(args.length, Grid::MIN_POINTS)?;
        let snapped = solver::snap_k(&p, &g);
        notes.push(format!(
            "k snapped from {} to {} for L = {}",
            p.k, snapped.k, args.length
        ));
        println!("snap-k: k = {} -> {}", p.k, snapped.k);
        p = snapped;
    }

    let (dir, stem) = output::split_out(&args.out);
    let mut out = OutputSet::new(dir)?;
    let title = format!("order-{} rogon slices, k={}", order.as_int(), p.k);
    let files = write_slices(
        &mut out,
        &format!("{stem}_"),
        &format!("{stem}_slices.py"),
        &p,
        order,
        &args.times,
        (args.s_min, args.s_max),
        to_usize(args.ns, "ns")?,
        &title,
    )?;

    let mut parameters = params_json(&p, order);
    parameters["times"] = json!(args.times);
    parameters["window"] = json!({"s_min": args.s_min, "s_max": args.s_max, "ns": args.ns});
    let mut manifest = RunManifest::new("slices", argv, parameters);
    manifest.notes = notes;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    out.finish(&format!("{stem}.json"), manifest)?;
    println!("slices: wrote {} slice files", files.len());
    Ok(())
}

pub fn cmd_residual(args: &ResidualArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let (p, order) = args.model.params()?;
    check_range(args.s_min, args.s_max, "s")?;
    check_range(args.t_min, args.t_max, "t")?;
    let fd_order = FdOrder::from_int(args.fd_order.parse().unwrap_or(0))?;
    if !(args.tol.is_finite() && args.tol >= 0.0) {
        return Err(CliError::param(format!(
            "--tol must be finite and >= 0, got {}",
            args.tol
        )));
    }
    let region = Region {
        s_range: (args.s_min, args.s_max),
        t_range: (args.t_min, args.t_max),
    };
    let ns = to_usize(args.ns, "ns")?;
    let nt = to_usize(args.nt, "nt")?;

    let analytic = move |p: &RogonParams, x: PointST| rogon::eval_rogon(p, order, x);
    let corrupted = residual::corrupted_rogon(order);
    let report = match args.field {
        FieldChoice::Analytic => {
            residual::residual_scan(analytic, &p, region, ns, nt, args.h, fd_order)?
        }
        FieldChoice::Corrupted => {
            residual::residual_scan(corrupted, &p, region, ns, nt, args.h, fd_order)?
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }

    let study = if args.study {
        let x = PointST::new(0.5 + p.k * 0.3, 0.3);
        let h_list: Vec<f64> = [16.0, 8.0, 4.0, 2.0].iter().map(|m| m * args.h).collect();
        let s = match args.field {
            FieldChoice::Analytic => {
                residual::convergence_study(analytic, &p, x, fd_order, &h_list)?
            }
            FieldChoice::Corrupted => {
                residual::convergence_study(corrupted, &p, x, fd_order, &h_list)?
            }
        };
        print!("{}", s.table());
        Some(s)
    } else {
        None
    };

    let passed = report.max_abs() < args.tol;
    let (dir, stem) = output::split_out(&args.out);
    let mut out = OutputSet::new(dir)?;
    let body = json!({
        "report": report,
        "study": study,
        "tol": args.tol,
        "passed": passed,
    });
    let mut text = serde_json::to_string_pretty(&body).map_err(std::io::Error::other)?;
    text.push('\n');
    out.write(&format!("{stem}_report.json"), &text)?;

    let mut parameters = params_json(&p, order);
    parameters["residual"] = json!({
        "field": format!("{:?}", args.field).to_lowercase(),
        "fd_order": fd_order.as_int(),
        "h": args.h,
        "region": region,
        "ns": ns,
        "nt": nt,
        "tol": args.tol,
        "study": args.study,
    });
    let mut manifest = RunManifest::new("residual", argv, parameters);
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    out.finish(&format!("{stem}.json"), manifest)?;

    println!(
        "residual: max |r_sigma| = {:.3e}, max |r_psi| = {:.3e}, tol = {:.1e}: {}",
        report.max_abs_r_sigma,
        report.max_abs_r_psi,
        args.tol,
        if passed { "PASS" } else { "FAIL" }
    );
    if passed {
        Ok(())
    } else {
        Err(CliError {
            code: EXIT_VERIFY,
            message: format!(
                "max residual {:.3e} is not below --tol {:e}",
                report.max_abs(),
                args.tol
            ),
        })
    }
}

/// Forwards to `inner` every `every` steps and at `t_end`.
struct Every<'a, O: Observer> {
    every: u64,
    t_end: f64,
    inner: &'a mut O,
}

impl<O: Observer> Observer for Every<'_, O> {
    fn observe(&mut self, step: u64, state: &SimState) -> crate::Result<()> {
        if step % self.every == 0 || state.t == self.t_end {
            self.inner.observe(step, state)
        } else {
            Ok(())
        }
    }
}

struct Snapshots<'a> {
    out: &'a mut OutputSet,
    stem: String,
    grid: Grid,
    error: Option<std::io::Error>,
}

impl Observer for Snapshots<'_> {
    fn observe(&mut self, step: u64, state: &SimState) -> crate::Result<()> {
        if self.error.is_some() {
            return Ok(());
        }
        let rows: Vec<(PointST, FieldPair)> = self
            .grid
            .s()
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                (
                    PointST::new(s, state.t),
                    FieldPair {
                        sigma: state.sigma[j],
                        psi: state.psi[j],
                    },
                )
            })
            .collect();
        let csv = output::field_csv(rows.iter().map(|(x, v)| (*x, v)));
        if let Err(e) = self
            .out
            .write(&format!("{}_snap_{step:08}.csv", self.stem), &csv)
        {
            self.error = Some(e);
        }
        Ok(())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn cmd_simulate(args: &SimulateArgs, argv: &[String]) -> Result<(), CliError> {
    let start = Instant::now();
    let (mut p, order) = args.model.params()?;
    let grid = Grid::new(args.length, args.n)?;
    let mut notes = Vec::new();
    if args.snap_k {
        let snapped = solver::snap_k(&p, &grid);
        if snapped.k != p.k {
            notes.push(format!("k snapped from {} to {}", p.k, snapped.k));
            println!("snap-k: k = {} -> {}", p.k, snapped.k);
        }
        p = snapped;
    } else {
        grid.check_periodic_k(p.k)?;
    }
    let cfg = SolverConfig {
        dt: args.dt,
        beta: p.beta,
        record_every: args.record_every,
        dealias: args.dealias,
    };
    cfg.validate()?;
    if !(args.t0.is_finite() && args.t_end.is_finite() && args.t_end >= args.t0) {
        return Err(CliError::param(format!(
            "--t-end must be finite and >= --t0, got t0 = {}, t-end = {}",
            args.t0, args.t_end
        )));
    }

    let mut state = solver::init_from_analytic(&p, order, &grid, args.t0)?;
    let mut stepper = Stepper::new(&grid, &cfg)?;
    let (dir, stem) = output::split_out(&args.out);
    let mut out = OutputSet::new(dir)?;

    let mut series = ConservedSeries::new(&grid, p.beta).with_reference(p, order);
    let every = match args.snapshot_every {
        Some(s) => gcd(args.record_every, s),
        None => args.record_every,
    };
    let result = {
        let mut rec = Every {
            every: args.record_every,
            t_end: args.t_end,
            inner: &mut series,
        };
        match args.snapshot_every {
            Some(s) => {
                let mut snaps = Snapshots {
                    out: &mut out,
                    stem: stem.clone(),
                    grid: grid.clone(),
                    error: None,
                };
                let mut snap_obs = Every {
                    every: s,
                    t_end: args.t_end,
                    inner: &mut snaps,
                };
                let r = solver::evolve(
                    &mut state,
                    &mut stepper,
                    every,
                    args.t_end,
                    &mut [&mut rec, &mut snap_obs],
                );
                if let Some(e) = snaps.error.take() {
                    return Err(e.into());
                }
                r
            }
            None => solver::evolve(&mut state, &mut stepper, every, args.t_end, &mut [&mut rec]),
        }
    };

    // Series up to the failure point is still written on a numerical abort.
    out.write(
        &format!("{stem}_series.csv"),
        &output::series_csv(&series.rows),
    )?;
    let final_l2 = series.rows.last().and_then(|r| r.l2_rel_vs_analytic);
    let drift = series.max_norm_drift();
    let h_drift = series.max_hamiltonian_drift();

    let mut parameters = params_json(&p, order);
    parameters["grid"] = json!({"L": grid.length, "N": grid.n, "dS": grid.ds});
    parameters["solver"] = json!({
        "scheme": "strang",
        "dt": cfg.dt,
        "t0": args.t0,
        "t_end": args.t_end,
        "record_every": cfg.record_every,
        "snapshot_every": args.snapshot_every,
        "dealias": cfg.dealias,
    });
    parameters["summary"] = json!({
        "steps": result.as_ref().ok().map(|s| s.steps),
        "final_l2_rel_vs_analytic": final_l2,
        "max_rel_norm_drift": drift,
        "max_rel_hamiltonian_drift": h_drift,
    });
    let mut manifest = RunManifest::new("simulate", argv, parameters);
    manifest.notes = notes;
    manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
    out.finish(&format!("{stem}.json"), manifest)?;

    let summary = result?;
    println!(
        "simulate: {} steps to t = {}, final l2_rel_vs_analytic = {}, max norm drift = {:.3e}, max H drift = {:.3e}",
        summary.steps,
        summary.t_end,
        final_l2.map(|v| format!("{v:.3e}")).unwrap_or_else(|| "n/a".into()),
        drift,
        h_drift
    );
    Ok(())
}

pub fn cmd_figures(args: &FiguresArgs, argv: &[String]) -> Result<(), CliError> {
    let ns = to_usize(args.ns, "ns")?;
    let nt = to_usize(args.nt, "nt")?;
    for fig in figures::FIGURES {
        let start = Instant::now();
        let p = fig.params();
        let mut out = OutputSet::new(args.out_dir.join(fig.name))?;
        let grid = eval_grid(
            &p,
            fig.order,
            figures::FIGURE_S_RANGE,
            figures::FIGURE_T_RANGE,
            ns,
            nt,
        )?;
        out.write("surface.csv", &output::grid_csv(&grid))?;
        out.write(
            "surface.py",
            &output::surface_script("surface.csv", &fig.title(), ns, nt),
        )?;
        write_slices(
            &mut out,
            "slice_",
            "slices.py",
            &p,
            fig.order,
            fig.times,
            figures::FIGURE_S_RANGE,
            ns,
            &fig.title(),
        )?;

        let mut parameters = params_json(&p, fig.order);
        parameters["figure"] = json!(fig.name);
        parameters["times"] = json!(fig.times);
        parameters["window"] = json!({
            "s_min": figures::FIGURE_S_RANGE.0, "s_max": figures::FIGURE_S_RANGE.1,
            "t_min": figures::FIGURE_T_RANGE.0, "t_max": figures::FIGURE_T_RANGE.1,
            "ns": ns, "nt": nt,
        });
        let mut manifest = RunManifest::new("figures", argv, parameters);
        manifest.notes.push(
            "plot window S in [-4, 4], t in [-2, 2] is a chosen default; k is used exactly".into(),
        );
        manifest.wall_clock_seconds = start.elapsed().as_secs_f64();
        out.finish("manifest.json", manifest)?;

        let peak = rogon::peak_info(&p, fig.order)?;
        let max_psi = grid
            .values
            .iter()
            .map(FieldPair::intensity_psi)
            .fold(0.0, f64::max);
        println!(
            "{}: order {}, k = {}, slices at {:?}, peak I_psi = {} ({}x background)",
            fig.name,
            fig.order.as_int(),
            fig.k,
            fig.times,
            output::fmt_f64(max_psi),
            peak.intensity_ratio()
        );
    }
    Ok(())
}
