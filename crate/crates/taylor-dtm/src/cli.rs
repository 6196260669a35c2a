//! Command-line front end: `solve` writes a trajectory CSV plus a run
//! manifest, `series` prints raw and weighted coefficients, `pade` prints
//! approximant coefficients with an optional cross-route check.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 solver error. All
//! numeric output uses shortest round-trip formatting, so identical inputs
//! produce byte-identical files.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::continuation::{dtm_pade_coupled, pade_from_series};
use crate::dtm::{DtmImage, Kernel, Weighting};
use crate::error::{Error, Result};
use crate::parse::parse_problem;
use crate::plan::{compile_plan, expand_series};
use crate::problem::OdeProblem;
use crate::solver::{
    solve_bvp_shooting, solve_ivp, ContinuationMethod, Grid, SolverConfig, StepMode, Trajectory,
};

#[derive(Parser)]
#[command(
    name = "taylor-dtm",
    version,
    about = "Taylor-series / differential-transformation ODE solver"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a problem file; write a trajectory CSV and a run manifest.
    Solve(SolveArgs),
    /// Print raw Taylor coefficients and their weighted images.
    Series(SeriesArgs),
    /// Print Pade numerator/denominator coefficients for a problem's series.
    Pade(PadeArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ContinuationArg {
    Stepwise,
    Pade,
    DtmPade,
    KernelPade,
}

impl From<ContinuationArg> for ContinuationMethod {
    fn from(c: ContinuationArg) -> Self {
        match c {
            ContinuationArg::Stepwise => ContinuationMethod::Stepwise,
            ContinuationArg::Pade => ContinuationMethod::Pade,
            ContinuationArg::DtmPade => ContinuationMethod::DtmPade,
            ContinuationArg::KernelPade => ContinuationMethod::KernelPade,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Problem file (see README for the grammar).
    file: PathBuf,
    /// Series order N per expansion.
    #[arg(long, default_value_t = 12)]
    order: usize,
    /// Fixed step length (default: adaptive stepping).
    #[arg(long, conflicts_with = "adaptive")]
    h: Option<f64>,
    /// Force adaptive stepping (the default unless --h is given).
    #[arg(long)]
    adaptive: bool,
    /// Local last-term budget for adaptive stepping.
    #[arg(long)]
    tol: Option<f64>,
    /// Range length H (default: boundary-implied, else 1).
    #[arg(long)]
    range: Option<f64>,
    /// Continuation back end.
    #[arg(long, value_enum, default_value_t = ContinuationArg::Stepwise)]
    continuation: ContinuationArg,
    /// Pade degrees N1 N2 (rational back ends).
    #[arg(long, num_args = 2, value_names = ["N1", "N2"])]
    pade: Option<Vec<usize>>,
    /// Power-law kernel parameters NU R (kernel-pade back end).
    #[arg(long, num_args = 2, value_names = ["NU", "R"], allow_negative_numbers = true)]
    kernel: Option<Vec<f64>>,
    /// Number of uniform output intervals over the range.
    #[arg(long, default_value_t = 10)]
    grid: usize,
    /// Shooting bracket LO HI for boundary value problems.
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    shoot: Option<Vec<f64>>,
    /// Output CSV path (default: input path with a .csv extension).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeriesArgs {
    /// Problem file.
    file: PathBuf,
    /// Series order N.
    #[arg(long, default_value_t = 12)]
    order: usize,
    /// Step length for the h^k/k! weighting column (default: 1/k!, i.e.
    /// the image column equals the coefficients).
    #[arg(long)]
    weighting: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Direct,
    Coupled,
}

#[derive(Args)]
struct PadeArgs {
    /// Problem file.
    file: PathBuf,
    /// Series order N to expand before fitting.
    #[arg(long, default_value_t = 12)]
    order: usize,
    /// Pade degrees N1 N2 (default: order/2 each).
    #[arg(long, num_args = 2, value_names = ["N1", "N2"])]
    pade: Option<Vec<usize>>,
    /// Construction route.
    #[arg(long, value_enum, default_value_t = RouteArg::Direct)]
    route: RouteArg,
    /// Build both routes and fail (exit 2) if they disagree beyond 1e-10.
    #[arg(long)]
    check: bool,
    /// Also evaluate P/Q at this point (repeatable).
    #[arg(long, action = clap::ArgAction::Append, allow_negative_numbers = true)]
    eval: Vec<f64>,
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help/version are not usage errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match &cli.cmd {
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Series(a) => cmd_series(a),
        Cmd::Pade(a) => cmd_pade(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Usage/input errors exit 1, solver failures exit 2.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::UndeclaredVariable(_)
        | Error::MissingInitialCondition(_)
        | Error::OverdeterminedSystem(_)
        | Error::ConditionCountMismatch { .. }
        | Error::ImplicitEquation(_)
        | Error::InvalidConfig(_)
        | Error::Io(_) => 1,
        _ => 2,
    }
}

fn read_problem(path: &Path) -> Result<OdeProblem> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text)?.normalize()
}

fn float(v: f64) -> String {
    format!("{v}")
}

/// Flat key=value run record, written alongside every output file.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    fields: Vec<(String, String)>,
}

impl RunManifest {
    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.fields.push((key.to_string(), value.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.fields {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn parse(text: &str) -> RunManifest {
        let fields = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .filter_map(|l| {
                l.split_once('=')
                    .map(|(k, v)| (k.to_string(), v.to_string()))
            })
            .collect();
        RunManifest { fields }
    }
}

fn render_csv(traj: &Trajectory) -> String {
    let mut s = String::from("t");
    for v in &traj.variables {
        s.push(',');
        s.push_str(v);
    }
    s.push_str(",err_est\n");
    for (i, t) in traj.times.iter().enumerate() {
        s.push_str(&float(*t));
        for v in &traj.values[i] {
            s.push(',');
            s.push_str(&float(*v));
        }
        s.push(',');
        s.push_str(&float(traj.err_est[i]));
        s.push('\n');
    }
    s
}

fn cmd_solve(a: &SolveArgs) -> Result<i32> {
    let started = Instant::now();
    let mut problem = read_problem(&a.file)?;
    if let Some(h) = a.range {
        problem = problem.with_range(h);
    } else if problem.range().is_none() {
        problem = problem.with_range(1.0);
    }

    let step = match a.h {
        Some(h) => StepMode::Fixed(h),
        None => StepMode::Adaptive,
    };
    let mut cfg = SolverConfig {
        order: a.order,
        step,
        continuation: a.continuation.into(),
        grid: Grid::Count(a.grid),
        ..SolverConfig::default()
    };
    if let Some(tol) = a.tol {
        cfg.tol_local = tol;
    }
    if let Some(p) = &a.pade {
        cfg.pade_degrees = (p[0], p[1]);
    }
    if let Some(k) = &a.kernel {
        cfg.kernel = Kernel::PowerLaw { nu: k[0], r: k[1] };
    }

    let traj = if let Some(bracket) = &a.shoot {
        let (alpha, traj) = solve_bvp_shooting(&problem, &cfg, (bracket[0], bracket[1]))?;
        println!("recovered initial value: {}", float(alpha));
        traj
    } else {
        solve_ivp(&problem, &cfg)?
    };

    let out = a
        .out
        .clone()
        .unwrap_or_else(|| a.file.with_extension("csv"));
    std::fs::write(&out, render_csv(&traj))
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", out.display())))?;

    let mut manifest = RunManifest::default();
    manifest.push("command", "solve");
    manifest.push("input", a.file.display().to_string());
    manifest.push("out", out.display().to_string());
    manifest.push("order", a.order.to_string());
    match cfg.step {
        StepMode::Fixed(h) => {
            manifest.push("step", "fixed");
            manifest.push("h", float(h));
        }
        StepMode::Adaptive => {
            manifest.push("step", "adaptive");
            manifest.push("tol_local", float(cfg.tol_local));
        }
    }
    manifest.push("range", float(problem.range().unwrap_or(f64::NAN)));
    manifest.push("continuation", cfg.continuation.to_string());
    if let Some(p) = &a.pade {
        manifest.push("pade_n1", p[0].to_string());
        manifest.push("pade_n2", p[1].to_string());
    }
    if let Kernel::PowerLaw { nu, r } = cfg.kernel {
        manifest.push("kernel_nu", float(nu));
        manifest.push("kernel_r", float(r));
    }
    manifest.push("grid", a.grid.to_string());
    if let Some(b) = &a.shoot {
        manifest.push("shoot_lo", float(b[0]));
        manifest.push("shoot_hi", float(b[1]));
    }
    manifest.push("steps", traj.steps_taken.to_string());
    manifest.push("warnings", traj.warnings.len().to_string());
    for (i, w) in traj.warnings.iter().enumerate() {
        manifest.push(&format!("warning_{}", i + 1), w.clone());
    }
    manifest.push("exit", "0");
    manifest.push("wall_ms", started.elapsed().as_millis().to_string());
    let mpath = manifest_path(&out);
    std::fs::write(&mpath, manifest.render())
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", mpath.display())))?;
    Ok(0)
}

/// `<out>.manifest` beside the output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut os = out.as_os_str().to_os_string();
    os.push(".manifest");
    PathBuf::from(os)
}

fn cmd_series(a: &SeriesArgs) -> Result<i32> {
    let problem = read_problem(&a.file)?;
    let alpha = problem.known_initials()?;
    let plan = compile_plan(&problem)?;
    let series = expand_series(&plan, &alpha, problem.t0(), a.order)?;
    let weighting = match a.weighting {
        Some(h) => Weighting::StepScaled(h),
        None => Weighting::Factorial,
    };
    let mut out = String::from("# variable k X_k image\n");
    for (j, var) in problem.variables().iter().enumerate() {
        let img = DtmImage::transform(&series[j], weighting, Kernel::Unit)?;
        for k in 0..=a.order {
            let _ = writeln!(
                out,
                "{var} {k} {} {}",
                float(series[j].coeff(k)),
                float(img.image()[k])
            );
        }
    }
    print!("{out}");
    Ok(0)
}

fn cmd_pade(a: &PadeArgs) -> Result<i32> {
    let problem = read_problem(&a.file)?;
    let alpha = problem.known_initials()?;
    let plan = compile_plan(&problem)?;
    let series = expand_series(&plan, &alpha, problem.t0(), a.order)?;
    let (n1, n2) = match &a.pade {
        Some(p) => (p[0], p[1]),
        None => (a.order / 2, a.order / 2),
    };

    if a.check {
        let mut worst: f64 = 0.0;
        for (j, var) in problem.variables().iter().enumerate() {
            let direct = pade_from_series(&series[j], n1, n2);
            let coupled = dtm_pade_coupled(&series[j], n1, n2);
            match (direct, coupled) {
                (Ok(d), Ok((c, _))) => {
                    let dev = d
                        .numerator()
                        .iter()
                        .zip(c.numerator())
                        .chain(d.denominator().iter().zip(c.denominator()))
                        .map(|(x, y)| (x - y).abs())
                        .fold(0.0f64, f64::max);
                    worst = worst.max(dev);
                    println!(
                        "{var} [{n1}/{n2}] routes agree, max deviation {}",
                        float(dev)
                    );
                }
                (Err(Error::DegeneratePade { .. }), Err(Error::DegeneratePade { .. })) => {
                    println!("{var} [{n1}/{n2}] degenerate on both routes");
                }
                (d, c) => {
                    eprintln!(
                        "error: route disagreement for {var}: direct {:?}, coupled {:?}",
                        d.err(),
                        c.err()
                    );
                    return Ok(2);
                }
            }
        }
        if worst > 1e-10 {
            eprintln!("error: route deviation {worst} exceeds 1e-10");
            return Ok(2);
        }
        return Ok(0);
    }

    let mut out = String::new();
    for (j, var) in problem.variables().iter().enumerate() {
        let pa = match a.route {
            RouteArg::Direct => pade_from_series(&series[j], n1, n2)?,
            RouteArg::Coupled => dtm_pade_coupled(&series[j], n1, n2)?.0,
        };
        let _ = writeln!(out, "# variable {var} [{n1}/{n2}]");
        let _ = writeln!(
            out,
            "P {}",
            pa.numerator()
                .iter()
                .map(|c| float(*c))
                .collect::<Vec<_>>()
                .join(" ")
        );
        let _ = writeln!(
            out,
            "Q {}",
            pa.denominator()
                .iter()
                .map(|c| float(*c))
                .collect::<Vec<_>>()
                .join(" ")
        );
        for &t in &a.eval {
            let _ = writeln!(out, "eval {} {}", float(t), float(pa.eval(t)?));
        }
    }
    print!("{out}");
    Ok(0)
}
