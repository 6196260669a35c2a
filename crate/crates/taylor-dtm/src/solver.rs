//! Problem-level orchestration: IVP solves dispatched over the
//! continuation back ends, and BVP solution by shooting on the unknown
//! initial value.

use std::fmt;

use crate::continuation::{
    dtm_pade_coupled, kernel_pade_evaluate, pade_from_series, stepwise_solve, PadeApproximant,
};
use crate::dtm::{DtmImage, Kernel, Weighting};
use crate::error::{Error, Result};
use crate::plan::{compile_plan, expand_series};
use crate::problem::OdeProblem;
use crate::series::TaylorSeries;

/// Fixed or radius-driven stepping for the stepwise back end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepMode {
    Fixed(f64),
    Adaptive,
}

/// Which analytic continuation carries the local series across the range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuationMethod {
    Stepwise,
    Pade,
    DtmPade,
    KernelPade,
}

impl fmt::Display for ContinuationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContinuationMethod::Stepwise => "stepwise",
            ContinuationMethod::Pade => "pade",
            ContinuationMethod::DtmPade => "dtm-pade",
            ContinuationMethod::KernelPade => "kernel-pade",
        })
    }
}

/// Output sample grid.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// `n` uniform intervals over `[t_0, t_0 + H]` (n+1 samples).
    Count(usize),
    /// Explicit, strictly increasing sample times.
    Times(Vec<f64>),
}

/// Solver settings. Defaults: order 12, adaptive stepping with a local
/// budget of 1e-12, stepwise continuation, 10 grid intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Series order N per expansion.
    pub order: usize,
    pub step: StepMode,
    /// Last-term budget `|X_N| h^N <= tol_local` for adaptive steps.
    pub tol_local: f64,
    pub continuation: ContinuationMethod,
    /// Padé degrees (N1, N2); N1 + N2 <= order.
    pub pade_degrees: (usize, usize),
    /// Kernel for the kernel-Padé back end.
    pub kernel: Kernel,
    pub grid: Grid,
    /// Step floor as a fraction of the range; falling below raises
    /// `StepUnderflow`.
    pub h_min_frac: f64,
    pub max_steps: usize,
    /// Boundary residual tolerance for shooting.
    pub tol_bvp: f64,
    pub max_bvp_iters: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            order: 12,
            step: StepMode::Adaptive,
            tol_local: 1e-12,
            continuation: ContinuationMethod::Stepwise,
            pade_degrees: (6, 6),
            kernel: Kernel::Unit,
            grid: Grid::Count(10),
            h_min_frac: 1e-12,
            max_steps: 100_000,
            tol_bvp: 1e-10,
            max_bvp_iters: 50,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::InvalidConfig("order must be at least 2".into()));
        }
        if let StepMode::Fixed(h) = self.step {
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::InvalidConfig("fixed step h must be positive".into()));
            }
        }
        if !self.tol_local.is_finite() || self.tol_local <= 0.0 {
            return Err(Error::InvalidConfig("tol_local must be positive".into()));
        }
        if matches!(
            self.continuation,
            ContinuationMethod::Pade | ContinuationMethod::DtmPade | ContinuationMethod::KernelPade
        ) {
            let (n1, n2) = self.pade_degrees;
            if n1 + n2 > self.order {
                return Err(Error::InvalidConfig(format!(
                    "Pade degrees [{n1}/{n2}] exceed the series order {}",
                    self.order
                )));
            }
        }
        if !self.h_min_frac.is_finite() || self.h_min_frac <= 0.0 {
            return Err(Error::InvalidConfig("h_min_frac must be positive".into()));
        }
        Ok(())
    }
}

/// Sampled solution: times, per-time state rows, per-sample error
/// estimates, and run metadata.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub variables: Vec<String>,
    pub times: Vec<f64>,
    /// `values[i][j]` = variable `j` at `times[i]`.
    pub values: Vec<Vec<f64>>,
    pub err_est: Vec<f64>,
    pub steps_taken: usize,
    pub method: ContinuationMethod,
    /// Degenerate-Padé fallbacks and similar non-fatal events.
    pub warnings: Vec<String>,
}

fn resolve_grid(p: &OdeProblem, cfg: &SolverConfig) -> Result<Vec<f64>> {
    match &cfg.grid {
        Grid::Count(n) => {
            if *n == 0 {
                return Err(Error::InvalidConfig(
                    "grid needs at least 1 interval".into(),
                ));
            }
            let span = p.range().ok_or_else(|| {
                Error::InvalidConfig(
                    "a counted grid needs a finite range; give explicit times".into(),
                )
            })?;
            if !span.is_finite() || span <= 0.0 {
                return Err(Error::InvalidConfig(
                    "range must be positive and finite".into(),
                ));
            }
            Ok((0..=*n)
                .map(|j| p.t0() + span * (j as f64 / *n as f64))
                .collect())
        }
        Grid::Times(times) => {
            if times.is_empty() {
                return Err(Error::InvalidConfig("empty sample grid".into()));
            }
            if times.iter().any(|t| !t.is_finite()) {
                return Err(Error::InvalidConfig("sample times must be finite".into()));
            }
            if times.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidConfig(
                    "sample times must be strictly increasing".into(),
                ));
            }
            Ok(times.clone())
        }
    }
}

/// Retries a Padé construction down the ladder `(N1, N2) -> (N1, N2-1) ->
/// ...` when the linear system is degenerate, recording one warning per
/// fallback level actually taken.
fn pade_with_ladder(
    x: &TaylorSeries,
    n1: usize,
    n2: usize,
    coupled: bool,
    var: &str,
    warnings: &mut Vec<String>,
) -> Result<PadeApproximant> {
    let mut m2 = n2;
    loop {
        let attempt = if coupled {
            dtm_pade_coupled(x, n1, m2).map(|(pa, _)| pa)
        } else {
            pade_from_series(x, n1, m2)
        };
        match attempt {
            Ok(pa) => {
                if m2 < n2 {
                    warnings.push(format!(
                        "degenerate Pade for {var}: fell back from [{n1}/{n2}] to [{n1}/{m2}]"
                    ));
                }
                return Ok(pa);
            }
            Err(Error::DegeneratePade { .. }) if m2 > 0 => m2 -= 1,
            Err(e) => return Err(e),
        }
    }
}

/// Solves an initial value problem on the configured grid.
///
/// Stepwise sampling always evaluates the series of the window containing
/// the sample (never extrapolating past a window end); the rational back
/// ends build one approximant per variable at `t_0` and may be sampled far
/// beyond the series' own radius.
pub fn solve_ivp(p: &OdeProblem, cfg: &SolverConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if !p.is_normalized() {
        return Err(Error::InvalidConfig("problem must be normalized".into()));
    }
    let alpha = p.known_initials()?;
    let plan = compile_plan(p)?;
    let times = resolve_grid(p, cfg)?;
    let variables: Vec<String> = p.variables().iter().map(|v| v.to_string()).collect();
    let mut warnings = Vec::new();

    match cfg.continuation {
        ContinuationMethod::Stepwise => {
            let records = stepwise_solve(&plan, p, cfg)?;
            let t_end = records.last().unwrap().t_next;
            let mut values = Vec::with_capacity(times.len());
            let mut err_est = Vec::with_capacity(times.len());
            for &t in &times {
                if t < p.t0() || t > t_end {
                    return Err(Error::InvalidConfig(format!(
                        "sample time {t} lies outside the solved range [{}, {t_end}]",
                        p.t0()
                    )));
                }
                let idx = records
                    .partition_point(|r| r.t_next < t)
                    .min(records.len() - 1);
                let rec = &records[idx];
                values.push(rec.series.iter().map(|s| s.eval(t)).collect());
                err_est.push(rec.err_est);
            }
            Ok(Trajectory {
                variables,
                times,
                values,
                err_est,
                steps_taken: records.len(),
                method: cfg.continuation,
                warnings,
            })
        }
        ContinuationMethod::Pade | ContinuationMethod::DtmPade => {
            let coupled = cfg.continuation == ContinuationMethod::DtmPade;
            let series = expand_series(&plan, &alpha, p.t0(), cfg.order)?;
            let (n1, n2) = cfg.pade_degrees;
            let approximants: Vec<PadeApproximant> = series
                .iter()
                .zip(&variables)
                .map(|(x, v)| pade_with_ladder(x, n1, n2, coupled, v, &mut warnings))
                .collect::<Result<_>>()?;
            let mut values = Vec::with_capacity(times.len());
            let mut err_est = Vec::with_capacity(times.len());
            for &t in &times {
                let row: Vec<f64> = approximants
                    .iter()
                    .map(|pa| pa.eval(t))
                    .collect::<Result<_>>()?;
                values.push(row);
                err_est.push(tail_estimate(&series, t, p.t0(), cfg.order));
            }
            Ok(Trajectory {
                variables,
                times,
                values,
                err_est,
                steps_taken: 1,
                method: cfg.continuation,
                warnings,
            })
        }
        ContinuationMethod::KernelPade => {
            let series = expand_series(&plan, &alpha, p.t0(), cfg.order)?;
            let (n1, n2) = cfg.pade_degrees;
            // The ladder is probed once per variable at the first sample,
            // then the chosen degrees are reused pointwise.
            let mut degrees: Vec<(usize, usize)> = Vec::with_capacity(series.len());
            for (x, v) in series.iter().zip(&variables) {
                let img = DtmImage::transform(x, Weighting::Factorial, cfg.kernel)?;
                let y = TaylorSeries::new(x.base(), img.image().to_vec())?;
                let pa = pade_with_ladder(&y, n1, n2, false, v, &mut warnings)?;
                degrees.push(pa.degrees());
            }
            let mut values = Vec::with_capacity(times.len());
            let mut err_est = Vec::with_capacity(times.len());
            for &t in &times {
                let row: Vec<f64> = series
                    .iter()
                    .zip(&degrees)
                    .map(|(x, &(m1, m2))| kernel_pade_evaluate(x, &cfg.kernel, m1, m2, t))
                    .collect::<Result<_>>()?;
                values.push(row);
                err_est.push(tail_estimate(&series, t, p.t0(), cfg.order));
            }
            Ok(Trajectory {
                variables,
                times,
                values,
                err_est,
                steps_taken: 1,
                method: cfg.continuation,
                warnings,
            })
        }
    }
}

/// Crude last-term proxy `max_v |X_N| |t - t_0|^N` for the rational back
/// ends; a magnitude indicator, not a bound.
fn tail_estimate(series: &[TaylorSeries], t: f64, t0: f64, n: usize) -> f64 {
    let tail = series
        .iter()
        .map(|s| s.coeff(n).abs())
        .fold(0.0f64, f64::max);
    tail * (t - t0).abs().powi(n as i32)
}

/// Solves a two-point BVP with one unknown initial value by shooting:
/// secant iteration on the boundary residual, with bisection fallback
/// whenever a sign-changing bracket is known and the secant candidate
/// escapes it.
///
/// Returns the recovered initial value and the trajectory solved with it.
pub fn solve_bvp_shooting(
    p: &OdeProblem,
    cfg: &SolverConfig,
    bracket: (f64, f64),
) -> Result<(f64, Trajectory)> {
    cfg.validate()?;
    if !p.is_normalized() {
        return Err(Error::InvalidConfig("problem must be normalized".into()));
    }
    let unknowns: Vec<usize> = (0..p.n_vars())
        .filter(|&j| p.initial()[j].is_none())
        .collect();
    let [unknown] = unknowns[..] else {
        return Err(Error::InvalidConfig(format!(
            "shooting needs exactly one unknown initial value, found {}",
            unknowns.len()
        )));
    };
    let boundary = p
        .boundary()
        .ok_or_else(|| {
            Error::InvalidConfig("shooting needs a boundary condition away from t0".into())
        })?
        .clone();
    let span = boundary.time - p.t0();
    if !span.is_finite() || span <= 0.0 {
        return Err(Error::InvalidConfig("boundary time must exceed t0".into()));
    }
    let plan = compile_plan(p)?;

    let residual = |a: f64| -> Result<f64> {
        let candidate = p.with_initial(unknown, a).with_range(span);
        let records = stepwise_solve(&plan, &candidate, cfg)?;
        Ok(records.last().unwrap().alpha_next[boundary.var] - boundary.value)
    };

    let (lo, hi) = bracket;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidConfig("bracket must satisfy lo < hi".into()));
    }
    let width = hi - lo;
    let tol = cfg.tol_bvp;

    // Track one positive and one negative residual for bisection safety.
    let mut pos: Option<(f64, f64)> = None;
    let mut neg: Option<(f64, f64)> = None;
    let note = |x: f64, f: f64, pos: &mut Option<(f64, f64)>, neg: &mut Option<(f64, f64)>| {
        if f >= 0.0 {
            *pos = Some((x, f));
        } else {
            *neg = Some((x, f));
        }
    };

    let f_lo = residual(lo)?;
    if f_lo.abs() <= tol {
        return finish(p, cfg, unknown, lo);
    }
    note(lo, f_lo, &mut pos, &mut neg);
    let f_hi = residual(hi)?;
    if f_hi.abs() <= tol {
        return finish(p, cfg, unknown, hi);
    }
    note(hi, f_hi, &mut pos, &mut neg);

    // Secant seeds: bracket midpoint and a nearby offset point.
    let mut x0 = 0.5 * (lo + hi);
    let mut f0 = residual(x0)?;
    if f0.abs() <= tol {
        return finish(p, cfg, unknown, x0);
    }
    note(x0, f0, &mut pos, &mut neg);
    let mut x1 = x0 + 1e-4 * width;
    let mut f1 = residual(x1)?;
    if f1.abs() <= tol {
        return finish(p, cfg, unknown, x1);
    }
    note(x1, f1, &mut pos, &mut neg);

    for _ in 0..cfg.max_bvp_iters {
        let denom = f1 - f0;
        let mut candidate = if denom != 0.0 {
            x1 - f1 * (x1 - x0) / denom
        } else {
            f64::NAN
        };
        if let (Some((xp, _)), Some((xn, _))) = (pos, neg) {
            let (a, b) = (xp.min(xn), xp.max(xn));
            if !candidate.is_finite() || candidate <= a || candidate >= b {
                candidate = 0.5 * (a + b); // bisection fallback
            }
        } else if !candidate.is_finite() || (candidate - x1).abs() > 1e6 * width.max(1.0) {
            return Err(Error::NoRootInBracket);
        }
        let fc = residual(candidate)?;
        if fc.abs() <= tol {
            return finish(p, cfg, unknown, candidate);
        }
        note(candidate, fc, &mut pos, &mut neg);
        x0 = x1;
        f0 = f1;
        x1 = candidate;
        f1 = fc;
    }
    Err(Error::MaxIterationsExceeded(cfg.max_bvp_iters))
}

fn finish(
    p: &OdeProblem,
    cfg: &SolverConfig,
    unknown: usize,
    alpha: f64,
) -> Result<(f64, Trajectory)> {
    let solved = p.with_initial(unknown, alpha);
    let traj = solve_ivp(&solved, cfg)?;
    Ok((alpha, traj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_problem;
    use approx::assert_relative_eq;

    fn problem(text: &str) -> OdeProblem {
        parse_problem(text).unwrap().normalize().unwrap()
    }

    #[test]
    fn stepwise_samples_the_exponential() {
        let p = problem("x' = x; x(0)=1").with_range(1.0);
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.1),
            grid: Grid::Count(2),
            ..SolverConfig::default()
        };
        let traj = solve_ivp(&p, &cfg).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.5, 1.0]);
        assert_relative_eq!(traj.values[0][0], 1.0, epsilon = 1e-15);
        assert_relative_eq!(traj.values[1][0], 0.5f64.exp(), epsilon = 1e-12);
        assert_relative_eq!(traj.values[2][0], 1f64.exp(), epsilon = 1e-12);
    }

    #[test]
    fn samples_inside_a_window_use_that_window_series() {
        // h = 0.4: the sample at t = 0.3 falls strictly inside [0, 0.4].
        let p = problem("x' = x; x(0)=1").with_range(1.2);
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.4),
            grid: Grid::Times(vec![0.3, 0.7, 1.1]),
            ..SolverConfig::default()
        };
        let traj = solve_ivp(&p, &cfg).unwrap();
        for (i, &t) in traj.times.iter().enumerate() {
            assert_relative_eq!(traj.values[i][0], t.exp(), epsilon = 1e-12);
        }
        assert_eq!(traj.steps_taken, 3);
    }

    #[test]
    fn zero_rhs_gives_constant_trajectory() {
        let p = problem("x' = 0; x(0)=4.25").with_range(2.0);
        let cfg = SolverConfig {
            grid: Grid::Count(5),
            ..SolverConfig::default()
        };
        let traj = solve_ivp(&p, &cfg).unwrap();
        for row in &traj.values {
            assert_eq!(row[0], 4.25);
        }
    }

    #[test]
    fn dtm_pade_reaches_far_past_the_radius() {
        // x' = -x^2, x(0) = 1 is 1/(1+t): radius 1 but sampled at t = 9.
        let p = problem("x' = -x^2; x(0)=1");
        let cfg = SolverConfig {
            continuation: ContinuationMethod::DtmPade,
            pade_degrees: (4, 4),
            grid: Grid::Times(vec![0.0, 1.0, 9.0]),
            ..SolverConfig::default()
        };
        let traj = solve_ivp(&p, &cfg).unwrap();
        assert_relative_eq!(traj.values[2][0], 0.1, epsilon = 1e-10);
        // The [4/4] Hankel block of the geometric series is singular; the
        // ladder must have stepped down and said so.
        assert!(!traj.warnings.is_empty());
    }

    #[test]
    fn stepwise_and_dtm_pade_agree_inside_the_radius() {
        let p = problem("x' = 1 + x^2; x(0)=0").with_range(1.0);
        let stepwise = solve_ivp(
            &p,
            &SolverConfig {
                grid: Grid::Count(4),
                ..SolverConfig::default()
            },
        )
        .unwrap();
        let pade = solve_ivp(
            &p,
            &SolverConfig {
                continuation: ContinuationMethod::DtmPade,
                pade_degrees: (6, 6),
                grid: Grid::Count(4),
                ..SolverConfig::default()
            },
        )
        .unwrap();
        for (a, b) in stepwise.values.iter().zip(&pade.values) {
            assert_relative_eq!(a[0], b[0], max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn grid_validation() {
        let p = problem("x' = x; x(0)=1").with_range(1.0);
        let cfg = SolverConfig {
            grid: Grid::Times(vec![0.0, 0.5, 0.5]),
            ..SolverConfig::default()
        };
        assert!(matches!(solve_ivp(&p, &cfg), Err(Error::InvalidConfig(_))));
        let cfg = SolverConfig {
            grid: Grid::Times(vec![0.0, 1.5]),
            ..SolverConfig::default()
        };
        // Sample beyond the solved range: stepwise refuses to extrapolate.
        assert!(matches!(solve_ivp(&p, &cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn shooting_recovers_sine_slope() {
        // x'' = -x, x(0) = 0, x(pi/2) = 1: slope must be 1.
        let text = format!("x'' = -x; x(0)=0; x({})=1", std::f64::consts::FRAC_PI_2);
        let p = problem(&text);
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.05),
            grid: Grid::Count(4),
            ..SolverConfig::default()
        };
        let (slope, traj) = solve_bvp_shooting(&p, &cfg, (0.0, 2.0)).unwrap();
        assert!((slope - 1.0).abs() <= 1e-10, "slope = {slope}");
        let mid = traj.values[2][0]; // t = pi/4
        assert_relative_eq!(mid, std::f64::consts::FRAC_PI_4.sin(), epsilon = 1e-9);
    }

    #[test]
    fn shooting_linear_problem_converges_immediately() {
        // x'' = 0, x(0) = 0, x(1) = c: the residual is linear in the
        // slope, so a single secant step lands on the root; two
        // iterations are more than enough.
        let p = problem("x'' = 0; x(0)=0; x(1)=3.5");
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.25),
            grid: Grid::Count(2),
            max_bvp_iters: 2,
            ..SolverConfig::default()
        };
        let (slope, _) = solve_bvp_shooting(&p, &cfg, (0.0, 10.0)).unwrap();
        assert!((slope - 3.5).abs() <= 1e-12);
    }

    #[test]
    fn shooting_without_a_root_is_reported() {
        // x'' = -x with x(0) = 0 has x(pi) = 0 for every slope: the
        // boundary value 1 is unreachable and the residual is flat.
        let text = format!("x'' = -x; x(0)=0; x({})=1", std::f64::consts::PI);
        let p = problem(&text);
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.1),
            grid: Grid::Count(2),
            ..SolverConfig::default()
        };
        match solve_bvp_shooting(&p, &cfg, (-1.0, 1.0)) {
            Err(Error::NoRootInBracket) | Err(Error::MaxIterationsExceeded(_)) => {}
            other => panic!("expected a root-finding failure, got {other:?}"),
        }
    }

    #[test]
    fn shooting_hyperbolic_problem() {
        // x'' = x, x(0) = 0, x(1) = 1: slope = 1/sinh(1).
        let p = problem("x'' = x; x(0)=0; x(1)=1");
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.05),
            grid: Grid::Count(2),
            ..SolverConfig::default()
        };
        let (slope, _) = solve_bvp_shooting(&p, &cfg, (0.0, 2.0)).unwrap();
        assert!((slope - 1.0 / 1f64.sinh()).abs() <= 1e-9, "slope = {slope}");
    }

    #[test]
    fn shooting_with_boundary_on_a_derivative() {
        // x'' = -x, x(0) = 1, x'(pi) = 0: x = cos t + c sin t has
        // x'(pi) = -c, so the recovered slope is 0.
        let text = format!("x'' = -x; x(0)=1; x'({})=0", std::f64::consts::PI);
        let p = problem(&text);
        let b = p.boundary().unwrap();
        assert_eq!(p.variables()[b.var], "x_d1");
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.05),
            grid: Grid::Count(2),
            ..SolverConfig::default()
        };
        let (slope, _) = solve_bvp_shooting(&p, &cfg, (-1.0, 1.0)).unwrap();
        assert!(slope.abs() <= 1e-10, "slope = {slope}");
    }

    #[test]
    fn shooting_requires_one_unknown() {
        let p = problem("x' = x; x(0)=1").with_range(1.0);
        assert!(matches!(
            solve_bvp_shooting(&p, &SolverConfig::default(), (0.0, 1.0)),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn error_estimates_are_nonnegative() {
        let p = problem("x' = x; x(0)=1").with_range(1.0);
        let cfg = SolverConfig {
            step: StepMode::Fixed(0.1),
            order: 6,
            grid: Grid::Count(10),
            ..SolverConfig::default()
        };
        let traj = solve_ivp(&p, &cfg).unwrap();
        assert!(traj.err_est.iter().all(|e| *e >= 0.0));
    }
}
