//! Solve initial- and boundary-value problems for systems of ODEs by the
//! Taylor-series / differential-transformation method.
//!
//! The pipeline: a textual ODE system is parsed into expression trees,
//! normalized to an explicit first-order system, compiled into a tape of
//! coefficient recurrences, and advanced order by order through
//! `(k+1) X_{k+1} = F_k`. The resulting local series is continued globally
//! by stepwise restart, Padé approximants, the coupled image/Padé system,
//! or a power-law kernel transform for algebraic behavior at infinity.
//!
//! # Quick start
//!
//! ```
//! use taylor_dtm::{parse_problem, solve_ivp, ContinuationMethod, Grid, SolverConfig, StepMode};
//!
//! let problem = parse_problem("x' = x; x(0) = 1")
//!     .unwrap()
//!     .normalize()
//!     .unwrap()
//!     .with_range(1.0);
//! let cfg = SolverConfig {
//!     order: 12,
//!     step: StepMode::Fixed(0.1),
//!     continuation: ContinuationMethod::Stepwise,
//!     grid: Grid::Count(2),
//!     ..SolverConfig::default()
//! };
//! let traj = solve_ivp(&problem, &cfg).unwrap();
//! assert!((traj.values.last().unwrap()[0] - 1f64.exp()).abs() < 1e-12);
//! ```
//!
//! # Runnable examples
//!
//! One example per capability, under `examples/`:
//!
//! - **`raw_series`** — expand the raw Taylor coefficients of a problem and
//!   compare with the closed-form coefficient law.
//! - **`stepwise_ivp`** — fixed-step continuous analytic continuation.
//! - **`adaptive_singularity`** — adaptive steps shrinking towards a pole.
//! - **`pade_continuation`** — evaluate far outside the series' radius
//!   through a rational approximant.
//! - **`dtm_images`** — weighted/kernelized coefficient images and the
//!   inverse transform.
//! - **`dtm_pade_routes`** — the coupled image/Padé system against the
//!   direct Padé construction.
//! - **`kernel_pade`** — power-law kernel evaluation at large `t`.
//! - **`bvp_shooting`** — boundary value problem by shooting.
//!
//! ```text
//! cargo run -p taylor-dtm --example stepwise_ivp
//! ```
//!
//! A thin CLI over the same library ships as the `taylor-dtm` binary with
//! `solve`, `series` and `pade` subcommands; see the README.

// Recurrence code indexes several coefficient vectors at shifted offsets;
// spelled-out loops keep that readable.
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod continuation;
pub mod dtm;
pub mod error;
pub mod expr;
pub mod parse;
pub mod plan;
pub mod problem;
pub mod series;
pub mod solver;

pub use continuation::{
    dtm_pade_coupled, estimate_radius, kernel_pade_evaluate, pade_from_series, restart_sum,
    stepwise_solve, PadeApproximant, StepRecord,
};
pub use dtm::{rescale_equivalence_check, DtmImage, Kernel, Weighting};
pub use error::{Error, Result};
pub use expr::Expr;
pub use parse::parse_problem;
pub use plan::{advance_order, compile_plan, expand_series, RecurrencePlan, SeriesState};
pub use problem::{Boundary, Condition, Equation, OdeProblem};
pub use series::TaylorSeries;
pub use solver::{
    solve_bvp_shooting, solve_ivp, ContinuationMethod, Grid, SolverConfig, StepMode, Trajectory,
};
