//! Crate-wide error type.

use std::fmt;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by parsing, series arithmetic and the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A series was constructed from NaN/infinite coefficients, or with no
    /// coefficients at all.
    NonFiniteInput,
    /// Two series disagree on expansion point or truncation order.
    MismatchedBase,
    /// Division (or the power recurrence) hit a zero leading coefficient.
    ZeroLeadingCoefficient,
    /// Fractional power of a series with a negative leading coefficient.
    NegativeBaseFractionalPower,
    /// Argument outside the domain of an elementary function.
    Domain(&'static str),
    /// Asked for more derivatives than the series order holds.
    OrderUnderflow { requested: usize, order: usize },
    /// Problem text does not conform to the grammar.
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    /// An expression or condition references a variable with no equation.
    UndeclaredVariable(String),
    /// A problem carries no usable initial data.
    MissingInitialCondition(String),
    /// Duplicate equations, duplicate conditions, or a name used both as a
    /// constant and as a state variable.
    OverdeterminedSystem(String),
    /// Number of initial/boundary conditions does not match the total
    /// system order.
    ConditionCountMismatch { required: usize, given: usize },
    /// An equation's left side is not a pure derivative of a single variable.
    ImplicitEquation(String),
    /// A coefficient overflowed or became NaN while advancing the recurrence.
    NonFiniteCoefficient { order: usize },
    /// Adaptive step size fell below the floor; a real singularity likely
    /// lies on the integration path.
    StepUnderflow { t: f64, h: f64 },
    /// The stepper exceeded its step budget without reaching the end time.
    TooManySteps { t: f64 },
    /// The Padé linear system is singular beyond the pivot tolerance.
    DegeneratePade { n1: usize, n2: usize },
    /// The Padé denominator vanishes at the requested evaluation point.
    PoleAtEvaluationPoint { t: f64 },
    /// The kernel is not defined at the requested base or evaluation point.
    KernelDomain,
    /// Shooting could not locate a sign change or a convergent secant root.
    NoRootInBracket,
    /// Root iteration exceeded its budget.
    MaxIterationsExceeded(usize),
    /// A solver configuration invariant is violated.
    InvalidConfig(String),
    /// File I/O failure (CLI layer).
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonFiniteInput => {
                write!(f, "series coefficients must be finite and non-empty")
            }
            Error::MismatchedBase => {
                write!(f, "series disagree on expansion point or order")
            }
            Error::ZeroLeadingCoefficient => {
                write!(
                    f,
                    "leading coefficient is zero (or below the divisor floor)"
                )
            }
            Error::NegativeBaseFractionalPower => {
                write!(
                    f,
                    "fractional power of a series with negative leading coefficient"
                )
            }
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::OrderUnderflow { requested, order } => {
                write!(
                    f,
                    "cannot take {requested} derivative(s) of an order-{order} series"
                )
            }
            Error::Syntax { line, col, message } => {
                write!(f, "syntax error at line {line}, column {col}: {message}")
            }
            Error::UndeclaredVariable(name) => {
                write!(f, "undeclared variable '{name}'")
            }
            Error::MissingInitialCondition(what) => {
                write!(f, "missing initial condition: {what}")
            }
            Error::OverdeterminedSystem(what) => {
                write!(f, "overdetermined system: {what}")
            }
            Error::ConditionCountMismatch { required, given } => {
                write!(
                    f,
                    "system of total order {required} needs {required} conditions, got {given}"
                )
            }
            Error::ImplicitEquation(var) => {
                write!(f, "equation for '{var}' is not an explicit derivative")
            }
            Error::NonFiniteCoefficient { order } => {
                write!(
                    f,
                    "non-finite coefficient at order {order} (overflow or invalid operation)"
                )
            }
            Error::StepUnderflow { t, h } => {
                write!(
                    f,
                    "step size underflow at t = {t} (h = {h}); singularity on the path?"
                )
            }
            Error::TooManySteps { t } => {
                write!(f, "step budget exhausted at t = {t}")
            }
            Error::DegeneratePade { n1, n2 } => {
                write!(
                    f,
                    "degenerate Pade system for [{n1}/{n2}]; retry with [{n1}/{}]",
                    n2.saturating_sub(1)
                )
            }
            Error::PoleAtEvaluationPoint { t } => {
                write!(f, "Pade denominator vanishes near t = {t}")
            }
            Error::KernelDomain => {
                write!(
                    f,
                    "kernel (1 + t/r)^(-nu) undefined: 1 + t/r must be positive"
                )
            }
            Error::NoRootInBracket => {
                write!(f, "no sign change in bracket and secant iteration diverged")
            }
            Error::MaxIterationsExceeded(n) => {
                write!(f, "root iteration did not converge within {n} iterations")
            }
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            Error::Io(what) => write!(f, "{what}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
