//! Analytic continuation of local series: stepwise restart (the Taylor
//! algorithm), convergence-radius estimation, Padé approximants built
//! directly or through the coupled image system, and kernel-weighted Padé
//! evaluation for power-law behavior at infinity.

use crate::dtm::{DtmImage, Kernel, Weighting};
use crate::error::{Error, Result};
use crate::plan::{expand_series, RecurrencePlan};
use crate::problem::OdeProblem;
use crate::series::TaylorSeries;
use crate::solver::{SolverConfig, StepMode};

/// Safety factor applied to the estimated convergence radius when picking
/// an adaptive step.
const SAFETY: f64 = 0.5;

/// Pivot threshold (scaled by the largest matrix entry) below which a Padé
/// linear system is declared degenerate.
const PIVOT_TOL: f64 = 1e-13;

/// |Q(t)| threshold for reporting a pole at the evaluation point.
const POLE_TOL: f64 = 1e-12;

/// Ratio-test estimate of the convergence radius (distance to the nearest
/// singularity in the complex plane).
///
/// Ratios are taken between consecutive *nonzero* coefficients with a gap
/// correction, `|X_j / X_m|^(1/(m-j))`, so series with interleaved zeros
/// (odd/even functions) still produce estimates. Only ratios whose upper
/// index lies in the top half of orders enter; the median is returned, or
/// `+inf` when the tail carries no usable ratio (polynomials, trailing
/// underflow to zero).
pub fn estimate_radius(x: &TaylorSeries) -> f64 {
    let n = x.order();
    let nonzero: Vec<usize> = (0..=n).filter(|&k| x.coeff(k) != 0.0).collect();
    let mut ratios = Vec::new();
    for w in nonzero.windows(2) {
        let (j, m) = (w[0], w[1]);
        if 2 * m > n {
            let gap = (m - j) as f64;
            let r = (x.coeff(j) / x.coeff(m)).abs().powf(1.0 / gap);
            if r.is_finite() && r > 0.0 {
                ratios.push(r);
            }
        }
    }
    if ratios.is_empty() {
        return f64::INFINITY;
    }
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = ratios.len() / 2;
    if ratios.len() % 2 == 1 {
        ratios[mid]
    } else {
        0.5 * (ratios[mid - 1] + ratios[mid])
    }
}

/// Ascending-order evaluation of the restart sum `sum_k h^k X_k` (the
/// truncated series at `t_i + h`, summed lowest order first). Pairs
/// exactly with [`DtmImage::restart_value`] under step weighting.
pub fn restart_sum(x: &TaylorSeries, h: f64) -> f64 {
    let mut sum = 0.0;
    let mut pw = 1.0;
    for k in 0..=x.order() {
        sum += pw * x.coeff(k);
        pw *= h;
    }
    sum
}

/// One window of the stepwise procedure: the local series at `t_start`,
/// the step taken, and the restart values seeding the next window.
#[derive(Debug, Clone)]
pub struct StepRecord {
    pub index: usize,
    /// Window start `t_i`.
    pub t_start: f64,
    /// Window end `t_{i+1}` (exact; the last window ends exactly at
    /// `t_0 + H`).
    pub t_next: f64,
    /// Order-N series per variable, based at `t_start`.
    pub series: Vec<TaylorSeries>,
    /// Per-variable restart values, the series evaluated at `t_next`.
    pub alpha_next: Vec<f64>,
    /// Last-retained-term error proxy `max_v |X_N| h^N`.
    pub err_est: f64,
}

impl StepRecord {
    /// Step length `h_i = t_{i+1} - t_i`.
    pub fn h(&self) -> f64 {
        self.t_next - self.t_start
    }
}

/// Piecewise continuation over `[t_0, t_0 + H]`: expands an order-N series
/// at each reference time and restarts from its value at the next one.
/// The step is either fixed (last step shortened to land exactly on
/// `t_0 + H`) or adaptive from the radius estimate and the last-term
/// budget `|X_N| h^N <= tol_local`.
pub fn stepwise_solve(
    plan: &RecurrencePlan,
    p: &OdeProblem,
    cfg: &SolverConfig,
) -> Result<Vec<StepRecord>> {
    cfg.validate()?;
    let alpha0 = p.known_initials()?;
    let t0 = p.t0();
    let span = p
        .range()
        .ok_or_else(|| Error::InvalidConfig("stepwise continuation needs a finite range".into()))?;
    if !span.is_finite() || span <= 0.0 {
        return Err(Error::InvalidConfig(
            "range must be positive and finite".into(),
        ));
    }
    let t_end = t0 + span;
    let n = cfg.order;
    let h_min = cfg.h_min_frac * span;

    let mut records: Vec<StepRecord> = Vec::new();
    let mut alpha = alpha0;
    let mut t = t0;
    while t < t_end {
        if records.len() >= cfg.max_steps {
            return Err(Error::TooManySteps { t });
        }
        let series = expand_series(plan, &alpha, t, n)?;
        let remaining = t_end - t;
        let tail = series
            .iter()
            .map(|s| s.coeff(n).abs())
            .fold(0.0f64, f64::max);
        let h = match cfg.step {
            StepMode::Fixed(h) => h.min(remaining),
            StepMode::Adaptive => {
                let rho = series
                    .iter()
                    .map(estimate_radius)
                    .fold(f64::INFINITY, f64::min);
                let mut h = SAFETY * rho;
                if !h.is_finite() {
                    h = remaining;
                }
                // Last-term budget |X_k| h^k <= tol_local; the
                // next-to-last order participates too, otherwise odd/even
                // solutions (every other coefficient zero) go unchecked.
                for k in [n - 1, n] {
                    let mag = series
                        .iter()
                        .map(|s| s.coeff(k).abs())
                        .fold(0.0f64, f64::max);
                    if mag > 0.0 {
                        h = h.min((cfg.tol_local / mag).powf(1.0 / k as f64));
                    }
                }
                h = h.min(remaining);
                if h < h_min {
                    return Err(Error::StepUnderflow { t, h });
                }
                h
            }
        };
        // Absorb float dust so the final window ends exactly on t_end.
        let t_next = if remaining - h <= 1e-9 * h {
            t_end
        } else {
            t + h
        };
        let alpha_next: Vec<f64> = series.iter().map(|s| s.eval(t_next)).collect();
        if alpha_next.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFiniteCoefficient { order: n });
        }
        let err_est = tail * (t_next - t).powi(n as i32);
        records.push(StepRecord {
            index: records.len(),
            t_start: t,
            t_next,
            series,
            alpha_next: alpha_next.clone(),
            err_est,
        });
        alpha = alpha_next;
        t = t_next;
    }
    Ok(records)
}

/// Rational approximant `P/Q` in `(t - t_i)` with `Q_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeApproximant {
    base: f64,
    num: Vec<f64>,
    den: Vec<f64>,
}

impl PadeApproximant {
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Numerator coefficients `P_0..P_{N1}`.
    pub fn numerator(&self) -> &[f64] {
        &self.num
    }

    /// Denominator coefficients `Q_0..Q_{N2}`, `Q_0 = 1`.
    pub fn denominator(&self) -> &[f64] {
        &self.den
    }

    /// `(N1, N2)`.
    pub fn degrees(&self) -> (usize, usize) {
        (self.num.len() - 1, self.den.len() - 1)
    }

    /// Evaluates `P/Q` at `t`; reports a pole when `|Q|` falls below the
    /// pole tolerance or the quotient overflows.
    pub fn eval(&self, t: f64) -> Result<f64> {
        let dt = t - self.base;
        let p = horner(&self.num, dt);
        let q = horner(&self.den, dt);
        if q.abs() <= POLE_TOL {
            return Err(Error::PoleAtEvaluationPoint { t });
        }
        let v = p / q;
        if !v.is_finite() {
            return Err(Error::PoleAtEvaluationPoint { t });
        }
        Ok(v)
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for &ck in c.iter().rev() {
        acc = acc * x + ck;
    }
    acc
}

/// Gaussian elimination with partial pivoting; `None` when a pivot falls
/// below `PIVOT_TOL` times the largest entry of the original matrix.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = PIVOT_TOL * scale.max(f64::MIN_POSITIVE);
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col].abs()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if pivot <= tol {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c2 in col..n {
                    a[r][c2] -= f * a[col][c2];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for col in row + 1..n {
            s -= a[row][col] * x[col];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

fn coeff_or_zero(x: &TaylorSeries, j: isize) -> f64 {
    if j < 0 {
        0.0
    } else {
        x.coeff(j as usize)
    }
}

/// Direct `[N1/N2]` Padé construction: solves the N2-by-N2 system
/// `sum_{i=0}^{N2} Q_i X_{k-i} = 0` for `k = N1+1..N1+N2` (with
/// `X_{j<0} = 0` and `Q_0 = 1`), then forms
/// `P_k = sum_{i=0}^{min(k,N2)} Q_i X_{k-i}`.
pub fn pade_from_series(x: &TaylorSeries, n1: usize, n2: usize) -> Result<PadeApproximant> {
    if n1 + n2 > x.order() {
        return Err(Error::InvalidConfig(format!(
            "[{n1}/{n2}] needs a series of order >= {}, got {}",
            n1 + n2,
            x.order()
        )));
    }
    let mut a = vec![vec![0.0; n2]; n2];
    let mut b = vec![0.0; n2];
    for (row, k) in (n1 + 1..=n1 + n2).enumerate() {
        for i in 1..=n2 {
            a[row][i - 1] = coeff_or_zero(x, k as isize - i as isize);
        }
        b[row] = -x.coeff(k);
    }
    let q_tail = solve_dense(a, b).ok_or(Error::DegeneratePade { n1, n2 })?;
    let mut den = Vec::with_capacity(n2 + 1);
    den.push(1.0);
    den.extend(q_tail);
    let num = (0..=n1)
        .map(|k| {
            let mut s = 0.0;
            for i in 0..=k.min(n2) {
                s += den[i] * x.coeff(k - i);
            }
            s
        })
        .collect();
    Ok(PadeApproximant {
        base: x.base(),
        num,
        den,
    })
}

/// The coupled route to the same approximant: one balanced linear system
/// in the unknowns `(X'_0..X'_{N1}, Q_1..Q_{N2})`,
///
/// ```text
/// sum_{i=0}^{N2} Q_i X_{k-i} = 0      k = N1+1 .. N1+N2
/// X'_k = sum_{i=0}^{N2} Q_i X_{k-i}   k = 0 .. N1
/// ```
///
/// solved in one shot. Returns the approximant (numerator = image) and the
/// image vector; the result must agree with [`pade_from_series`].
pub fn dtm_pade_coupled(
    x: &TaylorSeries,
    n1: usize,
    n2: usize,
) -> Result<(PadeApproximant, Vec<f64>)> {
    if n1 + n2 > x.order() {
        return Err(Error::InvalidConfig(format!(
            "[{n1}/{n2}] needs a series of order >= {}, got {}",
            n1 + n2,
            x.order()
        )));
    }
    let dim = n1 + 1 + n2;
    let mut a = vec![vec![0.0; dim]; dim];
    let mut b = vec![0.0; dim];
    // Q block: the N2 balance equations beyond the numerator order.
    for (row, k) in (n1 + 1..=n1 + n2).enumerate() {
        for i in 1..=n2 {
            a[row][n1 + i] = coeff_or_zero(x, k as isize - i as isize);
        }
        b[row] = -x.coeff(k);
    }
    // Image block: X'_k - sum_{i>=1} Q_i X_{k-i} = X_k.
    for k in 0..=n1 {
        let row = n2 + k;
        a[row][k] = 1.0;
        for i in 1..=n2 {
            a[row][n1 + i] = -coeff_or_zero(x, k as isize - i as isize);
        }
        b[row] = x.coeff(k);
    }
    let u = solve_dense(a, b).ok_or(Error::DegeneratePade { n1, n2 })?;
    let image: Vec<f64> = u[..=n1].to_vec();
    let mut den = Vec::with_capacity(n2 + 1);
    den.push(1.0);
    den.extend_from_slice(&u[n1 + 1..]);
    Ok((
        PadeApproximant {
            base: x.base(),
            num: image.clone(),
            den,
        },
        image,
    ))
}

/// Kernel-weighted Padé evaluation at a point: form the image series of
/// `q(t) x(t)`, build its `[N1/N2]` approximant, evaluate at `t`, and undo
/// the kernel in closed form. With a well-chosen power-law kernel the
/// transformed function tends to a constant at infinity, which a diagonal
/// approximant reproduces.
pub fn kernel_pade_evaluate(
    x: &TaylorSeries,
    kernel: &Kernel,
    n1: usize,
    n2: usize,
    t: f64,
) -> Result<f64> {
    let img = DtmImage::transform(x, Weighting::Factorial, *kernel)?;
    let y = TaylorSeries::new(x.base(), img.image().to_vec())?;
    let pa = pade_from_series(&y, n1, n2)?;
    let yv = pa.eval(t)?;
    let v = yv / kernel.eval(t)?;
    if !v.is_finite() {
        return Err(Error::PoleAtEvaluationPoint { t });
    }
    Ok(v)
}
