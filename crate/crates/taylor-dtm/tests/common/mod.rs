//! Shared oracles for the integration suites. Everything here goes through
//! the public series operations only, so plan/tape results are checked
//! against an independent composition path.

#![allow(dead_code)]

use taylor_dtm::{Expr, OdeProblem, TaylorSeries};

/// exp(t) about 0: X_k = 1/k!, built by running division.
pub fn exp_series(order: usize) -> TaylorSeries {
    let mut c = vec![1.0; order + 1];
    for k in 1..=order {
        c[k] = c[k - 1] / k as f64;
    }
    TaylorSeries::new(0.0, c).unwrap()
}

/// tan(t) about 0 by long division of the sine and cosine series.
pub fn tan_series(order: usize) -> TaylorSeries {
    let t = TaylorSeries::time_variable(0.0, order);
    let (s, c) = t.sin_cos();
    s.div(&c).unwrap()
}

/// 1/(1+t) about 0: alternating ones.
pub fn geometric_series(order: usize) -> TaylorSeries {
    let c: Vec<f64> = (0..=order)
        .map(|k| if k % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    TaylorSeries::new(0.0, c).unwrap()
}

/// Evaluates an expression tree over series inputs using only public
/// series-core calls (the tape-independent composition route).
pub fn compose_series(
    e: &Expr,
    vars: &[&str],
    series: &[TaylorSeries],
    time: &TaylorSeries,
) -> TaylorSeries {
    match e {
        Expr::Const(c) => TaylorSeries::constant(time.base(), *c, time.order()),
        Expr::Time => time.clone(),
        Expr::Var(name) => {
            let j = vars.iter().position(|v| v == name).expect("declared var");
            series[j].clone()
        }
        Expr::Neg(a) => compose_series(a, vars, series, time).neg(),
        Expr::Add(a, b) => compose_series(a, vars, series, time)
            .add(&compose_series(b, vars, series, time))
            .unwrap(),
        Expr::Sub(a, b) => compose_series(a, vars, series, time)
            .sub(&compose_series(b, vars, series, time))
            .unwrap(),
        Expr::Mul(a, b) => compose_series(a, vars, series, time)
            .mul(&compose_series(b, vars, series, time))
            .unwrap(),
        Expr::Div(a, b) => compose_series(a, vars, series, time)
            .div(&compose_series(b, vars, series, time))
            .unwrap(),
        Expr::Pow(a, exponent) => {
            let base = compose_series(a, vars, series, time);
            let e = *exponent;
            if e.fract() == 0.0 && (0.0..=64.0).contains(&e) {
                let m = e as u64;
                if m == 0 {
                    return TaylorSeries::constant(time.base(), 1.0, time.order());
                }
                let mut acc = base.clone();
                for _ in 1..m {
                    acc = acc.mul(&base).unwrap();
                }
                acc
            } else {
                base.pow(e).unwrap()
            }
        }
        Expr::Exp(a) => compose_series(a, vars, series, time).exp(),
        Expr::Log(a) => compose_series(a, vars, series, time).log().unwrap(),
        Expr::Sin(a) => compose_series(a, vars, series, time).sin(),
        Expr::Cos(a) => compose_series(a, vars, series, time).cos(),
    }
}

/// Order-by-order ODE defect of a solved expansion: the coefficients of
/// `d/dt x_j - f_j(x, t)` through order N-1, worst case over variables,
/// relative to the largest solution coefficient.
pub fn relative_defect(p: &OdeProblem, series: &[TaylorSeries]) -> f64 {
    let vars = p.variables();
    let base = series[0].base();
    let order = series[0].order();
    let time = TaylorSeries::time_variable(base, order);
    let scale = series
        .iter()
        .flat_map(|s| s.coeffs().iter())
        .fold(0.0f64, |m, c| m.max(c.abs()))
        .max(1e-30);
    let mut worst = 0.0f64;
    for (j, eq) in p.equations().iter().enumerate() {
        let rhs = compose_series(&eq.rhs, &vars, series, &time);
        let dx = series[j].derivative(1).unwrap();
        for k in 0..order {
            worst = worst.max((dx.coeff(k) - rhs.coeff(k)).abs() / scale);
        }
    }
    worst
}

/// Largest coefficient magnitude.
pub fn max_abs(x: &TaylorSeries) -> f64 {
    x.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()))
}
