//! Truncated power-series arithmetic about a fixed expansion point.
//!
//! A [`TaylorSeries`] stores the coefficients `X_0..X_N` of
//! `x(t) = sum_k X_k (t - t_i)^k` truncated at order `N`. Operations keep
//! the expansion point and order fixed and realize the classical
//! coefficient recurrences: the Cauchy product, recursive division, the
//! Euler power recurrence, and the Leibnitz-rule recurrences for the
//! elementary functions. Values are immutable; every operation returns a
//! fresh series.

use crate::error::{Error, Result};

/// Hard guard against exactly-zero leading divisors. Conditioning of
/// near-zero (but nonzero) leading coefficients is the caller's concern.
pub const DIVISOR_FLOOR: f64 = 1e-300;

/// A truncated Taylor series: expansion point `t_i`, order `N`, and the
/// dense coefficient vector `X_0..X_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    base: f64,
    coeffs: Vec<f64>,
}

impl TaylorSeries {
    /// Builds a series from its coefficient vector; the order is
    /// `coeffs.len() - 1`. Rejects empty vectors and non-finite entries.
    pub fn new(base: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !base.is_finite() || coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(TaylorSeries { base, coeffs })
    }

    /// The constant series `(value, 0, ..., 0)`.
    pub fn constant(base: f64, value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        TaylorSeries { base, coeffs }
    }

    /// The zero series of the given order.
    pub fn zero(base: f64, order: usize) -> Self {
        TaylorSeries {
            base,
            coeffs: vec![0.0; order + 1],
        }
    }

    /// The series of the independent variable itself: `(t_i, 1, 0, ..., 0)`.
    pub fn time_variable(base: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = base;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        TaylorSeries { base, coeffs }
    }

    /// Expansion point `t_i`.
    pub fn base(&self) -> f64 {
        self.base
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// All coefficients `X_0..X_N`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient `X_k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    fn same_frame(&self, other: &Self) -> Result<()> {
        if self.base != other.base || self.coeffs.len() != other.coeffs.len() {
            return Err(Error::MismatchedBase);
        }
        Ok(())
    }

    fn raw(base: f64, coeffs: Vec<f64>) -> Self {
        TaylorSeries { base, coeffs }
    }

    /// Componentwise sum. Requires matching base and order.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self::raw(self.base, coeffs))
    }

    /// Componentwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::raw(self.base, coeffs))
    }

    /// Componentwise negation.
    pub fn neg(&self) -> Self {
        Self::raw(self.base, self.coeffs.iter().map(|c| -c).collect())
    }

    /// Scalar multiple.
    pub fn scale(&self, s: f64) -> Self {
        Self::raw(self.base, self.coeffs.iter().map(|c| s * c).collect())
    }

    /// Cauchy product truncated at the common order:
    /// `Z_k = sum_{i=0}^{k} X_i Y_{k-i}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let n = self.coeffs.len();
        let mut coeffs = vec![0.0; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut sum = 0.0;
            for i in 0..=k {
                sum += self.coeffs[i] * other.coeffs[k - i];
            }
            *c = sum;
        }
        Ok(Self::raw(self.base, coeffs))
    }

    /// Recursive division: `Z_k = (X_k - sum_{i=0}^{k-1} Z_i Y_{k-i}) / Y_0`.
    /// `mul(div(x, y), y)` reproduces `x` through the truncation order.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_frame(other)?;
        let y0 = other.coeffs[0];
        if y0.abs() <= DIVISOR_FLOOR {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let n = self.coeffs.len();
        let mut z = vec![0.0; n];
        for k in 0..n {
            let mut sum = self.coeffs[k];
            for i in 0..k {
                sum -= z[i] * other.coeffs[k - i];
            }
            z[k] = sum / y0;
        }
        Ok(Self::raw(self.base, z))
    }

    /// Real power via the Euler recurrence
    /// `Z_k = sum_{i=1}^{k} ((beta+1) i / k - 1) (X_i / X_0) Z_{k-i}`,
    /// `Z_0 = X_0^beta`. A nonnegative integer exponent with `X_0 = 0`
    /// falls back to repeated multiplication (the recurrence divides by
    /// `X_0` and is undefined there).
    pub fn pow(&self, beta: f64) -> Result<Self> {
        let n = self.coeffs.len();
        if beta == 0.0 {
            return Ok(Self::constant(self.base, 1.0, n - 1));
        }
        if beta == 1.0 {
            return Ok(self.clone());
        }
        let x0 = self.coeffs[0];
        let is_integer = beta.fract() == 0.0 && beta.abs() < 1e15;
        if x0.abs() <= DIVISOR_FLOOR {
            if is_integer && beta > 0.0 {
                let m = beta as u64;
                let mut acc = self.clone();
                for _ in 1..m {
                    acc = acc.mul(self)?;
                }
                return Ok(acc);
            }
            return Err(Error::ZeroLeadingCoefficient);
        }
        if x0 < 0.0 && !is_integer {
            return Err(Error::NegativeBaseFractionalPower);
        }
        let mut z = vec![0.0; n];
        z[0] = if is_integer && beta.abs() <= i32::MAX as f64 {
            x0.powi(beta as i32)
        } else {
            x0.powf(beta)
        };
        for k in 1..n {
            let mut sum = 0.0;
            for i in 1..=k {
                let w = (beta + 1.0) * i as f64 / k as f64 - 1.0;
                sum += w * (self.coeffs[i] / x0) * z[k - i];
            }
            z[k] = sum;
        }
        Ok(Self::raw(self.base, z))
    }

    /// Exponential by the Leibnitz-rule recurrence:
    /// `E_0 = exp(X_0)`, `E_k = (1/k) sum_{j=1}^{k} j X_j E_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.coeffs.len();
        let mut e = vec![0.0; n];
        e[0] = self.coeffs[0].exp();
        for k in 1..n {
            let mut sum = 0.0;
            for j in 1..=k {
                sum += j as f64 * self.coeffs[j] * e[k - j];
            }
            e[k] = sum / k as f64;
        }
        Self::raw(self.base, e)
    }

    /// Natural logarithm:
    /// `L_0 = log(X_0)`,
    /// `L_k = (X_k - (1/k) sum_{j=1}^{k-1} j L_j X_{k-j}) / X_0`.
    /// Requires `X_0 > 0`.
    pub fn log(&self) -> Result<Self> {
        let x0 = self.coeffs[0];
        if x0 <= 0.0 {
            return Err(Error::Domain("log of a series with X_0 <= 0"));
        }
        let n = self.coeffs.len();
        let mut l = vec![0.0; n];
        l[0] = x0.ln();
        for k in 1..n {
            let mut sum = 0.0;
            for j in 1..k {
                sum += j as f64 * l[j] * self.coeffs[k - j];
            }
            l[k] = (self.coeffs[k] - sum / k as f64) / x0;
        }
        Ok(Self::raw(self.base, l))
    }

    /// Sine and cosine as a coupled pair (the recurrences reference each
    /// other):
    /// `S_k = (1/k) sum_{j=1}^{k} j X_j C_{k-j}`,
    /// `C_k = -(1/k) sum_{j=1}^{k} j X_j S_{k-j}`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.coeffs.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        s[0] = self.coeffs[0].sin();
        c[0] = self.coeffs[0].cos();
        for k in 1..n {
            let mut sum_s = 0.0;
            let mut sum_c = 0.0;
            for j in 1..=k {
                let jf = j as f64;
                sum_s += jf * self.coeffs[j] * c[k - j];
                sum_c += jf * self.coeffs[j] * s[k - j];
            }
            s[k] = sum_s / k as f64;
            c[k] = -sum_c / k as f64;
        }
        (Self::raw(self.base, s), Self::raw(self.base, c))
    }

    /// Sine half of the coupled pair.
    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    /// Cosine half of the coupled pair.
    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    /// `n`-th derivative: shifts coefficients and applies the falling
    /// factorial, `Z_k = (k+n)!/k! X_{k+n}`; the order drops by `n`.
    pub fn derivative(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Ok(self.clone());
        }
        let order = self.order();
        if n > order {
            return Err(Error::OrderUnderflow {
                requested: n,
                order,
            });
        }
        let mut coeffs = vec![0.0; order - n + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut fall = 1.0;
            for j in 1..=n {
                fall *= (k + j) as f64;
            }
            *c = fall * self.coeffs[k + n];
        }
        Ok(Self::raw(self.base, coeffs))
    }

    /// Horner evaluation of the truncated sum at `t`. At `t = t_i` this
    /// returns exactly `X_0`.
    pub fn eval(&self, t: f64) -> f64 {
        let dt = t - self.base;
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * dt + c;
        }
        acc
    }
}
