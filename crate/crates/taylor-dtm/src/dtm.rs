//! Weighted and kernelized coefficient images with their inverse
//! transform.
//!
//! The image of a series with coefficients `X_k` is
//! `X'_k = M_k d^k(q(t) x(t))/dt^k |_{t_i}`, with weighting factor `M_k`
//! and kernel `q(t)` chosen a priori. With `M_k = 1/k!` and `q = 1` the
//! image coincides with the Taylor coefficients; with `M_k = h^k/k!` the
//! image pre-scales by the step length (equivalently, rescales time
//! `t -> h t`), which also tames under/overflow in long coefficient runs.

use crate::error::{Error, Result};
use crate::series::TaylorSeries;

/// Per-order weighting factor `M_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Weighting {
    /// `M_k = 1/k!`; the image equals the Taylor coefficients.
    Factorial,
    /// `M_k = h^k/k!` with `h > 0`; the image is `h^k X_k`.
    StepScaled(f64),
}

impl Weighting {
    /// The combined factor `M_k * k!` applied to coefficient `k`:
    /// `1` for `Factorial`, `h^k` for `StepScaled`. Powers accumulate by
    /// running product so image sums reproduce ascending power sums
    /// exactly.
    fn scales(&self, order: usize) -> Result<Vec<f64>> {
        match *self {
            Weighting::Factorial => Ok(vec![1.0; order + 1]),
            Weighting::StepScaled(h) => {
                if !h.is_finite() || h <= 0.0 {
                    return Err(Error::InvalidConfig(
                        "step-scaled weighting needs h > 0".to_string(),
                    ));
                }
                let mut scales = Vec::with_capacity(order + 1);
                let mut pw = 1.0;
                for _ in 0..=order {
                    scales.push(pw);
                    pw *= h;
                }
                Ok(scales)
            }
        }
    }
}

/// Transform kernel `q(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    /// `q(t) = 1`.
    Unit,
    /// `q(t) = (1 + t/r)^(-nu)` with `r > 0`; flattens algebraic `t^nu`
    /// growth at infinity into a constant.
    PowerLaw { nu: f64, r: f64 },
}

impl Kernel {
    /// Series of `q` about `base`, truncated at `order`.
    pub fn series(&self, base: f64, order: usize) -> Result<TaylorSeries> {
        match *self {
            Kernel::Unit => Ok(TaylorSeries::constant(base, 1.0, order)),
            Kernel::PowerLaw { nu, r } => {
                if !r.is_finite() || r <= 0.0 {
                    return Err(Error::InvalidConfig(
                        "power-law kernel needs r > 0".to_string(),
                    ));
                }
                let u0 = 1.0 + base / r;
                if u0 <= 0.0 {
                    return Err(Error::KernelDomain);
                }
                let mut c = vec![0.0; order + 1];
                c[0] = u0;
                if order >= 1 {
                    c[1] = 1.0 / r;
                }
                let u = TaylorSeries::new(base, c)?;
                u.pow(-nu).map_err(|_| Error::KernelDomain)
            }
        }
    }

    /// Point value `q(t)`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match *self {
            Kernel::Unit => Ok(1.0),
            Kernel::PowerLaw { nu, r } => {
                let u = 1.0 + t / r;
                if u <= 0.0 {
                    return Err(Error::KernelDomain);
                }
                Ok(u.powf(-nu))
            }
        }
    }
}

/// Weighted/kernelized coefficient image `X'_0..X'_N` together with the
/// scheme that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct DtmImage {
    base: f64,
    image: Vec<f64>,
    weighting: Weighting,
    kernel: Kernel,
}

impl DtmImage {
    /// Forward transform: expand `q` at the same base and order, multiply
    /// it into `x`, then weight each coefficient by `M_k k!`. With
    /// `Factorial`/`Unit` the image equals `x`'s coefficients exactly.
    pub fn transform(x: &TaylorSeries, weighting: Weighting, kernel: Kernel) -> Result<DtmImage> {
        let q = kernel.series(x.base(), x.order())?;
        let qx = q.mul(x)?;
        let scales = weighting.scales(x.order())?;
        let image: Vec<f64> = qx
            .coeffs()
            .iter()
            .zip(&scales)
            .map(|(c, s)| s * c)
            .collect();
        if image.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(DtmImage {
            base: x.base(),
            image,
            weighting,
            kernel,
        })
    }

    /// Inverse transform: divide out the weighting, then the kernel
    /// series. `invert(transform(x)) == x` through the truncation order.
    pub fn invert(&self) -> Result<TaylorSeries> {
        let scales = self.weighting.scales(self.order())?;
        let c: Vec<f64> = self.image.iter().zip(&scales).map(|(v, s)| v / s).collect();
        let qx = TaylorSeries::new(self.base, c)?;
        let q = self.kernel.series(self.base, self.order())?;
        qx.div(&q)
    }

    /// Plain ascending sum of the image entries. With step weighting and
    /// unit kernel this is the restart value for the next window.
    pub fn restart_value(&self) -> f64 {
        let mut sum = 0.0;
        for v in &self.image {
            sum += v;
        }
        sum
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    pub fn order(&self) -> usize {
        self.image.len() - 1
    }

    pub fn image(&self) -> &[f64] {
        &self.image
    }

    pub fn weighting(&self) -> Weighting {
        self.weighting
    }

    pub fn kernel(&self) -> Kernel {
        self.kernel
    }
}

/// Checks that the step-scaled unit-kernel image equals the coefficients
/// of the time-rescaled series `x(t_i + h s)`, i.e. `h^k X_k`. Returns the
/// pass flag (max deviation within `1e-12` of the largest coefficient) and
/// the deviation itself, relative to the largest rescaled coefficient.
pub fn rescale_equivalence_check(x: &TaylorSeries, h: f64) -> (bool, f64) {
    let img = match DtmImage::transform(x, Weighting::StepScaled(h), Kernel::Unit) {
        Ok(img) => img,
        Err(_) => return (false, f64::INFINITY),
    };
    let rescaled: Vec<f64> = (0..=x.order())
        .map(|k| h.powi(k as i32) * x.coeff(k))
        .collect();
    let scale = rescaled
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
        .max(1e-30);
    let mut dev = 0.0f64;
    for (a, b) in img.image().iter().zip(&rescaled) {
        dev = dev.max((a - b).abs());
    }
    let rel = dev / scale;
    (rel <= 1e-12, rel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn exp_series(order: usize) -> TaylorSeries {
        let mut c = vec![1.0; order + 1];
        for k in 1..=order {
            c[k] = c[k - 1] / k as f64;
        }
        TaylorSeries::new(0.0, c).unwrap()
    }

    #[test]
    fn factorial_unit_image_is_the_coefficients() {
        let x = TaylorSeries::new(0.0, vec![0.3, -1.25, 0.0, 7.5, -0.001]).unwrap();
        let img = DtmImage::transform(&x, Weighting::Factorial, Kernel::Unit).unwrap();
        // Exact equality, not approximate: the schemes coincide.
        assert_eq!(img.image(), x.coeffs());
    }

    #[test]
    fn step_scaled_image_is_h_pow_k_times_coefficients() {
        let x = exp_series(8);
        let h = 0.5;
        let img = DtmImage::transform(&x, Weighting::StepScaled(h), Kernel::Unit).unwrap();
        for k in 0..=8 {
            assert_eq!(img.image()[k], h.powi(k as i32) * x.coeff(k));
        }
    }

    #[test]
    fn power_law_kernel_cancels_matching_series() {
        // q = (1 + t)^(-1) against x = 1 + t gives image (1, 0, ...).
        let x = TaylorSeries::new(0.0, vec![1.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        let k = Kernel::PowerLaw { nu: 1.0, r: 1.0 };
        let img = DtmImage::transform(&x, Weighting::Factorial, k).unwrap();
        assert_relative_eq!(img.image()[0], 1.0, epsilon = 1e-15);
        for j in 1..=4 {
            assert_relative_eq!(img.image()[j], 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn factorial_unit_round_trip_is_exact() {
        let x = TaylorSeries::new(1.5, vec![0.2, -0.8, 0.5, 0.1]).unwrap();
        let img = DtmImage::transform(&x, Weighting::Factorial, Kernel::Unit).unwrap();
        assert_eq!(img.invert().unwrap(), x);
    }

    #[test]
    fn step_scaled_round_trip() {
        let x = TaylorSeries::new(0.0, vec![0.9, -0.4, 0.3, 0.05, -0.7, 0.21]).unwrap();
        let img = DtmImage::transform(&x, Weighting::StepScaled(0.1), Kernel::Unit).unwrap();
        let back = img.invert().unwrap();
        for k in 0..=5 {
            assert_relative_eq!(back.coeff(k), x.coeff(k), max_relative = 1e-14);
        }
    }

    #[test]
    fn power_law_round_trip() {
        let x = TaylorSeries::new(
            0.0,
            vec![
                1.1, -0.3, 0.22, 0.05, -0.4, 0.17, 0.0, 0.31, -0.08, 0.02, 0.6,
            ],
        )
        .unwrap();
        let k = Kernel::PowerLaw { nu: 0.5, r: 2.0 };
        let img = DtmImage::transform(&x, Weighting::StepScaled(0.25), k).unwrap();
        let back = img.invert().unwrap();
        for j in 0..=10 {
            assert_relative_eq!(
                back.coeff(j),
                x.coeff(j),
                max_relative = 1e-12,
                epsilon = 1e-13
            );
        }
    }

    #[test]
    fn kernel_domain_is_guarded() {
        let x = TaylorSeries::new(-3.0, vec![1.0, 1.0]).unwrap();
        let k = Kernel::PowerLaw { nu: 0.5, r: 1.0 };
        assert_eq!(
            DtmImage::transform(&x, Weighting::Factorial, k),
            Err(Error::KernelDomain)
        );
        assert_eq!(k.eval(-2.0), Err(Error::KernelDomain));
    }

    #[test]
    fn rescale_equivalence_trivial_and_scaled() {
        let x = exp_series(10);
        let (ok, dev) = rescale_equivalence_check(&x, 1.0);
        assert!(ok);
        assert_eq!(dev, 0.0);

        let (ok, dev) = rescale_equivalence_check(&x, 0.5);
        assert!(ok);
        assert!(dev <= 1e-16);
        // Image entries are (0.5)^k / k!.
        let img = DtmImage::transform(&x, Weighting::StepScaled(0.5), Kernel::Unit).unwrap();
        assert_relative_eq!(img.image()[1], 0.5, epsilon = 1e-16);
        assert_relative_eq!(img.image()[2], 0.125, epsilon = 1e-16);
    }

    #[test]
    fn rescale_equivalence_small_step() {
        let x = TaylorSeries::new(
            0.0,
            vec![
                0.4, -1.0, 0.8, 0.3, -0.2, 0.9, -0.5, 0.1, 0.05, -0.7, 0.6, 0.33, -0.12,
            ],
        )
        .unwrap();
        let (ok, dev) = rescale_equivalence_check(&x, 0.01);
        assert!(ok);
        assert!(dev <= 1e-15);
    }

    #[test]
    fn image_is_linear_in_the_series() {
        let a = TaylorSeries::new(0.0, vec![0.5, 1.0, -0.25, 0.125]).unwrap();
        let b = TaylorSeries::new(0.0, vec![-1.0, 0.4, 0.6, -0.3]).unwrap();
        let k = Kernel::PowerLaw { nu: 1.5, r: 3.0 };
        let w = Weighting::StepScaled(0.2);
        let lhs = DtmImage::transform(&a.add(&b).unwrap(), w, k).unwrap();
        let ia = DtmImage::transform(&a, w, k).unwrap();
        let ib = DtmImage::transform(&b, w, k).unwrap();
        for j in 0..=3 {
            assert_relative_eq!(
                lhs.image()[j],
                ia.image()[j] + ib.image()[j],
                epsilon = 1e-14
            );
        }
    }
}
