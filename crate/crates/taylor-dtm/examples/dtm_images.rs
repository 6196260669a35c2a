//! Weighted and kernelized coefficient images and their inverse.
//!
//! With the factorial weighting and unit kernel the image IS the
//! coefficient vector; with the step weighting the image pre-scales the
//! coefficients by h^k (the image sum is then the next window's restart
//! value); a power-law kernel folds algebraic growth into the image.
//!
//! ```text
//! cargo run -p taylor-dtm --example dtm_images
//! ```

use taylor_dtm::{restart_sum, DtmImage, Kernel, TaylorSeries, Weighting};

fn main() {
    // exp(t): X_k = 1/k!.
    let mut c = vec![1.0; 9];
    for k in 1..=8 {
        c[k] = c[k - 1] / k as f64;
    }
    let x = TaylorSeries::new(0.0, c).unwrap();

    let plain = DtmImage::transform(&x, Weighting::Factorial, Kernel::Unit).unwrap();
    let scaled = DtmImage::transform(&x, Weighting::StepScaled(0.5), Kernel::Unit).unwrap();
    println!(
        "{:>3} {:>12} {:>12} {:>12}",
        "k", "X_k", "image(1/k!)", "image(h^k/k!)"
    );
    for k in 0..=8 {
        println!(
            "{k:>3} {:>12.6} {:>12.6} {:>12.6}",
            x.coeff(k),
            plain.image()[k],
            scaled.image()[k]
        );
    }

    println!(
        "\nimage sum (restart at h = 0.5): {}",
        scaled.restart_value()
    );
    println!("ascending power sum:            {}", restart_sum(&x, 0.5));
    println!("series value at 0.5:            {}", x.eval(0.5));

    // Kernel (1 + t)^(-1) against the series of 1 + t: the image collapses.
    let one_plus_t = TaylorSeries::new(0.0, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
    let kernel = Kernel::PowerLaw { nu: 1.0, r: 1.0 };
    let img = DtmImage::transform(&one_plus_t, Weighting::Factorial, kernel).unwrap();
    println!(
        "\nkernelized image of 1 + t under (1+t)^-1: {:?}",
        img.image()
    );
    let back = img.invert().unwrap();
    println!("inverse transform recovers: {:?}", back.coeffs());
}
