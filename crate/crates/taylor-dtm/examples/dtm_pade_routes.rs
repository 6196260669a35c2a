//! Two routes to one approximant: the direct Padé construction (solve the
//! denominator block, then form the numerator) and the coupled balanced
//! system that determines the denominator and the image simultaneously.
//! The results coincide to rounding.
//!
//! ```text
//! cargo run -p taylor-dtm --example dtm_pade_routes
//! ```

use taylor_dtm::{dtm_pade_coupled, pade_from_series, TaylorSeries};

fn main() {
    // tan(t) by long division of sine by cosine.
    let t = TaylorSeries::time_variable(0.0, 8);
    let (s, c) = t.sin_cos();
    let tan = s.div(&c).unwrap();

    let direct = pade_from_series(&tan, 3, 4).unwrap();
    let (coupled, image) = dtm_pade_coupled(&tan, 3, 4).unwrap();

    println!("tan(t), [3/4]:");
    println!("direct  P = {:?}", direct.numerator());
    println!("coupled P = {:?}", coupled.numerator());
    println!("direct  Q = {:?}", direct.denominator());
    println!("coupled Q = {:?}", coupled.denominator());
    println!("image (numerator of the balanced system) = {image:?}");

    let dev = direct
        .numerator()
        .iter()
        .zip(coupled.numerator())
        .chain(direct.denominator().iter().zip(coupled.denominator()))
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("max coefficient deviation between routes: {dev:.3e}");

    println!("\n{:>5} {:>22} {:>22}", "t", "[3/4](t)", "tan(t)");
    for t in [0.5, 1.0, 1.3, 1.5] {
        println!("{t:>5} {:>22} {:>22}", direct.eval(t).unwrap(), t.tan());
    }
}
