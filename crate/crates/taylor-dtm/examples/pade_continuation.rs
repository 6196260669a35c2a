//! Rational continuation far outside the series' own disk: x' = -x^2,
//! x(0) = 1 has the solution 1/(1+t), whose Taylor series converges only
//! for |t| < 1. A [0/1] Padé approximant of that series is exact for all
//! t, so sampling at t = 9 is no problem.
//!
//! ```text
//! cargo run -p taylor-dtm --example pade_continuation
//! ```

use taylor_dtm::{compile_plan, estimate_radius, expand_series, pade_from_series, parse_problem};

fn main() {
    let problem = parse_problem("x' = -x^2; x(0)=1")
        .unwrap()
        .normalize()
        .unwrap();
    let plan = compile_plan(&problem).unwrap();
    let x = &expand_series(&plan, &[1.0], 0.0, 10).unwrap()[0];

    println!("series coefficients: {:?}", &x.coeffs()[..6]);
    println!("estimated radius of convergence: {}", estimate_radius(x));

    let pa = pade_from_series(x, 0, 1).unwrap();
    println!(
        "[0/1] approximant: P = {:?}, Q = {:?}",
        pa.numerator(),
        pa.denominator()
    );
    println!(
        "\n{:>6} {:>22} {:>22} {:>22}",
        "t", "truncated series", "P/Q", "exact 1/(1+t)"
    );
    for t in [0.5, 0.9, 2.0, 9.0] {
        println!(
            "{t:>6} {:>22} {:>22} {:>22}",
            x.eval(t),
            pa.eval(t).unwrap(),
            1.0 / (1.0 + t)
        );
    }
}
