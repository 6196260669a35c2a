//! Expand the raw Taylor coefficients of an ODE and compare them with the
//! closed-form coefficient law.
//!
//! For x' = lambda*x with x(0) = alpha the recurrence
//! (k+1) X_{k+1} = lambda X_k forces X_k = alpha lambda^k / k!, the
//! exponential series.
//!
//! ```text
//! cargo run -p taylor-dtm --example raw_series
//! ```

use taylor_dtm::{compile_plan, expand_series, parse_problem};

fn main() {
    let problem = parse_problem("x' = lambda*x; x(0)=2; lambda=3")
        .unwrap()
        .normalize()
        .unwrap();
    let plan = compile_plan(&problem).unwrap();
    let series = expand_series(&plan, &[2.0], 0.0, 10).unwrap();
    let x = &series[0];

    println!("x' = 3x, x(0) = 2, expanded to order {}", x.order());
    println!(
        "{:>3} {:>22} {:>22}",
        "k", "X_k (recurrence)", "alpha l^k / k!"
    );
    let mut law = 2.0;
    for k in 0..=x.order() {
        println!("{k:>3} {:>22} {:>22}", x.coeff(k), law);
        law = law * 3.0 / (k + 1) as f64;
    }
    println!("\nsum at t = 0.3: {}", x.eval(0.3));
    println!("exact         : {}", 2.0 * (3.0f64 * 0.3).exp());
}
