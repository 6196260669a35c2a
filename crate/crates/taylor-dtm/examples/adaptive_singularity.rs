//! Adaptive stepping towards a pole: x' = 1 + x^2 with x(0) = 0 is
//! tan(t), singular at pi/2. The step follows half the estimated
//! convergence radius, so windows shrink geometrically as the pole nears;
//! asked to cross it, the solver reports a step underflow instead of
//! returning garbage.
//!
//! ```text
//! cargo run -p taylor-dtm --example adaptive_singularity
//! ```

use taylor_dtm::{compile_plan, parse_problem, stepwise_solve, SolverConfig};

fn main() {
    let problem = parse_problem("x' = 1 + x^2; x(0)=0")
        .unwrap()
        .normalize()
        .unwrap()
        .with_range(1.5);
    let plan = compile_plan(&problem).unwrap();
    let cfg = SolverConfig::default(); // order 12, adaptive
    let records = stepwise_solve(&plan, &problem, &cfg).unwrap();

    println!("x' = 1 + x^2 towards t = 1.5 (pole at pi/2 = 1.5708)");
    println!(
        "{:>4} {:>12} {:>12} {:>22}",
        "i", "t_i", "h_i", "x(t_{i+1})"
    );
    for r in &records {
        println!(
            "{:>4} {:>12.6} {:>12.3e} {:>22}",
            r.index,
            r.t_start,
            r.h(),
            r.alpha_next[0]
        );
    }
    let x_end = records.last().unwrap().alpha_next[0];
    println!("\nx(1.5) = {x_end}");
    println!("tan(1.5) = {}", 1.5f64.tan());

    let crossing = parse_problem("x' = 1 + x^2; x(0)=0")
        .unwrap()
        .normalize()
        .unwrap()
        .with_range(2.0);
    match stepwise_solve(&plan, &crossing, &cfg) {
        Err(e) => println!("\nasking for t = 2.0: {e}"),
        Ok(_) => unreachable!("the pole at pi/2 cannot be stepped over"),
    }
}
