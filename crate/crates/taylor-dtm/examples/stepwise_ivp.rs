//! Fixed-step continuous analytic continuation: re-expand at each
//! reference time and restart from the previous window's end value.
//!
//! ```text
//! cargo run -p taylor-dtm --example stepwise_ivp
//! ```

use taylor_dtm::{parse_problem, solve_ivp, Grid, SolverConfig, StepMode};

fn main() {
    let problem = parse_problem("x' = x; x(0)=1")
        .unwrap()
        .normalize()
        .unwrap()
        .with_range(1.0);
    let cfg = SolverConfig {
        order: 12,
        step: StepMode::Fixed(0.1),
        grid: Grid::Count(5),
        ..SolverConfig::default()
    };
    let traj = solve_ivp(&problem, &cfg).unwrap();

    println!("x' = x, x(0) = 1 over [0, 1], order 12, h = 0.1");
    println!("{:>5} {:>22} {:>12} {:>12}", "t", "x(t)", "true err", "est");
    for i in 0..traj.times.len() {
        let t = traj.times[i];
        let x = traj.values[i][0];
        println!(
            "{t:>5} {x:>22} {:>12.3e} {:>12.3e}",
            (x - t.exp()).abs(),
            traj.err_est[i]
        );
    }
    println!("windows used: {}", traj.steps_taken);
}
