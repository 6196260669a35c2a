//! Power-law kernel continuation to large t.
//!
//! x' = x/(2(1+t)) with x(0) = 1 solves to sqrt(1+t), which grows like
//! t^(1/2) at infinity -- hopeless for a plain rational approximant of a
//! short series. Multiplying by the kernel (1 + t/r)^(-1/2) first makes
//! the transformed function tend to a constant, which a small diagonal
//! approximant reproduces; the kernel is undone in closed form afterwards.
//!
//! ```text
//! cargo run -p taylor-dtm --example kernel_pade
//! ```

use taylor_dtm::{
    compile_plan, expand_series, kernel_pade_evaluate, pade_from_series, parse_problem, Kernel,
};

fn main() {
    let problem = parse_problem("x' = x/(2*(1 + t)); x(0)=1")
        .unwrap()
        .normalize()
        .unwrap();
    let plan = compile_plan(&problem).unwrap();
    let x = &expand_series(&plan, &[1.0], 0.0, 12).unwrap()[0];

    let kernel = Kernel::PowerLaw { nu: 0.5, r: 2.0 };
    let plain = pade_from_series(x, 3, 3).unwrap();

    println!("x(t) = sqrt(1+t); [3/3] with and without the kernel (1+t/2)^(-1/2)");
    println!(
        "{:>6} {:>14} {:>14} {:>14} {:>11} {:>11}",
        "t", "kernel-Pade", "plain Pade", "exact", "kernel err", "plain err"
    );
    for t in [1.0, 5.0, 10.0, 50.0, 200.0] {
        let with_kernel = kernel_pade_evaluate(x, &kernel, 3, 3, t).unwrap();
        let without = plain.eval(t).unwrap();
        let exact = (1.0 + t).sqrt();
        println!(
            "{t:>6} {with_kernel:>14.8} {without:>14.8} {exact:>14.8} {:>11.2e} {:>11.2e}",
            ((with_kernel - exact) / exact).abs(),
            ((without - exact) / exact).abs()
        );
    }
}
