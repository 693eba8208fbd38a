//! The genus-one product over the nonzero integers, truncated with an
//! analytic tail, reproduces sin(pi z)/(pi z).

use std::f64::consts::PI;

use num_complex::Complex64;
use potential_axis::entire::{growth_report, log_abs_sin_pi, CanonicalProduct, TailDescriptor};
use potential_axis::{Divisor, GridSpec};

pub fn run() -> anyhow::Result<()> {
    let n = 1000u64;
    let zeros = (1..=n).flat_map(|k| [Complex64::new(k as f64, 0.0), Complex64::new(-(k as f64), 0.0)]);
    let product = CanonicalProduct::new(&Divisor::from_points(zeros)?)
        .with_tail(TailDescriptor::SymmetricArithmetic { n, step: 1.0, phi: 0.0 })?;
    let i = Complex64::new(0.0, 1.0);
    let v = product.log_abs(i);
    println!(
        "log|f(i)| = {:.10} +- {:.1e}; log(sinh pi / pi) = {:.10}",
        v.value,
        v.error_bound,
        (PI.sinh() / PI).ln()
    );

    let thetas = [0.0, PI / 2.0, PI, 1.5 * PI];
    let g = growth_report(log_abs_sin_pi, GridSpec::new(10.0, 1e4, 2.0), &thetas, 256)?;
    println!("log|sin pi z|: type {:.4}, order {:.4}", g.type1, g.order);
    for (theta, ind) in &g.indicator {
        println!("  indicator({theta:.4}) = {ind:.4}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
