//! Majorant inequalities on the imaginary axis for concrete U, M and q.
//! With U = M every sub-mean inequality must hold.

use num_complex::Complex64;
use potential_axis::entire::{check_a1_bound, check_a3, check_b3_c3, B3C3Mode, CanonicalProduct, VerifyOptions};
use potential_axis::Divisor;

pub fn run() -> anyhow::Result<()> {
    let zeros = (1..=60).map(|k| Complex64::from_polar(k as f64, 0.3 * (k % 5) as f64 - 0.6));
    let m = CanonicalProduct::new(&Divisor::from_points(zeros)?);
    let mv = m.evaluator();
    let opts = VerifyOptions::default();

    let a3 = check_a3(&mv, &mv, |_| 1.0, &opts)?;
    let b3 = check_b3_c3(
        &mv,
        &mv,
        |y: f64| 0.1 * (1.0 + y.abs()).sqrt(),
        B3C3Mode::B3 { threshold: 0.05 },
        &opts,
    )?;
    let c3 = check_b3_c3(
        &mv,
        &mv,
        |_| 1.0,
        B3C3Mode::C3 { eps: 0.2 },
        &VerifyOptions {
            y0: 10.0,
            ..opts.clone()
        },
    )?;
    println!("U = M: a3 {:?}, b3 {:?}, c3 {:?}", a3.holds, b3.holds, c3.holds);

    // u = 0 and f = 1 against M + 1: the bound holds with room to spare
    let shifted = |z: Complex64| mv(z) + 1.0;
    let one = CanonicalProduct::new(&Divisor::default());
    let a1 = check_a1_bound(|_| 0.0, &one, shifted, 1.0, &opts, None)?;
    println!("a1 with f = 1: {:?}", a1.verdict.holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
