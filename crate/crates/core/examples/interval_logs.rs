//! Characteristic logarithms of a finite sequence and the
//! integration-by-parts identity that ties them to counting functions.

use num_complex::Complex64;
use potential_axis::logmetrics::{ibp_residual, IntervalLogs, Side, Weight};
use potential_axis::AtomicCharge;

pub fn run() -> anyhow::Result<()> {
    // zeros at 1..=200 and a few off-axis points on the left
    let pts = (1..=200)
        .map(|k| (Complex64::new(k as f64, 0.0), 1.0))
        .chain([(Complex64::new(-3.0, 4.0), 2.0), (Complex64::new(-0.5, -7.0), 1.0)]);
    let charge = AtomicCharge::from_pairs(pts)?;
    let logs = IntervalLogs::new(&charge);

    println!(
        "{:>8} {:>8} {:>12} {:>12} {:>12}",
        "r", "R", "l_right", "l_left", "l_bar"
    );
    for (r, big_r) in [(1.0, 10.0), (2.0, 50.0), (10.0, 100.0), (1.0, 200.0)] {
        println!(
            "{r:>8} {big_r:>8} {:>12.6} {:>12.6} {:>12.6}",
            logs.right(r, big_r),
            logs.left(r, big_r),
            logs.bar(r, big_r)
        );
    }
    // the harmonic sum of 1/k over (r, R] is close to log(R/r)
    println!("log(200) = {:.6}", 200f64.ln());
    println!("right count at 50: {}", logs.count(50.0, Weight::CosPlus));

    let mut worst: f64 = 0.0;
    for (r, big_r) in [(0.5, 3.0), (1.5, 150.0), (7.0, 9.0)] {
        for side in [Side::Right, Side::Left] {
            worst = worst.max(ibp_residual(&charge, r, big_r, side)?);
        }
    }
    println!("largest integration-by-parts residual: {worst:.3e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
