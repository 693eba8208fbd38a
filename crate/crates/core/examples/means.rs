//! Disk mean, circle mean and supremum of log|f| on a circle, and Jensen's
//! formula as a cross-check.

use num_complex::Complex64;
use potential_axis::entire::{circle_mean, disk_mean, sup_on_circle, CanonicalProduct};
use potential_axis::{Divisor, QuadOptions};

pub fn run() -> anyhow::Result<()> {
    let zeros = [
        Complex64::new(0.5, 0.5),
        Complex64::new(-1.0, 2.0),
        Complex64::new(3.0, -1.0),
    ];
    let f = CanonicalProduct::new(&Divisor::from_points(zeros)?);
    let v = f.evaluator();
    let opts = QuadOptions::abs(1e-10);
    let centre = Complex64::new(0.2, -0.1);
    for r in [0.5, 1.5, 4.0] {
        let b = disk_mean(&v, centre, r, opts)?;
        let c = circle_mean(&v, centre, r, opts)?;
        let m = sup_on_circle(&v, centre, r, 256)?;
        // Jensen: C(r) = v(centre) + sum over zeros inside of log(r / |z - centre|)
        let jensen = v(centre)
            + zeros
                .iter()
                .map(|z| (z - centre).norm())
                .filter(|&d| d < r)
                .map(|d| (r / d).ln())
                .sum::<f64>();
        println!(
            "r = {r}: B = {:.8}  C = {:.8}  M = {:.8}  Jensen C = {jensen:.8}",
            b.value, c.value, m.value
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
