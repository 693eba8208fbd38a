//! Kahane's outer density condition: distance of the balayage
//! distribution from a Lipschitz function in the logarithmic metric.

use num_complex::Complex64;
use potential_axis::conditions::{kahane_outer_density, KahaneOptions, PiecewiseLinear};
use potential_axis::AtomicCharge;

pub fn run() -> anyhow::Result<()> {
    let delta1 = AtomicCharge::from_pairs([(Complex64::new(1.0, 0.0), 1.0)])?;
    let zero = PiecewiseLinear::constant(0.0);
    let v = kahane_outer_density(&delta1, Some(&zero), KahaneOptions::default())?;
    let expected = 2.0 * (0.25 + std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI));
    println!(
        "delta_1, k = 0: J = {:.10} (closed form {expected:.10}), {:?}",
        v.witness.value.unwrap_or(f64::NAN),
        v.holds
    );

    let cloud =
        AtomicCharge::from_pairs((1..=40).map(|k| (Complex64::new(1.0 + (k % 3) as f64, 2.0 * k as f64), 1.0)))?;
    let fitted = kahane_outer_density(&cloud, None, KahaneOptions::default())?;
    println!(
        "40 atoms near the axis, fitted k: J = {:.6}, Lipschitz constant {:.3}, {:?}",
        fitted.witness.value.unwrap_or(f64::NAN),
        fitted.witness.lipschitz.unwrap_or(f64::NAN),
        fitted.holds
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
