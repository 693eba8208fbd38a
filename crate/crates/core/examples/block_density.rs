//! The three logarithmic block densities for N and (1/2)N.

use num_complex::Complex64;
use potential_axis::logmetrics::{block_density, DensityParams, DensityVariant};
use potential_axis::{AtomicCharge, GridSpec};

fn arithmetic(step: f64, rmax: f64) -> anyhow::Result<AtomicCharge> {
    let n = (rmax / step).floor() as usize;
    Ok(AtomicCharge::from_pairs(
        (1..=n).map(|k| (Complex64::new(k as f64 * step, 0.0), 1.0)),
    )?)
}

pub fn run() -> anyhow::Result<()> {
    let params = DensityParams {
        grid: GridSpec::new(1.0, 1e5, 1.25),
        ..DensityParams::default()
    };
    for step in [1.0, 0.5] {
        let z = arithmetic(step, 1e5)?;
        print!("step {step}:");
        for variant in [DensityVariant::LimsupLog, DensityVariant::InfLog, DensityVariant::BestB] {
            let rep = block_density(&z, variant, &params)?;
            print!("  {variant:?} = {:.4}", rep.value);
            if let Some(fit) = rep.fit {
                print!(" (C_b = {:.3})", fit.c_b);
            }
        }
        println!();
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
