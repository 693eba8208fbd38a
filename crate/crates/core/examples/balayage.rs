//! Genus-zero and genus-one balayage onto the imaginary axis, with the
//! growth and Lindelof diagnostics for the genus-one case.

use num_complex::Complex64;
use potential_axis::balayage::{
    balayage_genus0, balayage_genus1, lindelof_preservation_check, mass_growth_check, Genus0Options, MassGrowthOptions,
};
use potential_axis::AtomicCharge;

pub fn run() -> anyhow::Result<()> {
    let delta1 = AtomicCharge::from_pairs([(Complex64::new(1.0, 0.0), 1.0)])?;
    let g0 = balayage_genus0(&delta1, Genus0Options::default())?;
    println!(
        "genus 0, delta_1: F(1) = {:.12}, total mass = {:?}",
        g0.distribution(1.0),
        g0.line.total_mass()
    );
    let g1 = balayage_genus1(&delta1, 0.5)?;
    println!("genus 1, delta_1, r0 = 1/2: F(1) = {:.12}", g1.distribution(1.0));

    for n in [100, 200] {
        let nu = AtomicCharge::from_pairs((1..=n).map(|k| (Complex64::new(k as f64, 0.0), 1.0)))?;
        let bal = balayage_genus1(&nu, 0.5)?;
        let growth = mass_growth_check(&bal, MassGrowthOptions::default())?;
        println!(
            "N = {n}: max |nu^Bal|^rad(r)/(r log r) = {:.4}, growth verdict {:?}",
            growth.large_max, growth.holds
        );
    }

    let sym = AtomicCharge::from_pairs((1..=50).flat_map(|k| {
        [
            (Complex64::new(k as f64, 0.0), 1.0),
            (Complex64::new(-(k as f64), 0.0), 1.0),
        ]
    }))?;
    let lp = lindelof_preservation_check(&sym, 0.5)?;
    println!(
        "symmetric +-k: precondition {:?}, profiles {:?}, verdict {:?}",
        lp.precondition, lp.profiles, lp.holds
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
