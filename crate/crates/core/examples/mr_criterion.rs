//! Comparing interval logarithms of two sequences: a subsequence is always
//! dominated, while the denser sequence exceeds the sparser one by a
//! multiple of log(R/r).

use num_complex::Complex64;
use potential_axis::conditions::{mr_compare, Slack};
use potential_axis::logmetrics::IntervalKind;
use potential_axis::{AtomicCharge, GridSpec, IntervalGrid};

fn multiples(step: usize, rmax: usize) -> anyhow::Result<AtomicCharge> {
    Ok(AtomicCharge::from_pairs(
        (1..=rmax / step).map(|k| (Complex64::new((k * step) as f64, 0.0), 1.0)),
    )?)
}

pub fn run() -> anyhow::Result<()> {
    let even = multiples(2, 100_000)?;
    let nat = multiples(1, 100_000)?;
    let grid = IntervalGrid::geometric(GridSpec::new(1.0, 1e5, 1.5))?;
    for kind in [IntervalKind::Log, IntervalKind::Bar] {
        let sub = mr_compare(&even, &nat, &grid, &Slack::None, kind)?;
        let sup = mr_compare(&nat, &even, &grid, &Slack::None, kind)?;
        // pairs with R = 1e4 r, outside the geometric grid
        let wide = IntervalGrid::from_pairs((0..8).map(|j| (1.5f64.powi(j), 1e4 * 1.5f64.powi(j))))?;
        let gap = mr_compare(&nat, &even, &wide, &Slack::None, kind)?
            .profile
            .iter()
            .map(|p| p.value)
            .fold(f64::INFINITY, f64::min);
        println!(
            "{kind:?}: 2N vs N -> {:?} (C = {:?});  N vs 2N -> {:?}, smallest gap at R/r = 1e4: {gap:.3} (log 1e4 = {:.3})",
            sub.holds,
            sub.witness.c,
            sup.holds,
            1e4f64.ln()
        );
    }
    let eps = mr_compare(&nat, &even, &grid, &Slack::Eps(vec![0.6]), IntervalKind::Log)?;
    println!("N vs 2N with slack 0.6 log(R/r): {:?}", eps.holds);
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
