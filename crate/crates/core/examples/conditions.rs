//! Blaschke, weak Blaschke, Lindelof and separation verdicts for a few
//! model sequences.

use num_complex::Complex64;
use potential_axis::conditions::{blaschke, lindelof_genus1, separated_from_axis, weak_blaschke_genus1};
use potential_axis::AtomicCharge;

pub fn run() -> anyhow::Result<()> {
    let n = 2000;
    let samples = [
        (
            "real axis k",
            (1..=n).map(|k| Complex64::new(k as f64, 0.0)).collect::<Vec<_>>(),
        ),
        (
            "ray k e^{i pi/4}",
            (1..=n)
                .map(|k| Complex64::from_polar(k as f64, 0.25 * std::f64::consts::PI))
                .collect(),
        ),
        (
            "near axis 1 + ik",
            (1..=n).map(|k| Complex64::new(1.0, k as f64)).collect(),
        ),
        (
            "symmetric +-k",
            (1..=n)
                .flat_map(|k| [Complex64::new(k as f64, 0.0), Complex64::new(-(k as f64), 0.0)])
                .collect(),
        ),
    ];
    println!(
        "{:<18} {:>14} {:>14} {:>14} {:>14}",
        "sequence", "blaschke", "weak", "lindelof", "separated"
    );
    for (name, pts) in samples {
        let charge = AtomicCharge::from_pairs(pts.into_iter().map(|z| (z, 1.0)))?;
        let b = blaschke(&charge, 1.0)?;
        let w = weak_blaschke_genus1(&charge, 1.0)?;
        let l = lindelof_genus1(&charge, 1.0)?;
        let s = separated_from_axis(&charge, 1.0);
        println!(
            "{name:<18} {:>14} {:>14} {:>14} {:>14}",
            format!("{:?}", b.holds),
            format!("{:?}", w.holds),
            format!("{:?}", l.holds),
            format!("{:?}", s.holds)
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run()
}
