use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::means::sup_on_circle;
use crate::error::{invalid, Result};
use crate::measures::GridSpec;

/// Type, order and indicator of `v` as tail suprema over the upper half
/// (by index) of the radius grid.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub type1: f64,
    pub order: f64,
    /// `(theta, ind(theta))`, `theta` reduced to `[0, 2 pi)`
    pub indicator: Vec<(f64, f64)>,
    /// `(r, M_v(0, r))`
    pub sup_profile: Vec<(f64, f64)>,
    pub grid: GridSpec,
    pub angular_samples: usize,
}

impl GrowthReport {
    /// Indicator at the tabulated angle closest to `theta` (mod `2 pi`).
    pub fn indicator_at(&self, theta: f64) -> Option<f64> {
        let t = theta.rem_euclid(2.0 * std::f64::consts::PI);
        self.indicator
            .iter()
            .min_by(|a, b| {
                let da = circular_gap(a.0, t);
                let db = circular_gap(b.0, t);
                da.total_cmp(&db)
            })
            .map(|p| p.1)
    }
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * std::f64::consts::PI);
    d.min(2.0 * std::f64::consts::PI - d)
}

pub fn growth_report<V>(v: V, grid: GridSpec, thetas: &[f64], angular_samples: usize) -> Result<GrowthReport>
where
    V: Fn(Complex64) -> f64 + Sync,
{
    let radii = grid.points()?;
    if thetas.is_empty() {
        return Err(invalid("angle grid is empty"));
    }
    let tail = &radii[radii.len() / 2..];
    let sup_profile: Vec<(f64, f64)> = radii
        .par_iter()
        .map(|&r| sup_on_circle(&v, Complex64::new(0.0, 0.0), r, angular_samples).map(|s| (r, s.value)))
        .collect::<Result<_>>()?;
    let tail_sup = |f: &dyn Fn(f64, f64) -> Option<f64>| {
        sup_profile[radii.len() / 2..]
            .iter()
            .filter_map(|&(r, m)| f(r, m))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let type1 = tail_sup(&|r, m| Some(m / r)).max(0.0);
    // slope of log M against log r between neighbouring radii
    let order = sup_profile[radii.len() / 2..]
        .windows(2)
        .filter(|w| w[0].1 > 1.0 && w[1].1 > 1.0)
        .map(|w| (w[1].1.ln() - w[0].1.ln()) / (w[1].0 / w[0].0).ln())
        .fold(f64::NEG_INFINITY, f64::max);
    let indicator = thetas
        .par_iter()
        .map(|&t| {
            let t = t.rem_euclid(2.0 * std::f64::consts::PI);
            // intermediate radii keep a lattice of zeros from hiding the limsup
            let val = tail
                .iter()
                .flat_map(|&r| (0..4).map(move |j| r * grid.ratio.powf(j as f64 / 4.0)))
                .filter(|&r| r <= grid.rmax)
                .map(|r| v(Complex64::from_polar(r, t)) / r)
                .fold(f64::NEG_INFINITY, f64::max);
            (t, val)
        })
        .collect();
    Ok(GrowthReport {
        type1,
        order: if order.is_finite() { order } else { 0.0 },
        indicator,
        sup_profile,
        grid,
        angular_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::log_abs_sin_pi;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn growth_examples() {
        let grid = GridSpec::new(10.0, 1e4, 2.0);
        let thetas = [0.0, FRAC_PI_2, PI, -FRAC_PI_2];
        let g = growth_report(log_abs_sin_pi, grid, &thetas, 720).unwrap();
        assert!((g.type1 - PI).abs() < 0.01);
        assert!((g.indicator_at(FRAC_PI_2).unwrap() - PI).abs() < 0.02);
        assert!((g.indicator_at(-FRAC_PI_2).unwrap() - PI).abs() < 0.02);
        assert!(g.indicator_at(0.0).unwrap().abs() < 1e-2);
        assert!((g.order - 1.0).abs() < 0.01, "order {}", g.order);
        assert_eq!(g.indicator_at(FRAC_PI_2), g.indicator_at(FRAC_PI_2 + 2.0 * PI));

        let g = growth_report(|z: Complex64| z.re, grid, &thetas, 720).unwrap();
        assert!((g.type1 - 1.0).abs() < 1e-12);
        assert!((g.indicator_at(0.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((g.indicator_at(PI).unwrap() + 1.0).abs() < 1e-12);

        let g = growth_report(|_| 0.0, grid, &thetas, 720).unwrap();
        assert_eq!(g.type1, 0.0);
    }
}
