//! Genus-one potential of a balayage and its discrepancy with the source
//! potential on the axis.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{balayage_genus1, BalayageResult};
use crate::entire::{circle_mean, log_abs_e1};
use crate::error::Result;
use crate::measures::AtomicCharge;
use crate::numeric::quad::{integrate_real_line, QuadOptions};
use crate::numeric::sum::pairwise_sum;

/// `log|1 - z/zeta|` inside `|zeta| < r0`, `log|E(z/zeta; 1)|` outside.
fn kernel(z: Complex64, zeta: Complex64, r0: f64) -> f64 {
    let w = z / zeta;
    if zeta.norm() < r0 {
        (Complex64::new(1.0, 0.0) - w).norm().ln()
    } else {
        log_abs_e1(w)
    }
}

/// `v^Bal(z) = integral over iR of the split kernel against nu^Bal`.
#[derive(Debug, Clone)]
pub struct BalayagePotential {
    pub result: BalayageResult,
    pub source: AtomicCharge,
    pub r0: f64,
    pub quad: QuadOptions,
}

impl BalayagePotential {
    pub fn eval(&self, z: Complex64) -> f64 {
        let line = &self.result.line;
        let atoms: Vec<f64> = line
            .atoms()
            .iter()
            .map(|&(y, m)| m * kernel(z, Complex64::new(0.0, y), self.r0))
            .collect();
        let atoms = pairwise_sum(&atoms);
        if line.terms().is_empty() {
            return atoms;
        }
        let mut breaks = line.feature_ordinates();
        breaks.extend([-self.r0, 0.0, self.r0, z.im]);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let f = |y: f64| {
            if y == 0.0 {
                return 0.0;
            }
            line.density(y) * kernel(z, Complex64::new(0.0, y), self.r0)
        };
        integrate_real_line(f, &breaks, self.quad).value + atoms
    }

    /// The source potential with the same split kernel.
    pub fn source_potential(&self, z: Complex64) -> f64 {
        let terms: Vec<f64> = self
            .source
            .atoms()
            .iter()
            .map(|a| a.mass * kernel(z, a.z, self.r0))
            .collect();
        pairwise_sum(&terms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionBalayageOptions {
    /// `(z, rho)` with `rho < |Re z|`
    pub mean_value_samples: Vec<(Complex64, f64)>,
    pub boundary_ordinates: Vec<f64>,
    pub quad: QuadOptions,
}

impl Default for FunctionBalayageOptions {
    fn default() -> Self {
        Self {
            mean_value_samples: vec![
                (Complex64::new(3.0, 0.0), 1.0),
                (Complex64::new(-3.0, 0.0), 1.0),
                (Complex64::new(2.0, 2.0), 1.0),
            ],
            boundary_ordinates: vec![-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0],
            quad: QuadOptions::abs(1e-11),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanValueSample {
    pub z: Complex64,
    pub rho: f64,
    pub value: f64,
    pub circle_mean: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySample {
    pub y: f64,
    pub balayage: f64,
    pub source: f64,
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionBalayageReport {
    pub r0: f64,
    pub mean_value: Vec<MeanValueSample>,
    pub max_mean_value_residual: f64,
    pub boundary: Vec<BoundarySample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<String>,
}

const ATOM_CLEARANCE: f64 = 1e-6;

/// The genus-one potential of the balayage of `nu`, checked for
/// harmonicity off the axis and compared with the source potential on it.
/// The boundary discrepancy is reported, not corrected.
pub fn function_balayage(
    nu: &AtomicCharge,
    r0: f64,
    opts: &FunctionBalayageOptions,
) -> Result<(BalayagePotential, FunctionBalayageReport)> {
    let result = balayage_genus1(nu, r0)?;
    let pot = BalayagePotential {
        result,
        source: nu.clone(),
        r0,
        quad: opts.quad,
    };
    let near_atom = |z: Complex64, pad: f64| nu.atoms().iter().any(|a| (a.z - z).norm() <= pad + ATOM_CLEARANCE);
    let mut excluded = Vec::new();
    let mut mv_points = Vec::new();
    for &(z, rho) in &opts.mean_value_samples {
        if !(rho > 0.0) || rho >= z.re.abs() {
            excluded.push(format!("mean-value sample {z} with radius {rho} touches the axis"));
        } else {
            mv_points.push((z, rho));
        }
    }
    let mean_value: Vec<MeanValueSample> = mv_points
        .par_iter()
        .map(|&(z, rho)| {
            let value = pot.eval(z);
            let cm = circle_mean(|w| pot.eval(w), z, rho, QuadOptions::abs(1e-9))?.value;
            Ok(MeanValueSample {
                z,
                rho,
                value,
                circle_mean: cm,
                residual: (value - cm).abs(),
            })
        })
        .collect::<Result<_>>()?;
    let mut bys = Vec::new();
    for &y in &opts.boundary_ordinates {
        if y == 0.0 || near_atom(Complex64::new(0.0, y), 0.0) {
            excluded.push(format!("boundary ordinate {y} sits on an atom"));
        } else {
            bys.push(y);
        }
    }
    let boundary = bys
        .par_iter()
        .map(|&y| {
            let z = Complex64::new(0.0, y);
            let b = pot.eval(z);
            let s = pot.source_potential(z);
            BoundarySample {
                y,
                balayage: b,
                source: s,
                discrepancy: b - s,
            }
        })
        .collect();
    let max_mean_value_residual = mean_value.iter().map(|m| m.residual).fold(0.0, f64::max);
    Ok((
        pot,
        FunctionBalayageReport {
            r0,
            mean_value,
            max_mean_value_residual,
            boundary,
            excluded,
        },
    ))
}
