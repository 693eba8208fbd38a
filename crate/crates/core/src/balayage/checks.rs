//! Property checks on balayage results: mass growth, preservation of the
//! Lindelof condition, Lipschitz regularity of the distribution on tails.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{balayage_genus1, BalayageResult, Genus};
use crate::conditions::{lindelof_genus1, separated_from_axis, weak_blaschke_genus1, ConditionVerdict, ProfileRow};
use crate::error::{invalid, Result};
use crate::measures::{AtomicCharge, GridSpec, LineCharge};
use crate::numeric::quad::{integrate_with_breaks, QuadOptions};
use crate::numeric::stability::{stabilization, stabilize_profile, Extension, Stabilization, Tri};
use crate::numeric::sum::{pairwise_sum, Compensated};

fn tight() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-11,
        ..QuadOptions::default()
    }
}

fn breaks_in(line: &LineCharge, a: f64, b: f64) -> Vec<f64> {
    let mut br = vec![a];
    br.extend(line.feature_ordinates().into_iter().filter(|&v| v > a && v < b));
    br.push(b);
    br
}

/// `integral_a^b |density|`.
fn abs_mass(line: &LineCharge, a: f64, b: f64) -> f64 {
    if b <= a || line.terms().is_empty() {
        return 0.0;
    }
    integrate_with_breaks(|y| line.density(y).abs(), &breaks_in(line, a, b), tight()).value
}

/// `|nu|^rad(r)`: total variation of the line charge on `[-ir, ir]`, for
/// increasing `radii`.
pub fn radial_variation(line: &LineCharge, radii: &[f64]) -> Result<Vec<f64>> {
    if radii.iter().any(|r| !(*r > 0.0)) || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("radii must be positive and increasing"));
    }
    let mut edges = vec![0.0];
    edges.extend_from_slice(radii);
    let pieces: Vec<f64> = edges
        .par_windows(2)
        .map(|w| abs_mass(line, w[0], w[1]) + abs_mass(line, -w[1], -w[0]))
        .collect();
    let mut acc = Compensated::new();
    Ok(radii
        .iter()
        .zip(&pieces)
        .map(|(&r, &p)| {
            acc.add(p);
            let atoms: Vec<f64> = line
                .atoms()
                .iter()
                .filter(|a| a.0.abs() <= r)
                .map(|a| a.1.abs())
                .collect();
            acc.value() + pairwise_sum(&atoms)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassGrowthOptions {
    /// large-r grid, `rmin >= 2`; by default from 2 to the largest atom
    /// modulus (at least 16)
    pub large: Option<GridSpec>,
    pub small: GridSpec,
}

impl Default for MassGrowthOptions {
    fn default() -> Self {
        Self {
            large: None,
            small: GridSpec::new(1e-3, 1e-1, 1.25),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MassGrowth {
    /// `(r, |nu|^rad(r) / (r log r))`
    pub large: Vec<(f64, f64)>,
    pub large_max: f64,
    pub large_stabilization: Option<Stabilization>,
    /// `(r, |nu|^rad(r) / r^2)`, absent when the charge has an atom at 0
    pub small: Vec<(f64, f64)>,
    pub small_stabilization: Option<Stabilization>,
    pub holds: Tri,
}

/// Growth of `|nu^Bal|^rad` at infinity, `O(r log r)`, and at zero,
/// `O(r^2)`. The small-r bound compares the supremum over the full range
/// with the supremum over its top decade.
pub fn mass_growth_check(result: &BalayageResult, opts: MassGrowthOptions) -> Result<MassGrowth> {
    if result.genus != Genus::One {
        return Err(invalid("mass growth applies to genus-one balayage"));
    }
    let line = &result.line;
    let reach = line
        .terms()
        .iter()
        .map(|t| t.x.hypot(t.v))
        .chain(line.atoms().iter().map(|a| a.0.abs()))
        .fold(16.0, f64::max);
    let large_spec = opts.large.unwrap_or(GridSpec::new(2.0, reach, 1.25));
    if large_spec.rmin < 2.0 {
        return Err(invalid("large-r grid must start at r >= 2"));
    }
    let radii = large_spec.points()?;
    let var = radial_variation(line, &radii)?;
    let large: Vec<(f64, f64)> = radii.iter().zip(&var).map(|(&r, &m)| (r, m / (r * r.ln()))).collect();
    let large_max = large.iter().map(|p| p.1).fold(0.0, f64::max);
    let large_stabilization = stabilize_profile(&large, Extension::Dyadic);
    let mut holds = large_stabilization.map_or(Tri::Yes, |s| s.verdict);

    let origin_atom = line.atoms().iter().any(|a| a.0 == 0.0);
    let (small, small_stabilization) = if origin_atom {
        (Vec::new(), None)
    } else {
        let radii = opts.small.points()?;
        let var = radial_variation(line, &radii)?;
        let small: Vec<(f64, f64)> = radii.iter().zip(&var).map(|(&r, &m)| (r, m / (r * r))).collect();
        let top = opts.small.rmax / 10.0;
        let base = small.iter().filter(|p| p.0 >= top).map(|p| p.1).fold(0.0, f64::max);
        let full = small.iter().map(|p| p.1).fold(0.0, f64::max);
        let s = stabilization(base, full);
        holds = holds.and(s.verdict);
        (small, Some(s))
    };
    Ok(MassGrowth {
        large,
        large_max,
        large_stabilization,
        small,
        small_stabilization,
        holds,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LindelofPreservation {
    /// `profiles` when the precondition holds, otherwise inconclusive
    pub holds: Tri,
    /// `weak_blaschke_genus1` and `lindelof_genus1` of the source
    pub precondition: Tri,
    /// both moment profiles bounded, regardless of the precondition
    pub profiles: Tri,
    pub balayage: ConditionVerdict,
    pub difference: ConditionVerdict,
}

/// `-i * integral over a < |y| <= b of density(y) / y dy` plus atom terms:
/// the moment `integral d nu(iy) / (iy)` over a symmetric shell.
fn line_moment(line: &LineCharge, a: f64, b: f64) -> Complex64 {
    let odd = if line.terms().is_empty() {
        0.0
    } else {
        let mut br = vec![a];
        let mut feats: Vec<f64> = line
            .feature_ordinates()
            .into_iter()
            .map(f64::abs)
            .filter(|&v| v > a && v < b)
            .collect();
        feats.sort_by(f64::total_cmp);
        br.extend(feats);
        br.push(b);
        integrate_with_breaks(
            |y| (line.density(y) - line.density(-y)) / y,
            &br,
            QuadOptions::abs(1e-13),
        )
        .value
    };
    let atoms: Vec<f64> = line
        .atoms()
        .iter()
        .filter(|p| p.0.abs() > a && p.0.abs() <= b)
        .map(|p| p.1 / p.0)
        .collect();
    Complex64::new(0.0, -(odd + pairwise_sum(&atoms)))
}

fn moment_verdict(radii: &[f64], values: Vec<f64>) -> ConditionVerdict {
    let profile: Vec<ProfileRow> = radii
        .iter()
        .zip(values)
        .map(|(&r, v)| ProfileRow::radial(r, v))
        .collect();
    let samples: Vec<(f64, f64)> = profile.iter().map(|p| (p.r, p.value)).collect();
    let s = stabilize_profile(&samples, Extension::LogDyadic);
    ConditionVerdict {
        holds: s.map_or(Tri::Yes, |s| s.verdict),
        witness: crate::conditions::Witness {
            c: Some(profile.iter().map(|p| p.value).fold(0.0, f64::max)),
            ..Default::default()
        },
        profile,
        stabilization: s,
        notes: Vec::new(),
    }
}

/// Lindelof condition for `nu^Bal` and for `nu - nu^Bal` on dyadic shells
/// `r0 < |z| <= r0 2^k`. The profiles are always computed; the verdict is
/// inconclusive unless `nu` itself satisfies the weak Blaschke and Lindelof
/// conditions.
pub fn lindelof_preservation_check(nu: &AtomicCharge, r0: f64) -> Result<LindelofPreservation> {
    let pre = weak_blaschke_genus1(nu, r0)?.holds.and(lindelof_genus1(nu, r0)?.holds);
    let bal = balayage_genus1(nu, r0)?;
    let reach = nu.max_modulus().max(r0);
    let mut radii = vec![2.0 * r0];
    while *radii.last().unwrap() < 64.0 * reach {
        radii.push(2.0 * radii.last().unwrap());
    }
    let mut edges = vec![r0];
    edges.extend_from_slice(&radii);
    let shells: Vec<Complex64> = edges
        .par_windows(2)
        .map(|w| line_moment(&bal.line, w[0], w[1]))
        .collect();

    let mut atoms: Vec<(f64, Complex64)> = nu
        .atoms()
        .iter()
        .filter(|a| a.modulus() > r0)
        .map(|a| (a.modulus(), a.z.inv() * a.mass))
        .collect();
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));

    let (mut bre, mut bim) = (Compensated::new(), Compensated::new());
    let (mut dre, mut dim) = (Compensated::new(), Compensated::new());
    let mut idx = 0;
    let mut bal_vals = Vec::with_capacity(radii.len());
    let mut diff_vals = Vec::with_capacity(radii.len());
    for (&rho, shell) in radii.iter().zip(&shells) {
        bre.add(shell.re);
        bim.add(shell.im);
        dre.add(-shell.re);
        dim.add(-shell.im);
        while idx < atoms.len() && atoms[idx].0 <= rho {
            dre.add(atoms[idx].1.re);
            dim.add(atoms[idx].1.im);
            idx += 1;
        }
        bal_vals.push(Complex64::new(bre.value(), bim.value()).norm());
        diff_vals.push(Complex64::new(dre.value(), dim.value()).norm());
    }
    let balayage = moment_verdict(&radii, bal_vals);
    let difference = moment_verdict(&radii, diff_vals);
    let profiles = balayage.holds.and(difference.holds);
    Ok(LindelofPreservation {
        holds: if pre == Tri::Yes { profiles } else { Tri::Inconclusive },
        precondition: pre,
        profiles,
        balayage,
        difference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzOptions {
    pub y0: f64,
    /// half-widths `r = 2^-j`, `0 <= j <= j_max`
    pub j_max: u32,
    /// sampled ordinates satisfy `y0 <= |y| <= y_max`; by default twice
    /// the largest feature ordinate plus 2
    pub y_max: Option<f64>,
}

impl Default for LipschitzOptions {
    fn default() -> Self {
        Self {
            y0: 1.0,
            j_max: 20,
            y_max: None,
        }
    }
}

/// `|nu^Bal|((iy - ir, iy + ir)) <= C r` over sampled `|y| >= y0` and
/// `r = 2^-j`. `C_j` is the supremum at `r = 2^-j`; the verdict is the
/// stabilization of `C_j` as `r -> 0`. When `source` is given its
/// separation from the axis is reported in the notes.
pub fn lipschitz_tail_check(
    result: &BalayageResult,
    source: Option<&AtomicCharge>,
    opts: LipschitzOptions,
) -> Result<ConditionVerdict> {
    if !(opts.y0 > 0.0) {
        return Err(invalid("y0 must be positive"));
    }
    let line = &result.line;
    let feats = line.feature_ordinates();
    let far = feats.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let y_max = opts.y_max.unwrap_or((2.0 * far + 2.0).max(4.0 * opts.y0));
    let mut ys: Vec<f64> = GridSpec::new(opts.y0, y_max.max(opts.y0 * 1.25), 1.25)
        .points()?
        .into_iter()
        .flat_map(|y| [y, -y])
        .chain(feats.iter().copied().filter(|v| v.abs() >= opts.y0 && v.abs() <= y_max))
        .collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();

    let variation = |y: f64, r: f64| {
        let atoms: Vec<f64> = line
            .atoms()
            .iter()
            .filter(|a| (a.0 - y).abs() <= r)
            .map(|a| a.1.abs())
            .collect();
        abs_mass(line, y - r, y + r) + pairwise_sum(&atoms)
    };
    let profile: Vec<ProfileRow> = (0..=opts.j_max)
        .into_par_iter()
        .map(|j| {
            let r = 0.5f64.powi(j as i32);
            let c = ys.iter().map(|&y| variation(y, r) / r).fold(0.0, f64::max);
            ProfileRow::radial(r, c)
        })
        .collect();
    let half = opts.j_max / 2;
    let base = profile[..=half as usize].iter().map(|p| p.value).fold(0.0, f64::max);
    let full = profile.iter().map(|p| p.value).fold(0.0, f64::max);
    let s = stabilization(base, full);
    let mut out = ConditionVerdict {
        holds: s.verdict,
        witness: crate::conditions::Witness {
            c: Some(full),
            y0: Some(opts.y0),
            ..Default::default()
        },
        profile,
        stabilization: Some(s),
        notes: Vec::new(),
    };
    if let Some(src) = source {
        let sep = separated_from_axis(src, opts.y0);
        out.notes.push(format!(
            "source separation from the axis: {} (inf |Re z|/|z| = {})",
            serde_json::to_string(&sep.holds).unwrap_or_default(),
            sep.witness.value.map_or("n/a".to_string(), |v| format!("{v}")),
        ));
    }
    Ok(out)
}
