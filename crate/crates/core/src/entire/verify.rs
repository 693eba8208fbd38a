//! Majorant inequalities on the imaginary axis: `U(iy) <= C_M(iy, q) + q`
//! and its sublinear and `eps |y|` variants, and the disk-mean bound for
//! `u + log|f|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::growth::{growth_report, GrowthReport};
use super::means::{circle_mean, disk_mean};
use super::product::CanonicalProduct;
use crate::conditions::{ConditionVerdict, ProfileRow, Witness};
use crate::error::{invalid, Result};
use crate::logmetrics::j_tail;
use crate::measures::GridSpec;
use crate::numeric::quad::QuadOptions;
use crate::numeric::stability::Tri;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    /// ordinates `y`; only `|y| >= y0` are checked
    pub samples: Vec<f64>,
    pub y0: f64,
    /// allowed excess beyond the quadrature error
    pub tolerance: f64,
    pub quad: QuadOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        let pos: Vec<f64> = GridSpec::new(1.0, 100.0, 1.25).points().unwrap_or_default();
        Self {
            samples: pos.iter().map(|y| -y).chain(pos.iter().copied()).collect(),
            y0: 1.0,
            tolerance: 1e-6,
            quad: QuadOptions::abs(1e-8),
        }
    }
}

impl VerifyOptions {
    fn ordinates(&self) -> Vec<f64> {
        let mut ys: Vec<f64> = self.samples.iter().copied().filter(|y| y.abs() >= self.y0).collect();
        ys.sort_by(f64::total_cmp);
        ys.dedup();
        ys
    }
}

fn iy(y: f64) -> Complex64 {
    Complex64::new(0.0, y)
}

/// Positive, nondecreasing in `|y|` on each half-line, `J(q)` finite.
fn validate_q<Q: Fn(f64) -> f64>(q: &Q, ys: &[f64]) -> Result<f64> {
    for &y in ys {
        let v = q(y);
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(format!("q must be positive and finite, q({y}) = {v}")));
        }
    }
    for side in [1.0, -1.0] {
        let mut half: Vec<f64> = ys.iter().map(|y| y.abs()).collect();
        half.sort_by(f64::total_cmp);
        half.dedup();
        if half.windows(2).any(|w| q(side * w[1]) < q(side * w[0])) {
            return Err(invalid("q must not decrease as |y| grows"));
        }
    }
    let j = j_tail(q, QuadOptions::abs(1e-8));
    if !j.converged || !j.value.is_finite() {
        return Err(invalid("logarithmic integral J(q) diverges"));
    }
    Ok(j.value)
}

/// `(y, U(iy) - C_M(iy, q(iy)), C_M quadrature error)` per ordinate.
fn excess<U, M, Q>(u: &U, m: &M, q: &Q, ys: &[f64], quad: QuadOptions) -> Result<Vec<(f64, f64, f64)>>
where
    U: Fn(Complex64) -> f64 + Sync,
    M: Fn(Complex64) -> f64 + Sync,
    Q: Fn(f64) -> f64 + Sync,
{
    ys.par_iter()
        .map(|&y| {
            let c = circle_mean(m, iy(y), q(y), quad)?;
            Ok((y, u(iy(y)) - c.value, c.abs_error))
        })
        .collect()
}

/// `max over |y| >= y0 of U(iy) - C_M(iy, q(iy)) - q(iy) <= tolerance`.
pub fn check_a3<U, M, Q>(u: U, m: M, q: Q, opts: &VerifyOptions) -> Result<ConditionVerdict>
where
    U: Fn(Complex64) -> f64 + Sync,
    M: Fn(Complex64) -> f64 + Sync,
    Q: Fn(f64) -> f64 + Sync,
{
    let ys = opts.ordinates();
    if ys.is_empty() {
        return Err(crate::Error::EmptyGrid);
    }
    let jq = validate_q(&q, &ys)?;
    let rows = excess(&u, &m, &q, &ys, opts.quad)?;
    let mut worst = f64::NEG_INFINITY;
    let mut holds = Tri::Yes;
    let profile = rows
        .iter()
        .map(|&(y, e, err)| {
            let v = e - q(y);
            worst = worst.max(v);
            if v > opts.tolerance + err {
                holds = Tri::No;
            }
            ProfileRow::radial(y, v)
        })
        .collect();
    Ok(ConditionVerdict {
        holds,
        witness: Witness {
            c: Some(worst),
            y0: Some(opts.y0),
            value: Some(jq),
            ..Witness::default()
        },
        profile,
        stabilization: None,
        notes: Vec::new(),
    })
}

/// Slack in [`check_b3_c3`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum B3C3Mode {
    /// sublinear slack; the profile `slack / |y|` must fall below `threshold`
    B3 { threshold: f64 },
    /// `q(iy) = eps |y|`, hard inequality
    C3 { eps: f64 },
}

/// `U(iy) <= C_M(iy, q(iy)) + o(|y|)` (b3) or `U(iy) <= C_M(iy, eps|y|) +
/// eps |y|` (c3, where `q` is unused).
pub fn check_b3_c3<U, M, Q>(u: U, m: M, q: Q, mode: B3C3Mode, opts: &VerifyOptions) -> Result<ConditionVerdict>
where
    U: Fn(Complex64) -> f64 + Sync,
    M: Fn(Complex64) -> f64 + Sync,
    Q: Fn(f64) -> f64 + Sync,
{
    let ys = opts.ordinates();
    if ys.is_empty() {
        return Err(crate::Error::EmptyGrid);
    }
    match mode {
        B3C3Mode::B3 { threshold } => {
            if !(threshold > 0.0) {
                return Err(invalid("threshold must be positive"));
            }
            let ymax = ys.iter().map(|y| y.abs()).fold(0.0, f64::max);
            let tail: Vec<f64> = ys.iter().copied().filter(|y| y.abs() >= ymax.sqrt()).collect();
            if tail.iter().any(|&y| !(q(y) > 0.0) || q(y) / y.abs() > threshold) {
                return Err(invalid("q(iy) / |y| does not fall below the threshold on the tail"));
            }
            let rows = excess(&u, &m, &q, &ys, opts.quad)?;
            // slack s(y) = max(0, U - C_M); its ratio to |y| must shrink
            let mut by_abs: Vec<(f64, f64)> = rows
                .iter()
                .map(|&(y, e, err)| (y.abs(), (e - err - opts.tolerance).max(0.0) / y.abs()))
                .collect();
            by_abs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut env = by_abs.clone();
            for i in (0..env.len().saturating_sub(1)).rev() {
                env[i].1 = env[i].1.max(env[i + 1].1);
            }
            let end = env.last().map_or(0.0, |p| p.1);
            Ok(ConditionVerdict {
                holds: if end <= threshold { Tri::Yes } else { Tri::No },
                witness: Witness {
                    c: Some(end),
                    y0: Some(opts.y0),
                    m_table: env,
                    ..Witness::default()
                },
                profile: rows.iter().map(|&(y, e, _)| ProfileRow::radial(y, e)).collect(),
                stabilization: None,
                notes: Vec::new(),
            })
        }
        B3C3Mode::C3 { eps } => {
            if !(eps > 0.0) {
                return Err(invalid("eps must be positive"));
            }
            let qe = |y: f64| eps * y.abs();
            let rows = excess(&u, &m, &qe, &ys, opts.quad)?;
            let mut worst = f64::NEG_INFINITY;
            let mut holds = Tri::Yes;
            let profile = rows
                .iter()
                .map(|&(y, e, err)| {
                    let v = e - qe(y);
                    worst = worst.max(v);
                    if v > opts.tolerance + err {
                        holds = Tri::No;
                    }
                    ProfileRow::radial(y, v)
                })
                .collect();
            Ok(ConditionVerdict {
                holds,
                witness: Witness {
                    c: Some(worst),
                    y0: Some(opts.y0),
                    ..Witness::default()
                },
                profile,
                stabilization: None,
                notes: Vec::new(),
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct A1Report {
    pub verdict: ConditionVerdict,
    /// growth of `u + log|f|`, when a radius grid was given
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthReport>,
}

/// `u(iy) + log|f(iy)| <= B_M(iy, (1 + |y|)^-p)` at every sample; zeros of
/// `f` on the axis are excluded. `opts.y0` is ignored: all samples count.
pub fn check_a1_bound<U, M>(
    u: U,
    f: &CanonicalProduct,
    m: M,
    p: f64,
    opts: &VerifyOptions,
    growth_grid: Option<GridSpec>,
) -> Result<A1Report>
where
    U: Fn(Complex64) -> f64 + Sync,
    M: Fn(Complex64) -> f64 + Sync,
{
    if !(p >= 0.0) || !p.is_finite() {
        return Err(invalid("p must be finite and >= 0"));
    }
    let mut ys = opts.samples.clone();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    if ys.is_empty() {
        return Err(crate::Error::EmptyGrid);
    }
    let rows: Vec<Option<(f64, f64, f64)>> = ys
        .par_iter()
        .map(|&y| {
            let lf = f.log_abs(iy(y));
            if lf.hit_zero {
                return Ok(None);
            }
            let rad = (1.0 + y.abs()).powf(-p);
            let b = disk_mean(&m, iy(y), rad, opts.quad)?;
            Ok(Some((y, u(iy(y)) + lf.value - b.value, b.abs_error + lf.error_bound)))
        })
        .collect::<Result<_>>()?;
    let mut notes = Vec::new();
    let mut holds = Tri::Yes;
    let mut worst = f64::NEG_INFINITY;
    let mut profile = Vec::new();
    for (row, &y) in rows.iter().zip(&ys) {
        match row {
            None => notes.push(format!("sample y = {y} hits a zero of f and is excluded")),
            Some((y, v, err)) => {
                worst = worst.max(*v);
                if *v > opts.tolerance + err {
                    holds = Tri::No;
                }
                profile.push(ProfileRow::radial(*y, *v));
            }
        }
    }
    let growth = match growth_grid {
        Some(g) => Some(growth_report(
            |z| u(z) + f.log_abs(z).value,
            g,
            &[
                0.0,
                std::f64::consts::FRAC_PI_2,
                std::f64::consts::PI,
                1.5 * std::f64::consts::PI,
            ],
            720,
        )?),
        None => None,
    };
    Ok(A1Report {
        verdict: ConditionVerdict {
            holds,
            witness: Witness {
                c: Some(worst),
                ..Witness::default()
            },
            profile,
            stabilization: None,
            notes,
        },
        growth,
    })
}
