//! Decision procedures for the Blaschke-type conditions, separation from
//! the imaginary axis, interval-function comparisons and Kahane's outer
//! density condition.
//!
//! Every existential constant is replaced by an explicit fit over a finite
//! grid; a verdict of `yes` always means the fitted quantity passed the
//! stabilization rule of [`crate::numeric::stability`].

mod kahane;
mod lipschitz;

pub use kahane::{kahane_outer_density, KahaneOptions};
pub use lipschitz::{fit_lipschitz_k, FitOptions, PiecewiseLinear};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::logmetrics::{IntervalKind, IntervalLogs};
use crate::measures::{AtomicCharge, IntervalGrid};
use crate::numeric::stability::{stabilization, stabilize_profile, Extension, Stabilization, Tri, ABS_FLOOR};
use crate::numeric::sum::{pairwise_sum, Compensated};

/// One row of grid evidence. Radial profiles leave `big_r` empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    pub value: f64,
}

impl ProfileRow {
    pub fn radial(r: f64, value: f64) -> Self {
        Self { r, big_r: None, value }
    }

    pub fn pair(r: f64, big_r: f64, value: f64) -> Self {
        Self {
            r,
            big_r: Some(big_r),
            value,
        }
    }
}

/// Fitted constants; only the ones meaningful for the condition are set.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Witness {
    /// `C`: supremum of the profile (clamped at 0 for comparisons)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    /// `(eps, C_eps)`
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub eps_table: Vec<(f64, f64)>,
    /// `(r, m(r))`, the nonincreasing envelope
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m_table: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y0: Option<f64>,
    /// infimum for separation, total sum for Blaschke, `J` for Kahane
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lipschitz: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub holds: Tri,
    pub witness: Witness,
    pub profile: Vec<ProfileRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stabilization: Option<Stabilization>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ConditionVerdict {
    fn new(holds: Tri) -> Self {
        Self {
            holds,
            witness: Witness::default(),
            profile: Vec::new(),
            stabilization: None,
            notes: Vec::new(),
        }
    }
}

/// Whether an atomic charge is the whole measure or a truncation of an
/// infinite one. Only truncations need the stabilization rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extent {
    #[default]
    Sample,
    Finite,
}

fn check_r0(r0: f64) -> Result<()> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(invalid(format!("r0 must be positive, got {r0}")));
    }
    Ok(())
}

/// Radii `r0 * 2^k`, `k >= 1`, up to the first one reaching `rmax`.
fn dyadic_radii(r0: f64, rmax: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut rho = 2.0 * r0;
    loop {
        out.push(rho);
        if rho >= rmax {
            break;
        }
        rho *= 2.0;
    }
    out
}

/// Shell sums over `r0 < |z| <= rho` accumulated along dyadic radii.
fn shell_profile<T: Copy>(
    charge: &AtomicCharge,
    r0: f64,
    term: impl Fn(Complex64, f64) -> T,
    add: impl Fn(&mut Compensated, &mut Compensated, T),
    finish: impl Fn(&Compensated, &Compensated) -> f64,
) -> Vec<ProfileRow> {
    let mut atoms: Vec<(f64, T)> = charge
        .atoms()
        .iter()
        .filter(|a| a.modulus() > r0)
        .map(|a| (a.modulus(), term(a.z, a.mass)))
        .collect();
    if atoms.is_empty() {
        return vec![ProfileRow::radial(2.0 * r0, 0.0)];
    }
    atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let radii = dyadic_radii(r0, atoms.last().unwrap().0);
    let (mut s1, mut s2) = (Compensated::new(), Compensated::new());
    let mut idx = 0;
    radii
        .iter()
        .map(|&rho| {
            while idx < atoms.len() && atoms[idx].0 <= rho {
                add(&mut s1, &mut s2, atoms[idx].1);
                idx += 1;
            }
            ProfileRow::radial(rho, finish(&s1, &s2))
        })
        .collect()
}

fn bounded_verdict(profile: &[ProfileRow]) -> (Tri, Option<Stabilization>) {
    let samples: Vec<(f64, f64)> = profile.iter().map(|p| (p.r, p.value)).collect();
    let s = stabilize_profile(&samples, Extension::LogDyadic);
    (s.map_or(Tri::Yes, |s| s.verdict), s)
}

fn sup(profile: &[ProfileRow]) -> f64 {
    profile.iter().map(|p| p.value).fold(0.0, f64::max)
}

/// `integral over |z| > r0 of |Re 1/z| d|mu|` as a truncated atom sum.
pub fn blaschke(charge: &AtomicCharge, r0: f64) -> Result<ConditionVerdict> {
    blaschke_with(charge, r0, Extent::Sample)
}

pub fn blaschke_with(charge: &AtomicCharge, r0: f64, extent: Extent) -> Result<ConditionVerdict> {
    check_r0(r0)?;
    let profile = shell_profile(
        charge,
        r0,
        |z, m| z.inv().re.abs() * m.abs(),
        |s, _, t| s.add(t),
        |s, _| s.value(),
    );
    let total = profile.last().map_or(0.0, |p| p.value);
    let mut out = ConditionVerdict::new(Tri::Yes);
    out.witness.value = Some(total);
    if extent == Extent::Finite {
        out.notes
            .push("finite charge: the tail beyond the largest atom is empty".into());
    } else if total <= ABS_FLOOR {
        out.notes.push("sum vanishes".into());
    } else {
        let n = profile.len();
        let last_step = if n >= 2 {
            profile[n - 1].value - profile[n - 2].value
        } else {
            total
        };
        if last_step <= ABS_FLOOR {
            out.notes.push("last dyadic increment below 1e-9".into());
        } else {
            let (v, s) = bounded_verdict(&profile);
            out.holds = v;
            out.stabilization = s;
        }
    }
    out.profile = profile;
    Ok(out)
}

/// `| integral over r0 < |z| <= r of |Re 1/z| d nu |` with the signed
/// masses of `nu` inside the modulus.
pub fn weak_blaschke_genus1(charge: &AtomicCharge, r0: f64) -> Result<ConditionVerdict> {
    check_r0(r0)?;
    let profile = shell_profile(
        charge,
        r0,
        |z, m| z.inv().re.abs() * m,
        |s, _, t| s.add(t),
        |s, _| s.value().abs(),
    );
    Ok(bounded(profile))
}

/// `| sum over r0 < |z| <= r of mass / z |`.
pub fn lindelof_genus1(charge: &AtomicCharge, r0: f64) -> Result<ConditionVerdict> {
    check_r0(r0)?;
    let profile = shell_profile(
        charge,
        r0,
        |z, m| z.inv() * m,
        |re, im, t: Complex64| {
            re.add(t.re);
            im.add(t.im);
        },
        |re, im| Complex64::new(re.value(), im.value()).norm(),
    );
    Ok(bounded(profile))
}

fn bounded(profile: Vec<ProfileRow>) -> ConditionVerdict {
    let (holds, s) = bounded_verdict(&profile);
    let mut out = ConditionVerdict::new(holds);
    out.witness.c = Some(sup(&profile));
    out.stabilization = s;
    out.profile = profile;
    out
}

/// `inf |Re z| / |z|` over atoms with `|z| >= tail_radius`. The infimum
/// must not drop by more than the factor 1.2 between the atoms up to
/// `sqrt(tail * Rmax)` and all atoms.
pub fn separated_from_axis(charge: &AtomicCharge, tail_radius: f64) -> ConditionVerdict {
    let mut rows: Vec<ProfileRow> = charge
        .atoms()
        .iter()
        .filter(|a| a.modulus() >= tail_radius && a.modulus() > 0.0)
        .map(|a| ProfileRow::radial(a.modulus(), a.z.re.abs() / a.modulus()))
        .collect();
    rows.sort_by(|a, b| a.r.total_cmp(&b.r));
    let mut out = ConditionVerdict::new(Tri::Yes);
    if rows.is_empty() {
        out.notes.push("no atoms beyond the tail radius".into());
        return out;
    }
    let rmax = rows.last().unwrap().r;
    let cut = Extension::LogDyadic.base_end(tail_radius.max(rows[0].r), rmax);
    let inf_full = rows.iter().map(|p| p.value).fold(f64::INFINITY, f64::min);
    let inf_half = rows
        .iter()
        .filter(|p| p.r <= cut)
        .map(|p| p.value)
        .fold(f64::INFINITY, f64::min);
    let inf_half = if inf_half.is_finite() { inf_half } else { inf_full };
    out.holds = if inf_full > 0.0 && inf_full * 1.2 >= inf_half {
        Tri::Yes
    } else {
        Tri::No
    };
    out.witness.value = Some(inf_full);
    out.profile = rows;
    out
}

/// Slack subtracted from `l_Z - l_W` in [`mr_compare`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Slack {
    None,
    BLog(f64),
    Eps(Vec<f64>),
    /// `m(r) log(R/r)` with `m` fitted; `threshold` bounds `m` at the end
    Vanishing {
        threshold: f64,
    },
}

impl Slack {
    pub fn vanishing() -> Self {
        Slack::Vanishing { threshold: 0.05 }
    }
}

/// `R/r` below this ratio is too short to resolve a slope `m(r)`.
const M_FIT_MIN_RATIO: f64 = 10.0;

fn sup_stabilization(grid: &IntervalGrid, g: &[f64]) -> (f64, Stabilization) {
    let cut = Extension::LogDyadic.base_end(grid.r_min(), grid.big_r_max());
    let mut base = f64::NEG_INFINITY;
    let mut full = f64::NEG_INFINITY;
    for (&(_, big_r), &v) in grid.pairs().iter().zip(g) {
        full = full.max(v);
        if big_r <= cut {
            base = base.max(v);
        }
    }
    let s = stabilization(base.max(0.0), full.max(0.0));
    (full.max(0.0), s)
}

/// `G(r,R) = l_Z(r,R) - l_W(r,R) - slack(r,R)` over the grid, with `l` the
/// interval function chosen by `kind`.
pub fn mr_compare(
    z: &AtomicCharge,
    w: &AtomicCharge,
    grid: &IntervalGrid,
    slack: &Slack,
    kind: IntervalKind,
) -> Result<ConditionVerdict> {
    match slack {
        Slack::BLog(b) if !(*b >= 0.0) => return Err(invalid("b must be >= 0")),
        Slack::Eps(eps) if eps.is_empty() || eps.iter().any(|e| !(*e > 0.0)) => {
            return Err(invalid("eps values must be > 0"))
        }
        Slack::Vanishing { threshold } if !(*threshold > 0.0) => return Err(invalid("threshold must be > 0")),
        _ => {}
    }
    if grid.is_empty() {
        return Err(crate::Error::EmptyGrid);
    }
    let lz = IntervalLogs::new(z);
    let lw = IntervalLogs::new(w);
    let gap: Vec<f64> = grid
        .pairs()
        .iter()
        .map(|&(r, big_r)| lz.eval(kind, r, big_r) - lw.eval(kind, r, big_r))
        .collect();
    let logs: Vec<f64> = grid.pairs().iter().map(|&(r, big_r)| (big_r / r).ln()).collect();
    let with_slope = |b: f64| -> Vec<f64> { gap.iter().zip(&logs).map(|(g, l)| g - b * l).collect() };

    let mut out = ConditionVerdict::new(Tri::Yes);
    match slack {
        Slack::None | Slack::BLog(_) => {
            let b = if let Slack::BLog(b) = slack { *b } else { 0.0 };
            let g = with_slope(b);
            let (c, s) = sup_stabilization(grid, &g);
            out.holds = s.verdict;
            out.stabilization = Some(s);
            out.witness.c = Some(c);
            if matches!(slack, Slack::BLog(_)) {
                out.witness.b = Some(b);
            }
            out.profile = rows(grid, &g);
        }
        Slack::Eps(eps) => {
            let mut holds = Tri::Yes;
            for &e in eps {
                let (c, s) = sup_stabilization(grid, &with_slope(e));
                holds = holds.and(s.verdict);
                out.witness.eps_table.push((e, c));
            }
            out.holds = holds;
            out.profile = rows(grid, &gap);
        }
        Slack::Vanishing { threshold } => {
            // m(r) = sup over R with R/r >= 10 of gap / log(R/r)
            let mut m_raw: Vec<(f64, f64)> = Vec::new();
            for ((&(r, _), g), l) in grid.pairs().iter().zip(&gap).zip(&logs) {
                if *l < M_FIT_MIN_RATIO.ln() {
                    continue;
                }
                let v = (g / l).max(0.0);
                match m_raw.last_mut() {
                    Some(last) if last.0 == r => last.1 = last.1.max(v),
                    _ => m_raw.push((r, v)),
                }
            }
            if m_raw.is_empty() {
                return Err(invalid("grid has no pairs with R/r >= 10 to fit m(r)"));
            }
            m_raw.sort_by(|a, b| a.0.total_cmp(&b.0));
            // nonincreasing envelope from the right
            let mut env = m_raw.clone();
            for i in (0..env.len().saturating_sub(1)).rev() {
                env[i].1 = env[i].1.max(env[i + 1].1);
            }
            let m_at = |r: f64| {
                let k = env.partition_point(|p| p.0 <= r);
                if k == 0 {
                    env[0].1
                } else {
                    env[k - 1].1
                }
            };
            let residual: Vec<f64> = grid
                .pairs()
                .iter()
                .zip(&gap)
                .zip(&logs)
                .map(|((&(r, _), g), l)| g - m_at(r) * l)
                .collect();
            let (c, s) = sup_stabilization(grid, &residual);
            let m_end = env.last().unwrap().1;
            out.holds = if m_end < *threshold { s.verdict } else { Tri::No };
            out.witness.c = Some(c);
            out.witness.m_table = env;
            out.stabilization = Some(s);
            out.profile = rows(grid, &residual);
        }
    }
    Ok(out)
}

fn rows(grid: &IntervalGrid, values: &[f64]) -> Vec<ProfileRow> {
    grid.pairs()
        .iter()
        .zip(values)
        .map(|(&(r, big_r), &v)| ProfileRow::pair(r, big_r, v))
        .collect()
}

/// Pairwise total of `value` over a profile, for reproducing witnesses.
pub fn profile_sum(profile: &[ProfileRow]) -> f64 {
    pairwise_sum(&profile.iter().map(|p| p.value).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Divisor, GridSpec};

    fn pts(it: impl IntoIterator<Item = Complex64>) -> AtomicCharge {
        Divisor::from_points(it).unwrap().to_charge()
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn naturals(n: u32) -> AtomicCharge {
        pts((1..=n).map(|k| re(k.into())))
    }

    #[test]
    fn blaschke_examples() {
        let imag = pts((1..=100).map(|k| Complex64::new(0.0, k.into())));
        assert_eq!(blaschke(&imag, 1.0).unwrap().holds, Tri::Yes);

        let squares = pts((1..=1000).map(|k: u32| re(f64::from(k * k))));
        let v = blaschke(&squares, 1.0).unwrap();
        assert_eq!(v.holds, Tri::Yes, "{:?}", v.stabilization);

        let n = naturals(10_000);
        let v = blaschke(&n, 1.0).unwrap();
        assert_eq!(v.holds, Tri::No);
        // sum over 1 < k <= N of 1/k
        let h: f64 = (2..=10_000).map(|k| 1.0 / f64::from(k)).sum();
        assert!((v.witness.value.unwrap() - h).abs() < 1e-10);
        assert_eq!(blaschke_with(&n, 1.0, Extent::Finite).unwrap().holds, Tri::Yes);
        assert!(blaschke(&n, 0.0).is_err());
    }

    #[test]
    fn weak_blaschke_and_lindelof_examples() {
        let anti = AtomicCharge::from_pairs((1..=1000).flat_map(|k| [(re(k.into()), 1.0), (re(-f64::from(k)), -1.0)]))
            .unwrap();
        assert_eq!(weak_blaschke_genus1(&anti, 1.0).unwrap().holds, Tri::Yes);
        let n = naturals(10_000);
        assert_eq!(weak_blaschke_genus1(&n, 1.0).unwrap().holds, Tri::No);
        assert_eq!(lindelof_genus1(&n, 1.0).unwrap().holds, Tri::No);

        let sym = pts((1..=1000).flat_map(|k| [re(k.into()), re(-f64::from(k))]));
        assert_eq!(lindelof_genus1(&sym, 1.0).unwrap().holds, Tri::Yes);
        let imag = pts((1..=1000).flat_map(|k| [Complex64::new(0.0, k.into()), Complex64::new(0.0, -f64::from(k))]));
        assert_eq!(lindelof_genus1(&imag, 1.0).unwrap().holds, Tri::Yes);
        assert_eq!(weak_blaschke_genus1(&imag, 1.0).unwrap().holds, Tri::Yes);
    }

    #[test]
    fn separation_examples() {
        let v = separated_from_axis(&naturals(100), 1.0);
        assert_eq!(v.holds, Tri::Yes);
        assert_eq!(v.witness.value, Some(1.0));

        let parab = pts((1..=1000).map(|k| Complex64::new(k.into(), f64::from(k * k))));
        assert_eq!(separated_from_axis(&parab, 1.0).holds, Tri::No);

        let ray = pts((1..=1000).map(|k| Complex64::from_polar(k.into(), std::f64::consts::FRAC_PI_6)));
        let v = separated_from_axis(&ray, 1.0);
        assert_eq!(v.holds, Tri::Yes);
        assert!((v.witness.value.unwrap() - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    fn grid() -> IntervalGrid {
        IntervalGrid::geometric(GridSpec::new(1.0, 1e4, 1.25)).unwrap()
    }

    #[test]
    fn mr_compare_examples() {
        let n = naturals(20_000);
        let even = pts((1..=10_000).map(|k| re(2.0 * f64::from(k))));
        for kind in [IntervalKind::Log, IntervalKind::Bar] {
            let v = mr_compare(&even, &n, &grid(), &Slack::None, kind).unwrap();
            assert_eq!(v.holds, Tri::Yes, "{kind:?}");
            assert_eq!(v.witness.c, Some(0.0));

            let v = mr_compare(&n, &even, &grid(), &Slack::None, kind).unwrap();
            assert_eq!(v.holds, Tri::No, "{kind:?}");

            let v = mr_compare(&n, &AtomicCharge::empty(), &grid(), &Slack::BLog(1.0), kind).unwrap();
            assert_eq!(v.holds, Tri::Yes, "{kind:?}");
            assert!(v.witness.c.unwrap() <= 1.0);
        }
        let v = mr_compare(&n, &n, &grid(), &Slack::None, IntervalKind::Log).unwrap();
        assert_eq!((v.holds, v.witness.c), (Tri::Yes, Some(0.0)));
        assert!(mr_compare(&n, &n, &grid(), &Slack::Eps(vec![0.0]), IntervalKind::Log).is_err());
        assert!(mr_compare(&n, &n, &grid(), &Slack::BLog(-1.0), IntervalKind::Log).is_err());
    }

    #[test]
    fn mr_compare_eps_and_vanishing() {
        let n = naturals(20_000);
        let even = pts((1..=10_000).map(|k| re(2.0 * f64::from(k))));
        let v = mr_compare(&n, &even, &grid(), &Slack::Eps(vec![0.6, 1.0]), IntervalKind::Log).unwrap();
        assert_eq!(v.holds, Tri::Yes);
        assert_eq!(v.witness.eps_table.len(), 2);
        let v = mr_compare(&n, &even, &grid(), &Slack::Eps(vec![0.2]), IntervalKind::Log).unwrap();
        assert_eq!(v.holds, Tri::No);

        let v = mr_compare(&even, &n, &grid(), &Slack::vanishing(), IntervalKind::Log).unwrap();
        assert_eq!(v.holds, Tri::Yes);
        assert!(v.witness.m_table.windows(2).all(|w| w[1].1 <= w[0].1));
        let v = mr_compare(&n, &even, &grid(), &Slack::vanishing(), IntervalKind::Log).unwrap();
        assert_eq!(v.holds, Tri::No);
    }
}
