//! Characteristic logarithms, weighted counting functions, logarithmic
//! interval functions `l`, `l-bar`, block densities and the logarithmic
//! integrals `J`.
//!
//! Arguments of atoms are taken in `[-pi/2, 3pi/2)`, so `cos(arg z)` is
//! positive exactly on the open right half-plane. Atoms on the imaginary
//! axis have weight zero for both `cos+` and `cos-`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::measures::{upper_density_profile, AtomicCharge, GridSpec, IntervalGrid};
use crate::numeric::quad::{integrate, integrate_with_breaks, Integral, QuadOptions};
use crate::numeric::stability::{stabilization, stabilize_profile, Extension, Stabilization, Tri};
use crate::numeric::sum::{pairwise_sum, Compensated};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    CosPlus,
    CosMinus,
}

impl Weight {
    /// `cos+(arg z)` or `cos-(arg z)`; zero at the origin.
    pub fn of(self, z: Complex64) -> f64 {
        let m = z.norm();
        if m == 0.0 {
            return 0.0;
        }
        let c = z.re / m;
        match self {
            Weight::CosPlus => c.max(0.0),
            Weight::CosMinus => (-c).max(0.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn weight(self) -> Weight {
        match self {
            Side::Right => Weight::CosPlus,
            Side::Left => Weight::CosMinus,
        }
    }
}

/// `mu(r; k) = integral over the closed disk of k(arg z) d mu(z)`.
pub fn weighted_count(charge: &AtomicCharge, r: f64, weight: Weight) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(invalid("radius must be >= 0"));
    }
    if charge.has_atom_at_origin() {
        return Err(Error::AtomAtOrigin);
    }
    let terms: Vec<f64> = charge
        .atoms()
        .iter()
        .filter(|a| a.modulus() <= r)
        .map(|a| a.mass * weight.of(a.z))
        .collect();
    Ok(pairwise_sum(&terms))
}

/// Sorted radial data of a charge with compensated prefix sums, so every
/// interval function costs two binary searches.
#[derive(Debug, Clone)]
pub struct IntervalLogs {
    radii: Vec<f64>,
    // prefix[i] = sum over the first i atoms (by modulus)
    right: Vec<f64>,
    left: Vec<f64>,
    count_plus: Vec<f64>,
    count_minus: Vec<f64>,
}

impl IntervalLogs {
    /// Atoms at the origin are skipped: they lie outside every `r < |z|`
    /// shell and carry no angular weight.
    pub fn new(charge: &AtomicCharge) -> Self {
        let mut rows: Vec<(f64, f64, f64, f64, f64)> = charge
            .atoms()
            .iter()
            .filter(|a| a.modulus() > 0.0)
            .map(|a| {
                let inv = a.z.inv().re * a.mass;
                let (rt, lf) = if a.z.re > 0.0 {
                    (inv, 0.0)
                } else if a.z.re < 0.0 {
                    (0.0, -inv)
                } else {
                    (0.0, 0.0)
                };
                (
                    a.modulus(),
                    rt,
                    lf,
                    a.mass * Weight::CosPlus.of(a.z),
                    a.mass * Weight::CosMinus.of(a.z),
                )
            })
            .collect();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        let n = rows.len();
        let mut out = Self {
            radii: Vec::with_capacity(n),
            right: Vec::with_capacity(n + 1),
            left: Vec::with_capacity(n + 1),
            count_plus: Vec::with_capacity(n + 1),
            count_minus: Vec::with_capacity(n + 1),
        };
        let mut acc = [Compensated::new(); 4];
        out.right.push(0.0);
        out.left.push(0.0);
        out.count_plus.push(0.0);
        out.count_minus.push(0.0);
        for (m, rt, lf, cp, cm) in rows {
            out.radii.push(m);
            acc[0].add(rt);
            acc[1].add(lf);
            acc[2].add(cp);
            acc[3].add(cm);
            out.right.push(acc[0].value());
            out.left.push(acc[1].value());
            out.count_plus.push(acc[2].value());
            out.count_minus.push(acc[3].value());
        }
        out
    }

    /// Number of atoms with modulus `<= t`.
    fn rank(&self, t: f64) -> usize {
        self.radii.partition_point(|&m| m <= t)
    }

    fn check(r: f64, big_r: f64) -> bool {
        r > 0.0 && big_r > r
    }

    /// `l^right(r, R)`; zero when `r >= R`.
    pub fn right(&self, r: f64, big_r: f64) -> f64 {
        if !Self::check(r, big_r) {
            return 0.0;
        }
        self.right[self.rank(big_r)] - self.right[self.rank(r)]
    }

    pub fn left(&self, r: f64, big_r: f64) -> f64 {
        if !Self::check(r, big_r) {
            return 0.0;
        }
        self.left[self.rank(big_r)] - self.left[self.rank(r)]
    }

    pub fn side(&self, side: Side, r: f64, big_r: f64) -> f64 {
        match side {
            Side::Right => self.right(r, big_r),
            Side::Left => self.left(r, big_r),
        }
    }

    /// `l(r, R) = max(l^left, l^right)`.
    pub fn log(&self, r: f64, big_r: f64) -> f64 {
        self.left(r, big_r).max(self.right(r, big_r))
    }

    /// `mu(t; cos+-)`.
    pub fn count(&self, t: f64, weight: Weight) -> f64 {
        let k = self.rank(t);
        match weight {
            Weight::CosPlus => self.count_plus[k],
            Weight::CosMinus => self.count_minus[k],
        }
    }

    /// `integral_r^R mu(t; k) / t^2 dt`, exact for the step function
    /// `mu(t; k)`: atoms inside `r` contribute `1/r - 1/R`, atoms in the
    /// shell `1/|z| - 1/R`.
    pub fn bar_side(&self, side: Side, r: f64, big_r: f64) -> f64 {
        if !Self::check(r, big_r) {
            return 0.0;
        }
        let w = side.weight();
        let inner = self.count(r, w);
        let outer = self.count(big_r, w);
        // sum over the shell of c_z / |z| equals l^side over the shell
        let shell_over_modulus = self.side(side, r, big_r);
        inner * (1.0 / r - 1.0 / big_r) + shell_over_modulus - (outer - inner) / big_r
    }

    /// `l-bar(r, R)`.
    pub fn bar(&self, r: f64, big_r: f64) -> f64 {
        self.bar_side(Side::Left, r, big_r)
            .max(self.bar_side(Side::Right, r, big_r))
    }

    pub fn eval(&self, kind: IntervalKind, r: f64, big_r: f64) -> f64 {
        match kind {
            IntervalKind::Right => self.right(r, big_r),
            IntervalKind::Left => self.left(r, big_r),
            IntervalKind::Log => self.log(r, big_r),
            IntervalKind::BarRight => self.bar_side(Side::Right, r, big_r),
            IntervalKind::BarLeft => self.bar_side(Side::Left, r, big_r),
            IntervalKind::Bar => self.bar(r, big_r),
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.radii.last().copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntervalKind {
    Right,
    Left,
    /// `max(l^left, l^right)`
    Log,
    BarRight,
    BarLeft,
    /// `max` of the two weighted-count integrals
    Bar,
}

/// A function of intervals `(r, R)`, `0 < r < R`.
pub trait IntervalFunction {
    fn eval(&self, r: f64, big_r: f64) -> f64;
}

/// One of the interval functions of a charge.
#[derive(Debug, Clone)]
pub struct IntervalFn {
    logs: Arc<IntervalLogs>,
    kind: IntervalKind,
}

impl IntervalFn {
    pub fn new(logs: Arc<IntervalLogs>, kind: IntervalKind) -> Self {
        Self { logs, kind }
    }

    pub fn kind(&self) -> IntervalKind {
        self.kind
    }
}

impl IntervalFunction for IntervalFn {
    fn eval(&self, r: f64, big_r: f64) -> f64 {
        self.logs.eval(self.kind, r, big_r)
    }
}

impl<F: Fn(f64, f64) -> f64> IntervalFunction for F {
    fn eval(&self, r: f64, big_r: f64) -> f64 {
        self(r, big_r)
    }
}

pub fn char_log_right(charge: &AtomicCharge) -> IntervalFn {
    IntervalFn::new(Arc::new(IntervalLogs::new(charge)), IntervalKind::Right)
}

pub fn char_log_left(charge: &AtomicCharge) -> IntervalFn {
    IntervalFn::new(Arc::new(IntervalLogs::new(charge)), IntervalKind::Left)
}

pub fn interval_log(charge: &AtomicCharge) -> IntervalFn {
    IntervalFn::new(Arc::new(IntervalLogs::new(charge)), IntervalKind::Log)
}

pub fn interval_log_bar(charge: &AtomicCharge) -> IntervalFn {
    IntervalFn::new(Arc::new(IntervalLogs::new(charge)), IntervalKind::Bar)
}

/// `|l^side(r,R) - [mu(R)/R - mu(r)/r + integral_r^R mu(t)/t^2 dt]|`.
///
/// Computed independently of [`IntervalLogs`]: the left side is a direct
/// sum over the shell, the integral is accumulated piece by piece between
/// consecutive atom radii.
pub fn ibp_residual(charge: &AtomicCharge, r: f64, big_r: f64, side: Side) -> Result<f64> {
    if !(r > 0.0 && big_r > r && big_r.is_finite()) {
        return Err(invalid("ibp_residual needs 0 < r < R < inf"));
    }
    let w = side.weight();
    let lhs: Vec<f64> = charge
        .atoms()
        .iter()
        .filter(|a| {
            let m = a.modulus();
            m > r && m <= big_r
        })
        .map(|a| {
            let re = a.z.inv().re;
            match side {
                Side::Right if a.z.re > 0.0 => a.mass * re,
                Side::Left if a.z.re < 0.0 => -a.mass * re,
                _ => 0.0,
            }
        })
        .collect();
    let lhs = pairwise_sum(&lhs);

    let count_at = |t: f64| weighted_count(charge, t, w);
    let mu_r = count_at(r)?;
    let mu_big = count_at(big_r)?;

    // breakpoints of the step function inside (r, R)
    let mut breaks: Vec<f64> = charge
        .atoms()
        .iter()
        .map(|a| a.modulus())
        .filter(|&m| m > r && m < big_r)
        .collect();
    breaks.push(r);
    breaks.push(big_r);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut pieces = Vec::with_capacity(breaks.len());
    for win in breaks.windows(2) {
        let (a, b) = (win[0], win[1]);
        // mu is constant on [a, b) and equals its value at a
        let level = count_at(a)?;
        pieces.push(level * (1.0 / a - 1.0 / b));
    }
    let integral = pairwise_sum(&pieces);
    Ok((lhs - (mu_big / big_r - mu_r / r + integral)).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityVariant {
    /// outer limsup over `a` of `limsup_r l(r, ar) / log a`
    LimsupLog,
    /// infimum over `a` of the same
    InfLog,
    /// least `b` with `l(r,R) <= b log(R/r) + C_b`
    BestB,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityParams {
    pub grid: GridSpec,
    /// ratios `a > 1` for the `l(r, ar)` variants
    pub a_values: Vec<f64>,
    /// bisection tolerance on `b`
    pub b_tol: f64,
    pub kind: IntervalKind,
}

impl Default for DensityParams {
    fn default() -> Self {
        Self {
            grid: GridSpec::new(1.0, 1e6, 1.25),
            a_values: (2..=10).map(|k| 2f64.powi(k)).collect(),
            b_tol: 1e-3,
            kind: IntervalKind::Log,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub variant: DensityVariant,
    pub value: f64,
    pub params: DensityParams,
    /// `(a, tail sup of l(r, ar) / log a)`
    pub per_a: Vec<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<BFit>,
    pub upper_density: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BFit {
    pub b: f64,
    pub c_b: f64,
    pub stabilization: Stabilization,
}

fn per_a_profile(logs: &IntervalLogs, kind: IntervalKind, pts: &[f64], a_values: &[f64]) -> Vec<(f64, f64)> {
    let rmax = *pts.last().unwrap();
    let mut out = Vec::new();
    for &a in a_values {
        let eligible: Vec<f64> = pts.iter().copied().filter(|&r| a * r <= rmax).collect();
        if eligible.is_empty() {
            continue;
        }
        let cut = Extension::LogDyadic.base_end(eligible[0], *eligible.last().unwrap());
        let sup = eligible
            .iter()
            .filter(|&&r| r >= cut)
            .map(|&r| logs.eval(kind, r, a * r) / a.ln())
            .fold(f64::NEG_INFINITY, f64::max);
        out.push((a, sup));
    }
    out
}

/// `C_b = sup over the grid of l(r,R) - b log(R/r)`, together with the
/// stabilization of that supremum under log-dyadic extension of the grid.
pub fn fit_c_b(logs: &IntervalLogs, kind: IntervalKind, grid: &IntervalGrid, b: f64) -> (f64, Stabilization) {
    let cut = Extension::LogDyadic.base_end(grid.r_min(), grid.big_r_max());
    let mut base = f64::NEG_INFINITY;
    let mut full = f64::NEG_INFINITY;
    for &(r, big_r) in grid.pairs() {
        let g = logs.eval(kind, r, big_r) - b * (big_r / r).ln();
        full = full.max(g);
        if big_r <= cut {
            base = base.max(g);
        }
    }
    (full, stabilization(base, full))
}

fn best_b(logs: &IntervalLogs, kind: IntervalKind, grid: &IntervalGrid, tol: f64) -> BFit {
    let feasible = |b: f64| fit_c_b(logs, kind, grid, b).1.verdict == Tri::Yes;
    let make = |b: f64| {
        let (c_b, stabilization) = fit_c_b(logs, kind, grid, b);
        BFit { b, c_b, stabilization }
    };
    if feasible(0.0) {
        return make(0.0);
    }
    let mut hi = 1.0;
    while !feasible(hi) && hi < 1e9 {
        hi *= 2.0;
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    make(hi)
}

/// Logarithmic block density of a divisor (given as its counting charge).
pub fn block_density(charge: &AtomicCharge, variant: DensityVariant, params: &DensityParams) -> Result<DensityReport> {
    let pts = params.grid.points()?;
    if pts.len() < 2 {
        return Err(Error::EmptyGrid);
    }
    if params.a_values.iter().any(|a| !(*a > 1.0)) {
        return Err(invalid("density ratios a must exceed 1"));
    }
    let logs = IntervalLogs::new(charge);
    let density = upper_density_profile(charge, &pts)?;
    let samples: Vec<(f64, f64)> = density
        .radii
        .iter()
        .copied()
        .zip(density.values.iter().copied())
        .collect();
    let warning = match stabilize_profile(&samples, Extension::Dyadic).map(|s| s.verdict) {
        Some(Tri::Yes) => None,
        _ => Some("upper density does not stabilize on the grid; densities may be meaningless".to_string()),
    };

    let mut a_values = params.a_values.clone();
    a_values.sort_by(f64::total_cmp);
    let per_a = per_a_profile(&logs, params.kind, &pts, &a_values);

    let (value, fit) = match variant {
        DensityVariant::LimsupLog | DensityVariant::InfLog => {
            if per_a.is_empty() {
                return Err(Error::EmptyGrid);
            }
            let v = if variant == DensityVariant::LimsupLog {
                let start = per_a.len() / 2;
                per_a[start..].iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
            } else {
                per_a.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
            };
            (v, None)
        }
        DensityVariant::BestB => {
            let grid = IntervalGrid::geometric(params.grid)?;
            let fit = best_b(&logs, params.kind, &grid, params.b_tol);
            (fit.b, Some(fit))
        }
    };
    Ok(DensityReport {
        variant,
        value,
        params: params.clone(),
        per_a,
        fit,
        upper_density: density.tail_sup,
        warning,
    })
}

/// `J(r, R; v) = integral_r^R (v(-iy) + v(iy)) / y^2 dy`, with `v` given as
/// a function of the ordinate `y`.
pub fn j_interval<V: Fn(f64) -> f64>(v: V, r: f64, big_r: f64, opts: QuadOptions) -> Result<Integral> {
    if !(r > 0.0 && big_r > r) {
        return Err(invalid("J needs 0 < r < R"));
    }
    let f = |y: f64| (v(-y) + v(y)) / (y * y);
    if big_r.is_infinite() {
        // y = r / t maps (r, inf) to (0, 1)
        let g = |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            let y = r / t;
            (v(-y) + v(y)) / r
        };
        return Ok(integrate(g, 0.0, 1.0, opts));
    }
    Ok(integrate_with_breaks(f, &[r, big_r], opts))
}

/// `J(v) = J(1, inf; v)` via `t = 1/y`.
pub fn j_tail<V: Fn(f64) -> f64>(v: V, opts: QuadOptions) -> Integral {
    j_interval(v, 1.0, f64::INFINITY, opts).expect("valid range")
}

#[derive(Debug, Clone, Serialize)]
pub struct LemJPoint {
    pub r: f64,
    pub big_r: f64,
    pub j: f64,
    pub l_right: f64,
    pub l_left: f64,
    /// `|J - l^right| + |J - l^left|`
    pub discrepancy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemJProfile {
    pub points: Vec<LemJPoint>,
    pub stabilization: Option<Stabilization>,
    pub quadrature_converged: bool,
    /// always set: `J` and `l` may differ by a normalization constant
    pub note: String,
}

/// Profile of `|J(r,R;u) - l^right(r,R)| + |J(r,R;u) - l^left(r,R)|` over a
/// grid. `charge` is the Riesz measure of `u`. No boundedness claim is made;
/// the stabilization verdict is informational.
pub fn lemj_diagnostic<U>(u: U, charge: &AtomicCharge, grid: &IntervalGrid, opts: QuadOptions) -> Result<LemJProfile>
where
    U: Fn(Complex64) -> f64 + Sync,
{
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let logs = IntervalLogs::new(charge);
    let mut pts: Vec<f64> = grid.pairs().iter().flat_map(|p| [p.0, p.1]).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let v = |y: f64| u(Complex64::new(0.0, y));
    let pieces: Vec<Integral> = pts
        .par_windows(2)
        .map(|w| j_interval(v, w[0], w[1], opts).expect("ordered"))
        .collect();
    let mut cumulative = vec![0.0];
    let mut acc = Compensated::new();
    for p in &pieces {
        acc.add(p.value);
        cumulative.push(acc.value());
    }
    let index = |x: f64| pts.partition_point(|&p| p < x);
    let points: Vec<LemJPoint> = grid
        .pairs()
        .iter()
        .map(|&(r, big_r)| {
            let j = cumulative[index(big_r)] - cumulative[index(r)];
            let l_right = logs.right(r, big_r);
            let l_left = logs.left(r, big_r);
            LemJPoint {
                r,
                big_r,
                j,
                l_right,
                l_left,
                discrepancy: (j - l_right).abs() + (j - l_left).abs(),
            }
        })
        .collect();
    let samples: Vec<(f64, f64)> = points.iter().map(|p| (p.big_r, p.discrepancy)).collect();
    Ok(LemJProfile {
        stabilization: stabilize_profile(&samples, Extension::LogDyadic),
        quadrature_converged: pieces.iter().all(|p| p.converged),
        points,
        note: "raw differences; J and l are not normalized against each other".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Divisor;

    fn real_points(points: impl IntoIterator<Item = f64>) -> AtomicCharge {
        Divisor::from_points(points.into_iter().map(|x| Complex64::new(x, 0.0)))
            .unwrap()
            .to_charge()
    }

    fn harmonic(a: u64, b: u64) -> f64 {
        (a..=b).map(|k| 1.0 / k as f64).sum()
    }

    #[test]
    fn weighted_count_examples() {
        let z = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let q = AtomicCharge::from_pairs([(z, 1.0)]).unwrap();
        let expect = std::f64::consts::FRAC_PI_4.cos();
        let got = weighted_count(&q, 1.0 + 1e-15, Weight::CosPlus).unwrap();
        assert!((got - expect).abs() < 1e-15);

        let q = AtomicCharge::from_pairs([
            (Complex64::new(1.0, 0.0), 1.0),
            (Complex64::new(0.0, 1.0), 1.0),
            (Complex64::new(-1.0, 0.0), 1.0),
        ])
        .unwrap();
        assert_eq!(weighted_count(&q, 2.0, Weight::CosPlus).unwrap(), 1.0);
        let q = AtomicCharge::from_pairs([(Complex64::new(-1.0, 0.0), 1.0)]).unwrap();
        assert_eq!(weighted_count(&q, 2.0, Weight::CosMinus).unwrap(), 1.0);

        let origin = AtomicCharge::from_pairs([(Complex64::new(0.0, 0.0), 1.0)]).unwrap();
        assert!(matches!(
            weighted_count(&origin, 1.0, Weight::CosPlus),
            Err(Error::AtomAtOrigin)
        ));
    }

    #[test]
    fn characteristic_log_examples() {
        let n = real_points((1..=20).map(f64::from));
        let l = interval_log(&n);
        let oracle = harmonic(2, 10);
        assert!((char_log_right(&n).eval(1.0, 10.0) - oracle).abs() < 1e-14);
        assert!((oracle - 1.928_968_3).abs() < 1e-7);
        assert!((l.eval(1.0, 10.0) - oracle).abs() < 1e-14);
        assert_eq!(char_log_left(&n).eval(1.0, 10.0), 0.0);

        let even = real_points((1..=10).map(|k| 2.0 * f64::from(k)));
        let oracle: f64 = [2.0, 4.0, 6.0, 8.0, 10.0].iter().map(|x| 1.0 / x).sum();
        assert!((char_log_right(&even).eval(1.0, 10.0) - oracle).abs() < 1e-14);
        assert!((oracle - 1.141_666_7).abs() < 1e-7);

        let imag = Divisor::from_points([Complex64::new(0.0, 1.0), Complex64::new(0.0, 2.0)])
            .unwrap()
            .to_charge();
        assert_eq!(interval_log(&imag).eval(0.5, 3.0), 0.0);

        let neg = real_points((1..=20).map(|k| -f64::from(k)));
        assert!((interval_log(&neg).eval(1.0, 10.0) - harmonic(2, 10)).abs() < 1e-14);
        assert_eq!(interval_log(&AtomicCharge::empty()).eval(1.0, 10.0), 0.0);
    }

    #[test]
    fn bar_examples() {
        let two = real_points([2.0]);
        assert!((interval_log_bar(&two).eval(1.0, 10.0) - 0.4).abs() < 1e-15);
        assert_eq!(interval_log_bar(&AtomicCharge::empty()).eval(1.0, 10.0), 0.0);

        // piecewise-exact oracle for N: mu(t) = floor(t) on [1, 10]
        let n = real_points((1..=50).map(f64::from));
        let oracle: f64 = (1..10)
            .map(|k| k as f64 * (1.0 / k as f64 - 1.0 / (k as f64 + 1.0)))
            .sum();
        let bar = interval_log_bar(&n).eval(1.0, 10.0);
        assert!((bar - oracle).abs() < 1e-13, "{bar} vs {oracle}");
        assert!((bar - interval_log(&n).eval(1.0, 10.0)).abs() <= 1.0);
    }

    #[test]
    fn ibp_examples() {
        let n = real_points((1..=20).map(f64::from));
        assert!(ibp_residual(&n, 1.0, 10.0, Side::Right).unwrap() <= 1e-12);
        let mixed = Divisor::from_points([
            Complex64::new(1.0, 1.0),
            Complex64::new(2.0, -1.0),
            Complex64::new(-3.0, 0.0),
        ])
        .unwrap()
        .to_charge();
        for side in [Side::Right, Side::Left] {
            assert!(ibp_residual(&mixed, 0.5, 5.0, side).unwrap() <= 1e-12);
        }
        assert_eq!(
            ibp_residual(&AtomicCharge::empty(), 0.5, 5.0, Side::Right).unwrap(),
            0.0
        );
        assert!(ibp_residual(&n, 2.0, 1.0, Side::Right).is_err());
    }

    #[test]
    fn bar_prefix_formula_matches_piecewise_integral() {
        let q = AtomicCharge::from_pairs([
            (Complex64::new(1.0, 1.0), 2.0),
            (Complex64::new(-2.0, 0.5), -1.0),
            (Complex64::new(0.3, -4.0), 0.5),
            (Complex64::new(5.0, 0.0), 1.0),
        ])
        .unwrap();
        let logs = IntervalLogs::new(&q);
        for side in [Side::Right, Side::Left] {
            for &(r, big_r) in &[(0.5, 3.0), (1.0, 4.5), (1.5, 10.0)] {
                // piecewise integration of mu(t)/t^2 by midpoint-sampled levels
                let w = side.weight();
                let mut pts: Vec<f64> = q
                    .atoms()
                    .iter()
                    .map(|a| a.modulus())
                    .filter(|&m| m > r && m < big_r)
                    .collect();
                pts.push(r);
                pts.push(big_r);
                pts.sort_by(f64::total_cmp);
                let oracle: f64 = pts
                    .windows(2)
                    .map(|p| weighted_count(&q, 0.5 * (p[0] + p[1]), w).unwrap() * (1.0 / p[0] - 1.0 / p[1]))
                    .sum();
                assert!((logs.bar_side(side, r, big_r) - oracle).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn j_examples() {
        let r = j_interval(|y: f64| y.abs(), 1.0, std::f64::consts::E, QuadOptions::abs(1e-12)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);
        assert_eq!(j_tail(|_| 0.0, QuadOptions::default()).value, 0.0);

        // int_1^inf atan(y)/(pi y^2) dy = 1/4 + ln 2 / (2 pi)
        let v = |y: f64| if y > 0.0 { y.atan() / std::f64::consts::PI } else { 0.0 };
        let got = j_tail(v, QuadOptions::abs(1e-12));
        let exact = 0.25 + std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI);
        assert!(got.converged);
        assert!((got.value - exact).abs() < 1e-10);
        assert!(got.value <= 1.0);

        let diverging = j_tail(|y: f64| y.abs(), QuadOptions::abs(1e-10));
        assert!(!diverging.converged);
    }

    #[test]
    fn block_density_small_grid() {
        let n = real_points((1..=20_000).map(f64::from));
        let params = DensityParams {
            grid: GridSpec::new(1.0, 2e4, 1.25),
            a_values: vec![4.0, 8.0, 16.0, 32.0],
            ..DensityParams::default()
        };
        for v in [DensityVariant::LimsupLog, DensityVariant::InfLog, DensityVariant::BestB] {
            let rep = block_density(&n, v, &params).unwrap();
            assert!((rep.value - 1.0).abs() < 0.06, "{v:?}: {}", rep.value);
            assert!(rep.warning.is_none());
        }
        let bad = DensityParams {
            a_values: vec![0.5],
            ..params.clone()
        };
        assert!(block_density(&n, DensityVariant::InfLog, &bad).is_err());
    }

    #[test]
    fn lemj_zero_function() {
        let grid = IntervalGrid::from_pairs([(1.0, 10.0), (1.0, 100.0)]).unwrap();
        let prof = lemj_diagnostic(|_| 0.0, &AtomicCharge::empty(), &grid, QuadOptions::default()).unwrap();
        assert!(prof.points.iter().all(|p| p.discrepancy == 0.0));
    }

    #[test]
    fn lemj_single_atom_closed_form() {
        // u = log|E(z;1)| for the atom at 1; on the axis u(iy) = log(1+y^2)/2
        let charge = real_points([1.0]);
        let grid = IntervalGrid::from_pairs([(1.0, 10.0), (2.0, 50.0)]).unwrap();
        let u = |z: Complex64| (Complex64::new(1.0, 0.0) - z).norm().ln() + z.re;
        let prof = lemj_diagnostic(u, &charge, &grid, QuadOptions::abs(1e-12)).unwrap();
        // antiderivative of log(1+y^2)/y^2 is -log(1+y^2)/y + 2 atan(y)
        let anti = |y: f64| -(1.0 + y * y).ln() / y + 2.0 * y.atan();
        for p in &prof.points {
            let exact = anti(p.big_r) - anti(p.r);
            assert!((p.j - exact).abs() < 1e-9);
            assert!(p.discrepancy.is_finite());
        }
    }
}
