//! Piecewise-linear Lipschitz candidates and their weighted-L1 fit.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Continuous piecewise-linear function of the ordinate, extended linearly
/// by its end slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if knots.iter().any(|k| !k.0.is_finite() || !k.1.is_finite()) {
            return Err(invalid("knots must be finite"));
        }
        knots.sort_by(|a, b| a.0.total_cmp(&b.0));
        if knots.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("knot abscissae must be distinct"));
        }
        Ok(Self { knots })
    }

    pub fn constant(c: f64) -> Self {
        Self { knots: vec![(0.0, c)] }
    }

    pub fn linear(slope: f64, intercept: f64) -> Self {
        Self {
            knots: vec![(0.0, intercept), (1.0, intercept + slope)],
        }
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn slope(&self, i: usize) -> f64 {
        let (a, b) = (self.knots[i], self.knots[i + 1]);
        (b.1 - a.1) / (b.0 - a.0)
    }

    pub fn eval(&self, y: f64) -> f64 {
        let k = &self.knots;
        if k.len() == 1 {
            return k[0].1;
        }
        let i = k.partition_point(|p| p.0 <= y).clamp(1, k.len() - 1) - 1;
        k[i].1 + self.slope(i) * (y - k[i].0)
    }

    pub fn lipschitz(&self) -> f64 {
        (0..self.knots.len().saturating_sub(1))
            .map(|i| self.slope(i).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// knots at `+-2^j`, `0 <= j <= max_exponent`
    pub max_exponent: u32,
    pub slope_bound: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_exponent: 20,
            slope_bound: 1.0,
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Convex piecewise-linear function kept as weighted breakpoints left and
/// right of its minimum, with lazy translations.
struct SlopeTrick {
    left: BinaryHeap<(Key, Key)>,
    right: BinaryHeap<(std::cmp::Reverse<Key>, Key)>,
    shift_left: f64,
    shift_right: f64,
}

impl SlopeTrick {
    fn new() -> Self {
        Self {
            left: BinaryHeap::new(),
            right: BinaryHeap::new(),
            shift_left: 0.0,
            shift_right: 0.0,
        }
    }

    fn top_left(&self) -> Option<(f64, f64)> {
        self.left.peek().map(|(p, w)| (p.0 + self.shift_left, w.0))
    }

    fn top_right(&self) -> Option<(f64, f64)> {
        self.right.peek().map(|(p, w)| (p.0 .0 + self.shift_right, w.0))
    }

    fn push_left(&mut self, x: f64, w: f64) {
        self.left.push((Key(x - self.shift_left), Key(w)));
    }

    fn push_right(&mut self, x: f64, w: f64) {
        self.right.push((std::cmp::Reverse(Key(x - self.shift_right)), Key(w)));
    }

    /// Adds `w |x - a|`.
    fn add_abs(&mut self, a: f64, w: f64) {
        self.push_left(a, w);
        self.push_right(a, w);
        while let (Some((p, wl)), Some((q, wr))) = (self.top_left(), self.top_right()) {
            if p <= q {
                break;
            }
            let t = wl.min(wr);
            self.left.pop();
            self.right.pop();
            if wl > t {
                self.push_left(p, wl - t);
            }
            if wr > t {
                self.push_right(q, wr - t);
            }
            self.push_left(q, t);
            self.push_right(p, t);
        }
    }

    /// `g(y) = min over |x - y| <= d of f(x)`.
    fn widen(&mut self, d: f64) {
        self.shift_left -= d;
        self.shift_right += d;
    }

    fn argmin(&self) -> (f64, f64) {
        let lo = self.top_left().map_or(f64::NEG_INFINITY, |p| p.0);
        let hi = self.top_right().map_or(f64::INFINITY, |p| p.0);
        (lo, hi)
    }
}

/// Exact minimizer of `sum_i w_i |a_i - x_i|` subject to
/// `|x_{i+1} - x_i| <= d_i`, by slope trick and backtracking.
fn lipschitz_l1(targets: &[f64], weights: &[f64], gaps: &[f64]) -> Vec<f64> {
    let n = targets.len();
    let mut st = SlopeTrick::new();
    let mut ranges = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 {
            st.widen(gaps[i - 1]);
        }
        st.add_abs(targets[i], weights[i]);
        ranges.push(st.argmin());
    }
    let mut x = vec![0.0; n];
    let (lo, hi) = ranges[n - 1];
    x[n - 1] = targets[n - 1].clamp(lo, hi);
    for i in (0..n - 1).rev() {
        let (lo, hi) = ranges[i];
        let d = gaps[i];
        x[i] = x[i + 1].clamp(lo, hi).clamp(x[i + 1] - d, x[i + 1] + d);
    }
    x
}

/// Knots `+-2^j` and the weights `integral of y^-2` over their midpoint
/// cells, so the weighted sum approximates `J(|F - k|)`.
pub(crate) fn dyadic_knots(max_exponent: u32) -> (Vec<f64>, Vec<f64>) {
    let pos: Vec<f64> = (0..=max_exponent).map(|j| 2f64.powi(j as i32)).collect();
    let mut w_pos = Vec::with_capacity(pos.len());
    for (j, &y) in pos.iter().enumerate() {
        let a = if j == 0 { 1.0 } else { 0.5 * (pos[j - 1] + y) };
        let b = pos.get(j + 1).map_or(f64::INFINITY, |&n| 0.5 * (y + n));
        w_pos.push(1.0 / a - 1.0 / b);
    }
    let ys: Vec<f64> = pos.iter().rev().map(|y| -y).chain(pos.iter().copied()).collect();
    let ws: Vec<f64> = w_pos.iter().rev().chain(w_pos.iter()).copied().collect();
    (ys, ws)
}

/// Best piecewise-linear `k` on the dyadic ordinate knots for the
/// discretized `J(|F - k|)` under the slope bound. Returns `k` and the
/// discretized objective.
pub fn fit_lipschitz_k<F: Fn(f64) -> f64>(f: F, opts: FitOptions) -> Result<(PiecewiseLinear, f64)> {
    if !(opts.slope_bound >= 0.0) || !opts.slope_bound.is_finite() {
        return Err(invalid("slope bound must be finite and >= 0"));
    }
    let (ys, ws) = dyadic_knots(opts.max_exponent);
    let targets: Vec<f64> = ys.iter().map(|&y| f(y)).collect();
    if targets.iter().any(|t| !t.is_finite()) {
        return Err(invalid("F is not finite on the knot grid"));
    }
    let gaps: Vec<f64> = ys.windows(2).map(|w| opts.slope_bound * (w[1] - w[0])).collect();
    let ks = lipschitz_l1(&targets, &ws, &gaps);
    let objective = crate::numeric::sum::pairwise_sum(
        &ks.iter()
            .zip(&targets)
            .zip(&ws)
            .map(|((k, t), w)| w * (k - t).abs())
            .collect::<Vec<_>>(),
    );
    let k = PiecewiseLinear::new(ys.into_iter().zip(ks).collect())?;
    Ok((k, objective))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(targets: &[f64], weights: &[f64], gaps: &[f64]) -> f64 {
        // exhaustive search on a fine lattice, valid for small instances
        let step = 0.05;
        let vals: Vec<f64> = (-40..=40).map(|i| i as f64 * step).collect();
        let n = targets.len();
        let mut best = vec![0.0; vals.len()];
        for (j, &v) in vals.iter().enumerate() {
            best[j] = weights[0] * (v - targets[0]).abs();
        }
        for i in 1..n {
            let mut next = vec![f64::INFINITY; vals.len()];
            for (j, &v) in vals.iter().enumerate() {
                for (k, &u) in vals.iter().enumerate() {
                    if (v - u).abs() <= gaps[i - 1] + 1e-12 {
                        next[j] = next[j].min(best[k] + weights[i] * (v - targets[i]).abs());
                    }
                }
            }
            best = next;
        }
        best.into_iter().fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn slope_trick_matches_brute_force() {
        let targets = [0.5, -1.0, 1.5, 0.25, -0.75, 1.0];
        let weights = [1.0, 2.0, 0.5, 3.0, 1.0, 0.25];
        let gaps = [0.5, 0.25, 1.0, 0.5, 0.75];
        let x = lipschitz_l1(&targets, &weights, &gaps);
        for (i, g) in gaps.iter().enumerate() {
            assert!((x[i + 1] - x[i]).abs() <= g + 1e-12);
        }
        let obj: f64 = x
            .iter()
            .zip(&targets)
            .zip(&weights)
            .map(|((x, t), w)| w * (x - t).abs())
            .sum();
        let oracle = brute(&targets, &weights, &gaps);
        assert!((obj - oracle).abs() < 1e-9, "{obj} vs {oracle}");
    }

    #[test]
    fn piecewise_linear_eval() {
        let k = PiecewiseLinear::new(vec![(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)]).unwrap();
        assert_eq!(k.eval(0.5), 0.5);
        assert_eq!(k.eval(2.0), 1.5);
        assert_eq!(k.eval(-1.0), -1.0);
        assert_eq!(k.eval(5.0), 3.0);
        assert_eq!(k.lipschitz(), 1.0);
        assert_eq!(PiecewiseLinear::constant(2.0).eval(10.0), 2.0);
        assert_eq!(PiecewiseLinear::linear(2.0, 1.0).eval(3.0), 7.0);
        assert!(PiecewiseLinear::new(vec![]).is_err());
    }

    #[test]
    fn fit_examples() {
        let (k, obj) = fit_lipschitz_k(|_| 0.0, FitOptions::default()).unwrap();
        assert_eq!(obj, 0.0);
        assert!(k.knots().iter().all(|p| p.1 == 0.0));

        let (k, obj) = fit_lipschitz_k(|y| y, FitOptions::default()).unwrap();
        assert!(obj.abs() < 1e-9);
        assert!((k.eval(5.0) - 5.0).abs() < 1e-9);

        let f = |y: f64| y.atan() / std::f64::consts::PI;
        let (k, obj) = fit_lipschitz_k(f, FitOptions::default()).unwrap();
        let (ys, ws) = dyadic_knots(20);
        let zero: f64 = ys.iter().zip(&ws).map(|(y, w)| w * f(*y).abs()).sum();
        assert!(obj <= zero);
        assert!((k.eval(1.0) - 0.25).abs() < 1e-9);
        assert!(k.lipschitz() <= 1.0 + 1e-12);
    }
}
