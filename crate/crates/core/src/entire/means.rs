use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numeric::quad::{integrate_with_breaks, Integral, QuadOptions};

/// Initial panels per circle; spikes of `log|f|` are then isolated by
/// adaptive refinement and by splitting at non-finite nodes.
const CIRCLE_PANELS: usize = 32;

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// `C_v(z, r)`: mean of `v` over the circle `|w - z| = r`. `opts.abs_tol`
/// applies to the mean.
pub fn circle_mean<V: Fn(Complex64) -> f64>(v: V, z: Complex64, r: f64, opts: QuadOptions) -> Result<Integral> {
    check_radius(r)?;
    let g = |t: f64| v(z + Complex64::from_polar(r, t));
    let mut breaks: Vec<f64> = (0..=CIRCLE_PANELS)
        .map(|k| 2.0 * PI * k as f64 / CIRCLE_PANELS as f64)
        .collect();
    // nudge breaks off sampled -inf values so they stay panel ends only
    for b in breaks.iter_mut().take(CIRCLE_PANELS).skip(1) {
        if !g(*b).is_finite() {
            *b += 1e-3 / CIRCLE_PANELS as f64;
        }
    }
    let scaled = QuadOptions {
        abs_tol: opts.abs_tol * 2.0 * PI,
        ..opts
    };
    let q = integrate_with_breaks(g, &breaks, scaled);
    if !q.value.is_finite() || !q.abs_error.is_finite() {
        return Err(Error::Nonintegrable(format!("circle mean at {z} radius {r}")));
    }
    Ok(Integral {
        value: q.value / (2.0 * PI),
        abs_error: q.abs_error / (2.0 * PI),
        ..q
    })
}

/// `B_v(z, r) = (2 / r^2) integral_0^r C_v(z, t) t dt`.
pub fn disk_mean<V: Fn(Complex64) -> f64>(v: V, z: Complex64, r: f64, opts: QuadOptions) -> Result<Integral> {
    check_radius(r)?;
    let inner = QuadOptions {
        abs_tol: opts.abs_tol * 0.1,
        ..opts
    };
    let failure = Cell::new(None);
    let inner_error = Cell::new(0.0f64);
    let g = |t: f64| {
        if t <= 0.0 {
            return 0.0;
        }
        match circle_mean(&v, z, t, inner) {
            Ok(c) => {
                inner_error.set(inner_error.get().max(c.abs_error));
                c.value * t
            }
            Err(err) => {
                failure.set(Some(err.to_string()));
                f64::NAN
            }
        }
    };
    let outer = QuadOptions {
        abs_tol: opts.abs_tol * r * r / 2.0,
        ..opts
    };
    let q = integrate_with_breaks(g, &[0.0, r], outer);
    if let Some(msg) = failure.take() {
        return Err(Error::Nonintegrable(msg));
    }
    let scale = 2.0 / (r * r);
    Ok(Integral {
        value: q.value * scale,
        abs_error: q.abs_error * scale + inner_error.get(),
        ..q
    })
}

/// `M_v(z, r)` as a lower bound: maximum over an angular grid refined by
/// golden-section search around the best samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupOnCircle {
    pub value: f64,
    pub theta: f64,
    pub samples: usize,
}

pub fn sup_on_circle<V: Fn(Complex64) -> f64>(v: V, z: Complex64, r: f64, samples: usize) -> Result<SupOnCircle> {
    check_radius(r)?;
    if samples < 3 {
        return Err(invalid("need at least 3 angular samples"));
    }
    let g = |t: f64| {
        let x = v(z + Complex64::from_polar(r, t));
        if x.is_nan() {
            f64::NEG_INFINITY
        } else {
            x
        }
    };
    let h = 2.0 * PI / samples as f64;
    let vals: Vec<(f64, f64)> = (0..samples).map(|k| (k as f64 * h, g(k as f64 * h))).collect();
    let mut best = vals
        .iter()
        .copied()
        .fold((0.0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    // refine around the local maxima of the grid among the top few
    let mut peaks: Vec<(f64, f64)> = (0..samples)
        .filter(|&k| {
            let prev = vals[(k + samples - 1) % samples].1;
            let next = vals[(k + 1) % samples].1;
            vals[k].1 >= prev && vals[k].1 >= next
        })
        .map(|k| vals[k])
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    for &(t0, _) in peaks.iter().take(4) {
        let (t, val) = golden_max(&g, t0 - h, t0 + h);
        if val > best.1 {
            best = (t.rem_euclid(2.0 * PI), val);
        }
    }
    Ok(SupOnCircle {
        value: best.1,
        theta: best.0,
        samples,
    })
}

fn golden_max(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..60 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - ratio * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + ratio * (b - a);
            gd = g(d);
        }
        if (b - a).abs() < 1e-12 {
            break;
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entire::log_abs_sin_pi;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn opts() -> QuadOptions {
        QuadOptions::abs(1e-10)
    }

    #[test]
    fn circle_mean_examples() {
        let e = std::f64::consts::E;
        let m = circle_mean(|w: Complex64| w.norm().ln(), c(0.0, 0.0), e, opts()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-9);

        let a = c(2f64.sqrt(), 2f64.sqrt());
        let m = circle_mean(|w: Complex64| (w - a).norm().ln(), c(0.0, 0.0), 1.0, opts()).unwrap();
        assert!((m.value - 2f64.ln()).abs() < 1e-9);

        let a = c(0.3, -0.4);
        let m = circle_mean(|w: Complex64| (w - a).norm().ln(), c(0.0, 0.0), 1.0, opts()).unwrap();
        assert!(m.value.abs() < 1e-9);
    }

    #[test]
    fn circle_through_a_zero() {
        // log|w - 1| on the unit circle has a log singularity at w = 1
        let m = circle_mean(|w: Complex64| (w - c(1.0, 0.0)).norm().ln(), c(0.0, 0.0), 1.0, opts()).unwrap();
        assert!(m.value.abs() < 1e-8, "{}", m.value);
    }

    #[test]
    fn circle_mean_rejects_nonintegrable() {
        let r = circle_mean(|_| f64::NEG_INFINITY, c(0.0, 0.0), 1.0, opts());
        assert!(r.is_err());
        assert!(circle_mean(|_| 0.0, c(0.0, 0.0), 0.0, opts()).is_err());
    }

    #[test]
    fn disk_mean_examples() {
        let e = std::f64::consts::E;
        let b = disk_mean(|w: Complex64| w.norm().ln(), c(0.0, 0.0), e, QuadOptions::abs(1e-9)).unwrap();
        assert!((b.value - 0.5).abs() < 1e-7);
        let b = disk_mean(|_| 3.5, c(1.0, 2.0), 0.7, QuadOptions::abs(1e-9)).unwrap();
        assert!((b.value - 3.5).abs() < 1e-12);
    }

    #[test]
    fn sup_examples() {
        let s = sup_on_circle(|w: Complex64| w.re, c(0.0, 0.0), 1.0, 720).unwrap();
        assert!((s.value - 1.0).abs() < 1e-15);
        assert_eq!(sup_on_circle(|_| 0.0, c(0.0, 0.0), 1.0, 720).unwrap().value, 0.0);
        let s = sup_on_circle(log_abs_sin_pi, c(0.0, 0.0), 10.0, 720).unwrap();
        assert!((s.value - (10.0 * PI - 2f64.ln())).abs() < 0.1);
        // off-grid maximum is found by refinement
        let s = sup_on_circle(|w: Complex64| (w * c(0.0, -1.0).exp()).re, c(0.0, 0.0), 1.0, 7).unwrap();
        assert!((s.value - 1.0).abs() < 1e-12);
    }
}
