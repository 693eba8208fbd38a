use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measures::Divisor;
use crate::numeric::sum::pairwise_sum;

/// `log|E(w; 1)| = log|1 - w| + Re w`. Near 0 by its power series, then
/// through `ln_1p` so the cancellation against `Re w` stays absolute.
pub fn log_abs_e1(w: Complex64) -> f64 {
    let n2 = w.norm_sqr();
    if n2 < 0.0025 {
        // -Re sum_{k >= 2} w^k / k
        let mut p = w * w;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 2..40 {
            let t = p / k as f64;
            acc += t;
            if t.norm_sqr() < 1e-36 * acc.norm_sqr() {
                break;
            }
            p *= w;
        }
        return -acc.re;
    }
    if n2 < 4.0 {
        return 0.5 * (n2 - 2.0 * w.re).ln_1p() + w.re;
    }
    (Complex64::new(1.0, 0.0) - w).norm().ln() + w.re
}

/// `log|sin(pi z)|` without overflow for large `|Im z|`.
pub fn log_abs_sin_pi(z: Complex64) -> f64 {
    let y = z.im.abs();
    let e = (-2.0 * PI * y).exp();
    let inner = 1.0 - 2.0 * (2.0 * PI * z.re).cos() * e + e * e;
    if inner <= 0.0 {
        return f64::NEG_INFINITY;
    }
    PI * y - std::f64::consts::LN_2 + 0.5 * inner.ln()
}

/// Analytic description of the zeros omitted from a truncated divisor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum TailDescriptor {
    /// zeros `h k e^{i phi}`, `k > n`
    Arithmetic { n: u64, step: f64, phi: f64 },
    /// zeros `+-h k e^{i phi}`, `k > n`
    SymmetricArithmetic { n: u64, step: f64, phi: f64 },
    /// unknown zeros beyond `radius` with counting function `<= density * t`
    CountingBound { radius: f64, density: f64 },
}

impl TailDescriptor {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            TailDescriptor::Arithmetic { step, phi, .. } | TailDescriptor::SymmetricArithmetic { step, phi, .. } => {
                step > 0.0 && phi.is_finite()
            }
            TailDescriptor::CountingBound { radius, density } => radius > 0.0 && density >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(invalid(format!("invalid tail descriptor {self:?}")))
        }
    }

    /// `(correction, error bound)` at `z`.
    fn correction(&self, z: Complex64) -> (f64, f64) {
        match *self {
            TailDescriptor::Arithmetic { n, step, phi } => one_sided(z, n, step, phi),
            TailDescriptor::SymmetricArithmetic { n, step, phi } => {
                let (a, ea) = one_sided(z, n, step, phi);
                let (b, eb) = one_sided(z, n, step, phi + PI);
                (a + b, ea + eb)
            }
            TailDescriptor::CountingBound { radius, density } => {
                let m = z.norm();
                if m > radius / 2.0 {
                    (0.0, f64::INFINITY)
                } else {
                    // |log|E(w;1)|| <= |w|^2 for |w| <= 1/2, summed by parts
                    (0.0, 2.0 * density * m * m / radius)
                }
            }
        }
    }
}

/// `sum_{k > n} log|E(b/k; 1)|` with `b = z e^{-i phi} / h`, by the midpoint
/// rule against `integral_X^inf (log(1 - b/t) + b/t) dt`, `X = n + 1/2`.
/// The integral equals `-b - (X - b) log(1 - b/X) = -b sum_j u^j / (j (j+1))`
/// with `u = b/X`; the series avoids the cancellation of the closed form.
fn one_sided(z: Complex64, n: u64, step: f64, phi: f64) -> (f64, f64) {
    let b = z * Complex64::from_polar(1.0, -phi) / step;
    let x = n as f64 + 0.5;
    let u = b / x;
    let q = u.norm();
    if q >= 0.5 {
        return (0.0, f64::INFINITY);
    }
    let mut p = u;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..200 {
        let t = p / (j * (j + 1)) as f64;
        acc += t;
        if t.norm() <= 1e-17 * acc.norm() {
            break;
        }
        p *= u;
    }
    let err = b.norm_sqr() / (12.0 * x * x * x) / (1.0 - q).powi(3);
    ((-b * acc).re, err)
}

/// `log|f(z)|` with its certified truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogAbs {
    pub value: f64,
    pub error_bound: f64,
    /// `z` is a zero of `f`; `value` is `-inf`
    pub hit_zero: bool,
}

/// `f(z) = z^m prod (1 - z/z_k) e^{z/z_k}` over a finite divisor, with
/// optional tail descriptors for omitted zeros.
#[derive(Debug, Clone, Serialize)]
pub struct CanonicalProduct {
    zeros: Vec<(Complex64, u32)>,
    #[serde(skip)]
    inverses: Vec<Complex64>,
    order_at_origin: u32,
    tails: Vec<TailDescriptor>,
    max_modulus: f64,
}

impl CanonicalProduct {
    /// Atoms of `divisor` at the origin become the monomial factor.
    pub fn new(divisor: &Divisor) -> Self {
        let zeros: Vec<(Complex64, u32)> = divisor
            .atoms()
            .iter()
            .copied()
            .filter(|(z, _)| *z != Complex64::new(0.0, 0.0))
            .collect();
        let max_modulus = zeros.iter().map(|(z, _)| z.norm()).fold(0.0, f64::max);
        Self {
            inverses: zeros.iter().map(|(z, _)| z.inv()).collect(),
            zeros,
            order_at_origin: divisor.origin_multiplicity(),
            tails: Vec::new(),
            max_modulus,
        }
    }

    pub fn with_tail(mut self, tail: TailDescriptor) -> Result<Self> {
        tail.validate()?;
        self.tails.push(tail);
        Ok(self)
    }

    pub fn zeros(&self) -> &[(Complex64, u32)] {
        &self.zeros
    }

    pub fn order_at_origin(&self) -> u32 {
        self.order_at_origin
    }

    pub fn tails(&self) -> &[TailDescriptor] {
        &self.tails
    }

    /// Largest modulus among the explicit zeros.
    pub fn max_modulus(&self) -> f64 {
        self.max_modulus
    }

    pub fn log_abs(&self, z: Complex64) -> LogAbs {
        let hit =
            (self.order_at_origin > 0 && z == Complex64::new(0.0, 0.0)) || self.zeros.iter().any(|(w, _)| *w == z);
        if hit {
            return LogAbs {
                value: f64::NEG_INFINITY,
                error_bound: 0.0,
                hit_zero: true,
            };
        }
        let terms: Vec<f64> = self
            .zeros
            .iter()
            .zip(&self.inverses)
            .map(|(&(_, m), &inv)| f64::from(m) * log_abs_e1(z * inv))
            .collect();
        let mut value = pairwise_sum(&terms);
        if self.order_at_origin > 0 {
            value += f64::from(self.order_at_origin) * z.norm().ln();
        }
        let mut error_bound = 0.0;
        for t in &self.tails {
            let (c, e) = t.correction(z);
            value += c;
            error_bound += e;
        }
        LogAbs {
            value,
            error_bound,
            hit_zero: false,
        }
    }

    /// `z -> log|f(z)|`, `-inf` at zeros.
    pub fn evaluator(&self) -> impl Fn(Complex64) -> f64 + Sync + '_ {
        move |z| self.log_abs(z).value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn integers(n: i64) -> Divisor {
        Divisor::from_points((1..=n).flat_map(|k| [c(k as f64, 0.0), c(-k as f64, 0.0)])).unwrap()
    }

    #[test]
    fn log_abs_e1_series_matches_direct() {
        for w in [c(0.2, 0.1), c(-0.1, 0.24), c(0.249, 0.0), c(1e-5, -3e-6)] {
            let direct = (c(1.0, 0.0) - w).norm().ln() + w.re;
            let tol = 1e-15 + 1e-12 * direct.abs();
            assert!((log_abs_e1(w) - direct).abs() < tol.max(1e-16), "{w}");
        }
        assert_eq!(log_abs_e1(c(0.0, 0.0)), 0.0);
    }

    #[test]
    fn log_abs_sin_pi_matches_direct() {
        for z in [c(0.3, 0.2), c(-1.7, 2.0), c(2.25, -0.5)] {
            let direct = (z * PI).sin().norm().ln();
            assert!((log_abs_sin_pi(z) - direct).abs() < 1e-13);
        }
        assert_eq!(log_abs_sin_pi(c(3.0, 0.0)), f64::NEG_INFINITY);
        assert!((log_abs_sin_pi(c(0.0, 1000.0)) - (1000.0 * PI - 2f64.ln())).abs() < 1e-9);
    }

    #[test]
    fn product_examples() {
        let n = 10_000;
        let f = CanonicalProduct::new(&integers(n))
            .with_tail(TailDescriptor::SymmetricArithmetic {
                n: n as u64,
                step: 1.0,
                phi: 0.0,
            })
            .unwrap();
        let v = f.log_abs(c(0.0, 1.0));
        let exact = (PI.sinh() / PI).ln();
        assert!((v.value - exact).abs() < 1e-6, "{}", v.value - exact);
        assert!(
            (v.value - exact).abs() <= v.error_bound + 1e-12,
            "{} {}",
            v.value - exact,
            v.error_bound
        );
        assert!((exact - 1.301_90).abs() < 1e-4);

        let two = CanonicalProduct::new(&Divisor::from_points([c(2.0, 0.0)]).unwrap());
        let v = two.log_abs(c(1.0, 0.0)).value;
        assert!((v - (0.5 * 0.5f64.exp()).ln()).abs() < 1e-15);
        assert!((v + 0.193_15).abs() < 1e-5);

        let empty = CanonicalProduct::new(&Divisor::from_points([]).unwrap());
        assert_eq!(empty.log_abs(c(3.0, -2.0)).value, 0.0);

        let hit = two.log_abs(c(2.0, 0.0));
        assert!(hit.hit_zero && hit.value == f64::NEG_INFINITY);
    }

    #[test]
    fn monomial_factor() {
        let d = Divisor::new([(c(0.0, 0.0), 2), (c(1.0, 1.0), 1)]).unwrap();
        let f = CanonicalProduct::new(&d);
        assert_eq!(f.order_at_origin(), 2);
        let z = c(0.5, -0.25);
        let expect = 2.0 * z.norm().ln() + log_abs_e1(z / c(1.0, 1.0));
        assert!((f.log_abs(z).value - expect).abs() < 1e-15);
        assert!(f.log_abs(c(0.0, 0.0)).hit_zero);
    }

    #[test]
    fn tail_bounds_cover_truncation() {
        // truncated at 200 with a counting bound versus the closed form
        let n = 200;
        let f = CanonicalProduct::new(&integers(n))
            .with_tail(TailDescriptor::CountingBound {
                radius: n as f64,
                density: 2.0,
            })
            .unwrap();
        for z in [c(0.0, 3.0), c(1.5, 2.0), c(-7.25, 0.5)] {
            let exact = log_abs_sin_pi(z) - (PI * z).norm().ln();
            let v = f.log_abs(z);
            assert!((v.value - exact).abs() <= v.error_bound);
        }
    }
}
