//! Kahane's outer density condition for positive charges.

use serde::{Deserialize, Serialize};

use super::lipschitz::{fit_lipschitz_k, FitOptions, PiecewiseLinear};
use super::{blaschke, ConditionVerdict};
use crate::balayage::{balayage_genus0, Genus0Options};
use crate::error::{Error, Result};
use crate::logmetrics::j_tail;
use crate::measures::AtomicCharge;
use crate::numeric::quad::QuadOptions;
use crate::numeric::stability::Tri;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KahaneOptions {
    pub tolerance: f64,
    /// radius for the Blaschke precondition
    pub r0: f64,
    pub fit: FitOptions,
}

impl Default for KahaneOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            r0: 1.0,
            fit: FitOptions::default(),
        }
    }
}

/// `J(|F - k|)` with `F` the distribution of the genus-zero balayage of
/// `mu`. With `k = None` a candidate is fitted first. The verdict is about
/// the given or fitted `k` only.
pub fn kahane_outer_density(
    mu: &AtomicCharge,
    k: Option<&PiecewiseLinear>,
    opts: KahaneOptions,
) -> Result<ConditionVerdict> {
    if let Some(a) = mu.atoms().iter().find(|a| a.mass < 0.0) {
        return Err(Error::SignedCharge { re: a.z.re, im: a.z.im });
    }
    let b = blaschke(mu, opts.r0)?;
    if b.holds != Tri::Yes {
        return Err(Error::BlaschkeFailed {
            sum: b.witness.value.unwrap_or(f64::NAN),
        });
    }
    let bal = balayage_genus0(
        mu,
        Genus0Options {
            r0: opts.r0,
            ..Genus0Options::default()
        },
    )?;
    let f = |y: f64| bal.line.distribution(y);
    let mut notes = Vec::new();
    let k = match k {
        Some(k) => k.clone(),
        None => {
            notes.push("k fitted on dyadic ordinates".to_string());
            fit_lipschitz_k(f, opts.fit)?.0
        }
    };
    let j = j_tail(|y| (f(y) - k.eval(y)).abs(), QuadOptions::abs(opts.tolerance));
    let lip = k.lipschitz();
    let mut out = ConditionVerdict::new(if j.converged && j.value.is_finite() && lip.is_finite() {
        Tri::Yes
    } else {
        Tri::No
    });
    if !j.converged {
        notes.push(format!("J(|F - k|) did not converge to {:e}", opts.tolerance));
    }
    out.witness.value = Some(j.value);
    out.witness.lipschitz = Some(lip);
    out.profile = k
        .knots()
        .iter()
        .map(|&(y, kv)| super::ProfileRow::radial(y, f(y) - kv))
        .collect();
    out.notes = notes;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn kahane_examples() {
        let d1 = AtomicCharge::from_pairs([(Complex64::new(1.0, 0.0), 1.0)]).unwrap();
        let zero = PiecewiseLinear::constant(0.0);
        let v = kahane_outer_density(&d1, Some(&zero), KahaneOptions::default()).unwrap();
        assert_eq!(v.holds, Tri::Yes);
        // both half-lines contribute 1/4 + ln 2 / (2 pi)
        let exact = 2.0 * (0.25 + std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI));
        assert!((v.witness.value.unwrap() - exact).abs() < 1e-7);
        assert!(v.witness.value.unwrap() <= 1.0);

        let v = kahane_outer_density(&AtomicCharge::empty(), Some(&zero), KahaneOptions::default()).unwrap();
        assert_eq!((v.holds, v.witness.value), (Tri::Yes, Some(0.0)));

        let id = PiecewiseLinear::linear(1.0, 0.0);
        let v = kahane_outer_density(&d1, Some(&id), KahaneOptions::default()).unwrap();
        assert_eq!(v.holds, Tri::No);

        let fitted = kahane_outer_density(&d1, None, KahaneOptions::default()).unwrap();
        assert_eq!(fitted.holds, Tri::Yes);
        assert!(fitted.witness.value.unwrap() < exact);

        let signed = AtomicCharge::from_pairs([(Complex64::new(1.0, 0.0), -1.0)]).unwrap();
        assert!(kahane_outer_density(&signed, None, KahaneOptions::default()).is_err());
        let n = AtomicCharge::from_pairs((1..=10_000).map(|k| (Complex64::new(k.into(), 0.0), 1.0))).unwrap();
        assert!(matches!(
            kahane_outer_density(&n, None, KahaneOptions::default()),
            Err(Error::BlaschkeFailed { .. })
        ));
    }
}
