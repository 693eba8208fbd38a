//! Desk-scale surrogates for `limsup` and `O(1)` claims.
//!
//! A profile is judged bounded when its supremum barely moves as the grid
//! is extended. Two extensions are used: doubling the upper end of the grid
//! (`Dyadic`), and squaring it relative to the lower end (`LogDyadic`),
//! which is the only one that separates logarithmic growth from a bounded
//! profile on grids that end near 10^6.

use serde::{Deserialize, Serialize};

/// Ratio between the supremum over the extended grid and over the base grid
/// that still counts as "stabilized".
pub const STABILIZATION_FACTOR: f64 = 1.2;

/// Profiles whose supremum never exceeds this are treated as identically
/// nonpositive.
pub const ABS_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Inconclusive,
}

impl Tri {
    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    /// `Yes` only when both are `Yes`; `No` dominates `Inconclusive`.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            _ => Tri::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// base grid ends at `hi / 2`
    Dyadic,
    /// base grid ends at `sqrt(lo * hi)`
    LogDyadic,
}

impl Extension {
    /// Upper end of the base grid for a full grid spanning `[lo, hi]`.
    pub fn base_end(self, lo: f64, hi: f64) -> f64 {
        match self {
            Extension::Dyadic => hi / 2.0,
            Extension::LogDyadic => (lo * hi).sqrt(),
        }
    }
}

/// Outcome of comparing the base and extended suprema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stabilization {
    pub sup_base: f64,
    pub sup_full: f64,
    pub ratio: f64,
    pub verdict: Tri,
}

/// `Yes` when `sup_full <= 1.2 * sup_base`, `No` when the ratio exceeds
/// `1.2^2`, `Inconclusive` in between or when the base supremum is
/// numerically zero but the full one is not.
pub fn stabilization(sup_base: f64, sup_full: f64) -> Stabilization {
    let sup_full = sup_full.max(sup_base);
    if sup_full <= ABS_FLOOR {
        return Stabilization {
            sup_base,
            sup_full,
            ratio: 1.0,
            verdict: Tri::Yes,
        };
    }
    if sup_base <= ABS_FLOOR {
        return Stabilization {
            sup_base,
            sup_full,
            ratio: f64::INFINITY,
            verdict: Tri::Inconclusive,
        };
    }
    let ratio = sup_full / sup_base;
    let verdict = if ratio <= STABILIZATION_FACTOR {
        Tri::Yes
    } else if ratio <= STABILIZATION_FACTOR * STABILIZATION_FACTOR {
        Tri::Inconclusive
    } else {
        Tri::No
    };
    Stabilization {
        sup_base,
        sup_full,
        ratio,
        verdict,
    }
}

/// Applies [`stabilization`] to `(abscissa, value)` samples, where the base
/// grid keeps the samples with abscissa `<= ext.base_end(lo, hi)`.
pub fn stabilize_profile(samples: &[(f64, f64)], ext: Extension) -> Option<Stabilization> {
    if samples.is_empty() {
        return None;
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(f64::NEG_INFINITY, f64::max);
    let cut = ext.base_end(lo, hi);
    let sup = |keep: &dyn Fn(f64) -> bool| {
        samples
            .iter()
            .filter(|s| keep(s.0))
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let base = sup(&|x| x <= cut);
    let full = sup(&|_| true);
    Some(stabilization(base, full))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_and_log_profiles() {
        let bounded: Vec<(f64, f64)> = (0..20)
            .map(|j| {
                let r = 2f64.powi(j);
                (r, 1.0 - 1.0 / r)
            })
            .collect();
        assert_eq!(
            stabilize_profile(&bounded, Extension::LogDyadic).unwrap().verdict,
            Tri::Yes
        );
        let log: Vec<(f64, f64)> = (0..20)
            .map(|j| {
                let r = 2f64.powi(j);
                (r, r.ln())
            })
            .collect();
        assert_eq!(stabilize_profile(&log, Extension::LogDyadic).unwrap().verdict, Tri::No);
    }

    #[test]
    fn zero_profiles_are_bounded() {
        let s = stabilization(0.0, 1e-12);
        assert_eq!(s.verdict, Tri::Yes);
        let s = stabilization(-3.0, -1.0);
        assert_eq!(s.verdict, Tri::Yes);
        let s = stabilization(0.0, 0.5);
        assert_eq!(s.verdict, Tri::Inconclusive);
    }

    #[test]
    fn tri_and() {
        assert_eq!(Tri::Yes.and(Tri::Yes), Tri::Yes);
        assert_eq!(Tri::Yes.and(Tri::Inconclusive), Tri::Inconclusive);
        assert_eq!(Tri::Inconclusive.and(Tri::No), Tri::No);
    }
}
