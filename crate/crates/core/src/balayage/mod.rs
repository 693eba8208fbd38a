//! Two-sided harmonic measure of imaginary-axis intervals, its genus-one
//! modification, and the balayage of atomic charges onto `iR`.

mod checks;
mod potential;

pub use checks::{
    lindelof_preservation_check, lipschitz_tail_check, mass_growth_check, radial_variation, LindelofPreservation,
    LipschitzOptions, MassGrowth, MassGrowthOptions,
};
pub use potential::{function_balayage, BalayagePotential, FunctionBalayageOptions, FunctionBalayageReport};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::conditions::blaschke;
use crate::error::{invalid, Error, Result};
use crate::measures::{AtomicCharge, LineCharge, PoissonTerm};
use crate::numeric::stability::Tri;

/// Kernel value with the point-mass flag for atoms on the axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: f64,
    /// `z` lies on `iR`; the value is 1 or 0 by the point-mass convention
    pub point_mass: bool,
}

fn check_interval(y1: f64, y2: f64) -> Result<()> {
    if !(y2 >= y1) || !y1.is_finite() || !y2.is_finite() {
        return Err(invalid(format!("need finite y1 <= y2, got [{y1}, {y2}]")));
    }
    Ok(())
}

/// `omega(z, [i y1, i y2])`, the angle subtended by the interval at `z`
/// divided by `pi`.
pub fn omega(z: Complex64, y1: f64, y2: f64) -> Result<KernelValue> {
    check_interval(y1, y2)?;
    if z.re == 0.0 {
        let inside = z.im > y1 && z.im <= y2;
        return Ok(KernelValue {
            value: if inside { 1.0 } else { 0.0 },
            point_mass: true,
        });
    }
    let x = z.re.abs();
    let value = (((y2 - z.im) / x).atan() - ((y1 - z.im) / x).atan()) / PI;
    Ok(KernelValue {
        value,
        point_mass: false,
    })
}

/// `Omega(z, [i y1, i y2]) = omega - (y2 - y1) |Re 1/z| / pi`.
pub fn omega_genus1(z: Complex64, y1: f64, y2: f64) -> Result<KernelValue> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::AtomAtOrigin);
    }
    let w = omega(z, y1, y2)?;
    Ok(KernelValue {
        value: w.value - (y2 - y1) * z.inv().re.abs() / PI,
        ..w
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum Genus {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

#[derive(Debug, Clone, Serialize)]
pub struct BalayageResult {
    pub line: LineCharge,
    /// atoms of the source charge lying on `iR`, carried over verbatim
    pub retained: AtomicCharge,
    pub genus: Genus,
    /// split radius, genus one only
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r0: Option<f64>,
    /// atoms with `|z| = r0`, swept with the genus-one kernel
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub boundary_atoms: Vec<Complex64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BalayageResult {
    pub fn distribution(&self, y: f64) -> f64 {
        self.line.distribution(y)
    }

    pub fn density(&self, y: f64) -> f64 {
        self.line.density(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct Genus0Options {
    /// radius for the Blaschke precondition
    pub r0: f64,
    pub skip_blaschke_check: bool,
}

impl Default for Genus0Options {
    fn default() -> Self {
        Self {
            r0: 1.0,
            skip_blaschke_check: false,
        }
    }
}

/// Classical balayage of a positive charge.
pub fn balayage_genus0(mu: &AtomicCharge, opts: Genus0Options) -> Result<BalayageResult> {
    if let Some(a) = mu.atoms().iter().find(|a| a.mass < 0.0) {
        return Err(Error::SignedCharge { re: a.z.re, im: a.z.im });
    }
    let mut notes = Vec::new();
    if opts.skip_blaschke_check {
        notes.push("Blaschke precondition skipped".to_string());
    } else {
        let b = blaschke(mu, opts.r0)?;
        if b.holds != Tri::Yes {
            return Err(Error::BlaschkeFailed {
                sum: b.witness.value.unwrap_or(f64::NAN),
            });
        }
    }
    let (on, off) = mu.split_axis();
    let terms = off
        .atoms()
        .iter()
        .map(|a| PoissonTerm {
            x: a.z.re,
            v: a.z.im,
            mass: a.mass,
            genus_one: false,
        })
        .collect();
    let atoms = on.atoms().iter().map(|a| (a.z.im, a.mass)).collect();
    Ok(BalayageResult {
        line: LineCharge::new(terms, atoms),
        retained: on,
        genus: Genus::Zero,
        r0: None,
        boundary_atoms: Vec::new(),
        notes,
    })
}

/// Genus-one balayage: `omega` inside the open disk `|z| < r0`, `Omega`
/// on and outside its boundary, axis atoms retained.
pub fn balayage_genus1(nu: &AtomicCharge, r0: f64) -> Result<BalayageResult> {
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(invalid(format!("r0 must be positive, got {r0}")));
    }
    if nu.has_atom_at_origin() {
        return Err(Error::AtomAtOrigin);
    }
    let (on, off) = nu.split_axis();
    let mut boundary_atoms = Vec::new();
    let terms = off
        .atoms()
        .iter()
        .map(|a| {
            let m = a.modulus();
            if m == r0 {
                boundary_atoms.push(a.z);
            }
            PoissonTerm {
                x: a.z.re,
                v: a.z.im,
                mass: a.mass,
                genus_one: m >= r0,
            }
        })
        .collect();
    let atoms = on.atoms().iter().map(|a| (a.z.im, a.mass)).collect();
    let mut notes = Vec::new();
    if !boundary_atoms.is_empty() {
        notes.push(format!(
            "{} atoms on |z| = r0 swept with the genus-one kernel",
            boundary_atoms.len()
        ));
    }
    Ok(BalayageResult {
        line: LineCharge::new(terms, atoms),
        retained: on,
        genus: Genus::One,
        r0: Some(r0),
        boundary_atoms,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::quad::{integrate_with_breaks, QuadOptions};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn omega_examples() {
        assert!((omega(c(1.0, 0.0), 0.0, 1.0).unwrap().value - 0.25).abs() < 1e-15);
        assert_eq!(omega(c(1.0, 0.0), 0.7, 0.7).unwrap().value, 0.0);
        assert!((omega(c(-1.0, 0.0), 0.0, 1.0).unwrap().value - 0.25).abs() < 1e-15);
        let p = omega(c(0.0, 2.0), 0.0, 3.0).unwrap();
        assert!(p.point_mass && p.value == 1.0);
        assert_eq!(omega(c(0.0, 2.0), 2.0, 3.0).unwrap().value, 0.0);
        assert!(omega(c(1.0, 0.0), 1.0, 0.0).is_err());
    }

    #[test]
    fn omega_matches_defining_integral() {
        let z = c(0.3, -1.2);
        let f = |y: f64| (Complex64::new(0.0, y) - z).inv().re.abs() / PI;
        let q = integrate_with_breaks(f, &[-2.0, z.im, 5.0], QuadOptions::abs(1e-13));
        assert!((q.value - omega(z, -2.0, 5.0).unwrap().value).abs() < 1e-11);
    }

    #[test]
    fn omega_genus1_examples() {
        let v = omega_genus1(c(1.0, 0.0), 0.0, 1.0).unwrap().value;
        assert!((v - (0.25 - 1.0 / PI)).abs() < 1e-15);
        assert!((v + 0.068_309_886).abs() < 1e-8);
        assert_eq!(omega_genus1(c(1.0, 0.0), 2.0, 2.0).unwrap().value, 0.0);
        assert_eq!(omega_genus1(c(0.0, 1.5), 1.0, 2.0).unwrap().value, 1.0);
        assert!(omega_genus1(c(0.0, 0.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn genus0_examples() {
        let d1 = AtomicCharge::from_pairs([(c(1.0, 0.0), 1.0)]).unwrap();
        let b = balayage_genus0(&d1, Genus0Options::default()).unwrap();
        assert!((b.distribution(1.0) - 0.25).abs() < 1e-15);
        assert!((b.density(0.0) - 1.0 / PI).abs() < 1e-15);
        assert!((b.line.total_mass().unwrap() - 1.0).abs() < 1e-15);

        let axis = AtomicCharge::from_pairs([(c(0.0, 2.0), 1.0)]).unwrap();
        let b = balayage_genus0(&axis, Genus0Options::default()).unwrap();
        assert!(b.line.terms().is_empty());
        assert_eq!(b.line.atoms(), &[(2.0, 1.0)]);
        assert_eq!(b.retained, axis);

        let pair = AtomicCharge::from_pairs([(c(1.0, 0.0), 1.0), (c(-1.0, 0.0), 1.0)]).unwrap();
        let b = balayage_genus0(&pair, Genus0Options::default()).unwrap();
        assert!((b.distribution(1.0) - 0.5).abs() < 1e-15);
        for y in [-3.0, 0.0, 0.5, 7.0] {
            assert!((b.density(y) - 2.0 / PI / (1.0 + y * y)).abs() < 1e-15);
        }

        let signed = AtomicCharge::from_pairs([(c(1.0, 0.0), -1.0)]).unwrap();
        assert!(matches!(
            balayage_genus0(&signed, Genus0Options::default()),
            Err(Error::SignedCharge { .. })
        ));
        let n = AtomicCharge::from_pairs((1..=5000).map(|k| (c(k.into(), 0.0), 1.0))).unwrap();
        assert!(matches!(
            balayage_genus0(&n, Genus0Options::default()),
            Err(Error::BlaschkeFailed { .. })
        ));
        let forced = Genus0Options {
            skip_blaschke_check: true,
            ..Genus0Options::default()
        };
        assert!(balayage_genus0(&n, forced).is_ok());
    }

    #[test]
    fn genus1_examples() {
        let d1 = AtomicCharge::from_pairs([(c(1.0, 0.0), 1.0)]).unwrap();
        let b = balayage_genus1(&d1, 0.5).unwrap();
        assert!((b.distribution(1.0) - (0.25 - 1.0 / PI)).abs() < 1e-15);

        let quarter = AtomicCharge::from_pairs([(c(0.25, 0.0), 1.0)]).unwrap();
        let b = balayage_genus1(&quarter, 0.5).unwrap();
        assert!((b.distribution(1.0) - 4f64.atan() / PI).abs() < 1e-15);
        assert!((b.distribution(1.0) - 0.422_02).abs() < 1e-5);

        let axis = AtomicCharge::from_pairs([(c(0.0, 2.0), 1.0), (c(0.0, -1.0), 0.5)]).unwrap();
        let b = balayage_genus1(&axis, 1.0).unwrap();
        assert_eq!(b.retained, axis);
        assert!(b.line.terms().is_empty());

        let edge = AtomicCharge::from_pairs([(c(0.5, 0.0), 1.0)]).unwrap();
        let b = balayage_genus1(&edge, 0.5).unwrap();
        assert_eq!(b.boundary_atoms.len(), 1);
        assert!(b.line.terms()[0].genus_one);

        assert!(balayage_genus1(&d1, 0.0).is_err());
        let origin = AtomicCharge::from_pairs([(c(0.0, 0.0), 1.0)]).unwrap();
        assert!(matches!(balayage_genus1(&origin, 1.0), Err(Error::AtomAtOrigin)));
    }

    #[test]
    fn genus1_density_is_derivative_of_distribution() {
        let nu = AtomicCharge::from_pairs([(c(2.0, 1.0), 1.0), (c(-0.3, 0.2), 2.0), (c(1.0, -4.0), -0.5)]).unwrap();
        let b = balayage_genus1(&nu, 1.0).unwrap();
        for y in [-3.0, -0.4, 0.1, 2.5] {
            let h = 1e-5;
            let fd = (b.distribution(y + h) - b.distribution(y - h)) / (2.0 * h);
            assert!((fd - b.density(y)).abs() < 1e-8);
        }
    }
}
