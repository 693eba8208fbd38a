//! Divisors, atomic charges, line charges on the imaginary axis and the
//! interval grids that stand in for "for all 1 <= r < R" quantifiers.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::numeric::sum::pairwise_sum;

/// A point mass of a charge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub z: Complex64,
    pub mass: f64,
}

impl Atom {
    pub fn new(z: Complex64, mass: f64) -> Self {
        Self { z, mass }
    }

    pub fn modulus(&self) -> f64 {
        self.z.norm()
    }
}

fn cmp_location(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn round_to(x: f64, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    let y = (x * scale).round() / scale;
    // -0.0 and 0.0 must compare equal after rounding
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

fn snap(z: Complex64, precision: Option<u32>) -> Complex64 {
    match precision {
        Some(d) => Complex64::new(round_to(z.re, d), round_to(z.im, d)),
        None => Complex64::new(z.re + 0.0, z.im + 0.0),
    }
}

/// Sorts by location and merges atoms at equal locations.
fn merge<T: Copy>(
    mut items: Vec<(Complex64, T)>,
    precision: Option<u32>,
    add: impl Fn(T, T) -> T,
) -> Vec<(Complex64, T)> {
    for item in items.iter_mut() {
        item.0 = snap(item.0, precision);
    }
    items.sort_by(|a, b| cmp_location(&a.0, &b.0));
    let mut out: Vec<(Complex64, T)> = Vec::with_capacity(items.len());
    for (z, w) in items {
        match out.last_mut() {
            Some(last) if last.0 == z => last.1 = add(last.1, w),
            _ => out.push((z, w)),
        }
    }
    out
}

/// Positive divisor: complex points with positive integer multiplicities.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Divisor {
    atoms: Vec<(Complex64, u32)>,
}

impl Divisor {
    /// Canonicalizes by summing multiplicities at equal locations.
    /// Multiplicity 0 is rejected. Atoms at the origin are kept; operations
    /// that forbid them reject them.
    pub fn new(atoms: impl IntoIterator<Item = (Complex64, u32)>) -> Result<Self> {
        Self::with_precision(atoms, None)
    }

    /// Like [`Divisor::new`] but rounds locations to `precision` decimal
    /// digits before comparing them.
    pub fn with_precision(atoms: impl IntoIterator<Item = (Complex64, u32)>, precision: Option<u32>) -> Result<Self> {
        let items: Vec<(Complex64, u32)> = atoms.into_iter().collect();
        for (z, m) in &items {
            if *m == 0 {
                return Err(invalid("divisor multiplicities must be >= 1"));
            }
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(invalid("divisor atoms must be finite"));
            }
        }
        Ok(Self {
            atoms: merge(items, precision, |a, b| a + b),
        })
    }

    /// Simple points, multiplicity one each.
    pub fn from_points(points: impl IntoIterator<Item = Complex64>) -> Result<Self> {
        Self::new(points.into_iter().map(|z| (z, 1)))
    }

    pub fn atoms(&self) -> &[(Complex64, u32)] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    /// Multiplicity at the origin.
    pub fn origin_multiplicity(&self) -> u32 {
        self.atoms
            .iter()
            .filter(|(z, _)| *z == Complex64::new(0.0, 0.0))
            .map(|(_, m)| *m)
            .sum()
    }

    /// The counting measure `n_Z` as an atomic charge.
    pub fn to_charge(&self) -> AtomicCharge {
        AtomicCharge {
            atoms: self.atoms.iter().map(|&(z, m)| Atom::new(z, f64::from(m))).collect(),
        }
    }

    pub fn union(&self, other: &Divisor) -> Divisor {
        Divisor {
            atoms: merge(
                self.atoms.iter().chain(other.atoms.iter()).copied().collect(),
                None,
                |a, b| a + b,
            ),
        }
    }
}

/// Signed measure with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct AtomicCharge {
    atoms: Vec<Atom>,
}

impl AtomicCharge {
    /// Canonical form: one atom per location, zero net masses dropped.
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        Self::with_precision(atoms, None)
    }

    pub fn with_precision(atoms: impl IntoIterator<Item = Atom>, precision: Option<u32>) -> Result<Self> {
        let items: Vec<(Complex64, f64)> = atoms.into_iter().map(|a| (a.z, a.mass)).collect();
        for (z, m) in &items {
            if !m.is_finite() || !z.re.is_finite() || !z.im.is_finite() {
                return Err(invalid("charge atoms must have finite location and mass"));
            }
        }
        let atoms = merge(items, precision, |a, b| a + b)
            .into_iter()
            .filter(|(_, m)| *m != 0.0)
            .map(|(z, m)| Atom::new(z, m))
            .collect();
        Ok(Self { atoms })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Convenience constructor from `(location, mass)` pairs.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Complex64, f64)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(z, m)| Atom::new(z, m)))
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn positive_part(&self) -> AtomicCharge {
        AtomicCharge {
            atoms: self.atoms.iter().copied().filter(|a| a.mass > 0.0).collect(),
        }
    }

    pub fn negative_part(&self) -> AtomicCharge {
        AtomicCharge {
            atoms: self
                .atoms
                .iter()
                .filter(|a| a.mass < 0.0)
                .map(|a| Atom::new(a.z, -a.mass))
                .collect(),
        }
    }

    /// `|mu| = mu+ + mu-`.
    pub fn total_variation(&self) -> AtomicCharge {
        AtomicCharge {
            atoms: self.atoms.iter().map(|a| Atom::new(a.z, a.mass.abs())).collect(),
        }
    }

    pub fn total_variation_mass(&self) -> f64 {
        pairwise_sum(&self.atoms.iter().map(|a| a.mass.abs()).collect::<Vec<_>>())
    }

    pub fn total_mass(&self) -> f64 {
        pairwise_sum(&self.atoms.iter().map(|a| a.mass).collect::<Vec<_>>())
    }

    pub fn is_positive(&self) -> bool {
        self.atoms.iter().all(|a| a.mass > 0.0)
    }

    /// `a * self + b * other`, canonicalized.
    pub fn combine(&self, a: f64, other: &AtomicCharge, b: f64) -> AtomicCharge {
        let atoms = self
            .atoms
            .iter()
            .map(|x| Atom::new(x.z, a * x.mass))
            .chain(other.atoms.iter().map(|x| Atom::new(x.z, b * x.mass)));
        // finite inputs stay finite
        AtomicCharge::new(atoms).expect("finite combination")
    }

    /// Applies `f` to every location (masses unchanged).
    pub fn map_locations(&self, f: impl Fn(Complex64) -> Complex64) -> AtomicCharge {
        AtomicCharge::new(self.atoms.iter().map(|a| Atom::new(f(a.z), a.mass))).expect("finite map")
    }

    pub fn max_modulus(&self) -> f64 {
        self.atoms.iter().map(Atom::modulus).fold(0.0, f64::max)
    }

    pub fn has_atom_at_origin(&self) -> bool {
        self.atoms.iter().any(|a| a.z == Complex64::new(0.0, 0.0))
    }

    /// Splits into the part on the imaginary axis and the rest.
    pub fn split_axis(&self) -> (AtomicCharge, AtomicCharge) {
        let (on, off): (Vec<Atom>, Vec<Atom>) = self.atoms.iter().partition(|a| a.z.re == 0.0);
        (AtomicCharge { atoms: on }, AtomicCharge { atoms: off })
    }
}

impl From<&Divisor> for AtomicCharge {
    fn from(d: &Divisor) -> Self {
        d.to_charge()
    }
}

/// `nu(closed disk of radius r centred at 0)`.
pub fn counting_radial(charge: &AtomicCharge, r: f64) -> f64 {
    let inside: Vec<f64> = charge
        .atoms()
        .iter()
        .filter(|a| a.modulus() <= r)
        .map(|a| a.mass)
        .collect();
    pairwise_sum(&inside)
}

/// Multiplicity-weighted count of divisor points in the closed disk.
pub fn counting_radial_divisor(divisor: &Divisor, r: f64) -> u64 {
    divisor
        .atoms()
        .iter()
        .filter(|(z, _)| z.norm() <= r)
        .map(|(_, m)| u64::from(*m))
        .sum()
}

/// Upper-density samples `|nu|^rad(r) / r` with their tail supremum.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// supremum over the upper half (by index) of the radii
    pub tail_sup: f64,
}

pub fn upper_density_profile(charge: &AtomicCharge, radii: &[f64]) -> Result<DensityProfile> {
    if radii.iter().any(|r| !(*r > 0.0)) {
        return Err(invalid("radii must be positive"));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("radii must be strictly increasing"));
    }
    let mut moduli: Vec<(f64, f64)> = charge.atoms().iter().map(|a| (a.modulus(), a.mass.abs())).collect();
    moduli.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut values = Vec::with_capacity(radii.len());
    let mut idx = 0;
    let mut acc = crate::numeric::sum::Compensated::new();
    for &r in radii {
        while idx < moduli.len() && moduli[idx].0 <= r {
            acc.add(moduli[idx].1);
            idx += 1;
        }
        values.push(acc.value() / r);
    }
    let start = values.len() / 2;
    let tail_sup = values[start..].iter().copied().fold(0.0, f64::max);
    Ok(DensityProfile {
        radii: radii.to_vec(),
        values,
        tail_sup,
    })
}

/// One term of the absolutely continuous part of a [`LineCharge`]: the
/// harmonic-measure density of the atom `x + iv` (x != 0) scaled by `mass`,
/// optionally minus the constant `|Re 1/z| / pi` of the genus-one kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonTerm {
    pub x: f64,
    pub v: f64,
    pub mass: f64,
    pub genus_one: bool,
}

impl PoissonTerm {
    fn x_abs(&self) -> f64 {
        self.x.abs()
    }

    /// `|Re 1/z|`
    fn re_inv_abs(&self) -> f64 {
        self.x_abs() / (self.x * self.x + self.v * self.v)
    }

    pub fn density(&self, y: f64) -> f64 {
        let xa = self.x_abs();
        let d = y - self.v;
        let base = xa / (xa * xa + d * d);
        let val = if self.genus_one {
            // 1/(x^2+(y-v)^2) - 1/(x^2+v^2) without cancellation
            base * y * (2.0 * self.v - y) / (xa * xa + self.v * self.v)
        } else {
            base
        };
        self.mass * val / std::f64::consts::PI
    }

    /// Signed mass of `[0, iy]` (y >= 0) or minus the mass of `[iy, 0)`.
    pub fn distribution(&self, y: f64) -> f64 {
        let xa = self.x_abs();
        let mut val = ((y - self.v) / xa).atan() - (-self.v / xa).atan();
        if self.genus_one && y.is_finite() {
            val -= y * self.re_inv_abs();
        }
        self.mass * val / std::f64::consts::PI
    }
}

/// Charge on the imaginary axis: an analytic absolutely continuous part
/// plus point masses at ordinates `y`.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct LineCharge {
    terms: Vec<PoissonTerm>,
    /// `(y, mass)`, sorted by `y`, merged
    atoms: Vec<(f64, f64)>,
}

impl LineCharge {
    pub fn new(terms: Vec<PoissonTerm>, atoms: Vec<(f64, f64)>) -> Self {
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(atoms.len());
        let mut sorted = atoms;
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (y, m) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == y => last.1 += m,
                _ => merged.push((y, m)),
            }
        }
        merged.retain(|a| a.1 != 0.0);
        Self { terms, atoms: merged }
    }

    pub fn terms(&self) -> &[PoissonTerm] {
        &self.terms
    }

    pub fn atoms(&self) -> &[(f64, f64)] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.atoms.is_empty()
    }

    /// Density of the absolutely continuous part at ordinate `y`.
    pub fn density(&self, y: f64) -> f64 {
        pairwise_sum(&self.terms.iter().map(|t| t.density(y)).collect::<Vec<_>>())
    }

    /// Distribution function `F(iy)`: `charge([0, iy])` for `y >= 0` and
    /// `-charge([iy, 0))` for `y < 0`.
    pub fn distribution(&self, y: f64) -> f64 {
        let cont = pairwise_sum(&self.terms.iter().map(|t| t.distribution(y)).collect::<Vec<_>>());
        cont + self.atom_distribution(y)
    }

    fn atom_distribution(&self, y: f64) -> f64 {
        let vals: Vec<f64> = if y >= 0.0 {
            self.atoms
                .iter()
                .filter(|(a, _)| *a >= 0.0 && *a <= y)
                .map(|(_, m)| *m)
                .collect()
        } else {
            self.atoms
                .iter()
                .filter(|(a, _)| *a >= y && *a < 0.0)
                .map(|(_, m)| -*m)
                .collect()
        };
        pairwise_sum(&vals)
    }

    /// Charge of the half-open interval `(i y1, i y2]`.
    pub fn interval_mass(&self, y1: f64, y2: f64) -> f64 {
        self.distribution(y2) - self.distribution(y1)
    }

    /// Sum of the point masses with `y1 < y <= y2`.
    pub fn atom_mass_in(&self, y1: f64, y2: f64) -> f64 {
        pairwise_sum(
            &self
                .atoms
                .iter()
                .filter(|(y, _)| *y > y1 && *y <= y2)
                .map(|(_, m)| *m)
                .collect::<Vec<_>>(),
        )
    }

    /// Total mass when the charge is finite (no genus-one terms):
    /// `F(+inf) - F(-inf)` from the closed forms.
    pub fn total_mass(&self) -> Option<f64> {
        if self.terms.iter().any(|t| t.genus_one) {
            return None;
        }
        let cont: Vec<f64> = self
            .terms
            .iter()
            .map(|t| t.distribution(f64::INFINITY) - t.distribution(f64::NEG_INFINITY))
            .collect();
        let atoms: Vec<f64> = self.atoms.iter().map(|a| a.1).collect();
        Some(pairwise_sum(&cont) + pairwise_sum(&atoms))
    }

    /// Ordinates where the density varies fastest (Poisson peaks) and the
    /// point masses; used as quadrature break points.
    pub fn feature_ordinates(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .terms
            .iter()
            .map(|t| t.v)
            .chain(self.atoms.iter().map(|a| a.0))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Smallest `|x|` among the Poisson terms, the narrowest peak width.
    pub fn min_width(&self) -> Option<f64> {
        self.terms.iter().map(|t| t.x.abs()).min_by(f64::total_cmp)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &LineCharge, b: f64) -> LineCharge {
        let scale = |t: &PoissonTerm, s: f64| PoissonTerm { mass: t.mass * s, ..*t };
        let terms = self
            .terms
            .iter()
            .map(|t| scale(t, a))
            .chain(other.terms.iter().map(|t| scale(t, b)))
            .collect();
        let atoms = self
            .atoms
            .iter()
            .map(|&(y, m)| (y, a * m))
            .chain(other.atoms.iter().map(|&(y, m)| (y, b * m)))
            .collect();
        LineCharge::new(terms, atoms)
    }
}

/// Distribution of a charge that lives on the imaginary axis.
pub fn distribution_on_line(charge: &AtomicCharge) -> Result<LineCharge> {
    let mut atoms = Vec::with_capacity(charge.len());
    for a in charge.atoms() {
        if a.z.re != 0.0 {
            return Err(Error::OffAxisAtom { re: a.z.re, im: a.z.im });
        }
        atoms.push((a.z.im, a.mass));
    }
    Ok(LineCharge::new(Vec::new(), atoms))
}

/// Pairs `(r, R)` with `1 <= r < R`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalGrid {
    pairs: Vec<(f64, f64)>,
    /// `rmin:rmax:ratio` when built geometrically
    #[serde(skip_serializing_if = "Option::is_none")]
    spec: Option<GridSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct GridSpec {
    pub rmin: f64,
    pub rmax: f64,
    pub ratio: f64,
}

impl GridSpec {
    pub fn new(rmin: f64, rmax: f64, ratio: f64) -> Self {
        Self { rmin, rmax, ratio }
    }

    /// Parses `rmin:rmax:ratio`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid(format!("grid must be rmin:rmax:ratio, got {s:?}")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| invalid(format!("bad number {p:?} in grid {s:?}")))
        };
        Ok(Self::new(num(parts[0])?, num(parts[1])?, num(parts[2])?))
    }

    /// Geometric points `rmin * ratio^k <= rmax`, with `rmax` appended when
    /// the last point falls short of it.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.rmin > 0.0) || !(self.rmax > self.rmin) || !(self.ratio > 1.0) {
            return Err(invalid(format!(
                "grid needs 0 < rmin < rmax and ratio > 1, got {}:{}:{}",
                self.rmin, self.rmax, self.ratio
            )));
        }
        let mut pts = Vec::new();
        let mut k = 0;
        loop {
            let p = self.rmin * self.ratio.powi(k);
            if p > self.rmax * (1.0 + 1e-12) {
                break;
            }
            pts.push(p.min(self.rmax));
            k += 1;
        }
        if *pts.last().unwrap() < self.rmax * (1.0 - 1e-12) {
            pts.push(self.rmax);
        }
        Ok(pts)
    }
}

impl IntervalGrid {
    /// All pairs of distinct geometric points.
    pub fn geometric(spec: GridSpec) -> Result<Self> {
        if spec.rmin < 1.0 {
            return Err(invalid("interval grids start at r >= 1"));
        }
        let pts = spec.points()?;
        let mut pairs = Vec::with_capacity(pts.len() * pts.len() / 2);
        for (i, &r) in pts.iter().enumerate() {
            for &big_r in &pts[i + 1..] {
                pairs.push((r, big_r));
            }
        }
        Ok(Self {
            pairs,
            spec: Some(spec),
        })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = pairs.into_iter().collect();
        for &(r, big_r) in &pairs {
            if !(r >= 1.0) || !(big_r > r) || !big_r.is_finite() {
                return Err(invalid(format!("grid pair ({r}, {big_r}) violates 1 <= r < R < inf")));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pairs.dedup();
        if pairs.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(Self { pairs, spec: None })
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }

    pub fn spec(&self) -> Option<GridSpec> {
        self.spec
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn r_min(&self) -> f64 {
        self.pairs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min)
    }

    pub fn big_r_max(&self) -> f64 {
        self.pairs.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distinct left endpoints, ascending.
    pub fn left_points(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.pairs.iter().map(|p| p.0).collect();
        v.dedup();
        v
    }
}
