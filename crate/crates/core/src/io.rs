//! Text format for divisors and charges: one atom per line, `re im [mass]`
//! (mass defaults to 1), `#` starts a comment.

use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measures::{Atom, AtomicCharge, Divisor};

/// What a charge file turned out to contain.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed {
    /// every mass was omitted or a positive integer
    Divisor(Divisor),
    Charge(AtomicCharge),
}

impl Parsed {
    pub fn charge(&self) -> AtomicCharge {
        match self {
            Parsed::Divisor(d) => d.to_charge(),
            Parsed::Charge(c) => c.clone(),
        }
    }

    pub fn divisor(&self) -> Option<&Divisor> {
        match self {
            Parsed::Divisor(d) => Some(d),
            Parsed::Charge(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    pub forbid_origin: bool,
    /// decimal digits used when merging equal locations
    pub precision: Option<u32>,
}

struct Line {
    number: usize,
    z: Complex64,
    mass: Option<f64>,
    text: String,
}

fn parse_lines(text: &str, opts: ParseOptions) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: number,
                message: format!("expected `re im [mass]`, got {content:?}"),
            });
        }
        let num = |s: &str, what: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line: number,
                message: format!("{what} {s:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line: number,
                    message: format!("{what} {s:?} is not finite"),
                });
            }
            Ok(v)
        };
        let z = Complex64::new(num(fields[0], "real part")?, num(fields[1], "imaginary part")?);
        let mass = match fields.get(2) {
            Some(s) => Some(num(s, "mass")?),
            None => None,
        };
        if opts.forbid_origin && z == Complex64::new(0.0, 0.0) {
            return Err(Error::Parse {
                line: number,
                message: format!("atom at the origin is not allowed: {content:?}"),
            });
        }
        if mass == Some(0.0) {
            return Err(Error::Parse {
                line: number,
                message: "mass must be nonzero".into(),
            });
        }
        out.push(Line {
            number,
            z,
            mass,
            text: content.to_string(),
        });
    }
    Ok(out)
}

fn as_multiplicity(m: Option<f64>) -> Option<u32> {
    match m {
        None => Some(1),
        Some(v) if v >= 1.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX) => Some(v as u32),
        _ => None,
    }
}

/// Parses a file body, classifying it as a divisor when every mass is a
/// positive integer (or omitted).
pub fn parse(text: &str, opts: ParseOptions) -> Result<Parsed> {
    let lines = parse_lines(text, opts)?;
    if lines.iter().all(|l| as_multiplicity(l.mass).is_some()) {
        let atoms = lines.iter().map(|l| (l.z, as_multiplicity(l.mass).unwrap()));
        return Ok(Parsed::Divisor(Divisor::with_precision(atoms, opts.precision)?));
    }
    let atoms = lines.iter().map(|l| Atom::new(l.z, l.mass.unwrap_or(1.0)));
    Ok(Parsed::Charge(AtomicCharge::with_precision(atoms, opts.precision)?))
}

/// Parses a file that must describe a divisor.
pub fn parse_divisor(text: &str, opts: ParseOptions) -> Result<Divisor> {
    let lines = parse_lines(text, opts)?;
    let mut atoms = Vec::with_capacity(lines.len());
    for l in &lines {
        match as_multiplicity(l.mass) {
            Some(m) => atoms.push((l.z, m)),
            None => {
                return Err(Error::Parse {
                    line: l.number,
                    message: format!("divisor multiplicity must be a positive integer: {:?}", l.text),
                })
            }
        }
    }
    Divisor::with_precision(atoms, opts.precision)
}

pub fn read(path: impl AsRef<Path>, opts: ParseOptions) -> Result<Parsed> {
    parse(&std::fs::read_to_string(path)?, opts)
}

/// Writes a charge in the same format (17 significant digits).
pub fn format_charge(charge: &AtomicCharge) -> String {
    let mut s = String::new();
    for a in charge.atoms() {
        s.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", a.z.re, a.z.im, a.mass));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_file() {
        let p = parse("1 0\n2 0\n", ParseOptions::default()).unwrap();
        let d = p.divisor().unwrap();
        assert_eq!(
            d.atoms(),
            &[(Complex64::new(1.0, 0.0), 1), (Complex64::new(2.0, 0.0), 1)]
        );
    }

    #[test]
    fn charge_file() {
        let p = parse("0 1 2.5", ParseOptions::default()).unwrap();
        match p {
            Parsed::Charge(c) => {
                assert_eq!(c.atoms(), &[Atom::new(Complex64::new(0.0, 1.0), 2.5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let p = parse("# header\n\n 3 4 2 # double\n", ParseOptions::default()).unwrap();
        assert_eq!(p.divisor().unwrap().atoms(), &[(Complex64::new(3.0, 4.0), 2)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse("x y", ParseOptions::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match parse("1 0\n1 2 3 4\n", ParseOptions::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        let opts = ParseOptions {
            forbid_origin: true,
            ..Default::default()
        };
        match parse("1 0\n0 0\n", opts) {
            Err(Error::Parse { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("origin"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_divisor("1 0 0.5", ParseOptions::default()).is_err());
    }

    #[test]
    fn format_round_trips() {
        let c = AtomicCharge::from_pairs([(Complex64::new(0.1, -2.0 / 3.0), -1.25)]).unwrap();
        match parse(&format_charge(&c), ParseOptions::default()).unwrap() {
            Parsed::Charge(back) => assert_eq!(back, c),
            other => panic!("{other:?}"),
        }
    }
}
