//! Holomorphic self-maps of the unit disk.
//!
//! A [`DiskSelfMap`] is the Beltrami datum `mu` of an extremal map. Closed-form families
//! satisfy `|mu| <= 1` by construction; user polynomials go through [`validate`] first.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling radius used for sup-norm estimates and polynomial validation.
pub const VALIDATION_RADIUS: f64 = 1.0 - 1e-9;
/// Boundary sample count used when a polynomial is built from text.
pub const DEFAULT_VALIDATION_COUNT: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DiskSelfMap {
    Zero,
    /// `mu(z) = c`, `|c| < 1`.
    Constant(Complex64),
    /// `mu(z) = z^n`, `n >= 1`.
    Monomial(u32),
    /// `mu(z) = k z^n`, `0 <= k < 1`.
    ScaledMonomial { k: f64, n: u32 },
    /// `mu(z) = e^{i phase} (z - a) / (1 - conj(a) z)`.
    BlaschkeFactor { a: Complex64, phase: f64 },
    Polynomial(ValidatedPolynomial),
    Product(Vec<DiskSelfMap>),
}

/// Polynomial whose boundary samples passed [`validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidatedPolynomial {
    coeffs: Vec<Complex64>,
    certified_sup: f64,
}

impl ValidatedPolynomial {
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn certified_sup(&self) -> f64 {
        self.certified_sup
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Outcome of a successful [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    pub certified_sup: f64,
    pub count: usize,
}

impl DiskSelfMap {
    /// Validates `coeffs` on `count` boundary samples and wraps them.
    pub fn polynomial(coeffs: Vec<Complex64>, count: usize) -> Result<Self> {
        let certified_sup = check_boundary(|z| horner(&coeffs, z), count)?;
        Ok(DiskSelfMap::Polynomial(ValidatedPolynomial {
            coeffs,
            certified_sup,
        }))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            DiskSelfMap::Zero => Complex64::new(0.0, 0.0),
            DiskSelfMap::Constant(c) => *c,
            DiskSelfMap::Monomial(n) => z.powu(*n),
            DiskSelfMap::ScaledMonomial { k, n } => *k * z.powu(*n),
            DiskSelfMap::BlaschkeFactor { a, phase } => {
                Complex64::from_polar(1.0, *phase) * (z - a) / (1.0 - a.conj() * z)
            }
            DiskSelfMap::Polynomial(p) => p.eval(z),
            DiskSelfMap::Product(fs) => fs
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, f| acc * f.eval(z)),
        }
    }

    /// Checks the parameter ranges of the closed-form variants.
    pub fn check_params(&self) -> Result<()> {
        match self {
            DiskSelfMap::Zero | DiskSelfMap::Polynomial(_) => Ok(()),
            DiskSelfMap::Constant(c) if c.norm() < 1.0 => Ok(()),
            DiskSelfMap::Constant(c) => Err(Error::InvalidInput(format!(
                "constant {c} must satisfy |c| < 1"
            ))),
            DiskSelfMap::Monomial(0) => {
                Err(Error::InvalidInput("monomial degree must be >= 1".into()))
            }
            DiskSelfMap::Monomial(_) => Ok(()),
            DiskSelfMap::ScaledMonomial { k, .. } if (0.0..1.0).contains(k) => Ok(()),
            DiskSelfMap::ScaledMonomial { k, .. } => Err(Error::InvalidInput(format!(
                "scale {k} must lie in [0, 1)"
            ))),
            DiskSelfMap::BlaschkeFactor { a, phase } if a.norm() < 1.0 && phase.is_finite() => {
                Ok(())
            }
            DiskSelfMap::BlaschkeFactor { a, .. } => Err(Error::InvalidInput(format!(
                "Blaschke zero {a} must lie in the open disk"
            ))),
            DiskSelfMap::Product(fs) if fs.is_empty() => {
                Err(Error::InvalidInput("empty product".into()))
            }
            DiskSelfMap::Product(fs) => fs.iter().try_for_each(|f| f.check_params()),
        }
    }

    /// True when `|mu| = 1` almost everywhere on the unit circle.
    pub fn is_inner(&self) -> bool {
        match self {
            DiskSelfMap::Monomial(_) | DiskSelfMap::BlaschkeFactor { .. } => true,
            DiskSelfMap::Product(fs) => fs.iter().all(|f| f.is_inner()),
            _ => false,
        }
    }

    /// `mu(0)`.
    pub fn at_origin(&self) -> Complex64 {
        self.eval(Complex64::new(0.0, 0.0))
    }
}

fn boundary_samples(count: usize) -> impl Iterator<Item = Complex64> {
    (0..count).map(move |j| Complex64::from_polar(VALIDATION_RADIUS, 2.0 * PI * j as f64 / count as f64))
}

fn check_boundary<F: Fn(Complex64) -> Complex64>(f: F, count: usize) -> Result<f64> {
    if count < 64 {
        return Err(Error::InvalidInput(format!("validation count {count} < 64")));
    }
    let (z, m) = boundary_max(&f, count);
    if m > 1.0 {
        return Err(Error::ValidationFailed { z, modulus: m });
    }
    Ok(m)
}

fn boundary_max<F: Fn(Complex64) -> Complex64>(f: &F, count: usize) -> (Complex64, f64) {
    let mut best = (Complex64::new(VALIDATION_RADIUS, 0.0), f64::NEG_INFINITY);
    for z in boundary_samples(count) {
        let m = f(z).norm();
        if m > best.1 {
            best = (z, m);
        }
    }
    best
}

/// Estimate of `sup |mu|` over the disk from `count` samples near the unit circle.
///
/// Exact for the constant and monomial families, and `1` for inner functions.
pub fn sup_norm_estimate(mu: &DiskSelfMap, count: usize) -> f64 {
    match mu {
        DiskSelfMap::Zero => 0.0,
        DiskSelfMap::Constant(c) => c.norm(),
        DiskSelfMap::Monomial(_) | DiskSelfMap::BlaschkeFactor { .. } => 1.0,
        DiskSelfMap::ScaledMonomial { k, .. } => *k,
        _ if mu.is_inner() => 1.0,
        _ => boundary_max(&|z| mu.eval(z), count.max(1)).1,
    }
}

/// Boundary-sampling check of `|mu| <= 1`.
pub fn validate(mu: &DiskSelfMap, count: usize) -> Result<Certification> {
    mu.check_params()?;
    let certified_sup = check_boundary(|z| mu.eval(z), count)?;
    Ok(Certification {
        certified_sup,
        count,
    })
}

impl fmt::Display for DiskSelfMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiskSelfMap::Zero => write!(f, "zero"),
            DiskSelfMap::Constant(c) => write!(f, "const:{},{}", c.re, c.im),
            DiskSelfMap::Monomial(n) => write!(f, "mono:{n}"),
            DiskSelfMap::ScaledMonomial { k, n } => write!(f, "smono:{k},{n}"),
            DiskSelfMap::BlaschkeFactor { a, phase } => {
                write!(f, "blaschke:{},{},{}", a.re, a.im, phase)
            }
            DiskSelfMap::Polynomial(p) => {
                write!(f, "poly:")?;
                for (j, c) in p.coeffs.iter().enumerate() {
                    if j > 0 {
                        write!(f, ",")?;
                    }
                    write_complex(f, *c)?;
                }
                Ok(())
            }
            DiskSelfMap::Product(fs) => {
                for (j, m) in fs.iter().enumerate() {
                    if j > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}

fn write_complex(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        write!(f, "{}", c.re)
    } else if c.im < 0.0 {
        write!(f, "{}-{}i", c.re, -c.im)
    } else {
        write!(f, "{}+{}i", c.re, c.im)
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also `i`, `-i`, exponents like `1e-3`).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad complex literal {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (&body[..j], &body[j..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

fn parse_u32(s: &str, what: &str) -> Result<u32> {
    s.trim()
        .parse::<u32>()
        .map_err(|_| Error::Parse(format!("bad {what} {s:?}")))
}

fn parse_factor(text: &str) -> Result<DiskSelfMap> {
    let text = text.trim();
    let (head, args) = match text.split_once(':') {
        Some((h, a)) => (h.trim(), a.split(',').map(str::trim).collect::<Vec<_>>()),
        None => (text, Vec::new()),
    };
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "{head} expects {n} argument(s), got {}",
                args.len()
            )))
        }
    };
    let mu = match head {
        "zero" => {
            arity(0)?;
            DiskSelfMap::Zero
        }
        "const" => {
            arity(2)?;
            DiskSelfMap::Constant(Complex64::new(
                parse_f64(args[0], "real part")?,
                parse_f64(args[1], "imaginary part")?,
            ))
        }
        "mono" => {
            arity(1)?;
            DiskSelfMap::Monomial(parse_u32(args[0], "degree")?)
        }
        "smono" => {
            arity(2)?;
            DiskSelfMap::ScaledMonomial {
                k: parse_f64(args[0], "scale")?,
                n: parse_u32(args[1], "degree")?,
            }
        }
        "blaschke" => {
            arity(3)?;
            DiskSelfMap::BlaschkeFactor {
                a: Complex64::new(parse_f64(args[0], "real part")?, parse_f64(args[1], "imaginary part")?),
                phase: parse_f64(args[2], "phase")?,
            }
        }
        "poly" => {
            if args.is_empty() || args.iter().any(|a| a.is_empty()) {
                return Err(Error::Parse("poly expects at least one coefficient".into()));
            }
            let coeffs = args.iter().map(|a| parse_complex(a)).collect::<Result<Vec<_>>>()?;
            return DiskSelfMap::polynomial(coeffs, DEFAULT_VALIDATION_COUNT);
        }
        other => return Err(Error::Parse(format!("unknown map kind {other:?}"))),
    };
    mu.check_params()?;
    Ok(mu)
}

impl FromStr for DiskSelfMap {
    type Err = Error;

    /// Text forms: `zero`, `const:re,im`, `mono:n`, `smono:k,n`, `blaschke:re,im,phase`,
    /// `poly:c0,c1,...` (complex literals such as `0.3`, `0.1-0.2i`), and products of those
    /// joined by `*`.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s.split('*').map(parse_factor).collect::<Result<Vec<_>>>()?;
        if factors.len() == 1 {
            Ok(factors.into_iter().next().unwrap())
        } else {
            Ok(DiskSelfMap::Product(factors))
        }
    }
}
