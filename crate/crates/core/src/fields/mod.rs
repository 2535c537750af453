//! Base schemes: rings of integers of number fields and finite fields.
//!
//! A [`NumberField`] only carries what the downstream formulas need: the
//! degree, the signature `(r1, r2)`, the discriminant when it is known, and
//! optionally a table of prime splittings for numeric Euler products.

pub mod primes;
mod special;
mod zeta;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use special::{
    special_value_even, special_value_rational, zeta_at_zero, SpecialValue, SpecialValueKind,
    SymbolicFactor,
};
pub use zeta::{euler_factor, ord_at_integer, zeta_partial_eval, LocalFactor, QuadraticSplitting};

use primes::{is_prime, prime_power, squarefree_part};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("signature mismatch: r1 + 2*r2 = {sum} but degree is {degree}")]
    Signature { degree: u32, sum: u32 },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("the rationals have signature (1, 0), got ({r1}, {r2})")]
    RationalSignature { r1: u32, r2: u32 },
    #[error("quadratic field {label} needs a discriminant")]
    MissingDiscriminant { label: String },
    #[error("discriminant {disc} does not define a quadratic field")]
    DegenerateDiscriminant { disc: i64 },
    #[error("discriminant sign of {disc} does not match signature ({r1}, {r2})")]
    DiscriminantSign { disc: i64, r1: u32, r2: u32 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("splitting data at p = {p}: sum of e*f*g is {sum}, expected degree {degree}")]
    SplittingDegree { p: u64, sum: u32, degree: u32 },
    #[error("field {label} has no splitting data for p = {p}")]
    UnsupportedField { label: String, p: u64 },
    #[error("zeta evaluation needs real s > 1, got {0}")]
    OutsideConvergence(f64),
    #[error("{what} is defined only for {range}, got {got}")]
    Domain {
        what: &'static str,
        range: &'static str,
        got: i64,
    },
}

/// One prime of `O_K` above a rational prime, repeated `count` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimeAbove {
    pub ramification: u32,
    pub residue_degree: u32,
    pub count: u32,
}

/// A number field, described by its signature and (optionally) its
/// discriminant and prime splittings. Stands for the base `Spec O_K`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NumberField {
    label: String,
    degree: u32,
    r1: u32,
    r2: u32,
    disc: Option<i64>,
    splitting: BTreeMap<u64, Vec<PrimeAbove>>,
}

/// Unvalidated field description, as read from a config file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldSpec {
    pub label: String,
    pub degree: u32,
    pub r1: u32,
    pub r2: u32,
    pub disc: Option<i64>,
    pub splitting: Vec<(u64, Vec<PrimeAbove>)>,
}

impl NumberField {
    pub fn rationals() -> Self {
        NumberField {
            label: "Q".into(),
            degree: 1,
            r1: 1,
            r2: 0,
            disc: Some(1),
            splitting: BTreeMap::new(),
        }
    }

    /// `Q(sqrt d)`. A non-square-free `d` is reduced to its square-free part
    /// with a warning.
    pub fn quadratic(d: i64) -> Result<Self, FieldError> {
        if d == 0 {
            return Err(FieldError::DegenerateDiscriminant { disc: 0 });
        }
        let sf = squarefree_part(d);
        if sf == 1 {
            return Err(FieldError::DegenerateDiscriminant { disc: d });
        }
        if sf != d {
            log::warn!("Q(sqrt {d}) normalized to Q(sqrt {sf})");
        }
        let disc = if sf.rem_euclid(4) == 1 { sf } else { 4 * sf };
        let (r1, r2) = if sf > 0 { (2, 0) } else { (0, 1) };
        Ok(NumberField {
            label: format!("Q(sqrt {sf})"),
            degree: 2,
            r1,
            r2,
            disc: Some(disc),
            splitting: BTreeMap::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn r1(&self) -> u32 {
        self.r1
    }

    pub fn r2(&self) -> u32 {
        self.r2
    }

    pub fn disc(&self) -> Option<i64> {
        self.disc
    }

    pub fn splitting(&self) -> &BTreeMap<u64, Vec<PrimeAbove>> {
        &self.splitting
    }

    pub fn is_rationals(&self) -> bool {
        self.degree == 1
    }

    /// Square-free `d` with `K = Q(sqrt d)`, for quadratic fields with a
    /// known discriminant.
    pub fn quadratic_radicand(&self) -> Option<i64> {
        if self.degree != 2 {
            return None;
        }
        let disc = self.disc?;
        Some(if disc.rem_euclid(4) == 0 {
            disc / 4
        } else {
            disc
        })
    }

    /// Rank of the unit group, `r1 + r2 - 1`.
    pub fn unit_rank(&self) -> u32 {
        self.r1 + self.r2 - 1
    }
}

impl fmt::Display for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Validates a field description.
///
/// Quadratic fields are normalized to a fundamental discriminant. When the
/// description is the rationals or a quadratic field, the canonical label
/// replaces the given one only if the given label is empty.
pub fn make_number_field(spec: &FieldSpec) -> Result<NumberField, FieldError> {
    if spec.degree == 0 {
        return Err(FieldError::ZeroDegree);
    }
    let sum = spec.r1 + 2 * spec.r2;
    if sum != spec.degree {
        return Err(FieldError::Signature {
            degree: spec.degree,
            sum,
        });
    }
    let mut field = match spec.degree {
        1 => {
            if (spec.r1, spec.r2) != (1, 0) {
                return Err(FieldError::RationalSignature {
                    r1: spec.r1,
                    r2: spec.r2,
                });
            }
            NumberField::rationals()
        }
        2 => {
            let disc = spec.disc.ok_or_else(|| FieldError::MissingDiscriminant {
                label: spec.label.clone(),
            })?;
            if disc == 0 {
                return Err(FieldError::DegenerateDiscriminant { disc });
            }
            if (disc > 0) != (spec.r1 == 2) {
                return Err(FieldError::DiscriminantSign {
                    disc,
                    r1: spec.r1,
                    r2: spec.r2,
                });
            }
            let field = NumberField::quadratic(squarefree_part(disc))?;
            if field.disc != Some(disc) {
                log::warn!(
                    "discriminant {disc} is not fundamental; using {}",
                    field.disc.unwrap_or_default()
                );
            }
            field
        }
        _ => NumberField {
            label: format!("K[{},{},{}]", spec.degree, spec.r1, spec.r2),
            degree: spec.degree,
            r1: spec.r1,
            r2: spec.r2,
            disc: spec.disc,
            splitting: BTreeMap::new(),
        },
    };
    if !spec.label.is_empty() {
        field.label = spec.label.clone();
    }
    for (p, primes) in &spec.splitting {
        if !is_prime(*p) {
            return Err(FieldError::NotPrime(*p));
        }
        let total: u32 = primes
            .iter()
            .map(|q| q.ramification * q.residue_degree * q.count)
            .sum();
        if total != spec.degree {
            return Err(FieldError::SplittingDegree {
                p: *p,
                sum: total,
                degree: spec.degree,
            });
        }
        let mut sorted = primes.clone();
        sorted.sort();
        field.splitting.insert(*p, sorted);
    }
    Ok(field)
}

/// The finite field with `q = p^f` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteField {
    p: u64,
    f: u32,
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self, FieldError> {
        let (p, f) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Ok(FiniteField { p, f })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn exponent(&self) -> u32 {
        self.f
    }

    pub fn size(&self) -> u64 {
        self.p.pow(self.f)
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({})", self.size())
    }
}

/// Base of a stratum: `Spec O_K` or `Spec F_q`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    Number(NumberField),
    Finite(FiniteField),
}

impl Base {
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Number(k) => k.fmt(f),
            Base::Finite(k) => k.fmt(f),
        }
    }
}

impl From<NumberField> for Base {
    fn from(k: NumberField) -> Self {
        Base::Number(k)
    }
}

impl From<FiniteField> for Base {
    fn from(k: FiniteField) -> Self {
        Base::Finite(k)
    }
}
