//! Scheme expressions and their cellular decompositions.
//!
//! Every scheme we handle is a tower of bundles (affine, projective,
//! Grassmannian, partial flag) over a base `Spec O_K` or `Spec F_q`, or a
//! disjoint union of those. A bundle enters only through its rank, so a
//! scheme is fully described for our purposes by the multiset of strata
//! `(base, shift d, multiplicity l)`: `l` copies of affine `d`-space over
//! the base.

mod brute;
mod qpoly;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;
use thiserror::Error;

use crate::fields::{Base, FiniteField, NumberField};

pub use brute::{
    brute_force_flag_count, brute_force_flag_count_with, SmallField, BRUTE_FORCE_LIMIT,
};
pub use qpoly::{flag_polynomial_by_tower, gaussian_multinomial, QPolynomial};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CellError {
    #[error("invalid flag type {parts:?} for rank {n}")]
    FlagType { n: u32, parts: Vec<u32> },
    #[error("Grassmannian of {k}-planes in rank {n} needs k <= n")]
    Grassmannian { k: u32, n: u32 },
    #[error("empty disjoint union")]
    EmptyUnion,
    #[error("cell multiplicity overflowed u64")]
    Overflow,
    #[error("point counting needs finite-field bases, found {0}")]
    NumberFieldBase(String),
    #[error("mixed finite-field bases {0} and {1}")]
    MixedBases(String, String),
    #[error("point counts are defined for r >= 1")]
    ZeroExtension,
    #[error("brute-force enumeration refused: q^n = {size} exceeds {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error(transparent)]
    Field(#[from] crate::fields::FieldError),
}

/// A scheme built from base points by bundle constructions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SchemeExpr {
    BasePoint(NumberField),
    FiniteBase(FiniteField),
    /// Rank-`d` vector bundle (fibers `A^d`).
    Affine(Box<SchemeExpr>, u32),
    /// Projective bundle with fibers `P^d`.
    ProjBundle(Box<SchemeExpr>, u32),
    /// Grassmannian of `k`-planes in a rank-`n` bundle.
    Grassmannian(Box<SchemeExpr>, u32, u32),
    /// Partial flags of type `(n_1, ..., n_l)` in a bundle of rank `sum n_i`.
    FlagBundle(Box<SchemeExpr>, Vec<u32>),
    DisjointUnion(Vec<SchemeExpr>),
}

impl SchemeExpr {
    pub fn base(field: NumberField) -> Self {
        SchemeExpr::BasePoint(field)
    }

    pub fn finite(field: FiniteField) -> Self {
        SchemeExpr::FiniteBase(field)
    }

    pub fn affine(self, d: u32) -> Self {
        SchemeExpr::Affine(Box::new(self), d)
    }

    pub fn proj(self, d: u32) -> Self {
        SchemeExpr::ProjBundle(Box::new(self), d)
    }

    pub fn grassmannian(self, k: u32, n: u32) -> Result<Self, CellError> {
        if k > n {
            return Err(CellError::Grassmannian { k, n });
        }
        Ok(SchemeExpr::Grassmannian(Box::new(self), k, n))
    }

    pub fn flag(self, parts: Vec<u32>) -> Result<Self, CellError> {
        qpoly::validate_flag_type(parts.iter().sum(), &parts)?;
        Ok(SchemeExpr::FlagBundle(Box::new(self), parts))
    }

    pub fn union(parts: Vec<SchemeExpr>) -> Result<Self, CellError> {
        if parts.is_empty() {
            return Err(CellError::EmptyUnion);
        }
        Ok(SchemeExpr::DisjointUnion(parts))
    }

    /// Checks the invariants of every node; enum literals can bypass the
    /// validating constructors.
    pub fn validate(&self) -> Result<(), CellError> {
        match self {
            SchemeExpr::BasePoint(_) | SchemeExpr::FiniteBase(_) => Ok(()),
            SchemeExpr::Affine(c, _) | SchemeExpr::ProjBundle(c, _) => c.validate(),
            SchemeExpr::Grassmannian(c, k, n) => {
                if k > n {
                    return Err(CellError::Grassmannian { k: *k, n: *n });
                }
                c.validate()
            }
            SchemeExpr::FlagBundle(c, parts) => {
                qpoly::validate_flag_type(parts.iter().sum(), parts)?;
                c.validate()
            }
            SchemeExpr::DisjointUnion(parts) => {
                if parts.is_empty() {
                    return Err(CellError::EmptyUnion);
                }
                parts.iter().try_for_each(SchemeExpr::validate)
            }
        }
    }

    /// Cell polynomial of the fiber of the outermost bundle.
    fn fiber_cells(&self) -> Result<Option<QPolynomial>, CellError> {
        Ok(Some(match self {
            SchemeExpr::Affine(_, d) => QPolynomial::monomial(*d),
            SchemeExpr::ProjBundle(_, d) => QPolynomial::projective(*d),
            SchemeExpr::Grassmannian(_, k, n) => QPolynomial::gaussian_binomial(*n, *k)?,
            SchemeExpr::FlagBundle(_, parts) => gaussian_multinomial(parts.iter().sum(), parts)?,
            _ => return Ok(None),
        }))
    }
}

/// Builds `Fl(parts)` over `child` as a tower of Grassmannian bundles: the
/// first `n_1`-plane, then the next plane in the quotient, and so on.
pub fn flag_tower(child: SchemeExpr, parts: &[u32]) -> Result<SchemeExpr, CellError> {
    let n: u32 = parts.iter().sum();
    qpoly::validate_flag_type(n, parts)?;
    let mut expr = child;
    let mut remaining = n;
    for &p in parts {
        expr = expr.grassmannian(p, remaining)?;
        remaining -= p;
    }
    Ok(expr)
}

impl fmt::Display for SchemeExpr {
    /// Prints in the textual scheme syntax accepted by the CLI.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeExpr::BasePoint(k) => write!(f, "{k}"),
            SchemeExpr::FiniteBase(k) => write!(f, "{k}"),
            SchemeExpr::Affine(c, d) => write!(f, "affine({c}, {d})"),
            SchemeExpr::ProjBundle(c, d) => write!(f, "proj({c}, {d})"),
            SchemeExpr::Grassmannian(c, k, n) => write!(f, "grass({c}, {k}, {n})"),
            SchemeExpr::FlagBundle(c, parts) => {
                let ty: Vec<String> = parts.iter().map(u32::to_string).collect();
                write!(f, "flag({c}, {})", ty.join("+"))
            }
            SchemeExpr::DisjointUnion(parts) => {
                let inner: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "union({})", inner.join(", "))
            }
        }
    }
}

/// `multiplicity` copies of affine `shift`-space over `base`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stratum {
    pub base: Base,
    pub shift: u32,
    pub multiplicity: u64,
}

#[derive(Serialize)]
struct StratumRow<'a> {
    base: String,
    shift: u32,
    multiplicity: &'a u64,
}

impl Serialize for Stratum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        StratumRow {
            base: self.base.label(),
            shift: self.shift,
            multiplicity: &self.multiplicity,
        }
        .serialize(s)
    }
}

/// Canonical multiset of strata: sorted by `(base, shift)` with equal
/// entries merged.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CellDecomposition {
    strata: Vec<Stratum>,
}

impl CellDecomposition {
    pub fn new(strata: impl IntoIterator<Item = Stratum>) -> Result<Self, CellError> {
        let mut merged: BTreeMap<(Base, u32), u64> = BTreeMap::new();
        for s in strata {
            if s.multiplicity == 0 {
                continue;
            }
            let slot = merged.entry((s.base, s.shift)).or_insert(0);
            *slot = slot
                .checked_add(s.multiplicity)
                .ok_or(CellError::Overflow)?;
        }
        Ok(CellDecomposition {
            strata: merged
                .into_iter()
                .map(|((base, shift), multiplicity)| Stratum {
                    base,
                    shift,
                    multiplicity,
                })
                .collect(),
        })
    }

    pub fn point(base: Base) -> Self {
        CellDecomposition {
            strata: vec![Stratum {
                base,
                shift: 0,
                multiplicity: 1,
            }],
        }
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn max_shift(&self) -> Option<u32> {
        self.strata.iter().map(|s| s.shift).max()
    }

    /// Total number of cells, `sum l`.
    pub fn cell_count(&self) -> u64 {
        self.strata.iter().map(|s| s.multiplicity).sum()
    }

    /// The bundle over `self` whose fibers have cell polynomial `fiber`.
    pub fn bundle(&self, fiber: &QPolynomial) -> Result<Self, CellError> {
        let mut out = Vec::new();
        for s in &self.strata {
            for (d, &c) in fiber.coeffs().iter().enumerate() {
                if c == 0 {
                    continue;
                }
                out.push(Stratum {
                    base: s.base.clone(),
                    shift: s.shift + d as u32,
                    multiplicity: s.multiplicity.checked_mul(c).ok_or(CellError::Overflow)?,
                });
            }
        }
        Self::new(out)
    }

    pub fn union(&self, other: &Self) -> Result<Self, CellError> {
        Self::new(self.strata.iter().chain(&other.strata).cloned())
    }

    /// The unique finite field all strata live over.
    pub fn finite_base(&self) -> Result<Option<FiniteField>, CellError> {
        let mut found: Option<FiniteField> = None;
        for s in &self.strata {
            match &s.base {
                Base::Number(k) => return Err(CellError::NumberFieldBase(k.to_string())),
                Base::Finite(k) => match found {
                    Some(prev) if prev != *k => {
                        return Err(CellError::MixedBases(prev.to_string(), k.to_string()))
                    }
                    _ => found = Some(*k),
                },
            }
        }
        Ok(found)
    }
}

/// Cellular decomposition of a scheme expression.
pub fn cells_of(x: &SchemeExpr) -> Result<CellDecomposition, CellError> {
    x.validate()?;
    cells_rec(x)
}

fn cells_rec(x: &SchemeExpr) -> Result<CellDecomposition, CellError> {
    match x {
        SchemeExpr::BasePoint(k) => Ok(CellDecomposition::point(Base::Number(k.clone()))),
        SchemeExpr::FiniteBase(k) => Ok(CellDecomposition::point(Base::Finite(*k))),
        SchemeExpr::Affine(c, _)
        | SchemeExpr::ProjBundle(c, _)
        | SchemeExpr::Grassmannian(c, _, _)
        | SchemeExpr::FlagBundle(c, _) => {
            let fiber = x.fiber_cells()?.expect("bundle node");
            cells_rec(c)?.bundle(&fiber)
        }
        SchemeExpr::DisjointUnion(parts) => {
            let mut acc = CellDecomposition::default();
            for p in parts {
                acc = acc.union(&cells_rec(p)?)?;
            }
            Ok(acc)
        }
    }
}

/// `N_r = #X(F_{q^r}) = sum l * q^(r d)` for a scheme over a single finite
/// field.
pub fn point_count(x: &SchemeExpr, r: u32) -> Result<BigUint, CellError> {
    if r == 0 {
        return Err(CellError::ZeroExtension);
    }
    let cells = cells_of(x)?;
    point_count_cells(&cells, r)
}

pub fn point_count_cells(cells: &CellDecomposition, r: u32) -> Result<BigUint, CellError> {
    if r == 0 {
        return Err(CellError::ZeroExtension);
    }
    let Some(field) = cells.finite_base()? else {
        return Ok(BigUint::default());
    };
    let qr = BigUint::from(field.size()).pow(r);
    Ok(cells
        .strata()
        .iter()
        .map(|s| BigUint::from(s.multiplicity) * qr.pow(s.shift))
        .sum())
}
