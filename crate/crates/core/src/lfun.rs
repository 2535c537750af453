//! L-functions of cellular schemes in factored form.
//!
//! `L(X, s)` is kept as a formal product `prod L(base, s - d)^e`. Orders at
//! integers come from the functional-equation table of each base; numeric
//! values are partial Euler products inside the region of convergence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{Rational, SeriesError, TruncSeries};
use crate::cells::{point_count_cells, CellDecomposition, CellError};
use crate::fields::{
    ord_at_integer, special_value_even, special_value_rational, zeta_at_zero, zeta_partial_eval,
    Base, FieldError, FiniteField, SpecialValue, SpecialValueKind, SymbolicFactor,
};
use crate::kweights::Cover;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LError {
    #[error(transparent)]
    Cells(#[from] CellError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Cover(#[from] crate::kweights::KWeightsError),
    #[error("{0}")]
    Domain(String),
    #[error("expected strata over a single finite field")]
    NotFinite,
}

/// `L(base, s - shift)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LFactor {
    pub base: Base,
    pub shift: i64,
    pub exponent: i64,
}

impl Serialize for LFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Row {
            base: String,
            shift: i64,
            exponent: i64,
        }
        Row {
            base: self.base.label(),
            shift: self.shift,
            exponent: self.exponent,
        }
        .serialize(s)
    }
}

/// Canonical product of shifted base L-functions: merged by
/// `(base, shift)`, zero exponents dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LFactorization {
    factors: Vec<LFactor>,
}

impl LFactorization {
    pub fn new(factors: impl IntoIterator<Item = LFactor>) -> Self {
        let mut merged: BTreeMap<(Base, i64), i64> = BTreeMap::new();
        for f in factors {
            *merged.entry((f.base, f.shift)).or_insert(0) += f.exponent;
        }
        LFactorization {
            factors: merged
                .into_iter()
                .filter(|&(_, e)| e != 0)
                .map(|((base, shift), exponent)| LFactor {
                    base,
                    shift,
                    exponent,
                })
                .collect(),
        }
    }

    pub fn one() -> Self {
        Self::default()
    }

    pub fn factors(&self) -> &[LFactor] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn times(&self, other: &Self) -> Self {
        Self::new(self.factors.iter().chain(&other.factors).cloned())
    }

    pub fn pow(&self, e: i64) -> Self {
        Self::new(self.factors.iter().map(|f| LFactor {
            exponent: f.exponent * e,
            ..f.clone()
        }))
    }

    pub fn inverse(&self) -> Self {
        self.pow(-1)
    }

    /// `L(s - d)`: every shift increased by `d`.
    pub fn shifted(&self, d: i64) -> Self {
        Self::new(self.factors.iter().map(|f| LFactor {
            shift: f.shift + d,
            ..f.clone()
        }))
    }
}

impl fmt::Display for LFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|fac| {
                let arg = match fac.shift {
                    0 => "s".to_string(),
                    d if d > 0 => format!("s-{d}"),
                    d => format!("s+{}", -d),
                };
                let base = format!("L({}, {arg})", fac.base);
                if fac.exponent == 1 {
                    base
                } else {
                    format!("{base}^{}", fac.exponent)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// One factor `L(T_i, s - d_i)^(l_i)` per stratum.
pub fn lfactorization_of(cells: &CellDecomposition) -> LFactorization {
    LFactorization::new(cells.strata().iter().map(|s| LFactor {
        base: s.base.clone(),
        shift: s.shift as i64,
        exponent: s.multiplicity as i64,
    }))
}

/// `L(X, s) = prod_I L(U_I, s)^((-1)^(|I|+1))` over the nonempty
/// intersections of an open cover.
pub fn lfactorization_cover(cover: &Cover<LFactorization>) -> Result<LFactorization, LError> {
    Ok(cover
        .signed_pieces()?
        .into_iter()
        .fold(LFactorization::one(), |acc, (sign, f)| {
            acc.times(&f.pow(sign))
        }))
}

/// Order of a base L-function at the integer `k`.
fn base_ord(base: &Base, k: i64) -> i64 {
    match base {
        Base::Number(field) => ord_at_integer(field, k),
        // (1 - q^(-s))^(-1) has a simple pole at s = 0 and no other integer
        // zeros or poles
        Base::Finite(_) => {
            if k == 0 {
                -1
            } else {
                0
            }
        }
    }
}

/// `ord_{s=k} L(X, s) = sum e * ord_{s=k-d} L(base, s)`.
pub fn ord_at(f: &LFactorization, k: i64) -> i64 {
    f.factors
        .iter()
        .map(|fac| fac.exponent * base_ord(&fac.base, k - fac.shift))
        .sum()
}

/// `Z(X, t) = exp(sum_{r=1}^{order} N_r t^r / r)` truncated at `t^order`.
pub fn weil_zeta_series(cells: &CellDecomposition, order: usize) -> Result<TruncSeries, LError> {
    if order == 0 {
        return Err(LError::Domain("series order must be at least 1".into()));
    }
    if cells.finite_base()?.is_none() {
        return Err(LError::NotFinite);
    }
    let mut coeffs = vec![Rational::zero(); order + 1];
    for (r, slot) in coeffs.iter_mut().enumerate().skip(1) {
        let n_r = BigInt::from(point_count_cells(cells, r as u32)?);
        *slot = Rational::new(n_r, BigInt::from(r));
    }
    Ok(TruncSeries::from_coeffs(coeffs)?.exp()?)
}

/// `Z(X, t)` as a rational function `prod (1 - q^d t)^(-l)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalZeta {
    q: u64,
    /// `d -> l` for factors `(1 - q^d t)^l` upstairs.
    numerator: BTreeMap<u32, u64>,
    /// `d -> l` for factors `(1 - q^d t)^l` downstairs.
    denominator: BTreeMap<u32, u64>,
}

impl RationalZeta {
    /// Cancels common factors.
    pub fn new(q: u64, factors: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut net: BTreeMap<u32, i64> = BTreeMap::new();
        for (d, e) in factors {
            *net.entry(d).or_insert(0) += e;
        }
        let numerator = net
            .iter()
            .filter(|&(_, &e)| e > 0)
            .map(|(&d, &e)| (d, e as u64))
            .collect();
        let denominator = net
            .iter()
            .filter(|&(_, &e)| e < 0)
            .map(|(&d, &e)| (d, (-e) as u64))
            .collect();
        RationalZeta {
            q,
            numerator,
            denominator,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn numerator(&self) -> &BTreeMap<u32, u64> {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<u32, u64> {
        &self.denominator
    }

    /// Power-series expansion to the given order: numerator polynomial times
    /// the series inverse of the denominator polynomial.
    pub fn expand(&self, order: usize) -> Result<TruncSeries, LError> {
        let poly = |factors: &BTreeMap<u32, u64>| -> Result<TruncSeries, LError> {
            let mut acc = TruncSeries::one(order);
            for (&d, &l) in factors {
                let qd = Rational::from_integer(BigInt::from(self.q).pow(d));
                let lin =
                    TruncSeries::one(order).try_sub(&TruncSeries::variable(order).scale(&qd))?;
                acc = acc.try_mul(&lin.pow(l as u32))?;
            }
            Ok(acc)
        };
        let num = poly(&self.numerator)?;
        let den = poly(&self.denominator)?;
        Ok(num.try_mul(&den.inv()?)?)
    }
}

impl fmt::Display for RationalZeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let render = |factors: &BTreeMap<u32, u64>| -> String {
            if factors.is_empty() {
                return "1".into();
            }
            factors
                .iter()
                .map(|(&d, &l)| {
                    let lin = match d {
                        0 => "(1 - t)".to_string(),
                        1 => format!("(1 - {}t)", self.q),
                        d => format!("(1 - {}^{d}t)", self.q),
                    };
                    if l == 1 {
                        lin
                    } else {
                        format!("{lin}^{l}")
                    }
                })
                .collect::<Vec<_>>()
                .join("")
        };
        write!(
            f,
            "{} / {}",
            render(&self.numerator),
            render(&self.denominator)
        )
    }
}

/// `prod (1 - q^d t)^(-l)` over the strata of a scheme over one finite
/// field.
pub fn weil_zeta_rational(cells: &CellDecomposition) -> Result<RationalZeta, LError> {
    let field: FiniteField = cells.finite_base()?.ok_or(LError::NotFinite)?;
    Ok(RationalZeta::new(
        field.size(),
        cells
            .strata()
            .iter()
            .map(|s| (s.shift, -(s.multiplicity as i64))),
    ))
}

/// `prod zeta_partial_eval(base, s - d, bound)^e`.
pub fn lfun_partial_eval(f: &LFactorization, s: f64, prime_bound: u64) -> Result<f64, LError> {
    let mut acc = 1.0f64;
    for fac in &f.factors {
        let t = s - fac.shift as f64;
        let value = match &fac.base {
            Base::Number(field) => {
                if t.is_nan() || t <= 1.0 {
                    return Err(LError::Domain(format!(
                        "L({}, s - {}) does not converge at s = {s}",
                        field, fac.shift
                    )));
                }
                zeta_partial_eval(field, t, prime_bound)?
            }
            Base::Finite(k) => {
                if t.is_nan() || t <= 0.0 {
                    return Err(LError::Domain(format!(
                        "L({k}, s - {}) is evaluated only for s - d > 0",
                        fac.shift
                    )));
                }
                1.0 / (1.0 - (k.size() as f64).powf(-t))
            }
        };
        acc *= value.powi(fac.exponent as i32);
    }
    Ok(acc)
}

/// Value of the Riemann zeta function at an integer, when a closed form is
/// known (non-positive and even positive arguments).
enum RiemannValue {
    Value(Rational, i64),
    Zero,
    Pole,
    Unknown,
}

fn riemann_value(t: i64) -> Result<RiemannValue, LError> {
    Ok(match t {
        1 => RiemannValue::Pole,
        0 => RiemannValue::Value(zeta_at_zero(), 0),
        t if t < 0 => {
            let v = special_value_rational(1 - t)?;
            if v.rational.is_zero() {
                RiemannValue::Zero
            } else {
                RiemannValue::Value(v.rational, 0)
            }
        }
        t if t % 2 == 0 => {
            let v = special_value_even(t / 2)?;
            RiemannValue::Value(v.rational, v.pi_exponent)
        }
        _ => RiemannValue::Unknown,
    })
}

/// Numeric approximation of `zeta(t)` for odd `t >= 3`.
fn riemann_numeric(t: i64) -> f64 {
    // the partial sum error is below N^(1-t) / (t - 1) <= 5e-13 at N = 10^6
    (1..1_000_000u64)
        .rev()
        .map(|n| (n as f64).powi(-(t as i32)))
        .sum()
}

/// `L(X, m) = prod L(base, m - d)^e`.
///
/// Over `Q` exact pieces are multiplied out (`zeta(1 - k) = -B_k / k`,
/// `zeta(2m)` as a rational times `pi^(2m)`), odd positive arguments stay
/// symbolic with a numeric approximation. Over other fields every factor is
/// symbolic and the product is reported modulo `Q*`. Whenever the order of
/// vanishing is nonzero the value is reported as a zero or pole of that
/// order.
pub fn special_value_product(f: &LFactorization, m: i64) -> Result<SpecialValue, LError> {
    let mut fields = Vec::with_capacity(f.factors.len());
    for fac in &f.factors {
        match &fac.base {
            Base::Number(k) => fields.push(k),
            Base::Finite(k) => {
                return Err(LError::Domain(format!(
                    "special values are not defined for the finite-field factor L({k}, s)"
                )))
            }
        }
    }
    let order = ord_at(f, m);
    let over_q = fields.iter().all(|k| k.is_rationals());

    let mut out = SpecialValue::exact(Rational::one());
    out.vanishing_order = order;
    if order > 0 {
        out.rational = Rational::zero();
        return Ok(out);
    }

    let mut symbolic: Vec<SymbolicFactor> = Vec::new();
    let mut numeric = Some(1.0f64);
    let mut exact_all = true;
    for (fac, field) in f.factors.iter().zip(&fields) {
        let t = m - fac.shift;
        let sym = SymbolicFactor {
            field: field.label().to_string(),
            point: t,
            exponent: fac.exponent,
        };
        if !over_q {
            symbolic.push(sym);
            continue;
        }
        match riemann_value(t)? {
            RiemannValue::Value(r, pi) => {
                out.rational *= pow_rational(&r, fac.exponent);
                out.pi_exponent += pi * fac.exponent;
            }
            RiemannValue::Unknown => {
                exact_all = false;
                numeric = numeric.map(|v| v * riemann_numeric(t).powi(fac.exponent as i32));
                symbolic.push(sym);
            }
            RiemannValue::Zero | RiemannValue::Pole => {
                // zeros and poles cancel in total (order 0): leading term
                // is not determined by the values alone
                exact_all = false;
                numeric = None;
                symbolic.push(sym);
            }
        }
    }
    if order < 0 {
        out.kind = SpecialValueKind::SymbolicProduct;
        out.factors = symbolic;
        out.modulo_rationals = !over_q;
        out.numeric = None;
        return Ok(out);
    }
    if !over_q {
        out.kind = SpecialValueKind::SymbolicProduct;
        out.factors = symbolic;
        out.modulo_rationals = true;
        return Ok(out);
    }
    if exact_all {
        out.kind = if out.pi_exponent == 0 {
            SpecialValueKind::ExactRational
        } else {
            SpecialValueKind::RationalTimesPiPower
        };
        return Ok(out);
    }
    out.kind = SpecialValueKind::SymbolicProduct;
    out.factors = symbolic;
    out.numeric = numeric.map(|v| {
        v * crate::fields::SpecialValue::pi_power(out.rational.clone(), out.pi_exponent)
            .approximate()
            .unwrap_or(f64::NAN)
    });
    Ok(out)
}

fn pow_rational(r: &Rational, e: i64) -> Rational {
    let base = if e < 0 { r.recip() } else { r.clone() };
    (0..e.unsigned_abs()).fold(Rational::one(), |acc, _| acc * &base)
}
