use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::FieldError;
use crate::arith::{bernoulli, rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpecialValueKind {
    ExactRational,
    RationalTimesPiPower,
    Numeric,
    SymbolicProduct,
}

/// `L(field, point)^exponent`, kept unevaluated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SymbolicFactor {
    pub field: String,
    pub point: i64,
    pub exponent: i64,
}

/// A special value `rational * pi^pi_exponent * prod factors`.
///
/// `vanishing_order` is the order of the L-function at the point: positive
/// means the value is exactly zero, negative means a pole. When
/// `modulo_rationals` is set the value is only meaningful up to a nonzero
/// rational multiple and `rational` is 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecialValue {
    pub kind: SpecialValueKind,
    #[serde(serialize_with = "crate::serde_util::rational")]
    pub rational: Rational,
    pub pi_exponent: i64,
    pub numeric: Option<f64>,
    pub factors: Vec<SymbolicFactor>,
    pub vanishing_order: i64,
    pub modulo_rationals: bool,
}

impl SpecialValue {
    pub fn exact(r: Rational) -> Self {
        SpecialValue {
            kind: SpecialValueKind::ExactRational,
            rational: r,
            pi_exponent: 0,
            numeric: None,
            factors: Vec::new(),
            vanishing_order: 0,
            modulo_rationals: false,
        }
    }

    pub fn pi_power(r: Rational, pi_exponent: i64) -> Self {
        let kind = if pi_exponent == 0 {
            SpecialValueKind::ExactRational
        } else {
            SpecialValueKind::RationalTimesPiPower
        };
        SpecialValue {
            kind,
            pi_exponent,
            ..Self::exact(r)
        }
    }

    /// Floating-point approximation when one is available.
    pub fn approximate(&self) -> Option<f64> {
        if let Some(v) = self.numeric {
            return Some(v);
        }
        match self.kind {
            SpecialValueKind::ExactRational | SpecialValueKind::RationalTimesPiPower => {
                let r = ratio_to_f64(&self.rational);
                Some(r * std::f64::consts::PI.powi(self.pi_exponent as i32))
            }
            _ => None,
        }
    }
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for SpecialValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vanishing_order > 0 {
            return write!(f, "0 (zero of order {})", self.vanishing_order);
        }
        if self.vanishing_order < 0 {
            return write!(f, "pole of order {}", -self.vanishing_order);
        }
        let mut parts: Vec<String> = Vec::new();
        let bare = self.pi_exponent == 0 && self.factors.is_empty();
        if !self.modulo_rationals && (!self.rational.is_one() || bare) {
            parts.push(self.rational.to_string());
        }
        match self.pi_exponent {
            0 => {}
            1 => parts.push("pi".into()),
            e => parts.push(format!("pi^{e}")),
        }
        for fac in &self.factors {
            let base = format!("L({}, {})", fac.field, fac.point);
            if fac.exponent == 1 {
                parts.push(base);
            } else {
                parts.push(format!("{base}^{}", fac.exponent));
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join(" * "))?;
        if self.modulo_rationals {
            write!(f, " mod Q*")?;
        }
        Ok(())
    }
}

/// `zeta(0) = -1/2`.
pub fn zeta_at_zero() -> Rational {
    rat(-1, 2)
}

/// `zeta(1 - k) = -B_k / k` for `k >= 2`.
pub fn special_value_rational(k: i64) -> Result<SpecialValue, FieldError> {
    if k < 2 {
        return Err(FieldError::Domain {
            what: "zeta(1 - k) via Bernoulli numbers",
            range: "k >= 2",
            got: k,
        });
    }
    let b = bernoulli(k as usize);
    let mut v = SpecialValue::exact(-b / Rational::from_integer(BigInt::from(k)));
    if v.rational.is_zero() {
        v.vanishing_order = 1;
    }
    Ok(v)
}

/// `zeta(2m) = (-1)^(m-1) (2 pi)^(2m) B_(2m) / (2 (2m)!)` for `m >= 1`.
pub fn special_value_even(m: i64) -> Result<SpecialValue, FieldError> {
    if m < 1 {
        return Err(FieldError::Domain {
            what: "zeta(2m)",
            range: "m >= 1",
            got: m,
        });
    }
    let two_m = (2 * m) as usize;
    let factorial: BigInt = (1..=two_m).map(BigInt::from).product();
    let sign = if m % 2 == 1 { 1 } else { -1 };
    let rational = Rational::from_integer(BigInt::from(sign) * (BigInt::one() << two_m))
        * bernoulli(two_m)
        / Rational::from_integer(BigInt::from(2) * factorial);
    Ok(SpecialValue::pi_power(rational, 2 * m))
}
