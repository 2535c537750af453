use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use super::Rational;

/// Truncation order used for zeta-series comparisons unless a caller asks
/// for something else.
pub const DEFAULT_ORDER: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("series with zero constant term is not invertible")]
    NotInvertible,
    #[error("logarithm needs constant term 1, got {0}")]
    LogDomain(Rational),
    #[error("exponential needs constant term 0, got {0}")]
    ExpDomain(Rational),
    #[error("a series needs at least one coefficient")]
    Empty,
}

/// An element of `Q[t]/(t^(n+1))`, stored as its `n + 1` coefficients.
///
/// Series only combine with series of the same order. Mixing orders is an
/// error rather than an implicit truncation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncSeries {
    coeffs: Vec<Rational>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `t`. At order 0 this is the zero series.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Takes the coefficient list as-is; the order is `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(TruncSeries { coeffs })
    }

    /// Polynomial with integer coefficients, zero-padded or truncated to
    /// `order`.
    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (slot, &c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = Rational::from_integer(c.into());
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rational {
        &self.coeffs[i]
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(TruncSeries { coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(TruncSeries { coeffs })
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        let n = self.order();
        let mut coeffs = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Ok(TruncSeries { coeffs })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// `self^k` by repeated squaring; `self^0 = 1`.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.try_mul(&base).expect("same order");
            }
            k >>= 1;
            if k > 0 {
                base = base.try_mul(&base).expect("same order");
            }
        }
        acc
    }

    /// Multiplicative inverse, defined whenever the constant term is nonzero.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(SeriesError::NotInvertible);
        }
        let n = self.order();
        let inv_a0 = a0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
        out.push(inv_a0.clone());
        for k in 1..=n {
            let mut acc = Rational::zero();
            for j in 1..=k {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &out[k - j];
                }
            }
            out.push(-(acc * &inv_a0));
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `log(g)` for `g` with constant term 1.
    ///
    /// Equal to `sum_{k>=1} (-1)^(k-1) (g-1)^k / k` truncated at the order;
    /// computed from `g * L' = g'`, which needs only one pass.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::LogDomain(self.coeffs[0].clone()));
        }
        let n = self.order();
        let g = &self.coeffs;
        let mut out = vec![Rational::zero(); n + 1];
        for m in 1..=n {
            // m L_m = m g_m - sum_{k=1}^{m-1} k L_k g_{m-k}
            let mut acc = Rational::from_integer(m.into()) * &g[m];
            for k in 1..m {
                if !out[k].is_zero() && !g[m - k].is_zero() {
                    acc -= Rational::from_integer(k.into()) * &out[k] * &g[m - k];
                }
            }
            out[m] = acc / Rational::from_integer(m.into());
        }
        Ok(TruncSeries { coeffs: out })
    }

    /// `exp(u)` for `u` with constant term 0, via `E' = u' E`.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ExpDomain(self.coeffs[0].clone()));
        }
        let n = self.order();
        let u = &self.coeffs;
        let mut out = vec![Rational::zero(); n + 1];
        out[0] = Rational::one();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !u[k].is_zero() && !out[m - k].is_zero() {
                    acc += Rational::from_integer(k.into()) * &u[k] * &out[m - k];
                }
            }
            out[m] = acc / Rational::from_integer(m.into());
        }
        Ok(TruncSeries { coeffs: out })
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncSeries({self})")
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{i}")?,
                (_, false) => write!(f, "{mag}*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl Serialize for TruncSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let strs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strs.serialize(serializer)
    }
}
