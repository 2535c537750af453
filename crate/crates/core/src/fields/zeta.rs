use serde::Serialize;

use super::primes::{kronecker, primes_up_to};
use super::{FieldError, NumberField, PrimeAbove};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QuadraticSplitting {
    Split,
    Inert,
    Ramified,
}

/// How a rational prime `p` decomposes in `O_K`; the Euler factor at `p` is
/// `prod (1 - p^(-f s))^(-count)` over the listed primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalFactor {
    pub p: u64,
    pub primes: Vec<PrimeAbove>,
}

impl LocalFactor {
    /// `(residue degree f, multiplicity g)` pairs.
    pub fn degrees(&self) -> Vec<(u32, u32)> {
        self.primes
            .iter()
            .map(|q| (q.residue_degree, q.count))
            .collect()
    }

    /// `sum e * f * g`, which equals the field degree.
    pub fn total_degree(&self) -> u32 {
        self.primes
            .iter()
            .map(|q| q.ramification * q.residue_degree * q.count)
            .sum()
    }

    pub fn quadratic_kind(&self) -> Option<QuadraticSplitting> {
        match self.primes.as_slice() {
            [q] if q.ramification == 2 && q.residue_degree == 1 && q.count == 1 => {
                Some(QuadraticSplitting::Ramified)
            }
            [q] if q.ramification == 1 && q.residue_degree == 2 && q.count == 1 => {
                Some(QuadraticSplitting::Inert)
            }
            [q] if q.ramification == 1 && q.residue_degree == 1 && q.count == 2 => {
                Some(QuadraticSplitting::Split)
            }
            _ => None,
        }
    }

    /// Value of the local factor at real `s`.
    pub fn eval(&self, s: f64) -> f64 {
        let p = self.p as f64;
        self.primes
            .iter()
            .map(|q| (1.0 - p.powf(-(q.residue_degree as f64) * s)).powi(-(q.count as i32)))
            .product()
    }
}

/// Decomposition of the prime `p` in the ring of integers of `field`.
///
/// Ingested splitting data wins; otherwise the rationals are trivial and
/// quadratic fields use the Kronecker symbol of the discriminant.
pub fn euler_factor(field: &NumberField, p: u64) -> Result<LocalFactor, FieldError> {
    if !super::primes::is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if let Some(primes) = field.splitting().get(&p) {
        return Ok(LocalFactor {
            p,
            primes: primes.clone(),
        });
    }
    let prime = |e, f, g| PrimeAbove {
        ramification: e,
        residue_degree: f,
        count: g,
    };
    let primes = match (field.degree(), field.disc()) {
        (1, _) => vec![prime(1, 1, 1)],
        (2, Some(disc)) => match kronecker(disc, p) {
            1 => vec![prime(1, 1, 2)],
            -1 => vec![prime(1, 2, 1)],
            _ => vec![prime(2, 1, 1)],
        },
        _ => {
            return Err(FieldError::UnsupportedField {
                label: field.label().to_string(),
                p,
            })
        }
    };
    Ok(LocalFactor { p, primes })
}

/// `prod_{p <= prime_bound}` of the Euler factors of the Dedekind zeta
/// function at real `s > 1`.
pub fn zeta_partial_eval(field: &NumberField, s: f64, prime_bound: u64) -> Result<f64, FieldError> {
    if s.is_nan() || s <= 1.0 {
        return Err(FieldError::OutsideConvergence(s));
    }
    let mut acc = 1.0f64;
    for p in primes_up_to(prime_bound) {
        acc *= euler_factor(field, p)?.eval(s);
    }
    Ok(acc)
}

/// Order of the Dedekind zeta function of `field` at the integer `k`.
///
/// Read off the functional equation: a simple pole at 1, order
/// `r1 + r2 - 1` at 0, `r2` at negative odd integers, `r1 + r2` at negative
/// even integers, and no zeros for `k >= 2`.
pub fn ord_at_integer(field: &NumberField, k: i64) -> i64 {
    let (r1, r2) = (field.r1() as i64, field.r2() as i64);
    match k {
        k if k >= 2 => 0,
        1 => -1,
        0 => r1 + r2 - 1,
        k if (-k) % 2 == 1 => r2,
        _ => r1 + r2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::primes::is_prime;

    #[test]
    fn rational_factor() {
        let q = NumberField::rationals();
        let f = euler_factor(&q, 7).unwrap();
        assert_eq!(f.degrees(), vec![(1, 1)]);
        assert!((f.eval(2.0) - 1.0 / (1.0 - 1.0 / 49.0)).abs() < 1e-15);
    }

    #[test]
    fn gaussian_splitting() {
        let k = NumberField::quadratic(-1).unwrap();
        let f5 = euler_factor(&k, 5).unwrap();
        assert_eq!(f5.quadratic_kind(), Some(QuadraticSplitting::Split));
        assert_eq!(f5.degrees(), vec![(1, 2)]);
        let f3 = euler_factor(&k, 3).unwrap();
        assert_eq!(f3.quadratic_kind(), Some(QuadraticSplitting::Inert));
        assert_eq!(f3.degrees(), vec![(2, 1)]);
        let f2 = euler_factor(&k, 2).unwrap();
        assert_eq!(f2.quadratic_kind(), Some(QuadraticSplitting::Ramified));
    }

    #[test]
    fn quadratic_trichotomy_below_1000() {
        for d in [-1, -2, -3, -5, -7, 2, 3, 5, 6, 13] {
            let k = NumberField::quadratic(d).unwrap();
            let disc = k.disc().unwrap();
            for p in (2..=1000).filter(|&p| is_prime(p)) {
                let f = euler_factor(&k, p).unwrap();
                assert_eq!(f.total_degree(), 2);
                // independent check: count roots of x^2 - d mod p for odd p
                let kind = f.quadratic_kind().unwrap();
                if p != 2 {
                    let roots = (0..p as i64)
                        .filter(|x| (x * x - disc).rem_euclid(p as i64) == 0)
                        .count();
                    let expected = match roots {
                        2 => QuadraticSplitting::Split,
                        0 => QuadraticSplitting::Inert,
                        _ => QuadraticSplitting::Ramified,
                    };
                    assert_eq!(kind, expected, "d={d} p={p}");
                } else {
                    assert_eq!(kind == QuadraticSplitting::Ramified, disc % 2 == 0);
                }
            }
        }
    }

    #[test]
    fn higher_degree_needs_data() {
        let spec = crate::fields::FieldSpec {
            label: "K".into(),
            degree: 3,
            r1: 3,
            r2: 0,
            ..Default::default()
        };
        let k = crate::fields::make_number_field(&spec).unwrap();
        assert!(matches!(
            euler_factor(&k, 5),
            Err(FieldError::UnsupportedField { p: 5, .. })
        ));
        assert!(zeta_partial_eval(&k, 2.0, 10).is_err());
    }

    #[test]
    fn partial_products() {
        let q = NumberField::rationals();
        let pi = std::f64::consts::PI;
        let z2 = zeta_partial_eval(&q, 2.0, 100_000).unwrap();
        assert!((z2 - pi.powi(2) / 6.0).abs() < 1e-4);
        let z4 = zeta_partial_eval(&q, 4.0, 10_000).unwrap();
        assert!((z4 - pi.powi(4) / 90.0).abs() < 1e-6);
        assert!(zeta_partial_eval(&q, 1.0, 100).is_err());
        assert!(zeta_partial_eval(&q, 0.5, 100).is_err());
    }

    #[test]
    fn gaussian_partial_product_matches_dirichlet_oracle() {
        let k = NumberField::quadratic(-1).unwrap();
        let got = zeta_partial_eval(&k, 2.0, 10_000).unwrap();
        // zeta(2) * L(2, chi_-4) from the Dirichlet series directly
        let zeta2: f64 = (1..200_000u64).map(|n| 1.0 / (n as f64).powi(2)).sum();
        let catalan: f64 = (0..200_000u64)
            .map(|n| {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                sign / ((2 * n + 1) as f64).powi(2)
            })
            .sum();
        assert!((got - zeta2 * catalan).abs() < 1e-3);
        assert!((got - 1.506).abs() < 1e-3);
    }

    #[test]
    fn monotone_in_bound() {
        let k = NumberField::quadratic(5).unwrap();
        let mut prev = 0.0;
        for bound in [2, 10, 100, 1000, 5000] {
            let v = zeta_partial_eval(&k, 1.5, bound).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn ord_table() {
        let q = NumberField::rationals();
        assert_eq!(ord_at_integer(&q, 1), -1);
        assert_eq!(ord_at_integer(&q, -2), 1);
        assert_eq!(ord_at_integer(&q, 0), 0);
        for k in -30..=-1 {
            let expected = if k % 2 == 0 { 1 } else { 0 };
            assert_eq!(ord_at_integer(&q, k), expected);
        }
        for k in 2..10 {
            assert_eq!(ord_at_integer(&q, k), 0);
        }
        let gi = NumberField::quadratic(-1).unwrap();
        assert_eq!(ord_at_integer(&gi, -1), 1);
        assert_eq!(ord_at_integer(&gi, -2), 1);
        assert_eq!(ord_at_integer(&gi, 0), 0);
        let r2 = NumberField::quadratic(2).unwrap();
        assert_eq!(ord_at_integer(&r2, 0), 1);
        assert_eq!(ord_at_integer(&r2, -1), 0);
        assert_eq!(ord_at_integer(&r2, -2), 2);
    }
}
