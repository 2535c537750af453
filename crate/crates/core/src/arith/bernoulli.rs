use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_0, ..., B_n` with `B_1 = -1/2`, from `sum_{j=0}^{k} C(k+1, j) B_j = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(n + 1);
    out.push(Rational::one());
    for k in 1..=n {
        if k >= 3 && k % 2 == 1 {
            out.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (j, b) in out.iter().enumerate() {
            if !b.is_zero() {
                acc += Rational::from_integer(binomial(k as u64 + 1, j as u64)) * b;
            }
        }
        out.push(-acc / Rational::from_integer(BigInt::from(k + 1)));
    }
    out
}

/// The Bernoulli number `B_k`, convention `B_1 = -1/2`.
pub fn bernoulli(k: usize) -> Rational {
    bernoulli_numbers(k).pop().expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(3), int(0));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(6), rat(1, 42));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn recurrence_holds_through_40() {
        let b = bernoulli_numbers(40);
        for k in 1..=40u64 {
            let s: Rational = (0..=k)
                .map(|j| Rational::from_integer(binomial(k + 1, j)) * &b[j as usize])
                .sum();
            assert!(s.is_zero(), "k = {k}");
        }
        for k in (3..=40).step_by(2) {
            assert!(b[k].is_zero());
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 7), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }
}
