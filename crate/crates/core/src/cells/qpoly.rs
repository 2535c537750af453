use std::fmt;

use serde::Serialize;

use super::CellError;

/// Polynomial in `q` with non-negative integer coefficients; coefficient `d`
/// counts the `d`-dimensional cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QPolynomial {
    coeffs: Vec<u64>,
}

impl QPolynomial {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![1] }
    }

    /// `q^d`.
    pub fn monomial(d: u32) -> Self {
        let mut coeffs = vec![0; d as usize + 1];
        coeffs[d as usize] = 1;
        QPolynomial { coeffs }
    }

    /// `1 + q + ... + q^d`, the cells of projective `d`-space.
    pub fn projective(d: u32) -> Self {
        QPolynomial {
            coeffs: vec![1; d as usize + 1],
        }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CellError> {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; len];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            *slot = a.checked_add(b).ok_or(CellError::Overflow)?;
        }
        Ok(Self::new(out))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CellError> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::new(Vec::new()));
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let term = a.checked_mul(b).ok_or(CellError::Overflow)?;
                out[i + j] = out[i + j].checked_add(term).ok_or(CellError::Overflow)?;
            }
        }
        Ok(Self::new(out))
    }

    /// Multiply by `q^d`.
    pub fn shifted(&self, d: u32) -> Self {
        let mut coeffs = vec![0; d as usize];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    /// Value at an integer `q`, exactly (u128), `None` on overflow.
    pub fn eval(&self, q: u64) -> Option<u128> {
        let q = q as u128;
        let mut acc: u128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc.checked_mul(q)?.checked_add(c as u128)?;
        }
        Some(acc)
    }

    /// Gaussian binomial `[n; k]_q`, from `[n;k] = [n-1;k-1] + q^k [n-1;k]`.
    pub fn gaussian_binomial(n: u32, k: u32) -> Result<Self, CellError> {
        if k > n {
            return Ok(Self::new(Vec::new()));
        }
        // row[j] = [m; j] for the current m
        let mut row: Vec<QPolynomial> = vec![QPolynomial::one()];
        for m in 1..=n {
            let mut next = Vec::with_capacity(m as usize + 1);
            for j in 0..=m {
                let left = if j >= 1 {
                    row[j as usize - 1].clone()
                } else {
                    Self::new(Vec::new())
                };
                let right = if j < m {
                    row[j as usize].shifted(j)
                } else {
                    Self::new(Vec::new())
                };
                next.push(left.checked_add(&right)?);
            }
            row = next;
        }
        Ok(row.swap_remove(k as usize))
    }

    /// Cells of the Grassmannian of `k`-planes in `n`-space by Schubert
    /// cell: one cell of dimension `|lambda|` for every partition `lambda`
    /// fitting in a `k x (n-k)` box.
    pub fn schubert(k: u32, n: u32) -> Self {
        if k > n {
            return Self::new(Vec::new());
        }
        let width = n - k;
        let mut coeffs = vec![0u64; (k * width) as usize + 1];
        // enumerate weakly decreasing sequences of length k bounded by width
        fn walk(parts_left: u32, max_part: u32, size: u32, coeffs: &mut [u64]) {
            if parts_left == 0 {
                coeffs[size as usize] += 1;
                return;
            }
            for part in 0..=max_part {
                walk(parts_left - 1, part, size + part, coeffs);
            }
        }
        walk(k, width, 0, &mut coeffs);
        Self::new(coeffs)
    }
}

/// Gaussian multinomial `[n; n_1, ..., n_l]_q`, the cell polynomial of the
/// flag variety of type `parts` in `n`-space.
pub fn gaussian_multinomial(n: u32, parts: &[u32]) -> Result<QPolynomial, CellError> {
    validate_flag_type(n, parts)?;
    let mut acc = QPolynomial::one();
    let mut remaining = n;
    for &p in parts {
        acc = acc.checked_mul(&QPolynomial::gaussian_binomial(remaining, p)?)?;
        remaining -= p;
    }
    Ok(acc)
}

/// The same polynomial built as a tower of Grassmannians: choose the first
/// `n_1`-plane, then flags of the remaining type in the quotient. Each
/// Grassmannian is counted by its Schubert cells.
pub fn flag_polynomial_by_tower(parts: &[u32]) -> Result<QPolynomial, CellError> {
    let n: u32 = parts.iter().sum();
    validate_flag_type(n, parts)?;
    let mut acc = QPolynomial::one();
    let mut remaining = n;
    for &p in parts {
        acc = acc.checked_mul(&QPolynomial::schubert(p, remaining))?;
        remaining -= p;
    }
    Ok(acc)
}

pub(crate) fn validate_flag_type(n: u32, parts: &[u32]) -> Result<(), CellError> {
    if parts.is_empty() || parts.contains(&0) || parts.iter().sum::<u32>() != n {
        return Err(CellError::FlagType {
            n,
            parts: parts.to_vec(),
        });
    }
    Ok(())
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (d, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "q")?,
                (1, c) => write!(f, "{c}q")?,
                (d, 1) => write!(f, "q^{d}")?,
                (d, c) => write!(f, "{c}q^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
