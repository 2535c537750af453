//! Explicit enumeration of partial flags in `F_q^n`.
//!
//! Subspaces are enumerated as reduced row-echelon bases, so each appears
//! exactly once. A flag `W_1 < ... < W_(l-1)` is counted by dynamic
//! programming over the chain: for each subspace `V` at one level, the
//! subspaces of `V` one level down are enumerated inside `V` and looked up
//! by their echelon form.

use std::collections::HashMap;

use super::qpoly::validate_flag_type;
use super::CellError;
use crate::exec::Execution;
use crate::fields::FiniteField;

/// Largest `q^n` the enumeration accepts.
pub const BRUTE_FORCE_LIMIT: u64 = 4096;

/// Arithmetic tables for a small finite field `F_q`, `q = p^f`.
///
/// Elements are `0..q`, read as base-`p` digit vectors of polynomials
/// modulo an irreducible polynomial of degree `f`.
#[derive(Debug, Clone)]
pub struct SmallField {
    q: usize,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

impl SmallField {
    pub fn new(field: FiniteField) -> Result<Self, CellError> {
        let q = field.size();
        if q > 256 {
            return Err(CellError::TooLarge {
                size: q,
                limit: 256,
            });
        }
        let p = field.characteristic() as usize;
        let f = field.exponent() as usize;
        let q = q as usize;

        let digits = |mut x: usize| -> Vec<usize> {
            let mut d = vec![0; f];
            for slot in d.iter_mut() {
                *slot = x % p;
                x /= p;
            }
            d
        };
        let undigits = |d: &[usize]| d.iter().rev().fold(0usize, |acc, &c| acc * p + c);

        let mut add = vec![0u8; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s) as u8;
            }
        }

        // monic modulus x^f + c_(f-1) x^(f-1) + ... + c_0; try each tail
        // until the multiplication has no zero divisors
        for tail in 0..q {
            let modulus = digits(tail);
            let mut mul = vec![0u8; q * q];
            for a in 0..q {
                for b in 0..q {
                    let (da, db) = (digits(a), digits(b));
                    let mut prod = vec![0usize; 2 * f.max(1)];
                    for (i, x) in da.iter().enumerate() {
                        for (j, y) in db.iter().enumerate() {
                            prod[i + j] = (prod[i + j] + x * y) % p;
                        }
                    }
                    for deg in (f..prod.len()).rev() {
                        let c = prod[deg];
                        if c == 0 {
                            continue;
                        }
                        prod[deg] = 0;
                        for (i, m) in modulus.iter().enumerate() {
                            let idx = deg - f + i;
                            prod[idx] = (prod[idx] + (p - c) * m) % p;
                        }
                    }
                    mul[a * q + b] = undigits(&prod[..f]) as u8;
                }
            }
            let is_field = (1..q).all(|a| (1..q).all(|b| mul[a * q + b] != 0));
            if !is_field {
                continue;
            }
            let neg = (0..q)
                .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
                .collect();
            let mut inv = vec![0u8; q];
            for a in 1..q {
                inv[a] = (1..q).find(|&b| mul[a * q + b] == 1).unwrap() as u8;
            }
            return Ok(SmallField {
                q,
                add,
                mul,
                neg,
                inv,
            });
        }
        unreachable!("an irreducible polynomial of every degree exists")
    }

    pub fn size(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }
}

/// Row-major `rows x cols` matrix over a `SmallField`.
type Matrix = Vec<Vec<u8>>;

fn rref(field: &SmallField, mut m: Matrix) -> Matrix {
    let cols = m.first().map_or(0, Vec::len);
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pivot);
        let scale = field.inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = field.mul(*x, scale);
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && other[col] != 0 {
                let factor = field.neg(other[col]);
                for (x, &p) in other.iter_mut().zip(&pivot_row).take(cols) {
                    *x = field.add(*x, field.mul(factor, p));
                }
            }
        }
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    m
}

/// All `k`-dimensional subspaces of `F_q^n`, as echelon bases.
fn subspaces(field: &SmallField, k: usize, n: usize) -> Vec<Matrix> {
    let mut out = Vec::new();
    let mut pivots = Vec::with_capacity(k);
    choose_pivots(field, k, n, 0, &mut pivots, &mut out);
    out
}

fn choose_pivots(
    field: &SmallField,
    k: usize,
    n: usize,
    start: usize,
    pivots: &mut Vec<usize>,
    out: &mut Vec<Matrix>,
) {
    if pivots.len() == k {
        // free positions: (row i, column c) with c > pivot_i and c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let piv = pivots.clone();
                (pivots[i] + 1..n)
                    .filter(move |c| !piv.contains(c))
                    .map(move |c| (i, c))
            })
            .collect();
        let q = field.size();
        let total = q.pow(free.len() as u32);
        for code in 0..total {
            let mut m = vec![vec![0u8; n]; k];
            for (i, &p) in pivots.iter().enumerate() {
                m[i][p] = 1;
            }
            let mut c = code;
            for &(i, col) in &free {
                m[i][col] = (c % q) as u8;
                c /= q;
            }
            out.push(m);
        }
        return;
    }
    let remaining = k - pivots.len();
    for p in start..=n - remaining {
        pivots.push(p);
        choose_pivots(field, k, n, p + 1, pivots, out);
        pivots.pop();
    }
}

fn mat_mul(field: &SmallField, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = vec![0u8; cols];
            for (i, &x) in row.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (c, slot) in out.iter_mut().enumerate() {
                    *slot = field.add(*slot, field.mul(x, b[i][c]));
                }
            }
            out
        })
        .collect()
}

/// Number of flags of type `parts` in `F_q^n`, `n = sum parts`, by
/// enumeration.
pub fn brute_force_flag_count(parts: &[u32], field: FiniteField) -> Result<u64, CellError> {
    brute_force_flag_count_with(parts, field, Execution::default())
}

pub fn brute_force_flag_count_with(
    parts: &[u32],
    field: FiniteField,
    exec: Execution,
) -> Result<u64, CellError> {
    let n: u32 = parts.iter().sum();
    validate_flag_type(n, parts)?;
    field
        .size()
        .checked_pow(n)
        .filter(|&s| s <= BRUTE_FORCE_LIMIT)
        .ok_or(CellError::TooLarge {
            size: field.size().saturating_pow(n),
            limit: BRUTE_FORCE_LIMIT,
        })?;
    let gf = SmallField::new(field)?;
    let n = n as usize;

    // dimensions of the proper intermediate subspaces W_1 < ... < W_(l-1)
    let dims: Vec<usize> = parts[..parts.len() - 1]
        .iter()
        .scan(0usize, |acc, &p| {
            *acc += p as usize;
            Some(*acc)
        })
        .collect();
    if dims.is_empty() {
        return Ok(1);
    }

    let mut prev_index: HashMap<Matrix, usize> = HashMap::new();
    let first = subspaces(&gf, dims[0], n);
    let mut prev_counts: Vec<u64> = vec![1; first.len()];
    for (i, m) in first.into_iter().enumerate() {
        prev_index.insert(m, i);
    }
    let mut prev_dim = dims[0];

    for &dim in &dims[1..] {
        let level = subspaces(&gf, dim, n);
        let inner = subspaces(&gf, prev_dim, dim);
        let counts = exec.map(&level, |v| {
            inner
                .iter()
                .map(|coeffs| {
                    let w = rref(&gf, mat_mul(&gf, coeffs, v));
                    prev_counts[prev_index[&w]]
                })
                .sum::<u64>()
        });
        prev_index = level.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        prev_counts = counts;
        prev_dim = dim;
    }
    Ok(prev_counts.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ff(q: u64) -> FiniteField {
        FiniteField::new(q).unwrap()
    }

    #[test]
    fn field_axioms_for_small_q() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let f = SmallField::new(ff(q)).unwrap();
            let q = q as u8;
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn subspace_counts() {
        let f = SmallField::new(ff(2)).unwrap();
        assert_eq!(subspaces(&f, 1, 3).len(), 7);
        assert_eq!(subspaces(&f, 2, 4).len(), 35);
        assert_eq!(subspaces(&f, 0, 3).len(), 1);
        let f3 = SmallField::new(ff(3)).unwrap();
        assert_eq!(subspaces(&f3, 1, 2).len(), 4);
    }

    #[test]
    fn examples() {
        assert_eq!(brute_force_flag_count(&[1, 1], ff(3)).unwrap(), 4);
        assert_eq!(brute_force_flag_count(&[2, 2], ff(2)).unwrap(), 35);
        assert_eq!(brute_force_flag_count(&[1, 2], ff(2)).unwrap(), 7);
        assert_eq!(brute_force_flag_count(&[1, 1, 1], ff(2)).unwrap(), 21);
        assert_eq!(brute_force_flag_count(&[3], ff(5)).unwrap(), 1);
    }

    #[test]
    fn refuses_large() {
        assert!(matches!(
            brute_force_flag_count(&[3, 3], ff(5)),
            Err(CellError::TooLarge { .. })
        ));
    }

    #[test]
    fn execution_modes_agree() {
        let a = brute_force_flag_count_with(&[1, 1, 2], ff(3), Execution::Sequential).unwrap();
        let b = brute_force_flag_count_with(&[1, 1, 2], ff(3), Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
