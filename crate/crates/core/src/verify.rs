//! Checks `chi(X, k) = ord_{s=k} L(X, s)` and finite `m`-support of the
//! weight spaces for schemes and for whole families.
//!
//! Both sides start from the same cell decomposition and nothing else: the
//! K-side sums shifted Borel tables ([`crate::kweights`]), the L-side sums
//! shifted functional-equation orders ([`crate::lfun`]).

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::cells::{cells_of, CellDecomposition, CellError, SchemeExpr};
use crate::exec::Execution;
use crate::fields::Base;
use crate::kweights::{chi, support_rows, weight_table_of_from, KWeightsError, SupportRow};
use crate::lfun::{lfactorization_of, ord_at};

/// Mismatching rows kept in a report.
pub const MAX_REPORTED_MISMATCHES: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Cells(#[from] CellError),
    #[error(transparent)]
    Weights(#[from] KWeightsError),
    #[error("empty k-range {0}..{1}")]
    EmptyRange(i64, i64),
    #[error("family {0} has no members")]
    EmptyFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Row {
    pub k: i64,
    pub chi: i64,
    pub ord: i64,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub scheme: String,
    pub k_min: i64,
    pub k_max: i64,
    pub rows: Vec<Row>,
    pub bs_finite_support: bool,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn is_pass(&self) -> bool {
        self.summary.failed == 0 && self.bs_finite_support
    }

    /// The first mismatching rows, at most [`MAX_REPORTED_MISMATCHES`].
    pub fn mismatches(&self) -> Vec<Row> {
        self.rows
            .iter()
            .filter(|r| !r.matches)
            .take(MAX_REPORTED_MISMATCHES)
            .copied()
            .collect()
    }
}

fn check_range(k_range: &RangeInclusive<i64>) -> Result<(), VerifyError> {
    if k_range.is_empty() {
        return Err(VerifyError::EmptyRange(*k_range.start(), *k_range.end()));
    }
    Ok(())
}

/// Integrity of a weight table on the given weights: the support is finite
/// and there is nothing in even degree `m >= 2`.
fn finite_support(
    table: &crate::kweights::WeightTable,
    weights: RangeInclusive<i64>,
) -> Result<bool, VerifyError> {
    let rows = support_rows(table, weights)?;
    Ok(rows
        .iter()
        .all(|r| r.degrees.iter().all(|&m| m < 2 || m % 2 == 1)))
}

/// Compares both sides on `k_range` for a given cell decomposition.
pub fn check_soule_cells(
    scheme: impl Into<String>,
    cells: &CellDecomposition,
    k_range: RangeInclusive<i64>,
) -> Result<VerificationReport, VerifyError> {
    check_range(&k_range)?;
    let table = weight_table_of_from(cells, *k_range.start());
    let chi_fn = chi(&table);
    let l = lfactorization_of(cells);
    let mut rows = Vec::new();
    for k in k_range.clone() {
        let c = chi_fn.at(k)?;
        let o = ord_at(&l, k);
        rows.push(Row {
            k,
            chi: c,
            ord: o,
            matches: c == o,
        });
    }
    let failed = rows.iter().filter(|r| !r.matches).count();
    Ok(VerificationReport {
        scheme: scheme.into(),
        k_min: *k_range.start(),
        k_max: *k_range.end(),
        bs_finite_support: finite_support(&table, k_range)?,
        summary: Summary {
            passed: rows.len() - failed,
            failed,
        },
        rows,
    })
}

pub fn check_soule(
    x: &SchemeExpr,
    k_range: RangeInclusive<i64>,
) -> Result<VerificationReport, VerifyError> {
    let cells = cells_of(x)?;
    check_soule_cells(x.to_string(), &cells, k_range)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub scheme: String,
    pub rows: Vec<SupportRow>,
    pub finite: bool,
}

/// For each weight in `j_range`, the degrees `m` carrying a nonzero weight
/// space.
pub fn check_beilinson_soule(
    x: &SchemeExpr,
    j_range: RangeInclusive<i64>,
) -> Result<SupportReport, VerifyError> {
    check_range(&j_range)?;
    let cells = cells_of(x)?;
    let table = weight_table_of_from(&cells, *j_range.start());
    Ok(SupportReport {
        scheme: x.to_string(),
        rows: support_rows(&table, j_range.clone())?,
        finite: finite_support(&table, j_range)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Every flag type with `1 <= n <= max`.
    Flags,
    /// `P^d` for `d <= max`.
    Proj,
    /// `A^d` for `d <= max`.
    Affine,
    /// `G(k, n)` for `n <= max`, `0 <= k <= n`.
    Grass,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Flags => "flags",
            FamilyKind::Proj => "proj",
            FamilyKind::Affine => "affine",
            FamilyKind::Grass => "grass",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    pub kind: FamilyKind,
    pub max: u32,
    pub bases: Vec<Base>,
    pub k_range: RangeInclusive<i64>,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bases: Vec<String> = self.bases.iter().map(Base::label).collect();
        write!(
            f,
            "{}(max {}) over [{}], k in {}..{}",
            self.kind,
            self.max,
            bases.join(", "),
            self.k_range.start(),
            self.k_range.end()
        )
    }
}

/// Compositions of `n` into positive parts, in lexicographic order.
pub fn compositions(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn walk(rest: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(current.clone());
            return;
        }
        for p in 1..=rest {
            current.push(p);
            walk(rest - p, current, out);
            current.pop();
        }
    }
    walk(n, &mut current, &mut out);
    out
}

impl Family {
    pub fn members(&self) -> Result<Vec<SchemeExpr>, CellError> {
        let mut out = Vec::new();
        for base in &self.bases {
            let point = match base {
                Base::Number(k) => SchemeExpr::base(k.clone()),
                Base::Finite(k) => SchemeExpr::finite(*k),
            };
            match self.kind {
                FamilyKind::Flags => {
                    for n in 1..=self.max {
                        for parts in compositions(n) {
                            out.push(point.clone().flag(parts)?);
                        }
                    }
                }
                FamilyKind::Proj => out.extend((0..=self.max).map(|d| point.clone().proj(d))),
                FamilyKind::Affine => out.extend((0..=self.max).map(|d| point.clone().affine(d))),
                FamilyKind::Grass => {
                    for n in 0..=self.max {
                        for k in 0..=n {
                            out.push(point.clone().grassmannian(k, n)?);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MemberSummary {
    pub scheme: String,
    pub passed: usize,
    pub failed: usize,
    pub bs_finite_support: bool,
    pub nonzero_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub scheme: String,
    #[serde(flatten)]
    pub row: Row,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub family: String,
    pub members: Vec<MemberSummary>,
    pub total_rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub nonzero_rows: usize,
    pub pole_rows: usize,
    pub zero_rows: usize,
    pub max_abs_chi: i64,
    pub mismatches: Vec<Mismatch>,
}

impl SweepReport {
    pub fn is_pass(&self) -> bool {
        self.failed == 0 && self.members.iter().all(|m| m.bs_finite_support)
    }

    /// At least one pole row and one zero row were checked.
    pub fn is_non_vacuous(&self) -> bool {
        self.pole_rows > 0 && self.zero_rows > 0
    }
}

pub fn sweep(family: &Family) -> Result<SweepReport, VerifyError> {
    sweep_with(family, Execution::default())
}

/// Runs [`check_soule`] on every member. Members are checked independently
/// and aggregated in member order, so the report does not depend on
/// `exec`.
pub fn sweep_with(family: &Family, exec: Execution) -> Result<SweepReport, VerifyError> {
    let members = family.members()?;
    if members.is_empty() {
        return Err(VerifyError::EmptyFamily(family.to_string()));
    }
    let k_range = family.k_range.clone();
    let reports = exec.map(&members, |x| check_soule(x, k_range.clone()));

    let mut out = SweepReport {
        family: family.to_string(),
        members: Vec::with_capacity(reports.len()),
        total_rows: 0,
        passed: 0,
        failed: 0,
        nonzero_rows: 0,
        pole_rows: 0,
        zero_rows: 0,
        max_abs_chi: 0,
        mismatches: Vec::new(),
    };
    for report in reports {
        let report = report?;
        let nonzero = report.rows.iter().filter(|r| r.chi != 0).count();
        out.total_rows += report.rows.len();
        out.passed += report.summary.passed;
        out.failed += report.summary.failed;
        out.nonzero_rows += nonzero;
        out.pole_rows += report.rows.iter().filter(|r| r.chi <= -1).count();
        out.zero_rows += report.rows.iter().filter(|r| r.chi >= 1).count();
        out.max_abs_chi = report
            .rows
            .iter()
            .map(|r| r.chi.abs())
            .fold(out.max_abs_chi, i64::max);
        for row in report.rows.iter().filter(|r| !r.matches) {
            if out.mismatches.len() < MAX_REPORTED_MISMATCHES {
                out.mismatches.push(Mismatch {
                    scheme: report.scheme.clone(),
                    row: *row,
                });
            }
        }
        out.members.push(MemberSummary {
            scheme: report.scheme,
            passed: report.summary.passed,
            failed: report.summary.failed,
            bs_finite_support: report.bs_finite_support,
            nonzero_rows: nonzero,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FiniteField, NumberField};

    fn gi() -> NumberField {
        NumberField::quadratic(-1).unwrap()
    }

    #[test]
    fn gaussian_integers() {
        let r = check_soule(&SchemeExpr::base(gi()), -8..=2).unwrap();
        assert!(r.is_pass());
        let at = |k: i64| r.rows.iter().find(|row| row.k == k).copied().unwrap();
        assert_eq!((at(-1).chi, at(-1).ord), (1, 1));
        assert_eq!((at(1).chi, at(1).ord), (-1, -1));
    }

    #[test]
    fn flag_two_two() {
        let x = SchemeExpr::base(NumberField::rationals())
            .flag(vec![2, 2])
            .unwrap();
        let r = check_soule(&x, -10..=6).unwrap();
        assert!(r.is_pass());
        assert_eq!(r.rows.len(), 17);
    }

    #[test]
    fn finite_point() {
        let x = SchemeExpr::finite(FiniteField::new(5).unwrap());
        let r = check_soule(&x, -3..=3).unwrap();
        assert!(r.is_pass());
        let nonzero: Vec<_> = r.rows.iter().filter(|row| row.chi != 0).collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!((nonzero[0].k, nonzero[0].chi, nonzero[0].ord), (0, -1, -1));
    }

    #[test]
    fn empty_range() {
        let x = SchemeExpr::base(gi());
        #[allow(clippy::reversed_empty_ranges)]
        let res = check_soule(&x, 2..=1);
        assert_eq!(res, Err(VerifyError::EmptyRange(2, 1)));
    }

    #[test]
    fn support_reports() {
        let k = NumberField::quadratic(-5).unwrap();
        let r = check_beilinson_soule(&SchemeExpr::base(k).proj(3), -4..=-4).unwrap();
        assert!(r.finite);
        assert_eq!(r.rows[0].max_m, Some(15));

        let q = SchemeExpr::base(NumberField::rationals());
        let r = check_beilinson_soule(&q.clone().proj(2), 10..=10).unwrap();
        assert!(r.rows[0].degrees.is_empty());

        let u = SchemeExpr::union(vec![q.clone(), SchemeExpr::base(gi())]).unwrap();
        let ru = check_beilinson_soule(&u, -3..=-1).unwrap();
        let rq = check_beilinson_soule(&q, -3..=-1).unwrap();
        let rg = check_beilinson_soule(&SchemeExpr::base(gi()), -3..=-1).unwrap();
        for ((a, b), c) in ru.rows.iter().zip(&rq.rows).zip(&rg.rows) {
            let mut both: Vec<u32> = b.degrees.iter().chain(&c.degrees).copied().collect();
            both.sort();
            both.dedup();
            assert_eq!(a.degrees, both);
        }
    }

    #[test]
    fn composition_counts() {
        for n in 1..8 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
        assert!(compositions(0).is_empty());
    }

    #[test]
    fn sweep_small_flags() {
        let fam = Family {
            kind: FamilyKind::Flags,
            max: 4,
            bases: vec![Base::Number(NumberField::rationals()), Base::Number(gi())],
            k_range: -10..=6,
        };
        let seq = sweep_with(&fam, Execution::Sequential).unwrap();
        let par = sweep_with(&fam, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        assert!(seq.is_pass());
        assert!(seq.is_non_vacuous());
        assert!(seq.max_abs_chi >= 2);
        assert_eq!(seq.members.len(), 2 * 15);
    }

    #[test]
    fn empty_family() {
        let fam = Family {
            kind: FamilyKind::Proj,
            max: 3,
            bases: vec![],
            k_range: -1..=1,
        };
        assert!(matches!(sweep(&fam), Err(VerifyError::EmptyFamily(_))));
    }
}
