//! Rational K-theory weight tables and Euler characteristics.
//!
//! A [`WeightTable`] holds `dim_Q K'_m(X)_(j)` for pairs `(m, j)`. The table
//! of `Spec O_K` is infinite in the weight direction (one nonzero entry for
//! every Adams weight `i >= 2`), so tables are materialized on a window:
//! entries are exact for every weight `j >= floor` and absent below it.
//! Shifting a table by `d` moves its floor by `d`. Finite-field tables have
//! no floor.
//!
//! Weights are stored in the dimension grading `K'_m(X)_(j) =
//! K_m(X)^(D - j)`, with `D` the Krull dimension, so that the table of an
//! affine bundle of rank `d` is the base table with `j` shifted by `d`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::cells::CellDecomposition;
use crate::fields::{Base, NumberField};

/// Default lowest weight materialized in tables.
pub const DEFAULT_WEIGHT_FLOOR: i64 = -64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KWeightsError {
    #[error("weight {k} lies below the table window (complete from {floor})")]
    BelowWindow { k: i64, floor: i64 },
    #[error("cover of {parts} sets is missing the intersection {mask:#b}")]
    IncompleteCover { parts: usize, mask: u32 },
    #[error("covers need between 1 and 16 open sets, got {0}")]
    CoverSize(usize),
}

/// Sparse table `(m, j) -> dim_Q K'_m(X)_(j)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightTable {
    provenance: String,
    #[serde(serialize_with = "entries_as_rows")]
    entries: BTreeMap<(u32, i64), u64>,
    floor: Option<i64>,
}

fn entries_as_rows<S: serde::Serializer>(
    entries: &BTreeMap<(u32, i64), u64>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Row {
        m: u32,
        j: i64,
        dim: u64,
    }
    s.collect_seq(entries.iter().map(|(&(m, j), &dim)| Row { m, j, dim }))
}

impl WeightTable {
    pub fn empty(provenance: impl Into<String>) -> Self {
        WeightTable {
            provenance: provenance.into(),
            entries: BTreeMap::new(),
            floor: None,
        }
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Lowest weight for which the entries are complete; `None` if the table
    /// is complete everywhere.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn get(&self, m: u32, j: i64) -> u64 {
        self.entries.get(&(m, j)).copied().unwrap_or(0)
    }

    /// Nonzero entries, ordered by `(m, j)`.
    pub fn entries(&self) -> impl Iterator<Item = (u32, i64, u64)> + '_ {
        self.entries.iter().map(|(&(m, j), &d)| (m, j, d))
    }

    fn insert(&mut self, m: u32, j: i64, dim: u64) {
        if dim > 0 {
            *self.entries.entry((m, j)).or_insert(0) += dim;
        }
    }

    fn check_weight(&self, j: i64) -> Result<(), KWeightsError> {
        match self.floor {
            Some(floor) if j < floor => Err(KWeightsError::BelowWindow { k: j, floor }),
            _ => Ok(()),
        }
    }

    /// The degrees `m` with a nonzero entry at weight `j`.
    pub fn support_at(&self, j: i64) -> Result<BTreeSet<u32>, KWeightsError> {
        self.check_weight(j)?;
        Ok(self
            .entries
            .keys()
            .filter(|&&(_, jj)| jj == j)
            .map(|&(m, _)| m)
            .collect())
    }

    /// The table with every weight increased by `d`.
    pub fn shifted(&self, d: i64) -> Self {
        WeightTable {
            provenance: self.provenance.clone(),
            entries: self
                .entries
                .iter()
                .map(|(&(m, j), &dim)| ((m, j + d), dim))
                .collect(),
            floor: self.floor.map(|f| f + d),
        }
    }

    /// Adds `mult` copies of `other`. The window is the narrower of the two.
    pub fn add_scaled(&mut self, other: &WeightTable, mult: u64) {
        for (&(m, j), &dim) in &other.entries {
            self.insert(m, j, dim * mult);
        }
        self.floor = max_floor(self.floor, other.floor);
        if let Some(f) = self.floor {
            self.entries.retain(|&(_, j), _| j >= f);
        }
    }

    /// Regrades to Adams indices `i = dimension - j`: returns
    /// `(m, i) -> dim K_m(X)^(i)`.
    pub fn adams_graded(&self, dimension: i64) -> BTreeMap<(u32, i64), u64> {
        self.entries
            .iter()
            .map(|(&(m, j), &d)| ((m, dimension - j), d))
            .collect()
    }
}

fn max_floor(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Weight table of `Spec O_K`, complete for weights `j >= floor`.
///
/// Entries: `(0, 1) -> 1`; `(1, 0) -> r1 + r2 - 1`; for Adams weight
/// `i >= 2`, `(2i - 1, 1 - i) -> r1 + r2` when `i` is odd and `r2` when `i`
/// is even. Everything else vanishes.
pub fn borel_weight_table_from(field: &NumberField, floor: i64) -> WeightTable {
    let mut t = WeightTable::empty(field.label());
    t.floor = Some(floor);
    let (r1, r2) = (field.r1() as u64, field.r2() as u64);
    if floor <= 1 {
        t.insert(0, 1, 1);
    }
    if floor <= 0 {
        t.insert(1, 0, r1 + r2 - 1);
    }
    // weight j = 1 - i >= floor  <=>  i <= 1 - floor
    for i in 2..=(1 - floor) {
        let dim = if i % 2 == 1 { r1 + r2 } else { r2 };
        t.insert((2 * i - 1) as u32, 1 - i, dim);
    }
    t
}

pub fn borel_weight_table(field: &NumberField) -> WeightTable {
    borel_weight_table_from(field, DEFAULT_WEIGHT_FLOOR)
}

/// Weight table of `Spec F_q`: only `K_0` survives rationally.
pub fn finite_field_weight_table(field: &crate::fields::FiniteField) -> WeightTable {
    let mut t = WeightTable::empty(field.to_string());
    t.insert(0, 0, 1);
    t
}

fn base_table(base: &Base, floor: i64) -> WeightTable {
    match base {
        Base::Number(k) => borel_weight_table_from(k, floor),
        Base::Finite(k) => finite_field_weight_table(k),
    }
}

/// Sum over strata of `l` copies of the base table shifted by `d`,
/// complete for weights `j >= floor`.
pub fn weight_table_of_from(cells: &CellDecomposition, floor: i64) -> WeightTable {
    let mut out = WeightTable::empty("cells");
    for s in cells.strata() {
        let d = s.shift as i64;
        let part = base_table(&s.base, floor - d).shifted(d);
        out.add_scaled(&part, s.multiplicity);
    }
    out
}

pub fn weight_table_of(cells: &CellDecomposition) -> WeightTable {
    weight_table_of_from(cells, DEFAULT_WEIGHT_FLOOR)
}

/// `k -> chi(X, k)` with finite support, exact for `k >= floor`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ChiFunction {
    values: BTreeMap<i64, i64>,
    floor: Option<i64>,
}

impl ChiFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_values(values: impl IntoIterator<Item = (i64, i64)>, floor: Option<i64>) -> Self {
        let mut out = ChiFunction {
            values: BTreeMap::new(),
            floor,
        };
        for (k, v) in values {
            out.bump(k, v);
        }
        out
    }

    fn bump(&mut self, k: i64, v: i64) {
        if v == 0 {
            return;
        }
        let slot = self.values.entry(k).or_insert(0);
        *slot += v;
        if *slot == 0 {
            self.values.remove(&k);
        }
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn at(&self, k: i64) -> Result<i64, KWeightsError> {
        if let Some(floor) = self.floor {
            if k < floor {
                return Err(KWeightsError::BelowWindow { k, floor });
            }
        }
        Ok(self.values.get(&k).copied().unwrap_or(0))
    }

    /// Nonzero values, ascending in `k`.
    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn scaled(&self, c: i64) -> Self {
        Self::from_values(self.support().map(|(k, v)| (k, c * v)), self.floor)
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in other.support() {
            out.bump(k, v);
        }
        out.floor = max_floor(self.floor, other.floor);
        if let Some(f) = out.floor {
            out.values.retain(|&k, _| k >= f);
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(-1))
    }

    /// `k -> chi(k - d)`.
    pub fn shifted(&self, d: i64) -> Self {
        Self::from_values(
            self.support().map(|(k, v)| (k + d, v)),
            self.floor.map(|f| f + d),
        )
    }
}

/// `chi(X, k) = sum_m (-1)^(m+1) dim K'_m(X)_(k)`.
pub fn chi(table: &WeightTable) -> ChiFunction {
    let mut out = ChiFunction {
        values: BTreeMap::new(),
        floor: table.floor,
    };
    for (m, j, dim) in table.entries() {
        let sign = if m % 2 == 0 { -1 } else { 1 };
        out.bump(j, sign * dim as i64);
    }
    out
}

/// Localization: `chi(X) = chi(U) + chi(Z)` for `Z` closed with open
/// complement `U`.
pub fn chi_add_open_closed(chi_u: &ChiFunction, chi_z: &ChiFunction) -> ChiFunction {
    chi_u.plus(chi_z)
}

/// Data attached to every nonempty intersection of an open cover
/// `U_1, ..., U_s`, keyed by bitmask (bit `i` set iff `U_(i+1)` takes part).
#[derive(Debug, Clone)]
pub struct Cover<T> {
    parts: usize,
    pieces: BTreeMap<u32, T>,
}

impl<T> Cover<T> {
    pub fn new(parts: usize) -> Result<Self, KWeightsError> {
        if parts == 0 || parts > 16 {
            return Err(KWeightsError::CoverSize(parts));
        }
        Ok(Cover {
            parts,
            pieces: BTreeMap::new(),
        })
    }

    /// Records the value for the intersection of the sets in `indices`
    /// (zero-based).
    pub fn set(&mut self, indices: &[usize], value: T) {
        let mask = indices.iter().fold(0u32, |m, &i| m | (1 << i));
        self.pieces.insert(mask, value);
    }

    pub fn parts(&self) -> usize {
        self.parts
    }

    /// `(sign, value)` for every nonempty intersection, sign
    /// `(-1)^(l+1)` for an `l`-fold intersection.
    pub fn signed_pieces(&self) -> Result<Vec<(i64, &T)>, KWeightsError> {
        (1u32..(1 << self.parts))
            .map(|mask| {
                let piece = self
                    .pieces
                    .get(&mask)
                    .ok_or(KWeightsError::IncompleteCover {
                        parts: self.parts,
                        mask,
                    })?;
                let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
                Ok((sign, piece))
            })
            .collect()
    }
}

/// Inclusion-exclusion over a cover:
/// `chi(X) = sum_l (-1)^(l+1) sum_{|I| = l} chi(U_I)`.
pub fn chi_cover(cover: &Cover<ChiFunction>) -> Result<ChiFunction, KWeightsError> {
    Ok(cover
        .signed_pieces()?
        .into_iter()
        .fold(ChiFunction::zero(), |acc, (sign, c)| {
            acc.plus(&c.scaled(sign))
        }))
}

/// The Beilinson-Soule extent at a weight: the degrees `m` carrying a
/// nonzero entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportRow {
    pub j: i64,
    pub degrees: Vec<u32>,
    pub max_m: Option<u32>,
}

pub fn support_rows(
    table: &WeightTable,
    weights: RangeInclusive<i64>,
) -> Result<Vec<SupportRow>, KWeightsError> {
    weights
        .map(|j| {
            let degrees: Vec<u32> = table.support_at(j)?.into_iter().collect();
            Ok(SupportRow {
                j,
                max_m: degrees.last().copied(),
                degrees,
            })
        })
        .collect()
}
