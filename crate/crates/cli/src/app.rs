//! Argument parsing and command dispatch.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::str::FromStr;

use cellzeta::cells::{cells_of, point_count_cells, CellDecomposition};
use cellzeta::kweights::{chi, weight_table_of_from};
use cellzeta::lfun::{
    lfactorization_of, lfun_partial_eval, ord_at, special_value_product, weil_zeta_rational,
    weil_zeta_series,
};
use cellzeta::verify::{check_soule_cells, sweep, Family, FamilyKind};
use cellzeta::{Base, SchemeExpr};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::load_fields;
use crate::error::{CliError, EXIT_MISMATCH, EXIT_OK};
use crate::output::{Format, Rendered, Table};
use crate::parse::{parse_base, parse_scheme, FieldTable};

/// Inclusive integer range written `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub lo: i64,
    pub hi: i64,
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once("..=")
            .or_else(|| s.split_once(".."))
            .ok_or_else(|| format!("expected lo..hi, got '{s}'"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("'{t}' is not an integer"))
        };
        Ok(KRange {
            lo: parse(lo)?,
            hi: parse(hi)?,
        })
    }
}

impl KRange {
    fn range(self) -> RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cellzeta",
    version,
    about = "K-theory weights, Euler characteristics and L-function orders of cellular schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Plain, global = true)]
    pub format: Format,

    /// Truncation order of power series.
    #[arg(long, default_value_t = 16, global = true)]
    pub order: usize,

    /// Largest prime in partial Euler products.
    #[arg(long, default_value_t = 10_000, global = true)]
    pub primes: u64,

    /// Integer range lo..hi for k (or weights j).
    #[arg(
        long,
        default_value = "-10..2",
        allow_hyphen_values = true,
        global = true
    )]
    pub k: KRange,

    /// TOML file defining extra number fields by label.
    #[arg(long, global = true)]
    pub fields: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nonzero weight-space dimensions dim K'_m(X)_(j) for j in the k-range.
    Ranks { scheme: String },
    /// Strata of the cell decomposition.
    Cells { scheme: String },
    /// Euler characteristics chi(X, k).
    Chi { scheme: String },
    /// Factored L-function; optionally a partial Euler product at s.
    Lfun {
        scheme: String,
        /// Real point for numeric evaluation.
        #[arg(long, allow_hyphen_values = true)]
        s: Option<f64>,
    },
    /// Orders of vanishing of L(X, s) at s = k.
    Ord { scheme: String },
    /// Weil zeta function of a scheme over a finite field.
    Zeta { scheme: String },
    /// Special values L(X, k).
    Special { scheme: String },
    /// Checks chi(X, k) = ord L(X, s) at s = k over the k-range.
    Verify { scheme: String },
    /// Runs verify over a whole family.
    Sweep {
        #[arg(value_enum)]
        family: FamilyArg,
        /// Largest rank or dimension in the family.
        #[arg(long, default_value_t = 4)]
        max: u32,
        /// Comma-separated bases.
        #[arg(long, default_value = "Q,Q(i),Q(sqrt -5),Q(sqrt 2),Q(sqrt 5)")]
        bases: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Flags,
    Proj,
    Affine,
    Grass,
}

impl From<FamilyArg> for FamilyKind {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Flags => FamilyKind::Flags,
            FamilyArg::Proj => FamilyKind::Proj,
            FamilyArg::Affine => FamilyKind::Affine,
            FamilyArg::Grass => FamilyKind::Grass,
        }
    }
}

/// Parses `args`, runs the command and returns the exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn validate(cli: &Cli) -> Result<FieldTable, CliError> {
    if cli.k.lo > cli.k.hi {
        return Err(CliError::Validation(format!(
            "empty range {}..{}",
            cli.k.lo, cli.k.hi
        )));
    }
    if cli.order == 0 {
        return Err(CliError::Validation("--order must be at least 1".into()));
    }
    if cli.primes < 2 {
        return Err(CliError::Validation("--primes must be at least 2".into()));
    }
    match &cli.fields {
        Some(path) => load_fields(path),
        None => Ok(FieldTable::new()),
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let fields = validate(cli)?;
    let scheme = |text: &str| -> Result<(SchemeExpr, CellDecomposition), CliError> {
        let x = parse_scheme(text, &fields)?;
        let cells = cells_of(&x)?;
        Ok((x, cells))
    };
    let (rendered, code) = match &cli.command {
        Command::Ranks { scheme: s } => (ranks(scheme(s)?, cli.k), EXIT_OK),
        Command::Cells { scheme: s } => (cells_cmd(scheme(s)?), EXIT_OK),
        Command::Chi { scheme: s } => (chi_cmd(scheme(s)?, cli.k), EXIT_OK),
        Command::Ord { scheme: s } => (ord_cmd(scheme(s)?, cli.k), EXIT_OK),
        Command::Lfun { scheme: s, s: at } => (lfun_cmd(scheme(s)?, *at, cli.primes)?, EXIT_OK),
        Command::Zeta { scheme: s } => (zeta_cmd(scheme(s)?, cli.order)?, EXIT_OK),
        Command::Special { scheme: s } => (special_cmd(scheme(s)?, cli.k)?, EXIT_OK),
        Command::Verify { scheme: s } => verify_cmd(scheme(s)?, cli.k)?,
        Command::Sweep { family, max, bases } => sweep_cmd(*family, *max, bases, &fields, cli.k)?,
    };
    rendered.write(cli.format, out)?;
    Ok(code)
}

fn ranks((x, cells): (SchemeExpr, CellDecomposition), k: KRange) -> Rendered {
    let table = weight_table_of_from(&cells, k.lo);
    let entries: Vec<(u32, i64, u64)> = table
        .entries()
        .filter(|&(_, j, _)| k.range().contains(&j))
        .collect();
    let mut t = Table::new(vec!["m", "j", "dim"]);
    for &(m, j, d) in &entries {
        t.push(vec![m.to_string(), j.to_string(), d.to_string()]);
    }
    Rendered {
        json: json!({
            "scheme": x.to_string(),
            "k_min": k.lo,
            "k_max": k.hi,
            "entries": entries.iter().map(|&(m, j, dim)| json!({"m": m, "j": j, "dim": dim})).collect::<Vec<_>>(),
        }),
        before: vec![
            format!("scheme: {x}"),
            format!("weights j in {}..{}", k.lo, k.hi),
        ],
        table: t,
        after: Vec::new(),
    }
}

fn cells_cmd((x, cells): (SchemeExpr, CellDecomposition)) -> Rendered {
    let mut t = Table::new(vec!["base", "shift", "multiplicity"]);
    for s in cells.strata() {
        t.push(vec![
            s.base.label(),
            s.shift.to_string(),
            s.multiplicity.to_string(),
        ]);
    }
    Rendered {
        json: json!({
            "scheme": x.to_string(),
            "cell_count": cells.cell_count(),
            "strata": cells,
        }),
        before: vec![format!("scheme: {x}")],
        table: t,
        after: vec![format!("cells: {}", cells.cell_count())],
    }
}

fn chi_cmd((x, cells): (SchemeExpr, CellDecomposition), k: KRange) -> Rendered {
    let c = chi(&weight_table_of_from(&cells, k.lo));
    let rows: Vec<(i64, i64)> = k
        .range()
        .map(|kk| (kk, c.at(kk).expect("table covers the range")))
        .collect();
    int_rows(&x, k, "chi", rows)
}

fn ord_cmd((x, cells): (SchemeExpr, CellDecomposition), k: KRange) -> Rendered {
    let l = lfactorization_of(&cells);
    let rows: Vec<(i64, i64)> = k.range().map(|kk| (kk, ord_at(&l, kk))).collect();
    let mut r = int_rows(&x, k, "ord", rows);
    r.before.insert(1, format!("L(X, s) = {l}"));
    r
}

fn int_rows(x: &SchemeExpr, k: KRange, name: &'static str, rows: Vec<(i64, i64)>) -> Rendered {
    let mut t = Table::new(vec!["k", name]);
    for &(kk, v) in &rows {
        t.push(vec![kk.to_string(), v.to_string()]);
    }
    Rendered {
        json: json!({
            "scheme": x.to_string(),
            "k_min": k.lo,
            "k_max": k.hi,
            "rows": rows.iter().map(|&(kk, v)| json!({"k": kk, name: v})).collect::<Vec<_>>(),
        }),
        before: vec![format!("scheme: {x}")],
        table: t,
        after: Vec::new(),
    }
}

fn lfun_cmd(
    (x, cells): (SchemeExpr, CellDecomposition),
    at: Option<f64>,
    primes: u64,
) -> Result<Rendered, CliError> {
    let l = lfactorization_of(&cells);
    let mut t = Table::new(vec!["base", "shift", "exponent"]);
    for f in l.factors() {
        t.push(vec![
            f.base.label(),
            f.shift.to_string(),
            f.exponent.to_string(),
        ]);
    }
    let mut after = Vec::new();
    let evaluation = match at {
        Some(s) => {
            let v = lfun_partial_eval(&l, s, primes)?;
            after.push(format!(
                "partial Euler product at s = {s} (p <= {primes}): {v}"
            ));
            json!({"s": s, "prime_bound": primes, "value": v})
        }
        None => Value::Null,
    };
    Ok(Rendered {
        json: json!({
            "scheme": x.to_string(),
            "lfunction": l.to_string(),
            "factors": l,
            "evaluation": evaluation,
        }),
        before: vec![format!("scheme: {x}"), format!("L(X, s) = {l}")],
        table: t,
        after,
    })
}

fn zeta_cmd(
    (x, cells): (SchemeExpr, CellDecomposition),
    order: usize,
) -> Result<Rendered, CliError> {
    let series = weil_zeta_series(&cells, order)?;
    let rational = weil_zeta_rational(&cells)?;
    let mut counts = vec![String::new()];
    for r in 1..=order {
        counts.push(point_count_cells(&cells, r as u32)?.to_string());
    }
    let mut t = Table::new(vec!["n", "coefficient", "points"]);
    for (n, (c, p)) in series.coeffs().iter().zip(&counts).enumerate() {
        t.push(vec![n.to_string(), c.to_string(), p.clone()]);
    }
    let factors = |m: &std::collections::BTreeMap<u32, u64>| {
        m.iter()
            .map(|(&d, &l)| json!({"degree": d, "exponent": l}))
            .collect::<Vec<_>>()
    };
    Ok(Rendered {
        json: json!({
            "scheme": x.to_string(),
            "q": rational.q(),
            "order": order,
            "coefficients": series,
            "point_counts": &counts[1..],
            "rational": {
                "display": rational.to_string(),
                "numerator": factors(rational.numerator()),
                "denominator": factors(rational.denominator()),
            },
        }),
        before: vec![
            format!("scheme: {x}"),
            format!("Z(X, t) = {rational}"),
            format!("        = {series}"),
        ],
        table: t,
        after: Vec::new(),
    })
}

fn special_cmd(
    (x, cells): (SchemeExpr, CellDecomposition),
    k: KRange,
) -> Result<Rendered, CliError> {
    let l = lfactorization_of(&cells);
    let mut t = Table::new(vec!["k", "value", "kind", "order", "numeric"]);
    let mut rows = Vec::new();
    for kk in k.range() {
        let v = special_value_product(&l, kk)?;
        let kind = serde_json::to_value(v.kind)?;
        t.push(vec![
            kk.to_string(),
            v.to_string(),
            kind.as_str().unwrap_or_default().to_string(),
            v.vanishing_order.to_string(),
            v.approximate()
                .filter(|_| v.vanishing_order == 0)
                .map(|a| format!("{a:.12e}"))
                .unwrap_or_default(),
        ]);
        rows.push(json!({"k": kk, "display": v.to_string(), "value": v}));
    }
    Ok(Rendered {
        json: json!({
            "scheme": x.to_string(),
            "lfunction": l.to_string(),
            "rows": rows,
        }),
        before: vec![format!("scheme: {x}"), format!("L(X, s) = {l}")],
        table: t,
        after: Vec::new(),
    })
}

fn verify_cmd(
    (x, cells): (SchemeExpr, CellDecomposition),
    k: KRange,
) -> Result<(Rendered, i32), CliError> {
    let report = check_soule_cells(x.to_string(), &cells, k.range())?;
    let mut t = Table::new(vec!["k", "chi", "ord", "match"]);
    for r in &report.rows {
        t.push(vec![
            r.k.to_string(),
            r.chi.to_string(),
            r.ord.to_string(),
            if r.matches { "yes" } else { "NO" }.to_string(),
        ]);
    }
    let code = if report.is_pass() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    let after = vec![
        format!(
            "passed {}, failed {}; finite K-degree support: {}",
            report.summary.passed,
            report.summary.failed,
            if report.bs_finite_support {
                "yes"
            } else {
                "no"
            }
        ),
        if report.is_pass() { "PASS" } else { "FAIL" }.to_string(),
    ];
    Ok((
        Rendered {
            json: serde_json::to_value(&report)?,
            before: vec![format!("scheme: {x}")],
            table: t,
            after,
        },
        code,
    ))
}

fn sweep_cmd(
    family: FamilyArg,
    max: u32,
    bases: &str,
    fields: &FieldTable,
    k: KRange,
) -> Result<(Rendered, i32), CliError> {
    let bases = bases
        .split(',')
        .map(|b| match parse_base(b.trim(), fields)? {
            SchemeExpr::BasePoint(kk) => Ok(Base::Number(kk)),
            SchemeExpr::FiniteBase(f) => Ok(Base::Finite(f)),
            _ => unreachable!("parse_base returns a base"),
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let family = Family {
        kind: family.into(),
        max,
        bases,
        k_range: k.range(),
    };
    let report = sweep(&family)?;
    let mut t = Table::new(vec![
        "scheme",
        "passed",
        "failed",
        "finite_support",
        "nonzero_rows",
    ]);
    for m in &report.members {
        t.push(vec![
            m.scheme.clone(),
            m.passed.to_string(),
            m.failed.to_string(),
            m.bs_finite_support.to_string(),
            m.nonzero_rows.to_string(),
        ]);
    }
    let mut after = vec![format!(
        "members {}, rows {}, passed {}, failed {}, rows with chi <= -1: {}, chi >= 1: {}, max |chi| = {}",
        report.members.len(),
        report.total_rows,
        report.passed,
        report.failed,
        report.pole_rows,
        report.zero_rows,
        report.max_abs_chi
    )];
    for m in &report.mismatches {
        after.push(format!(
            "mismatch: {} at k = {}: chi = {}, ord = {}",
            m.scheme, m.row.k, m.row.chi, m.row.ord
        ));
    }
    after.push(if report.is_pass() { "PASS" } else { "FAIL" }.to_string());
    let code = if report.is_pass() {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    };
    Ok((
        Rendered {
            json: serde_json::to_value(&report)?,
            before: vec![format!("family: {}", report.family)],
            table: t,
            after,
        },
        code,
    ))
}
