use std::process::{Command, Output};

use cellzeta::{FiniteField, NumberField, SchemeExpr};
use cellzeta_cli::{parse_scheme, FieldTable};
use proptest::prelude::*;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn csv_rows(args: &[&str]) -> (Vec<String>, Vec<Vec<String>>) {
    let mut all = args.to_vec();
    all.extend(["--format", "csv"]);
    let o = run(&all);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (headers, rows)
}

#[test]
fn chi_of_projective_line() {
    let (headers, rows) = csv_rows(&["chi", "proj(Q,1)", "--k", "-5..2"]);
    assert_eq!(headers, ["k", "chi"]);
    assert_eq!(rows.len(), 8);
    assert!(rows.contains(&vec!["1".to_string(), "-1".to_string()]));
    assert!(rows.contains(&vec!["2".to_string(), "-1".to_string()]));
}

#[test]
fn verify_complete_flags() {
    let o = run(&["verify", "flag(Q,1+1+1)", "--k", "-12..4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&["verify", "flag(Q,1+1+1)", "--k", "-12..4"]);
    assert_eq!(v["summary"]["failed"], 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 17);
    assert!(v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["matches"] == true));
}

/// Coefficients of `prod (1 - q^d t)^(-l)` by direct multiplication of
/// geometric series.
fn rational_expansion(q: i128, factors: &[(u32, u32)], order: usize) -> Vec<i128> {
    let mut acc = vec![0i128; order + 1];
    acc[0] = 1;
    for &(d, l) in factors {
        let a = q.pow(d);
        for _ in 0..l {
            // multiply by 1 / (1 - a t)
            for n in 1..=order {
                acc[n] += a * acc[n - 1];
            }
        }
    }
    acc
}

#[test]
fn zeta_of_complete_flags_over_f2() {
    let v = json(&["zeta", "flag(F(2),1+1+1)", "--order", "6"]);
    let expected = rational_expansion(2, &[(0, 1), (1, 2), (2, 2), (3, 1)], 6);
    let got: Vec<i128> = v["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap().parse().unwrap())
        .collect();
    assert_eq!(got, expected);
    assert_eq!(v["q"], 2);
    assert_eq!(v["point_counts"][0], "21");
    assert_eq!(v["rational"]["denominator"].as_array().unwrap().len(), 4);
}

#[test]
fn json_schemas() {
    let x = "flag(Q(i), 1+2)";
    let v = json(&["ranks", x]);
    assert!(v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["m"].is_u64() && e["j"].is_i64() && e["dim"].is_u64()));
    let v = json(&["cells", x]);
    assert_eq!(v["cell_count"], 3);
    for s in v["strata"].as_array().unwrap() {
        assert!(s["base"].is_string() && s["shift"].is_u64() && s["multiplicity"].is_u64());
    }
    let v = json(&["chi", x]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    assert!(v["rows"][0]["chi"].is_i64());
    let v = json(&["ord", x]);
    assert!(v["rows"][0]["ord"].is_i64());
    let v = json(&["lfun", x, "--s", "4"]);
    assert!(v["lfunction"].is_string());
    assert!(v["evaluation"]["value"].is_f64());
    for f in v["factors"].as_array().unwrap() {
        assert!(f["base"].is_string() && f["shift"].is_i64() && f["exponent"].is_i64());
    }
    let v = json(&["special", "proj(Q, 1)", "--k", "-3..3"]);
    for r in v["rows"].as_array().unwrap() {
        assert!(r["k"].is_i64() && r["display"].is_string());
        assert!(r["value"]["kind"].is_string() && r["value"]["rational"].is_string());
        assert!(r["value"]["vanishing_order"].is_i64());
    }
    let v = json(&["sweep", "proj", "--max", "3", "--bases", "Q,Q(sqrt 2)"]);
    assert_eq!(v["members"].as_array().unwrap().len(), 8);
    assert_eq!(v["failed"], 0);
}

#[test]
fn csv_schemas() {
    let cases: [(&[&str], &[&str]); 9] = [
        (&["ranks", "proj(Q,2)"], &["m", "j", "dim"]),
        (&["cells", "proj(Q,2)"], &["base", "shift", "multiplicity"]),
        (&["chi", "proj(Q,2)"], &["k", "chi"]),
        (&["ord", "proj(Q,2)"], &["k", "ord"]),
        (&["lfun", "proj(Q,2)"], &["base", "shift", "exponent"]),
        (&["zeta", "proj(F(3),2)"], &["n", "coefficient", "points"]),
        (
            &["special", "proj(Q,2)"],
            &["k", "value", "kind", "order", "numeric"],
        ),
        (&["verify", "proj(Q,2)"], &["k", "chi", "ord", "match"]),
        (
            &["sweep", "affine", "--max", "2"],
            &[
                "scheme",
                "passed",
                "failed",
                "finite_support",
                "nonzero_rows",
            ],
        ),
    ];
    for (args, want) in cases {
        let (headers, rows) = csv_rows(args);
        assert_eq!(headers, want, "{args:?}");
        assert!(!rows.is_empty(), "{args:?}");
        assert!(rows.iter().all(|r| r.len() == want.len()));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["chi", "proj(Q, 1"]).status.code(), Some(2));
    assert_eq!(run(&["chi", "proj(K7, 1)"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["chi", "Q", "--k", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["cells", "grass(F(2), 5, 4)"]).status.code(), Some(3));
    assert_eq!(run(&["chi", "F(6)"]).status.code(), Some(3));
    assert_eq!(run(&["chi", "Q", "--k", "3..1"]).status.code(), Some(3));
    assert_eq!(run(&["zeta", "Q", "--order", "0"]).status.code(), Some(3));
    assert_eq!(run(&["zeta", "proj(Q, 2)"]).status.code(), Some(4));
    assert_eq!(run(&["special", "F(2)"]).status.code(), Some(4));
    assert_eq!(run(&["lfun", "Q", "--s", "0.5"]).status.code(), Some(4));
    assert_eq!(
        run(&["chi", "Q", "--fields", "/nonexistent/fields.toml"])
            .status
            .code(),
        Some(5)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn errors_go_to_stderr_with_position() {
    let o = run(&["chi", "proj(Q, x)"]);
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("column 9"), "{err}");
}

const CUBIC: &str = r#"
[[field]]
label = "K23"
degree = 3
r1 = 1
r2 = 1
disc = -23

[[field.splitting]]
p = 2
primes = [[1, 3]]
"#;

#[test]
fn field_config() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fields.toml");
    std::fs::write(&path, CUBIC).unwrap();
    let p = path.to_str().unwrap();
    let o = run(&["verify", "flag(K23, 1+2)", "--fields", p, "--k", "-15..4"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v = json(&["ord", "K23", "--fields", p, "--k", "-2..1"]);
    let ords: Vec<i64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["ord"].as_i64().unwrap())
        .collect();
    // (r1, r2) = (1, 1): r1 + r2 at -2, r2 at -1, r1 + r2 - 1 at 0, pole at 1
    assert_eq!(ords, [2, 1, 1, -1]);
    // splitting data stops at p = 2
    let o = run(&["lfun", "K23", "--fields", p, "--s", "2"]);
    assert_eq!(o.status.code(), Some(4));
    std::fs::write(&path, CUBIC.replace("r2 = 1", "r2 = 2")).unwrap();
    assert_eq!(run(&["chi", "Q", "--fields", p]).status.code(), Some(3));
    std::fs::write(&path, "[[field]\n").unwrap();
    assert_eq!(run(&["chi", "Q", "--fields", p]).status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let commands: [&[&str]; 6] = [
        &["ranks", "flag(Q(sqrt 5), 2+1)", "--format", "json"],
        &["special", "proj(Q, 3)", "--format", "json"],
        &["zeta", "grass(F(4), 2, 4)", "--format", "csv"],
        &[
            "verify",
            "union(proj(Q(i), 2), affine(Q, 1))",
            "--format",
            "json",
        ],
        &["sweep", "flags", "--max", "4", "--format", "json"],
        &["cells", "flag(Q(sqrt -5), 1+1+2)"],
    ];
    for args in commands {
        let first = run(args);
        assert_eq!(first.status.code(), Some(0));
        for _ in 0..2 {
            assert_eq!(run(args).stdout, first.stdout, "{args:?}");
        }
    }
}

#[test]
fn plain_output_is_aligned() {
    let o = run(&["chi", "proj(Q, 1)", "--k", "-1..1"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "scheme: proj(Q, 1)");
    assert_eq!(lines[1], " k  chi");
    assert_eq!(lines[2], "-1    1");
}

fn arb_base() -> impl Strategy<Value = SchemeExpr> {
    prop_oneof![
        Just(SchemeExpr::base(NumberField::rationals())),
        prop::sample::select(vec![-1i64, -5, 2, 5, 3, -7])
            .prop_map(|d| SchemeExpr::base(NumberField::quadratic(d).unwrap())),
        prop::sample::select(vec![2u64, 3, 4, 8, 9])
            .prop_map(|q| SchemeExpr::finite(FiniteField::new(q).unwrap())),
    ]
}

fn arb_expr() -> impl Strategy<Value = SchemeExpr> {
    arb_base().prop_recursive(4, 16, 3, |inner| {
        prop_oneof![
            (inner.clone(), 0u32..4).prop_map(|(x, d)| x.affine(d)),
            (inner.clone(), 0u32..4).prop_map(|(x, d)| x.proj(d)),
            (inner.clone(), 0u32..4, 0u32..3)
                .prop_map(|(x, k, extra)| x.grassmannian(k, k + extra).unwrap()),
            (inner.clone(), prop::collection::vec(1u32..3, 1..4))
                .prop_map(|(x, p)| x.flag(p).unwrap()),
            prop::collection::vec(inner, 1..4).prop_map(|v| SchemeExpr::union(v).unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(x in arb_expr()) {
        let text = x.to_string();
        let back = parse_scheme(&text, &FieldTable::new()).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn parser_never_panics(s in "[a-zQF(),+= 0-9-]{0,40}") {
        let _ = parse_scheme(&s, &FieldTable::new());
    }
}
