use cellzeta::arith::{int, Rational};
use cellzeta::cells::{cells_of, point_count};
use cellzeta::fields::ord_at_integer;
use cellzeta::kweights::{borel_weight_table, chi, chi_cover, weight_table_of, ChiFunction, Cover};
use cellzeta::lfun::{
    lfactorization_cover, lfactorization_of, ord_at, weil_zeta_rational, weil_zeta_series,
    LFactorization,
};
use cellzeta::verify::{check_soule, compositions, sweep, Family, FamilyKind};
use cellzeta::{Base, FiniteField, NumberField, SchemeExpr};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn fields() -> Vec<NumberField> {
    vec![
        NumberField::rationals(),
        NumberField::quadratic(-1).unwrap(),
        NumberField::quadratic(-5).unwrap(),
        NumberField::quadratic(2).unwrap(),
        NumberField::quadratic(5).unwrap(),
    ]
}

fn chi_of(x: &SchemeExpr) -> ChiFunction {
    chi(&weight_table_of(&cells_of(x).unwrap()))
}

fn lf_of(x: &SchemeExpr) -> LFactorization {
    lfactorization_of(&cells_of(x).unwrap())
}

/// Hand-derived chi of `Spec O_K` from the Borel ranks, by weight.
fn chi_of_integers_by_hand(k: &NumberField, j: i64) -> i64 {
    let (r1, r2) = (k.r1() as i64, k.r2() as i64);
    match j {
        1 => -1,
        0 => r1 + r2 - 1,
        j if j < 0 => {
            let i = 1 - j;
            // m = 2i - 1 is odd, sign (-1)^(m+1) = +1
            if i % 2 == 1 {
                r1 + r2
            } else {
                r2
            }
        }
        _ => 0,
    }
}

#[test]
fn base_case_matches_hand_table() {
    for k in fields() {
        let c = chi(&borel_weight_table(&k));
        for j in -30..=6 {
            assert_eq!(
                c.at(j).unwrap(),
                chi_of_integers_by_hand(&k, j),
                "{} at {j}",
                k.label()
            );
            assert_eq!(ord_at_integer(&k, j), chi_of_integers_by_hand(&k, j));
        }
    }
}

#[test]
fn flag_bundles_satisfy_the_identity() {
    for k in fields() {
        for n in 1..=4 {
            for parts in compositions(n) {
                let x = SchemeExpr::base(k.clone()).flag(parts).unwrap();
                let report = check_soule(&x, -12..=6).unwrap();
                assert!(report.is_pass(), "{x}: {:?}", report.mismatches());
            }
        }
    }
}

#[test]
fn projective_bundle_sum_rule() {
    for k in fields() {
        let base = SchemeExpr::base(k.clone()).flag(vec![1, 2]).unwrap();
        let c_base = chi_of(&base);
        for d in 0..=4u32 {
            let c = chi_of(&base.clone().proj(d));
            for j in -15..=10 {
                let expected: i64 = (0..=d as i64).map(|i| c_base.at(j - i).unwrap()).sum();
                assert_eq!(c.at(j).unwrap(), expected);
            }
        }
    }
}

#[test]
fn affine_shift_laws() {
    for k in fields() {
        let base = SchemeExpr::base(k).grassmannian(2, 4).unwrap();
        let (c, l) = (chi_of(&base), lf_of(&base));
        for d in 0..=5u32 {
            let a = base.clone().affine(d);
            let (ca, cs) = (chi_of(&a), c.shifted(d as i64));
            for j in -40..=12 {
                assert_eq!(ca.at(j).unwrap(), cs.at(j).unwrap());
            }
            assert_eq!(lf_of(&a), l.shifted(d as i64));
        }
    }
}

#[test]
fn fiber_invariance_across_fields_with_equal_signature() {
    // Q(i) and Q(sqrt -5) have the same (r1, r2); so do Q(sqrt 2), Q(sqrt 5).
    let pairs = [(-1, -5), (2, 5)];
    for (a, b) in pairs {
        let ka = NumberField::quadratic(a).unwrap();
        let kb = NumberField::quadratic(b).unwrap();
        for parts in compositions(3) {
            let xa = SchemeExpr::base(ka.clone()).flag(parts.clone()).unwrap();
            let xb = SchemeExpr::base(kb.clone()).flag(parts).unwrap();
            for j in -10..=4 {
                assert_eq!(chi_of(&xa).at(j).unwrap(), chi_of(&xb).at(j).unwrap());
                assert_eq!(ord_at(&lf_of(&xa), j), ord_at(&lf_of(&xb), j));
            }
        }
    }
}

fn p1_cover(k: &NumberField) -> (Cover<ChiFunction>, Cover<LFactorization>) {
    let pt = SchemeExpr::base(k.clone());
    let a1 = pt.clone().affine(1);
    // A^1 minus a point: a line with one cell removed
    let gm_chi = chi_of(&a1).minus(&chi_of(&pt));
    let gm_l = lf_of(&a1).times(&lf_of(&pt).inverse());
    let mut c = Cover::new(2).unwrap();
    let mut l = Cover::new(2).unwrap();
    for i in 0..2 {
        c.set(&[i], chi_of(&a1));
        l.set(&[i], lf_of(&a1));
    }
    c.set(&[0, 1], gm_chi);
    l.set(&[0, 1], gm_l);
    (c, l)
}

#[test]
fn two_chart_cover_of_the_projective_line() {
    for k in fields() {
        let p1 = SchemeExpr::base(k.clone()).proj(1);
        let (c, l) = p1_cover(&k);
        let chi_glued = chi_cover(&c).unwrap();
        let l_glued = lfactorization_cover(&l).unwrap();
        assert_eq!(l_glued, lf_of(&p1));
        for j in -10..=2 {
            assert_eq!(chi_glued.at(j).unwrap(), chi_of(&p1).at(j).unwrap());
            assert_eq!(ord_at(&l_glued, j), chi_glued.at(j).unwrap());
        }
    }
}

#[test]
fn degenerate_three_set_cover() {
    let k = NumberField::quadratic(2).unwrap();
    let x = SchemeExpr::base(k).flag(vec![1, 1, 1]).unwrap();
    let mut c = Cover::new(3).unwrap();
    let mut l = Cover::new(3).unwrap();
    for mask in 1u32..8 {
        let idx: Vec<usize> = (0..3).filter(|i| mask & (1 << i) != 0).collect();
        c.set(&idx, chi_of(&x));
        l.set(&idx, lf_of(&x));
    }
    let glued = chi_cover(&c).unwrap();
    let lg = lfactorization_cover(&l).unwrap();
    assert_eq!(lg, lf_of(&x));
    for j in -10..=4 {
        assert_eq!(glued.at(j).unwrap(), chi_of(&x).at(j).unwrap());
    }
}

#[test]
fn incomplete_cover_is_rejected() {
    let mut c: Cover<ChiFunction> = Cover::new(2).unwrap();
    c.set(&[0], ChiFunction::zero());
    c.set(&[1], ChiFunction::zero());
    assert!(chi_cover(&c).is_err());
    assert!(Cover::<ChiFunction>::new(0).is_err());
}

#[test]
fn support_vanishes_above_dimension() {
    for k in fields() {
        let x = SchemeExpr::base(k).proj(3);
        let c = chi_of(&x);
        for j in 5..40 {
            assert_eq!(c.at(j).unwrap(), 0);
        }
    }
}

/// Independent oracle: exp of `sum N_r t^r / r` by the defining power sum.
fn exp_by_definition(u: &[Rational]) -> Vec<Rational> {
    let n = u.len();
    let mul = |a: &[Rational], b: &[Rational]| {
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            for j in 0..n - i {
                out[i + j] += &a[i] * &b[j];
            }
        }
        out
    };
    let mut out = vec![Rational::zero(); n];
    let mut term = vec![Rational::zero(); n];
    term[0] = Rational::one();
    for k in 0..n {
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
        term = mul(&term, u);
        for t in term.iter_mut() {
            *t /= int(k as i64 + 1);
        }
    }
    out
}

#[test]
fn weil_zeta_forms_agree() {
    for q in [2u64, 3] {
        let f = FiniteField::new(q).unwrap();
        for n in 1..=4 {
            for parts in compositions(n) {
                let x = SchemeExpr::finite(f).flag(parts).unwrap();
                let cells = cells_of(&x).unwrap();
                let series = weil_zeta_series(&cells, 8).unwrap();
                let rational = weil_zeta_rational(&cells).unwrap().expand(8).unwrap();
                assert_eq!(series, rational, "{x}");
                let mut u = vec![Rational::zero()];
                for r in 1..=8u32 {
                    let n_r = BigInt::from(point_count(&x, r).unwrap());
                    u.push(Rational::new(n_r, BigInt::from(r)));
                }
                assert_eq!(series.coeffs().to_vec(), exp_by_definition(&u));
            }
        }
    }
}

#[test]
fn finite_field_identity() {
    let f = FiniteField::new(4).unwrap();
    let x = SchemeExpr::finite(f).flag(vec![1, 2, 1]).unwrap();
    let report = check_soule(&x, -6..=8).unwrap();
    assert!(report.is_pass());
    assert!(report.rows.iter().any(|r| r.chi != 0));
}

#[test]
fn sweep_is_non_vacuous() {
    let family = Family {
        kind: FamilyKind::Flags,
        max: 3,
        bases: fields().into_iter().map(Base::Number).collect(),
        k_range: -8..=4,
    };
    let report = sweep(&family).unwrap();
    assert!(report.is_pass());
    assert!(report.is_non_vacuous());
    assert!(report.nonzero_rows > 0);
    assert!(report.max_abs_chi >= 2);
}

fn arb_scheme() -> impl Strategy<Value = SchemeExpr> {
    let leaf = (0usize..5).prop_map(|i| SchemeExpr::base(fields()[i].clone()));
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (inner.clone(), 0u32..3).prop_map(|(x, d)| x.affine(d)),
            (inner.clone(), 0u32..3).prop_map(|(x, d)| x.proj(d)),
            (inner.clone(), 0u32..3).prop_map(|(x, k)| x.grassmannian(k.min(2), 3).unwrap()),
            (inner.clone(), 1u32..3, 1u32..3).prop_map(|(x, a, b)| x.flag(vec![a, b]).unwrap()),
            prop::collection::vec(inner, 1..3).prop_map(|v| SchemeExpr::union(v).unwrap()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn identity_holds_for_random_schemes(x in arb_scheme()) {
        let report = check_soule(&x, -10..=4).unwrap();
        prop_assert!(report.is_pass(), "{}: {:?}", x, report.mismatches());
    }

    #[test]
    fn additivity(x in arb_scheme(), y in arb_scheme()) {
        let u = SchemeExpr::union(vec![x.clone(), y.clone()]).unwrap();
        let (cu, cx, cy) = (chi_of(&u), chi_of(&x), chi_of(&y));
        for j in -10..=6 {
            prop_assert_eq!(cu.at(j).unwrap(), cx.at(j).unwrap() + cy.at(j).unwrap());
        }
        prop_assert_eq!(lf_of(&u), lf_of(&x).times(&lf_of(&y)));
    }

    #[test]
    fn shift_covariance(x in arb_scheme(), d in 0u32..4) {
        let a = x.clone().affine(d);
        let (c, ca) = (chi_of(&x), chi_of(&a));
        for j in -8..=6 {
            prop_assert_eq!(ca.at(j + d as i64).unwrap(), c.at(j).unwrap());
        }
        let (l, la) = (lf_of(&x), lf_of(&a));
        for j in -8..=6 {
            prop_assert_eq!(ord_at(&la, j + d as i64), ord_at(&l, j));
        }
    }
}
