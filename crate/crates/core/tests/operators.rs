use reshetnyak::opcalc::{
    a_operator, a_tilde, adjoint, check_order, corrected_r1_compare, derivation_report, gamma_coef, is_self_adjoint, p_polys,
    parse, rank_flow_check, reference_compare, specialize, DimRational, Letter, NCPoly, Word, MAX_R,
};
use reshetnyak::Error;

fn word(letters: &[Letter], rad: u32) -> Word {
    Word::new(letters.to_vec(), rad)
}

#[test]
fn zeroth_order_operators_at_low_rank() {
    assert_eq!(a_operator(0, 0, 0).unwrap().to_text(), "1");
    assert_eq!(a_operator(1, 0, 0).unwrap(), parse("1/(n-1) * 1", 1).unwrap());
    assert!(gamma_coef(0, 0).unwrap().is_one());
}

#[test]
fn r1_polynomials_have_expected_support() {
    for m in 0..6 {
        let p = p_polys(1, m).unwrap();
        assert_eq!(p.keys().copied().collect::<Vec<_>>(), vec![-1, 0, 1]);
        let mi = m as i64;
        assert_eq!(p[&-1], NCPoly::monomial(m, word(&[Letter::J], 0), DimRational::from_int(-mi * (mi - 1))));
        assert_eq!(p[&1], NCPoly::monomial(m, word(&[Letter::D, Letter::D], 1), DimRational::from_int(-1)));
    }
}

#[test]
fn derived_operators_pass_structural_checks() {
    for m in 0..4 {
        for r in 0..=2 {
            for l in 0..=r {
                let a = a_operator(m, r, l).unwrap();
                assert!(is_self_adjoint(&a), "A({m},{r},{l})");
                assert!(rank_flow_check(&a).is_ok(), "A({m},{r},{l})");
                assert!(check_order(&a, l).is_ok(), "A({m},{r},{l})");
                let rep = derivation_report(m, r, l).unwrap();
                assert_eq!(rep.text, a.to_text());
                assert!(rep.checks.self_adjoint && rep.checks.order && rep.checks.rank_flow);
            }
        }
    }
}

#[test]
fn symmetrization_is_needed_at_rank_two() {
    let at = a_tilde(2, 2, 1).unwrap();
    assert!(!is_self_adjoint(&at));
    assert!(is_self_adjoint(&a_operator(2, 2, 1).unwrap()));
    assert_eq!(adjoint(&adjoint(&at)), at);
}

#[test]
fn order_two_words_appear_only_in_first_component() {
    for l in 0..=1 {
        let a = specialize(&a_operator(2, 1, l).unwrap(), 3).unwrap();
        let has_d2 = a.terms().keys().any(|w| w.derivative_order() == 2);
        assert_eq!(has_d2, l == 1);
    }
}

#[test]
fn text_round_trips_through_parser() {
    for m in 0..4 {
        for l in 0..=2 {
            let a = a_operator(m, 2, l).unwrap();
            assert_eq!(parse(&a.to_text(), m).unwrap(), a);
        }
    }
    assert_eq!(a_tilde(1, 2, 0).unwrap().to_text(), "(n-1) * 1");
    assert!(matches!(parse("j ?", 0), Err(Error::Parse { .. })));
}

#[test]
fn specialization_evaluates_dimension() {
    let s = specialize(&a_tilde(1, 2, 0).unwrap(), 3).unwrap();
    assert_eq!(s.to_text(), "2 * 1");
}

#[test]
fn printed_zeroth_order_forms_agree_with_pipeline() {
    for m in 0..=5 {
        assert!(reference_compare(m, 0).unwrap().all_match(), "m={m}");
    }
}

#[test]
fn corrected_first_order_forms_agree_with_pipeline() {
    for m in 0..=6 {
        assert!(corrected_r1_compare(m).unwrap().all_match(), "m={m}");
    }
}

#[test]
fn depth_cap_is_enforced() {
    assert!(p_polys(MAX_R + 1, 0).is_err());
    assert!(reference_compare(0, 3).is_err());
}
