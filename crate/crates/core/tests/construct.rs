use delsarte::construct::*;
use delsarte::gegenbauer::BasisContext;
use delsarte::poly::UniPoly;
use rug::{Float, Rational};

const PREC: u32 = 512;

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn half() -> Rational {
    q(1, 2)
}

fn m43() -> (BasisContext, Construction) {
    let ctx = BasisContext::new(43).unwrap();
    let c = construct_candidates(&ctx, FormSpec::new(3, 3).unwrap(), &half(), PREC).unwrap();
    (ctx, c)
}

fn close(a: &Float, b: &str, tol: f64) -> bool {
    let b = Float::with_val(PREC, Float::parse(b).unwrap());
    Float::with_val(PREC, a - &b).abs() < tol
}

#[test]
fn m43_eliminant_has_a_single_real_root() {
    let (_, c) = m43();
    assert_eq!(c.roots.len(), 1);
    let r = &c.roots[0];
    assert!(close(&r.value, "0.1411134854416294", 1e-16));
    let f = c.trace.eliminant.as_ref().unwrap();
    assert_ne!(f.eval(&r.lo).cmp0(), f.eval(&r.hi).cmp0());
    assert!(Rational::from(&r.hi - &r.lo) < Rational::from((1, 1u64 << 60)));
}

#[test]
fn m43_quartic_relations() {
    let (_, c) = m43();
    let r = UniPoly::new(vec![q(40170654239, 32176151600), q(-3914589, 1039550), q(3, 1)]);
    assert_eq!(c.trace.r_reduced.as_ref().unwrap(), &r);
    let cand = c.select().unwrap();
    assert!(close(cand.q.as_ref().unwrap(), "-1.5077730291167411", 1e-16));
    assert!(close(cand.r.as_ref().unwrap(), "0.7768145246622512", 1e-16));
}

#[test]
fn m43_candidate_has_mandated_zeros_and_roots() {
    let (_, c) = m43();
    let cand = c.select().unwrap();
    let b = cand.basis();
    let tiny = Float::with_val(PREC, Float::i_exp(1, -400));
    assert!(b[7].clone().abs() < tiny && b[8].clone().abs() < tiny);
    let f1: Float = b.iter().fold(Float::new(PREC), |a, x| a + x);
    for x in cand.zeros.iter().chain([&Float::with_val(PREC, 0.5)]) {
        let v = cand.polynomial.eval(x).abs();
        assert!(v < Float::with_val(PREC, &f1 * &Float::with_val(PREC, Float::i_exp(1, -256))));
    }
}

fn fake_root(z: &str) -> RealRoot {
    let v = Float::with_val(PREC, Float::parse(z).unwrap());
    let lo = v.to_rational().unwrap();
    RealRoot { value: v, lo: lo.clone(), hi: lo, exact: None }
}

#[test]
fn selection_filters_infeasible_candidates() {
    let ctx = BasisContext::new(43).unwrap();
    let sys = build_system(&ctx, FormSpec::new(3, 3).unwrap(), &half()).unwrap();
    let tr = eliminate_to_univariate(&ctx, &sys).unwrap();
    // Sum of squared zeros 0.9 forces some a_i above 1/2.
    let out = back_substitute(&ctx, &sys, &tr, Some(&fake_root("0.9")), PREC).unwrap();
    assert!(out.diagnosis.zeros.is_some());
    // Quartic negative at t = 1/2.
    let neg = back_substitute(&ctx, &sys, &tr, Some(&fake_root("0.62")), PREC).unwrap();
    assert!(neg.diagnosis.quartic.is_some());
    assert!(matches!(select_solution(vec![out.clone(), neg.clone()]), Err(SelectionError::NoSurvivor { .. })));
    let good = construct_candidates(&ctx, sys.spec, &half(), PREC).unwrap().select().unwrap();
    let picked = select_solution(vec![out, good.clone(), neg]).unwrap();
    assert_eq!(picked.xi, good.xi);
    assert!(matches!(select_solution(vec![good.clone(), good]), Err(SelectionError::Ambiguous(v)) if v.len() == 2));
}

#[test]
fn levenshtein_cases_are_exact() {
    for (m, form, k) in [(9, 1, 1), (10, 1, 1), (24, 2, 1), (4, 2, 0)] {
        let ctx = BasisContext::new(m).unwrap();
        let c = construct_candidates(&ctx, FormSpec::new(form, k).unwrap(), &half(), 256).unwrap();
        let cand = c.select().unwrap();
        assert!(cand.exact_polynomial.is_some(), "m={m}");
        assert!(cand.q.is_none() && cand.gammas.is_empty());
    }
}

#[test]
fn m24_zero_is_one_quarter() {
    let ctx = BasisContext::new(24).unwrap();
    let c = construct_candidates(&ctx, FormSpec::new(2, 1).unwrap(), &half(), 256).unwrap();
    let cand = c.select().unwrap();
    assert_eq!(cand.xi_exact, Some(q(1, 16)));
    assert_eq!(cand.zeros[0], 0.25);
}

#[test]
fn invalid_specs() {
    assert!(FormSpec::new(0, 1).is_err());
    assert!(FormSpec::new(4, 0).is_err());
    let ctx = BasisContext::new(10).unwrap();
    assert!(build_system(&ctx, FormSpec::new(1, 1).unwrap(), &q(0, 1)).is_err());
}
