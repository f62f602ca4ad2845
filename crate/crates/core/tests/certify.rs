use delsarte::certify::*;
use delsarte::construct::{construct_candidates, ExtremalCandidate, FormSpec, Node};
use delsarte::gegenbauer::{BasisContext, EvenPolynomial, PrecisionTag};
use delsarte::numeric::Precision;
use delsarte::pipeline::{solve, SolveOptions};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::{Float, Rational};

fn candidate(m: u32, form: u8, k: usize, prec: u32) -> (BasisContext, ExtremalCandidate) {
    let ctx = BasisContext::new(m).unwrap();
    let c = construct_candidates(&ctx, FormSpec::new(form, k).unwrap(), &Rational::from((1, 2)), prec).unwrap();
    let cand = c.select().unwrap();
    (ctx, cand)
}

fn eps() -> Float {
    Precision::default().margin()
}

#[test]
fn exact_bounds_for_small_dimensions() {
    for (m, form, k, w) in [(4, 2, 0, "24"), (5, 2, 0, "42"), (9, 1, 1, "26730/73"), (24, 2, 1, "196560")] {
        let (ctx, cand) = candidate(m, form, k, 512);
        let f = build_functional(&ctx, &cand).unwrap();
        let (b, gap) = compute_bound(&f, &cand, &eps());
        assert!(gap.pass, "m={m}: {gap}");
        assert_eq!(b.w_exact.unwrap().to_string(), w, "m={m}");
    }
}

#[test]
fn m4_weights() {
    let (ctx, cand) = candidate(4, 2, 0, 512);
    let f = build_functional(&ctx, &cand).unwrap();
    let w = |n| f.exact_weights[f.nodes.iter().position(|x| *x == n).unwrap()].clone().unwrap();
    assert_eq!(w(Node::One), Rational::from((1, 12)));
    assert_eq!(w(Node::S), Rational::from((2, 3)));
    assert_eq!(w(Node::Origin), Rational::from((1, 4)));
}

#[test]
fn m43_quadrature_is_exact_on_random_even_polynomials() {
    let (ctx, cand) = candidate(43, 3, 3, 512);
    let f = build_functional(&ctx, &cand).unwrap();
    let degree = cand.spec.degree();
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..20 {
        let coeffs: Vec<Rational> = (0..=degree / 2)
            .map(|_| Rational::from((rng.gen_range(-1000i64..=1000), rng.gen_range(1i64..=50))))
            .collect();
        let p = EvenPolynomial::from_even(coeffs, PrecisionTag::Exact);
        let b = ctx.expand_in_basis(&p);
        let mut expected = Float::with_val(512, &b[0]);
        for (c, g) in &f.gammas {
            expected += Float::with_val(512, g * &Float::with_val(512, &b[c / 2]));
        }
        let mut got = Float::new(512);
        for (x, w) in f.positions.iter().zip(&f.weights) {
            let px = p.coeffs.iter().rev().fold(Float::new(512), |a, c| a * Float::with_val(512, x.square_ref()) + c);
            got += Float::with_val(512, w * &px);
        }
        let scale = b.iter().fold(Float::with_val(512, 1), |a, c| a.max(&Float::with_val(512, &Rational::from(c.abs_ref()))));
        assert!(Float::with_val(512, &got - &expected).abs() / scale < 1e-100);
    }
}

#[test]
fn m43_checks_pass() {
    let (ctx, cand) = candidate(43, 3, 3, 512);
    let e = eps();
    let f = build_functional(&ctx, &cand).unwrap();
    let d = cand.spec.degree();
    assert_eq!(d, 18);
    assert!(check_exactness(&f, &ctx, d, &e).pass);
    assert!(!check_exactness(&f, &ctx, 30, &e).pass);
    let (nonneg, sum) = check_weights(&f, &e);
    assert!(nonneg.pass && sum.pass);
    assert!(check_candidate_in_class(&cand, &e).pass);
    assert!(check_factorization(&cand, &e).pass);
    assert!(check_mandated_zeros(&cand, &e).pass);
    let pos = check_L_nonneg(&f, &ctx, cand.spec.degree(), &e).unwrap();
    assert!(pos.check.pass, "{}", pos.check);
    assert_eq!(pos.n0, 233);
}

#[test]
fn m43_uniqueness_determinants() {
    let (ctx, cand) = candidate(43, 3, 3, 512);
    let u = check_uniqueness(&cand, &ctx, &eps());
    assert!(u.applicable && u.check.pass);
    let delta = Rational::from((-32089445498880i64, 1490317665272759i64));
    let d = u.delta.unwrap();
    assert!(Float::with_val(512, &d - &delta).abs() < 1e-100, "{d}");
    let xi = Float::with_val(512, cand.xi.as_ref().unwrap());
    let lower = Float::with_val(512, &Rational::from_str_radix("-52381392652633374720/1299065844351175880963", 10).unwrap())
        + Float::with_val(512, &Rational::from_str_radix("3916313168896327680/24510676308512752471", 10).unwrap()) * &xi
        - Float::with_val(512, &Rational::from((2595980574720i64, 16604338082711i64))) * Float::with_val(512, xi.square_ref());
    assert!(Float::with_val(512, u.delta_lower_rows.unwrap() - &lower).abs() < 1e-100);
}

#[test]
fn uniqueness_not_applicable_without_quartic() {
    let (ctx, cand) = candidate(10, 1, 1, 512);
    let u = check_uniqueness(&cand, &ctx, &eps());
    assert!(!u.applicable && u.check.pass && u.delta.is_none());
}

#[test]
fn certificates_are_deterministic_and_verify() {
    let a = solve(&SolveOptions::new(43)).unwrap().certificate.to_json().unwrap();
    let b = solve(&SolveOptions::new(43)).unwrap().certificate.to_json().unwrap();
    assert_eq!(a, b);
    let cert = Certificate::from_json(&a).unwrap();
    assert!(cert.all_pass());
    assert!(verify_certificate(&cert).unwrap().iter().all(|c| c.pass));
    assert_eq!(cert.to_json().unwrap(), a);
}

#[test]
fn lower_precision_still_certifies() {
    let s = solve(&SolveOptions::new(43).with_precision(Precision::new(128).unwrap())).unwrap();
    assert_eq!(s.certificate.precision_bits, 128);
    assert!(verify_certificate(&s.certificate).unwrap().iter().all(|c| c.pass));
}

#[test]
fn malformed_certificates_are_parse_errors() {
    assert_eq!(Certificate::from_json("{").unwrap_err().stage(), "parse");
    assert_eq!(Certificate::from_json("{\"m\": 3}").unwrap_err().stage(), "parse");
    let mut cert = solve(&SolveOptions::new(10)).unwrap().certificate;
    cert.functional.weights[0] = "not a number".into();
    assert_eq!(verify_certificate(&cert).unwrap_err().stage(), "parse");
}

#[test]
fn tampered_even_floor_fails() {
    let mut cert = solve(&SolveOptions::new(24)).unwrap().certificate;
    assert_eq!(cert.bound.even_floor, 196560);
    cert.bound.even_floor = 196562;
    let failed: Vec<_> = verify_certificate(&cert).unwrap().into_iter().filter(|c| !c.pass).map(|c| c.name).collect();
    assert_eq!(failed, ["bound"]);
}
