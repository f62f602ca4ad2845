use delsarte::gegenbauer::BasisContext;
use delsarte::lp::*;
use rug::Rational;

fn half() -> Rational {
    Rational::from((1, 2))
}

fn w(m: u32, cap: usize, grid: usize) -> f64 {
    estimate(m, &half(), Some(cap), Some(grid)).unwrap().solution.w_estimate.to_f64()
}

#[test]
fn small_dimensions_bracket_known_bounds() {
    let w10 = w(10, 6, 1001);
    assert!((549.0..=550.0).contains(&w10), "{w10}");
    let w4 = w(4, 4, 101);
    assert!((23.9..=24.0 + 1e-9).contains(&w4), "{w4}");
}

#[test]
fn refining_the_grid_does_not_increase_the_estimate() {
    // The 201-point Chebyshev grid is not a subset of the 401-point one, so
    // compare each against the exact value instead.
    for m in [10u32, 16] {
        let a = w(m, 10, 201);
        let b = w(m, 10, 401);
        assert!((a - b).abs() / b < 1e-3, "m={m}: {a} vs {b}");
    }
    let exact = 26730.0 / 73.0;
    for g in [101, 401, 1601] {
        let v = w(9, 6, g);
        assert!(v <= exact * (1.0 + 1e-12) && v >= exact * (1.0 - 1e-3), "grid {g}: {v}");
    }
}

#[test]
fn primal_is_feasible() {
    let ctx = BasisContext::new(12).unwrap();
    let lp = build_lp(&ctx, &half(), 12, 301, DEFAULT_LP_BITS).unwrap();
    let sol = solve_lp(&lp).unwrap();
    assert_eq!(sol.x.len(), 6);
    assert!(sol.x.iter().all(|x| *x >= -1e-30));
    assert!(sol.y.iter().all(|y| *y >= -1e-30));
    for t in chebyshev_grid(&half(), 301, 128) {
        let r = ctx.eval_R_upto(12, &t);
        let p: f64 = 1.0 + sol.x.iter().enumerate().map(|(k, x)| (x.clone() * &r[2 * k + 2]).to_f64()).sum::<f64>();
        assert!(p <= 1e-20, "p({t}) = {p}");
    }
}

#[test]
fn structure_guesses() {
    let g = estimate(43, &half(), None, None).unwrap().guesses;
    assert_eq!((g[0].spec.form, g[0].spec.k), (3, 3));
    let g = estimate(10, &half(), None, None).unwrap().guesses;
    assert_eq!((g[0].spec.form, g[0].spec.k), (1, 1));
    let g = estimate(4, &half(), Some(4), None).unwrap().guesses;
    assert_eq!((g[0].spec.form, g[0].spec.k), (2, 0));
}

#[test]
fn grid_spans_the_interval() {
    let g = chebyshev_grid(&half(), 11, 64);
    assert_eq!(g.len(), 11);
    assert_eq!(g[0], 0);
    assert_eq!(g[10], 0.5);
    assert!(g.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn bad_instances() {
    let ctx = BasisContext::new(10).unwrap();
    assert!(build_lp(&ctx, &Rational::from(1), 6, 101, 64).is_err());
    assert!(build_lp(&ctx, &half(), 5, 101, 64).is_err());
    assert!(build_lp(&ctx, &half(), 6, 1, 64).is_err());
}

#[test]
fn default_caps_follow_the_registry() {
    assert_eq!(default_degree_cap(43), 18);
    assert_eq!(default_degree_cap(9), 6);
    assert!(default_degree_cap(100) >= default_degree_cap(99));
}
