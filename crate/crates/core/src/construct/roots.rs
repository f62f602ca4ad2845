use std::cmp::Ordering;

use rug::{Float, Integer, Rational};

use crate::poly::{sturm_sign_changes, UniPoly};

/// A real root with a certified rational enclosure.
#[derive(Clone, Debug)]
pub struct RealRoot {
    pub value: Float,
    pub lo: Rational,
    pub hi: Rational,
    /// Set when the root is rational and was hit exactly.
    pub exact: Option<Rational>,
}

impl RealRoot {
    fn exact(q: Rational, prec: u32) -> Self {
        RealRoot { value: Float::with_val(prec, &q), lo: q.clone(), hi: q.clone(), exact: Some(q) }
    }
}

fn pow2_neg(bits: u32) -> Rational {
    Rational::from((Integer::from(1), Integer::from(1) << bits))
}

fn sign(p: &UniPoly, x: &Rational) -> Ordering {
    p.eval(x).cmp0()
}

/// Isolates every real root of `f` by Sturm counting and bisection, then
/// polishes each to `prec` bits with Newton steps. Every returned enclosure has
/// a verified sign change of the squarefree part at its endpoints.
pub fn solve_univariate_real_roots(f: &UniPoly, prec: u32) -> Vec<RealRoot> {
    let Some(deg) = f.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let g = f.squarefree();
    if g.degree() == Some(1) {
        let r = -g.coeff(0) / g.coeff(1) ;
        return vec![RealRoot::exact(r, prec)];
    }
    let seq = g.sturm_sequence();
    let b = g.cauchy_bound();
    let mut stack = vec![(Rational::from(-&b), b)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let count = sturm_sign_changes(&seq, &lo) - sturm_sign_changes(&seq, &hi);
        if count == 0 {
            continue;
        }
        if sign(&g, &hi) == Ordering::Equal {
            out.push(RealRoot::exact(hi.clone(), prec));
            if count > 1 {
                stack.push((lo, hi_minus(&hi, &g, &seq)));
            }
            continue;
        }
        if count == 1 {
            out.push(refine(&g, lo, hi, prec));
            continue;
        }
        let mid: Rational = Rational::from(&lo + &hi) / 2;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.value.partial_cmp(&b.value).unwrap());
    out
}

/// A point just below the exact root `hi` that excludes it from the interval.
fn hi_minus(hi: &Rational, g: &UniPoly, seq: &[UniPoly]) -> Rational {
    let mut eps = Rational::from((1, 2));
    loop {
        let x = Rational::from(hi - &eps);
        let n_hi = sturm_sign_changes(seq, hi);
        let n_x = sturm_sign_changes(seq, &x);
        if n_x > n_hi + 1 || sign(g, &x) == Ordering::Equal {
            eps /= 2;
            continue;
        }
        return x;
    }
}

/// Bisects `(lo, hi]` (one simple root, `g(hi) != 0`) and Newton-polishes.
fn refine(g: &UniPoly, mut lo: Rational, mut hi: Rational, prec: u32) -> RealRoot {
    let s_hi = sign(g, &hi);
    let target_bits = 64;
    loop {
        let width = Rational::from(&hi - &lo);
        if width < pow2_neg(target_bits as u32) {
            break;
        }
        let mid: Rational = Rational::from(&lo + &hi) / 2;
        match sign(g, &mid) {
            Ordering::Equal => return RealRoot::exact(mid, prec),
            s if s == s_hi => hi = mid,
            _ => lo = mid,
        }
    }
    let dg = g.derivative();
    let mut x = Float::with_val(prec, &(Rational::from(&lo + &hi) / 2));
    let mut bits = target_bits;
    while bits < 2 * prec as usize {
        let fx = g.eval_float(&x);
        let dx = dg.eval_float(&x);
        if dx.is_zero() {
            break;
        }
        x -= fx / dx;
        bits *= 2;
    }
    for _ in 0..2 {
        let fx = g.eval_float(&x);
        let dx = dg.eval_float(&x);
        if dx.is_zero() {
            break;
        }
        x -= fx / dx;
    }
    // Certify: tight rational bracket around the Newton iterate.
    if let Some(xq) = x.to_rational() {
        let eps = pow2_neg(prec - 8);
        let a = Rational::from(&xq - &eps);
        let b = Rational::from(&xq + &eps);
        let (sa, sb) = (sign(g, &a), sign(g, &b));
        if a >= lo && b <= hi && sa != Ordering::Equal && sb != Ordering::Equal && sa != sb {
            return RealRoot { value: x, lo: a, hi: b, exact: None };
        }
        if sign(g, &xq) == Ordering::Equal {
            return RealRoot::exact(xq, prec);
        }
    }
    // Newton left the bracket or lost the sign change: finish by bisection.
    let stop = pow2_neg(prec);
    while Rational::from(&hi - &lo) > stop {
        let mid: Rational = Rational::from(&lo + &hi) / 2;
        match sign(g, &mid) {
            Ordering::Equal => return RealRoot::exact(mid, prec),
            s if s == s_hi => hi = mid,
            _ => lo = mid,
        }
    }
    let value = Float::with_val(prec, &(Rational::from(&lo + &hi) / 2));
    RealRoot { value, lo, hi, exact: None }
}

/// Real roots of a float polynomial (ascending coefficients) inside `[lo, hi]`,
/// located between consecutive critical points and bisected to full precision.
/// Roots of even multiplicity are not reported.
pub fn real_roots_float(coeffs: &[Float], lo: &Float, hi: &Float) -> Vec<Float> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
    let prec = lo.prec();
    let eval = |x: &Float| -> Float {
        let mut acc = Float::new(prec);
        for a in c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    };
    if c.len() <= 1 {
        return Vec::new();
    }
    let deriv: Vec<Float> = c.iter().enumerate().skip(1).map(|(i, a)| Float::with_val(prec, a * i as u32)).collect();
    let mut breaks = vec![lo.clone()];
    breaks.extend(real_roots_float(&deriv, lo, hi).into_iter().filter(|x| x > lo && x < hi));
    breaks.push(hi.clone());
    let mut roots: Vec<Float> = Vec::new();
    for w in breaks.windows(2) {
        let (mut a, mut b) = (w[0].clone(), w[1].clone());
        let (fa, fb) = (eval(&a), eval(&b));
        if fa.is_zero() {
            if roots.last() != Some(&a) {
                roots.push(a.clone());
            }
            continue;
        }
        if fb.is_zero() {
            roots.push(b.clone());
            continue;
        }
        if fa.is_sign_negative() == fb.is_sign_negative() {
            continue;
        }
        let neg_a = fa.is_sign_negative();
        for _ in 0..(prec + 8) {
            let mid = Float::with_val(prec, &a + &b) / 2;
            if mid <= a || mid >= b {
                break;
            }
            let fm = eval(&mid);
            if fm.is_zero() {
                a = mid.clone();
                b = mid;
                break;
            }
            if fm.is_sign_negative() == neg_a {
                a = mid;
            } else {
                b = mid;
            }
        }
        roots.push(Float::with_val(prec, &a + &b) / 2);
    }
    roots
}
