//! Ultraspherical polynomials `R_n = R_n^{α,α}`, `α = (m-3)/2`, normalized by `R_n(1) = 1`.
//!
//! Monomial coefficients and normalized moments are exact rationals for every
//! integer `m`; evaluation at real points runs the three-term recurrence.

use std::cmp::Ordering;
use std::sync::{Arc, RwLock};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Complete, Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::numeric::{Field, Ring, Scalar};

/// Dimension-`m` basis data with memoized coefficients and moments.
#[derive(Debug)]
pub struct BasisContext {
    m: u32,
    alpha: Rational,
    coeffs: RwLock<Vec<Arc<Vec<Rational>>>>,
    moments: RwLock<Vec<Rational>>,
}

pub fn basis_context(m: u32) -> Result<BasisContext> {
    BasisContext::new(m)
}

impl BasisContext {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidDimension(m));
        }
        let r0 = Arc::new(vec![Rational::from(1)]);
        let r1 = Arc::new(vec![Rational::new(), Rational::from(1)]);
        Ok(BasisContext {
            m,
            alpha: Rational::from((m as i64 - 3, 2)),
            coeffs: RwLock::new(vec![r0, r1]),
            moments: RwLock::new(vec![Rational::from(1)]),
        })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    /// Number of `R_n` currently memoized.
    pub fn cached_len(&self) -> usize {
        self.coeffs.read().unwrap().len()
    }

    /// Monomial coefficients of `R_n`, ascending.
    pub fn gegenbauer_coeffs(&self, n: usize) -> Arc<Vec<Rational>> {
        if let Some(c) = self.coeffs.read().unwrap().get(n) {
            return Arc::clone(c);
        }
        let mut cache = self.coeffs.write().unwrap();
        while cache.len() <= n {
            let k = cache.len() - 1;
            let next = self.recurrence_step(k, &cache[k], &cache[k - 1]);
            cache.push(Arc::new(next));
        }
        Arc::clone(&cache[n])
    }

    fn recurrence_step(&self, n: usize, rn: &[Rational], rnm1: &[Rational]) -> Vec<Rational> {
        let m = self.m as i64;
        let n_i = n as i64;
        let a = Rational::from((2 * n_i + m - 2, n_i + m - 2));
        let b = Rational::from((n_i, n_i + m - 2));
        let mut out = vec![Rational::new(); n + 2];
        for (i, c) in rn.iter().enumerate() {
            out[i + 1] += Rational::from(c * &a);
        }
        for (i, c) in rnm1.iter().enumerate() {
            out[i] -= Rational::from(c * &b);
        }
        out
    }

    pub fn leading_coeff(&self, n: usize) -> Rational {
        self.gegenbauer_coeffs(n)[n].clone()
    }

    /// `R_n(t)` by the three-term recurrence.
    #[allow(non_snake_case)]
    pub fn eval_R<F: Field>(&self, n: usize, t: &F) -> F {
        self.eval_R_upto(n, t).pop().unwrap()
    }

    /// `[R_0(t), ..., R_n(t)]`.
    #[allow(non_snake_case)]
    pub fn eval_R_upto<F: Field>(&self, n: usize, t: &F) -> Vec<F> {
        let m = self.m as i64;
        let mut out = Vec::with_capacity(n + 1);
        out.push(t.one_like());
        if n == 0 {
            return out;
        }
        out.push(t.clone());
        for k in 1..n {
            let k_i = k as i64;
            let a = Rational::from((2 * k_i + m - 2, k_i + m - 2));
            let b = Rational::from((k_i, k_i + m - 2));
            let next = t.mul_ref(&out[k]).scale(&a).sub_ref(&out[k - 1].scale(&b));
            out.push(next);
        }
        out
    }

    /// `μ_k`: the integral of `t^k` against the normalized weight `(1-t²)^α`.
    pub fn normalized_moment(&self, k: usize) -> Result<Rational> {
        if k % 2 == 1 {
            return Err(Error::InvalidArgument(format!("moment index {k} is odd")));
        }
        Ok(self.even_moment(k / 2))
    }

    /// `μ_{2j}`.
    pub fn even_moment(&self, j: usize) -> Rational {
        if let Some(v) = self.moments.read().unwrap().get(j) {
            return v.clone();
        }
        let mut cache = self.moments.write().unwrap();
        let m = self.m as i64;
        while cache.len() <= j {
            let i = cache.len() as i64;
            let next = cache.last().unwrap() * Rational::from((2 * i - 1, 2 * i + m - 2));
            cache.push(next);
        }
        cache[j].clone()
    }

    /// Coefficients `f_{2k}` of `p = Σ f_{2k} R_{2k}`, found by peeling leading terms.
    pub fn expand_in_basis<T: Scalar>(&self, p: &EvenPolynomial<T>) -> Vec<T> {
        let mut rest: Vec<T> = p.coeffs.clone();
        let len = rest.len();
        let mut out: Vec<T> = Vec::with_capacity(len);
        for k in (0..len).rev() {
            let rk = self.gegenbauer_coeffs(2 * k);
            let f = rest[k].scale(&Rational::from(rk[2 * k].recip_ref()));
            if !f.is_zero() {
                for i in 0..k {
                    let c = &rk[2 * i];
                    if c.cmp0() != Ordering::Equal {
                        rest[i] = rest[i].sub_ref(&f.scale(c));
                    }
                }
            }
            out.push(f);
        }
        out.reverse();
        out
    }

    /// Writes the basis coefficients into `p`.
    pub fn fill_basis<T: Scalar>(&self, p: &mut EvenPolynomial<T>) {
        p.basis = Some(self.expand_in_basis(p));
    }

    /// `f_0 = Σ c_{2k} μ_{2k}`.
    pub fn project_f0<T: Scalar>(&self, p: &EvenPolynomial<T>) -> T {
        let mut acc = p.coeffs[0].zero_like();
        for (k, c) in p.coeffs.iter().enumerate() {
            acc = acc.add_ref(&c.scale(&self.even_moment(k)));
        }
        acc
    }

    /// Γ((m-1)/2) at `prec` bits. Exact factorial for odd `m`, half-integer
    /// formula for even `m`.
    pub fn gamma_half(&self, prec: u32) -> Float {
        let m = self.m;
        if m % 2 == 1 {
            let k = (m - 3) / 2;
            Float::with_val(prec, Integer::factorial(k).complete())
        } else {
            // Γ(k + 1/2) = (2k)! √π / (4^k k!)
            let k = (m - 2) / 2;
            let num = Integer::factorial(2 * k).complete();
            let den = Integer::from(4).pow(k) * Integer::factorial(k).complete();
            let sqrt_pi = Float::with_val(prec, Constant::Pi).sqrt();
            sqrt_pi * Rational::from((num, den))
        }
    }

    /// Pointwise estimate `A(n,m) / (1-t²)^{(m-2)/4}` dominating `|R_n(t)|`, with
    /// `A(n,m) = Γ((m-1)/2)·√2·(2+√2)^{m-4} / (n+1)^{(m-2)/2}`.
    pub fn tail_bound(&self, n: u64, t: &Float) -> Result<Float> {
        let m = self.m as u64;
        if m < 4 {
            return Err(Error::Domain(format!("tail estimate needs m >= 4, got m={m}")));
        }
        if n < 3.max(m - 4) {
            return Err(Error::Domain(format!("tail estimate needs n >= {}, got n={n}", 3.max(m - 4))));
        }
        let prec = t.prec();
        let one_minus = Float::with_val(prec, 1 - Float::with_val(prec, t.square_ref()));
        if one_minus.cmp0() != Some(Ordering::Greater) {
            return Err(Error::Domain("tail estimate needs |t| < 1".into()));
        }
        let sqrt2 = Float::with_val(prec, 2).sqrt();
        let base = Float::with_val(prec, 2 + &sqrt2);
        let a = self.gamma_half(prec) * &sqrt2 * base.pow((m - 4) as u32);
        let np1 = Float::with_val(prec, n + 1);
        let denom_n = np1.pow(Float::with_val(prec, &Rational::from(((m - 2) as i64, 2))));
        let denom_t = one_minus.pow(Float::with_val(prec, &Rational::from(((m - 2) as i64, 4))));
        Ok(a / denom_n / denom_t)
    }

    /// Smallest admissible index for [`Self::uniform_bound`].
    pub fn tail_start(&self) -> u64 {
        if self.m >= 4 {
            3.max(self.m as u64 - 4)
        } else {
            3
        }
    }

    /// [`Self::tail_bound`] for `m >= 4`; for `m = 3` the Legendre bound
    /// `sqrt(2/(πn))·(1-t²)^{-1/4}`.
    pub fn uniform_bound(&self, n: u64, t: &Float) -> Result<Float> {
        match self.m {
            3 => {
                if n < 1 {
                    return Err(Error::Domain("Legendre bound needs n >= 1".into()));
                }
                let prec = t.prec();
                let one_minus = Float::with_val(prec, 1 - Float::with_val(prec, t.square_ref()));
                if one_minus.cmp0() != Some(Ordering::Greater) {
                    return Err(Error::Domain("tail estimate needs |t| < 1".into()));
                }
                let pi = Float::with_val(prec, Constant::Pi);
                let c = (Float::with_val(prec, 2) / (pi * n)).sqrt();
                Ok(c / one_minus.pow(Float::with_val(prec, 0.25)))
            }
            m if m >= 4 => self.tail_bound(n, t),
            m => Err(Error::Domain(format!("no tail estimate for m={m}"))),
        }
    }

    /// Smallest `n₀` such that `λ(1) - (1-λ(1))·bound(n, t_max) > 0` for every `n >= n₀`.
    pub fn min_tail_index(&self, lambda1: &Float, t_max: &Float) -> Result<u64> {
        let prec = lambda1.prec().max(t_max.prec());
        if !(lambda1.cmp0() == Some(Ordering::Greater) && *lambda1 < 1) {
            return Err(Error::Domain("lambda1 must lie in (0,1)".into()));
        }
        if !(t_max.cmp0() == Some(Ordering::Greater) && *t_max < 1) {
            return Err(Error::Domain("t_max must lie in (0,1)".into()));
        }
        let rest = Float::with_val(prec, 1 - lambda1);
        let ok = |n: u64| -> Result<bool> {
            let b = self.uniform_bound(n, &Float::with_val(prec, t_max))?;
            Ok(Float::with_val(prec, lambda1 - Float::with_val(prec, &rest * &b)).cmp0() == Some(Ordering::Greater))
        };
        let lo0 = self.tail_start();
        if ok(lo0)? {
            return Ok(lo0);
        }
        let mut lo = lo0;
        let mut hi = lo0.max(1) * 2;
        while !ok(hi)? {
            lo = hi;
            hi = hi.checked_mul(2).ok_or_else(|| Error::Domain("tail index overflow".into()))?;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }
}

/// Working-precision tag of an [`EvenPolynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecisionTag {
    Exact,
    Bits(u32),
}

/// Even polynomial `Σ c_k t^{2k}`, optionally with its `R_{2k}` expansion.
#[derive(Clone, Debug)]
pub struct EvenPolynomial<T> {
    /// `coeffs[k]` multiplies `t^{2k}`.
    pub coeffs: Vec<T>,
    pub basis: Option<Vec<T>>,
    pub precision: PrecisionTag,
}

impl<T: Scalar> EvenPolynomial<T> {
    pub fn from_even(coeffs: Vec<T>, precision: PrecisionTag) -> Self {
        assert!(!coeffs.is_empty(), "empty coefficient vector");
        EvenPolynomial { coeffs, basis: None, precision }
    }

    pub fn degree(&self) -> usize {
        2 * (self.coeffs.len() - 1)
    }

    /// Coefficients in full monomial order, odd slots zero.
    pub fn full_coeffs(&self) -> Vec<T> {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; 2 * self.coeffs.len() - 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[2 * k] = c.clone();
        }
        out
    }

    /// Multiplies by `t^{2j}`.
    pub fn shift(&self, j: usize) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut c = vec![zero; j];
        c.extend(self.coeffs.iter().cloned());
        EvenPolynomial::from_even(c, self.precision)
    }

    /// Product with an even polynomial over the rationals.
    pub fn mul_rational(&self, other: &EvenPolynomial<Rational>) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.cmp0() != Ordering::Equal {
                    out[i + j] = out[i + j].add_ref(&a.scale(b));
                }
            }
        }
        EvenPolynomial::from_even(out, self.precision)
    }

    /// Quotient and remainder of division by `t² - x2` for rational `x2`.
    pub fn div_by_quadratic_rational(&self, x2: &Rational) -> (Self, T) {
        self.synthetic_division(|c| c.scale(x2))
    }

    fn synthetic_division(&self, times_x2: impl Fn(&T) -> T) -> (Self, T) {
        let n = self.coeffs.len();
        let mut q = vec![self.coeffs[0].zero_like(); n.saturating_sub(1).max(1)];
        let mut carry = self.coeffs[n - 1].clone();
        for k in (0..n - 1).rev() {
            q[k] = carry.clone();
            carry = self.coeffs[k].add_ref(&times_x2(&carry));
        }
        if n == 1 {
            q[0] = self.coeffs[0].zero_like();
        }
        (EvenPolynomial::from_even(q, self.precision), carry)
    }
}

impl<T: Ring> EvenPolynomial<T> {
    /// Quotient and remainder of division by `t² - x2`.
    pub fn div_by_quadratic(&self, x2: &T) -> (Self, T) {
        self.synthetic_division(|c| c.mul_ref(x2))
    }

    pub fn eval(&self, t: &T) -> T {
        let t2 = t.mul_ref(t);
        let mut acc = self.coeffs[0].zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(&t2).add_ref(c);
        }
        acc
    }

    pub fn mul(&self, other: &Self) -> Self {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        EvenPolynomial::from_even(out, self.precision)
    }

    /// `Σ f_{2k}`, i.e. the value at `t = 1` read off the basis expansion.
    pub fn basis_value_at_one(&self) -> Option<T> {
        let b = self.basis.as_ref()?;
        Some(b.iter().fold(b[0].zero_like(), |a, c| a.add_ref(c)))
    }
}

impl EvenPolynomial<Rational> {
    /// From `(t² - r_1)(t² - r_2)...`, one factor per entry.
    pub fn from_quadratic_roots(roots: &[Rational]) -> Self {
        let mut p = EvenPolynomial::from_even(vec![Rational::from(1)], PrecisionTag::Exact);
        for r in roots {
            p = p.mul(&EvenPolynomial::from_even(vec![Rational::from(-r), Rational::from(1)], PrecisionTag::Exact));
        }
        p
    }

    pub fn to_float(&self, prec: u32) -> EvenPolynomial<Float> {
        EvenPolynomial {
            coeffs: self.coeffs.iter().map(|c| Float::with_val(prec, c)).collect(),
            basis: self.basis.as_ref().map(|b| b.iter().map(|c| Float::with_val(prec, c)).collect()),
            precision: PrecisionTag::Bits(prec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn alpha_values() {
        assert_eq!(*basis_context(43).unwrap().alpha(), rat(20, 1));
        assert_eq!(*basis_context(3).unwrap().alpha(), rat(0, 1));
        assert_eq!(*basis_context(4).unwrap().alpha(), rat(1, 2));
        assert!(matches!(basis_context(1), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn low_order_coefficients() {
        let ctx = basis_context(43).unwrap();
        assert_eq!(*ctx.gegenbauer_coeffs(0), vec![rat(1, 1)]);
        assert_eq!(*ctx.gegenbauer_coeffs(1), vec![rat(0, 1), rat(1, 1)]);
        assert_eq!(*ctx.gegenbauer_coeffs(2), vec![rat(-1, 42), rat(0, 1), rat(43, 42)]);
    }

    #[test]
    fn evaluation() {
        let ctx = basis_context(43).unwrap();
        assert_eq!(ctx.eval_R(18, &rat(1, 1)), rat(1, 1));
        assert_eq!(ctx.eval_R(2, &rat(1, 2)), rat(13, 56));
        for m in [3u32, 4, 10] {
            let c = basis_context(m).unwrap();
            assert_eq!(c.eval_R(2, &rat(0, 1)), rat(-1, m as i64 - 1));
        }
        let x = Float::with_val(200, 0.3);
        let a = ctx.eval_R(7, &x);
        let coeffs = ctx.gegenbauer_coeffs(7);
        let mut b = Float::new(200);
        for c in coeffs.iter().rev() {
            b = b * &x + c;
        }
        assert!(Float::with_val(200, &a - &b).abs() < 1e-50);
    }

    #[test]
    fn moments() {
        let ctx = basis_context(4).unwrap();
        assert_eq!(ctx.normalized_moment(0).unwrap(), rat(1, 1));
        assert_eq!(ctx.normalized_moment(2).unwrap(), rat(1, 4));
        assert_eq!(ctx.normalized_moment(4).unwrap(), rat(1, 8));
        assert!(ctx.normalized_moment(3).is_err());
    }

    #[test]
    fn expansion_examples() {
        let ctx = basis_context(10).unwrap();
        let one = EvenPolynomial::from_even(vec![rat(1, 1)], PrecisionTag::Exact);
        assert_eq!(ctx.expand_in_basis(&one), vec![rat(1, 1)]);
        let t2 = EvenPolynomial::from_even(vec![rat(0, 1), rat(1, 1)], PrecisionTag::Exact);
        assert_eq!(ctx.expand_in_basis(&t2), vec![rat(1, 10), rat(9, 10)]);
        assert_eq!(ctx.project_f0(&t2), ctx.normalized_moment(2).unwrap());
        let ctx4 = basis_context(4).unwrap();
        let p = EvenPolynomial::from_even(vec![rat(0, 1), rat(-1, 4), rat(1, 1)], PrecisionTag::Exact);
        assert_eq!(ctx4.project_f0(&p), rat(1, 16));
    }

    #[test]
    fn quadratic_division() {
        let p = EvenPolynomial::from_quadratic_roots(&[rat(1, 4), rat(1, 1)]);
        let (q, r) = p.div_by_quadratic_rational(&rat(1, 1));
        assert_eq!(q.coeffs, vec![rat(-1, 4), rat(1, 1)]);
        assert_eq!(r, rat(0, 1));
    }

    #[test]
    fn tail_bound_domain() {
        let ctx = basis_context(43).unwrap();
        let t = Float::with_val(128, 0.5);
        assert!(ctx.tail_bound(38, &t).is_err());
        assert!(ctx.tail_bound(39, &t).is_ok());
        assert!(basis_context(3).unwrap().tail_bound(10, &t).is_err());
        assert!(ctx.tail_bound(50, &Float::with_val(128, 1)).is_err());
    }
}
