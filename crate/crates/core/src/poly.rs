//! Univariate polynomials over the rationals and affine forms in several unknowns.
//!
//! Both serve as coefficient rings for the symbolic stages of the elimination.

use std::cmp::Ordering;
use std::fmt;

use rug::{Float, Rational};

use crate::numeric::{Field, Ring, Scalar};

/// Dense univariate polynomial with exact rational coefficients, ascending order.
/// The coefficient vector never has trailing zeros.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    /// `a + b·z`.
    pub fn linear(a: Rational, b: Rational) -> Self {
        UniPoly::new(vec![a, b])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        UniPoly::new(self.coeffs.iter().map(|c| Rational::from(c / &lc)).collect())
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, q: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| Rational::from(c * q)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| Rational::from(-c)).collect())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u32))
                .collect(),
        )
    }

    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, z: &Float) -> Float {
        let mut acc = Float::new(z.prec());
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = Rational::from(&rem[k + dd] / &lc);
            if c.cmp0() != Ordering::Equal {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= Rational::from(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Inverse of `self` modulo `m`, when `gcd(self, m) = 1`.
    pub fn inverse_mod(&self, m: &UniPoly) -> Option<UniPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut t0, mut t1) = (UniPoly::zero(), UniPoly::constant(Rational::from(1)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = r0.leading();
        Some(t0.scale(&inv.recip()).rem(m))
    }

    /// Squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        seq.retain(|p| !p.is_zero());
        seq
    }

    /// Upper bound on the absolute value of every complex root.
    pub fn cauchy_bound(&self) -> Rational {
        let lc = self.leading();
        let mut m = Rational::new();
        for c in &self.coeffs[..self.coeffs.len().saturating_sub(1)] {
            let v = Rational::from(c / &lc).abs();
            if v > m {
                m = v;
            }
        }
        m + 1
    }
}

/// Number of sign changes of a Sturm sequence evaluated at `x`.
pub fn sturm_sign_changes(seq: &[UniPoly], x: &Rational) -> usize {
    let mut last = Ordering::Equal;
    let mut changes = 0;
    for p in seq {
        let s = p.eval(x).cmp0();
        if s == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0() == Ordering::Equal {
                continue;
            }
            let neg = c.cmp0() == Ordering::Less;
            let a = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let one = a == 1;
            match i {
                0 => write!(f, "{a}")?,
                1 if one => write!(f, "z")?,
                1 => write!(f, "{a}*z")?,
                _ if one => write!(f, "z^{i}")?,
                _ => write!(f, "{a}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Scalar for UniPoly {
    fn zero_like(&self) -> Self {
        UniPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn scale(&self, q: &Rational) -> Self {
        UniPoly::scale(self, q)
    }
}

impl Ring for UniPoly {
    fn mul_ref(&self, other: &Self) -> Self {
        self.mul(other)
    }
}

/// Affine form `c_0 + Σ_j c_{j+1}·U_j` in a fixed number of unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinForm {
    pub coeffs: Vec<Rational>,
}

impl LinForm {
    pub fn constant(n_vars: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::new(); n_vars + 1];
        coeffs[0] = c;
        LinForm { coeffs }
    }

    pub fn var(n_vars: usize, j: usize, c: Rational) -> Self {
        let mut coeffs = vec![Rational::new(); n_vars + 1];
        coeffs[j + 1] = c;
        LinForm { coeffs }
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn var_coeff(&self, j: usize) -> &Rational {
        &self.coeffs[j + 1]
    }

    /// Substitutes each unknown by a polynomial in z.
    pub fn substitute(&self, values: &[UniPoly]) -> UniPoly {
        let mut acc = UniPoly::constant(self.coeffs[0].clone());
        for (j, v) in values.iter().enumerate() {
            acc = acc.add(&v.scale(&self.coeffs[j + 1]));
        }
        acc
    }

    pub fn eval<F: Field>(&self, values: &[F]) -> F {
        let mut acc = values[0].from_rational_like(&self.coeffs[0]);
        for (j, v) in values.iter().enumerate() {
            acc = acc.add_ref(&v.scale(&self.coeffs[j + 1]));
        }
        acc
    }
}

impl Scalar for LinForm {
    fn zero_like(&self) -> Self {
        LinForm { coeffs: vec![Rational::new(); self.coeffs.len()] }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.cmp0() == Ordering::Equal)
    }
    fn add_ref(&self, other: &Self) -> Self {
        LinForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Rational::from(a + b)).collect(),
        }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        LinForm {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| Rational::from(a - b)).collect(),
        }
    }
    fn scale(&self, q: &Rational) -> Self {
        LinForm { coeffs: self.coeffs.iter().map(|a| Rational::from(a * q)).collect() }
    }
}

/// Solves a square rational linear system by Gauss-Jordan elimination.
/// Returns `None` when the matrix is singular.
pub fn solve_linear(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].cmp0() != Ordering::Equal)?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for j in col..n {
            a[col][j] /= &p;
        }
        b[col] /= &p;
        for r in 0..n {
            if r == col || a[r][col].cmp0() == Ordering::Equal {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let d = Rational::from(&f * &a[col][j]);
                a[r][j] -= d;
            }
            let d = Rational::from(&f * &b[col]);
            b[r] -= d;
        }
    }
    Some(b)
}
