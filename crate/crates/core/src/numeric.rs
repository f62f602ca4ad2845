//! Precision handling, exact/real scalar traits, decimal I/O and small numeric helpers.

use std::cmp::Ordering;
use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// Default significand size for non-exact values.
pub const DEFAULT_PRECISION_BITS: u32 = 256;

/// Output precision tag. Internal work runs at twice this many bits and
/// comparisons use the margin `2^-(bits/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision {
    pub bits: u32,
}

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if !(32..=1 << 16).contains(&bits) {
            return Err(Error::InvalidArgument(format!(
                "precision_bits={bits} outside 32..=65536"
            )));
        }
        Ok(Precision { bits })
    }

    pub fn working(&self) -> u32 {
        2 * self.bits
    }

    pub fn margin(&self) -> Float {
        Float::with_val(self.working(), Float::i_exp(1, -(self.bits as i32 / 2)))
    }

    /// Significant decimal digits carried by a value of this precision.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 4
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision { bits: DEFAULT_PRECISION_BITS }
    }
}

/// Additive structure plus scaling by exact rationals. Enough for basis
/// expansion and moment integration over any coefficient ring.
pub trait Scalar: Clone + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn scale(&self, q: &Rational) -> Self;
}

/// Commutative ring: adds multiplication.
pub trait Ring: Scalar {
    fn mul_ref(&self, other: &Self) -> Self;
}

/// Ordered field operations shared by exact rationals and MPFR floats.
pub trait Field: Ring {
    fn from_rational_like(&self, q: &Rational) -> Self;
    fn div_ref(&self, other: &Self) -> Self;
    fn cmp_zero(&self) -> Ordering;
    fn to_float(&self, prec: u32) -> Float;

    fn one_like(&self) -> Self {
        self.from_rational_like(&Rational::from(1))
    }
    fn neg_ref(&self) -> Self {
        self.zero_like().sub_ref(self)
    }
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::new()
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == Ordering::Equal
    }
    fn add_ref(&self, other: &Self) -> Self {
        Rational::from(self + other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Rational::from(self - other)
    }
    fn scale(&self, q: &Rational) -> Self {
        Rational::from(self * q)
    }
}

impl Ring for Rational {
    fn mul_ref(&self, other: &Self) -> Self {
        Rational::from(self * other)
    }
}

impl Field for Rational {
    fn from_rational_like(&self, q: &Rational) -> Self {
        q.clone()
    }
    fn div_ref(&self, other: &Self) -> Self {
        Rational::from(self / other)
    }
    fn cmp_zero(&self) -> Ordering {
        self.cmp0()
    }
    fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, self)
    }
}

impl Scalar for Float {
    fn zero_like(&self) -> Self {
        Float::new(self.prec())
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self + other)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self - other)
    }
    fn scale(&self, q: &Rational) -> Self {
        Float::with_val(self.prec(), self * q)
    }
}

impl Ring for Float {
    fn mul_ref(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self * other)
    }
}

impl Field for Float {
    fn from_rational_like(&self, q: &Rational) -> Self {
        Float::with_val(self.prec(), q)
    }
    fn div_ref(&self, other: &Self) -> Self {
        Float::with_val(self.prec(), self / other)
    }
    fn cmp_zero(&self) -> Ordering {
        self.cmp0().unwrap_or(Ordering::Equal)
    }
    fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, self)
    }
}

/// Parses an exact rational written as `p/q` or an integer. Decimals are rejected.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(Error::Parse(format!(
            "`{t}` is not an exact rational (write it as p/q)"
        )));
    }
    let q = Rational::parse(t).map_err(|e| Error::Parse(format!("`{t}`: {e}")))?;
    Ok(Rational::from(q))
}

/// Parses either `p/q` (exact) or a decimal literal into a float of `prec` bits.
pub fn parse_real(text: &str, prec: u32) -> Result<Float> {
    let t = text.trim();
    if t.contains('/') {
        return Ok(Float::with_val(prec, &parse_rational(t)?));
    }
    let v = Float::parse(t).map_err(|e| Error::Parse(format!("`{t}`: {e}")))?;
    Ok(Float::with_val(prec, v))
}

/// Decimal string with `digits` significant digits.
pub fn fmt_sci(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// Fixed-point decimal with exactly `frac` fractional digits (round to nearest).
pub fn fmt_fixed(x: &Float, frac: usize) -> String {
    let q = x.to_rational().unwrap_or_default();
    fmt_fixed_rational(&q, frac)
}

pub fn fmt_fixed_rational(q: &Rational, frac: usize) -> String {
    let scale = Integer::from(10).pow(frac as u32);
    let scaled = Rational::from(q * &scale);
    let n = scaled.round().into_numer_denom().0;
    let neg = n < 0;
    let digits = n.abs().to_string();
    let digits = if digits.len() <= frac {
        format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int, fr) = digits.split_at(digits.len() - frac);
    let sign = if neg { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{fr}")
    }
}

/// `p/q`, or just `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

/// Largest even integer not exceeding `x`.
pub fn even_floor_rational(x: &Rational) -> Integer {
    let f = Rational::from(x.floor_ref()).into_numer_denom().0;
    if f.is_odd() {
        f - 1
    } else {
        f
    }
}

pub fn even_floor(x: &Float) -> Integer {
    let f = x.clone().floor().to_integer().unwrap_or_default();
    if f.is_odd() {
        f - 1
    } else {
        f
    }
}

/// Best rational approximation with denominator at most `max_den`, from the
/// continued fraction of `x`. Returns the last convergent within the bound.
pub fn continued_fraction_approx(x: &Float, max_den: &Integer) -> Option<Rational> {
    let exact = x.to_rational()?;
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rest = exact;
    let mut best = None;
    for _ in 0..256 {
        let a = Rational::from(rest.floor_ref()).into_numer_denom().0;
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if &k2 > max_den {
            break;
        }
        best = Some(Rational::from((h2.clone(), k2.clone())));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = Rational::from(&rest - &a);
        if frac.cmp0() == Ordering::Equal {
            break;
        }
        rest = frac.recip();
    }
    best
}

/// Attempts to identify `x` as a rational with small denominator, accepting
/// it only when it agrees with `x` to `tol` relative.
pub fn reconstruct_rational(x: &Float, max_den: u64, tol: &Float) -> Option<Rational> {
    let cand = continued_fraction_approx(x, &Integer::from(max_den))?;
    let diff = Float::with_val(x.prec(), x - &cand).abs();
    let scale = Float::with_val(x.prec(), x.abs_ref()).max(&Float::with_val(x.prec(), 1));
    (diff <= Float::with_val(x.prec(), tol * &scale)).then_some(cand)
}

/// Relative difference `|a-b| / max(|b|, tiny)`.
pub fn rel_diff(a: &Float, b: &Float) -> Float {
    let prec = a.prec().max(b.prec());
    let d = Float::with_val(prec, a - b).abs();
    let den = Float::with_val(prec, b.abs_ref());
    if den.is_zero() {
        d
    } else {
        d / den
    }
}

pub fn float(prec: u32, q: &Rational) -> Float {
    Float::with_val(prec, q)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parsing_rejects_decimals() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn fixed_formatting() {
        let x = Float::with_val(200, &rat(26730, 73));
        assert_eq!(fmt_fixed(&x, 5), "366.16438");
        assert_eq!(fmt_fixed_rational(&rat(-1, 8), 2), "-0.13");
        assert_eq!(fmt_fixed_rational(&rat(3, 1000), 2), "0.00");
        assert_eq!(fmt_fixed_rational(&rat(550, 1), 0), "550");
    }

    #[test]
    fn even_floor_values() {
        assert_eq!(even_floor_rational(&rat(26730, 73)), 366);
        assert_eq!(even_floor_rational(&rat(2457, 2)), 1228);
        assert_eq!(even_floor_rational(&rat(18876, 23)), 820);
        assert_eq!(even_floor_rational(&rat(550, 1)), 550);
        assert_eq!(even_floor_rational(&rat(551, 1)), 550);
        assert_eq!(even_floor(&Float::with_val(64, 12.834)), 12);
    }

    #[test]
    fn continued_fractions_recover_small_rationals() {
        let x = Float::with_val(256, &rat(26730, 73));
        let tol = Float::with_val(256, 1e-40);
        assert_eq!(reconstruct_rational(&x, 10_000_000, &tol).unwrap(), rat(26730, 73));
        let pi = Float::with_val(256, rug::float::Constant::Pi);
        assert!(reconstruct_rational(&pi, 10_000_000, &tol).is_none());
    }

    #[test]
    fn margin_is_half_precision() {
        let p = Precision::new(256).unwrap();
        assert_eq!(p.margin(), Float::with_val(512, Float::i_exp(1, -128)));
        assert!(Precision::new(8).is_err());
    }
}
