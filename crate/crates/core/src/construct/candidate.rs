use std::collections::BTreeMap;

use rug::{Float, Rational};

use super::roots::{real_roots_float, RealRoot};
use super::system::{EliminationTrace, QuadratureSystem};
use super::FormSpec;
use crate::error::{Error, Result};
use crate::gegenbauer::{BasisContext, EvenPolynomial, PrecisionTag};
use crate::numeric::Field;
use crate::poly::UniPoly;

/// Structural filter outcome for a candidate.
#[derive(Clone, Debug, Default)]
pub struct Diagnosis {
    /// Reason the interior zeros fail to be `K` distinct points of `(0, s)`.
    pub zeros: Option<String>,
    /// Reason the quartic factor fails to be positive on `[0, s]`.
    pub quartic: Option<String>,
    /// Minimum of `t⁴ + q t² + r` on `[0, s]`.
    pub quartic_min: Option<Float>,
}

impl Diagnosis {
    pub fn feasible(&self) -> bool {
        self.zeros.is_none() && self.quartic.is_none()
    }
}

/// A solution of the quadrature system assembled into an extremal polynomial.
#[derive(Clone, Debug)]
pub struct ExtremalCandidate {
    pub m: u32,
    pub s: Rational,
    pub spec: FormSpec,
    /// Bits carried by every float below.
    pub prec: u32,
    /// Selected root of the eliminant (`None` when `K = 0`).
    pub xi: Option<Float>,
    pub xi_exact: Option<Rational>,
    pub u: Vec<Float>,
    pub u_exact: Option<Vec<Rational>>,
    /// `0 < a_1 < ... < a_K < s`.
    pub zeros: Vec<Float>,
    pub q: Option<Float>,
    pub r: Option<Float>,
    pub gammas: BTreeMap<usize, Float>,
    /// Assembled polynomial with its basis expansion filled in.
    pub polynomial: EvenPolynomial<Float>,
    pub exact_polynomial: Option<EvenPolynomial<Rational>>,
    pub diagnosis: Diagnosis,
}

impl ExtremalCandidate {
    pub fn basis(&self) -> &[Float] {
        self.polynomial.basis.as_deref().expect("basis filled at construction")
    }

    pub fn exact_basis(&self) -> Option<&[Rational]> {
        self.exact_polynomial.as_ref().and_then(|p| p.basis.as_deref())
    }
}

/// `χ` as an even polynomial from `U_0..U_{K-1}`.
pub(crate) fn chi_from_u<F: Field>(u: &[F], one: &F) -> EvenPolynomial<F> {
    let k = u.len();
    let mut c: Vec<F> = u
        .iter()
        .enumerate()
        .map(|(j, v)| if (k - j).is_multiple_of(2) { v.clone() } else { v.neg_ref() })
        .collect();
    c.push(one.clone());
    EvenPolynomial::from_even(c, PrecisionTag::Exact)
}

/// `(t²-s²)·χ²·(t⁴+qt²+r)·[t²]`.
pub(crate) fn assemble<F: Field>(spec: FormSpec, s: &Rational, u: &[F], qr: Option<(&F, &F)>, one: &F) -> EvenPolynomial<F> {
    let chi = chi_from_u(u, one);
    let s2 = one.from_rational_like(&Rational::from(s.square_ref()));
    let lin = EvenPolynomial::from_even(vec![s2.neg_ref(), one.clone()], PrecisionTag::Exact);
    let mut f = chi.mul(&chi).mul(&lin);
    if let Some((q, r)) = qr {
        f = f.mul(&EvenPolynomial::from_even(vec![r.clone(), q.clone(), one.clone()], PrecisionTag::Exact));
    }
    if spec.has_origin() {
        f = f.shift(1);
    }
    f
}

/// Minimum of `y² + q y + r` over `y ∈ [0, s²]`.
pub fn quartic_min_on(q: &Float, r: &Float, s: &Rational) -> Float {
    let prec = q.prec();
    let s2 = Float::with_val(prec, &Rational::from(s.square_ref()));
    let vertex: Float = Float::with_val(prec, -q) / 2;
    let y = if vertex.is_sign_negative() {
        Float::new(prec)
    } else if vertex > s2 {
        s2
    } else {
        vertex
    };
    Float::with_val(prec, &y * &y) + Float::with_val(prec, q * &y) + r
}

/// Recovers `U`, the zeros `a_i`, the quartic and the corrections from a root
/// of the eliminant, then assembles and expands the polynomial.
pub fn back_substitute(
    ctx: &BasisContext,
    system: &QuadratureSystem,
    trace: &EliminationTrace,
    root: Option<&RealRoot>,
    prec: u32,
) -> Result<ExtremalCandidate> {
    let spec = system.spec;
    let s = &system.s;
    if spec.k > 0 && root.is_none() {
        return Err(Error::InvalidArgument("a root of the eliminant is required for K >= 1".into()));
    }
    let one = Float::with_val(prec, 1);
    let xi = root.map(|r| Float::with_val(prec, &r.value));
    let xi_exact = root.and_then(|r| r.exact.clone());
    let eval = |p: &UniPoly| -> Float {
        match &xi_exact {
            Some(x) => Float::with_val(prec, &p.eval(x)),
            None => p.eval_float(xi.as_ref().unwrap_or(&one)),
        }
    };
    let exact_mode = spec.k == 0 || xi_exact.is_some();
    let u: Vec<Float> = trace.relations.iter().map(&eval).collect();
    let u_exact: Option<Vec<Rational>> = if exact_mode {
        Some(trace.relations.iter().map(|p| p.eval(xi_exact.as_ref().unwrap_or(&Rational::new()))).collect())
    } else {
        None
    };
    let gammas: BTreeMap<usize, Float> = trace.gammas.iter().map(|(&c, g)| (c, eval(g))).collect();

    let mut diagnosis = Diagnosis::default();

    // Interior zeros: positive roots of χ(y), y = t², inside (0, s²).
    let k = spec.k;
    let mut chi_y: Vec<Float> = u
        .iter()
        .enumerate()
        .map(|(j, v)| if (k - j).is_multiple_of(2) { v.clone() } else { Float::with_val(prec, -v) })
        .collect();
    chi_y.push(one.clone());
    let s2 = Float::with_val(prec, &Rational::from(s.square_ref()));
    let ys = if k == 0 { Vec::new() } else { real_roots_float(&chi_y, &Float::new(prec), &s2) };
    let inside: Vec<Float> = ys.into_iter().filter(|y| y.is_sign_positive() && !y.is_zero() && *y < s2).collect();
    if inside.len() != k {
        diagnosis.zeros = Some(format!("chi has {} of {k} roots in (0, s^2)", inside.len()));
    }
    let zeros: Vec<Float> = inside.into_iter().map(|y| y.sqrt()).collect();

    let (q, r, qr_exact) = match (&trace.q_num, &trace.r_num, &trace.qr_den) {
        (Some(qn), Some(rn), Some(den)) => {
            if let Some(x) = &xi_exact {
                let d = den.eval(x);
                if d.cmp0().is_eq() {
                    return Err(Error::Degenerate("q, r denominator vanishes at the root".into()));
                }
                let qe = qn.eval(x) / &d ;
                let re = rn.eval(x) / &d ;
                (Some(Float::with_val(prec, &qe)), Some(Float::with_val(prec, &re)), Some((qe, re)))
            } else {
                let d = eval(den);
                if d.is_zero() {
                    return Err(Error::Degenerate("q, r denominator vanishes at the root".into()));
                }
                (Some(eval(qn) / &d), Some(eval(rn) / &d), None)
            }
        }
        _ => (None, None, None),
    };
    if let (Some(qv), Some(rv)) = (&q, &r) {
        let min = quartic_min_on(qv, rv, s);
        if !min.is_sign_positive() || min.is_zero() {
            diagnosis.quartic = Some(format!("quartic minimum on [0, s] is {}", min.to_string_radix(10, Some(12))));
        }
        diagnosis.quartic_min = Some(min);
    }

    let mut polynomial = assemble(spec, s, &u, q.as_ref().zip(r.as_ref()), &one);
    polynomial.precision = PrecisionTag::Bits(prec);
    ctx.fill_basis(&mut polynomial);

    let exact_polynomial = match (&u_exact, spec.has_quartic(), &qr_exact) {
        (Some(ue), false, _) => Some(assemble(spec, s, ue, None, &Rational::from(1))),
        (Some(ue), true, Some((qe, re))) => Some(assemble(spec, s, ue, Some((qe, re)), &Rational::from(1))),
        _ => None,
    }
    .map(|mut p| {
        ctx.fill_basis(&mut p);
        p
    });

    Ok(ExtremalCandidate {
        m: system.m,
        s: s.clone(),
        spec,
        prec,
        xi,
        xi_exact,
        u,
        u_exact,
        zeros,
        q,
        r,
        gammas,
        polynomial,
        exact_polynomial,
        diagnosis,
    })
}

/// Why [`select_solution`] could not return a single candidate.
#[derive(Debug)]
pub enum SelectionError {
    NoSurvivor { reasons: Vec<String> },
    Ambiguous(Vec<ExtremalCandidate>),
}

impl From<SelectionError> for Error {
    fn from(e: SelectionError) -> Self {
        match e {
            SelectionError::NoSurvivor { reasons } => {
                Error::Structure(format!("no candidate satisfies the zero/quartic conditions: {}", reasons.join("; ")))
            }
            SelectionError::Ambiguous(c) => Error::Ambiguous(c.len()),
        }
    }
}

/// Keeps the candidates whose zeros lie in `(0, s)` and whose quartic is
/// positive on `[0, s]`; exactly one must remain.
pub fn select_solution(candidates: Vec<ExtremalCandidate>) -> std::result::Result<ExtremalCandidate, SelectionError> {
    let mut reasons = Vec::new();
    let mut keep = Vec::new();
    for c in candidates {
        if c.diagnosis.feasible() {
            keep.push(c);
        } else {
            let xi = c.xi.as_ref().map(|x| x.to_string_radix(10, Some(12))).unwrap_or_else(|| "-".into());
            let why: Vec<&str> = [c.diagnosis.zeros.as_deref(), c.diagnosis.quartic.as_deref()].into_iter().flatten().collect();
            reasons.push(format!("root {xi}: {}", why.join(", ")));
        }
    }
    match keep.len() {
        0 => Err(SelectionError::NoSurvivor { reasons }),
        1 => Ok(keep.pop().unwrap()),
        _ => Err(SelectionError::Ambiguous(keep)),
    }
}
