//! Quadrature functional, optimality checks, the certified bound, and the
//! certificate document with its standalone verifier.

use std::collections::BTreeMap;
use std::fmt;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::construct::{chi_from_u, quartic_min_on, EliminationTrace, ExtremalCandidate, FormSpec, Node};
use crate::error::{Error, Result};
use crate::gegenbauer::{BasisContext, EvenPolynomial, PrecisionTag};
use crate::numeric::{
    continued_fraction_approx, even_floor, even_floor_rational, fmt_sci, parse_rational, parse_real, Field,
    Precision,
};

/// `L(f) = Σ λ(x) f(x)` over the nodes, with corrections `γ_c = L(R_c)`.
#[derive(Clone, Debug)]
pub struct QuadratureFunctional {
    pub s: Rational,
    pub nodes: Vec<Node>,
    pub positions: Vec<Float>,
    pub weights: Vec<Float>,
    /// Exact weights for rationally placed nodes, when available.
    pub exact_weights: Vec<Option<Rational>>,
    pub gammas: BTreeMap<usize, Float>,
}

impl QuadratureFunctional {
    pub fn weight(&self, node: Node) -> Option<&Float> {
        self.nodes.iter().position(|n| *n == node).map(|i| &self.weights[i])
    }

    pub fn lambda1(&self) -> &Float {
        self.weight(Node::One).expect("node 1 is always present")
    }

    pub fn prec(&self) -> u32 {
        self.weights[0].prec()
    }

    /// `L(R_n)` for `n = 0..=n_max`.
    pub fn values_on_basis(&self, ctx: &BasisContext, n_max: usize) -> Vec<Float> {
        let prec = self.prec();
        let mut acc = vec![Float::new(prec); n_max + 1];
        for (x, w) in self.positions.iter().zip(&self.weights) {
            for (a, r) in acc.iter_mut().zip(ctx.eval_R_upto(n_max, x)) {
                *a += Float::with_val(prec, w * &r);
            }
        }
        acc
    }
}

/// One named verification outcome.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub margin: Float,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, margin: Float, detail: impl Into<String>) -> Self {
        Check { name, pass, margin, detail: detail.into() }
    }

    pub fn into_result(self) -> Result<Self> {
        if self.pass {
            Ok(self)
        } else {
            Err(Error::Certification { check: self.name.to_string(), detail: self.detail })
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<26} {:<4} margin={} {}",
            self.name,
            if self.pass { "ok" } else { "FAIL" },
            fmt_sci(&self.margin, 12),
            self.detail
        )
    }
}

/// `(t²-1)(t²-s²)χ(t)[t²]`.
fn sigma_poly<F: Field>(spec: FormSpec, s: &Rational, u: &[F], one: &F) -> EvenPolynomial<F> {
    let chi = chi_from_u(u, one);
    let s2 = one.from_rational_like(&Rational::from(s.square_ref()));
    let a = EvenPolynomial::from_even(vec![one.neg_ref(), one.clone()], PrecisionTag::Exact);
    let b = EvenPolynomial::from_even(vec![s2.neg_ref(), one.clone()], PrecisionTag::Exact);
    let p = chi.mul(&a).mul(&b);
    if spec.has_origin() {
        p.shift(1)
    } else {
        p
    }
}

/// `λ(x) = L(h_x)/h_x(x)` with `h_x = σ/(t²-x²)` and `L(h) = h_0 + Σ γ_c h_c`.
fn node_weight<F: Field>(
    ctx: &BasisContext,
    sigma: &EvenPolynomial<F>,
    x: &F,
    gammas: &BTreeMap<usize, F>,
) -> Result<F> {
    let (h, _) = sigma.div_by_quadratic(&x.mul_ref(x));
    let mut lh = ctx.project_f0(&h);
    if !gammas.is_empty() {
        let basis = ctx.expand_in_basis(&h);
        for (c, g) in gammas {
            if let Some(hc) = basis.get(c / 2) {
                lh = lh.add_ref(&g.mul_ref(hc));
            }
        }
    }
    let hx = h.eval(x);
    if hx.cmp_zero().is_eq() {
        return Err(Error::Degenerate("quadrature node coincides with another node".into()));
    }
    Ok(lh.div_ref(&hx))
}

/// Weights at every node and the corrections carried by the candidate.
pub fn build_functional(ctx: &BasisContext, candidate: &ExtremalCandidate) -> Result<QuadratureFunctional> {
    let spec = candidate.spec;
    if candidate.zeros.len() != spec.k {
        return Err(Error::Structure(format!("candidate has {} interior zeros, expected {}", candidate.zeros.len(), spec.k)));
    }
    let prec = candidate.prec;
    let one = Float::with_val(prec, 1);
    let sigma = sigma_poly(spec, &candidate.s, &candidate.u, &one);
    let nodes = Node::all(&spec);
    let mut positions = Vec::new();
    let mut weights = Vec::new();
    let mut exact_weights = Vec::new();
    let exact_sigma = candidate.u_exact.as_ref().map(|u| sigma_poly(spec, &candidate.s, u, &Rational::from(1)));
    for node in &nodes {
        let x = match node {
            Node::One => one.clone(),
            Node::S => Float::with_val(prec, &candidate.s),
            Node::Origin => Float::new(prec),
            Node::Interior(i) => candidate.zeros[*i].clone(),
        };
        weights.push(node_weight(ctx, &sigma, &x, &candidate.gammas)?);
        positions.push(x);
        let exact = match (&exact_sigma, node) {
            (Some(es), Node::One | Node::S | Node::Origin) if candidate.gammas.is_empty() => {
                let xq = match node {
                    Node::One => Rational::from(1),
                    Node::S => candidate.s.clone(),
                    _ => Rational::new(),
                };
                Some(node_weight(ctx, es, &xq, &BTreeMap::new())?)
            }
            _ => None,
        };
        exact_weights.push(exact);
    }
    Ok(QuadratureFunctional {
        s: candidate.s.clone(),
        nodes,
        positions,
        weights,
        exact_weights,
        gammas: candidate.gammas.clone(),
    })
}

/// `L(R_0) = 1`, `L(R_c) = γ_c` at correction indices and `L(R_{2k}) = 0`
/// otherwise, for `2k <= degree`.
pub fn check_exactness(functional: &QuadratureFunctional, ctx: &BasisContext, degree: usize, eps: &Float) -> Check {
    let vals = functional.values_on_basis(ctx, degree);
    let prec = functional.prec();
    let mut worst = Float::new(prec);
    let mut worst_at = 0;
    for n in (0..=degree).step_by(2) {
        let expected = if n == 0 {
            Float::with_val(prec, 1)
        } else {
            functional.gammas.get(&n).cloned().unwrap_or_else(|| Float::new(prec))
        };
        let d = Float::with_val(prec, &vals[n] - &expected).abs();
        if d > worst {
            worst = d;
            worst_at = n;
        }
    }
    let pass = worst <= *eps;
    let detail = if pass {
        format!("max residual over R_0..R_{degree}")
    } else {
        format!("residual at R_{worst_at} exceeds margin")
    };
    Check::new("exactness", pass, worst, detail)
}

/// Every weight nonnegative (within `eps`) and `λ(1) > 0`.
pub fn check_weights(functional: &QuadratureFunctional, eps: &Float) -> (Check, Check) {
    let prec = functional.prec();
    let mut min = functional.weights[0].clone();
    for w in &functional.weights {
        if *w < min {
            min = w.clone();
        }
    }
    let neg_eps = Float::with_val(prec, -eps);
    let l1 = functional.lambda1();
    let pass = min >= neg_eps && l1.is_sign_positive() && !l1.is_zero();
    let nonneg = Check::new("weights_nonneg", pass, min, "minimum weight");
    let sum = functional.weights.iter().fold(Float::new(prec), |a, w| a + w);
    let dev = Float::with_val(prec, &sum - 1).abs();
    let pass = dev <= *eps;
    (nonneg, Check::new("weights_sum", pass, dev, "|sum of weights - 1|"))
}

/// Outcome of the positivity scan.
#[derive(Clone, Debug)]
pub struct PositivityReport {
    pub check: Check,
    /// Tail threshold: the estimate certifies `L(R_n) > 0` for every `n >= n0`.
    pub n0: u64,
    /// Smallest `L(R_n)` over scanned indices not forced to vanish.
    pub min_free: Float,
    pub min_free_index: usize,
}

/// Largest index scanned directly before giving up on the tail estimate.
pub const MAX_SCAN_INDEX: u64 = 200_000;

/// `L(R_n) >= -eps` for every even `n` up to the tail threshold, and the tail
/// estimate `λ(1) - (1-λ(1))·bound(n, t_max) > 0` beyond it.
#[allow(non_snake_case)]
pub fn check_L_nonneg(
    functional: &QuadratureFunctional,
    ctx: &BasisContext,
    degree: usize,
    eps: &Float,
) -> Result<PositivityReport> {
    let prec = functional.prec();
    let l1 = functional.lambda1().clone();
    let mut t_max = Float::new(prec);
    for (node, x) in functional.nodes.iter().zip(&functional.positions) {
        if *node != Node::One {
            let a = Float::with_val(prec, x.abs_ref());
            if a > t_max {
                t_max = a;
            }
        }
    }
    let fail = |detail: String| PositivityReport {
        check: Check::new("positivity", false, Float::new(prec), detail),
        n0: 0,
        min_free: Float::new(prec),
        min_free_index: 0,
    };
    if !(l1.is_sign_positive() && !l1.is_zero() && l1 < 1) {
        return Ok(fail("lambda(1) outside (0,1)".into()));
    }
    let n0 = ctx.min_tail_index(&l1, &t_max)?;
    if n0 > MAX_SCAN_INDEX {
        return Ok(fail(format!("tail threshold {n0} exceeds scan limit {MAX_SCAN_INDEX}")));
    }
    let n_max = (n0 as usize).max(degree + 2);
    let vals = functional.values_on_basis(ctx, n_max);
    let neg_eps = Float::with_val(prec, -eps);
    let mut min_free: Option<(Float, usize)> = None;
    let mut violation: Option<usize> = None;
    for n in (2..=n_max).step_by(2) {
        let v = &vals[n];
        if *v < neg_eps && violation.is_none() {
            violation = Some(n);
        }
        let forced_zero = n <= degree && !functional.gammas.contains_key(&n);
        if !forced_zero && min_free.as_ref().is_none_or(|(m, _)| v < m) {
            min_free = Some((v.clone(), n));
        }
    }
    let (min_free, min_free_index) = min_free.unwrap_or((Float::new(prec), 0));
    let check = match violation {
        Some(n) => Check::new("positivity", false, min_free.clone(), format!("L(R_{n}) is negative")),
        None => Check::new(
            "positivity",
            true,
            min_free.clone(),
            format!("direct scan n<={n_max} (min at R_{min_free_index}), tail estimate from n0={n0}"),
        ),
    };
    Ok(PositivityReport { check, n0, min_free, min_free_index })
}

/// Largest absolute basis coefficient, used to scale coefficient tolerances.
fn coeff_scale(basis: &[Float]) -> Float {
    let prec = basis[0].prec();
    basis.iter().fold(Float::new(prec), |m, c| {
        let a = Float::with_val(prec, c.abs_ref());
        if a > m {
            a
        } else {
            m
        }
    })
}

/// Nonnegative basis coefficients, `f_0 > 0`, and `f <= 0` on `[-s, s]` via
/// the factored form: zeros inside `(0, s)` and a positive quartic factor.
pub fn check_candidate_in_class(candidate: &ExtremalCandidate, eps: &Float) -> Check {
    let basis = candidate.basis();
    let prec = basis[0].prec();
    let scale = coeff_scale(basis);
    let tol = Float::with_val(prec, eps * &scale);
    let neg_tol = Float::with_val(prec, -&tol);
    let s = Float::with_val(prec, &candidate.s);
    let f0 = &basis[0];
    if !(f0.is_sign_positive() && !f0.is_zero()) {
        return Check::new("class_membership", false, f0.clone(), "f_0 is not positive");
    }
    if let Some((k, _)) = basis.iter().enumerate().skip(1).find(|(_, c)| **c < neg_tol) {
        return Check::new("class_membership", false, basis[k].clone(), format!("basis coefficient f_{} is negative", 2 * k));
    }
    if candidate.zeros.len() != candidate.spec.k {
        return Check::new("class_membership", false, Float::new(prec), "wrong number of interior zeros");
    }
    let mut prev = Float::new(prec);
    for (i, a) in candidate.zeros.iter().enumerate() {
        if *a <= prev || *a >= s {
            return Check::new("class_membership", false, a.clone(), format!("zero a{} outside (0, s) or out of order", i + 1));
        }
        prev = a.clone();
    }
    match (&candidate.q, &candidate.r) {
        (Some(q), Some(r)) => {
            let min = quartic_min_on(q, r, &candidate.s);
            let pass = min.is_sign_positive() && !min.is_zero();
            Check::new("class_membership", pass, min, "minimum of the quartic factor on [0, s]")
        }
        _ => Check::new("class_membership", true, f0.clone(), "f_0"),
    }
}

/// The polynomial equals `(t²-s²)·Π(t²-a_i²)²·(t⁴+qt²+r)·[t²]` rebuilt from the zeros.
pub fn check_factorization(candidate: &ExtremalCandidate, eps: &Float) -> Check {
    let prec = candidate.prec;
    let one = Float::with_val(prec, 1);
    let mut f = EvenPolynomial::from_even(
        vec![Float::with_val(prec, &(-Rational::from(candidate.s.square_ref()))), one.clone()],
        PrecisionTag::Bits(prec),
    );
    for a in &candidate.zeros {
        let fac = EvenPolynomial::from_even(vec![Float::with_val(prec, -a.clone().square()), one.clone()], PrecisionTag::Bits(prec));
        f = f.mul(&fac).mul(&fac);
    }
    if let (Some(q), Some(r)) = (&candidate.q, &candidate.r) {
        f = f.mul(&EvenPolynomial::from_even(vec![r.clone(), q.clone(), one.clone()], PrecisionTag::Bits(prec)));
    }
    if candidate.spec.has_origin() {
        f = f.shift(1);
    }
    let p = &candidate.polynomial.coeffs;
    if p.len() != f.coeffs.len() {
        return Check::new("factorization", false, Float::new(prec), "degree mismatch");
    }
    let scale = coeff_scale(p);
    let mut worst = Float::new(prec);
    for (a, b) in p.iter().zip(&f.coeffs) {
        let d = Float::with_val(prec, a - b).abs() / &scale;
        if d > worst {
            worst = d;
        }
    }
    let pass = worst <= *eps;
    Check::new("factorization", pass, worst, "relative deviation from the factored form")
}

/// Coefficients at the correction indices vanish.
pub fn check_mandated_zeros(candidate: &ExtremalCandidate, eps: &Float) -> Check {
    let basis = candidate.basis();
    let prec = basis[0].prec();
    let scale = coeff_scale(basis);
    let mut worst = Float::new(prec);
    for c in candidate.spec.correction_indices() {
        let v = basis.get(c / 2).map(|x| Float::with_val(prec, x.abs_ref()) / &scale).unwrap_or_else(|| Float::new(prec));
        if v > worst {
            worst = v;
        }
    }
    let pass = worst <= *eps;
    let idx: Vec<String> = candidate.spec.correction_indices().iter().map(|c| format!("f_{c}")).collect();
    let detail = if idx.is_empty() { "none required".to_string() } else { format!("|{}| relative", idx.join(", ")) };
    Check::new("mandated_zeros", pass, worst, detail)
}

/// Where a bound value came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSource {
    Constructed,
    Table,
    Lp,
}

/// `w` with its even floor.
#[derive(Clone, Debug)]
pub struct BoundResult {
    pub w: Float,
    pub w_exact: Option<Rational>,
    pub even_floor: Integer,
    pub source: BoundSource,
}

impl BoundResult {
    pub fn from_float(w: Float, source: BoundSource) -> Self {
        let even_floor = even_floor(&w);
        BoundResult { w, w_exact: None, even_floor, source }
    }

    pub fn from_exact(w: Rational, prec: u32, source: BoundSource) -> Self {
        BoundResult { w: Float::with_val(prec, &w), even_floor: even_floor_rational(&w), w_exact: Some(w), source }
    }
}

/// `w = 2/λ(1)`, cross-checked against `2 f(1)/f_0` (zero duality gap).
pub fn compute_bound(
    functional: &QuadratureFunctional,
    candidate: &ExtremalCandidate,
    eps: &Float,
) -> (BoundResult, Check) {
    let prec = functional.prec();
    let w = Float::with_val(prec, 2) / functional.lambda1();
    let basis = candidate.basis();
    let f1 = basis.iter().fold(Float::new(prec), |a, c| a + c);
    let w2 = Float::with_val(prec, 2 * f1) / &basis[0];
    let gap = Float::with_val(prec, &w - &w2).abs() / &w;
    let positive = w.is_sign_positive() && !w.is_zero() && w.is_finite();
    let mut gap_check = Check::new("duality_gap", positive && gap <= *eps, gap, "|2/lambda(1) - 2f(1)/f_0| / w");
    if !positive {
        gap_check.detail = "lambda(1) is not positive".into();
    }

    let exact_lambda = functional.exact_weights[functional.nodes.iter().position(|n| *n == Node::One).unwrap()].clone();
    let exact = match (exact_lambda, candidate.exact_basis()) {
        (Some(l1), Some(b)) => {
            let we = Rational::from(2) / l1;
            let f1: Rational = b.iter().sum();
            let we2 = (2 * f1) / &b[0];
            if we != we2 {
                gap_check.pass = false;
                gap_check.detail = "exact values of 2/lambda(1) and 2f(1)/f_0 differ".into();
                None
            } else {
                let cf = continued_fraction_approx(&w, &Integer::from(10_000_000));
                if cf.as_ref() == Some(&we) {
                    gap_check.detail.push_str("; exact, continued fraction agrees");
                } else {
                    gap_check.detail.push_str("; exact");
                }
                Some(we)
            }
        }
        _ => None,
    };
    let bound = match exact {
        Some(we) => BoundResult::from_exact(we, prec, BoundSource::Constructed),
        None => BoundResult::from_float(w, BoundSource::Constructed),
    };
    (bound, gap_check)
}

/// Determinants of the 2×2 systems for `(e_1, e_0)` in `f = P·(t⁴+e_1t²+e_0)`.
#[derive(Clone, Debug)]
pub struct UniquenessReport {
    pub applicable: bool,
    /// Rows at the mandated zero coefficients.
    pub delta: Option<Float>,
    /// Rows two indices lower.
    pub delta_lower_rows: Option<Float>,
    pub check: Check,
}

/// Nonsingularity of the linear system that pins the quartic once the zeros are fixed.
pub fn check_uniqueness(candidate: &ExtremalCandidate, ctx: &BasisContext, eps: &Float) -> UniquenessReport {
    let prec = candidate.prec;
    if !candidate.spec.has_quartic() {
        return UniquenessReport {
            applicable: false,
            delta: None,
            delta_lower_rows: None,
            check: Check::new("uniqueness", true, Float::new(prec), "not applicable to forms 1/2"),
        };
    }
    let one = Float::with_val(prec, 1);
    let s2 = Float::with_val(prec, &Rational::from(candidate.s.square_ref()));
    let chi = chi_from_u(&candidate.u, &one);
    let mut p = chi.mul(&chi).mul(&EvenPolynomial::from_even(vec![-s2, one], PrecisionTag::Bits(prec)));
    if candidate.spec.has_origin() {
        p = p.shift(1);
    }
    let b = ctx.expand_in_basis(&p.shift(1));
    let c = ctx.expand_in_basis(&p);
    let det = |i: usize, j: usize| -> Float {
        let g = |v: &Vec<Float>, n: usize| v.get(n / 2).cloned().unwrap_or_else(|| Float::new(prec));
        Float::with_val(prec, g(&b, i) * g(&c, j)) - Float::with_val(prec, g(&b, j) * g(&c, i))
    };
    let corr = candidate.spec.correction_indices();
    let delta = det(corr[0], corr[1]);
    let lower = det(corr[0] - 2, corr[0]);
    let pass = Float::with_val(prec, delta.abs_ref()) > *eps;
    let detail = format!(
        "rows f_{}/f_{}; rows f_{}/f_{}: {}",
        corr[0],
        corr[1],
        corr[0] - 2,
        corr[0],
        fmt_sci(&lower, 12)
    );
    UniquenessReport {
        applicable: true,
        check: Check::new("uniqueness", pass, delta.clone(), detail),
        delta: Some(delta),
        delta_lower_rows: Some(lower),
    }
}

// ---------------------------------------------------------------------------
// Certificate document
// ---------------------------------------------------------------------------

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminantPayload {
    pub coeffs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalPayload {
    pub nodes: Vec<String>,
    pub weights: Vec<String>,
    pub gammas: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundPayload {
    pub w: String,
    pub w_exact: Option<String>,
    pub even_floor: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub pass: bool,
    pub margin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Serialized certificate. Polynomial vectors list the coefficients of
/// `t^{2k}` (monomial) and `R_{2k}` (basis) for `k = 0..=degree/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub m: u32,
    pub s: String,
    pub form: u8,
    #[serde(rename = "K")]
    pub k: usize,
    pub degree: usize,
    pub precision_bits: u32,
    pub eliminant: EliminantPayload,
    pub xi: Option<String>,
    #[serde(rename = "U")]
    pub u: Vec<String>,
    pub q: Option<String>,
    pub r: Option<String>,
    pub zeros: Vec<String>,
    pub poly_monomial: Vec<String>,
    pub poly_basis: Vec<String>,
    pub functional: FunctionalPayload,
    pub bound: BoundPayload,
    pub report: BTreeMap<String, ReportEntry>,
}

impl Certificate {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }

    pub fn all_pass(&self) -> bool {
        self.report.values().all(|e| e.pass)
    }
}

const MARGIN_DIGITS: usize = 20;

fn dec(x: &Float, p: Precision) -> String {
    fmt_sci(x, p.decimal_digits())
}

/// Builds the certificate payload, then fills its report by running the
/// payload verifier on the serialized values themselves.
pub fn emit_certificate(
    candidate: &ExtremalCandidate,
    functional: &QuadratureFunctional,
    trace: Option<&EliminationTrace>,
    bound: &BoundResult,
    precision: Precision,
) -> Result<Certificate> {
    let spec = candidate.spec;
    let eliminant = trace
        .and_then(|t| t.eliminant.as_ref())
        .map(|f| f.coeffs().iter().map(|c| c.to_string()).collect())
        .unwrap_or_default();
    let xi = match (&candidate.xi_exact, &candidate.xi) {
        (Some(x), _) => Some(x.to_string()),
        (None, Some(x)) => Some(dec(x, precision)),
        _ => None,
    };
    let u = match &candidate.u_exact {
        Some(ue) => ue.iter().map(|v| v.to_string()).collect(),
        None => candidate.u.iter().map(|v| dec(v, precision)).collect(),
    };
    let (poly_monomial, poly_basis) = match &candidate.exact_polynomial {
        Some(p) => (
            p.coeffs.iter().map(|c| c.to_string()).collect(),
            p.basis.as_ref().expect("basis filled").iter().map(|c| c.to_string()).collect(),
        ),
        None => (
            candidate.polynomial.coeffs.iter().map(|c| dec(c, precision)).collect(),
            candidate.basis().iter().map(|c| dec(c, precision)).collect(),
        ),
    };
    let weights = functional.weights.iter().map(|w| dec(w, precision)).collect();
    let gammas = functional.gammas.iter().map(|(c, g)| (c.to_string(), dec(g, precision))).collect();
    let even_floor = bound
        .even_floor
        .to_u128()
        .ok_or_else(|| Error::InvalidArgument("even floor does not fit in 128 bits".into()))?;
    let mut cert = Certificate {
        schema_version: SCHEMA_VERSION,
        m: candidate.m,
        s: candidate.s.to_string(),
        form: spec.form,
        k: spec.k,
        degree: spec.degree(),
        precision_bits: precision.bits,
        eliminant: EliminantPayload { coeffs: eliminant },
        xi,
        u,
        q: candidate.q.as_ref().map(|v| dec(v, precision)),
        r: candidate.r.as_ref().map(|v| dec(v, precision)),
        zeros: candidate.zeros.iter().map(|v| dec(v, precision)).collect(),
        poly_monomial,
        poly_basis,
        functional: FunctionalPayload {
            nodes: functional.nodes.iter().map(|n| n.label(&candidate.s)).collect(),
            weights,
            gammas,
        },
        bound: BoundPayload {
            w: dec(&bound.w, precision),
            w_exact: bound.w_exact.as_ref().map(|w| w.to_string()),
            even_floor,
        },
        report: BTreeMap::new(),
    };
    let checks = verify_certificate(&cert)?;
    cert.report = report_map(&checks);
    Ok(cert)
}

pub fn report_map(checks: &[Check]) -> BTreeMap<String, ReportEntry> {
    checks
        .iter()
        .map(|c| {
            (
                c.name.to_string(),
                ReportEntry { pass: c.pass, margin: fmt_sci(&c.margin, MARGIN_DIGITS), detail: Some(c.detail.clone()) },
            )
        })
        .collect()
}

fn parse_vec(v: &[String], prec: u32, what: &str) -> Result<Vec<Float>> {
    v.iter()
        .map(|s| parse_real(s, prec).map_err(|e| Error::Parse(format!("{what}: {e}"))))
        .collect()
}

fn parse_exact_vec(v: &[String]) -> Option<Vec<Rational>> {
    v.iter().map(|s| parse_rational(s).ok()).collect()
}

/// Re-checks a certificate from its payload alone: exactness, weights,
/// positivity, class membership, factorization, duality gap, the stated bound
/// and the uniqueness determinant. Nothing is re-solved.
pub fn verify_certificate(cert: &Certificate) -> Result<Vec<Check>> {
    if cert.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema_version {}", cert.schema_version)));
    }
    let precision = Precision::new(cert.precision_bits).map_err(|e| Error::Parse(e.to_string()))?;
    let prec = precision.working();
    let eps = precision.margin();
    let s = parse_rational(&cert.s)?;
    let spec = FormSpec::new(cert.form, cert.k).map_err(|e| Error::Parse(e.to_string()))?;
    if spec.degree() != cert.degree {
        return Err(Error::Parse(format!("degree {} inconsistent with {spec}", cert.degree)));
    }
    let n_coef = spec.degree() / 2 + 1;
    if cert.poly_monomial.len() != n_coef || cert.poly_basis.len() != n_coef {
        return Err(Error::Parse(format!("polynomial vectors must have {n_coef} entries")));
    }
    if cert.zeros.len() != spec.k || cert.u.len() != spec.k {
        return Err(Error::Parse(format!("expected {} zeros and U values", spec.k)));
    }
    let ctx = BasisContext::new(cert.m).map_err(|e| Error::Parse(e.to_string()))?;

    let mut polynomial = EvenPolynomial::from_even(parse_vec(&cert.poly_monomial, prec, "poly_monomial")?, PrecisionTag::Bits(prec));
    let basis = parse_vec(&cert.poly_basis, prec, "poly_basis")?;
    let expanded = ctx.expand_in_basis(&polynomial);
    polynomial.basis = Some(basis.clone());
    let exact_polynomial = match (parse_exact_vec(&cert.poly_monomial), parse_exact_vec(&cert.poly_basis)) {
        (Some(m), Some(b)) => {
            let mut p = EvenPolynomial::from_even(m, PrecisionTag::Exact);
            p.basis = Some(b);
            Some(p)
        }
        _ => None,
    };
    let opt = |v: &Option<String>, what: &str| -> Result<Option<Float>> {
        v.as_ref().map(|x| parse_real(x, prec).map_err(|e| Error::Parse(format!("{what}: {e}")))).transpose()
    };
    let gammas: BTreeMap<usize, Float> = cert
        .functional
        .gammas
        .iter()
        .map(|(k, v)| {
            let idx = k.parse::<usize>().map_err(|_| Error::Parse(format!("gamma index `{k}`")))?;
            Ok((idx, parse_real(v, prec)?))
        })
        .collect::<Result<_>>()?;
    let candidate = ExtremalCandidate {
        m: cert.m,
        s: s.clone(),
        spec,
        prec,
        xi: opt(&cert.xi, "xi")?,
        xi_exact: cert.xi.as_ref().and_then(|x| parse_rational(x).ok()),
        u: parse_vec(&cert.u, prec, "U")?,
        u_exact: parse_exact_vec(&cert.u),
        zeros: parse_vec(&cert.zeros, prec, "zeros")?,
        q: opt(&cert.q, "q")?,
        r: opt(&cert.r, "r")?,
        gammas: gammas.clone(),
        polynomial,
        exact_polynomial,
        diagnosis: Default::default(),
    };

    let nodes = Node::all(&spec);
    let labels: Vec<String> = nodes.iter().map(|n| n.label(&s)).collect();
    if cert.functional.nodes != labels {
        return Err(Error::Parse(format!("functional nodes must be {labels:?}")));
    }
    let weights = parse_vec(&cert.functional.weights, prec, "weights")?;
    if weights.len() != nodes.len() {
        return Err(Error::Parse("one weight per node required".into()));
    }
    let positions = nodes
        .iter()
        .map(|n| match n {
            Node::One => Float::with_val(prec, 1),
            Node::S => Float::with_val(prec, &s),
            Node::Origin => Float::new(prec),
            Node::Interior(i) => candidate.zeros[*i].clone(),
        })
        .collect();
    let functional = QuadratureFunctional {
        s: s.clone(),
        nodes,
        positions,
        weights,
        exact_weights: vec![None; labels.len()],
        gammas,
    };

    let mut checks = Vec::new();

    // Monomial and basis representations agree.
    let scale = coeff_scale(&basis);
    let mut worst = Float::new(prec);
    for (a, b) in expanded.iter().zip(&basis) {
        let d = Float::with_val(prec, a - b).abs() / &scale;
        if d > worst {
            worst = d;
        }
    }
    checks.push(Check::new("representation_agreement", worst <= eps, worst, "basis vs expanded monomial coefficients"));

    // Eliminant root.
    if !cert.eliminant.coeffs.is_empty() {
        let coeffs = cert.eliminant.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        let f = crate::poly::UniPoly::new(coeffs);
        match &candidate.xi {
            Some(x) => {
                let v = f.eval_float(x).abs();
                let size = f.coeffs().iter().fold(Float::new(prec), |a, c| a + Float::with_val(prec, &Rational::from(c.abs_ref())));
                let xmax = Float::with_val(prec, x.abs_ref()).max(&Float::with_val(prec, 1));
                let tol = Float::with_val(prec, &eps * &size) * xmax.pow(f.degree().unwrap_or(0) as u32);
                let last_u_ok = candidate.u.last().map(|u| Float::with_val(prec, u - x).abs() <= eps).unwrap_or(true);
                let pass = v <= tol && last_u_ok;
                checks.push(Check::new("eliminant_root", pass, v, "|F(xi)|, and U_{K-1} = xi"));
            }
            None => return Err(Error::Parse("eliminant given without xi".into())),
        }
    }

    checks.push(check_factorization(&candidate, &eps));
    checks.push(check_mandated_zeros(&candidate, &eps));
    checks.push(check_exactness(&functional, &ctx, spec.degree(), &eps));
    let (nonneg, sum) = check_weights(&functional, &eps);
    checks.push(nonneg);
    checks.push(sum);
    checks.push(check_L_nonneg(&functional, &ctx, spec.degree(), &eps)?.check);
    checks.push(check_candidate_in_class(&candidate, &eps));
    let (computed, gap) = compute_bound(&functional, &candidate, &eps);
    checks.push(gap);

    // Stated bound.
    let w_stated = parse_real(&cert.bound.w, prec)?;
    let mut dev = Float::with_val(prec, &w_stated - &computed.w).abs() / &computed.w;
    let mut pass = dev <= eps;
    let mut detail = "|w - 2/lambda(1)| / w".to_string();
    let floor_source = match &cert.bound.w_exact {
        Some(we) => {
            let we = parse_rational(we)?;
            let d2 = Float::with_val(prec, &w_stated - &we).abs() / &computed.w;
            if d2 > dev {
                dev = d2;
            }
            pass &= dev <= eps;
            if let Some(ex) = &computed.w_exact {
                if *ex != we {
                    pass = false;
                    detail = "w_exact differs from the exact quadrature value".into();
                }
            }
            even_floor_rational(&we)
        }
        None => even_floor(&w_stated),
    };
    if cert.bound.even_floor != floor_source {
        pass = false;
        detail = format!("even_floor {} should be {}", cert.bound.even_floor, floor_source);
    }
    checks.push(Check::new("bound", pass, dev, detail));

    checks.push(check_uniqueness(&candidate, &ctx, &eps).check);
    Ok(checks)
}
