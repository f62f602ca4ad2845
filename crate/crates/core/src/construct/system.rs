use std::collections::BTreeMap;

use rug::Rational;

use super::{FormSpec, Node};
use crate::error::{Error, Result};
use crate::gegenbauer::{BasisContext, EvenPolynomial, PrecisionTag};
use crate::poly::{solve_linear, LinForm, UniPoly};

/// Unknowns of the quadrature system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Unknown {
    /// Symmetric function `U_j` of the squared interior zeros.
    U(usize),
    Q,
    R,
    Weight(Node),
    /// Correction `γ_c = L(R_c)`.
    Gamma(usize),
}

/// One equation of the system.
#[derive(Clone, Debug)]
pub enum Equation {
    /// Exactness on `h_x = σ/(t² - x²)`: determines the weight of `x`.
    Weight { node: Node },
    /// Exactness on `φ^j = t^{2(j-1)} σ`, which vanishes at every node:
    /// `(φ^j)_0 + Σ_c γ_c (φ^j)_c = 0`. Terms are affine in the `U`s.
    Annihilator {
        j: usize,
        f0: LinForm,
        corrections: Vec<(usize, LinForm)>,
    },
    /// Coefficient `c` of the extremal polynomial vanishes.
    VanishingCoefficient { index: usize },
}

/// The system for one `(m, form, K, s)`.
#[derive(Clone, Debug)]
pub struct QuadratureSystem {
    pub m: u32,
    pub s: Rational,
    pub spec: FormSpec,
    /// `σ = (t²-1)(t²-s²)χ(t)[t²]`, affine in `U_0..U_{K-1}`.
    pub sigma: EvenPolynomial<LinForm>,
    pub phis: Vec<EvenPolynomial<LinForm>>,
    pub equations: Vec<Equation>,
    pub unknowns: Vec<Unknown>,
}

/// Symbolic record of the elimination, everything as polynomials in `z = U_{K-1}`.
#[derive(Clone, Debug)]
pub struct EliminationTrace {
    /// `U_j(z)` for `j < K`; the last entry is `z` itself.
    pub relations: Vec<UniPoly>,
    pub gammas: BTreeMap<usize, UniPoly>,
    /// Monic eliminant `F`, absent when `K = 0`.
    pub eliminant: Option<UniPoly>,
    /// `σ` with `U`s substituted.
    pub sigma: EvenPolynomial<UniPoly>,
    /// `(φ^j)_0 + Σ γ_c(φ^j)_c` after substitution, one per annihilator.
    pub annihilator_values: Vec<UniPoly>,
    /// Forms 3/4: `q = q_num/qr_den`, `r = r_num/qr_den`.
    pub q_num: Option<UniPoly>,
    pub r_num: Option<UniPoly>,
    pub qr_den: Option<UniPoly>,
    /// `q`, `r` reduced modulo the eliminant when the denominator is invertible.
    pub q_reduced: Option<UniPoly>,
    pub r_reduced: Option<UniPoly>,
}

fn r_poly(c: &[(i64, i64)]) -> EvenPolynomial<Rational> {
    EvenPolynomial::from_even(c.iter().map(|&(n, d)| Rational::from((n, d))).collect(), PrecisionTag::Exact)
}

/// `χ(t) = t^{2K} + Σ_j (-1)^{K-j} U_j t^{2j}` as an even polynomial of affine forms.
fn chi_linear(k: usize) -> EvenPolynomial<LinForm> {
    let mut coeffs = Vec::with_capacity(k + 1);
    for j in 0..k {
        let sign = if (k - j).is_multiple_of(2) { 1 } else { -1 };
        coeffs.push(LinForm::var(k, j, Rational::from(sign)));
    }
    coeffs.push(LinForm::constant(k, Rational::from(1)));
    EvenPolynomial::from_even(coeffs, PrecisionTag::Exact)
}

/// Builds the quadrature system: exactness on the basis `{h_x} ∪ {φ^j}` of even
/// polynomials of the target degree, plus the vanishing-coefficient constraints.
pub fn build_system(ctx: &BasisContext, spec: FormSpec, s: &Rational) -> Result<QuadratureSystem> {
    let spec = FormSpec::new(spec.form, spec.k)?;
    if spec.degree() < 4 {
        return Err(Error::InvalidSpec(format!("{spec}: degree below 4")));
    }
    if !(s.cmp0().is_gt() && *s < 1) {
        return Err(Error::Domain(format!("s={s} must lie in (0,1)")));
    }
    let k = spec.k;
    let s2 = Rational::from(s.square_ref());
    let mut base = r_poly(&[(-1, 1), (1, 1)]).mul(&EvenPolynomial::from_even(
        vec![Rational::from(-&s2), Rational::from(1)],
        PrecisionTag::Exact,
    ));
    if spec.has_origin() {
        base = base.shift(1);
    }
    let sigma = chi_linear(k).mul_rational(&base);
    let d = spec.degree();
    let n_phi = (d + 2).saturating_sub(sigma.degree()) / 2;
    let corr = spec.correction_indices();
    let phis: Vec<_> = (0..n_phi).map(|j| sigma.shift(j)).collect();

    let mut equations: Vec<Equation> =
        Node::all(&spec).into_iter().map(|node| Equation::Weight { node }).collect();
    for (j, phi) in phis.iter().enumerate() {
        let basis = ctx.expand_in_basis(phi);
        let corrections = corr
            .iter()
            .filter(|&&c| c / 2 < basis.len())
            .map(|&c| (c, basis[c / 2].clone()))
            .collect();
        equations.push(Equation::Annihilator { j: j + 1, f0: ctx.project_f0(phi), corrections });
    }
    for &c in &corr {
        equations.push(Equation::VanishingCoefficient { index: c });
    }

    let mut unknowns: Vec<Unknown> = (0..k).map(Unknown::U).collect();
    if spec.has_quartic() {
        unknowns.push(Unknown::Q);
        unknowns.push(Unknown::R);
    }
    unknowns.extend(Node::all(&spec).into_iter().map(Unknown::Weight));
    unknowns.extend(corr.iter().map(|&c| Unknown::Gamma(c)));

    Ok(QuadratureSystem { m: ctx.m(), s: s.clone(), spec, sigma, phis, equations, unknowns })
}

fn substitute_poly(p: &EvenPolynomial<LinForm>, rel: &[UniPoly]) -> EvenPolynomial<UniPoly> {
    EvenPolynomial::from_even(p.coeffs.iter().map(|c| c.substitute(rel)).collect(), PrecisionTag::Exact)
}

/// Solves the linear part for `U_0..U_{K-2}` and the corrections, leaving one
/// univariate equation `F(z) = 0` in `z = U_{K-1}`.
pub fn eliminate_to_univariate(ctx: &BasisContext, system: &QuadratureSystem) -> Result<EliminationTrace> {
    let spec = system.spec;
    let k = spec.k;
    let corr = spec.correction_indices();

    let relations = if k == 0 {
        Vec::new()
    } else {
        let lin: Vec<&LinForm> = system
            .equations
            .iter()
            .filter_map(|e| match e {
                Equation::Annihilator { j, f0, .. } if *j < k => Some(f0),
                _ => None,
            })
            .collect();
        let n = k - 1;
        let a: Vec<Vec<Rational>> =
            lin.iter().map(|f| (0..n).map(|i| f.var_coeff(i).clone()).collect()).collect();
        let rhs_const: Vec<Rational> = lin.iter().map(|f| Rational::from(-f.constant_term())).collect();
        let rhs_z: Vec<Rational> = lin.iter().map(|f| Rational::from(-f.var_coeff(k - 1))).collect();
        let (c0, c1) = if n == 0 {
            (Vec::new(), Vec::new())
        } else {
            let singular = || Error::Degenerate(format!("{spec}: singular linear system for U_0..U_{}", k - 2));
            (solve_linear(a.clone(), rhs_const).ok_or_else(singular)?, solve_linear(a, rhs_z).ok_or_else(singular)?)
        };
        let mut rel: Vec<UniPoly> = c0.into_iter().zip(c1).map(|(a, b)| UniPoly::linear(a, b)).collect();
        rel.push(UniPoly::linear(Rational::new(), Rational::from(1)));
        rel
    };

    let sigma = substitute_poly(&system.sigma, &relations);
    let mut gammas: BTreeMap<usize, UniPoly> = BTreeMap::new();
    let mut annihilator_values = Vec::new();
    let mut eliminant = None;
    let n_phi = system.phis.len();
    for (idx, phi) in system.phis.iter().enumerate() {
        let phi_z = substitute_poly(phi, &relations);
        let basis = ctx.expand_in_basis(&phi_z);
        let mut expr = ctx.project_f0(&phi_z);
        for (c, g) in &gammas {
            if let Some(e) = basis.get(c / 2) {
                expr = expr.add(&g.mul(e));
            }
        }
        let deg = phi.degree();
        if idx + 1 < k {
            annihilator_values.push(expr);
            continue;
        }
        if corr.contains(&deg) && idx + 1 < n_phi {
            let top = &basis[deg / 2];
            if top.degree() != Some(0) {
                return Err(Error::Degenerate(format!("{spec}: correction {deg} has non-constant pivot")));
            }
            let g = expr.scale(&-top.leading().recip());
            gammas.insert(deg, g);
            annihilator_values.push(UniPoly::zero());
        } else {
            if expr.is_zero() {
                return Err(Error::Degenerate(format!("{spec}: eliminant vanishes identically")));
            }
            if expr.degree() == Some(0) {
                return Err(Error::Structure(format!("{spec}: eliminant is a nonzero constant")));
            }
            annihilator_values.push(expr.clone());
            eliminant = Some(expr.monic());
        }
    }
    if k > 0 && eliminant.is_none() {
        return Err(Error::Degenerate(format!("{spec}: no equation left for the eliminant")));
    }

    let mut trace = EliminationTrace {
        relations,
        gammas,
        eliminant,
        sigma,
        annihilator_values,
        q_num: None,
        r_num: None,
        qr_den: None,
        q_reduced: None,
        r_reduced: None,
    };
    if spec.has_quartic() {
        quartic_relations(ctx, system, &mut trace)?;
    }
    Ok(trace)
}

/// `f = P·(t⁴ + q t² + r)` with `P = (t²-s²)χ²[t²]`; the two vanishing
/// coefficients give a 2×2 linear system for `q`, `r` over `Q(z)`.
fn quartic_relations(ctx: &BasisContext, system: &QuadratureSystem, trace: &mut EliminationTrace) -> Result<()> {
    let p = extremal_prefactor(&trace.relations, &system.s, system.spec);
    let rows: Vec<[UniPoly; 3]> = system
        .spec
        .correction_indices()
        .iter()
        .map(|&c| {
            let a = ctx.expand_in_basis(&p.shift(2));
            let b = ctx.expand_in_basis(&p.shift(1));
            let cc = ctx.expand_in_basis(&p);
            let get = |v: &Vec<UniPoly>| v.get(c / 2).cloned().unwrap_or_default();
            [get(&a), get(&b), get(&cc)]
        })
        .collect();
    let [aa, ba, ca] = &rows[0];
    let [ab, bb, cb] = &rows[1];
    let den = ba.mul(cb).sub(&bb.mul(ca));
    if den.is_zero() {
        return Err(Error::Degenerate(format!("{}: q, r system is singular", system.spec)));
    }
    let q_num = ca.mul(ab).sub(&aa.mul(cb));
    let r_num = aa.mul(bb).sub(&ba.mul(ab));
    if let Some(f) = &trace.eliminant {
        if let Some(inv) = den.inverse_mod(f) {
            trace.q_reduced = Some(q_num.mul(&inv).rem(f));
            trace.r_reduced = Some(r_num.mul(&inv).rem(f));
        }
    }
    trace.q_num = Some(q_num);
    trace.r_num = Some(r_num);
    trace.qr_den = Some(den);
    Ok(())
}

/// `(t²-s²)χ(t)²[t²]` with `χ` built from `U_j(z)`.
pub(crate) fn extremal_prefactor(relations: &[UniPoly], s: &Rational, spec: FormSpec) -> EvenPolynomial<UniPoly> {
    let k = spec.k;
    let mut chi = Vec::with_capacity(k + 1);
    for (j, u) in relations.iter().enumerate() {
        let sign = if (k - j).is_multiple_of(2) { 1 } else { -1 };
        chi.push(u.scale(&Rational::from(sign)));
    }
    chi.push(UniPoly::constant(Rational::from(1)));
    let chi = EvenPolynomial::from_even(chi, PrecisionTag::Exact);
    let s2 = Rational::from(s.square_ref());
    let lin = EvenPolynomial::from_even(
        vec![UniPoly::constant(-s2 ), UniPoly::constant(Rational::from(1))],
        PrecisionTag::Exact,
    );
    let p = chi.mul(&chi).mul(&lin);
    if spec.has_origin() {
        p.shift(1)
    } else {
        p
    }
}

impl EliminationTrace {
    /// Residuals of every annihilator equation after substitution: zero for all
    /// but the last, which is the eliminant up to its leading coefficient.
    pub fn substitution_residuals(&self) -> Vec<UniPoly> {
        let n = self.annihilator_values.len();
        self.annihilator_values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                if i + 1 == n {
                    match &self.eliminant {
                        Some(f) => v.monic().sub(f),
                        None => v.clone(),
                    }
                } else {
                    v.clone()
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gegenbauer::basis_context;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn m43_system_shape_and_first_equation() {
        let ctx = basis_context(43).unwrap();
        let sys = build_system(&ctx, FormSpec::new(3, 3).unwrap(), &q(1, 2)).unwrap();
        assert_eq!(sys.equations.len(), 12);
        assert_eq!(sys.unknowns.len(), 12);
        let f0 = sys
            .equations
            .iter()
            .find_map(|e| match e {
                Equation::Annihilator { j: 1, f0, .. } => Some(f0.clone()),
                _ => None,
            })
            .unwrap();
        assert_eq!(f0.coeffs, vec![q(23, 1442994), q(-287, 1290), q(49, 12126), q(-29, 141470)]);
    }

    #[test]
    fn m43_elimination() {
        let ctx = basis_context(43).unwrap();
        let sys = build_system(&ctx, FormSpec::new(3, 3).unwrap(), &q(1, 2)).unwrap();
        let tr = eliminate_to_univariate(&ctx, &sys).unwrap();
        assert_eq!(tr.relations[0], UniPoly::linear(q(-5570, 53994227), q(779, 1018759)));
        assert_eq!(tr.relations[1], UniPoly::linear(q(-10605, 1101923), q(1930, 20791)));
        let h = UniPoly::new(vec![
            q(-106321508304907, 2129617205027920),
            q(590059779, 1287046064),
            q(-1835489, 2079100),
            q(1, 1),
        ]);
        assert_eq!(tr.eliminant.as_ref().unwrap(), &h);
        assert_eq!(tr.q_reduced.as_ref().unwrap(), &UniPoly::linear(q(-179, 100), q(2, 1)));
        assert!(tr.substitution_residuals().iter().all(UniPoly::is_zero));
    }

    #[test]
    fn small_system_without_interior_zeros() {
        let ctx = basis_context(4).unwrap();
        let sys = build_system(&ctx, FormSpec::new(2, 0).unwrap(), &q(1, 2)).unwrap();
        assert_eq!(sys.equations.len(), 3);
        assert!(sys.equations.iter().all(|e| matches!(e, Equation::Weight { .. })));
        let tr = eliminate_to_univariate(&ctx, &sys).unwrap();
        assert!(tr.eliminant.is_none());
    }

    #[test]
    fn levenshtein_eliminant_is_linear() {
        let ctx = basis_context(10).unwrap();
        let sys = build_system(&ctx, FormSpec::new(1, 1).unwrap(), &q(1, 2)).unwrap();
        let tr = eliminate_to_univariate(&ctx, &sys).unwrap();
        let f = tr.eliminant.unwrap();
        assert_eq!(f, UniPoly::linear(q(-1, 56), q(1, 1)));
    }

    #[test]
    fn rejects_bad_s() {
        let ctx = basis_context(10).unwrap();
        assert!(build_system(&ctx, FormSpec::new(1, 1).unwrap(), &q(3, 2)).is_err());
    }
}
