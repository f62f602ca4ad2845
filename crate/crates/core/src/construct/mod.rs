//! Extremal polynomial construction: the quadrature system for a given form,
//! its elimination to one unknown, root extraction and back substitution.

mod candidate;
mod roots;
mod system;

use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gegenbauer::BasisContext;

pub use candidate::{
    back_substitute, quartic_min_on, select_solution, Diagnosis, ExtremalCandidate, SelectionError,
};
pub(crate) use candidate::chi_from_u;
pub use roots::{real_roots_float, solve_univariate_real_roots, RealRoot};
pub use system::{
    build_system, eliminate_to_univariate, Equation, EliminationTrace, QuadratureSystem, Unknown,
};

/// Extremal form number and interior double-zero count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormSpec {
    pub form: u8,
    #[serde(rename = "K")]
    pub k: usize,
}

impl FormSpec {
    pub fn new(form: u8, k: usize) -> Result<Self> {
        if !(1..=4).contains(&form) {
            return Err(Error::InvalidSpec(format!("form must be 1..=4, got {form}")));
        }
        if k == 0 && form != 2 {
            return Err(Error::InvalidSpec(format!("form {form} needs K >= 1")));
        }
        Ok(FormSpec { form, k })
    }

    pub fn degree(&self) -> usize {
        4 * self.k + 2 * self.form as usize
    }

    /// Forms 2 and 4 carry a `t²` factor, i.e. a node at the origin.
    pub fn has_origin(&self) -> bool {
        self.form.is_multiple_of(2)
    }

    /// Forms 3 and 4 carry the quartic `t⁴ + q t² + r`.
    pub fn has_quartic(&self) -> bool {
        self.form >= 3
    }

    /// Basis indices whose coefficient is forced to zero and whose functional
    /// value is a free correction `γ`.
    pub fn correction_indices(&self) -> Vec<usize> {
        let d = self.degree();
        if self.has_quartic() {
            vec![d - 4, d - 2]
        } else {
            Vec::new()
        }
    }

    pub fn node_count(&self) -> usize {
        self.k + 2 + usize::from(self.has_origin())
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "form {} K={} degree {}", self.form, self.k, self.degree())
    }
}

/// A node of the quadrature functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    One,
    S,
    /// `a_{i+1}`.
    Interior(usize),
    Origin,
}

impl Node {
    /// Node list in certificate order: `1, s, a_1..a_K`, then `0` when present.
    pub fn all(spec: &FormSpec) -> Vec<Node> {
        let mut v = vec![Node::One, Node::S];
        v.extend((0..spec.k).map(Node::Interior));
        if spec.has_origin() {
            v.push(Node::Origin);
        }
        v
    }

    /// Label used in certificates; the `s` node is labelled by its value.
    pub fn label(&self, s: &Rational) -> String {
        match self {
            Node::One => "1".into(),
            Node::S => s.to_string(),
            Node::Interior(i) => format!("a{}", i + 1),
            Node::Origin => "0".into(),
        }
    }

    /// `x²` for nodes with rational position.
    pub fn rational_square(&self, s: &Rational) -> Option<Rational> {
        match self {
            Node::One => Some(Rational::from(1)),
            Node::S => Some(Rational::from(s.square_ref())),
            Node::Origin => Some(Rational::new()),
            Node::Interior(_) => None,
        }
    }
}

/// Everything produced on the way from a form specification to candidates.
#[derive(Clone, Debug)]
pub struct Construction {
    pub system: QuadratureSystem,
    pub trace: EliminationTrace,
    pub roots: Vec<RealRoot>,
    /// One candidate per real root, feasible or not.
    pub candidates: Vec<ExtremalCandidate>,
}

impl Construction {
    /// The unique candidate passing the zero and quartic filters.
    pub fn select(&self) -> Result<ExtremalCandidate> {
        Ok(select_solution(self.candidates.clone())?)
    }
}

/// Builds, eliminates, isolates the eliminant's real roots at `prec` bits and
/// back-substitutes each one.
pub fn construct_candidates(ctx: &BasisContext, spec: FormSpec, s: &Rational, prec: u32) -> Result<Construction> {
    let system = build_system(ctx, spec, s)?;
    let trace = eliminate_to_univariate(ctx, &system)?;
    let (roots, candidates) = match &trace.eliminant {
        Some(f) => {
            let roots = solve_univariate_real_roots(f, prec);
            let cands = roots
                .iter()
                .map(|r| back_substitute(ctx, &system, &trace, Some(r), prec))
                .collect::<Result<Vec<_>>>()?;
            (roots, cands)
        }
        None => (Vec::new(), vec![back_substitute(ctx, &system, &trace, None, prec)?]),
    };
    Ok(Construction { system, trace, roots, candidates })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degrees_and_corrections() {
        assert_eq!(FormSpec::new(1, 1).unwrap().degree(), 6);
        assert_eq!(FormSpec::new(2, 0).unwrap().degree(), 4);
        assert_eq!(FormSpec::new(3, 3).unwrap().degree(), 18);
        assert_eq!(FormSpec::new(4, 2).unwrap().degree(), 16);
        assert_eq!(FormSpec::new(3, 3).unwrap().correction_indices(), vec![14, 16]);
        assert_eq!(FormSpec::new(4, 2).unwrap().correction_indices(), vec![12, 14]);
        assert!(FormSpec::new(1, 0).is_err());
        assert!(FormSpec::new(3, 0).is_err());
        assert!(FormSpec::new(5, 1).is_err());
    }

    #[test]
    fn node_labels() {
        let spec = FormSpec::new(4, 2).unwrap();
        let s = Rational::from((1, 2));
        let labels: Vec<_> = Node::all(&spec).iter().map(|n| n.label(&s)).collect();
        assert_eq!(labels, ["1", "1/2", "a1", "a2", "0"]);
    }
}
