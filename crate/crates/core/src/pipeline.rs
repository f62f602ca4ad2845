//! End-to-end solve: choose a structure, construct, certify, emit.

use rug::Rational;

use crate::certify::{
    build_functional, check_L_nonneg, check_candidate_in_class, check_exactness, check_mandated_zeros,
    check_uniqueness, check_weights, compute_bound, emit_certificate, BoundResult, Certificate, Check,
    PositivityReport, QuadratureFunctional, UniquenessReport,
};
use crate::construct::{construct_candidates, Construction, ExtremalCandidate, FormSpec};
use crate::error::{Error, Result};
use crate::gegenbauer::BasisContext;
use crate::lp;
use crate::numeric::Precision;
use crate::tables;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub m: u32,
    pub s: Rational,
    /// Overrides the registry and the LP guess.
    pub spec: Option<FormSpec>,
    pub precision: Precision,
    pub degree_cap: Option<usize>,
    pub grid: Option<usize>,
}

impl SolveOptions {
    pub fn new(m: u32) -> Self {
        SolveOptions {
            m,
            s: Rational::from((1, 2)),
            spec: None,
            precision: Precision::default(),
            degree_cap: None,
            grid: None,
        }
    }

    pub fn with_spec(mut self, spec: FormSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn with_precision(mut self, precision: Precision) -> Self {
        self.precision = precision;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecSource {
    Flags,
    Registry,
    Lp,
}

/// A certified solution.
#[derive(Clone, Debug)]
pub struct Solved {
    pub m: u32,
    pub spec: FormSpec,
    pub spec_source: SpecSource,
    pub construction: Construction,
    pub candidate: ExtremalCandidate,
    pub functional: QuadratureFunctional,
    pub bound: BoundResult,
    pub positivity: PositivityReport,
    pub uniqueness: UniquenessReport,
    /// Gates run at working precision before emission.
    pub checks: Vec<Check>,
    pub certificate: Certificate,
}

impl Solved {
    /// `m=<m> w=<decimal> even_floor=<int> form=<f> K=<k> degree=<d>`
    pub fn summary(&self) -> String {
        let w = match &self.bound.w_exact {
            Some(q) if *q.denom() == 1 => q.numer().to_string(),
            _ => crate::numeric::fmt_fixed(&self.bound.w, 25),
        };
        format!(
            "m={} w={} even_floor={} form={} K={} degree={}",
            self.m,
            w,
            self.bound.even_floor,
            self.spec.form,
            self.spec.k,
            self.spec.degree()
        )
    }
}

struct Gated {
    functional: QuadratureFunctional,
    bound: BoundResult,
    positivity: PositivityReport,
    uniqueness: UniquenessReport,
    checks: Vec<Check>,
}

fn gate(ctx: &BasisContext, cand: &ExtremalCandidate, precision: Precision) -> Result<Gated> {
    let eps = precision.margin();
    let functional = build_functional(ctx, cand)?;
    let degree = cand.spec.degree();
    let (nonneg, sum) = check_weights(&functional, &eps);
    let positivity = check_L_nonneg(&functional, ctx, degree, &eps)?;
    let (bound, gap) = compute_bound(&functional, cand, &eps);
    let uniqueness = check_uniqueness(cand, ctx, &eps);
    let checks = vec![
        check_exactness(&functional, ctx, degree, &eps),
        nonneg,
        sum,
        positivity.check.clone(),
        check_candidate_in_class(cand, &eps),
        check_mandated_zeros(cand, &eps),
        gap,
    ];
    if let Some(failed) = checks.iter().find(|c| !c.pass) {
        return Err(failed.clone().into_result().unwrap_err());
    }
    Ok(Gated { functional, bound, positivity, uniqueness, checks })
}

/// Constructs and certifies one structure.
fn solve_spec(ctx: &BasisContext, s: &Rational, spec: FormSpec, precision: Precision) -> Result<(Construction, ExtremalCandidate, Gated)> {
    let construction = construct_candidates(ctx, spec, s, precision.working())?;
    let feasible: Vec<&ExtremalCandidate> = construction.candidates.iter().filter(|c| c.diagnosis.feasible()).collect();
    let (cand, gated) = match feasible.len() {
        0 => {
            construction.select()?;
            unreachable!("selection fails without feasible candidates")
        }
        1 => {
            let c = feasible[0].clone();
            let g = gate(ctx, &c, precision)?;
            (c, g)
        }
        n => {
            let mut passing: Vec<(ExtremalCandidate, Gated)> = feasible
                .into_iter()
                .filter_map(|c| gate(ctx, c, precision).ok().map(|g| (c.clone(), g)))
                .collect();
            if passing.len() != 1 {
                return Err(Error::Ambiguous(if passing.is_empty() { n } else { passing.len() }));
            }
            passing.pop().unwrap()
        }
    };
    Ok((construction, cand, gated))
}

fn finish(m: u32, spec: FormSpec, source: SpecSource, precision: Precision, parts: (Construction, ExtremalCandidate, Gated)) -> Result<Solved> {
    let (construction, candidate, g) = parts;
    let certificate = emit_certificate(&candidate, &g.functional, Some(&construction.trace), &g.bound, precision)?;
    if let Some((name, e)) = certificate.report.iter().find(|(_, e)| !e.pass) {
        return Err(Error::Certification {
            check: name.clone(),
            detail: e.detail.clone().unwrap_or_default(),
        });
    }
    Ok(Solved {
        m,
        spec,
        spec_source: source,
        construction,
        candidate,
        functional: g.functional,
        bound: g.bound,
        positivity: g.positivity,
        uniqueness: g.uniqueness,
        checks: g.checks,
        certificate,
    })
}

/// Structure from flags, then the registry (for `s = 1/2`), then the LP guess.
pub fn solve(opts: &SolveOptions) -> Result<Solved> {
    if opts.m < 3 {
        return Err(Error::InvalidArgument(format!(
            "solve needs m >= 3 (m={}; no registry entry or tail estimate)",
            opts.m
        )));
    }
    if opts.s <= 0 || opts.s >= 1 {
        return Err(Error::Domain(format!("s={} outside (0, 1)", opts.s)));
    }
    let ctx = BasisContext::new(opts.m)?;
    let half = opts.s == Rational::from((1, 2));
    let (specs, source) = match (opts.spec, half.then(|| tables::known_bound(opts.m)).flatten()) {
        (Some(spec), _) => (vec![spec], SpecSource::Flags),
        (None, Some(entry)) => (vec![entry.spec()], SpecSource::Registry),
        (None, None) => {
            let est = lp::estimate(opts.m, &opts.s, opts.degree_cap, opts.grid)?;
            (est.guesses.into_iter().map(|g| g.spec).collect(), SpecSource::Lp)
        }
    };
    if specs.is_empty() {
        return Err(Error::Structure("the LP optimum suggests no valid structure".into()));
    }
    let mut first_err = None;
    for spec in specs {
        match solve_spec(&ctx, &opts.s, spec, opts.precision).and_then(|p| finish(opts.m, spec, source, opts.precision, p)) {
            Ok(s) => return Ok(s),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    // A flagged registry row that fails to certify: retry with the LP guess,
    // capped above the neighbouring rows' degrees.
    if source == SpecSource::Registry && tables::is_anomalous(opts.m) {
        let cap = opts.degree_cap.unwrap_or_else(|| {
            (opts.m - 1..=opts.m + 1)
                .filter_map(tables::known_bound)
                .map(|e| e.spec().degree().max(e.degree))
                .max()
                .unwrap_or(0)
                + 4
        });
        let est = lp::estimate(opts.m, &opts.s, Some(cap), opts.grid)?;
        for spec in est.guesses.into_iter().map(|g| g.spec) {
            if let Ok(p) = solve_spec(&ctx, &opts.s, spec, opts.precision) {
                if let Ok(s) = finish(opts.m, spec, SpecSource::Lp, opts.precision, p) {
                    return Ok(s);
                }
            }
        }
    }
    Err(first_err.unwrap())
}
