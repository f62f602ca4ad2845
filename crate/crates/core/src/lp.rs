//! Grid-discretized, degree-truncated LP for `w^A_m(s)` and a structure guess
//! read off its optimum.
//!
//! Primal: minimize `Σ x_{2k}` over `x >= 0` with `1 + Σ x_{2k} R_{2k}(t) <= 0`
//! at every grid point. The solver works on the dual, maximize `Σ y_t` subject
//! to `Σ_t y_t (-R_{2k}(t)) <= 1`, `y >= 0`, whose origin is feasible, and
//! reads `x` back from the slack prices.

use rug::float::Constant;
use rug::{Float, Rational};

use crate::construct::FormSpec;
use crate::error::{Error, Result};
use crate::gegenbauer::BasisContext;
use crate::tables;

pub const DEFAULT_GRID: usize = 2001;
pub const DEFAULT_LP_BITS: u32 = 128;
/// Touch points: `|p(t)| < TOUCH_TOL · max|p|` at a local maximum.
pub const TOUCH_TOL: f64 = 1e-6;
pub const TOUCH_MERGE: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct LpInstance {
    pub m: u32,
    pub s: Rational,
    pub degree_cap: usize,
    /// Sorted points of `[0, s]`, endpoints included.
    pub grid: Vec<Float>,
    /// `rows[i][k-1] = R_{2k}(grid[i])`.
    pub rows: Vec<Vec<Float>>,
    pub prec: u32,
}

impl LpInstance {
    pub fn n_vars(&self) -> usize {
        self.degree_cap / 2
    }
}

/// `N` Chebyshev–Lobatto points on `[0, s]`.
pub fn chebyshev_grid(s: &Rational, n: usize, prec: u32) -> Vec<Float> {
    let sf = Float::with_val(prec, s);
    let half = Float::with_val(prec, &sf / 2);
    let pi = Float::with_val(prec, Constant::Pi);
    let mut g: Vec<Float> = (0..n)
        .map(|j| {
            let c = Float::with_val(prec, &pi * j as u32) / (n as u32 - 1);
            Float::with_val(prec, 1 - c.cos()) * &half
        })
        .collect();
    g[0] = Float::new(prec);
    g[n - 1] = sf;
    g
}

pub fn build_lp(ctx: &BasisContext, s: &Rational, degree_cap: usize, grid_size: usize, prec: u32) -> Result<LpInstance> {
    if *s < 0 || *s >= 1 {
        return Err(Error::Domain(format!("s={s} outside [0, 1)")));
    }
    if degree_cap % 2 == 1 {
        return Err(Error::InvalidArgument(format!("degree cap {degree_cap} must be even")));
    }
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
    }
    let grid = chebyshev_grid(s, grid_size, prec);
    let rows = grid
        .iter()
        .map(|t| {
            let r = ctx.eval_R_upto(degree_cap, t);
            (1..=degree_cap / 2).map(|k| r[2 * k].clone()).collect()
        })
        .collect();
    Ok(LpInstance { m: ctx.m(), s: s.clone(), degree_cap, grid, rows, prec })
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub u_estimate: Float,
    pub w_estimate: Float,
    /// `x[k-1]` multiplies `R_{2k}`.
    pub x: Vec<Float>,
    /// Dual weight per grid point.
    pub y: Vec<Float>,
    pub iterations: usize,
}

pub trait LpBackend {
    fn solve(&self, lp: &LpInstance) -> Result<LpSolution>;
}

/// Consecutive degenerate pivots after which the entering rule switches from
/// largest reduced cost to Bland's smallest index.
const BLAND_AFTER: usize = 50;

/// Dense tableau simplex; Bland's rule guards against cycling.
#[derive(Clone, Debug)]
pub struct DenseSimplex {
    pub max_iterations: usize,
}

impl Default for DenseSimplex {
    fn default() -> Self {
        DenseSimplex { max_iterations: 100_000 }
    }
}

impl LpBackend for DenseSimplex {
    fn solve(&self, lp: &LpInstance) -> Result<LpSolution> {
        let prec = lp.prec;
        let nv = lp.n_vars();
        let ng = lp.grid.len();
        if nv == 0 {
            return Err(Error::Structure(format!(
                "LP infeasible: degree cap {} leaves no variables (grid {ng})",
                lp.degree_cap
            )));
        }
        let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32 / 2)));
        let ncol = ng + nv;
        // Tableau rows: one per primal variable k; columns: grid duals then slacks; last entry is the rhs.
        let mut tab: Vec<Vec<Float>> = (0..nv)
            .map(|k| {
                let mut row = Vec::with_capacity(ncol + 1);
                row.extend(lp.rows.iter().map(|r| Float::with_val(prec, -&r[k])));
                row.extend((0..nv).map(|j| Float::with_val(prec, u32::from(j == k))));
                row.push(Float::with_val(prec, 1));
                row
            })
            .collect();
        // Reduced costs for maximization; entering needs a positive entry.
        let mut cost: Vec<Float> = (0..ncol).map(|j| Float::with_val(prec, u32::from(j < ng))).collect();
        let mut obj = Float::new(prec);
        let mut basis: Vec<usize> = (ng..ncol).collect();
        let mut iterations = 0;
        let mut degenerate_run = 0;
        loop {
            let enter = if degenerate_run < BLAND_AFTER {
                (0..ncol).filter(|&j| cost[j] > tol).max_by(|&a, &b| cost[a].partial_cmp(&cost[b]).unwrap().then(b.cmp(&a)))
            } else {
                (0..ncol).find(|&j| cost[j] > tol)
            };
            let Some(enter) = enter else { break };
            let mut leave: Option<(usize, Float)> = None;
            for (i, row) in tab.iter().enumerate() {
                if row[enter] > tol {
                    let ratio = Float::with_val(prec, &row[ncol] / &row[enter]);
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(Error::Structure(format!(
                    "LP infeasible at degree cap {} with grid {ng}",
                    lp.degree_cap
                )));
            };
            if ratio.is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            let piv = tab[r][enter].clone();
            for v in tab[r].iter_mut() {
                *v /= &piv;
            }
            let pivot_row = tab[r].clone();
            for (i, row) in tab.iter_mut().enumerate() {
                if i != r && !row[enter].is_zero() {
                    let f = row[enter].clone();
                    for (v, p) in row.iter_mut().zip(&pivot_row) {
                        *v -= Float::with_val(prec, &f * p);
                    }
                }
            }
            let f = cost[enter].clone();
            for (c, p) in cost.iter_mut().zip(&pivot_row) {
                *c -= Float::with_val(prec, &f * p);
            }
            obj += Float::with_val(prec, &f * &pivot_row[ncol]);
            basis[r] = enter;
            iterations += 1;
            if iterations > self.max_iterations {
                return Err(Error::Structure(format!("simplex exceeded {} pivots", self.max_iterations)));
            }
        }
        let mut y = vec![Float::new(prec); ng];
        for (i, &b) in basis.iter().enumerate() {
            if b < ng {
                y[b] = tab[i][ncol].clone();
            }
        }
        let x: Vec<Float> = (0..nv)
            .map(|k| {
                let v = Float::with_val(prec, -&cost[ng + k]);
                if v.is_sign_negative() {
                    Float::new(prec)
                } else {
                    v
                }
            })
            .collect();
        let w = Float::with_val(prec, 2 + Float::with_val(prec, 2 * &obj));
        Ok(LpSolution { u_estimate: obj, w_estimate: w, x, y, iterations })
    }
}

pub fn solve_lp(lp: &LpInstance) -> Result<LpSolution> {
    DenseSimplex::default().solve(lp)
}

/// Default degree cap: the registry row's form-consistent degree, else the
/// nearest smaller registered `m` plus 4.
pub fn default_degree_cap(m: u32) -> usize {
    if let Some(e) = tables::known_bound(m) {
        return e.spec().degree();
    }
    (2..m).rev().find_map(tables::known_bound).map_or(4, |e| e.spec().degree() + 4)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureGuess {
    pub spec: FormSpec,
    pub notes: String,
}

/// Touch points (near-zero local maxima of `p` on `[0, s)`) of the LP optimum.
pub fn touch_points(ctx: &BasisContext, lp: &LpInstance, sol: &LpSolution) -> Vec<f64> {
    let prec = lp.prec;
    let s = lp.s.to_f64();
    let n = 8001;
    let ts: Vec<f64> = (0..n).map(|i| s * i as f64 / (n - 1) as f64).collect();
    let p: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let r = ctx.eval_R_upto(lp.degree_cap, &Float::with_val(prec, t));
            let mut acc = Float::with_val(prec, 1);
            for (k, x) in sol.x.iter().enumerate() {
                acc += Float::with_val(prec, x * &r[2 * (k + 1)]);
            }
            acc.to_f64()
        })
        .collect();
    let scale = p.iter().fold(0f64, |a, v| a.max(v.abs()));
    let mut touches: Vec<f64> = Vec::new();
    for i in 0..n - 1 {
        let left = if i == 0 { f64::NEG_INFINITY } else { p[i - 1] };
        if p[i] >= left && p[i] >= p[i + 1] && p[i].abs() < TOUCH_TOL * scale {
            if touches.last().is_some_and(|&l| ts[i] - l < TOUCH_MERGE) {
                continue;
            }
            touches.push(ts[i]);
        }
    }
    touches
}

/// Ranked structure guesses: the detected form and `K` first, then the other
/// form sharing the effective degree.
pub fn guess_structure(ctx: &BasisContext, lp: &LpInstance, sol: &LpSolution) -> Vec<StructureGuess> {
    let touches = touch_points(ctx, lp, sol);
    let origin = touches.first().is_some_and(|&t| t < TOUCH_MERGE);
    let interior = touches.len() - usize::from(origin);
    let xmax = sol.x.iter().fold(0f64, |a, v| a.max(v.to_f64()));
    let nonzero = |k: usize| sol.x.get(k.wrapping_sub(1)).is_some_and(|v| v.to_f64() > 1e-8 * xmax);
    let top = (1..=sol.x.len()).rev().find(|&k| nonzero(k)).unwrap_or(0);
    let degree = 2 * top;
    let quartic = degree >= 6 && !nonzero(top - 1) && !nonzero(top - 2);
    let form = match (origin, quartic) {
        (false, false) => 1,
        (true, false) => 2,
        (false, true) => 3,
        (true, true) => 4,
    };
    let notes = format!(
        "{} touch point(s) in (0, s){}; effective degree {degree}{}",
        interior,
        if origin { " plus t=0" } else { "" },
        if quartic { "; two coefficients below the top vanish" } else { "" }
    );
    let mut out = Vec::new();
    if let Ok(spec) = FormSpec::new(form, interior) {
        out.push(StructureGuess { spec, notes: notes.clone() });
    }
    let alt_form = if quartic { form - 2 } else { form + 2 };
    for f in [form, alt_form] {
        let twice = degree as i64 - 2 * f as i64;
        if twice >= 0 && twice % 4 == 0 {
            if let Ok(spec) = FormSpec::new(f, twice as usize / 4) {
                if !out.iter().any(|g| g.spec == spec) {
                    out.push(StructureGuess { spec, notes: format!("degree-consistent alternative; {notes}") });
                }
            }
        }
    }
    out
}

/// LP estimate plus ranked guesses.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub degree_cap: usize,
    pub grid_size: usize,
    pub solution: LpSolution,
    pub guesses: Vec<StructureGuess>,
}

pub fn estimate(m: u32, s: &Rational, degree_cap: Option<usize>, grid_size: Option<usize>) -> Result<Estimate> {
    let ctx = BasisContext::new(m)?;
    let cap = degree_cap.unwrap_or_else(|| default_degree_cap(m));
    let grid = grid_size.unwrap_or(DEFAULT_GRID);
    let lp = build_lp(&ctx, s, cap, grid, DEFAULT_LP_BITS)?;
    let solution = solve_lp(&lp)?;
    let guesses = guess_structure(&ctx, &lp, &solution);
    Ok(Estimate { degree_cap: cap, grid_size: grid, solution, guesses })
}
