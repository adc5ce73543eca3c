//! Parameter optimization: the refined power bound and grid search over registry parameters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::search::golden_section_min;
use crate::semihilbert::{a_adjoint, op_seminorm, SemiInnerContext};

use super::{evaluate, lookup, pow0, BoundParams, BoundReport, Operands, Param};

const LAMBDA_TOL: f64 = 1e-10;

/// Minimizer of `f(λ) = ½(u^{2λ} + v^{2(1−λ)})` over `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinedAlphaBound {
    pub lam_star: f64,
    pub bound: f64,
    pub norm_x: f64,
    pub norm_y_sharp: f64,
    /// Set when a norm vanishes; the bound is then the better endpoint value.
    pub degenerate: bool,
}

/// `½(u^{2λ} + v^{2(1−λ)})` with `0^0 = 0`.
pub fn refined_alpha_objective(u: f64, v: f64, lam: f64) -> f64 {
    0.5 * (pow0(u, 2.0 * lam) + pow0(v, 2.0 * (1.0 - lam)))
}

/// Golden-section minimization of the convex objective to `1e-10` in `λ`.
pub fn minimize_refined_alpha(u: f64, v: f64) -> RefinedAlphaBound {
    let f = |lam: f64| refined_alpha_objective(u, v, lam);
    let out = |lam_star, bound, degenerate| RefinedAlphaBound { lam_star, bound, norm_x: u, norm_y_sharp: v, degenerate };
    let degenerate = u == 0.0 || v == 0.0;
    if u == v {
        return out(0.5, f(0.5), degenerate);
    }
    if degenerate {
        let (f0, f1) = (f(0.0), f(1.0));
        return if f0 <= f1 { out(0.0, f0, true) } else { out(1.0, f1, true) };
    }
    let m = golden_section_min(f, 0.0, 1.0, LAMBDA_TOL);
    out(m.x, m.value, false)
}

/// `inf_λ ½(‖X‖_A^{2λ} + ‖Y♯‖_A^{2(1−λ)})` and its minimizer.
pub fn optimize_refined_alpha_bound(ctx: &SemiInnerContext, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<RefinedAlphaBound> {
    let u = op_seminorm(ctx, x)?;
    let v = op_seminorm(ctx, &a_adjoint(ctx, y)?)?;
    Ok(minimize_refined_alpha(u, v))
}

/// Stationary point `[ln(ln v / ln u) + 2 ln v] / (2(ln u + ln v))` of the
/// objective; defined only when both norms exceed 1. Kept as a cross-check.
pub fn alpha0_closed_form(u: f64, v: f64) -> Option<f64> {
    if !(u > 1.0 && v > 1.0) {
        return None;
    }
    let (lu, lv) = (u.ln(), v.ln());
    Some(((lv / lu).ln() + 2.0 * lv) / (2.0 * (lu + lv)))
}

/// Finite values per parameter; an empty list keeps the base value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ParamGrid {
    pub alpha: Vec<C64>,
    pub beta: Vec<f64>,
    pub r: Vec<f64>,
    pub mu: Vec<f64>,
    pub lam: Vec<f64>,
    /// Hölder exponent; `q` follows as `p/(p−1)`.
    pub p: Vec<f64>,
}

fn or_base<T: Copy>(values: &[T], base: T) -> Vec<T> {
    if values.is_empty() {
        vec![base]
    } else {
        values.to_vec()
    }
}

/// Searches `grid` (restricted to the parameters `id` reads) for the smallest
/// right-hand side, then polishes `λ` by golden section between the grid
/// neighbours of the best point. `β` in `mohd1` is monotone, so only its
/// endpoints are evaluated.
pub fn optimize_params(
    ctx: &SemiInnerContext,
    id: &str,
    ops: &Operands,
    scalars: &[f64],
    base: &BoundParams,
    grid: &ParamGrid,
    tol: Option<f64>,
) -> Result<BoundReport> {
    let entry = lookup(id)?;
    let uses = |p: Param| entry.params.contains(&p);
    let pick = |on: bool, values: &[f64], b: f64| if on { or_base(values, b) } else { vec![b] };
    let alphas = if uses(Param::Alpha) { or_base(&grid.alpha, base.alpha) } else { vec![base.alpha] };
    let mut betas = pick(uses(Param::Beta), &grid.beta, base.beta);
    if id == "mohd1" && betas.len() > 2 {
        let lo = betas.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        betas = vec![lo, hi];
    }
    let rs = pick(uses(Param::R) || uses(Param::RNonNeg), &grid.r, base.r);
    let mus = pick(uses(Param::Mu), &grid.mu, base.mu);
    let mut lams = pick(uses(Param::Lam), &grid.lam, base.lam);
    lams.sort_by(f64::total_cmp);
    let ps = pick(uses(Param::Holder), &grid.p, base.p);

    let run = |p: &BoundParams| evaluate(ctx, id, ops, scalars, p, tol);
    let mut best: Option<(BoundReport, usize)> = None;
    for &alpha in &alphas {
        for &beta in &betas {
            for &r in &rs {
                for &mu in &mus {
                    for (li, &lam) in lams.iter().enumerate() {
                        for &pv in &ps {
                            let mut p = BoundParams { alpha, beta, r, mu, lam, ..*base };
                            if uses(Param::Holder) {
                                p = p.with_p(pv);
                            }
                            let rep = run(&p)?;
                            if best.as_ref().is_none_or(|(b, _)| rep.rhs < b.rhs) {
                                best = Some((rep, li));
                            }
                        }
                    }
                }
            }
        }
    }
    let (best, li) = best.ok_or_else(|| Error::InvalidSpec("empty parameter grid".into()))?;
    if lams.len() < 2 {
        return Ok(best);
    }
    let lo = lams[li.saturating_sub(1)];
    let hi = lams[(li + 1).min(lams.len() - 1)];
    let fixed = best.params;
    let mut failure = None;
    let m = golden_section_min(
        |lam| match run(&BoundParams { lam, ..fixed }) {
            Ok(rep) => rep.rhs,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        },
        lo,
        hi,
        LAMBDA_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let polished = run(&BoundParams { lam: m.x, ..fixed })?;
    Ok(if polished.rhs < best.rhs { polished } else { best })
}
