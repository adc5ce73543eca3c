//! Executable registry of numerical-radius and Buzano-type inequalities.
//!
//! Every checker evaluates both sides of one inequality, records the named
//! intermediate quantities that enter its right-hand side and reports the
//! slack `rhs − lhs`. Radii on the left are taken from the lower end of a
//! certified bracket and radii on the right from the upper end, so a negative
//! slack is never an artifact of the radius solver.

mod block;
mod lemmas;
mod optimize;
mod product;
mod single;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::blockops::BlockSpec;
use crate::error::{Error, Result};
use crate::linalg::{psd_power, spectral_norm, ComplexMatrix, RadiusBracket, C64, DEFAULT_RANK_TOL};
use crate::semihilbert::{
    a_abs_power, a_adjoint, a_numerical_radius_bracket, in_b_a, make_context, op_seminorm, pull_back, reduce,
    SemiInnerContext,
};

pub use block::check_matrix_bound;
pub use lemmas::{check_holder_mccarthy, check_mixed_schwarz, check_scalar_lemma, check_vector_lemma};
pub use optimize::{
    alpha0_closed_form, minimize_refined_alpha, optimize_params, optimize_refined_alpha_bound,
    refined_alpha_objective, ParamGrid, RefinedAlphaBound,
};
pub use product::{check_product_bound, ProductOperands};
pub use single::check_single_operator_bound;

/// Reports with `rel_slack` below `-VIOLATION_REL_TOL` (and satisfied hypotheses) are violations.
pub const VIOLATION_REL_TOL: f64 = 1e-8;
/// Tolerance for `1/p + 1/q = 1`.
const CONJUGATE_TOL: f64 = 1e-12;

/// Free parameters shared by the registry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundParams {
    /// Buzano parameter, any nonzero complex number.
    pub alpha: C64,
    pub beta: f64,
    pub r: f64,
    pub mu: f64,
    /// Exponent of the power pair `f(t) = t^λ`, `g(t) = t^{1−λ}`.
    pub lam: f64,
    pub p: f64,
    pub q: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams { alpha: C64::new(2.0, 0.0), beta: 0.0, r: 1.0, mu: 0.5, lam: 0.5, p: 2.0, q: 2.0 }
    }
}

impl BoundParams {
    /// Sets `p` and its conjugate exponent `q = p/(p−1)`.
    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self.q = p / (p - 1.0);
        self
    }

    fn alpha_abs2(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// `max{1, |α−1|}`
    fn m1(&self) -> f64 {
        (self.alpha - 1.0).norm().max(1.0)
    }

    /// `max{1, |α−1|²}`
    fn m2(&self) -> f64 {
        (self.alpha - 1.0).norm_sqr().max(1.0)
    }

    fn g1(&self) -> f64 {
        (2.0 * self.beta + 1.0) / (self.beta + 1.0)
    }

    fn g2(&self) -> f64 {
        (2.0 * self.beta + 3.0) / (self.beta + 1.0)
    }

    fn chi1(&self) -> f64 {
        let b = self.beta;
        (b + (b + 1.0) * self.m2()) / (self.alpha_abs2() * (b + 1.0))
    }

    fn chi2(&self) -> f64 {
        let b = self.beta;
        (1.0 + 2.0 * (b + 1.0) * self.m1()) / (self.alpha_abs2() * (b + 1.0))
    }

    fn chi3(&self) -> f64 {
        let b = self.beta;
        (2.0 * b + 2.0 * (b + 1.0) * self.m2()) / (self.alpha_abs2() * (b + 1.0))
    }

    fn chi4(&self) -> f64 {
        2.0 / (self.alpha_abs2() * (self.beta + 1.0))
    }

    fn delta1(&self) -> f64 {
        self.chi3()
    }

    fn delta2(&self) -> f64 {
        self.chi4()
    }

    fn validate(&self, uses: &[Param]) -> Result<()> {
        let bad = |what: String| Err(Error::DomainViolation(what));
        for p in uses {
            match p {
                Param::Alpha if !(self.alpha.norm() > 0.0 && self.alpha.re.is_finite() && self.alpha.im.is_finite()) => {
                    return bad(format!("alpha must be a nonzero finite complex number, got {}", self.alpha));
                }
                Param::Beta if !(self.beta >= 0.0 && self.beta.is_finite()) => {
                    return bad(format!("beta must be >= 0, got {}", self.beta));
                }
                Param::R if !(self.r >= 1.0 && self.r.is_finite()) => return bad(format!("r must be >= 1, got {}", self.r)),
                Param::RNonNeg if !(self.r >= 0.0 && self.r.is_finite()) => {
                    return bad(format!("r must be >= 0, got {}", self.r));
                }
                Param::Mu if !(0.0..=1.0).contains(&self.mu) => return bad(format!("mu must lie in [0,1], got {}", self.mu)),
                Param::Lam if !(0.0..=1.0).contains(&self.lam) => {
                    return bad(format!("lam must lie in [0,1], got {}", self.lam));
                }
                Param::Holder => {
                    if !(self.p > 1.0 && self.q > 1.0 && self.p.is_finite() && self.q.is_finite()) {
                        return bad(format!("p and q must exceed 1, got p={}, q={}", self.p, self.q));
                    }
                    if (1.0 / self.p + 1.0 / self.q - 1.0).abs() > CONJUGATE_TOL {
                        return bad(format!("1/p + 1/q must equal 1, got p={}, q={}", self.p, self.q));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Which parameters an inequality reads (and therefore validates).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    Alpha,
    Beta,
    /// `r ≥ 1`
    R,
    /// `r ≥ 0`
    RNonNeg,
    Mu,
    Lam,
    /// Conjugate Hölder pair `p, q`.
    Holder,
}

/// One evaluation of one inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality_id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub rel_slack: f64,
    pub intermediates: BTreeMap<String, f64>,
    /// False when an operand is outside the inequality's hypothesis class;
    /// such reports are advisory and never count as violations.
    pub hypotheses_ok: bool,
    pub params: BoundParams,
}

/// Pass/fail classification of a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
    Advisory,
}

impl BoundReport {
    pub(crate) fn new(
        id: &str,
        lhs: f64,
        rhs: f64,
        intermediates: BTreeMap<String, f64>,
        hypotheses_ok: bool,
        params: BoundParams,
    ) -> Self {
        let slack = rhs - lhs;
        BoundReport {
            inequality_id: id.to_string(),
            lhs,
            rhs,
            slack,
            rel_slack: slack / rhs.abs().max(1.0),
            intermediates,
            hypotheses_ok,
            params,
        }
    }

    pub fn verdict(&self) -> Verdict {
        if !self.hypotheses_ok {
            Verdict::Advisory
        } else if self.rel_slack < -VIOLATION_REL_TOL || self.rel_slack.is_nan() {
            Verdict::Violated
        } else {
            Verdict::Holds
        }
    }

    pub fn is_violation(&self) -> bool {
        self.verdict() == Verdict::Violated
    }

    pub fn intermediate(&self, name: &str) -> Option<f64> {
        self.intermediates.get(name).copied()
    }
}

/// Checker family, which fixes the operand names an entry consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Positive reals supplied through `scalars`.
    Scalar,
    /// Vectors `a, b, e` with `‖e‖_A = 1`.
    Vector,
    /// Operator `T` and vectors `x, y`.
    MixedSchwarz,
    /// A-positive `T` and A-unit `x`.
    HolderMcCarthy,
    /// 2×2 operator matrices under `𝔸 = diag(A, A)`.
    Matrix,
    /// Single operator `M`.
    Single,
    /// Products `S♯T` of anti-diagonal operator matrices, or `K♯F`.
    Product,
}

/// A registry entry.
#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub id: &'static str,
    pub family: Family,
    pub operands: &'static [&'static str],
    pub params: &'static [Param],
    pub summary: &'static str,
}

use Param::*;

const XY: &[&str] = &["X", "Y"];
const FXYK: &[&str] = &["F", "X", "Y", "K"];
const VEC: &[&str] = &["a", "b", "e"];

static REGISTRY: &[Entry] = &[
    Entry { id: "jensen", family: Family::Scalar, operands: &[], params: &[Lam, R], summary: "weighted AM-GM and power-mean chain" },
    Entry { id: "bohr", family: Family::Scalar, operands: &[], params: &[R], summary: "(Σ a_i)^r ≤ n^{r−1} Σ a_i^r" },
    Entry { id: "buz_general", family: Family::Vector, operands: VEC, params: &[Alpha], summary: "A-Buzano inequality with parameter α" },
    Entry { id: "buz_half", family: Family::Vector, operands: VEC, params: &[], summary: "A-Buzano inequality, α = 2" },
    Entry { id: "mix_al_be", family: Family::Vector, operands: VEC, params: &[Alpha, Beta], summary: "mixed (α, β) Buzano bound" },
    Entry { id: "buzano_beta", family: Family::Vector, operands: VEC, params: &[Beta], summary: "β-Buzano bound (α = 2)" },
    Entry { id: "ramadan_kareem", family: Family::Vector, operands: VEC, params: &[Alpha, Beta], summary: "(α, β) bound with |⟨a,b⟩|² term" },
    Entry { id: "buz_beta", family: Family::Vector, operands: VEC, params: &[Beta], summary: "β bound with |⟨a,b⟩|² term (α = 2)" },
    Entry { id: "buz_beta_pow", family: Family::Vector, operands: VEC, params: &[Beta, R], summary: "r-th power of buz_beta" },
    Entry { id: "modified_buzano", family: Family::Vector, operands: VEC, params: &[Beta, R], summary: "r-th power of buzano_beta" },
    Entry { id: "drag", family: Family::Vector, operands: VEC, params: &[], summary: "|⟨a,e⟩|² + |⟨e,b⟩|² bound" },
    Entry { id: "mixed_schwarz", family: Family::MixedSchwarz, operands: &["T", "x", "y"], params: &[Lam], summary: "A-mixed Schwarz (power form), needs TA = AT" },
    Entry { id: "holder_mccarthy", family: Family::HolderMcCarthy, operands: &["T", "x"], params: &[RNonNeg], summary: "Hölder–McCarthy for A-positive T" },
    Entry { id: "thm_2_7", family: Family::Matrix, operands: XY, params: &[Lam], summary: "w ≤ ½(‖|X|^{2λ}‖ + ‖|Y♯|^{2(1−λ)}‖)" },
    Entry { id: "thm_2_8", family: Family::Matrix, operands: XY, params: &[], summary: "w ≤ inf_λ ½(‖X‖^{2λ} + ‖Y♯‖^{2(1−λ)})" },
    Entry { id: "thm_2_10", family: Family::Matrix, operands: XY, params: &[R, Lam], summary: "w^r bound via f, g with f(t)g(t) = t" },
    Entry { id: "cor_2_11", family: Family::Matrix, operands: XY, params: &[R, Lam], summary: "w^r bound with power pair (λ, 1−λ)" },
    Entry { id: "rem_2_12", family: Family::Matrix, operands: XY, params: &[], summary: "w ≤ ½ w^{1/2}(|X|+|Y♯|) w^{1/2}(|Y|+|X♯|)" },
    Entry { id: "moby_a1", family: Family::Matrix, operands: XY, params: &[Alpha, Beta], summary: "w⁴ bound with δ₁, δ₂" },
    Entry { id: "ramadan1", family: Family::Matrix, operands: XY, params: &[Beta, R], summary: "w^{4r} bound with λ_r, μ_r (product term)" },
    Entry { id: "thm_beta", family: Family::Matrix, operands: XY, params: &[Beta, R], summary: "w^{4r} bound with λ_r, μ_r (squared radius term)" },
    Entry { id: "thm_alpha", family: Family::Matrix, operands: XY, params: &[Alpha, R], summary: "w^{2r} bound with parameter α" },
    Entry { id: "thm_2_16", family: Family::Matrix, operands: XY, params: &[Beta, R, Lam, Holder], summary: "w^{4r} bound with Young-type ρ_r, σ_r" },
    Entry { id: "kz", family: Family::Matrix, operands: FXYK, params: &[Alpha, Beta], summary: "w⁴ of [[F,X],[Y,K]] with χ₁, χ₂" },
    Entry { id: "modified_kz", family: Family::Matrix, operands: FXYK, params: &[Alpha, Beta, Mu], summary: "w⁴ of [[F,X],[Y,K]] with χ₁…χ₄ and μ" },
    Entry { id: "moby_a2", family: Family::Single, operands: &["M"], params: &[Alpha, Beta], summary: "w⁴(M) bound with δ₁, δ₂" },
    Entry { id: "ramadan1_cor", family: Family::Single, operands: &["M"], params: &[Beta, R], summary: "w^{4r}(M) bound (product term)" },
    Entry { id: "mohd1", family: Family::Single, operands: &["M"], params: &[Beta, R], summary: "w^{4r}(M) bound (squared radius term)" },
    Entry { id: "alpha_cor", family: Family::Single, operands: &["M"], params: &[Alpha, R], summary: "w^{2r}(M) bound with parameter α" },
    Entry { id: "college1", family: Family::Single, operands: &["M"], params: &[Alpha, Beta], summary: "w⁴(M) from the [[M,M],[M,M]] case of kz" },
    Entry { id: "modified_kz_cor", family: Family::Single, operands: &["M"], params: &[Alpha, Beta, Mu], summary: "w⁴(M) from the [[M,M],[M,M]] case of modified_kz" },
    Entry { id: "prod1", family: Family::Product, operands: &["T1", "T2", "S1", "S2"], params: &[Beta, R], summary: "w^{4r}(S♯T) bound (product term)" },
    Entry { id: "prod2", family: Family::Product, operands: &["T1", "T2", "S1", "S2"], params: &[Beta, R], summary: "w^{4r}(S♯T) bound (squared radius term)" },
    Entry { id: "cor_prod", family: Family::Product, operands: &["F", "K"], params: &[Beta, R], summary: "w^{4r}(K♯F) bound (product term)" },
    Entry { id: "cor_prod_a", family: Family::Product, operands: &["F", "K"], params: &[Beta, R], summary: "w^{4r}(K♯F) bound (squared radius term)" },
    Entry { id: "power_2r", family: Family::Product, operands: &["F", "K"], params: &[R], summary: "w^{2r}(K♯F) ≤ ½‖(F♯F)^{2r} + (K♯K)^{2r}‖" },
];

/// All registry entries in a stable order.
pub fn registry() -> &'static [Entry] {
    REGISTRY
}

pub fn ids() -> impl Iterator<Item = &'static str> {
    REGISTRY.iter().map(|e| e.id)
}

pub fn lookup(id: &str) -> Result<&'static Entry> {
    REGISTRY.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownId(id.to_string()))
}

/// Named operands of an evaluation (`"X"`, `"Y"`, `"a"`, …).
pub type Operands = BTreeMap<String, ComplexMatrix>;

fn operand<'a>(ops: &'a Operands, name: &str) -> Result<&'a ComplexMatrix> {
    ops.get(name).ok_or_else(|| Error::MissingOperand(name.to_string()))
}

/// Evaluates registry entry `id`; `tol` overrides the default radius tolerance.
pub fn evaluate(
    ctx: &SemiInnerContext,
    id: &str,
    ops: &Operands,
    scalars: &[f64],
    params: &BoundParams,
    tol: Option<f64>,
) -> Result<BoundReport> {
    let entry = lookup(id)?;
    let get = |name: &str| operand(ops, name);
    match entry.family {
        Family::Scalar => {
            let reports = check_scalar_lemma(id, scalars, params)?;
            Ok(reports
                .into_iter()
                .min_by(|a, b| a.rel_slack.total_cmp(&b.rel_slack))
                .expect("scalar lemmas produce at least one report"))
        }
        Family::Vector => check_vector_lemma(ctx, id, get("a")?, get("b")?, get("e")?, params),
        Family::MixedSchwarz => check_mixed_schwarz(ctx, get("T")?, get("x")?, get("y")?, params),
        Family::HolderMcCarthy => check_holder_mccarthy(ctx, get("T")?, get("x")?, params),
        Family::Matrix => {
            let spec = if entry.operands.len() == 4 {
                BlockSpec::Full { f: get("F")?.clone(), x: get("X")?.clone(), y: get("Y")?.clone(), k: get("K")?.clone() }
            } else {
                BlockSpec::AntiDiag { x: get("X")?.clone(), y: get("Y")?.clone() }
            };
            check_matrix_bound(ctx, id, &spec, params, tol)
        }
        Family::Single => check_single_operator_bound(ctx, id, get("M")?, params, tol),
        Family::Product => {
            let operands = if entry.operands.len() == 4 {
                ProductOperands::Blocks {
                    t1: get("T1")?.clone(),
                    t2: get("T2")?.clone(),
                    s1: get("S1")?.clone(),
                    s2: get("S2")?.clone(),
                }
            } else {
                ProductOperands::Pair { f: get("F")?.clone(), k: get("K")?.clone() }
            };
            check_product_bound(ctx, id, &operands, params, tol)
        }
    }
}

fn default_rank_tol() -> f64 {
    DEFAULT_RANK_TOL
}

/// A self-contained, serializable checker input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    #[serde(rename = "A")]
    pub a: ComplexMatrix,
    #[serde(default = "default_rank_tol")]
    pub rank_tol: f64,
    #[serde(default)]
    pub operands: Operands,
    #[serde(default)]
    pub scalars: Vec<f64>,
    #[serde(default)]
    pub params: BoundParams,
    #[serde(default)]
    pub tol: Option<f64>,
}

impl Instance {
    pub fn evaluate(&self) -> Result<BoundReport> {
        let ctx = make_context(&self.a, self.rank_tol)?;
        evaluate(&ctx, &self.id, &self.operands, &self.scalars, &self.params, self.tol)
    }
}

// ---- shared numerics ---------------------------------------------------------

/// Radius tolerance: explicit, or `1e-8·max(1, scale)` with `scale` the largest operand seminorm.
fn resolve_tol(ctx: &SemiInnerContext, explicit: Option<f64>, operands: &[&ComplexMatrix]) -> Result<f64> {
    if let Some(t) = explicit {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::DomainViolation(format!("tol must be positive, got {t}")));
        }
        return Ok(t);
    }
    let mut scale = 1.0f64;
    for t in operands {
        scale = scale.max(op_seminorm(ctx, t)?);
    }
    Ok(1e-8 * scale)
}

fn radius(ctx: &SemiInnerContext, t: &ComplexMatrix, tol: f64) -> Result<RadiusBracket> {
    a_numerical_radius_bracket(ctx, t, tol)
}

/// A-calculus bound to one context and one radius tolerance.
struct Calc<'a> {
    ctx: &'a SemiInnerContext,
    tol: f64,
}

impl<'a> Calc<'a> {
    fn new(ctx: &'a SemiInnerContext, tol: f64) -> Self {
        Calc { ctx, tol }
    }

    fn sharp(&self, t: &ComplexMatrix) -> Result<ComplexMatrix> {
        a_adjoint(self.ctx, t)
    }

    fn norm(&self, t: &ComplexMatrix) -> Result<f64> {
        op_seminorm(self.ctx, t)
    }

    /// Upper end of the radius bracket, for right-hand sides.
    fn w(&self, t: &ComplexMatrix) -> Result<f64> {
        Ok(radius(self.ctx, t, self.tol)?.upper)
    }

    /// Radius of an operator that is A-positive by construction; equals its seminorm.
    fn w_positive(&self, t: &ComplexMatrix) -> Result<f64> {
        Ok(spectral_norm(&reduce(self.ctx, t)?.tilde.hermitian_part()))
    }

    /// `B^r` for an operator whose reduction is positive semidefinite (`Y♯Y`, `XX♯`, …).
    fn pow(&self, base: &ComplexMatrix, r: f64) -> Result<ComplexMatrix> {
        let tilde = reduce(self.ctx, base)?.tilde.hermitian_part();
        pull_back(self.ctx, &psd_power(&tilde, r)?)
    }

    fn abs_pow(&self, t: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
        a_abs_power(self.ctx, t, p)
    }

    /// `‖B₁^r + B₂^r‖_A` for two bases with positive reductions.
    fn norm_pow_sum(&self, b1: &ComplexMatrix, b2: &ComplexMatrix, r: f64) -> Result<f64> {
        self.norm(&(self.pow(b1, r)? + self.pow(b2, r)?))
    }
}

fn all_in_b_a(ctx: &SemiInnerContext, operands: &[&ComplexMatrix]) -> Result<bool> {
    for t in operands {
        if !in_b_a(ctx, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x^e` with `0^e = 0` for every `e ≥ 0`, matching the kernel convention of `psd_power`.
fn pow0(x: f64, e: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(e)
    }
}

fn record(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semihilbert::identity_context;

    #[test]
    fn registry_ids_are_unique_and_resolvable() {
        let mut seen = std::collections::BTreeSet::new();
        for e in registry() {
            assert!(seen.insert(e.id), "duplicate id {}", e.id);
            assert_eq!(lookup(e.id).unwrap().id, e.id);
        }
        assert_eq!(seen.len(), 36);
        assert_eq!(lookup("nope").unwrap_err(), Error::UnknownId("nope".into()));
    }

    #[test]
    fn constants_at_reference_parameters() {
        let p = BoundParams { beta: 1.0, ..Default::default() };
        assert_eq!(p.delta1(), 0.75);
        assert_eq!(p.delta2(), 0.25);
        assert_eq!(p.g1(), 1.5);
        assert_eq!(p.g2(), 2.5);
        let p0 = BoundParams::default();
        assert_eq!(p0.chi1(), 0.25);
        assert_eq!(p0.chi2(), 0.75);
        assert_eq!(p0.chi3(), 0.5);
        assert_eq!(p0.chi4(), 0.5);
        let far = BoundParams { alpha: C64::new(-3.0, 4.0), ..Default::default() };
        assert!((far.m1() - 32f64.sqrt()).abs() < 1e-15);
        assert!((far.m2() - 32.0).abs() < 1e-12);
    }

    #[test]
    fn parameter_domains_are_enforced() {
        let base = BoundParams::default();
        let check = |p: BoundParams, uses: &[Param]| p.validate(uses);
        assert!(check(base, &[Alpha, Beta, R, Mu, Lam, Holder]).is_ok());
        assert!(check(BoundParams { alpha: C64::new(0.0, 0.0), ..base }, &[Alpha]).is_err());
        assert!(check(BoundParams { beta: -0.1, ..base }, &[Beta]).is_err());
        assert!(check(BoundParams { r: 0.5, ..base }, &[R]).is_err());
        assert!(check(BoundParams { r: 0.5, ..base }, &[RNonNeg]).is_ok());
        assert!(check(BoundParams { mu: 1.5, ..base }, &[Mu]).is_err());
        assert!(check(BoundParams { lam: f64::NAN, ..base }, &[Lam]).is_err());
        assert!(check(BoundParams { q: 3.0, ..base }, &[Holder]).is_err());
        assert!(check(base.with_p(3.0), &[Holder]).is_ok());
        // unused parameters are not validated
        assert!(check(BoundParams { mu: 7.0, ..base }, &[Beta]).is_ok());
    }

    #[test]
    fn report_slack_bookkeeping() {
        let r = BoundReport::new("x", 3.0, 2.0, BTreeMap::new(), true, BoundParams::default());
        assert_eq!(r.slack, -1.0);
        assert_eq!(r.rel_slack, -0.5);
        assert_eq!(r.verdict(), Verdict::Violated);
        let small = BoundReport::new("x", 0.2, 0.1, BTreeMap::new(), true, BoundParams::default());
        assert_eq!(small.rel_slack, small.slack);
        let advisory = BoundReport { hypotheses_ok: false, ..r };
        assert_eq!(advisory.verdict(), Verdict::Advisory);
        assert!(!advisory.is_violation());
    }

    #[test]
    fn missing_operands_are_reported_by_name() {
        let ctx = identity_context(2);
        let err = evaluate(&ctx, "thm_2_7", &Operands::new(), &[], &BoundParams::default(), None).unwrap_err();
        assert_eq!(err, Error::MissingOperand("X".into()));
    }

    #[test]
    fn instance_json_round_trip_reproduces_report() {
        let mut operands = Operands::new();
        operands.insert("X".into(), ComplexMatrix::real(&[&[1.0, 2.0], &[0.0, -1.0]]));
        operands.insert("Y".into(), ComplexMatrix::real(&[&[0.5, 0.0], &[1.0, 1.0]]));
        let inst = Instance {
            id: "moby_a1".into(),
            a: ComplexMatrix::diag_real(&[1.0, 3.0]),
            rank_tol: DEFAULT_RANK_TOL,
            operands,
            scalars: vec![],
            params: BoundParams { beta: 0.7, ..Default::default() },
            tol: None,
        };
        let text = serde_json::to_string(&inst).unwrap();
        let back: Instance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.evaluate().unwrap(), inst.evaluate().unwrap());
    }
}
