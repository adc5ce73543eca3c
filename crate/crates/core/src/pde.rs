//! 1-D elliptic model problem `−(a u′)′ + c u = f` on `(0, 1)`, `u(0) = u(1) = 0`.
//!
//! Centered finite differences on `N` interior points give `T_h`; the weight
//! `A_h = diag a(x_j)` is the discretized multiplication operator. `T_h` is
//! symmetric but generally not `A_h`-selfadjoint, which is what makes the
//! `A_h`-radius of `T_h⁻¹` differ from its `A_h`-norm.

use std::f64::consts::PI;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blockops::{antidiag, dsum_context};
use crate::error::{Error, Result};
use crate::fuzz::gaussian;
use crate::inequalities::{optimize_refined_alpha_bound, BoundReport};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64, DEFAULT_RANK_TOL};
use crate::semihilbert::{
    a_adjoint, a_numerical_radius_bracket, a_numerical_radius_lower, make_context, op_seminorm, vec_seminorm,
    SemiInnerContext,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticSpec {
    /// Interior grid points `N`; `h = 1/(N+1)`.
    pub n_points: usize,
    /// Coefficients of `a(x)`, constant term first.
    pub coeff_a: Vec<f64>,
    pub coeff_c: f64,
}

impl Default for EllipticSpec {
    fn default() -> Self {
        EllipticSpec { n_points: 16, coeff_a: vec![1.0, 0.0, 1.0], coeff_c: 1.0 }
    }
}

impl EllipticSpec {
    /// `−u″` with Dirichlet conditions.
    pub fn laplacian(n_points: usize) -> Self {
        EllipticSpec { n_points, coeff_a: vec![1.0], coeff_c: 0.0 }
    }

    pub fn with_n(&self, n_points: usize) -> Self {
        EllipticSpec { n_points, ..self.clone() }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n_points as f64 + 1.0)
    }

    pub fn a(&self, x: f64) -> f64 {
        self.coeff_a.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    fn a_prime(&self, x: f64) -> f64 {
        self.coeff_a.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, c)| acc * x + k as f64 * c)
    }

    /// Interior nodes `x_j = j h`, `j = 1..=N`.
    pub fn nodes(&self) -> Vec<f64> {
        let h = self.h();
        (1..=self.n_points).map(|j| j as f64 * h).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.n_points < 2 {
            return bad(format!("need at least 2 interior points, got {}", self.n_points));
        }
        if self.coeff_a.is_empty() || self.coeff_a.iter().any(|c| !c.is_finite()) {
            return bad("a(x) needs finite polynomial coefficients".into());
        }
        if !(self.coeff_c >= 0.0 && self.coeff_c.is_finite()) {
            return bad(format!("c must be >= 0, got {}", self.coeff_c));
        }
        let h = self.h();
        let midpoints = (0..=self.n_points).map(|j| (j as f64 + 0.5) * h);
        let a0 = midpoints.chain(self.nodes()).map(|x| self.a(x)).fold(f64::INFINITY, f64::min);
        if a0.is_nan() || a0 <= 0.0 {
            return bad(format!("a(x) must be positive on the grid, min {a0}"));
        }
        Ok(())
    }
}

/// `(T_h, A_h)`. Row `j` of `T_h` is `(−a_{j−½}, a_{j−½}+a_{j+½}, −a_{j+½})/h² + c e_j`.
pub fn assemble_fd(spec: &EllipticSpec) -> Result<(ComplexMatrix, ComplexMatrix)> {
    spec.validate()?;
    let (n, h) = (spec.n_points, spec.h());
    let half: Vec<f64> = (0..=n).map(|j| spec.a((j as f64 + 0.5) * h)).collect();
    let ih2 = 1.0 / (h * h);
    let t = ComplexMatrix::from_fn(n, n, |i, j| {
        let v = if i == j {
            (half[i] + half[i + 1]) * ih2 + spec.coeff_c
        } else if j == i + 1 {
            -half[i + 1] * ih2
        } else if i == j + 1 {
            -half[i] * ih2
        } else {
            0.0
        };
        C64::new(v, 0.0)
    });
    let a_h = ComplexMatrix::diag_real(&spec.nodes().iter().map(|&x| spec.a(x)).collect::<Vec<_>>());
    Ok((t, a_h))
}

fn inverse(m: &ComplexMatrix, err: Error) -> Result<ComplexMatrix> {
    let inv = m.as_dmatrix().clone().try_inverse().ok_or_else(|| err.clone())?;
    let inv = ComplexMatrix::from_dmatrix(inv).map_err(|_| err.clone())?;
    let residual = max_entry(&(m * &inv - ComplexMatrix::identity(m.rows())));
    if residual > 1e-6 {
        return Err(err);
    }
    Ok(inv)
}

fn max_entry(m: &ComplexMatrix) -> f64 {
    m.as_dmatrix().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Context of `A_h` together with `T_h` and `T_h⁻¹`.
pub struct Discretization {
    pub spec: EllipticSpec,
    pub t: ComplexMatrix,
    pub a_h: ComplexMatrix,
    pub t_inv: ComplexMatrix,
    pub ctx: SemiInnerContext,
}

impl Discretization {
    pub fn new(spec: &EllipticSpec) -> Result<Self> {
        let (t, a_h) = assemble_fd(spec)?;
        let t_inv = inverse(&t, Error::SingularOperator)?;
        let ctx = make_context(&a_h, DEFAULT_RANK_TOL)?;
        Ok(Discretization { spec: spec.clone(), t, a_h, t_inv, ctx })
    }
}

/// Samples drawn for the stability check.
pub const STABILITY_SAMPLES: usize = 100;

/// Stability of the discrete solve in the `A_h` geometry.
///
/// `lhs`/`rhs` compare `w` of the anti-diagonal embedding `[[0, T⁻¹], [(T♯)⁻¹, 0]]`
/// with `½(‖T⁻¹‖ + ‖(T♯)⁻¹‖)`. Over random `f`, `‖T⁻¹f‖ ≤ ‖T⁻¹‖‖f‖` is recorded
/// as `norm_bound_holds`; the same ratio against `w(T⁻¹)` is `radius_bound_holds`,
/// which is informational only since the radius can undercut the norm.
pub fn stability_report(spec: &EllipticSpec, tol: f64, seed: u64) -> Result<BoundReport> {
    let d = Discretization::new(spec)?;
    let ctx = &d.ctx;
    let inv_sharp = a_adjoint(ctx, &d.t_inv)?;
    let norm_inv = op_seminorm(ctx, &d.t_inv)?;
    let norm_inv_sharp = op_seminorm(ctx, &inv_sharp)?;
    let w_inv = a_numerical_radius_bracket(ctx, &d.t_inv, tol)?;
    let w_inv_sampled = a_numerical_radius_lower(ctx, &d.t_inv, 10_000, seed)?;
    let big = dsum_context(ctx, 2)?;
    let embed = a_numerical_radius_bracket(&big, &antidiag(&d.t_inv, &inv_sharp)?, tol)?;
    let refined = optimize_refined_alpha_bound(ctx, &d.t_inv, &inv_sharp)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_ratio = 0.0f64;
    for _ in 0..STABILITY_SAMPLES {
        let f = gaussian(&mut rng, spec.n_points, 1);
        let u = &d.t_inv * &f;
        max_ratio = max_ratio.max(vec_seminorm(ctx, &u)? / vec_seminorm(ctx, &f)?);
    }
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let slack_tol = 1e-12 * norm_inv.max(1.0);
    let inter = [
        ("h", spec.h()),
        ("norm_inv", norm_inv),
        ("norm_inv_sharp", norm_inv_sharp),
        ("w_inv", w_inv.upper),
        ("w_inv_lower", w_inv.lower),
        ("w_inv_sampled", w_inv_sampled),
        ("refined_inv_pair_bound", refined.bound),
        ("refined_lambda", refined.lam_star),
        ("embedding_radius_upper", embed.upper),
        ("sampled_max_ratio", max_ratio),
        ("norm_bound_holds", flag(max_ratio <= norm_inv + slack_tol)),
        ("radius_bound_holds", flag(max_ratio <= w_inv.upper + slack_tol)),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    Ok(BoundReport::new("pde_stability", embed.lower, 0.5 * (norm_inv + norm_inv_sharp), inter, true, Default::default()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreconditionerKind {
    Jacobi,
    Identity,
}

impl std::str::FromStr for PreconditionerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jacobi" => Ok(PreconditionerKind::Jacobi),
            "identity" => Ok(PreconditionerKind::Identity),
            other => Err(Error::InvalidSpec(format!("unknown preconditioner `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreconditionerReport {
    pub kind: Option<PreconditionerKind>,
    /// `w_{A_h}(I − P⁻¹T_h)`, certified upper end.
    pub rho: f64,
    pub rho_lower: f64,
    /// `‖I − P⁻¹T_h‖_{A_h}`: the per-step contraction that is actually guaranteed.
    pub step_norm: f64,
    /// `‖e⁽ᵏ⁾‖/‖e⁽⁰⁾‖` for `k = 0..=iterations`.
    pub error_ratios: Vec<f64>,
    pub monotone: bool,
    /// `ρ < 1`; only then is `ρᵏ` compared with the observed ratios.
    pub contraction_claimed: bool,
    /// Steps `k` with ratio above `ρᵏ` (only populated when `ρ < 1`).
    pub bound_exceeded_at: Vec<usize>,
    pub notes: Vec<String>,
}

/// Richardson iteration `e ← (I − P⁻¹T) e` measured in the `A`-seminorm.
pub fn richardson_report(
    ctx: &SemiInnerContext,
    t: &ComplexMatrix,
    p: &ComplexMatrix,
    iterations: usize,
    seed: u64,
) -> Result<PreconditionerReport> {
    let n = t.rows();
    let m = ComplexMatrix::identity(n) - inverse(p, Error::SingularPreconditioner)? * t;
    let tol = 1e-10 * op_seminorm(ctx, &m)?.max(1.0);
    let rho = a_numerical_radius_bracket(ctx, &m, tol)?;
    let step_norm = op_seminorm(ctx, &m)?;

    let mut e = gaussian(&mut ChaCha8Rng::seed_from_u64(seed), n, 1);
    let e0 = vec_seminorm(ctx, &e)?;
    let mut error_ratios = vec![1.0];
    for _ in 0..iterations {
        e = &m * &e;
        error_ratios.push(vec_seminorm(ctx, &e)? / e0);
    }
    let floor = 1e-13;
    let monotone = error_ratios.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) || w[1] < floor);
    let contraction_claimed = rho.upper < 1.0;
    let mut notes = Vec::new();
    let mut bound_exceeded_at = Vec::new();
    if contraction_claimed {
        for (k, r) in error_ratios.iter().enumerate() {
            if *r > rho.upper.powi(k as i32) * (1.0 + 1e-9) + floor {
                bound_exceeded_at.push(k);
            }
        }
        if !bound_exceeded_at.is_empty() {
            notes.push(format!("observed error exceeds rho^k at {} step(s)", bound_exceeded_at.len()));
        }
        if !monotone {
            notes.push("error is not monotone although rho < 1".into());
        }
    } else {
        notes.push(format!("rho = {:.6} >= 1: no contraction claimed", rho.upper));
    }
    Ok(PreconditionerReport {
        kind: None,
        rho: rho.upper,
        rho_lower: rho.lower,
        step_norm,
        error_ratios,
        monotone,
        contraction_claimed,
        bound_exceeded_at,
        notes,
    })
}

pub fn preconditioner_report(
    spec: &EllipticSpec,
    kind: PreconditionerKind,
    iterations: usize,
    seed: u64,
) -> Result<PreconditionerReport> {
    let d = Discretization::new(spec)?;
    let p = match kind {
        PreconditionerKind::Jacobi => ComplexMatrix::from_fn(d.t.rows(), d.t.cols(), |i, j| if i == j { d.t[(i, i)] } else { C64::new(0.0, 0.0) }),
        PreconditionerKind::Identity => ComplexMatrix::identity(d.t.rows()),
    };
    let mut report = richardson_report(&d.ctx, &d.t, &p, iterations, seed)?;
    report.kind = Some(kind);
    Ok(report)
}

/// One row of the `h`-refinement study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub h: f64,
    /// `‖T_h⁻¹‖_{A_h}`.
    pub norm: f64,
    /// `w_{A_h}(T_h⁻¹)`.
    pub radius: f64,
    /// Refined pair bound `inf_λ ½(‖T_h⁻¹‖^{2λ} + ‖(T_h♯)⁻¹‖^{2(1−λ)})`.
    pub bound: f64,
    /// `‖T_h u_h − f_h‖_∞` for the manufactured solution `u = sin(πx)`.
    #[serde(skip)]
    pub consistency_error: f64,
    /// `log₂` ratio of consecutive errors, rescaled by the `h` ratio; empty on the first row.
    pub observed_order: Option<f64>,
}

/// `f = −(a u′)′ + c u` for `u = sin(πx)`.
fn manufactured_rhs(spec: &EllipticSpec, x: f64) -> f64 {
    let (s, c) = (PI * x).sin_cos();
    -spec.a_prime(x) * PI * c + spec.a(x) * PI * PI * s + spec.coeff_c * s
}

fn convergence_row(spec: &EllipticSpec, tol: f64) -> Result<ConvergenceRow> {
    let d = Discretization::new(spec)?;
    let nodes = spec.nodes();
    let u = ComplexMatrix::from_fn(nodes.len(), 1, |i, _| C64::new((PI * nodes[i]).sin(), 0.0));
    let f = ComplexMatrix::from_fn(nodes.len(), 1, |i, _| C64::new(manufactured_rhs(spec, nodes[i]), 0.0));
    let consistency_error = max_entry(&(&d.t * &u - f));
    let norm = op_seminorm(&d.ctx, &d.t_inv)?;
    let radius = a_numerical_radius_bracket(&d.ctx, &d.t_inv, tol)?.upper;
    let bound = optimize_refined_alpha_bound(&d.ctx, &d.t_inv, &a_adjoint(&d.ctx, &d.t_inv)?)?.bound;
    Ok(ConvergenceRow { n: spec.n_points, h: spec.h(), norm, radius, bound, consistency_error, observed_order: None })
}

/// Evaluates each grid in parallel and fills in observed orders between consecutive rows.
pub fn convergence_sweep(spec: &EllipticSpec, ns: &[usize], tol: f64) -> Result<Vec<ConvergenceRow>> {
    let mut rows = ns.par_iter().map(|&n| convergence_row(&spec.with_n(n), tol)).collect::<Result<Vec<_>>>()?;
    for k in 1..rows.len() {
        let (prev, cur) = (&rows[k - 1], &rows[k]);
        let order = (prev.consistency_error / cur.consistency_error).ln() / (prev.h / cur.h).ln();
        rows[k].observed_order = Some(order);
    }
    Ok(rows)
}

/// CSV with columns `N,h,norm,radius,bound,observed_order`.
pub fn write_convergence_csv<W: Write>(rows: &[ConvergenceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Parse(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

/// Smallest eigenvalue of the symmetric `T_h`.
pub fn min_eigenvalue(t: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(t)?.eigenvalues[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semihilbert::{identity_context, is_a_selfadjoint};

    #[test]
    fn laplacian_stencil() {
        let (t, a) = assemble_fd(&EllipticSpec::laplacian(3)).unwrap();
        let h2 = 1.0 / 16.0;
        let expect = ComplexMatrix::real(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]]).scale(1.0 / h2);
        assert!(t.max_abs_diff(&expect) < 1e-12);
        assert_eq!(a, ComplexMatrix::identity(3));
    }

    #[test]
    fn laplacian_spectrum() {
        let n = 15;
        let spec = EllipticSpec::laplacian(n);
        let (t, _) = assemble_fd(&spec).unwrap();
        let h = spec.h();
        let eig = hermitian_eig(&t.scale(h * h)).unwrap().eigenvalues;
        for (k, lam) in eig.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((lam - exact).abs() < 1e-10, "k={k}: {lam} vs {exact}");
        }
    }

    #[test]
    fn default_operator_is_spd_and_exactly_symmetric() {
        let (t, a) = assemble_fd(&EllipticSpec::default().with_n(8)).unwrap();
        assert_eq!(t, t.adjoint());
        assert!(min_eigenvalue(&t).unwrap() > 0.0);
        assert!(min_eigenvalue(&a).unwrap() > 0.0);
        let ctx = make_context(&a, DEFAULT_RANK_TOL).unwrap();
        assert!(!is_a_selfadjoint(&ctx, &t).unwrap());
    }

    #[test]
    fn invalid_specs() {
        for spec in [
            EllipticSpec { n_points: 1, ..Default::default() },
            EllipticSpec { coeff_a: vec![-1.0], ..Default::default() },
            EllipticSpec { coeff_a: vec![0.1, -1.0], ..Default::default() },
            EllipticSpec { coeff_c: -1.0, ..Default::default() },
            EllipticSpec { coeff_a: vec![], ..Default::default() },
        ] {
            assert!(matches!(assemble_fd(&spec), Err(Error::InvalidSpec(_))), "{spec:?}");
        }
    }

    #[test]
    fn symmetric_inverse_norm_is_reciprocal_eigenvalue() {
        let spec = EllipticSpec::laplacian(3);
        let d = Discretization::new(&spec).unwrap();
        let norm = op_seminorm(&d.ctx, &d.t_inv).unwrap();
        assert!((norm - 1.0 / min_eigenvalue(&d.t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn stability_default_grid() {
        let rep = stability_report(&EllipticSpec::default(), 1e-12, 1).unwrap();
        let get = |k: &str| rep.intermediate(k).unwrap();
        assert_eq!(get("norm_bound_holds"), 1.0);
        assert!(get("w_inv_sampled") <= get("w_inv") + 1e-10);
        let (w, norm) = (get("w_inv"), get("norm_inv"));
        assert!(0.5 * norm - 1e-12 <= w && w <= norm + 1e-12);
        assert!(rep.slack >= -1e-12);
    }

    #[test]
    fn exact_preconditioner_converges_in_one_step() {
        let d = Discretization::new(&EllipticSpec::default().with_n(6)).unwrap();
        let rep = richardson_report(&d.ctx, &d.t, &d.t, 3, 0).unwrap();
        assert!(rep.rho < 1e-8 && rep.error_ratios[1] < 1e-10);
        // Scaling the system by T⁻¹ and using the identity preconditioner is the same iteration.
        let scaled = &d.t_inv * &d.t;
        let rep = richardson_report(&d.ctx, &scaled, &ComplexMatrix::identity(6), 3, 0).unwrap();
        assert!(rep.rho < 1e-8);
    }

    #[test]
    fn jacobi_on_laplacian_contracts_monotonically() {
        let rep = preconditioner_report(&EllipticSpec::laplacian(8), PreconditionerKind::Jacobi, 40, 3).unwrap();
        assert!(rep.contraction_claimed && rep.monotone);
        // I − D⁻¹T = ½ tridiag(1, 0, 1), whose radius is cos(π/9).
        assert!((rep.rho - (PI / 9.0).cos()).abs() < 1e-9);
        assert!(rep.bound_exceeded_at.is_empty());
    }

    #[test]
    fn jacobi_on_variable_coefficients() {
        let rep = preconditioner_report(&EllipticSpec::default().with_n(8), PreconditionerKind::Jacobi, 60, 5).unwrap();
        assert!(rep.contraction_claimed);
        assert!(rep.monotone);
    }

    #[test]
    fn unscaled_identity_preconditioner_diverges() {
        let rep = preconditioner_report(&EllipticSpec::default().with_n(8), PreconditionerKind::Identity, 5, 0).unwrap();
        assert!(rep.rho >= 1.0 && !rep.contraction_claimed);
        assert!(rep.notes[0].contains("no contraction"));
    }

    #[test]
    fn singular_preconditioner() {
        let ctx = identity_context(2);
        let err = richardson_report(&ctx, &ComplexMatrix::identity(2), &ComplexMatrix::zeros(2, 2), 1, 0);
        assert_eq!(err.unwrap_err(), Error::SingularPreconditioner);
    }

    #[test]
    fn second_order_consistency() {
        for spec in [EllipticSpec::laplacian(15), EllipticSpec::default().with_n(15)] {
            let rows = convergence_sweep(&spec, &[15, 31, 63], 1e-10).unwrap();
            for row in &rows[1..] {
                let p = row.observed_order.unwrap();
                assert!((1.7..=2.3).contains(&p), "{p}");
            }
        }
    }

    #[test]
    fn csv_columns() {
        let rows = convergence_sweep(&EllipticSpec::laplacian(3), &[3, 7], 1e-10).unwrap();
        let mut buf = Vec::new();
        write_convergence_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "N,h,norm,radius,bound,observed_order");
        assert_eq!(text.lines().count(), 3);
    }
}
