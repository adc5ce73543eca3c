//! The A-calculus: semi-inner product, seminorms, A-adjoint, A-absolute value
//! and A-numerical radius relative to a positive operator `A`.
//!
//! Operator quantities are computed through the reduction
//! `T̃ = P A^{1/2} T (A^{1/2})† P`, which transports `T` into the ordinary
//! Hilbert geometry on `ran(A)`: `⟨Tx, x⟩_A = ⟨T̃y, y⟩` with `y = A^{1/2}x`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{
    self, hermitian_eig, numerical_radius_bracket, psd_power, require_square, spectral_norm,
    ComplexMatrix, RadiusBracket, Spectrum, C64, DEFAULT_DIM_CAP,
};

const NOT_POSITIVE_REL_TOL: f64 = 1e-9;
const PREDICATE_REL_TOL: f64 = 1e-8;
const UNIT_TOL: f64 = 1e-10;

/// A validated positive operator together with its cached factors.
#[derive(Debug, Clone)]
pub struct SemiInnerContext {
    a: ComplexMatrix,
    a_pinv: ComplexMatrix,
    a_half: ComplexMatrix,
    a_half_pinv: ComplexMatrix,
    range_proj: ComplexMatrix,
    rank: usize,
    rank_tol: f64,
}

/// Carrier of `T̃ = P A^{1/2} T (A^{1/2})† P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedOperator {
    pub tilde: ComplexMatrix,
}

impl SemiInnerContext {
    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }
    pub fn a_pinv(&self) -> &ComplexMatrix {
        &self.a_pinv
    }
    pub fn a_half(&self) -> &ComplexMatrix {
        &self.a_half
    }
    pub fn a_half_pinv(&self) -> &ComplexMatrix {
        &self.a_half_pinv
    }
    pub fn range_proj(&self) -> &ComplexMatrix {
        &self.range_proj
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }
    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub(crate) fn from_parts(
        a: ComplexMatrix,
        a_pinv: ComplexMatrix,
        a_half: ComplexMatrix,
        a_half_pinv: ComplexMatrix,
        range_proj: ComplexMatrix,
        rank: usize,
        rank_tol: f64,
    ) -> Self {
        Self { a, a_pinv, a_half, a_half_pinv, range_proj, rank, rank_tol }
    }

    fn check_op(&self, t: &ComplexMatrix) -> Result<()> {
        let n = self.dim();
        if t.shape() == (n, n) {
            Ok(())
        } else {
            Err(Error::dims(format!("{n}x{n} operator"), format!("{}x{}", t.rows(), t.cols())))
        }
    }

    fn check_vec(&self, x: &ComplexMatrix) -> Result<()> {
        let n = self.dim();
        if x.shape() == (n, 1) {
            Ok(())
        } else {
            Err(Error::dims(format!("{n}x1 vector"), format!("{}x{}", x.rows(), x.cols())))
        }
    }
}

/// Validates `A` and precomputes `A†`, `A^{1/2}`, `(A^{1/2})†` and the range projector.
pub fn make_context(a: &ComplexMatrix, rank_tol: f64) -> Result<SemiInnerContext> {
    let n = require_square(a)?;
    if n > DEFAULT_DIM_CAP {
        return Err(Error::InvalidSpec(format!("dimension {n} exceeds cap {DEFAULT_DIM_CAP}")));
    }
    if !(rank_tol > 0.0 && rank_tol.is_finite()) {
        return Err(Error::DomainViolation(format!("rank_tol must be positive, got {rank_tol}")));
    }
    let spec = hermitian_eig(a)?;
    let top = spec.max_abs();
    if let Some(&lowest) = spec.eigenvalues.first() {
        if lowest < -NOT_POSITIVE_REL_TOL * top {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
    }
    Ok(context_from_spectrum(a.hermitian_part(), &spec, rank_tol))
}

pub(crate) fn context_from_spectrum(a: ComplexMatrix, spec: &Spectrum, rank_tol: f64) -> SemiInnerContext {
    let top = spec.max_abs();
    let cut = rank_tol * top;
    let kept = |l: f64| top > 0.0 && l > cut;
    let rank = spec.eigenvalues.iter().filter(|&&l| kept(l)).count();
    SemiInnerContext {
        a_pinv: spec.map(|l| if kept(l) { 1.0 / l } else { 0.0 }),
        a_half: spec.map(|l| if kept(l) { l.sqrt() } else { 0.0 }),
        a_half_pinv: spec.map(|l| if kept(l) { 1.0 / l.sqrt() } else { 0.0 }),
        range_proj: spec.map(|l| if kept(l) { 1.0 } else { 0.0 }),
        a,
        rank,
        rank_tol,
    }
}

/// `⟨x, y⟩_A = ⟨Ax, y⟩ = y* A x`.
pub fn semi_inner(ctx: &SemiInnerContext, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<C64> {
    ctx.check_vec(x)?;
    ctx.check_vec(y)?;
    Ok((ctx.a() * x).dot(y))
}

pub fn vec_seminorm(ctx: &SemiInnerContext, x: &ComplexMatrix) -> Result<f64> {
    Ok(semi_inner(ctx, x, x)?.re.max(0.0).sqrt())
}

/// Rescales `x` to unit A-seminorm; kernel directions are rejected.
pub fn a_normalize(ctx: &SemiInnerContext, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let norm = vec_seminorm(ctx, x)?;
    let scale = ctx.a_half().as_dmatrix().norm().max(1.0) * x.frobenius_norm();
    if norm <= 1e-12 * scale || norm == 0.0 {
        return Err(Error::NotUnitVector { norm });
    }
    Ok(x.scale(1.0 / norm))
}

/// Errors unless `‖e‖_A = 1` to within `1e-10`.
pub fn require_unit(ctx: &SemiInnerContext, e: &ComplexMatrix) -> Result<f64> {
    let norm = vec_seminorm(ctx, e)?;
    if (norm - 1.0).abs() <= UNIT_TOL {
        Ok(norm)
    } else {
        Err(Error::NotUnitVector { norm })
    }
}

/// Distinguished A-adjoint `T♯ = A† T* A`.
pub fn a_adjoint(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    ctx.check_op(t)?;
    Ok(&(ctx.a_pinv() * t.adjoint()) * ctx.a())
}

pub fn reduce(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<ReducedOperator> {
    ctx.check_op(t)?;
    let p = ctx.range_proj();
    let inner = &(ctx.a_half() * t) * ctx.a_half_pinv();
    Ok(ReducedOperator { tilde: &(p * &inner) * p })
}

/// Inverse transport `(A^{1/2})† S A^{1/2}` of an operator on `ran(A)`.
pub fn pull_back(ctx: &SemiInnerContext, s: &ComplexMatrix) -> Result<ComplexMatrix> {
    ctx.check_op(s)?;
    Ok(&(ctx.a_half_pinv() * s) * ctx.a_half())
}

/// A-operator seminorm `‖T‖_A`.
pub fn op_seminorm(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<f64> {
    Ok(spectral_norm(&reduce(ctx, t)?.tilde))
}

/// Certified bracket of `w_A(T)`.
pub fn a_numerical_radius_bracket(ctx: &SemiInnerContext, t: &ComplexMatrix, tol: f64) -> Result<RadiusBracket> {
    numerical_radius_bracket(&reduce(ctx, t)?.tilde, tol)
}

/// `w_A(T)`, absolute error at most `tol`.
pub fn a_numerical_radius(ctx: &SemiInnerContext, t: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(a_numerical_radius_bracket(ctx, t, tol)?.lower)
}

/// Sampling lower bound on `w_A(T)`: `max |⟨Tx, x⟩_A|` over random `x ∈ ran(A)`
/// with `‖x‖_A = 1`, evaluated straight from the definition.
pub fn a_numerical_radius_lower(ctx: &SemiInnerContext, t: &ComplexMatrix, samples: usize, seed: u64) -> Result<f64> {
    ctx.check_op(t)?;
    if ctx.rank() == 0 {
        return Err(Error::DegenerateContext);
    }
    if samples == 0 {
        return Err(Error::DomainViolation("samples must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = ctx.dim();
    let at = ctx.a() * t;
    let mut best: f64 = 0.0;
    let mut drawn = 0;
    while drawn < samples {
        let g = ComplexMatrix::from_fn(n, 1, |_, _| {
            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        // Uniform on the A-unit sphere: x = (A^{1/2})† y, y uniform on the unit sphere of ran(A).
        let y = ctx.range_proj() * g;
        let x = ctx.a_half_pinv() * y;
        let Ok(x) = a_normalize(ctx, &x) else { continue };
        drawn += 1;
        best = best.max((&at * &x).dot(&x).norm());
    }
    Ok(best)
}

/// A-orthonormal basis `Q` (`Q* A Q = I`) of a complement of `ker A`, by
/// Gram–Schmidt on the standard basis in the A-inner product.
fn a_orthonormal_basis(ctx: &SemiInnerContext) -> ComplexMatrix {
    let n = ctx.dim();
    let a = ctx.a();
    let diag_max = (0..n).map(|i| a[(i, i)].re).fold(0.0, f64::max);
    let mut basis: Vec<ComplexMatrix> = Vec::new();
    for i in 0..n {
        let mut v = ComplexMatrix::from_fn(n, 1, |r, _| C64::new(if r == i { 1.0 } else { 0.0 }, 0.0));
        for _ in 0..2 {
            for q in &basis {
                let c = (a * &v).dot(q);
                v = &v - &q.scale_c(c);
            }
        }
        let nrm2 = (a * &v).dot(&v).re;
        if nrm2 > 1e-12 * diag_max {
            basis.push(v.scale(1.0 / nrm2.sqrt()));
        }
    }
    let mut q = ComplexMatrix::zeros(n, basis.len());
    for (j, v) in basis.iter().enumerate() {
        q.set_block(0, j, v);
    }
    q
}

/// Second oracle for `w_A(T)`, independent of `A^{1/2}` and of the θ-sweep.
///
/// Multi-start monotone ascent of `|⟨Tx, x⟩_A|` on the A-unit sphere: with
/// `φ = arg⟨Tx, x⟩_A`, the next iterate maximizes `⟨Hx, x⟩_A` for the
/// A-selfadjoint `H = (e^{-iφ}T + e^{iφ}T♯)/2`, which never decreases the
/// objective. Returns the best value found (a lower bound on `w_A(T)`).
pub fn a_numerical_radius_ascent(ctx: &SemiInnerContext, t: &ComplexMatrix, starts: usize, seed: u64) -> Result<f64> {
    ctx.check_op(t)?;
    if ctx.rank() == 0 {
        return Err(Error::DegenerateContext);
    }
    let q = a_orthonormal_basis(ctx);
    let r = q.cols();
    // In the coordinates x = Qz the problem is the classical radius of M.
    let m = &(&q.adjoint() * ctx.a()) * &(t * &q);
    let objective = |z: &ComplexMatrix| (&m * z).dot(z).norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 0.0;
    for _ in 0..starts.max(1) {
        let mut z = ComplexMatrix::from_fn(r, 1, |_, _| {
            C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
        });
        z = z.scale(1.0 / z.frobenius_norm());
        let mut value = objective(&z);
        for _ in 0..500 {
            let inner = (&m * &z).dot(&z);
            let phase = if inner.norm() > 0.0 { inner / inner.norm() } else { C64::new(1.0, 0.0) };
            let h = (&m * phase.conj()).hermitian_part();
            let spec = hermitian_eig(&h)?;
            let top = spec.eigenvectors.block(0, r - 1, r, 1);
            let next = objective(&top);
            if next <= value * (1.0 + 1e-15) {
                break;
            }
            z = top;
            value = next;
        }
        best = best.max(value);
    }
    Ok(best)
}

/// `|T|_A^p` realized as `(A^{1/2})† (T̃*T̃)^{p/2} A^{1/2}`.
pub fn a_abs_power(ctx: &SemiInnerContext, t: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let tilde = reduce(ctx, t)?.tilde;
    let gram = tilde.adjoint() * &tilde;
    pull_back(ctx, &psd_power(&gram, 0.5 * p)?)
}

/// `T^p` for an A-positive `T`, computed in the reduced picture.
pub fn a_positive_power(ctx: &SemiInnerContext, t: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    if !is_a_positive(ctx, t)? {
        return Err(Error::NotAPositive);
    }
    let tilde = reduce(ctx, t)?.tilde.hermitian_part();
    pull_back(ctx, &psd_power(&tilde, p)?)
}

fn a_times(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    ctx.check_op(t)?;
    Ok(ctx.a() * t)
}

pub fn is_a_selfadjoint(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<bool> {
    let at = a_times(ctx, t)?;
    let asym = (&at - &at.adjoint()).frobenius_norm();
    Ok(asym <= PREDICATE_REL_TOL * (1.0 + at.frobenius_norm()))
}

pub fn is_a_positive(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<bool> {
    if !is_a_selfadjoint(ctx, t)? {
        return Ok(false);
    }
    let at = a_times(ctx, t)?.hermitian_part();
    let spec = hermitian_eig(&at)?;
    let lowest = spec.eigenvalues.first().copied().unwrap_or(0.0);
    Ok(lowest >= -PREDICATE_REL_TOL * (1.0 + at.frobenius_norm()))
}

/// `‖P T (I − P)‖₂`: zero exactly when `T(ker A) ⊆ ker A`, i.e. `T` admits an A-adjoint.
pub fn b_a_defect(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<f64> {
    ctx.check_op(t)?;
    let p = ctx.range_proj();
    let q = &ComplexMatrix::identity(ctx.dim()) - p;
    Ok(spectral_norm(&(&(p * t) * &q)))
}

/// Whether `T ∈ B_A(H)` to relative tolerance `1e-8`.
pub fn in_b_a(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<bool> {
    Ok(b_a_defect(ctx, t)? <= PREDICATE_REL_TOL * (1.0 + spectral_norm(t)))
}

/// Nearest-in-structure member of `B_A(H)`: `T − P T (I − P)`.
pub fn project_b_a(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<ComplexMatrix> {
    ctx.check_op(t)?;
    let p = ctx.range_proj();
    let q = &ComplexMatrix::identity(ctx.dim()) - p;
    Ok(t - &(&(p * t) * &q))
}

/// `‖TA − AT‖_F ≤ 1e-8·(1 + ‖A‖‖T‖)`.
pub fn commutes_with_a(ctx: &SemiInnerContext, t: &ComplexMatrix) -> Result<bool> {
    ctx.check_op(t)?;
    let comm = (&(t * ctx.a()) - &(ctx.a() * t)).frobenius_norm();
    Ok(comm <= PREDICATE_REL_TOL * (1.0 + spectral_norm(ctx.a()) * spectral_norm(t)))
}

/// Identity context of dimension `n`.
pub fn identity_context(n: usize) -> SemiInnerContext {
    make_context(&ComplexMatrix::identity(n), linalg::DEFAULT_RANK_TOL).expect("identity is positive")
}
