//! Dense complex matrices and the spectral primitives everything else reduces to.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative cut-off below which singular values count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Largest dimension the toolkit accepts for a positive operator.
pub const DEFAULT_DIM_CAP: usize = 512;

const HERMITIAN_REL_TOL: f64 = 1e-8;
const PSD_CLAMP_REL_TOL: f64 = 1e-9;
// Eigenvalues this far below the top of the spectrum are rounding noise and are
// mapped to exact zeros before powering; otherwise t^p with small p would
// inflate them to O(1).
const PSD_KERNEL_REL_TOL: f64 = 1e-12;
const RADIUS_MAX_EVALUATIONS: usize = 2_000_000;

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and non-finite values.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dims(format!("{} entries", rows * cols), entries.len()));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self(m))
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Real matrix from literal rows. Panics on ragged or non-finite input.
    pub fn real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let m = DMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0));
        Self::from_dmatrix(m).expect("finite literal")
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let n = d.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(d[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub fn column(v: &[C64]) -> Self {
        Self(DMatrix::from_column_slice(v.len(), 1, v))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Block-diagonal matrix with the given square-or-rectangular blocks.
    pub fn block_diag(blocks: &[&ComplexMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.view_mut((r0, c0), (b.rows(), b.cols())).copy_from(&b.0);
            r0 += b.rows();
            c0 += b.cols();
        }
        Self(out)
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn entries_row_major(&self) -> Vec<C64> {
        (0..self.rows())
            .flat_map(|i| (0..self.cols()).map(move |j| (i, j)))
            .map(|(i, j)| self.0[(i, j)])
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn scale_c(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Sub-block with top-left corner `(r, c)` and the given shape.
    pub fn block(&self, r: usize, c: usize, rows: usize, cols: usize) -> Self {
        Self(self.0.view((r, c), (rows, cols)).into_owned())
    }

    pub fn set_block(&mut self, r: usize, c: usize, b: &ComplexMatrix) {
        self.0.view_mut((r, c), (b.rows(), b.cols())).copy_from(&b.0);
    }

    /// `⟨x, y⟩ = y* x` for column vectors.
    pub fn dot(&self, other: &Self) -> C64 {
        other.0.dotc(&self.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: f64) -> ComplexMatrix {
        self.scale(s)
    }
}

impl Mul<f64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: f64) -> ComplexMatrix {
        self.scale(s)
    }
}

impl Mul<C64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: C64) -> ComplexMatrix {
        self.scale_c(s)
    }
}

impl Mul<C64> for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, s: C64) -> ComplexMatrix {
        self.scale_c(s)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V f(Λ) V*`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors.0;
        let mut scaled = v.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let s = C64::new(f(lam), 0.0);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, l| m.max(l.abs()))
    }
}

pub(crate) fn require_square(m: &ComplexMatrix) -> Result<usize> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

fn symmetrized(m: &ComplexMatrix) -> Result<DMatrix<C64>> {
    require_square(m)?;
    let adj = m.0.adjoint();
    let asymmetry = (&m.0 - &adj).norm();
    let allowed = HERMITIAN_REL_TOL * (1.0 + m.0.norm());
    if asymmetry > allowed {
        return Err(Error::NotHermitian { asymmetry, allowed });
    }
    Ok((&m.0 + adj) * C64::new(0.5, 0.0))
}

fn iteration_budget(n: usize) -> usize {
    1000 + 200 * n
}

/// Hermitian eigen-decomposition of `(M + M*)/2`, eigenvalues ascending.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<Spectrum> {
    let h = symmetrized(m)?;
    let n = h.nrows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, iteration_budget(n))
        .ok_or(Error::ConvergenceFailure("Hermitian eigensolver"))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: ComplexMatrix(eigenvectors),
    })
}

fn svd(m: &ComplexMatrix) -> Result<SVD<C64, nalgebra::Dyn, nalgebra::Dyn>> {
    let n = m.rows().max(m.cols());
    SVD::try_new(m.0.clone(), true, true, 5.0 * f64::EPSILON, iteration_budget(n))
        .ok_or(Error::ConvergenceFailure("singular value decomposition"))
}

fn check_rank_tol(rank_tol: f64) -> Result<()> {
    if rank_tol > 0.0 && rank_tol.is_finite() {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!("rank_tol must be positive, got {rank_tol}")))
    }
}

/// Moore–Penrose pseudoinverse; singular values `≤ rank_tol·σ_max` are dropped.
pub fn pinv(m: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    check_rank_tol(rank_tol)?;
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Ok(ComplexMatrix::zeros(c, r));
    }
    let d = svd(m)?;
    let s = &d.singular_values;
    let smax = s.max();
    if smax == 0.0 {
        return Ok(ComplexMatrix::zeros(c, r));
    }
    let cut = rank_tol * smax;
    let u = d.u.as_ref().expect("u requested");
    let mut v = d.v_t.as_ref().expect("v_t requested").adjoint();
    for (j, &sj) in s.iter().enumerate() {
        let inv = C64::new(if sj > cut { 1.0 / sj } else { 0.0 }, 0.0);
        v.column_mut(j).iter_mut().for_each(|z| *z *= inv);
    }
    let p = ComplexMatrix(v * u.adjoint());
    // The bidiagonal iteration occasionally returns inconsistent factors on
    // rank-deficient complex input; fall back to the Gram route when it does.
    let defect = (&(m * &p) * m - m).frobenius_norm();
    if defect <= 1e-10 * m.frobenius_norm() {
        return Ok(p);
    }
    pinv_via_gram(m, cut)
}

fn pinv_via_gram(m: &ComplexMatrix, cut: f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(&(m.adjoint() * m).hermitian_part())?;
    let inv = spec.map(|l| if l > cut * cut { 1.0 / l } else { 0.0 });
    Ok(inv * m.adjoint())
}

/// Number of singular values above `rank_tol·σ_max`.
pub fn numerical_rank(m: &ComplexMatrix, rank_tol: f64) -> Result<usize> {
    check_rank_tol(rank_tol)?;
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    let s = svd(m)?.singular_values;
    let smax = s.max();
    Ok(s.iter().filter(|&&x| smax > 0.0 && x > rank_tol * smax).count())
}

/// Eigenvalues with the PSD clamp applied: tiny negatives and rounding-level
/// positives become exact zeros.
pub(crate) fn clamped_psd_eigenvalues(spec: &Spectrum) -> Result<Vec<f64>> {
    let top = spec.max_abs();
    let mut out = Vec::with_capacity(spec.eigenvalues.len());
    for &l in &spec.eigenvalues {
        if l < -PSD_CLAMP_REL_TOL * top {
            return Err(Error::NotPsd { eigenvalue: l });
        }
        out.push(if l <= PSD_KERNEL_REL_TOL * top { 0.0 } else { l });
    }
    Ok(out)
}

/// `M^p` for Hermitian PSD `M`, with `0^0 = 0` on the kernel.
pub fn psd_power(m: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::DomainViolation(format!("power must be >= 0, got {p}")));
    }
    let spec = hermitian_eig(m)?;
    let vals = clamped_psd_eigenvalues(&spec)?;
    let mut it = vals.into_iter();
    Ok(spec.map(|_| {
        let l = it.next().expect("one value per eigenpair");
        if l > 0.0 {
            l.powf(p)
        } else {
            0.0
        }
    }))
}

pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    psd_power(m, 0.5)
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    m.0.singular_values().max()
}

/// Certified enclosure `lower ≤ w(M) ≤ upper` of the classical numerical radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusBracket {
    /// Attained value `max|λ|(H(θ))` at the best angle found.
    pub lower: f64,
    pub upper: f64,
    pub evaluations: usize,
}

impl RadiusBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    ub: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.ub.total_cmp(&other.ub) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub.total_cmp(&other.ub)
    }
}

/// Upper bound of a function with `f'' ≥ -curv` on `[0, width]` from its endpoint values.
fn cell_upper_bound(fa: f64, fb: f64, width: f64, curv: f64) -> f64 {
    if curv <= 0.0 || width <= 0.0 {
        return fa.max(fb);
    }
    let t = (0.5 * width + (fb - fa) / (curv * width)).clamp(0.0, width);
    fa + (fb - fa) * t / width + 0.5 * curv * t * (width - t)
}

/// Numerical radius `max_θ λ_max(Re(e^{iθ}M))` bracketed to within `tol`.
///
/// `ψ(θ) = ‖cos θ·Re M − sin θ·Im M‖₂` is π-periodic and satisfies
/// `ψ'' ≥ −‖M‖₂` (support functions obey `h + h'' ≥ 0`), so each cell of a
/// θ-partition admits a rigorous parabolic upper bound. Cells are bisected
/// best-first until the global upper bound is within `tol` of the best value.
pub fn numerical_radius_bracket(m: &ComplexMatrix, tol: f64) -> Result<RadiusBracket> {
    let n = require_square(m)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::DomainViolation(format!("tol must be positive, got {tol}")));
    }
    if n == 0 {
        return Ok(RadiusBracket { lower: 0.0, upper: 0.0, evaluations: 0 });
    }
    if n == 1 {
        let v = m.0[(0, 0)].norm();
        return Ok(RadiusBracket { lower: v, upper: v, evaluations: 1 });
    }
    let curv = spectral_norm(m);
    if curv == 0.0 {
        return Ok(RadiusBracket { lower: 0.0, upper: 0.0, evaluations: 0 });
    }
    let re = (&m.0 + m.0.adjoint()) * C64::new(0.5, 0.0);
    let im = (&m.0 - m.0.adjoint()) * C64::new(0.0, -0.5);
    let psi = |theta: f64| -> f64 {
        let h = &re * C64::new(theta.cos(), 0.0) - &im * C64::new(theta.sin(), 0.0);
        let ev = h.symmetric_eigenvalues();
        ev.max().max(-ev.min())
    };
    // Guard against eigensolver rounding in the endpoint values.
    let slop = 64.0 * f64::EPSILON * curv * n as f64;
    let tol = tol.max(1e-13 * curv);

    const K0: usize = 64;
    let step = std::f64::consts::PI / K0 as f64;
    let samples: Vec<f64> = (0..K0).map(|k| psi(k as f64 * step)).collect();
    let mut evaluations = K0;
    let mut lower = samples.iter().copied().fold(0.0, f64::max);
    let mut heap = BinaryHeap::with_capacity(4 * K0);
    for k in 0..K0 {
        let (fa, fb) = (samples[k], samples[(k + 1) % K0]);
        let (a, b) = (k as f64 * step, (k + 1) as f64 * step);
        heap.push(Cell { a, b, fa, fb, ub: cell_upper_bound(fa, fb, step, curv) + slop });
    }
    loop {
        let top = *heap.peek().expect("partition is never empty");
        if top.ub <= lower + tol {
            return Ok(RadiusBracket { lower, upper: top.ub.max(lower), evaluations });
        }
        if evaluations >= RADIUS_MAX_EVALUATIONS {
            return Err(Error::ConvergenceFailure("numerical radius"));
        }
        heap.pop();
        let mid = 0.5 * (top.a + top.b);
        let fm = psi(mid);
        evaluations += 1;
        lower = lower.max(fm);
        let half = 0.5 * (top.b - top.a);
        heap.push(Cell { a: top.a, b: mid, fa: top.fa, fb: fm, ub: cell_upper_bound(top.fa, fm, half, curv) + slop });
        heap.push(Cell { a: mid, b: top.b, fa: fm, fb: top.fb, ub: cell_upper_bound(fm, top.fb, half, curv) + slop });
    }
}

/// Classical numerical radius `w(M)`, absolute error at most `tol`.
pub fn classical_numerical_radius(m: &ComplexMatrix, tol: f64) -> Result<f64> {
    Ok(numerical_radius_bracket(m, tol)?.lower)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
    }

    pub fn random_psd(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let g = gaussian(rng, n, n);
        g.adjoint() * g
    }

    pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        gaussian(rng, n, n).hermitian_part()
    }

    pub fn unit_vector(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
        let v = gaussian(rng, n, 1);
        let s = 1.0 / v.frobenius_norm();
        v.scale(s)
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn eig_of_identity_and_swap() {
        let s = hermitian_eig(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
        let s = hermitian_eig(&ComplexMatrix::real(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eig_reconstructs_random_hermitian() {
        let mut r = rng(11);
        for _ in 0..20 {
            let m = random_hermitian(&mut r, 5);
            let s = hermitian_eig(&m).unwrap();
            let rebuilt = s.map(|l| l);
            assert!((&rebuilt - &m).frobenius_norm() <= 1e-9 * (1.0 + m.frobenius_norm()));
            let v = &s.eigenvectors;
            let gram = v.adjoint() * v;
            assert!((&gram - &ComplexMatrix::identity(5)).frobenius_norm() < 1e-10);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn eig_rejects_bad_input() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eig(&rect), Err(Error::NonSquare { .. })));
        let skew = ComplexMatrix::real(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eig(&skew), Err(Error::NotHermitian { .. })));
        // Rounding-level asymmetry is symmetrized away.
        let nearly = ComplexMatrix::real(&[&[1.0, 1e-12], &[0.0, 1.0]]);
        assert!(hermitian_eig(&nearly).is_ok());
    }

    #[test]
    fn pinv_examples() {
        let p = pinv(&ComplexMatrix::diag_real(&[2.0, 0.0]), DEFAULT_RANK_TOL).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::diag_real(&[0.5, 0.0])) < 1e-15);
        let j = ComplexMatrix::real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let p = pinv(&j, DEFAULT_RANK_TOL).unwrap();
        assert!(p.max_abs_diff(&j.scale(0.25)) < 1e-15);
        assert!(pinv(&j, 0.0).is_err());
    }

    fn penrose_residual(m: &ComplexMatrix, p: &ComplexMatrix) -> f64 {
        let scale = 1.0 + m.frobenius_norm() + p.frobenius_norm();
        let r1 = (&(m * p) * m - m).frobenius_norm();
        let r2 = (&(p * m) * p - p).frobenius_norm();
        let mp = m * p;
        let pm = p * m;
        let r3 = (&mp - &mp.adjoint()).frobenius_norm();
        let r4 = (&pm - &pm.adjoint()).frobenius_norm();
        r1.max(r2).max(r3).max(r4) / scale
    }

    #[test]
    fn pinv_penrose_identities_rank_two() {
        let mut r = rng(3);
        for _ in 0..20 {
            let m = gaussian(&mut r, 4, 2) * gaussian(&mut r, 2, 4);
            let p = pinv(&m, DEFAULT_RANK_TOL).unwrap();
            assert!(penrose_residual(&m, &p) <= 1e-9);
            assert_eq!(numerical_rank(&m, DEFAULT_RANK_TOL).unwrap(), 2);
        }
    }

    #[test]
    fn pinv_of_rectangular_and_zero() {
        let mut r = rng(4);
        let m = gaussian(&mut r, 5, 3);
        let p = pinv(&m, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p.shape(), (3, 5));
        assert!(penrose_residual(&m, &p) <= 1e-9);
        let z = pinv(&ComplexMatrix::zeros(2, 3), DEFAULT_RANK_TOL).unwrap();
        assert_eq!(z, ComplexMatrix::zeros(3, 2));
    }

    #[test]
    fn sqrt_examples() {
        let s = psd_sqrt(&ComplexMatrix::diag_real(&[4.0, 9.0])).unwrap();
        assert!(s.max_abs_diff(&ComplexMatrix::diag_real(&[2.0, 3.0])) < 1e-14);
        let j = ComplexMatrix::real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let s = psd_sqrt(&j).unwrap();
        assert!(s.max_abs_diff(&j.scale(std::f64::consts::FRAC_1_SQRT_2)) < 1e-14);
        let neg = ComplexMatrix::diag_real(&[1.0, -0.1]);
        assert!(matches!(psd_sqrt(&neg), Err(Error::NotPsd { .. })));
        // Rounding-level negatives are clamped.
        assert!(psd_sqrt(&ComplexMatrix::diag_real(&[1.0, -1e-12])).is_ok());
    }

    #[test]
    fn sqrt_squares_back() {
        let mut r = rng(5);
        for _ in 0..20 {
            let m = random_psd(&mut r, 6);
            let s = psd_sqrt(&m).unwrap();
            assert!((&(&s * &s) - &m).frobenius_norm() <= 1e-8 * (1.0 + m.frobenius_norm()));
            assert!(psd_power(&m, 0.5).unwrap().max_abs_diff(&s) <= 1e-9);
        }
    }

    #[test]
    fn power_identities() {
        let mut r = rng(6);
        for _ in 0..20 {
            let m = random_psd(&mut r, 4);
            assert!(psd_power(&m, 1.0).unwrap().max_abs_diff(&m) <= 1e-10 * (1.0 + m.frobenius_norm()));
            let lhs = psd_power(&psd_power(&m, 0.3).unwrap(), 2.0).unwrap();
            let rhs = psd_power(&m, 0.6).unwrap();
            assert!((&lhs - &rhs).frobenius_norm() <= 1e-8 * (1.0 + rhs.frobenius_norm()));
        }
    }

    #[test]
    fn zeroth_power_is_support_projector() {
        let m = ComplexMatrix::real(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let p0 = psd_power(&m, 0.0).unwrap();
        assert!(p0.max_abs_diff(&m.scale(0.5)) < 1e-14);
        assert_eq!(psd_power(&ComplexMatrix::zeros(3, 3), 0.0).unwrap(), ComplexMatrix::zeros(3, 3));
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&ComplexMatrix::identity(3)) - 1.0).abs() < 1e-15);
        let n = ComplexMatrix::real(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((spectral_norm(&n) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn spectral_norm_matches_power_iteration() {
        let mut r = rng(7);
        for _ in 0..10 {
            let m = gaussian(&mut r, 5, 4);
            let g = m.adjoint() * &m;
            let mut v = unit_vector(&mut r, 4);
            let mut est = 0.0;
            for _ in 0..5000 {
                let w = &g * &v;
                est = w.frobenius_norm();
                v = w.scale(1.0 / est);
            }
            assert!((spectral_norm(&m) - est.sqrt()).abs() < 1e-8);
        }
    }

    #[test]
    fn radius_examples() {
        let tol = 1e-10;
        let b = numerical_radius_bracket(&ComplexMatrix::identity(2), tol).unwrap();
        assert!((b.lower - 1.0).abs() <= tol && (b.upper - 1.0).abs() <= tol);
        let n = ComplexMatrix::real(&[&[0.0, 2.0], &[0.0, 0.0]]);
        let w = classical_numerical_radius(&n, tol).unwrap();
        assert!((w - 1.0).abs() <= tol);
        let rot = ComplexMatrix::from_row_slice(2, 2, &[c(0.0), c(-1.0), c(1.0), c(0.0)]).unwrap();
        assert!((classical_numerical_radius(&rot, tol).unwrap() - 1.0).abs() <= tol);
    }

    #[test]
    fn radius_of_hermitian_is_spectral_radius() {
        let mut r = rng(8);
        for _ in 0..20 {
            let h = random_hermitian(&mut r, 4);
            let rho = hermitian_eig(&h).unwrap().max_abs();
            let w = classical_numerical_radius(&h, 1e-10).unwrap();
            assert!((w - rho).abs() <= 1e-10);
        }
    }

    #[test]
    fn radius_dominates_sampling_oracle() {
        let mut r = rng(9);
        for _ in 0..5 {
            let m = gaussian(&mut r, 4, 4);
            let tol = 1e-8;
            let w = classical_numerical_radius(&m, tol).unwrap();
            let mut best: f64 = 0.0;
            for _ in 0..100_000 {
                let x = unit_vector(&mut r, 4);
                best = best.max((&m * &x).dot(&x).norm());
            }
            assert!(w >= best - tol);
            assert!(w <= best + 0.05 * spectral_norm(&m));
        }
    }

    #[test]
    fn radius_bracket_is_tight() {
        let mut r = rng(10);
        let m = gaussian(&mut r, 6, 6).scale(10.0);
        let b = numerical_radius_bracket(&m, 1e-9).unwrap();
        assert!(b.width() <= 1e-9 + 1e-12);
        assert!(matches!(
            numerical_radius_bracket(&m, 0.0),
            Err(Error::DomainViolation(_))
        ));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n * n).prop_map(move |v| {
            let e: Vec<C64> = v.into_iter().map(|(a, b)| C64::new(a, b)).collect();
            ComplexMatrix::from_row_slice(n, n, &e).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn radius_between_half_norm_and_norm(m in (2usize..5).prop_flat_map(arb_matrix)) {
            let tol = 1e-9;
            let b = numerical_radius_bracket(&m, tol).unwrap();
            let nrm = spectral_norm(&m);
            prop_assert!(b.upper >= 0.5 * nrm - tol);
            prop_assert!(b.lower <= nrm + tol);
            prop_assert!(b.upper - b.lower <= tol * (1.0 + 1e-9));
        }

        #[test]
        fn pinv_is_an_involution(m in (2usize..5).prop_flat_map(arb_matrix)) {
            let s = m.as_dmatrix().singular_values();
            prop_assume!(s.min() > 1e-2 * s.max());
            let back = pinv(&pinv(&m, DEFAULT_RANK_TOL).unwrap(), DEFAULT_RANK_TOL).unwrap();
            prop_assert!(back.max_abs_diff(&m) <= 1e-8 * (1.0 + m.frobenius_norm()));
        }

        #[test]
        fn sqrt_of_gram_squares_back(g in (2usize..5).prop_flat_map(arb_matrix)) {
            let m = g.adjoint() * &g;
            let s = psd_sqrt(&m).unwrap();
            prop_assert!((&(&s * &s) - &m).frobenius_norm() <= 1e-8 * (1.0 + m.frobenius_norm()));
        }
    }
}
