//! Direct-sum contexts `𝔸 = diag(A, …, A)` and 2×2 operator matrices.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::semihilbert::SemiInnerContext;

/// A 2×2 operator matrix with `n×n` blocks.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSpec {
    /// `[[0, X], [Y, 0]]`
    AntiDiag { x: ComplexMatrix, y: ComplexMatrix },
    /// `[[X, 0], [0, Y]]`
    Diag { x: ComplexMatrix, y: ComplexMatrix },
    /// `[[F, X], [Y, K]]`
    Full { f: ComplexMatrix, x: ComplexMatrix, y: ComplexMatrix, k: ComplexMatrix },
    /// `[[X, Y], [Y, X]]`
    Symmetric { x: ComplexMatrix, y: ComplexMatrix },
}

impl BlockSpec {
    fn blocks(&self) -> Vec<&ComplexMatrix> {
        match self {
            BlockSpec::AntiDiag { x, y } | BlockSpec::Diag { x, y } | BlockSpec::Symmetric { x, y } => vec![x, y],
            BlockSpec::Full { f, x, y, k } => vec![f, x, y, k],
        }
    }

    /// Common block dimension `n`.
    pub fn block_dim(&self) -> Result<usize> {
        let blocks = self.blocks();
        let n = blocks[0].rows();
        for b in blocks {
            if b.shape() != (n, n) {
                return Err(Error::dims(format!("{n}x{n} block"), format!("{}x{}", b.rows(), b.cols())));
            }
        }
        Ok(n)
    }
}

/// The `2n×2n` matrix described by `spec`.
pub fn assemble(spec: &BlockSpec) -> Result<ComplexMatrix> {
    let n = spec.block_dim()?;
    let mut out = ComplexMatrix::zeros(2 * n, 2 * n);
    match spec {
        BlockSpec::AntiDiag { x, y } => {
            out.set_block(0, n, x);
            out.set_block(n, 0, y);
        }
        BlockSpec::Diag { x, y } => {
            out.set_block(0, 0, x);
            out.set_block(n, n, y);
        }
        BlockSpec::Full { f, x, y, k } => {
            out.set_block(0, 0, f);
            out.set_block(0, n, x);
            out.set_block(n, 0, y);
            out.set_block(n, n, k);
        }
        BlockSpec::Symmetric { x, y } => {
            out.set_block(0, 0, x);
            out.set_block(0, n, y);
            out.set_block(n, 0, y);
            out.set_block(n, n, x);
        }
    }
    Ok(out)
}

pub fn antidiag(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    assemble(&BlockSpec::AntiDiag { x: x.clone(), y: y.clone() })
}

pub fn diag(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    assemble(&BlockSpec::Diag { x: x.clone(), y: y.clone() })
}

/// Context for the `k`-fold direct sum; every cached factor is block-diagonal.
pub fn dsum_context(ctx: &SemiInnerContext, k: usize) -> Result<SemiInnerContext> {
    if k == 0 {
        return Err(Error::InvalidSpec("direct sum needs k >= 1".into()));
    }
    let rep = |m: &ComplexMatrix| ComplexMatrix::block_diag(&vec![m; k]);
    Ok(SemiInnerContext::from_parts(
        rep(ctx.a()),
        rep(ctx.a_pinv()),
        rep(ctx.a_half()),
        rep(ctx.a_half_pinv()),
        rep(ctx.range_proj()),
        k * ctx.rank(),
        ctx.rank_tol(),
    ))
}
