//! Fixtures shared by the benchmarks.

use semirad_core::fuzz::{gen_context, gen_operator, AKind, GenSpec, TKind};
use semirad_core::{ComplexMatrix, SemiInnerContext};

/// Seeded `(A, T)` pair with a rank-deficient `A` of rank `n − 1`.
pub fn fixture(n: usize, seed: u64) -> (SemiInnerContext, ComplexMatrix) {
    let a_kind = if n > 1 { AKind::RankDeficient { rank: n - 1 } } else { AKind::Identity };
    let spec = GenSpec { dim: n, a_kind, t_kind: TKind::Dense, scale: 1.0, seed };
    let ctx = gen_context(&spec).expect("valid fixture spec");
    let t = gen_operator(&ctx, &spec).expect("valid fixture spec");
    (ctx, t)
}
