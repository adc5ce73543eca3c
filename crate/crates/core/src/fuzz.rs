//! Random instances that honour each inequality's hypotheses, and campaigns over them.
//!
//! Every trial draws from its own ChaCha stream keyed by `(seed, id, trial)`, so
//! the parallel campaign is bit-identical to a serial one.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::{lookup, BoundParams, BoundReport, Family, Instance, Operands, Verdict};
use crate::linalg::{hermitian_eig, spectral_norm, ComplexMatrix, C64, DEFAULT_RANK_TOL};
use crate::semihilbert::{a_normalize, make_context, project_b_a, SemiInnerContext};

/// Largest campaign dimension; the block ids double it.
pub const MAX_FUZZ_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AKind {
    Identity,
    Diagonal,
    DensePsd,
    RankDeficient { rank: usize },
    /// Campaign-only: each trial picks a kind, a dimension in `2..=dim` and, for
    /// rank-deficient draws, a rank in `1..dim`.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TKind {
    Dense,
    ACommuting,
    ASelfadjoint,
    APositive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub dim: usize,
    pub a_kind: AKind,
    pub t_kind: TKind,
    pub scale: f64,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec { dim: 4, a_kind: AKind::Mixed, t_kind: TKind::Dense, scale: 1.0, seed: 0 }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.dim == 0 || self.dim > MAX_FUZZ_DIM {
            return bad(format!("dim must lie in 1..={MAX_FUZZ_DIM}, got {}", self.dim));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return bad(format!("scale must be positive and finite, got {}", self.scale));
        }
        match self.a_kind {
            AKind::RankDeficient { rank } if rank == 0 || rank > self.dim => {
                bad(format!("rank must lie in 1..={}, got {rank}", self.dim))
            }
            AKind::Mixed if self.dim < 2 => bad("mixed campaigns need dim >= 2".into()),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for AKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AKind::Identity => f.write_str("identity"),
            AKind::Diagonal => f.write_str("diagonal"),
            AKind::DensePsd => f.write_str("dense_psd"),
            AKind::RankDeficient { rank } => write!(f, "rank_deficient:{rank}"),
            AKind::Mixed => f.write_str("mixed"),
        }
    }
}

impl FromStr for AKind {
    type Err = Error;

    /// `identity`, `diagonal`, `dense_psd`, `mixed`, `rank_deficient:K` or `rank_deficient(K)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "identity" => return Ok(AKind::Identity),
            "diagonal" => return Ok(AKind::Diagonal),
            "dense_psd" => return Ok(AKind::DensePsd),
            "mixed" => return Ok(AKind::Mixed),
            _ => {}
        }
        let rank = s
            .strip_prefix("rank_deficient")
            .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::InvalidSpec(format!("unknown A kind `{s}`")))?;
        Ok(AKind::RankDeficient { rank })
    }
}

impl fmt::Display for TKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TKind::Dense => "dense",
            TKind::ACommuting => "a_commuting",
            TKind::ASelfadjoint => "a_selfadjoint",
            TKind::APositive => "a_positive",
        })
    }
}

impl FromStr for TKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "dense" => Ok(TKind::Dense),
            "a_commuting" => Ok(TKind::ACommuting),
            "a_selfadjoint" => Ok(TKind::ASelfadjoint),
            "a_positive" => Ok(TKind::APositive),
            other => Err(Error::InvalidSpec(format!("unknown T kind `{other}`"))),
        }
    }
}

// ---- raw draws ---------------------------------------------------------------

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard complex Gaussian matrix (`E|z|² = 1`).
pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2)
}

fn psd(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = gaussian(rng, n, n);
    (g.adjoint() * g).scale(1.0 / n as f64).hermitian_part()
}

fn trial_rng(seed: u64, id: &str, trial: u64) -> ChaCha8Rng {
    // FNV-1a keeps the per-id key stable across builds and platforms.
    let key = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ key);
    rng.set_stream(trial);
    rng
}

// ---- contexts and operators ---------------------------------------------------

fn draw_a(rng: &mut impl Rng, n: usize, kind: AKind, scale: f64) -> ComplexMatrix {
    match kind {
        AKind::Identity => ComplexMatrix::identity(n),
        AKind::Diagonal => {
            let d: Vec<f64> = (0..n).map(|_| scale * rng.random_range(0.1..2.0)).collect();
            ComplexMatrix::diag_real(&d)
        }
        AKind::DensePsd => (psd(rng, n) + ComplexMatrix::identity(n).scale(1e-6)).scale(scale),
        AKind::RankDeficient { rank } => {
            let g = gaussian(rng, n, n);
            let d: Vec<f64> = (0..n).map(|i| if i < rank { rng.random_range(0.5..1.5) } else { 0.0 }).collect();
            (g.adjoint() * ComplexMatrix::diag_real(&d) * g).scale(scale / n as f64).hermitian_part()
        }
        AKind::Mixed => unreachable!("mixed kinds are resolved per trial"),
    }
}

/// Positive operator `A` described by `spec`; `Mixed` resolves through the seed like a campaign trial.
pub fn gen_context(spec: &GenSpec) -> Result<SemiInnerContext> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, kind) = resolve_kind(&mut rng, spec);
    make_context(&draw_a(&mut rng, n, kind, spec.scale), DEFAULT_RANK_TOL)
}

fn resolve_kind(rng: &mut impl Rng, spec: &GenSpec) -> (usize, AKind) {
    if spec.a_kind != AKind::Mixed {
        return (spec.dim, spec.a_kind);
    }
    let n = rng.random_range(2..=spec.dim);
    let kind = match rng.random_range(0..4) {
        0 => AKind::Identity,
        1 => AKind::Diagonal,
        2 => AKind::DensePsd,
        _ => AKind::RankDeficient { rank: rng.random_range(1..n) },
    };
    (n, kind)
}

/// Operator of the requested class, drawn from `rng`. Every class lies in `B_A`.
///
/// * `dense` — a generic element of `B_A`.
/// * `a_commuting` — `V(⊕ B_j)V*`, with `V` the eigenvectors of `A` and an
///   arbitrary complex block `B_j` on each eigenspace.
/// * `a_selfadjoint` / `a_positive` — `H·A/‖A‖` with `H` Hermitian / PSD (so
///   `AT = AHA/‖A‖`), plus an arbitrary part mapping into `ker A`.
pub fn draw_operator(ctx: &SemiInnerContext, kind: TKind, scale: f64, rng: &mut impl Rng) -> Result<ComplexMatrix> {
    let n = ctx.dim();
    let a = ctx.a();
    let t = match kind {
        TKind::Dense => project_b_a(ctx, &gaussian(rng, n, n))?,
        TKind::ACommuting => {
            let eig = hermitian_eig(a)?;
            let gap = 1e-8 * eig.max_abs().max(f64::MIN_POSITIVE);
            let mut block = ComplexMatrix::zeros(n, n);
            let mut start = 0;
            while start < n {
                let mut end = start + 1;
                while end < n && (eig.eigenvalues[end] - eig.eigenvalues[end - 1]).abs() <= gap {
                    end += 1;
                }
                let m = end - start;
                block.set_block(start, start, &gaussian(rng, m, m));
                start = end;
            }
            &eig.eigenvectors * block * eig.eigenvectors.adjoint()
        }
        TKind::ASelfadjoint | TKind::APositive => {
            let h = if kind == TKind::APositive { psd(rng, n) } else { gaussian(rng, n, n).hermitian_part() };
            let norm = spectral_norm(a);
            let core = if norm > 0.0 { (h * a).scale(1.0 / norm) } else { ComplexMatrix::zeros(n, n) };
            let q = ComplexMatrix::identity(n) - ctx.range_proj();
            core + &q * gaussian(rng, n, n)
        }
    };
    Ok(t.scale(scale))
}

/// One operator of class `spec.t_kind` on `ctx`, seeded by `spec.seed`.
pub fn gen_operator(ctx: &SemiInnerContext, spec: &GenSpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    if ctx.dim() != spec.dim && spec.a_kind != AKind::Mixed {
        return Err(Error::DimensionMismatch { expected: spec.dim.to_string(), got: ctx.dim().to_string() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    draw_operator(ctx, spec.t_kind, spec.scale, &mut rng)
}

// ---- instances ------------------------------------------------------------------

/// Magnitudes spread over two decades so unbalanced operands are exercised.
fn magnitude(rng: &mut impl Rng, scale: f64) -> f64 {
    scale * 10f64.powf(rng.random_range(-1.0..1.0))
}

fn draw_alpha(rng: &mut impl Rng) -> C64 {
    let modulus = 10f64.powf(rng.random_range(-0.7..0.7));
    C64::from_polar(modulus, rng.random_range(0.0..std::f64::consts::TAU))
}

fn draw_beta(rng: &mut impl Rng) -> f64 {
    match rng.random_range(0..4) {
        0 => 0.0,
        1 => rng.random_range(0.0..1.0),
        _ => rng.random_range(0.0..10.0),
    }
}

/// Hölder exponent with `pr ≥ 2` and `qr ≥ 2` (needs `r ≥ 1`; `p = 2` always qualifies).
fn draw_holder(rng: &mut impl Rng, r: f64) -> f64 {
    let s = 2.0 / r;
    let lo = s.max(1.05);
    let hi = if s > 1.0 + 1e-6 { (s / (s - 1.0)).min(10.0) } else { 10.0 };
    if hi > lo {
        let p = rng.random_range(lo..hi);
        if p * r >= 2.0 && p / (p - 1.0) * r >= 2.0 {
            return p;
        }
    }
    2.0
}

fn draw_params(rng: &mut impl Rng, family: Family) -> BoundParams {
    let r = match family {
        Family::HolderMcCarthy => rng.random_range(0.0..4.0),
        _ if rng.random_bool(0.25) => 1.0,
        _ => rng.random_range(1.0..3.0),
    };
    let lam = match rng.random_range(0..8) {
        0 => 0.0,
        1 => 1.0,
        _ => rng.random_range(0.0..1.0),
    };
    let p = BoundParams {
        alpha: draw_alpha(rng),
        beta: draw_beta(rng),
        r,
        mu: rng.random_range(0.0..1.0),
        lam,
        ..BoundParams::default()
    };
    p.with_p(draw_holder(rng, r))
}

fn draw_vector(rng: &mut impl Rng, n: usize, scale: f64) -> ComplexMatrix {
    gaussian(rng, n, 1).scale(magnitude(rng, scale))
}

/// Random instance of `id` whose hypotheses hold by construction.
pub fn gen_instance(id: &str, spec: &GenSpec, rng: &mut impl Rng) -> Result<Instance> {
    let entry = lookup(id)?;
    spec.validate()?;
    let (n, kind) = resolve_kind(rng, spec);
    let ctx = make_context(&draw_a(rng, n, kind, spec.scale), DEFAULT_RANK_TOL)?;
    let params = draw_params(rng, entry.family);
    let mut operands = Operands::new();
    let mut put = |name: &str, m: ComplexMatrix| {
        operands.insert(name.to_string(), m);
    };
    let mut scalars = Vec::new();
    match entry.family {
        Family::Scalar => {
            let count = if id == "jensen" { 2 } else { rng.random_range(1..=6) };
            scalars = (0..count).map(|_| spec.scale * (2.0 * normal(rng)).exp()).collect();
        }
        Family::Vector => {
            let a = draw_vector(rng, n, spec.scale);
            let e = a_normalize(&ctx, &gaussian(rng, n, 1))?;
            // Aligned draws probe the equality cases.
            let b = match rng.random_range(0..5) {
                0 => a.scale_c(draw_alpha(rng)),
                _ => draw_vector(rng, n, spec.scale),
            };
            let e = if rng.random_range(0..5) == 0 { a_normalize(&ctx, &a)? } else { e };
            put("a", a);
            put("b", b);
            put("e", e);
        }
        Family::MixedSchwarz => {
            let s = magnitude(rng, spec.scale);
            put("T", draw_operator(&ctx, TKind::ACommuting, s, rng)?);
            put("x", draw_vector(rng, n, spec.scale));
            put("y", draw_vector(rng, n, spec.scale));
        }
        Family::HolderMcCarthy => {
            let s = magnitude(rng, spec.scale);
            put("T", draw_operator(&ctx, TKind::APositive, s, rng)?);
            put("x", a_normalize(&ctx, &gaussian(rng, n, 1))?);
        }
        Family::Matrix | Family::Single | Family::Product => {
            for name in entry.operands {
                let s = magnitude(rng, spec.scale);
                put(name, draw_operator(&ctx, spec.t_kind, s, rng)?);
            }
        }
    }
    Ok(Instance { id: id.to_string(), a: ctx.a().clone(), rank_tol: DEFAULT_RANK_TOL, operands, scalars, params, tol: None })
}

// ---- campaigns ------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignCase {
    pub trial: u64,
    pub instance: Instance,
    pub report: BoundReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub inequality_id: String,
    pub trials: u64,
    pub violations: u64,
    /// Trials whose hypotheses failed (never counted as violations).
    pub advisory: u64,
    /// Over trials with `hypotheses_ok`; `None` if there were none.
    pub min_rel_slack: Option<f64>,
    pub mean_rel_slack: Option<f64>,
    pub sharpest_case: Option<CampaignCase>,
    pub seed: u64,
    pub violation_cases: Vec<CampaignCase>,
}

impl CampaignReport {
    /// Summarizes already-evaluated trials, in trial order.
    pub fn from_cases(id: &str, seed: u64, cases: Vec<CampaignCase>) -> Self {
        let mut report = CampaignReport {
            inequality_id: id.to_string(),
            trials: cases.len() as u64,
            violations: 0,
            advisory: 0,
            min_rel_slack: None,
            mean_rel_slack: None,
            sharpest_case: None,
            seed,
            violation_cases: Vec::new(),
        };
        let (mut sum, mut counted) = (0.0, 0u64);
        for case in cases {
            match case.report.verdict() {
                Verdict::Advisory => {
                    report.advisory += 1;
                    continue;
                }
                Verdict::Violated => {
                    report.violations += 1;
                    report.violation_cases.push(case.clone());
                }
                Verdict::Holds => {}
            }
            let s = case.report.rel_slack;
            sum += s;
            counted += 1;
            if report.min_rel_slack.is_none_or(|m| s < m || s.is_nan()) {
                report.min_rel_slack = Some(s);
                report.sharpest_case = Some(case);
            }
        }
        if counted > 0 {
            report.mean_rel_slack = Some(sum / counted as f64);
        }
        report
    }
}

/// Evaluates `trials` fresh instances per id. Trials run on the rayon pool;
/// results are folded in trial order, so the output depends only on the inputs.
pub fn run_campaign(ids: &[&str], gen: &GenSpec, trials: u64) -> Result<Vec<CampaignReport>> {
    gen.validate()?;
    if trials == 0 {
        return Err(Error::InvalidSpec("trials must be >= 1".into()));
    }
    for id in ids {
        lookup(id)?;
    }
    ids.iter()
        .map(|id| {
            let cases = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = trial_rng(gen.seed, id, trial);
                    let instance = gen_instance(id, gen, &mut rng)?;
                    let report = instance.evaluate()?;
                    Ok(CampaignCase { trial, instance, report })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(CampaignReport::from_cases(id, gen.seed, cases))
        })
        .collect()
}

/// Re-evaluates a persisted case; returns the fresh report.
pub fn replay(case: &CampaignCase) -> Result<BoundReport> {
    case.instance.evaluate()
}

/// Largest `|Δlhs|, |Δrhs|` between a persisted case and its replay.
pub fn replay_error(case: &CampaignCase) -> Result<f64> {
    let fresh = replay(case)?;
    Ok((fresh.lhs - case.report.lhs).abs().max((fresh.rhs - case.report.rhs).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::ids;
    use crate::linalg::numerical_rank;
    use crate::semihilbert::{commutes_with_a, in_b_a, is_a_positive, is_a_selfadjoint, require_unit};
    use proptest::prelude::*;

    fn spec(dim: usize, a_kind: AKind, t_kind: TKind, seed: u64) -> GenSpec {
        GenSpec { dim, a_kind, t_kind, scale: 1.0, seed }
    }

    const KINDS: [AKind; 4] = [AKind::Identity, AKind::Diagonal, AKind::DensePsd, AKind::RankDeficient { rank: 1 }];

    #[test]
    fn identity_kind_is_identity() {
        let ctx = gen_context(&spec(3, AKind::Identity, TKind::Dense, 1)).unwrap();
        assert_eq!(ctx.a(), &ComplexMatrix::identity(3));
    }

    #[test]
    fn rank_deficient_has_requested_rank() {
        let ctx = gen_context(&spec(2, AKind::RankDeficient { rank: 1 }, TKind::Dense, 7)).unwrap();
        assert_eq!(numerical_rank(ctx.a(), 1e-10).unwrap(), 1);
        for (n, k) in [(3, 2), (4, 1), (4, 3), (4, 4)] {
            let ctx = gen_context(&spec(n, AKind::RankDeficient { rank: k }, TKind::Dense, n as u64)).unwrap();
            assert_eq!(ctx.rank(), k, "n={n} k={k}");
        }
    }

    #[test]
    fn contexts_are_deterministic() {
        for kind in KINDS {
            let s = spec(4, kind, TKind::Dense, 99);
            let (a, b) = (gen_context(&s).unwrap(), gen_context(&s).unwrap());
            assert_eq!(a.a().entries_row_major(), b.a().entries_row_major());
        }
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            spec(0, AKind::Identity, TKind::Dense, 0),
            spec(2, AKind::RankDeficient { rank: 3 }, TKind::Dense, 0),
            spec(2, AKind::RankDeficient { rank: 0 }, TKind::Dense, 0),
            GenSpec { scale: f64::NAN, ..Default::default() },
            GenSpec { scale: 0.0, ..Default::default() },
        ];
        for s in bad {
            assert!(matches!(gen_context(&s), Err(Error::InvalidSpec(_))), "{s:?}");
        }
    }

    #[test]
    fn kind_strings_round_trip() {
        for k in KINDS.into_iter().chain([AKind::Mixed, AKind::RankDeficient { rank: 3 }]) {
            assert_eq!(k.to_string().parse::<AKind>().unwrap(), k);
        }
        assert_eq!("rank_deficient(2)".parse::<AKind>().unwrap(), AKind::RankDeficient { rank: 2 });
        assert!("rank_deficient".parse::<AKind>().is_err());
        for t in [TKind::Dense, TKind::ACommuting, TKind::ASelfadjoint, TKind::APositive] {
            assert_eq!(t.to_string().parse::<TKind>().unwrap(), t);
        }
        assert!("sideways".parse::<TKind>().is_err());
    }

    #[test]
    fn dense_entries_scale() {
        let s = GenSpec { scale: 1e3, ..spec(4, AKind::Identity, TKind::Dense, 5) };
        let ctx = gen_context(&s).unwrap();
        let t = gen_operator(&ctx, &s).unwrap();
        let rms = t.frobenius_norm() / 4.0;
        assert!((1e2..1e4).contains(&rms), "{rms}");
    }

    #[test]
    fn identity_commuting_operators_are_generic() {
        // Every operator commutes with I, so the class must not collapse to multiples of I.
        let s = spec(3, AKind::Identity, TKind::ACommuting, 4);
        let t = gen_operator(&gen_context(&s).unwrap(), &s).unwrap();
        assert!(t.get(0, 1).norm() > 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn operators_honour_their_class(seed in any::<u64>(), n in 2usize..5, k in 0usize..4, scale in 0.01f64..100.0) {
            let kind = if k == 3 { AKind::RankDeficient { rank: 1 + (seed as usize) % (n - 1) } } else { KINDS[k] };
            for t_kind in [TKind::Dense, TKind::ACommuting, TKind::ASelfadjoint, TKind::APositive] {
                let s = GenSpec { scale, ..spec(n, kind, t_kind, seed) };
                let ctx = gen_context(&s).unwrap();
                let t = gen_operator(&ctx, &s).unwrap();
                prop_assert!(in_b_a(&ctx, &t).unwrap());
                match t_kind {
                    TKind::ACommuting => {
                        let comm = (&t * ctx.a() - ctx.a() * &t).frobenius_norm();
                        prop_assert!(comm <= 1e-10 * (1.0 + scale * scale), "{}", comm);
                        prop_assert!(commutes_with_a(&ctx, &t).unwrap());
                    }
                    TKind::ASelfadjoint => prop_assert!(is_a_selfadjoint(&ctx, &t).unwrap()),
                    TKind::APositive => prop_assert!(is_a_positive(&ctx, &t).unwrap()),
                    TKind::Dense => {}
                }
                prop_assert_eq!(gen_operator(&ctx, &s).unwrap(), t);
            }
        }

        #[test]
        fn instances_satisfy_hypotheses(seed in any::<u64>(), dim in 2usize..5) {
            let s = GenSpec { dim, seed, ..Default::default() };
            for id in ids() {
                let inst = gen_instance(id, &s, &mut trial_rng(seed, id, 0)).unwrap();
                let ctx = make_context(&inst.a, inst.rank_tol).unwrap();
                let op = |name: &str| &inst.operands[name];
                match lookup(id).unwrap().family {
                    Family::Scalar => prop_assert!(inst.scalars.iter().all(|x| *x > 0.0)),
                    Family::Vector => prop_assert!(require_unit(&ctx, op("e")).is_ok()),
                    Family::MixedSchwarz => prop_assert!(commutes_with_a(&ctx, op("T")).unwrap()),
                    Family::HolderMcCarthy => {
                        prop_assert!(is_a_positive(&ctx, op("T")).unwrap());
                        prop_assert!(require_unit(&ctx, op("x")).is_ok());
                    }
                    _ => {
                        for m in inst.operands.values() {
                            prop_assert!(in_b_a(&ctx, m).unwrap());
                        }
                    }
                }
                let rep = inst.evaluate().unwrap();
                prop_assert!(rep.hypotheses_ok, "{}", id);
            }
        }
    }

    #[test]
    fn zero_operators_give_zero_slack() {
        let inst = Instance {
            id: "thm_2_7".into(),
            a: ComplexMatrix::identity(2),
            rank_tol: DEFAULT_RANK_TOL,
            operands: [("X", ComplexMatrix::zeros(2, 2)), ("Y", ComplexMatrix::zeros(2, 2))]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            scalars: vec![],
            params: BoundParams::default(),
            tol: None,
        };
        let report = inst.evaluate().unwrap();
        let c = CampaignReport::from_cases("thm_2_7", 0, vec![CampaignCase { trial: 0, instance: inst, report }]);
        assert_eq!((c.trials, c.violations, c.min_rel_slack), (1, 0, Some(0.0)));
    }

    #[test]
    fn campaigns_are_deterministic_and_replayable() {
        let gen = GenSpec { seed: 11, ..Default::default() };
        let ids = ["buz_general", "thm_2_10", "moby_a2", "prod2", "holder_mccarthy"];
        let a = run_campaign(&ids, &gen, 20).unwrap();
        let b = run_campaign(&ids, &gen, 20).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        for rep in &a {
            assert_eq!(rep.trials, 20);
            let case = rep.sharpest_case.as_ref().unwrap();
            let json = serde_json::to_string(case).unwrap();
            let back: CampaignCase = serde_json::from_str(&json).unwrap();
            assert!(replay_error(&back).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn violations_are_counted_and_kept() {
        let gen = GenSpec { seed: 3, ..Default::default() };
        let rep = &run_campaign(&["thm_2_7"], &gen, 200).unwrap()[0];
        assert_eq!(rep.violations as usize, rep.violation_cases.len());
        assert!(rep.violation_cases.iter().all(|c| c.report.is_violation()));
        if rep.violations > 0 {
            assert!(rep.min_rel_slack.unwrap() < -1e-8);
        }
    }

    #[test]
    fn campaign_errors() {
        let gen = GenSpec::default();
        assert_eq!(run_campaign(&["nope"], &gen, 1).unwrap_err(), Error::UnknownId("nope".into()));
        assert!(matches!(run_campaign(&["jensen"], &gen, 0), Err(Error::InvalidSpec(_))));
    }
}
