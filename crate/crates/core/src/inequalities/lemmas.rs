//! Scalar, vector and single-operator lemmas.

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::semihilbert::{
    a_abs_power, a_adjoint, a_positive_power, commutes_with_a, is_a_positive, require_unit, semi_inner, vec_seminorm,
    SemiInnerContext,
};

use super::{lookup, record, BoundParams, BoundReport, Family};

fn require_family(id: &str, family: Family) -> Result<&'static super::Entry> {
    let entry = lookup(id)?;
    if entry.family != family {
        return Err(Error::InvalidSpec(format!("`{id}` is not a {family:?} inequality")));
    }
    Ok(entry)
}

/// Scalar lemmas on positive reals. `jensen` takes `[a, b]` and returns one
/// report per link of its chain; `bohr` takes `a_1..a_n`.
pub fn check_scalar_lemma(id: &str, inputs: &[f64], params: &BoundParams) -> Result<Vec<BoundReport>> {
    let entry = require_family(id, Family::Scalar)?;
    params.validate(entry.params)?;
    if inputs.is_empty() || inputs.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::DomainViolation(format!("{id} needs positive finite inputs")));
    }
    let r = params.r;
    match id {
        "jensen" => {
            let &[a, b] = inputs else {
                return Err(Error::DomainViolation(format!("jensen takes exactly two inputs, got {}", inputs.len())));
            };
            let l = params.lam;
            let geo = a.powf(l) * b.powf(1.0 - l);
            let arith = l * a + (1.0 - l) * b;
            let power_mean = (l * a.powf(r) + (1.0 - l) * b.powf(r)).powf(1.0 / r);
            let inter = record(&[("geometric", geo), ("arithmetic", arith), ("power_mean", power_mean)]);
            let mut first = inter.clone();
            first.insert("link".into(), 1.0);
            let mut second = inter;
            second.insert("link".into(), 2.0);
            Ok(vec![
                BoundReport::new(id, geo, arith, first, true, *params),
                BoundReport::new(id, arith, power_mean, second, true, *params),
            ])
        }
        "bohr" => {
            let n = inputs.len() as f64;
            let sum: f64 = inputs.iter().sum();
            let sum_pow: f64 = inputs.iter().map(|a| a.powf(r)).sum();
            let inter = record(&[("n", n), ("sum", sum), ("sum_of_powers", sum_pow)]);
            Ok(vec![BoundReport::new(id, sum.powf(r), n.powf(r - 1.0) * sum_pow, inter, true, *params)])
        }
        _ => unreachable!("scalar family covers jensen and bohr"),
    }
}

/// Buzano-type bounds on `|⟨a,e⟩_A⟨e,b⟩_A|` for an A-unit vector `e`.
pub fn check_vector_lemma(
    ctx: &SemiInnerContext,
    id: &str,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    e: &ComplexMatrix,
    params: &BoundParams,
) -> Result<BoundReport> {
    let entry = require_family(id, Family::Vector)?;
    params.validate(entry.params)?;
    require_unit(ctx, e)?;
    let na = vec_seminorm(ctx, a)?;
    let nb = vec_seminorm(ctx, b)?;
    let ab = semi_inner(ctx, a, b)?.norm();
    let ae = semi_inner(ctx, a, e)?.norm();
    let eb = semi_inner(ctx, e, b)?.norm();
    let prod = ae * eb;
    let nn = na * nb;
    let p = params;
    let a2 = p.alpha_abs2();
    let (beta, r) = (p.beta, p.r);

    let (lhs, rhs) = match id {
        "buz_general" => (prod, (p.m1() * nn + ab) / p.alpha.norm()),
        "buz_half" => (prod, 0.5 * (nn + ab)),
        "mix_al_be" => {
            let c1 = (beta + (beta + 1.0) * p.m2()) / (a2 * (1.0 + beta));
            let c2 = (1.0 + 2.0 * (beta + 1.0) * p.m1()) / (a2 * (1.0 + beta));
            (prod * prod, c1 * nn * nn + c2 * nn * ab)
        }
        "buzano_beta" => (prod * prod, 0.25 * (p.g1() * nn * nn + p.g2() * nn * ab)),
        "ramadan_kareem" => {
            let c1 = (2.0 * (beta + 1.0) * p.m2() + 2.0 * beta) / (a2 * (beta + 1.0));
            let c2 = 2.0 / (a2 * (beta + 1.0));
            (prod * prod, c1 * nn * nn + c2 * ab * ab)
        }
        "buz_beta" => (prod * prod, 0.5 * (p.g1() * nn * nn + ab * ab / (beta + 1.0))),
        "buz_beta_pow" => {
            (prod.powf(2.0 * r), 0.5 * (p.g1() * nn.powf(2.0 * r) + ab.powf(2.0 * r) / (beta + 1.0)))
        }
        "modified_buzano" => {
            (prod.powf(2.0 * r), 0.25 * (p.g1() * nn.powf(2.0 * r) + p.g2() * nn.powf(r) * ab.powf(r)))
        }
        "drag" => {
            let aa = na * na;
            let bb = nb * nb;
            (ae * ae + eb * eb, (aa * aa + bb * bb + 2.0 * ab * ab).sqrt())
        }
        _ => unreachable!("vector family ids are exhaustively matched"),
    };
    let inter = record(&[("norm_a", na), ("norm_b", nb), ("inner_ab", ab), ("inner_ae", ae), ("inner_eb", eb)]);
    Ok(BoundReport::new(id, lhs, rhs, inter, true, *params))
}

/// `|⟨Tx,y⟩_A| ≤ ⟨|T|_A^{2λ}x,x⟩_A^{1/2} ⟨|T♯|_A^{2(1−λ)}y,y⟩_A^{1/2}`; requires `TA = AT`.
pub fn check_mixed_schwarz(
    ctx: &SemiInnerContext,
    t: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
    params: &BoundParams,
) -> Result<BoundReport> {
    let entry = lookup("mixed_schwarz")?;
    params.validate(entry.params)?;
    let lam = params.lam;
    let hyp = commutes_with_a(ctx, t)?;
    let lhs = semi_inner(ctx, &(t * x), y)?.norm();
    let left_op = a_abs_power(ctx, t, 2.0 * lam)?;
    let right_op = a_abs_power(ctx, &a_adjoint(ctx, t)?, 2.0 * (1.0 - lam))?;
    let left = semi_inner(ctx, &(&left_op * x), x)?.re.max(0.0);
    let right = semi_inner(ctx, &(&right_op * y), y)?.re.max(0.0);
    let inter = record(&[("left_form", left), ("right_form", right)]);
    Ok(BoundReport::new("mixed_schwarz", lhs, (left * right).sqrt(), inter, hyp, *params))
}

/// Hölder–McCarthy for A-positive `T` and A-unit `x`: `⟨Tx,x⟩^r ≤ ⟨T^r x,x⟩`
/// for `r ≥ 1`, reversed for `0 ≤ r ≤ 1`.
pub fn check_holder_mccarthy(
    ctx: &SemiInnerContext,
    t: &ComplexMatrix,
    x: &ComplexMatrix,
    params: &BoundParams,
) -> Result<BoundReport> {
    let entry = lookup("holder_mccarthy")?;
    params.validate(entry.params)?;
    if !is_a_positive(ctx, t)? {
        return Err(Error::NotAPositive);
    }
    require_unit(ctx, x)?;
    let r = params.r;
    let form = semi_inner(ctx, &(t * x), x)?.re.max(0.0);
    let power_form = semi_inner(ctx, &(&a_positive_power(ctx, t, r)? * x), x)?.re.max(0.0);
    let form_pow = form.powf(r);
    let inter = record(&[("form", form), ("form_pow", form_pow), ("power_form", power_form)]);
    let (lhs, rhs) = if r >= 1.0 { (form_pow, power_form) } else { (power_form, form_pow) };
    Ok(BoundReport::new("holder_mccarthy", lhs, rhs, inter, true, *params))
}
