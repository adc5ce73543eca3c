//! Bounds for `w_𝔸` of 2×2 operator matrices under `𝔸 = diag(A, A)`.

use crate::blockops::{antidiag, assemble, dsum_context, BlockSpec};
use crate::error::{Error, Result};
use crate::linalg::{clamped_psd_eigenvalues, hermitian_eig, spectral_norm, ComplexMatrix};
use crate::semihilbert::{pull_back, reduce, SemiInnerContext};

use super::minimize_refined_alpha;
use super::{all_in_b_a, lookup, radius, record, resolve_tol, BoundParams, BoundReport, Calc, Family};

/// `h(|T|_A)` for a scalar function with `h(0) = 0` imposed on the kernel.
fn a_abs_fn(ctx: &SemiInnerContext, t: &ComplexMatrix, h: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let tilde = reduce(ctx, t)?.tilde;
    let spec = hermitian_eig(&(tilde.adjoint() * &tilde).hermitian_part())?;
    let vals = clamped_psd_eigenvalues(&spec)?;
    let mut it = vals.into_iter();
    let image = spec.map(|_| {
        let s = it.next().expect("one value per eigenpair");
        if s > 0.0 {
            h(s.sqrt())
        } else {
            0.0
        }
    });
    pull_back(ctx, &image)
}

/// Classical `h(|T|)`, kernel mapped to 0.
fn classical_abs_fn(t: &ComplexMatrix, h: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eig(&(t.adjoint() * t).hermitian_part())?;
    let vals = clamped_psd_eigenvalues(&spec)?;
    let mut it = vals.into_iter();
    Ok(spec.map(|_| {
        let s = it.next().expect("one value per eigenpair");
        if s > 0.0 {
            h(s.sqrt())
        } else {
            0.0
        }
    }))
}

/// Evaluates a 2×2 operator-matrix bound. Anti-diagonal ids take
/// `BlockSpec::AntiDiag { x, y }`; `kz` and `modified_kz` take `BlockSpec::Full`.
pub fn check_matrix_bound(
    ctx: &SemiInnerContext,
    id: &str,
    blocks: &BlockSpec,
    params: &BoundParams,
    tol: Option<f64>,
) -> Result<BoundReport> {
    let entry = lookup(id)?;
    if entry.family != Family::Matrix {
        return Err(Error::InvalidSpec(format!("`{id}` is not an operator-matrix inequality")));
    }
    params.validate(entry.params)?;
    let full = entry.operands.len() == 4;
    let (fk, x, y) = match blocks {
        BlockSpec::AntiDiag { x, y } if !full => (None, x, y),
        BlockSpec::Full { f, x, y, k } if full => (Some((f, k)), x, y),
        _ => {
            let want = if full { "[[F,X],[Y,K]]" } else { "[[0,X],[Y,0]]" };
            return Err(Error::InvalidSpec(format!("`{id}` expects blocks of the form {want}")));
        }
    };
    let t = assemble(blocks)?;
    if t.rows() != 2 * ctx.dim() {
        return Err(Error::dims(format!("{}x{} blocks", ctx.dim(), ctx.dim()), format!("{}x{}", x.rows(), x.cols())));
    }
    let mut operands = vec![x, y];
    if let Some((f, k)) = fk {
        operands.extend([f, k]);
    }
    let hyp = all_in_b_a(ctx, &operands)?;
    let tol = resolve_tol(ctx, tol, &operands)?;
    let big = dsum_context(ctx, 2)?;
    let w = radius(&big, &t, tol)?;
    let c = Calc::new(ctx, tol);
    let p = params;
    let (r, lam, beta) = (p.r, p.lam, p.beta);

    let mut inter = record(&[("radius_lower", w.lower), ("radius_upper", w.upper)]);
    let mut put = |k: &str, v: f64| {
        inter.insert(k.to_string(), v);
    };

    let xs = c.sharp(x)?;
    let ys = c.sharp(y)?;
    let xsx = &xs * x;
    let xxs = x * &xs;
    let ysy = &ys * y;
    let yys = y * &ys;

    // λ_r and μ_r (δ_r) share the exponent `r`.
    let lam_mu = |r: f64| -> Result<(f64, f64)> { Ok((c.norm_pow_sum(&ysy, &xxs, r)?, c.norm_pow_sum(&yys, &xsx, r)?)) };
    let product_radii = || -> Result<(f64, f64)> { Ok((c.w(&(x * y))?, c.w(&(y * x))?)) };

    let (power, rhs) = match id {
        "thm_2_7" => {
            let nx = c.norm(&c.abs_pow(x, 2.0 * lam)?)?;
            let ny = c.norm(&c.abs_pow(&ys, 2.0 * (1.0 - lam))?)?;
            put("norm_abs_x_pow", nx);
            put("norm_abs_y_sharp_pow", ny);
            (1.0, 0.5 * (nx + ny))
        }
        "thm_2_8" => {
            let u = c.norm(x)?;
            let v = c.norm(&ys)?;
            let best = minimize_refined_alpha(u, v);
            put("norm_x", u);
            put("norm_y_sharp", v);
            put("lam_star", best.lam_star);
            put("inf_bound", best.bound);
            put("degenerate", f64::from(u8::from(best.degenerate)));
            if let Some(a0) = super::alpha0_closed_form(u, v) {
                put("alpha0_closed_form", a0);
            }
            (1.0, best.bound)
        }
        "thm_2_10" | "cor_2_11" | "rem_2_12" => {
            let (r, lam) = if id == "rem_2_12" { (1.0, 0.5) } else { (r, lam) };
            let (first, second) = if id == "thm_2_10" {
                // f(t) = t^λ, g(t) = t^{1−λ} through the general functional calculus.
                let f2r = |t: f64| t.powf(lam).powf(2.0 * r);
                let g2r = |t: f64| t.powf(1.0 - lam).powf(2.0 * r);
                (
                    a_abs_fn(ctx, x, f2r)? + a_abs_fn(ctx, &ys, g2r)?,
                    a_abs_fn(ctx, y, f2r)? + a_abs_fn(ctx, &xs, g2r)?,
                )
            } else {
                (
                    c.abs_pow(x, 2.0 * lam * r)? + c.abs_pow(&ys, 2.0 * r * (1.0 - lam))?,
                    c.abs_pow(y, 2.0 * lam * r)? + c.abs_pow(&xs, 2.0 * r * (1.0 - lam))?,
                )
            };
            let w1 = c.w_positive(&first)?;
            let w2 = c.w_positive(&second)?;
            put("w_first", w1);
            put("w_second", w2);
            if id == "thm_2_10" {
                // Reading the second factor with the classical radius and classical |Y|, |X♯|.
                let h = |e: f64| move |t: f64| t.powf(e).powf(2.0 * r);
                let classical = classical_abs_fn(y, h(lam))? + classical_abs_fn(&xs, h(1.0 - lam))?;
                let w2c = spectral_norm(&classical.hermitian_part());
                put("w_second_classical", w2c);
                put("rhs_classical_reading", 2f64.powf(r - 2.0) * w1.sqrt() * w2c.sqrt());
            }
            (r, 2f64.powf(r - 2.0) * w1.sqrt() * w2.sqrt())
        }
        "moby_a1" => {
            let n1 = c.norm(&(&xsx + &yys))?;
            let n2 = c.norm(&(&xxs + &ysy))?;
            let (wxy, wyx) = product_radii()?;
            let (d1, d2) = (p.delta1(), p.delta2());
            put("delta_1", d1);
            put("delta_2", d2);
            put("norm_xsx_plus_yys", n1);
            put("norm_xxs_plus_ysy", n2);
            put("w_xy", wxy);
            put("w_yx", wyx);
            (4.0, d1 / 4.0 * n1.max(n2).powi(2) + d2 * wxy.max(wyx).powi(2))
        }
        "ramadan1" | "thm_beta" => {
            let (lr, mr) = lam_mu(r)?;
            let (wxy, wyx) = product_radii()?;
            let big_nm = lr.max(mr);
            let wmax = wxy.max(wyx);
            put("lambda_r", lr);
            put("mu_r", mr);
            put("w_xy", wxy);
            put("w_yx", wyx);
            let rhs = if id == "ramadan1" {
                p.g1() / 16.0 * big_nm * big_nm + p.g2() / 8.0 * big_nm * wmax.powf(r)
            } else {
                p.g1() / 8.0 * big_nm * big_nm + wmax.powf(2.0 * r) / (2.0 * (beta + 1.0))
            };
            (4.0 * r, rhs)
        }
        "thm_alpha" => {
            let (lr, mr) = lam_mu(r)?;
            let (wxy, wyx) = product_radii()?;
            let aa = p.alpha.norm().powf(r);
            put("lambda_r", lr);
            put("mu_r", mr);
            put("w_xy", wxy);
            put("w_yx", wyx);
            let rhs = 2f64.powf(r - 2.0) * p.m1().powf(r) / aa * lr.max(mr)
                + 2f64.powf(r - 1.0) / aa * wxy.max(wyx).powf(r);
            (2.0 * r, rhs)
        }
        "thm_2_16" => {
            let (pp, qq) = (p.p, p.q);
            if pp * r < 2.0 || qq * r < 2.0 {
                return Err(Error::DomainViolation(format!("thm_2_16 needs pr >= 2 and qr >= 2, got p={pp}, q={qq}, r={r}")));
            }
            let (lr, dr) = lam_mu(r)?;
            let young = |s: &ComplexMatrix, t: &ComplexMatrix| -> Result<f64> {
                let a = c.abs_pow(s, pp * r * lam)?.scale(1.0 / pp);
                let b = c.abs_pow(t, qq * r * (1.0 - lam))?.scale(1.0 / qq);
                c.norm(&(a + b))
            };
            let rho = young(&(x * y), &(&ys * &xs))?;
            let sigma = young(&(y * x), &(&xs * &ys))?;
            let nmax = lr.max(dr);
            let ymax = rho.max(sigma);
            put("lambda_r", lr);
            put("delta_r", dr);
            put("rho_r", rho);
            put("sigma_r", sigma);
            put("gamma_1", p.g1());
            put("gamma_2", p.g2());
            put("rhs_displayed_gamma", p.g1() / 64.0 * nmax * nmax + p.g2() / 32.0 * nmax * ymax);
            (4.0 * r, p.g1() / 16.0 * nmax * nmax + p.g2() / 8.0 * nmax * ymax)
        }
        "kz" | "modified_kz" => {
            let (f, k) = fk.expect("full block form checked above");
            let fs = c.sharp(f)?;
            let ks = c.sharp(k)?;
            let fsf = &fs * f;
            let ksk = &ks * k;
            let a = c.norm_pow_sum(&fsf, &xxs, 2.0)?;
            let b = c.norm_pow_sum(&ksk, &yys, 2.0)?;
            let cc = c.norm(&(&fsf + &xxs))?;
            let d = c.norm(&(&ksk + &yys))?;
            let rr = antidiag(&(x * k), &(y * f))?;
            let wr = radius(&big, &rr, tol)?.upper;
            let (c1, c2, c3, c4) = (p.chi1(), p.chi2(), p.chi3(), p.chi4());
            for (name, v) in [("a", a), ("b", b), ("c", cc), ("d", d), ("w_r", wr), ("chi_1", c1), ("chi_2", c2)] {
                put(name, v);
            }
            let (ab, cd) = (a.max(b), cc.max(d));
            let rhs = if id == "kz" {
                (2.0 + 4.0 * c1) * ab + 2.0 * wr * wr + 4.0 * c2 * cd * wr
            } else {
                let mu = p.mu;
                put("chi_3", c3);
                put("chi_4", c4);
                (2.0 + 2.0 * c1 + 2.0 * c3) * ab
                    + (2.0 * c2 + 2.0 * mu * c4) * cd * wr
                    + (4.0 + 4.0 * (1.0 - mu) * c4) * wr * wr
            };
            (4.0, rhs)
        }
        _ => unreachable!("matrix family ids are exhaustively matched"),
    };
    Ok(BoundReport::new(id, w.lower.powf(power), rhs, inter, hyp, *params))
}

/// `(Y♯Y)^r` etc. without the A-calculus wrapper, for the classical cross-checks below.
#[cfg(test)]
fn classical_pow(m: &ComplexMatrix, r: f64) -> ComplexMatrix {
    crate::linalg::psd_power(&m.hermitian_part(), r).unwrap()
}
