//! Bounds on `w_A(S♯T)` for anti-diagonal operator matrices and on `w_A(K♯F)`.

use crate::blockops::{antidiag, dsum_context};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::semihilbert::SemiInnerContext;

use super::{all_in_b_a, lookup, radius, record, resolve_tol, BoundParams, BoundReport, Calc, Family};

/// Operands of the product family.
#[derive(Debug, Clone, PartialEq)]
pub enum ProductOperands {
    /// `T = [[0, T₁], [T₂, 0]]`, `S = [[0, S₁], [S₂, 0]]` (for `prod1`, `prod2`).
    Blocks { t1: ComplexMatrix, t2: ComplexMatrix, s1: ComplexMatrix, s2: ComplexMatrix },
    /// `F`, `K` (for `cor_prod`, `cor_prod_a`, `power_2r`).
    Pair { f: ComplexMatrix, k: ComplexMatrix },
}

pub fn check_product_bound(
    ctx: &SemiInnerContext,
    id: &str,
    operands: &ProductOperands,
    params: &BoundParams,
    tol: Option<f64>,
) -> Result<BoundReport> {
    let entry = lookup(id)?;
    if entry.family != Family::Product {
        return Err(Error::InvalidSpec(format!("`{id}` is not a product inequality")));
    }
    params.validate(entry.params)?;
    let (r, beta) = (params.r, params.beta);
    let b1 = beta + 1.0;
    match (id, operands) {
        ("prod1" | "prod2", ProductOperands::Blocks { t1, t2, s1, s2 }) => {
            let all = [t1, t2, s1, s2];
            let hyp = all_in_b_a(ctx, &all)?;
            let tol = resolve_tol(ctx, tol, &all)?;
            let c = Calc::new(ctx, tol);
            let big = dsum_context(ctx, 2)?;
            let t = antidiag(t1, t2)?;
            let s = antidiag(s1, s2)?;
            let w = radius(&big, &(Calc::new(&big, tol).sharp(&s)? * &t), tol)?;
            let gram = |m: &ComplexMatrix| -> Result<ComplexMatrix> { Ok(c.sharp(m)? * m) };
            let (g_t1, g_t2, g_s1, g_s2) = (gram(t1)?, gram(t2)?, gram(s1)?, gram(s2)?);
            let phi = c.norm_pow_sum(&g_t2, &g_s2, 2.0 * r)?;
            let psi = c.norm_pow_sum(&g_t1, &g_s1, 2.0 * r)?;
            let rho = c.w(&(&g_s2 * &g_t2))?.powf(r);
            let theta = c.w(&(&g_s1 * &g_t1))?.powf(r);
            let (nm, wm) = (phi.max(psi), rho.max(theta));
            let rhs = if id == "prod1" {
                (1.0 + 2.0 * beta) / (16.0 * b1) * nm * nm + (3.0 + 2.0 * beta) / (8.0 * b1) * nm * wm
            } else {
                (1.0 + 2.0 * beta) / (8.0 * b1) * nm * nm + wm * wm / (2.0 * b1)
            };
            let inter = record(&[
                ("radius_lower", w.lower),
                ("radius_upper", w.upper),
                ("phi_r", phi),
                ("psi_r", psi),
                ("rho_r", rho),
                ("theta_r", theta),
            ]);
            Ok(BoundReport::new(id, w.lower.powf(4.0 * r), rhs, inter, hyp, *params))
        }
        ("cor_prod" | "cor_prod_a" | "power_2r", ProductOperands::Pair { f, k }) => {
            let hyp = all_in_b_a(ctx, &[f, k])?;
            let tol = resolve_tol(ctx, tol, &[f, k])?;
            let c = Calc::new(ctx, tol);
            let ks = c.sharp(k)?;
            let w = radius(ctx, &(&ks * f), tol)?;
            let ff = c.sharp(f)? * f;
            let kk = &ks * k;
            let n = c.norm_pow_sum(&ff, &kk, 2.0 * r)?;
            let wkf = c.w(&(&kk * &ff))?;
            let mut inter = record(&[("radius_lower", w.lower), ("radius_upper", w.upper), ("n_r", n), ("w_kkff", wkf)]);
            let (power, rhs) = match id {
                "cor_prod" => (
                    4.0 * r,
                    (1.0 + 2.0 * beta) / (16.0 * b1) * n * n + (3.0 + 2.0 * beta) / (8.0 * b1) * n * wkf.powf(r),
                ),
                "cor_prod_a" => (4.0 * r, (1.0 + 2.0 * beta) / (8.0 * b1) * n * n + wkf.powf(2.0 * r) / (2.0 * b1)),
                _ => {
                    // The chain behind the bound: w^{2r}(K♯KF♯F) ≤ ¼N² and w^{4r}(K♯F) ≤ ¼N².
                    inter.insert("power_bound".into(), 0.25 * n * n);
                    inter.insert("w_kkff_pow".into(), wkf.powf(2.0 * r));
                    inter.insert("lhs_4r".into(), w.lower.powf(4.0 * r));
                    (2.0 * r, 0.5 * n)
                }
            };
            Ok(BoundReport::new(id, w.lower.powf(power), rhs, inter, hyp, *params))
        }
        _ => {
            let want = if entry.operands.len() == 4 { "T1, T2, S1, S2" } else { "F, K" };
            Err(Error::InvalidSpec(format!("`{id}` takes operands {want}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::VIOLATION_REL_TOL;
    use crate::linalg::test_support::*;
    use crate::linalg::{classical_numerical_radius, psd_power, spectral_norm};
    use crate::semihilbert::{identity_context, make_context, project_b_a};
    use proptest::prelude::*;

    fn pair(f: &ComplexMatrix, k: &ComplexMatrix) -> ProductOperands {
        ProductOperands::Pair { f: f.clone(), k: k.clone() }
    }

    #[test]
    fn zero_pair() {
        let ctx = make_context(&random_psd(&mut rng(1), 3), 1e-10).unwrap();
        let z = ComplexMatrix::zeros(3, 3);
        for id in ["cor_prod", "cor_prod_a", "power_2r"] {
            let rep = check_product_bound(&ctx, id, &pair(&z, &z), &BoundParams::default(), None).unwrap();
            assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0), "{id}");
        }
        let blocks = ProductOperands::Blocks { t1: z.clone(), t2: z.clone(), s1: z.clone(), s2: z };
        for id in ["prod1", "prod2"] {
            let rep = check_product_bound(&ctx, id, &blocks, &BoundParams::default(), None).unwrap();
            assert_eq!((rep.lhs, rep.rhs), (0.0, 0.0), "{id}");
        }
    }

    #[test]
    fn operand_form_must_match() {
        let ctx = identity_context(2);
        let i = ComplexMatrix::identity(2);
        assert!(matches!(check_product_bound(&ctx, "prod1", &pair(&i, &i), &BoundParams::default(), None), Err(Error::InvalidSpec(_))));
        assert!(matches!(check_product_bound(&ctx, "moby_a2", &pair(&i, &i), &BoundParams::default(), None), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn power_2r_with_identity_k_is_classical() {
        let mut g = rng(2);
        let ctx = identity_context(3);
        let i = ComplexMatrix::identity(3);
        for _ in 0..10 {
            let f = gaussian(&mut g, 3, 3);
            let rep = check_product_bound(&ctx, "power_2r", &pair(&f, &i), &BoundParams::default(), Some(1e-12)).unwrap();
            let ff = (f.adjoint() * &f).hermitian_part();
            let classical = 0.5 * spectral_norm(&(psd_power(&ff, 2.0).unwrap() + &i));
            let w = classical_numerical_radius(&f, 1e-12).unwrap();
            assert!((rep.rhs - classical).abs() < 1e-10 * classical);
            assert!((rep.lhs - w * w).abs() < 1e-10 * rep.lhs.max(1.0));
            assert!(rep.slack >= 0.0);
        }
    }

    #[test]
    fn pair_forms_are_block_forms_with_repeated_blocks() {
        let mut g = rng(5);
        let ctx = make_context(&random_psd(&mut g, 2), 1e-10).unwrap();
        let f = project_b_a(&ctx, &gaussian(&mut g, 2, 2)).unwrap();
        let k = project_b_a(&ctx, &gaussian(&mut g, 2, 2)).unwrap();
        let blocks = ProductOperands::Blocks { t1: f.clone(), t2: f.clone(), s1: k.clone(), s2: k.clone() };
        let p = BoundParams { beta: 0.8, r: 1.3, ..Default::default() };
        for (thm, cor) in [("prod1", "cor_prod"), ("prod2", "cor_prod_a")] {
            let a = check_product_bound(&ctx, thm, &blocks, &p, Some(1e-12)).unwrap();
            let b = check_product_bound(&ctx, cor, &pair(&f, &k), &p, Some(1e-12)).unwrap();
            assert!((a.rhs - b.rhs).abs() < 1e-9 * b.rhs.max(1.0), "{thm}: {} vs {}", a.rhs, b.rhs);
            assert!((a.lhs - b.lhs).abs() < 1e-9 * b.lhs.max(1.0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn product_bounds_hold(seed in any::<u64>(), n in 2usize..4, beta in 0.0f64..5.0, r in 1.0f64..2.5) {
            let mut g = rng(seed);
            let ctx = make_context(&random_psd(&mut g, n), 1e-10).unwrap();
            let mut draw = || project_b_a(&ctx, &gaussian(&mut g, n, n)).unwrap();
            let (t1, t2, s1, s2) = (draw(), draw(), draw(), draw());
            let p = BoundParams { beta, r, ..Default::default() };
            let blocks = ProductOperands::Blocks { t1: t1.clone(), t2, s1: s1.clone(), s2 };
            for id in ["prod1", "prod2"] {
                let rep = check_product_bound(&ctx, id, &blocks, &p, None).unwrap();
                prop_assert!(rep.rel_slack >= -VIOLATION_REL_TOL, "{}: {:?}", id, rep);
            }
            for id in ["cor_prod", "cor_prod_a", "power_2r"] {
                let rep = check_product_bound(&ctx, id, &pair(&t1, &s1), &p, None).unwrap();
                prop_assert!(rep.rel_slack >= -VIOLATION_REL_TOL, "{}: {:?}", id, rep);
                if id == "power_2r" {
                    let quarter = rep.intermediate("power_bound").unwrap();
                    prop_assert!(rep.intermediate("w_kkff_pow").unwrap() <= quarter * (1.0 + 1e-8) + 1e-12);
                    prop_assert!(rep.intermediate("lhs_4r").unwrap() <= quarter * (1.0 + 1e-8) + 1e-12);
                }
            }
        }
    }
}
