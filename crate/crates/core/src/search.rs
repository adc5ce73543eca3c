//! Golden-section search for unimodal scalar functions.

/// Result of a scalar minimization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` on `[lo, hi]` until the bracket is narrower than `xtol`.
///
/// The endpoints are evaluated as well, so a monotone `f` returns the better
/// endpoint instead of a point `xtol` inside it.
pub fn golden_section_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, xtol: f64) -> Minimum {
    assert!(lo <= hi && xtol > 0.0, "invalid bracket");
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut evaluations = 2;
    while b - a > xtol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evaluations += 1;
    }
    let mut best = if fc <= fd { (c, fc) } else { (d, fd) };
    for x in [lo, hi] {
        let fx = f(x);
        evaluations += 1;
        if fx < best.1 {
            best = (x, fx);
        }
    }
    Minimum { x: best.0, value: best.1, evaluations }
}
