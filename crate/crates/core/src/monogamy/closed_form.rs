//! Closed forms for GHZ and W residual tangles.
//!
//! For the N-qubit W state the two-qubit marginal is
//! `(1/N)[(N−2)|00⟩⟨00| + |01⟩⟨01| + |10⟩⟨10| + |01⟩⟨10| + |10⟩⟨01|]`. Its partial
//! transpose has one negative eigenvalue `((N−2) − √((N−2)²+4))/(2N)`, so the pairwise
//! negativity is `(√((N−2)²+4) − (N−2))/N`, which squares to `B/N²` with
//! `B = 2(N−2)² + 4 − 2(N−2)√((N−2)²+4)`. The pairwise α-power term is therefore
//! `B^{α/2}/N^α`: the bracket carries exponent α/2, not α. The tests check this
//! reading against the states directly.

use crate::error::{Error, Result};

fn check(n: usize, alpha: f64) -> Result<(f64, f64)> {
    if n < 3 {
        return Err(Error::arg(format!("closed forms need n >= 3, got {n}")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::arg(format!("closed forms need alpha > 0, got {alpha}")));
    }
    Ok((n as f64, alpha))
}

/// τ^C(GHZ_N) = 1 for every α > 0.
pub fn tau_concurrence_ghz_closed_form(n: usize, alpha: f64) -> Result<f64> {
    check(n, alpha)?;
    Ok(1.0)
}

/// (2/N)^α [(N−1)^{α/2} − (N−1)].
pub fn tau_concurrence_w_closed_form(n: usize, alpha: f64) -> Result<f64> {
    let (n, a) = check(n, alpha)?;
    Ok((2.0 / n).powf(a) * ((n - 1.0).powf(a / 2.0) - (n - 1.0)))
}

/// 2√(N−1)/N: concurrence and negativity of W_N across A₁|rest.
pub fn w_one_to_rest_concurrence(n: usize) -> f64 {
    let n = n as f64;
    2.0 * (n - 1.0).sqrt() / n
}

/// 2/N.
pub fn w_pairwise_concurrence(n: usize) -> f64 {
    2.0 / n as f64
}

/// B = 2(N−2)² + 4 − 2(N−2)√((N−2)²+4).
pub fn w_negativity_bracket(n: usize) -> f64 {
    let m = n as f64 - 2.0;
    2.0 * m * m + 4.0 - 2.0 * m * (m * m + 4.0).sqrt()
}

/// √B / N.
pub fn w_pairwise_negativity(n: usize) -> f64 {
    w_negativity_bracket(n).sqrt() / n as f64
}

/// (1/N^α)[2^α (N−1)^{α/2} − (N−1) B^{α/2}].
pub fn tau_negativity_w_closed_form(n: usize, alpha: f64) -> Result<f64> {
    let (nf, a) = check(n, alpha)?;
    let b = w_negativity_bracket(n);
    Ok((2f64.powf(a) * (nf - 1.0).powf(a / 2.0) - (nf - 1.0) * b.powf(a / 2.0)) / nf.powf(a))
}

/// Number of strict sign changes of `f` along `grid`.
pub fn count_sign_changes(grid: &[f64], mut f: impl FnMut(f64) -> f64) -> usize {
    let signs: Vec<f64> = grid.iter().map(|&x| f(x).signum()).filter(|s| *s != 0.0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Root of τ^N(W_N)(α) in (0, 2), bisected to an interval narrower than `tol`.
pub fn tau_negativity_w_zero_crossing(n: usize, tol: f64) -> Result<f64> {
    check(n, 1.0)?;
    if !(tol > 0.0) {
        return Err(Error::arg("bisection tolerance must be positive"));
    }
    let f = |a: f64| tau_negativity_w_closed_form(n, a).expect("validated");
    let (mut lo, mut hi) = (1e-9, 2.0);
    if !(f(lo) < 0.0 && f(hi) > 0.0) {
        return Err(Error::arg(format!("no sign change of the W negativity residual for n = {n}")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
