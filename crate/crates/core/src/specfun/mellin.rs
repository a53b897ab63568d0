//! Mellin transform of a product of two K-Bessel functions.

use num_complex::Complex64;

use super::bessel::{ln_cosh_half_pi, scaled_ln};
use super::gamma::log_gamma;
use super::quad::{exp_sinh, ExpSinh};
use crate::error::{Error, Result};

/// `Γ(λ+1)^{-1} Π_{±,±} Γ((1 + λ ± μ ± ν)/2)`.
pub fn mellin_kk_closed(lambda: Complex64, mu: Complex64, nu: Complex64) -> Result<Complex64> {
    let mut ln = -log_gamma(lambda + 1.0)?;
    for a in [mu, -mu] {
        for b in [nu, -nu] {
            let arg = 1.0 + lambda + a + b;
            if arg.re <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "Re(1 + λ ± μ ± ν) must be positive, got {arg}"
                )));
            }
            ln += log_gamma(0.5 * arg)?;
        }
    }
    Ok(ln.exp())
}

/// `2^{λ-2}`: the factor separating `∫_0^∞ y^λ K_μ K_ν dy` from
/// [`mellin_kk_closed`].
pub fn mellin_normalization(lambda: Complex64) -> Complex64 {
    ((lambda - 2.0) * std::f64::consts::LN_2).exp()
}

/// `∫_0^∞ y^λ K_{it₁}(y) K_{it₂}(y) dy` by exp-sinh quadrature.
pub fn mellin_kk_quadrature(lambda: Complex64, t1: f64, t2: f64) -> Result<Complex64> {
    if !(lambda.re > 0.0) || !lambda.im.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Re(λ) must be positive, got {lambda}"
        )));
    }
    for t in [t1, t2] {
        if !(0.0..=50.0).contains(&t) {
            return Err(Error::OutOfWindow(format!("order {t} outside [0, 50]")));
        }
    }
    let (c1, c2) = (ln_cosh_half_pi(t1), ln_cosh_half_pi(t2));
    let mut failure = None;
    let integrand = |y: f64| -> Complex64 {
        let k = scaled_ln(t1, y).and_then(|a| scaled_ln(t2, y).map(|b| (a, b)));
        match k {
            Ok((a, b)) => {
                let ln = lambda * y.ln() + (a.ln_abs - c1 + b.ln_abs - c2);
                ln.exp() * (a.sign * b.sign)
            }
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let opts = ExpSinh {
        scale: 1.0,
        rel_tol: 1e-12,
        abs_tol: 1e-13,
        max_levels: 8,
    };
    let v = exp_sinh(integrand, opts)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}
