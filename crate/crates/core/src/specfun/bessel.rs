//! The scaled Bessel function `S(t, u) = cosh(πt/2) K_{it}(u)` for real
//! `t ≥ 0`, `u > 0`.
//!
//! * `u ≥ t`: the integral `∫_0^∞ e^{-u cosh w} cos(tw) dw` is moved onto the
//!   steepest-descent contour `w = v + iθ(v)`, `sin θ = t v / (u sinh v)`,
//!   through the saddle `iβ`, `sin β = t/u`. The integrand is then positive
//!   and bounded by 1 after factoring out the saddle value.
//! * `u ≤ 1`, `t ≤ 1`: the cosine integral directly, on Gauss–Legendre
//!   panels sized to the local decay rate.
//! * `u ≤ 1 < t`: ascending series of `I_{it}`.
//! * `u < t`: `S = c_t ∫_0^∞ cos(tv - u sinh v) dv`, `c_t = (1 + e^{-πt})/2`,
//!   split at the stationary point `μ = arccosh(t/u)`; Gauss–Legendre panels
//!   on `[0, μ]` and the steepest-descent path from `μ` to `∞ - iπ/2`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::log_gamma_unchecked;
use super::quad::{exp_sinh, gl16, ExpSinh};
use crate::error::{Error, Result};

pub const T_MAX: f64 = 1000.0;
pub const U_MIN: f64 = 1e-6;
pub const U_MAX: f64 = 1e4;

/// `ln |S|` and the sign of `S`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledLog {
    pub ln_abs: f64,
    pub sign: f64,
}

impl ScaledLog {
    pub fn value(&self) -> f64 {
        self.sign * self.ln_abs.exp()
    }
}

fn check_window(t: f64, u: f64) -> Result<()> {
    if !(t.is_finite() && u.is_finite()) {
        return Err(Error::InvalidArgument(format!("bessel_k_scaled({t}, {u})")));
    }
    if !(0.0..=T_MAX).contains(&t) {
        return Err(Error::OutOfWindow(format!(
            "order t = {t} outside [0, {T_MAX}]"
        )));
    }
    if !(U_MIN..=U_MAX).contains(&u) {
        return Err(Error::OutOfWindow(format!(
            "argument u = {u} outside [{U_MIN}, {U_MAX}]"
        )));
    }
    Ok(())
}

/// `cosh(πt/2) K_{it}(u)` on the window `t ∈ [0, 10³]`, `u ∈ [10⁻⁶, 10⁴]`.
pub fn bessel_k_scaled(t: f64, u: f64) -> Result<f64> {
    check_window(t, u)?;
    Ok(scaled_ln(t, u)?.value())
}

/// Log form of [`bessel_k_scaled`]; finite even where the value underflows.
pub fn bessel_k_scaled_ln(t: f64, u: f64) -> Result<ScaledLog> {
    check_window(t, u)?;
    scaled_ln(t, u)
}

/// `K_{it}(u)` itself, on the same window.
pub fn bessel_k(t: f64, u: f64) -> Result<f64> {
    check_window(t, u)?;
    let s = scaled_ln(t, u)?;
    Ok(s.sign * (s.ln_abs - ln_cosh_half_pi(t)).exp())
}

/// `ln cosh(πt/2)`.
pub fn ln_cosh_half_pi(t: f64) -> f64 {
    let a = 0.5 * PI * t.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Unchecked evaluation for any finite `t ≥ 0`, `u > 0`.
pub(crate) fn scaled_ln(t: f64, u: f64) -> Result<ScaledLog> {
    if u <= 1.0 && t <= 1.0 {
        from_value(direct(t, u))
    } else if u <= 1.0 {
        from_value(series(t, u))
    } else if u >= t {
        saddle_ln(t, u)
    } else {
        from_value(oscillatory(t, u)?)
    }
}

fn from_value(v: f64) -> Result<ScaledLog> {
    if !v.is_finite() {
        return Err(Error::Nonconvergence("non-finite Bessel value".into()));
    }
    let sign = if v < 0.0 { -1.0 } else { 1.0 };
    Ok(ScaledLog {
        ln_abs: v.abs().ln(),
        sign,
    })
}

/// `sinh x - x`, accurate for small `x`.
pub(crate) fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        let mut term = x * x2 / 6.0;
        let mut sum = term;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs() {
            term *= x2 / ((k + 1.0) * (k + 2.0));
            sum += term;
            k += 2.0;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// `cosh x - 1`.
fn cosh_minus_one(x: f64) -> f64 {
    let s = (0.5 * x).sinh();
    2.0 * s * s
}

fn width_scale(a: f64, u: f64) -> f64 {
    (1.0 / (a + u.powf(2.0 / 3.0)).sqrt()).clamp(1e-3, 10.0)
}

fn quad_opts(scale: f64) -> ExpSinh {
    ExpSinh {
        scale,
        rel_tol: 1e-12,
        abs_tol: 0.0,
        max_levels: 9,
    }
}

fn saddle_ln(t: f64, u: f64) -> Result<ScaledLog> {
    let sb = t / u;
    let cb = ((u - t) * (u + t)).sqrt() / u;
    let integrand = |v: f64| -> f64 {
        let sh = v.sinh();
        let (q, one_minus_q) = if v < 1e-300 {
            (1.0, 0.0)
        } else {
            (v / sh, sinh_minus_x(v) / sh)
        };
        if !sh.is_finite() {
            return 0.0;
        }
        let one_minus_q2 = one_minus_q * (1.0 + q);
        let cos_t = (cb * cb + sb * sb * one_minus_q2).sqrt();
        let sin_t = sb * q;
        let dcos = if cos_t + cb > 0.0 {
            sb * sb * one_minus_q2 / (cos_t + cb)
        } else {
            0.0
        };
        let a = cosh_minus_one(v) * cos_t + dcos;
        // β - θ from its sine and cosine
        let s_diff = sb * (cos_t - q * cb);
        let c_diff = cb * cos_t + sb * sin_t;
        let g = -u * a + t * s_diff.atan2(c_diff);
        g.exp()
    };
    let integral = exp_sinh(integrand, quad_opts(width_scale(u * cb, u)))?;
    // ln cosh(πt/2) - u cos β - t β
    let lead = t * cb.atan2(sb) - u * cb + (-PI * t).exp().ln_1p() - std::f64::consts::LN_2;
    Ok(ScaledLog {
        ln_abs: lead + integral.ln(),
        sign: 1.0,
    })
}

fn direct(t: f64, u: f64) -> f64 {
    // e^{-u cosh v} < e^{-60} beyond the last panel
    let rule = gl16();
    let mut sum = 0.0;
    let mut v = 0.0f64;
    while u * v.cosh() < 60.0 {
        let dv = 1.0 / (u * v.cosh()).max(1.0);
        sum += rule.integrate(v, v + dv, |x| (-u * x.cosh()).exp() * (t * x).cos());
        v += dv;
    }
    (0.5 * PI * t).cosh() * sum
}

fn series(t: f64, u: f64) -> f64 {
    // S = -π/(1 - e^{-πt}) Im[exp(-lnΓ(1+it) - πt/2 + it ln(u/2)) Σ_k a_k]
    let it = Complex64::new(0.0, t);
    let lead = -log_gamma_unchecked(1.0 + it) - 0.5 * PI * t + it * (0.5 * u).ln();
    let z = 0.25 * u * u;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= z / (k * (k + it));
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        k += 1.0;
    }
    -PI / (-(-PI * t).exp_m1()) * (lead.exp() * sum).im
}

fn oscillatory(t: f64, u: f64) -> Result<f64> {
    let delta = (t - u) / u;
    let shm = (delta * (2.0 + delta)).sqrt();
    let chm = t / u;
    let mu = (delta + shm).ln_1p();
    // c = u (μ cosh μ - sinh μ)
    let c = if mu < 0.1 {
        let m2 = mu * mu;
        let mut pw = mu * m2;
        let mut fact = 6.0;
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            let term = pw * 2.0 * k / fact;
            sum += term;
            if term < 1e-18 * sum {
                break;
            }
            pw *= m2;
            fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
            k += 1.0;
        }
        u * sum
    } else {
        t * mu - u * shm
    };

    // ∫_0^μ cos(tv - u sinh v) dv, panels of bounded phase change
    let rule = gl16();
    let mut seg = 0.0;
    let mut v = 0.0;
    while v < mu {
        let d1 = t - u * v.cosh();
        let d2 = u * v.sinh();
        let mut dv = mu - v;
        if d1 > 0.0 {
            dv = dv.min(2.0 / d1);
        }
        if d2 > 0.0 {
            dv = dv.min(2.0 / d2.sqrt());
        }
        let b = if mu - (v + dv) < 1e-12 * mu {
            mu
        } else {
            v + dv
        };
        seg += rule.integrate(v, b, |x| (t * x - u * x.sinh()).cos());
        v = b;
    }

    // steepest-descent tail from μ; θ ∈ (-π/2, 0]
    let path = |p: f64| -> (f64, f64) {
        let sv = (mu + p).sinh();
        let cv = (mu + p).cosh();
        if !cv.is_finite() {
            return (0.0, 0.0);
        }
        let h = u * (shm * cosh_minus_one(p) + chm * sinh_minus_x(p));
        let omc = (h / (u * sv)).min(1.0);
        let abs_theta = 2.0 * (0.5 * omc).sqrt().asin();
        let abs_sin = (omc * (2.0 - omc)).sqrt();
        let r = t * abs_theta - u * cv * abs_sin;
        let e = r.exp();
        if e == 0.0 {
            return (0.0, 0.0);
        }
        let num = -u * (chm * cosh_minus_one(p) + shm * p.sinh()) + u * cv * omc;
        let dtheta = if abs_sin > 0.0 {
            num / (u * sv * abs_sin)
        } else {
            -1.0
        };
        (e, e * dtheta)
    };
    let scale = width_scale(u * shm, u);
    let i1 = exp_sinh(|p| path(p).0, quad_opts(scale))?;
    let i2 = exp_sinh(|p| path(p).1, quad_opts(scale))?;
    let ct = 0.5 * (1.0 + (-PI * t).exp());
    Ok(ct * (seg + c.cos() * i1 - c.sin() * i2))
}

/// Balogh regime of `(t, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeLabel {
    Oscillatory,
    Transition,
    ExponentialDecay,
}

/// A classified `(t, u)` pair with its transition half-width constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselRegime {
    pub label: RegimeLabel,
    pub t: f64,
    pub u: f64,
    pub c_transition: f64,
}

/// Default transition constant `C`.
pub const DEFAULT_C_TRANSITION: f64 = 1.0;
/// Default decay constant `c`.
pub const DEFAULT_C_DECAY: f64 = 2.0 / 3.0;

/// Classifies `(t, u)` with half-width `C t^{1/3}`; ties go to transition.
pub fn balogh_classify(t: f64, u: f64, c: f64) -> Result<BesselRegime> {
    if !(t > 0.0 && u > 0.0 && c > 0.0) || !(t.is_finite() && u.is_finite() && c.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "balogh_classify({t}, {u}, {c})"
        )));
    }
    let w = c * t.cbrt();
    let label = if (u - t).abs() <= w {
        RegimeLabel::Transition
    } else if u < t {
        RegimeLabel::Oscillatory
    } else {
        RegimeLabel::ExponentialDecay
    };
    Ok(BesselRegime {
        label,
        t,
        u,
        c_transition: c,
    })
}

/// Natural log of [`balogh_envelope`].
pub fn balogh_envelope_ln(r: &BesselRegime, c_decay: f64) -> f64 {
    let (t, u) = (r.t, r.u);
    match r.label {
        RegimeLabel::Oscillatory => -0.25 * (t.ln() + (t - u).ln()),
        RegimeLabel::Transition => -t.ln() / 3.0,
        RegimeLabel::ExponentialDecay => {
            let x = (u / t).powf(1.5) * ((u - t) / t.cbrt()).powf(1.5);
            -0.25 * (u.ln() + (u - t).ln()) - c_decay * x
        }
    }
}

/// The regime's envelope case value with decay constant `c_decay`.
pub fn balogh_envelope(r: &BesselRegime, c_decay: f64) -> f64 {
    balogh_envelope_ln(r, c_decay).exp()
}
