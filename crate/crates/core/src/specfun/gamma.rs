//! Complex log-Gamma, `Γ_C` and Stirling envelopes.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

// B_{2k} / (2k (2k-1)), k = 1..=12
const STIRLING: [f64; 12] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
];

/// `ln Γ(z)`, continuous in `z` off the nonpositive real axis and equal to
/// the limit from above on it.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument(format!("log_gamma({z})")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole(format!("Gamma has a pole at {}", z.re)));
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    stirling_series(w) - shift
}

fn stirling_series(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        acc += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * LN_2PI + acc
}

/// `Γ(z)`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// `ln Γ_C(s)` with `Γ_C(s) = 2 (2π)^{-s} Γ(s)`.
pub fn log_gamma_c(s: Complex64) -> Result<Complex64> {
    Ok(std::f64::consts::LN_2 - s * LN_2PI + log_gamma(s)?)
}

/// `Γ_C(s) = 2 (2π)^{-s} Γ(s)`.
pub fn gamma_c(s: Complex64) -> Result<Complex64> {
    Ok(log_gamma_c(s)?.exp())
}

/// `ln |Γ(1 + it)| = ½ ln(πt / sinh πt)` for real `t`.
pub fn ln_abs_gamma_one_plus_it(t: f64) -> f64 {
    let a = PI * t.abs();
    if a < 1e-8 {
        return -a * a / 12.0;
    }
    // ln(sinh a) = a + ln((1 - e^{-2a}) / 2)
    0.5 * (a.ln() - a - (-(-2.0 * a).exp()).ln_1p() + std::f64::consts::LN_2)
}

/// Stirling envelope `(1 + |y|)^{x - 1/2} e^{-π|y|/2}`.
pub fn stirling_envelope(x: f64, y: f64) -> f64 {
    ln_stirling_envelope(x, y).exp()
}

/// Natural log of [`stirling_envelope`].
pub fn ln_stirling_envelope(x: f64, y: f64) -> f64 {
    (x - 0.5) * (1.0 + y.abs()).ln() - 0.5 * PI * y.abs()
}

/// A product `Π_m Γ_C(s + σ_m)` described by its shifts.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactorProduct {
    pub shifts: Vec<Complex64>,
}

impl GammaFactorProduct {
    pub fn new(shifts: Vec<Complex64>) -> GammaFactorProduct {
        GammaFactorProduct { shifts }
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    /// `Σ_m ln Γ_C(s + σ_m)`.
    pub fn ln_eval(&self, s: Complex64) -> Result<Complex64> {
        self.shifts.iter().map(|&sh| log_gamma_c(s + sh)).sum()
    }

    /// `ln |Π_m Γ_C(s + σ_m)|`.
    pub fn ln_abs(&self, s: Complex64) -> Result<f64> {
        Ok(self.ln_eval(s)?.re)
    }

    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        Ok(self.ln_eval(s)?.exp())
    }
}
