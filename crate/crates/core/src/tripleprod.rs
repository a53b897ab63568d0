//! Archimedean triple-product integral, its Gamma closed form, and the
//! completed-L ratios built from `Γ_C` factors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::bessel::{ln_cosh_half_pi, scaled_ln, ScaledLog};
use crate::specfun::quad::{exp_sinh, ExpSinh};
use crate::specfun::{ln_abs_gamma_one_plus_it, log_gamma, GammaFactorProduct};

pub const T_WINDOW: f64 = 200.0;
pub const WHITTAKER_T_MAX: f64 = 100.0;
pub const WHITTAKER_Y_MIN: f64 = 1e-4;
pub const WHITTAKER_Y_MAX: f64 = 1e2;

/// Modulus of the quadrature / closed-form ratio: `1/(16π)`.
pub const T_INTEGRAL_CONSTANT: f64 = 1.0 / (16.0 * PI);

/// Spectral parameters of three forms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleSpectrum {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
}

impl TripleSpectrum {
    pub fn new(t1: f64, t2: f64, t3: f64) -> Result<TripleSpectrum> {
        for t in [t1, t2, t3] {
            if !t.is_finite() {
                return Err(Error::InvalidArgument(format!("spectral parameter {t}")));
            }
            if t.abs() > T_WINDOW {
                return Err(Error::OutOfWindow(format!(
                    "|t| = {} exceeds {T_WINDOW}",
                    t.abs()
                )));
            }
        }
        Ok(TripleSpectrum { t1, t2, t3 })
    }
}

fn check_whittaker(t: f64, y: f64) -> Result<()> {
    if !(t.is_finite() && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("whittaker_value({t}, {y})")));
    }
    if t.abs() > WHITTAKER_T_MAX {
        return Err(Error::OutOfWindow(format!(
            "|t| = {} exceeds {WHITTAKER_T_MAX}",
            t.abs()
        )));
    }
    if !(WHITTAKER_Y_MIN..=WHITTAKER_Y_MAX).contains(&y) {
        return Err(Error::OutOfWindow(format!(
            "y = {y} outside [{WHITTAKER_Y_MIN}, {WHITTAKER_Y_MAX}]"
        )));
    }
    Ok(())
}

/// `ln(|Γ(1+it)|^{-1} / cosh(πt/2))`, i.e. `½ ln(2 tanh(πt/2)/(πt))`.
fn ln_whittaker_norm(t: f64) -> f64 {
    -ln_abs_gamma_one_plus_it(t) - ln_cosh_half_pi(t)
}

fn whittaker_ln_unchecked(t: f64, y: f64) -> Result<ScaledLog> {
    let k = scaled_ln(t.abs(), 4.0 * PI * y)?;
    Ok(ScaledLog {
        ln_abs: y.ln() + ln_whittaker_norm(t) + k.ln_abs,
        sign: k.sign,
    })
}

/// Log form of [`whittaker_value`].
pub fn whittaker_value_ln(t: f64, y: f64) -> Result<ScaledLog> {
    check_whittaker(t, y)?;
    whittaker_ln_unchecked(t, y)
}

/// `|Γ(1+it)|^{-1} y K_{it}(4πy)` for `y ∈ [10⁻⁴, 10²]`, `|t| ≤ 100`.
pub fn whittaker_value(t: f64, y: f64) -> Result<f64> {
    Ok(whittaker_value_ln(t, y)?.value())
}

/// `∫_0^∞ W(t1, y) W(t2, y) y^{-1+it3} dy/y` by exp-sinh quadrature.
pub fn t_integral_quadrature(spec: &TripleSpectrum) -> Result<Complex64> {
    t_integral_quadrature_with(spec, 9)
}

/// [`t_integral_quadrature`] with an explicit cap on step halvings.
pub fn t_integral_quadrature_with(spec: &TripleSpectrum, max_levels: u32) -> Result<Complex64> {
    for t in [spec.t1, spec.t2] {
        if t.abs() > WHITTAKER_T_MAX {
            return Err(Error::OutOfWindow(format!(
                "|t| = {} exceeds {WHITTAKER_T_MAX}",
                t.abs()
            )));
        }
    }
    let mut failure = None;
    // W1 W2 y^{-2+it3} = y^{it3} (W1/y)(W2/y)
    let integrand = |y: f64| -> Complex64 {
        match whittaker_ln_unchecked(spec.t1, y)
            .and_then(|a| whittaker_ln_unchecked(spec.t2, y).map(|b| (a, b)))
        {
            Ok((a, b)) => {
                let ln = Complex64::new(a.ln_abs + b.ln_abs - 2.0 * y.ln(), spec.t3 * y.ln());
                ln.exp() * (a.sign * b.sign)
            }
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let opts = ExpSinh {
        scale: 1.0 / (4.0 * PI),
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        max_levels,
    };
    let v = exp_sinh(integrand, opts)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `Π_{±,±} Γ((1 + it3 ± it1 ± it2)/2) / (|Γ(1+it1) Γ(1+it2)| Γ(1+it3))`.
pub fn t_integral_closed(spec: &TripleSpectrum) -> Result<Complex64> {
    let (t1, t2, t) = (spec.t1, spec.t2, spec.t3);
    let mut ln = -Complex64::new(
        ln_abs_gamma_one_plus_it(t1) + ln_abs_gamma_one_plus_it(t2),
        0.0,
    ) - log_gamma(Complex64::new(1.0, t))?;
    for a in [t1, -t1] {
        for b in [t2, -t2] {
            ln += log_gamma(Complex64::new(0.5, 0.5 * (t + a + b)))?;
        }
    }
    Ok(ln.exp())
}

/// The closed form at `t3 = 0`, `t1 = t2 = t`:
/// `Γ((1+2it)/2) Γ(1/2)² Γ((1-2it)/2) / (|Γ(1+it)|² Γ(1))`.
pub fn t_integral_degenerate(t: f64) -> Result<f64> {
    let g = log_gamma(Complex64::new(0.5, t))?;
    let ln = 2.0 * g.re + PI.ln() - 2.0 * ln_abs_gamma_one_plus_it(t);
    Ok(ln.exp())
}

/// Calibration of the quadrature against the closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CalibrationReport {
    pub grid: Vec<[f64; 3]>,
    /// Mean of `|quadrature / closed|` over the grid.
    pub ratio_mean: f64,
    /// `(max - min) / mean` of `|quadrature / closed|`.
    pub ratio_spread: f64,
    pub measured_constant: f64,
    /// Largest deviation of `arg(quadrature / closed)` from `-t3 ln 2π`.
    pub phase_deviation: f64,
    pub phase_model: String,
    pub notes: Vec<String>,
}

impl CalibrationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("calibration serializes")
    }
}

fn wrap_angle(a: f64) -> f64 {
    let x = (a + PI).rem_euclid(2.0 * PI) - PI;
    if x == -PI {
        PI
    } else {
        x
    }
}

/// Runs quadrature and closed form over `grid` and reports the ratio.
pub fn calibrate_t_integral(grid: &[TripleSpectrum]) -> Result<CalibrationReport> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty calibration grid".into()));
    }
    let mut mods = Vec::with_capacity(grid.len());
    let mut phase_dev: f64 = 0.0;
    for s in grid {
        let r = t_integral_quadrature(s)? / t_integral_closed(s)?;
        mods.push(r.norm());
        let expected = -s.t3 * (2.0 * PI).ln();
        phase_dev = phase_dev.max(wrap_angle(r.arg() - expected).abs());
    }
    let mean = mods.iter().sum::<f64>() / mods.len() as f64;
    let lo = mods.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = mods.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(CalibrationReport {
        grid: grid.iter().map(|s| [s.t1, s.t2, s.t3]).collect(),
        ratio_mean: mean,
        ratio_spread: (hi - lo) / mean,
        measured_constant: mean,
        phase_deviation: phase_dev,
        phase_model: "(2π)^{-i t3}".into(),
        notes: vec![
            "ratio modulus compared with 1/(16π); the phase (2π)^{-i t3} comes from the 4πy Bessel argument".into(),
            "the Rankin–Selberg central argument is used as (1+it)/2, as displayed".into(),
        ],
    })
}

/// How finite L-values enter a completed ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum FinitePartPolicy {
    /// `L_num / L_den` given exactly.
    SuppliedValue { numerator: f64, denominator: f64 },
    /// `L_num ≤ C^{1/4}` with `C` the analytic conductor of the numerator.
    ConvexityEnvelope,
    /// `L_num ≤ C^{δ}`.
    GlhEnvelope { delta: f64 },
}

/// Completed-L ratio `Π Γ_C(num) / Π Γ_C(den)` with its finite part.
#[derive(Debug, Clone, PartialEq)]
pub struct CompletedRatio {
    pub numerator_gammas: GammaFactorProduct,
    pub denominator_gammas: GammaFactorProduct,
    pub finite_part_policy: FinitePartPolicy,
}

/// `Π_m (3 + |Im σ_m|)` over the numerator arguments.
pub fn analytic_conductor(p: &GammaFactorProduct) -> f64 {
    p.shifts.iter().map(|s| 3.0 + s.im.abs()).product()
}

/// Constants entering [`watson_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WatsonConstants {
    /// The absolute constant `C`; not determined by the formula itself.
    pub c_abs: f64,
    /// Calibration factor from the archimedean integral tests.
    pub measured: f64,
}

impl Default for WatsonConstants {
    fn default() -> Self {
        WatsonConstants {
            c_abs: 1.0,
            measured: T_INTEGRAL_CONSTANT * T_INTEGRAL_CONSTANT,
        }
    }
}

/// `ln` of [`watson_ratio`].
pub fn watson_ratio_ln(ratio: &CompletedRatio, constants: &WatsonConstants) -> Result<f64> {
    if !(constants.c_abs > 0.0 && constants.measured > 0.0) {
        return Err(Error::InvalidArgument(
            "Watson constants must be positive".into(),
        ));
    }
    let zero = Complex64::new(0.0, 0.0);
    let arch = ratio.numerator_gammas.ln_abs(zero)? - ratio.denominator_gammas.ln_abs(zero)?;
    let finite = match ratio.finite_part_policy {
        FinitePartPolicy::SuppliedValue {
            numerator,
            denominator,
        } => {
            if !(numerator > 0.0 && denominator > 0.0) {
                return Err(Error::PolicyMismatch(
                    "supplied-value policy needs positive L-values".into(),
                ));
            }
            numerator.ln() - denominator.ln()
        }
        FinitePartPolicy::ConvexityEnvelope => {
            0.25 * analytic_conductor(&ratio.numerator_gammas).ln()
        }
        FinitePartPolicy::GlhEnvelope { delta } => {
            if !(delta > 0.0 && delta <= 0.05) {
                return Err(Error::PolicyMismatch(format!(
                    "GLH exponent {delta} outside (0, 0.05]"
                )));
            }
            delta * analytic_conductor(&ratio.numerator_gammas).ln()
        }
    };
    Ok((constants.c_abs / (8.0 * PI)).ln() + constants.measured.ln() + arch + finite)
}

/// `(C/8π) · measured · |Π Γ_C(num)| / |Π Γ_C(den)| · finite part`.
pub fn watson_ratio(ratio: &CompletedRatio, constants: &WatsonConstants) -> Result<f64> {
    Ok(watson_ratio_ln(ratio, constants)?.exp())
}

/// Which completed-L numerator to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankinKind {
    /// `Π_{±,±,±} Γ_C((1 ± it ± it_f ± it_g)/2)`.
    CuspCuspEis,
    /// `Π_{±,±} Γ_C((1 + iτ ± it ± it_g)/2)`.
    EisEisCusp,
    /// `Γ_C((1 ± it_j)/2)² Π_{±,±} Γ_C((1 ± it_j)/2 ± it_f)`.
    Sym2Cusp,
}

impl std::str::FromStr for RankinKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cusp-cusp-eis" => Ok(RankinKind::CuspCuspEis),
            "eis-eis-cusp" => Ok(RankinKind::EisEisCusp),
            "sym2-cusp" => Ok(RankinKind::Sym2Cusp),
            other => Err(Error::InvalidArgument(format!("unknown kind {other:?}"))),
        }
    }
}

/// Spectral parameters for [`rankin_gamma_assembly`]; `tau` is used only by
/// `eis-eis-cusp`, `t` is `t_j` for `sym2-cusp`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RankinParams {
    pub t: f64,
    pub t_f: f64,
    pub t_g: f64,
    pub tau: f64,
}

/// Ordered `Γ_C` arguments of the numerator, to be evaluated at `s = 0`.
pub fn rankin_gamma_assembly(kind: RankinKind, p: &RankinParams) -> GammaFactorProduct {
    let c = |im: f64, re: f64| Complex64::new(re, im);
    let signs = [1.0, -1.0];
    let mut shifts = Vec::new();
    match kind {
        RankinKind::CuspCuspEis => {
            for a in signs {
                for b in signs {
                    for d in signs {
                        shifts.push(c(0.5 * (a * p.t + b * p.t_f + d * p.t_g), 0.5));
                    }
                }
            }
        }
        RankinKind::EisEisCusp => {
            for a in signs {
                for b in signs {
                    shifts.push(c(0.5 * (p.tau + a * p.t + b * p.t_g), 0.5));
                }
            }
        }
        RankinKind::Sym2Cusp => {
            for a in signs {
                shifts.push(c(0.5 * a * p.t, 0.5));
                shifts.push(c(0.5 * a * p.t, 0.5));
            }
            for a in signs {
                for b in signs {
                    shifts.push(c(0.5 * a * p.t + b * p.t_f, 0.5));
                }
            }
        }
    }
    GammaFactorProduct::new(shifts)
}

/// `Π_v Π_± Γ_C(1 ± it_v)`: the archimedean part of `Π_v Λ(1, sym² π_v)`.
pub fn sym2_denominator(ts: &[f64]) -> GammaFactorProduct {
    GammaFactorProduct::new(
        ts.iter()
            .flat_map(|&t| [Complex64::new(1.0, t), Complex64::new(1.0, -t)])
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::quad::gl32;
    use crate::specfun::{bessel_k, stirling_envelope};

    fn spec(a: f64, b: f64, c: f64) -> TripleSpectrum {
        TripleSpectrum::new(a, b, c).unwrap()
    }

    #[test]
    fn whittaker_at_t0_matches_quadrature_oracle() {
        // K_0(x) = ∫_0^∞ exp(-x cosh v) dv on fine Gauss-Legendre panels
        let x = 4.0 * PI;
        let rule = gl32();
        let k0: f64 = (0..40)
            .map(|i| {
                rule.integrate(0.1 * i as f64, 0.1 * (i + 1) as f64, |v| {
                    (-x * v.cosh()).exp()
                })
            })
            .sum();
        assert!((whittaker_value(0.0, 1.0).unwrap() - k0).abs() < 1e-10 * k0);
    }

    #[test]
    fn whittaker_decay_evenness_and_window() {
        let w = whittaker_value_ln(3.0, 50.0).unwrap();
        assert!(w.ln_abs < -50.0 * 10f64.ln());
        for (t, y) in [(0.7, 0.01), (12.0, 0.3), (40.0, 2.0)] {
            assert_eq!(
                whittaker_value(t, y).unwrap(),
                whittaker_value(-t, y).unwrap()
            );
        }
        let direct =
            0.3 * bessel_k(12.0, 4.0 * PI * 0.3).unwrap() / (PI * 12.0 / (PI * 12.0).sinh()).sqrt();
        assert!((whittaker_value(12.0, 0.3).unwrap() - direct).abs() < 1e-11 * direct.abs());
        assert!(whittaker_value(101.0, 1.0).is_err());
        assert!(whittaker_value(1.0, 1e-5).is_err());
    }

    #[test]
    fn closed_form_anchor_and_symmetries() {
        let v = t_integral_closed(&spec(0.0, 0.0, 0.0)).unwrap();
        assert!((v.re - PI * PI).abs() < 1e-13 * PI * PI && v.im.abs() < 1e-13);
        let a = t_integral_closed(&spec(1.0, 2.5, 3.0)).unwrap();
        let b = t_integral_closed(&spec(1.0, 2.5, -3.0)).unwrap();
        assert!((a.norm() - b.norm()).abs() < 1e-13 * a.norm());
        for t in [0.0, 0.5, 3.0, 17.0] {
            let c = t_integral_closed(&spec(t, t, 0.0)).unwrap();
            let d = t_integral_degenerate(t).unwrap();
            assert!((c.re - d).abs() <= 1e-12 * d && c.im.abs() <= 1e-12 * d);
        }
    }

    #[test]
    fn mpmath_reference_values() {
        let c = t_integral_closed(&spec(1.0, 2.0, 3.0)).unwrap();
        let expect = Complex64::new(-0.47639167979454939, -0.54285740447250896);
        assert!((c - expect).norm() < 1e-13);
        let w = whittaker_value(5.0, 0.05).unwrap();
        assert!((w + 0.0019884095888767946).abs() < 1e-12 * 0.002);
    }

    #[test]
    fn quadrature_symmetries_and_resolution() {
        let a = t_integral_quadrature(&spec(1.0, 2.0, 0.7)).unwrap();
        let b = t_integral_quadrature(&spec(2.0, 1.0, 0.7)).unwrap();
        assert!((a - b).norm() < 1e-12);
        let c = t_integral_quadrature(&spec(1.0, 2.0, -0.7)).unwrap();
        assert!((a.conj() - c).norm() < 1e-12);
        let s = spec(1.0, 1.0, 2.0);
        let fine = t_integral_quadrature_with(&s, 10).unwrap();
        let coarse = t_integral_quadrature_with(&s, 8).unwrap();
        assert!((fine - coarse).norm() < 1e-10);
    }

    #[test]
    fn ratio_is_one_over_sixteen_pi_with_phase() {
        let grid: Vec<TripleSpectrum> = [
            (0.0, 0.0, 0.0),
            (1.0, 2.0, 3.0),
            (4.0, 0.5, 5.0),
            (2.5, 2.5, 1.0),
        ]
        .iter()
        .map(|&(a, b, c)| spec(a, b, c))
        .collect();
        let r = calibrate_t_integral(&grid).unwrap();
        assert!(r.ratio_spread < 1e-8, "{}", r.ratio_spread);
        assert!((r.measured_constant - T_INTEGRAL_CONSTANT).abs() < 1e-9 * T_INTEGRAL_CONSTANT);
        assert!(r.phase_deviation < 1e-8);
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["grid", "ratio_mean", "ratio_spread", "measured_constant"] {
            assert!(json.get(key).is_some());
        }
    }

    #[test]
    fn assembly_shapes() {
        let zero = RankinParams::default();
        let p = rankin_gamma_assembly(RankinKind::CuspCuspEis, &zero);
        assert_eq!(p.len(), 8);
        assert!(p.shifts.iter().all(|s| *s == Complex64::new(0.5, 0.0)));
        assert_eq!(
            rankin_gamma_assembly(RankinKind::EisEisCusp, &zero).len(),
            4
        );
        assert_eq!(rankin_gamma_assembly(RankinKind::Sym2Cusp, &zero).len(), 8);
        assert!("triple".parse::<RankinKind>().is_err());
        assert_eq!(
            "sym2-cusp".parse::<RankinKind>().unwrap(),
            RankinKind::Sym2Cusp
        );
    }

    #[test]
    fn assembly_modulus_against_stirling() {
        // (t, t_f, t_g) = (0, 10, 10): four shifts off the real axis, four at exactly 1/2
        let p = rankin_gamma_assembly(
            RankinKind::CuspCuspEis,
            &RankinParams {
                t: 0.0,
                t_f: 10.0,
                t_g: 10.0,
                tau: 0.0,
            },
        );
        let exact = p.ln_abs(Complex64::new(0.0, 0.0)).unwrap();
        let mut large = 0.0;
        let mut real_axis = 0;
        for s in &p.shifts {
            // |Γ_C(x+iy)| ≈ 2 (2π)^{-x} √(2π) stirling_envelope(x, y)
            let approx =
                (2.0 * (2.0 * PI).powf(-s.re) * (2.0 * PI).sqrt() * stirling_envelope(s.re, s.im))
                    .ln();
            if s.im == 0.0 {
                real_axis += 1;
                let g = crate::specfun::gamma_c(*s).unwrap().norm().ln();
                // Γ(1/2) = √π against the envelope's √(2π)
                assert!((g - approx - 0.5f64.ln() * 0.5).abs() < 1e-14);
            } else {
                large += approx;
            }
        }
        assert_eq!(real_axis, 4);
        let exact_large = exact
            - 4.0
                * crate::specfun::gamma_c(Complex64::new(0.5, 0.0))
                    .unwrap()
                    .norm()
                    .ln();
        assert!(
            (exact_large - large).abs() < 0.05f64.ln_1p(),
            "{exact_large} {large}"
        );
    }

    #[test]
    fn watson_assembly_properties() {
        let s = spec(0.0, 0.0, 0.0);
        let num = rankin_gamma_assembly(
            RankinKind::CuspCuspEis,
            &RankinParams {
                t: s.t3,
                t_f: s.t1,
                t_g: s.t2,
                tau: 0.0,
            },
        );
        let den = sym2_denominator(&[s.t1, s.t2, s.t3]);
        let mk = |l: f64| CompletedRatio {
            numerator_gammas: num.clone(),
            denominator_gammas: den.clone(),
            finite_part_policy: FinitePartPolicy::SuppliedValue {
                numerator: l,
                denominator: 1.0,
            },
        };
        let k = WatsonConstants::default();
        let a = watson_ratio(&mk(1.0), &k).unwrap();
        assert_eq!(a, watson_ratio(&mk(1.0), &k).unwrap());
        let g = crate::specfun::gamma_c(Complex64::new(0.5, 0.0))
            .unwrap()
            .re;
        let d = crate::specfun::gamma_c(Complex64::new(1.0, 0.0))
            .unwrap()
            .re;
        let expect = k.measured / (8.0 * PI) * g.powi(8) / d.powi(6);
        assert!((a - expect).abs() < 1e-12 * expect);
        let b = watson_ratio(&mk(3.0), &k).unwrap();
        assert!((b / a - 3.0).abs() < 1e-13);
        assert!(matches!(
            watson_ratio(&mk(-1.0), &k),
            Err(Error::PolicyMismatch(_))
        ));
        let glh = CompletedRatio {
            finite_part_policy: FinitePartPolicy::GlhEnvelope { delta: 0.2 },
            ..mk(1.0)
        };
        assert!(matches!(
            watson_ratio(&glh, &k),
            Err(Error::PolicyMismatch(_))
        ));
    }
}
