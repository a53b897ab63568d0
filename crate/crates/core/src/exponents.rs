//! Bound calculus for the spectral expansion of `⟨f² g, u_k⟩`: the exponent
//! `Q1`, truncation and regime split, the per-term envelopes and their
//! aggregation over a model spectrum.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::least_squares;

/// `(t_j; t_f, t_g, t_k)`, all finite and nonnegative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralQuadruple {
    pub t_j: f64,
    pub t_f: f64,
    pub t_g: f64,
    pub t_k: f64,
}

impl SpectralQuadruple {
    pub fn new(t_j: f64, t_f: f64, t_g: f64, t_k: f64) -> Result<SpectralQuadruple> {
        for v in [t_j, t_f, t_g, t_k] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "spectral parameter {v} must be finite and >= 0"
                )));
            }
        }
        Ok(SpectralQuadruple { t_j, t_f, t_g, t_k })
    }

    pub fn scale(&self, c: f64) -> SpectralQuadruple {
        SpectralQuadruple {
            t_j: c * self.t_j,
            t_f: c * self.t_f,
            t_g: c * self.t_g,
            t_k: c * self.t_k,
        }
    }
}

/// The seven absolute values, evaluated literally.
pub fn q1(q: &SpectralQuadruple) -> f64 {
    let SpectralQuadruple { t_j, t_f, t_g, t_k } = *q;
    (0.5 * t_j + t_f).abs()
        + (0.5 * t_j - t_f).abs()
        + 0.5
            * ((t_j + t_g + t_k).abs()
                + (t_j + t_g - t_k).abs()
                + (t_j - t_g + t_k).abs()
                + (t_j - t_g - t_k).abs())
        - t_j
        - 2.0 * t_f
        - t_k
        - t_g
}

/// Piecewise closed form of [`q1`].
pub fn q1_closed(q: &SpectralQuadruple) -> f64 {
    let SpectralQuadruple { t_j, t_f, t_g, t_k } = *q;
    let m = if t_j >= t_g + t_k {
        2.0 * t_j
    } else if t_j >= (t_g - t_k).abs() {
        t_j + t_g + t_k
    } else {
        2.0 * t_g.max(t_k)
    };
    t_j.max(2.0 * t_f) + m - (t_j + 2.0 * t_f + t_g + t_k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LPolicyKind {
    Glh,
    Convexity,
    Subconvex,
}

/// How the central L-value in each term is bounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LPolicy {
    pub kind: LPolicyKind,
    /// `δ` under GLH, the saving under subconvexity, unused for convexity.
    pub exponent_delta: f64,
}

/// Growth of the square-rooted L-value: `(t_g t_j t_f)^δ` or
/// `(t_j² t_f⁶)^E`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum LFactor {
    Glh(f64),
    NumeratorPower(f64),
}

impl LPolicy {
    pub fn glh(delta: f64) -> Result<LPolicy> {
        LPolicy {
            kind: LPolicyKind::Glh,
            exponent_delta: delta,
        }
        .validated()
    }

    pub fn convexity() -> LPolicy {
        LPolicy {
            kind: LPolicyKind::Convexity,
            exponent_delta: 0.0,
        }
    }

    pub fn subconvex(saving: f64) -> Result<LPolicy> {
        LPolicy {
            kind: LPolicyKind::Subconvex,
            exponent_delta: saving,
        }
        .validated()
    }

    pub fn validated(self) -> Result<LPolicy> {
        let d = self.exponent_delta;
        match self.kind {
            LPolicyKind::Glh if !(d > 0.0 && d <= 0.05) => Err(Error::PolicyMismatch(format!(
                "GLH exponent {d} outside (0, 0.05]"
            ))),
            LPolicyKind::Subconvex if !(d > 0.0 && d < 0.125) => Err(Error::PolicyMismatch(
                format!("subconvex saving {d} outside (0, 1/8)"),
            )),
            _ => Ok(self),
        }
    }

    fn factor(&self) -> LFactor {
        match self.kind {
            LPolicyKind::Glh => LFactor::Glh(self.exponent_delta),
            // L ≪ C^{1/4} with C ≍ t_j⁴ t_f¹², square-rooted
            LPolicyKind::Convexity => LFactor::NumeratorPower(0.25),
            LPolicyKind::Subconvex => LFactor::NumeratorPower(0.125 - self.exponent_delta),
        }
    }
}

/// Which term of the spectral expansion the envelope bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnvelopeKind {
    /// `u_k g` against cusp forms `u_j`.
    #[default]
    Cusp,
    /// `E_t g` against cusp forms; `t` sits in the `t_k` slot.
    EisT,
    /// `u_k g` against `E_τ`; `τ` sits in the `t_j` slot.
    EisTau,
    /// `E_t g` against `E_τ`.
    EisEis,
}

impl std::str::FromStr for EnvelopeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cusp" => Ok(EnvelopeKind::Cusp),
            "eis-t" => Ok(EnvelopeKind::EisT),
            "eis-tau" => Ok(EnvelopeKind::EisTau),
            "eis-eis" => Ok(EnvelopeKind::EisEis),
            other => Err(Error::InvalidArgument(format!(
                "unknown envelope kind {other:?}"
            ))),
        }
    }
}

fn ln_guard(x: f64) -> f64 {
    x.max(1.0).ln()
}

fn ln_poly(kind: EnvelopeKind, q: &SpectralQuadruple) -> f64 {
    let j = match kind {
        EnvelopeKind::EisTau | EnvelopeKind::EisEis => q.t_j.ln_1p(),
        _ => ln_guard(q.t_j),
    };
    let k = match kind {
        EnvelopeKind::EisT | EnvelopeKind::EisEis => q.t_k.ln_1p(),
        _ => ln_guard(q.t_k),
    };
    j + ln_guard(q.t_f) + 0.5 * ln_guard(q.t_g) + 0.5 * k
}

fn ln_l_factor(f: LFactor, q: &SpectralQuadruple) -> f64 {
    match f {
        LFactor::Glh(d) => d * (ln_guard(q.t_g) + ln_guard(q.t_j) + ln_guard(q.t_f)),
        LFactor::NumeratorPower(e) => e * (2.0 * ln_guard(q.t_j) + 6.0 * ln_guard(q.t_f)),
    }
}

fn ln_envelope(kind: EnvelopeKind, q: &SpectralQuadruple, l: LFactor, q1_value: f64) -> f64 {
    -FRAC_PI_2 * q1_value - ln_poly(kind, q) + ln_l_factor(l, q)
}

/// Log of the per-term bound `e^{-(π/2)Q1} · L-factor / polynomial`.
pub fn envelope(kind: EnvelopeKind, q: &SpectralQuadruple, policy: &LPolicy) -> Result<f64> {
    let policy = policy.validated()?;
    Ok(ln_envelope(kind, q, policy.factor(), q1(q)))
}

/// `2t_f + t_k + t_g`.
pub fn truncation_threshold(t_f: f64, t_g: f64, t_k: f64) -> f64 {
    2.0 * t_f + t_k + t_g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    ExponentialDecay,
    GlhMain,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::ExponentialDecay => "exponential-decay",
            Regime::GlhMain => "glh-main",
        })
    }
}

fn check_regime_args(t_g: f64, eps: f64) -> Result<()> {
    if !(t_g > 1.0 && t_g.is_finite()) {
        return Err(Error::InvalidArgument(format!("t_g = {t_g} must exceed 1")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε = {eps} outside (0, 1)")));
    }
    Ok(())
}

/// Exponential decay when `2t_f < t_g − t_g^ε`; ties go to the main case.
pub fn regime_classify(t_f: f64, t_g: f64, eps: f64) -> Result<Regime> {
    check_regime_args(t_g, eps)?;
    Ok(if 2.0 * t_f < t_g - t_g.powf(eps) {
        Regime::ExponentialDecay
    } else {
        Regime::GlhMain
    })
}

/// The main-term indicator `t_f > t_g − t_g^ε` in the form of the theorem
/// statement, reported next to [`regime_classify`].
pub fn theorem_indicator(t_f: f64, t_g: f64, eps: f64) -> Result<bool> {
    check_regime_args(t_g, eps)?;
    Ok(t_f > t_g - t_g.powf(eps))
}

/// How `Q1` enters the summed terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Q1Treatment {
    /// `e^{-(π/2)Q1}` kept.
    Exact,
    /// `Q1 ≥ 0` used, i.e. the exponential factor replaced by 1.
    TrivialBound,
}

/// Model choices for [`aggregate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateOptions {
    /// Terms per unit `t_j` interval grow like `t_j^{density_exponent}`.
    pub density_exponent: f64,
    pub q1_treatment: Q1Treatment,
    pub kind: EnvelopeKind,
    /// `ε` of the regime split.
    pub epsilon: f64,
}

impl Default for AggregateOptions {
    fn default() -> Self {
        AggregateOptions {
            density_exponent: 2.0,
            q1_treatment: Q1Treatment::Exact,
            kind: EnvelopeKind::Cusp,
            epsilon: 0.1,
        }
    }
}

impl AggregateOptions {
    /// One term per unit interval and `Q1 ≥ 0`: the truncated sum as
    /// displayed after dropping the exponential.
    pub fn displayed_sum() -> Self {
        AggregateOptions {
            density_exponent: 0.0,
            q1_treatment: Q1Treatment::TrivialBound,
            ..Default::default()
        }
    }
}

/// Aggregated bound at one `(t_f, t_g, t_k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub t_f: f64,
    pub t_g: f64,
    pub t_k: f64,
    /// `Q1` at the dominant term.
    pub q1: f64,
    /// Log-envelope of the dominant term.
    pub envelope: f64,
    pub dominant_t_j: f64,
    pub regime: Regime,
    /// `t_f > t_g − t_g^ε`.
    pub theorem_main_side: bool,
    /// Log of the sum over `t_j < threshold`.
    pub aggregate: f64,
    /// Log of the sum over `t_j ≥ threshold`, always with the exact `Q1`.
    pub tail: f64,
    pub threshold: f64,
    pub density_exponent: f64,
}

/// Columns of [`write_reports_csv`].
pub const REPORT_CSV_HEADER: &str =
    "t_f,t_g,t_k,q1,envelope,dominant_t_j,regime,theorem_main_side,aggregate,tail,threshold,density_exponent";

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
            self.t_f,
            self.t_g,
            self.t_k,
            self.q1,
            self.envelope,
            self.dominant_t_j,
            self.regime,
            self.theorem_main_side,
            self.aggregate,
            self.tail,
            self.threshold,
            self.density_exponent
        )
    }
}

/// One row per report under [`REPORT_CSV_HEADER`].
pub fn write_reports_csv<W: Write>(reports: &[BoundReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{REPORT_CSV_HEADER}")?;
    for r in reports {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Pairwise sum, fixed order.
fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// `ln Σ exp(l)` in a fixed order.
fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    let scaled: Vec<f64> = logs.iter().map(|l| (l - m).exp()).collect();
    m + pairwise_sum(&scaled).ln()
}

const TAIL_CUTOFF: f64 = 60.0;
const TAIL_MAX_TERMS: usize = 10_000_000;

/// [`aggregate_with`] under the default model with the given density.
pub fn aggregate_spectral_sum(
    t_f: f64,
    t_g: f64,
    t_k: f64,
    policy: &LPolicy,
    density_exponent: f64,
) -> Result<BoundReport> {
    aggregate_with(
        t_f,
        t_g,
        t_k,
        policy,
        &AggregateOptions {
            density_exponent,
            ..Default::default()
        },
    )
}

/// Sums the envelopes over `t_j = 1, 2, …` below the truncation threshold,
/// weighted by the density model, and the exact tail above it.
pub fn aggregate_with(
    t_f: f64,
    t_g: f64,
    t_k: f64,
    policy: &LPolicy,
    opts: &AggregateOptions,
) -> Result<BoundReport> {
    aggregate_factor(t_f, t_g, t_k, policy.validated()?.factor(), opts)
}

fn aggregate_factor(
    t_f: f64,
    t_g: f64,
    t_k: f64,
    l: LFactor,
    opts: &AggregateOptions,
) -> Result<BoundReport> {
    for v in [t_f, t_g, t_k] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "aggregate parameter {v} must be positive"
            )));
        }
    }
    if !opts.density_exponent.is_finite() {
        return Err(Error::InvalidArgument(
            "density exponent must be finite".into(),
        ));
    }
    let threshold = truncation_threshold(t_f, t_g, t_k);
    if threshold <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "threshold {threshold} leaves no t_j >= 1 below it"
        )));
    }
    let term = |t_j: f64, treatment: Q1Treatment| -> (f64, f64) {
        let q = SpectralQuadruple { t_j, t_f, t_g, t_k };
        let q1v = q1(&q);
        let used = match treatment {
            Q1Treatment::Exact => q1v,
            Q1Treatment::TrivialBound => 0.0,
        };
        (
            q1v,
            ln_envelope(opts.kind, &q, l, used) + opts.density_exponent * ln_guard(t_j),
        )
    };
    let head_n = (threshold.ceil() as usize).saturating_sub(1).max(1);
    let mut head = Vec::with_capacity(head_n);
    let (mut best, mut best_at) = (f64::NEG_INFINITY, 0usize);
    for k in 1..=head_n {
        let (_, l) = term(k as f64, opts.q1_treatment);
        if l > best {
            best = l;
            best_at = k;
        }
        head.push(l);
    }
    let aggregate = log_sum_exp(&head);
    let mut tail = Vec::new();
    let mut k = head_n + 1;
    loop {
        let (_, l) = term(k as f64, Q1Treatment::Exact);
        tail.push(l);
        // beyond the threshold Q1 grows linearly and the terms decay
        if l < aggregate - TAIL_CUTOFF && tail.len() > 1 && l < tail[tail.len() - 2] {
            break;
        }
        if tail.len() >= TAIL_MAX_TERMS {
            return Err(Error::Nonconvergence(
                "tail of the spectral sum did not decay".into(),
            ));
        }
        k += 1;
    }
    let dominant = best_at as f64;
    let (q1v, env) = term(dominant, opts.q1_treatment);
    Ok(BoundReport {
        t_f,
        t_g,
        t_k,
        q1: q1v,
        envelope: env - opts.density_exponent * ln_guard(dominant),
        dominant_t_j: dominant,
        regime: if t_g > 1.0 {
            regime_classify(t_f, t_g, opts.epsilon)?
        } else {
            Regime::GlhMain
        },
        theorem_main_side: if t_g > 1.0 {
            theorem_indicator(t_f, t_g, opts.epsilon)?
        } else {
            true
        },
        aggregate,
        tail: log_sum_exp(&tail),
        threshold,
        density_exponent: opts.density_exponent,
    })
}

/// `t_j⁴ t_f¹²`.
pub fn conductor(t_j: f64, t_f: f64) -> f64 {
    t_j.powi(4) * t_f.powi(12)
}

/// Log-aggregate slope in `ln t_f` along `t_g = t_f` when the L-factor is
/// `(t_j² t_f⁶)^E`.
pub fn numerator_power_slope(
    grid: &[f64],
    t_k: f64,
    e: f64,
    opts: &AggregateOptions,
) -> Result<f64> {
    let logs: Vec<f64> = grid
        .iter()
        .map(|&t| {
            aggregate_factor(t, t, t_k, LFactor::NumeratorPower(e), opts).map(|r| r.aggregate)
        })
        .collect::<Result<_>>()?;
    let ln_grid: Vec<f64> = grid.iter().map(|t| t.ln()).collect();
    Ok(least_squares(&ln_grid, &logs)?.slope)
}

/// Result of [`subconvexity_requirement`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubconvexityReport {
    /// Largest `E` for which the aggregate still decreases along the grid.
    pub exponent: f64,
    pub tolerance: f64,
    pub slope_at_zero: f64,
}

/// Bisection, to `10⁻³`, for the supremum of `E` with decreasing
/// log-aggregate along `t_g = t_f ∈ grid`.
pub fn subconvexity_requirement(
    grid: &[f64],
    t_k: f64,
    opts: &AggregateOptions,
) -> Result<SubconvexityReport> {
    const TOL: f64 = 1e-3;
    if grid.len() < 2 {
        return Err(Error::InvalidArgument(
            "subconvexity grid needs at least two t_f values".into(),
        ));
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    let slope_at_zero = numerator_power_slope(grid, t_k, lo, opts)?;
    if slope_at_zero >= 0.0 || numerator_power_slope(grid, t_k, hi, opts)? <= 0.0 {
        return Err(Error::Nonconvergence(
            "no sign change of the aggregate slope on E ∈ [0, 1/2]".into(),
        ));
    }
    while hi - lo > TOL {
        let mid = 0.5 * (lo + hi);
        if numerator_power_slope(grid, t_k, mid, opts)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(SubconvexityReport {
        exponent: 0.5 * (lo + hi),
        tolerance: TOL,
        slope_at_zero,
    })
}

/// `λ^{-ℓ}` for `λ ≥ 1`.
pub fn spectral_weight(lambda: f64, ell: u32) -> Result<f64> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} must be >= 1")));
    }
    Ok(lambda.powi(-(ell as i32)))
}

/// `ln[(t_f(1+|2t_f−t_g|))^{−r/4+ε} (t_f t_g^{1/2})^{−s+ε}]` for a field
/// with `r` real and `s` complex places.
pub fn number_field_envelope_ln(t_f: f64, t_g: f64, r: u32, s: u32, eps: f64) -> Result<f64> {
    if !(t_f > 0.0 && t_g > 0.0 && eps >= 0.0) {
        return Err(Error::InvalidArgument(
            "number-field envelope needs t_f, t_g > 0 and ε >= 0".into(),
        ));
    }
    let a = (t_f * (1.0 + (2.0 * t_f - t_g).abs())).ln();
    let b = t_f.ln() + 0.5 * t_g.ln();
    Ok((-(r as f64) / 4.0 + eps) * a + (-(s as f64) + eps) * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::log_log_slope;

    fn quad(a: f64, b: f64, c: f64, d: f64) -> SpectralQuadruple {
        SpectralQuadruple::new(a, b, c, d).unwrap()
    }

    #[test]
    fn q1_examples() {
        assert_eq!(q1(&quad(2.0, 2.0, 1.0, 1.0)), 0.0);
        assert_eq!(q1(&quad(10.0, 1.0, 1.0, 1.0)), 16.0);
        assert_eq!(q1_closed(&quad(2.0, 2.0, 1.0, 1.0)), 0.0);
        assert_eq!(q1(&quad(3.0, 1.5, 4.0, 0.5)), q1(&quad(3.0, 1.5, 0.5, 4.0)));
        // 10.5 + 9.5 + (12 + 10 + 8 + 10)/2 − 32
        assert_eq!(q1(&quad(1.0, 10.0, 10.0, 1.0)), 8.0);
        assert!(SpectralQuadruple::new(-1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn zero_set_of_q1() {
        let n = 13;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let q = quad(
                            a as f64 * 0.5,
                            b as f64 * 0.5,
                            c as f64 * 0.5,
                            d as f64 * 0.5,
                        );
                        let in_set = q.t_j <= 2.0 * q.t_f
                            && (q.t_g - q.t_k).abs() <= q.t_j
                            && q.t_j <= q.t_g + q.t_k;
                        assert_eq!(q1_closed(&q) == 0.0, in_set, "{q:?}");
                        assert_eq!(q1(&q) == 0.0, in_set, "{q:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn policies_validate() {
        assert!(LPolicy::glh(0.0).is_err());
        assert!(LPolicy::glh(0.06).is_err());
        assert!(LPolicy::glh(0.05).is_ok());
        assert!(LPolicy::subconvex(0.125).is_err());
        assert!(LPolicy::subconvex(0.01).is_ok());
        let bad = LPolicy {
            kind: LPolicyKind::Glh,
            exponent_delta: 1.0,
        };
        assert!(matches!(
            envelope(EnvelopeKind::Cusp, &quad(1.0, 1.0, 1.0, 1.0), &bad),
            Err(Error::PolicyMismatch(_))
        ));
    }

    #[test]
    fn envelope_examples() {
        let glh = LPolicy::glh(0.01).unwrap();
        let q = quad(1.0, 10.0, 10.0, 1.0);
        let e = envelope(EnvelopeKind::Cusp, &q, &glh).unwrap();
        let expect = -FRAC_PI_2 * q1(&q) - (10.0 * 10f64.sqrt()).ln() + 0.01 * 100f64.ln();
        assert!((e - expect).abs() < 1e-14);
        let lo = envelope(EnvelopeKind::Cusp, &quad(25.0, 5.0, 5.0, 5.0), &glh).unwrap();
        let hi = envelope(EnvelopeKind::Cusp, &quad(50.0, 5.0, 5.0, 5.0), &glh).unwrap();
        assert!(hi < lo);
        let tiny = LPolicy::glh(1e-6).unwrap();
        for s in [10.0, 100.0, 1000.0] {
            let q = quad(s, s, s, 1.0);
            let a = envelope(EnvelopeKind::Cusp, &q, &tiny).unwrap();
            let b = envelope(EnvelopeKind::Cusp, &q, &LPolicy::convexity()).unwrap();
            assert!(a < b);
        }
        assert!("eis".parse::<EnvelopeKind>().is_err());
        // (1+|t|) replaces the guarded t_k only for kinds with an Eisenstein t
        let z = quad(0.0, 2.0, 2.0, 0.0);
        let c = envelope(EnvelopeKind::Cusp, &z, &glh).unwrap();
        let ee = envelope(EnvelopeKind::EisEis, &z, &glh).unwrap();
        assert!(c.is_finite() && ee.is_finite());
        assert_eq!(c, ee);
        let w = quad(3.0, 2.0, 2.0, 3.0);
        let d = envelope(EnvelopeKind::Cusp, &w, &glh).unwrap()
            - envelope(EnvelopeKind::EisEis, &w, &glh).unwrap();
        assert!((d - (4f64.ln() - 3f64.ln()) * 1.5).abs() < 1e-14);
    }

    #[test]
    fn threshold_and_regimes() {
        assert_eq!(truncation_threshold(0.0, 0.0, 0.0), 0.0);
        assert_eq!(truncation_threshold(5.0, 3.0, 1.0), 14.0);
        assert_eq!(
            regime_classify(1.0, 100.0, 0.1).unwrap(),
            Regime::ExponentialDecay
        );
        assert_eq!(regime_classify(100.0, 100.0, 0.1).unwrap(), Regime::GlhMain);
        let t_g: f64 = 100.0;
        let tie = 0.5 * (t_g - t_g.powf(0.1));
        assert_eq!(regime_classify(tie, t_g, 0.1).unwrap(), Regime::GlhMain);
        assert!(regime_classify(1.0, 1.0, 0.1).is_err());
        assert!(regime_classify(1.0, 10.0, 1.0).is_err());
        // the two splits disagree for t_g/2 < t_f < t_g − t_g^ε
        assert_eq!(regime_classify(60.0, 100.0, 0.1).unwrap(), Regime::GlhMain);
        assert!(!theorem_indicator(60.0, 100.0, 0.1).unwrap());
        for t_j in [14.5, 20.0, 100.0] {
            assert!(q1(&quad(t_j, 5.0, 3.0, 1.0)) > 0.0);
        }
    }

    #[test]
    fn aggregate_tail_and_exponential_regime() {
        let glh = LPolicy::glh(0.001).unwrap();
        let r = aggregate_spectral_sum(50.0, 50.0, 1.0, &glh, 2.0).unwrap();
        assert!(r.tail - r.aggregate <= 1e-10f64.ln());
        assert!(r.q1 >= 0.0 && r.threshold == 151.0);
        let r = aggregate_spectral_sum(5.0, 100.0, 1.0, &LPolicy::convexity(), 2.0).unwrap();
        assert_eq!(r.regime, Regime::ExponentialDecay);
        assert!(r.aggregate <= -FRAC_PI_2 * 90.0 + 3.0 * 100f64.ln());
        let csv = {
            let mut v = Vec::new();
            write_reports_csv(&[r], &mut v).unwrap();
            String::from_utf8(v).unwrap()
        };
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(
            csv.lines().nth(1).unwrap().split(',').count(),
            REPORT_CSV_HEADER.split(',').count()
        );
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["regime"], "exponential-decay");
        assert!(aggregate_spectral_sum(0.0, 1.0, 1.0, &glh, 2.0).is_err());
    }

    #[test]
    fn displayed_sum_slope() {
        let glh = LPolicy::glh(0.001).unwrap();
        let grid = [50.0, 100.0, 200.0, 400.0];
        let vals: Vec<f64> = grid
            .iter()
            .map(|&t| {
                aggregate_with(t, t, 1.0, &glh, &AggregateOptions::displayed_sum())
                    .unwrap()
                    .aggregate
                    .exp()
            })
            .collect();
        let s = log_log_slope(&grid, &vals).unwrap();
        assert!((-1.7..=-1.3).contains(&s), "{s}");
    }

    #[test]
    fn subconvexity_slopes() {
        let grid = [50.0, 100.0, 200.0, 400.0];
        let opts = AggregateOptions::displayed_sum();
        assert!(numerator_power_slope(&grid, 1.0, 0.05, &opts).unwrap() < 0.0);
        assert!(numerator_power_slope(&grid, 1.0, 0.2, &opts).unwrap() > 0.0);
        let r = subconvexity_requirement(&grid, 1.0, &opts).unwrap();
        assert!(r.exponent > 0.05 && r.exponent < 0.2);
    }

    #[test]
    fn conductor_weight_and_number_field() {
        assert_eq!(conductor(1.0, 1.0), 1.0);
        assert_eq!(conductor(2.0, 1.0), 16.0);
        assert!((conductor(10.0, 10.0) / 1e16 - 1.0).abs() < 1e-15);
        assert_eq!(spectral_weight(7.0, 0).unwrap(), 1.0);
        assert_eq!(spectral_weight(4.0, 2).unwrap(), 1.0 / 16.0);
        assert!(spectral_weight(0.5, 1).is_err());
        let mut last = f64::INFINITY;
        for lambda in [10.0f64, 100.0, 1e3, 1e4] {
            let v = lambda.powi(5) * spectral_weight(lambda, 6).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(last <= 1e-4);
        // r = 0, s = 1: (t_f(1+|2t_f−t_g|))^{ε} (t_f t_g^{1/2})^{-1+ε}
        let v = number_field_envelope_ln(10.0, 40.0, 0, 1, 0.01).unwrap();
        let expect = 0.01 * 210f64.ln() - 0.99 * (10.0 * 40f64.sqrt()).ln();
        assert!((v - expect).abs() < 1e-14);
        let w = number_field_envelope_ln(10.0, 40.0, 2, 0, 0.0).unwrap();
        assert!((w + 0.5 * 210f64.ln()).abs() < 1e-14);
    }
}
