//! Cusp forms on `H³` given by ingested Fourier coefficients, first
//! coefficient normalization and Rankin–Selberg coefficient series.
//!
//! Coefficient file format (UTF-8 CSV):
//!
//! ```text
//! # norm_coverage = 2
//! # symmetry = none
//! D,t,a,b,re_rho,im_rho
//! -1,9.5336952613535575,1,0,1.0,0.0
//! ```
//!
//! One row per `μ = a + b·ω_K`. Lines starting with `#` are comments; a
//! comment of the form `# key = value` with key `D`, `t`, `norm_coverage`
//! or `symmetry` is a directive. Without a `norm_coverage` directive the
//! coverage is the largest `X` such that every `μ` with `N(μ) ≤ X` has a
//! row. With `symmetry = units` a row stands for its whole unit class.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::eisenstein::HyperbolicPoint;
use crate::error::{Error, Result};
use crate::quadfield::{enumerate_by_norm, Field, RingElement};
use crate::specfun::bessel::{ln_cosh_half_pi, scaled_ln, U_MAX};
use crate::specfun::mellin::{mellin_kk_closed, mellin_normalization};
use crate::specfun::quad::{exp_sinh, ExpSinh};

pub const HEADER: &str = "D,t,a,b,re_rho,im_rho";

/// How a stored coefficient extends to other indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    /// Every `μ` is stored separately.
    None,
    /// `ρ(εμ) = ρ(μ)` for every unit `ε`; one row per unit class.
    Units,
}

/// A cusp form with spectral parameter `t` (eigenvalue `1 + t²`) and its
/// coefficients `ρ(μ)` for `N(μ) ≤ norm_coverage`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspFormData {
    pub field: Field,
    pub t: f64,
    pub symmetry: Symmetry,
    pub coefficients: BTreeMap<(i64, i64), Complex64>,
    pub norm_coverage: i64,
}

impl CuspFormData {
    /// Validates finiteness, the absence of a constant term and coverage.
    pub fn new(
        field: Field,
        t: f64,
        symmetry: Symmetry,
        coefficients: BTreeMap<(i64, i64), Complex64>,
        norm_coverage: i64,
    ) -> Result<CuspFormData> {
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("spectral parameter {t}")));
        }
        if norm_coverage < 0 {
            return Err(Error::InvalidArgument(
                "norm_coverage must be nonnegative".into(),
            ));
        }
        if coefficients.contains_key(&(0, 0)) {
            return Err(Error::InvalidArgument(
                "cusp forms have no constant term".into(),
            ));
        }
        if let Some((k, _)) = coefficients
            .iter()
            .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::InvalidArgument(format!(
                "coefficient at {k:?} is not finite"
            )));
        }
        let f = CuspFormData {
            field,
            t,
            symmetry,
            coefficients,
            norm_coverage,
        };
        if let Some(w) = f.first_gap(norm_coverage) {
            return Err(Error::CoverageGap {
                a: w.a,
                b: w.b,
                norm: w.norm(),
            });
        }
        Ok(f)
    }

    /// `ρ(1) = rho1`, every other coefficient with `N(μ) ≤ 1` zero.
    pub fn single_term(field: Field, t: f64, rho1: Complex64) -> Result<CuspFormData> {
        let mut c = BTreeMap::new();
        for u in field.units() {
            c.insert(
                (u.a, u.b),
                if u == field.one() {
                    rho1
                } else {
                    Complex64::new(0.0, 0.0)
                },
            );
        }
        CuspFormData::new(field, t, Symmetry::None, c, 1)
    }

    fn key(&self, w: &RingElement) -> (i64, i64) {
        match self.symmetry {
            Symmetry::None => (w.a, w.b),
            Symmetry::Units => {
                let c = w.canonical();
                (c.a, c.b)
            }
        }
    }

    /// `ρ(μ)`, if recorded.
    pub fn coefficient(&self, w: &RingElement) -> Option<Complex64> {
        self.coefficients.get(&self.key(w)).copied()
    }

    fn first_gap(&self, x: i64) -> Option<RingElement> {
        enumerate_by_norm(&self.field, x)
            .elements
            .into_iter()
            .find(|w| self.coefficient(w).is_none())
    }

    /// Coefficientwise sum; both forms must share field, `t` and symmetry.
    pub fn add(&self, other: &CuspFormData) -> Result<CuspFormData> {
        if self.field != other.field || self.t != other.t || self.symmetry != other.symmetry {
            return Err(Error::FieldMismatch(
                "forms differ in field, spectral parameter or symmetry".into(),
            ));
        }
        let mut c = self.coefficients.clone();
        for (k, v) in &other.coefficients {
            *c.entry(*k).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        let cov = self.norm_coverage.min(other.norm_coverage);
        Ok(CuspFormData {
            coefficients: c,
            norm_coverage: cov,
            ..self.clone()
        })
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T> {
    s.trim()
        .parse::<T>()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from {:?}", s.trim())))
}

/// Reads the coefficient format described in the module docs.
pub fn load_coefficients<R: BufRead>(source: R) -> Result<CuspFormData> {
    let mut d: Option<i64> = None;
    let mut t: Option<f64> = None;
    let mut coverage: Option<i64> = None;
    let mut symmetry = Symmetry::None;
    let mut header_seen = false;
    let mut rows: Vec<(usize, i64, i64, Complex64)> = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let n = i + 1;
        let line = line?;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        if let Some(comment) = text.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                match k.trim() {
                    "D" => d = Some(parse_num(v, "D", n)?),
                    "t" => t = Some(parse_num(v, "t", n)?),
                    "norm_coverage" => coverage = Some(parse_num(v, "norm_coverage", n)?),
                    "symmetry" => {
                        symmetry = match v.trim() {
                            "none" => Symmetry::None,
                            "units" => Symmetry::Units,
                            other => {
                                return Err(parse_err(n, format!("unknown symmetry {other:?}")))
                            }
                        }
                    }
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = text.split(',').map(str::trim).collect();
            if cols.join(",") != HEADER {
                return Err(parse_err(n, format!("expected header {HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        let cols: Vec<&str> = text.split(',').collect();
        if cols.len() != 6 {
            return Err(parse_err(
                n,
                format!("expected 6 columns, found {}", cols.len()),
            ));
        }
        let row_d: i64 = parse_num(cols[0], "D", n)?;
        let row_t: f64 = parse_num(cols[1], "t", n)?;
        match d {
            Some(v) if v != row_d => {
                return Err(parse_err(n, format!("D = {row_d} differs from {v}")))
            }
            _ => d = Some(row_d),
        }
        match t {
            Some(v) if v.to_bits() != row_t.to_bits() => {
                return Err(parse_err(n, format!("t = {row_t} differs from {v}")))
            }
            _ => t = Some(row_t),
        }
        let a: i64 = parse_num(cols[2], "a", n)?;
        let b: i64 = parse_num(cols[3], "b", n)?;
        let re: f64 = parse_num(cols[4], "re_rho", n)?;
        let im: f64 = parse_num(cols[5], "im_rho", n)?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(parse_err(n, "coefficient is not finite"));
        }
        if a == 0 && b == 0 {
            return Err(parse_err(n, "μ = 0 is not a cusp-form index"));
        }
        rows.push((n, a, b, Complex64::new(re, im)));
    }
    if !header_seen {
        return Err(parse_err(0, "missing header"));
    }
    let d = d.ok_or_else(|| parse_err(0, "no rows and no D directive"))?;
    let field = Field::new(d)?;
    let t = t.unwrap_or(0.0);
    let mut coefficients = BTreeMap::new();
    for (n, a, b, v) in rows {
        let w = field.element(a, b);
        let key = match symmetry {
            Symmetry::None => (a, b),
            Symmetry::Units => {
                let c = w.canonical();
                (c.a, c.b)
            }
        };
        if coefficients.insert(key, v).is_some() {
            return Err(Error::DuplicateIndex { a, b, line: n });
        }
    }
    let probe = CuspFormData {
        field,
        t,
        symmetry,
        coefficients,
        norm_coverage: 0,
    };
    let norm_coverage = match coverage {
        Some(c) => c,
        None => inferred_coverage(&probe),
    };
    CuspFormData::new(field, t, symmetry, probe.coefficients, norm_coverage)
}

fn inferred_coverage(f: &CuspFormData) -> i64 {
    let max_norm = f
        .coefficients
        .keys()
        .map(|&(a, b)| f.field.norm_of(a, b))
        .max()
        .unwrap_or(0);
    match f.first_gap(max_norm) {
        Some(w) => w.norm() - 1,
        None => max_norm,
    }
}

/// Writes `f` so that [`load_coefficients`] returns it unchanged.
pub fn write_coefficients<W: Write>(f: &CuspFormData, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# D = {}", f.field.d())?;
    writeln!(out, "# t = {:.16e}", f.t)?;
    writeln!(out, "# norm_coverage = {}", f.norm_coverage)?;
    let sym = match f.symmetry {
        Symmetry::None => "none",
        Symmetry::Units => "units",
    };
    writeln!(out, "# symmetry = {sym}")?;
    writeln!(out, "{HEADER}")?;
    for (&(a, b), v) in &f.coefficients {
        writeln!(
            out,
            "{},{:.16e},{},{},{:.16e},{:.16e}",
            f.field.d(),
            f.t,
            a,
            b,
            v.re,
            v.im
        )?;
    }
    Ok(())
}

/// Value of a cusp form and whether its truncation may be unsafe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspEval {
    pub value: Complex64,
    /// Set when the first omitted Bessel argument is below `t + 5t^{1/3}`.
    pub tail_risk: bool,
}

fn next_norm_above(field: &Field, x: i64) -> i64 {
    let ad = field.d().abs();
    let mut n = x + 1;
    loop {
        let bmax = ((4 * n / ad) as f64).sqrt() as i64 + 1;
        let amax = (n as f64).sqrt() as i64 + bmax + 1;
        for b in 0..=bmax {
            for a in -amax..=amax {
                if field.norm_of(a, b) == n {
                    return n;
                }
            }
        }
        n += 1;
    }
}

/// `Σ_{0 < N(μ) ≤ coverage} ρ(μ) r K_{it}(2π|μ̃|r) e(⟨μ̃, z⟩)`, `μ̃ = 2μ̄/√d_K`.
pub fn cuspform_eval(f: &CuspFormData, p: &HyperbolicPoint) -> Result<CuspEval> {
    if !(1e-2..=1e2).contains(&p.r) {
        return Err(Error::OutOfWindow(format!(
            "r = {} outside [1e-2, 1e2]",
            p.r
        )));
    }
    let t = f.t.abs();
    let sqd = f.field.sqrt_abs_disc();
    let scale = 4.0 * PI * p.r / sqd;
    let lc = ln_cosh_half_pi(t);
    let z = p.z();
    let mut acc = Complex64::new(0.0, 0.0);
    for w in enumerate_by_norm(&f.field, f.norm_coverage).elements {
        let rho = match f.coefficient(&w) {
            Some(v) if v.norm() > 0.0 => v,
            _ => continue,
        };
        let u = scale * w.abs();
        if u > U_MAX {
            continue;
        }
        let k = scaled_ln(t, u)?;
        let mag = (rho.norm().ln() + k.ln_abs - lc).exp() * k.sign;
        // e(⟨μ̃, z⟩) = exp(-4πi Im(μz)/√|d_K|)
        let phase = Complex64::from_polar(1.0, -4.0 * PI * (w.to_complex() * z).im / sqd);
        acc += rho / rho.norm() * mag * p.r * phase;
    }
    let next = next_norm_above(&f.field, f.norm_coverage);
    let u_next = scale * (next as f64).sqrt();
    Ok(CuspEval {
        value: acc,
        tail_risk: u_next < t + 5.0 * t.cbrt(),
    })
}

/// `Λ(1, sym² f)` and the implied `|ρ(1)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationRecord {
    pub lambda_sym2: f64,
    pub rho1_abs: f64,
}

/// `|ρ(1)| = (√|d_K| Λ(1, sym² f) / 4)^{-1/2}`.
pub fn normalize_first_coeff(field: &Field, lambda_sym2: f64) -> Result<NormalizationRecord> {
    if !(lambda_sym2 > 0.0 && lambda_sym2.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda_sym2 = {lambda_sym2} must be positive"
        )));
    }
    let rho1_abs = (field.sqrt_abs_disc() * lambda_sym2 / 4.0).powf(-0.5);
    Ok(NormalizationRecord {
        lambda_sym2,
        rho1_abs,
    })
}

/// Base to which the series exponent is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentBase {
    /// `|μ|^{s}`.
    #[default]
    Modulus,
    /// `N(μ)^{s}`.
    Norm,
}

/// `Σ_{0 < N(μ) ≤ X} ρ_f(μ) conj(ρ_g(μ)) / base(μ)^{s}`.
pub fn rs_coefficient_series(
    f: &CuspFormData,
    g: &CuspFormData,
    s: Complex64,
    x: i64,
    base: ExponentBase,
) -> Result<Complex64> {
    if f.field != g.field {
        return Err(Error::FieldMismatch(format!("{} vs {}", f.field, g.field)));
    }
    let available = f.norm_coverage.min(g.norm_coverage);
    if x > available {
        return Err(Error::CoverageExceeded {
            requested: x,
            available,
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for w in enumerate_by_norm(&f.field, x).elements {
        let (Some(a), Some(b)) = (f.coefficient(&w), g.coefficient(&w)) else {
            continue;
        };
        let ln_base = match base {
            ExponentBase::Modulus => 0.5 * (w.norm() as f64).ln(),
            ExponentBase::Norm => (w.norm() as f64).ln(),
        };
        acc += a * b.conj() * (-s * ln_base).exp();
    }
    Ok(acc)
}

/// `∫_0^∞ K_{it_f}(2πr) K_{it_g}(2πr) r^{s} dr/r` by exp-sinh quadrature.
pub fn unfolding_integral(t_f: f64, t_g: f64, s: Complex64) -> Result<Complex64> {
    if !(s.re > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "Re(s) must exceed 1, got {s}"
        )));
    }
    let (tf, tg) = (t_f.abs(), t_g.abs());
    let (cf, cg) = (ln_cosh_half_pi(tf), ln_cosh_half_pi(tg));
    let mut failure = None;
    let integrand = |r: f64| -> Complex64 {
        let u = 2.0 * PI * r;
        match scaled_ln(tf, u).and_then(|a| scaled_ln(tg, u).map(|b| (a, b))) {
            Ok((a, b)) => {
                ((s - 1.0) * r.ln() + (a.ln_abs - cf + b.ln_abs - cg)).exp() * (a.sign * b.sign)
            }
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let opts = ExpSinh {
        scale: 1.0 / (2.0 * PI),
        rel_tol: 1e-12,
        abs_tol: 1e-15,
        max_levels: 9,
    };
    let v = exp_sinh(integrand, opts)?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// Gamma-product prediction for [`unfolding_integral`]:
/// `(2π)^{-s} 2^{s-3} Γ(s)^{-1} Π_{±,±} Γ((s ± it_f ± it_g)/2)`.
pub fn unfolding_prediction(t_f: f64, t_g: f64, s: Complex64) -> Result<Complex64> {
    let lambda = s - 1.0;
    let closed = mellin_kk_closed(lambda, Complex64::new(0.0, t_f), Complex64::new(0.0, t_g))?;
    Ok((-s * (2.0 * PI).ln()).exp() * mellin_normalization(lambda) * closed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_k;

    fn gi() -> Field {
        Field::new(-1).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn load(text: &str) -> Result<CuspFormData> {
        load_coefficients(text.as_bytes())
    }

    #[test]
    fn empty_form_is_zero() {
        let f = load("# D = -1\n# t = 3.0\n# norm_coverage = 0\nD,t,a,b,re_rho,im_rho\n").unwrap();
        assert_eq!(f.norm_coverage, 0);
        let v = cuspform_eval(&f, &HyperbolicPoint::new(0.1, 0.2, 0.5).unwrap()).unwrap();
        assert_eq!(v.value, c(0.0, 0.0));
    }

    #[test]
    fn duplicate_and_parse_errors() {
        let dup = "D,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0,0.0\n# comment\n-1,2.0,1,0,2.0,0.0\n";
        assert_eq!(
            load(dup),
            Err(Error::DuplicateIndex {
                a: 1,
                b: 0,
                line: 4
            })
        );
        let bad = "D,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0,0.0\n-1,2.0,x,0,1.0,0.0\n";
        assert!(matches!(load(bad), Err(Error::Parse { line: 3, .. })));
        let cols = "D,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0\n";
        assert!(matches!(load(cols), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(
            load("D,t,a,b\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let mixed = "D,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0,0.0\n-3,2.0,0,1,1.0,0.0\n";
        assert!(matches!(load(mixed), Err(Error::Parse { line: 3, .. })));
        let gap = "# norm_coverage = 2\nD,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0,0.0\n";
        assert!(matches!(load(gap), Err(Error::CoverageGap { norm: 1, .. })));
        let unit =
            "# symmetry = units\nD,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0,0.0\n-1,2.0,0,1,1.0,0.0\n";
        assert!(matches!(
            load(unit),
            Err(Error::DuplicateIndex { line: 4, .. })
        ));
    }

    #[test]
    fn coverage_inference_and_symmetry() {
        let text = "# symmetry = units\nD,t,a,b,re_rho,im_rho\n-1,2.0,1,0,1.0,0.0\n-1,2.0,1,1,0.5,0.0\n-1,2.0,3,0,0.25,0.0\n";
        let f = load(text).unwrap();
        // 2 is missing, so coverage stops at norm 3
        assert_eq!(f.norm_coverage, 3);
        assert_eq!(f.coefficient(&gi().element(-1, 1)), Some(c(0.5, 0.0)));
    }

    #[test]
    fn single_term_value_and_periodicity() {
        let t = 2.5;
        let f = CuspFormData::single_term(gi(), t, c(0.7, -0.2)).unwrap();
        let p = HyperbolicPoint::new(0.13, -0.41, 0.6).unwrap();
        let v = cuspform_eval(&f, &p).unwrap().value;
        // μ = 1: |μ̃| = 1, e(⟨1̃, z⟩) = exp(-2πi y)
        let expect = c(0.7, -0.2)
            * p.r
            * bessel_k(t, 2.0 * PI * p.r).unwrap()
            * Complex64::from_polar(1.0, -2.0 * PI * p.y);
        assert!((v - expect).norm() < 1e-14 * expect.norm());
        let q = HyperbolicPoint::new(p.x + 1.0, p.y, p.r).unwrap();
        assert!((cuspform_eval(&f, &q).unwrap().value - v).norm() < 1e-10);
        assert!(
            cuspform_eval(&f, &HyperbolicPoint::new(0.0, 0.0, 0.05).unwrap())
                .unwrap()
                .tail_risk
        );
        assert!(
            !cuspform_eval(&f, &HyperbolicPoint::new(0.0, 0.0, 5.0).unwrap())
                .unwrap()
                .tail_risk
        );
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let field = Field::new(-7).unwrap();
        let mut m = BTreeMap::new();
        let vals = [
            0.1,
            1.0 / 3.0,
            std::f64::consts::E,
            -1.2345678901234567e-300,
            6.02214076e23,
            5e-324,
        ];
        for (i, w) in enumerate_by_norm(&field, 4).elements.iter().enumerate() {
            m.insert(
                (w.a, w.b),
                c(vals[i % vals.len()], -vals[(i + 1) % vals.len()]),
            );
        }
        let f = CuspFormData::new(field, 12.173_000_000_000_001, Symmetry::None, m, 4).unwrap();
        let mut buf = Vec::new();
        write_coefficients(&f, &mut buf).unwrap();
        let g = load_coefficients(buf.as_slice()).unwrap();
        assert_eq!(f, g);
        for (k, v) in &f.coefficients {
            let w = g.coefficients[k];
            assert_eq!(
                (v.re.to_bits(), v.im.to_bits()),
                (w.re.to_bits(), w.im.to_bits())
            );
        }
        // 17-significant-digit decimals parse to the nearest double and print back the same
        let text = "D,t,a,b,re_rho,im_rho\n-1,1.0000000000000002,1,0,0.10000000000000001,-3.1415926535897931\n";
        let h = load(text).unwrap();
        let mut out = Vec::new();
        write_coefficients(&h, &mut out).unwrap();
        assert_eq!(load_coefficients(out.as_slice()).unwrap(), h);
        assert_eq!(h.coefficients[&(1, 0)].re, 0.10000000000000001);
    }

    #[test]
    fn normalization() {
        let f = gi();
        let r = normalize_first_coeff(&f, 4.0 / f.sqrt_abs_disc()).unwrap();
        assert!((r.rho1_abs - 1.0).abs() < 1e-15);
        for l in [0.3, 1.7, 42.0] {
            let a = normalize_first_coeff(&f, l).unwrap();
            assert!((a.rho1_abs.powi(2) * f.sqrt_abs_disc() / 4.0 * l - 1.0).abs() < 1e-15);
            let b = normalize_first_coeff(&f, 2.0 * l).unwrap();
            assert!((b.rho1_abs / a.rho1_abs - 0.5f64.sqrt()).abs() < 1e-15);
        }
        assert!(normalize_first_coeff(&f, 0.0).is_err());
    }

    #[test]
    fn series_examples_and_errors() {
        let f = CuspFormData::single_term(gi(), 3.0, c(0.6, 0.8)).unwrap();
        let s1 = rs_coefficient_series(&f, &f, c(1.0, 0.0), 1, ExponentBase::Modulus).unwrap();
        assert!((s1 - c(1.0, 0.0)).norm() < 1e-15);
        let zero = CuspFormData::new(
            gi(),
            3.0,
            Symmetry::None,
            f.coefficients.keys().map(|k| (*k, c(0.0, 0.0))).collect(),
            1,
        )
        .unwrap();
        assert_eq!(
            rs_coefficient_series(&f, &zero, c(2.0, 1.0), 1, ExponentBase::Norm).unwrap(),
            c(0.0, 0.0)
        );
        assert!(matches!(
            rs_coefficient_series(&f, &f, c(2.0, 0.0), 2, ExponentBase::Modulus),
            Err(Error::CoverageExceeded {
                requested: 2,
                available: 1
            })
        ));
        let g = CuspFormData::single_term(Field::new(-3).unwrap(), 3.0, c(1.0, 0.0)).unwrap();
        assert!(matches!(
            rs_coefficient_series(&f, &g, c(2.0, 0.0), 1, ExponentBase::Modulus),
            Err(Error::FieldMismatch(_))
        ));
    }

    #[test]
    fn exponent_base_flag() {
        let field = gi();
        let m: BTreeMap<_, _> = enumerate_by_norm(&field, 2)
            .elements
            .iter()
            .map(|w| ((w.a, w.b), c(1.0, 0.0)))
            .collect();
        let f = CuspFormData::new(field, 1.0, Symmetry::None, m, 2).unwrap();
        let s = c(2.0, 0.0);
        // four units and four elements of norm 2
        let a = rs_coefficient_series(&f, &f, s, 2, ExponentBase::Modulus).unwrap();
        let b = rs_coefficient_series(&f, &f, s, 2, ExponentBase::Norm).unwrap();
        assert!((a.re - (4.0 + 4.0 / 2.0)).abs() < 1e-14);
        assert!((b.re - (4.0 + 4.0 / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn linearity() {
        let field = Field::new(-2).unwrap();
        let mk = |seed: f64| -> CuspFormData {
            let m = enumerate_by_norm(&field, 9)
                .elements
                .iter()
                .enumerate()
                .map(|(i, w)| {
                    (
                        (w.a, w.b),
                        c(
                            (seed * (i as f64 + 1.0)).sin(),
                            (seed / (i as f64 + 2.0)).cos(),
                        ),
                    )
                })
                .collect();
            CuspFormData::new(field, 4.0, Symmetry::None, m, 9).unwrap()
        };
        let (f, g) = (mk(0.7), mk(1.9));
        let h = f.add(&g).unwrap();
        let p = HyperbolicPoint::new(0.2, 0.3, 0.4).unwrap();
        let lhs = cuspform_eval(&h, &p).unwrap().value;
        let rhs = cuspform_eval(&f, &p).unwrap().value + cuspform_eval(&g, &p).unwrap().value;
        assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn unfolding_matches_gamma_prediction() {
        for (tf, tg, s) in [
            (1.0, 2.0, c(2.0, 0.0)),
            (4.5, 0.5, c(2.0, 3.0)),
            (9.0, 9.0, c(2.0, -1.5)),
        ] {
            let q = unfolding_integral(tf, tg, s).unwrap();
            let p = unfolding_prediction(tf, tg, s).unwrap();
            assert!(
                (q - p).norm() <= 1e-6 * p.norm(),
                "{tf} {tg} {s}: {q} vs {p}"
            );
        }
    }
}
