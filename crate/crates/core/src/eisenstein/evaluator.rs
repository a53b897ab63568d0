//! Fourier evaluation of `E(P, it)` with a certified truncation of the
//! `ω`-sum.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, RwLock};

use num_complex::Complex64;

use super::point::{mobius_act, GroupElement, HyperbolicPoint};
use crate::error::{Error, Result};
use crate::quadfield::{enumerate_by_norm, Field, NormIndex};
use crate::specfun::bessel::{ln_cosh_half_pi, scaled_ln};
use crate::specfun::log_gamma;
use crate::zeta::ZetaContext;

pub const R_MIN: f64 = 1e-2;
pub const R_MAX: f64 = 1e2;
pub const T_WINDOW: f64 = 200.0;
pub const DEFAULT_MAX_NORM_CUTOFF: u64 = 4_000_000;

const SLICE_CACHE_CAP: usize = 4096;
const DIVISOR_SAFETY: f64 = 2.0;
const COUNT_SAFETY: f64 = 2.0;

/// Nonzero lattice points ordered by `(norm, a, b)` with their divisor
/// classes.
#[derive(Debug)]
struct Lattice {
    bound: i64,
    a: Vec<i32>,
    b: Vec<i32>,
    norm: Vec<i64>,
    class: Vec<u32>,
    // divisor-class norms of one representative per unit class
    class_divisors: Vec<Vec<i64>>,
}

impl Lattice {
    fn build(field: &Field, bound: i64) -> Lattice {
        let pts = enumerate_by_norm(field, bound).elements;
        let index = NormIndex::new(field, bound);
        let mut ids: HashMap<(i64, i64), u32> = HashMap::new();
        let mut class_divisors = Vec::new();
        let n = pts.len();
        let (mut a, mut b, mut norm, mut class) = (
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
            Vec::with_capacity(n),
        );
        for w in &pts {
            let c = w.canonical();
            let id = *ids.entry((c.a, c.b)).or_insert_with(|| {
                let divs = index
                    .divisor_norms(&c)
                    .expect("lattice point within index bound");
                class_divisors.push(divs);
                (class_divisors.len() - 1) as u32
            });
            a.push(w.a as i32);
            b.push(w.b as i32);
            norm.push(w.norm());
            class.push(id);
        }
        Lattice {
            bound,
            a,
            b,
            norm,
            class,
            class_divisors,
        }
    }

    fn prefix(&self, x: i64) -> usize {
        self.norm.partition_point(|&n| n <= x)
    }
}

/// Per-`(t, r)` data: the cutoff and the real weights
/// `|ω|^{it} σ_{-it}(ω) · S(t, u_ω)` of every retained `ω`.
#[derive(Debug)]
pub(crate) struct Slice {
    cutoff: i64,
    count: usize,
    weights: Vec<f64>,
    lattice: Arc<Lattice>,
    a_max: i32,
    b_max: i32,
}

/// Diagnostics of a single evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalDetail {
    pub value: Complex64,
    pub norm_cutoff: u64,
    pub terms: usize,
}

/// Fixed data of the Fourier expansion of `E(P, s)` over `Q(√D)`.
///
/// Evaluations are pure; the internal caches only memoize lattice data,
/// divisor sums and Bessel tables, and never change a returned value.
#[derive(Debug)]
pub struct EisensteinEvaluator {
    field: Field,
    zeta_ctx: ZetaContext,
    tail_tolerance: f64,
    max_norm_cutoff: u64,
    lattice: RwLock<Arc<Lattice>>,
    slices: Mutex<HashMap<(u64, u64, i64), Arc<Slice>>>,
    cutoffs: Mutex<HashMap<(u64, u64), u64>>,
}

impl EisensteinEvaluator {
    /// `tail_tolerance` must lie in `(0, 10⁻⁴]`.
    pub fn new(
        zeta_ctx: ZetaContext,
        tail_tolerance: f64,
        max_norm_cutoff: u64,
    ) -> Result<EisensteinEvaluator> {
        if !(tail_tolerance > 0.0 && tail_tolerance <= 1e-4) {
            return Err(Error::InvalidArgument(format!(
                "tail_tolerance {tail_tolerance:e} outside (0, 1e-4]"
            )));
        }
        if max_norm_cutoff == 0 || max_norm_cutoff > i64::MAX as u64 {
            return Err(Error::InvalidArgument(
                "max_norm_cutoff must be positive".into(),
            ));
        }
        let field = *zeta_ctx.field();
        Ok(EisensteinEvaluator {
            field,
            zeta_ctx,
            tail_tolerance,
            max_norm_cutoff,
            lattice: RwLock::new(Arc::new(Lattice::build(&field, 0))),
            slices: Mutex::new(HashMap::new()),
            cutoffs: Mutex::new(HashMap::new()),
        })
    }

    /// Evaluator with `precision_target = 10⁻¹²` and the default cutoff cap.
    pub fn for_field(field: Field, tail_tolerance: f64) -> Result<EisensteinEvaluator> {
        EisensteinEvaluator::new(
            ZetaContext::new(field, 1e-12)?,
            tail_tolerance,
            DEFAULT_MAX_NORM_CUTOFF,
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn zeta_ctx(&self) -> &ZetaContext {
        &self.zeta_ctx
    }

    pub fn tail_tolerance(&self) -> f64 {
        self.tail_tolerance
    }

    pub fn max_norm_cutoff(&self) -> u64 {
        self.max_norm_cutoff
    }

    /// Same data with a different cutoff cap.
    pub fn with_max_norm_cutoff(&self, max_norm_cutoff: u64) -> Result<EisensteinEvaluator> {
        EisensteinEvaluator::new(self.zeta_ctx.clone(), self.tail_tolerance, max_norm_cutoff)
    }

    fn check_window(p: &HyperbolicPoint, t: f64) -> Result<()> {
        if !(p.x.is_finite() && p.y.is_finite() && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "eisenstein_eval at {p:?}, t = {t}"
            )));
        }
        if !(R_MIN..=R_MAX).contains(&p.r) {
            return Err(Error::OutOfWindow(format!(
                "r = {} outside [{R_MIN}, {R_MAX}]",
                p.r
            )));
        }
        if t.abs() > T_WINDOW {
            return Err(Error::OutOfWindow(format!(
                "|t| = {} exceeds {T_WINDOW}",
                t.abs()
            )));
        }
        Ok(())
    }

    /// `c(it) / cosh(πt/2)` with `c(s) = 2(2π)^{1+s} / (|d_K|^{(1+s)/2} Γ(1+s) ζ_K(1+s))`.
    fn scaled_leading(&self, t: f64) -> Complex64 {
        let s1 = Complex64::new(1.0, t);
        let ln_d = (self.field.disc().abs() as f64).ln();
        let ln = std::f64::consts::LN_2 + s1 * (2.0 * PI).ln()
            - 0.5 * s1 * ln_d
            - log_gamma(s1).expect("Re = 1")
            - ln_cosh_half_pi(t);
        ln.exp() / self.zeta_ctx.zeta_k_continued(s1)
    }

    fn bessel_arg_scale(&self, r: f64) -> f64 {
        4.0 * PI * r / self.field.sqrt_abs_disc()
    }

    /// Smallest norm bound `X` whose omitted tail is certified below
    /// `tail_tolerance`, before the cap is applied.
    pub fn certified_cutoff(&self, r: f64, t: f64) -> Result<u64> {
        let key = (t.abs().to_bits(), r.to_bits());
        if let Some(x) = self
            .cutoffs
            .lock()
            .expect("cutoff cache poisoned")
            .get(&key)
        {
            return Ok(*x);
        }
        let x = self.compute_cutoff(r, t.abs())?;
        let mut cache = self.cutoffs.lock().expect("cutoff cache poisoned");
        if cache.len() >= SLICE_CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, x);
        Ok(x)
    }

    fn compute_cutoff(&self, r: f64, t: f64) -> Result<u64> {
        let scale = self.bessel_arg_scale(r);
        let sqd = self.field.sqrt_abs_disc();
        let half_units = self.field.unit_count() as f64 / 2.0;
        let lead = self.scaled_leading(t).norm().ln();
        let mut u = t + 10f64.max(5.0 * t.cbrt());
        loop {
            let x = (u / scale).powi(2).ceil();
            let kappa = (1.0 - (t / u).powi(2)).sqrt();
            // divisor count against (1 + ln N)² well past the cutoff
            let sigma = DIVISOR_SAFETY * (1.0 + (4.0 * x).max(1.0).ln()).powi(2);
            let density = COUNT_SAFETY * sqd / (4.0 * PI * r * r);
            let s = scaled_ln(t, u)?;
            let ln_tail = half_units.ln()
                + lead
                + r.ln()
                + sigma.ln()
                + density.ln()
                + (u / kappa + 1.0 / (kappa * kappa)).ln()
                + s.ln_abs;
            if ln_tail < self.tail_tolerance.ln() {
                return Ok(x.max(0.0) as u64);
            }
            u += 1.0;
        }
    }

    fn lattice_for(&self, x: i64) -> Arc<Lattice> {
        {
            let l = self.lattice.read().expect("lattice lock poisoned");
            if l.bound >= x {
                return l.clone();
            }
        }
        let mut l = self.lattice.write().expect("lattice lock poisoned");
        if l.bound < x {
            let bound = x.max(2 * l.bound).max(64);
            *l = Arc::new(Lattice::build(&self.field, bound));
        }
        l.clone()
    }

    fn slice(&self, r: f64, t: f64, cutoff: i64) -> Result<Arc<Slice>> {
        let key = (t.to_bits(), r.to_bits(), cutoff);
        if let Some(s) = self.slices.lock().expect("slice cache poisoned").get(&key) {
            return Ok(s.clone());
        }
        let lattice = self.lattice_for(cutoff);
        let count = lattice.prefix(cutoff);
        let tt = t.abs();
        let scale = self.bessel_arg_scale(r);
        let half_ln_norm = |n: i64| 0.5 * (n as f64).ln();
        let mut coeff: Vec<Option<f64>> = vec![None; lattice.class_divisors.len()];
        let mut weights = Vec::with_capacity(count);
        let (mut a_max, mut b_max) = (0, 0);
        let mut last_norm = -1;
        let mut bessel = 0.0;
        for i in 0..count {
            let n = lattice.norm[i];
            if n != last_norm {
                bessel = scaled_ln(tt, scale * (n as f64).sqrt())?.value();
                last_norm = n;
            }
            let cls = lattice.class[i] as usize;
            let a_t = *coeff[cls].get_or_insert_with(|| {
                let h = half_ln_norm(n);
                lattice.class_divisors[cls]
                    .iter()
                    .map(|&m| (tt * (h - (m as f64).ln())).cos())
                    .sum()
            });
            weights.push(a_t * bessel);
            a_max = a_max.max(lattice.a[i].abs());
            b_max = b_max.max(lattice.b[i].abs());
        }
        let s = Arc::new(Slice {
            cutoff,
            count,
            weights,
            lattice,
            a_max,
            b_max,
        });
        let mut cache = self.slices.lock().expect("slice cache poisoned");
        if cache.len() >= SLICE_CACHE_CAP {
            cache.clear();
        }
        cache.insert(key, s.clone());
        Ok(s)
    }

    /// `Σ_ω w_ω e(⟨2ω̄/√d_K, z⟩)`, summed in lattice order.
    fn fourier_sum(&self, s: &Slice, x: f64, y: f64) -> Complex64 {
        if s.count == 0 {
            return Complex64::new(0.0, 0.0);
        }
        // phase of ω = a + bω_K is -4π Im(ωz)/√|d_K| = α a + β b
        let k = -4.0 * PI / self.field.sqrt_abs_disc();
        let om = self.field.omega();
        let alpha = k * y;
        let beta = k * (om.re * y + om.im * x);
        let table = |step: f64, m: i32| -> Vec<Complex64> {
            (-m..=m)
                .map(|j| Complex64::from_polar(1.0, step * j as f64))
                .collect()
        };
        let ea = table(alpha, s.a_max);
        let eb = table(beta, s.b_max);
        let l = &s.lattice;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..s.count {
            let pa = ea[(l.a[i] + s.a_max) as usize];
            let pb = eb[(l.b[i] + s.b_max) as usize];
            acc += s.weights[i] * (pa * pb);
        }
        acc
    }

    fn assemble(&self, p: &HyperbolicPoint, t: f64, slice: &Slice) -> Complex64 {
        let half_units = self.field.unit_count() as f64 / 2.0;
        let s = Complex64::new(0.0, t);
        let r = p.r;
        let ln_r = r.ln();
        let phi = self.zeta_ctx.phi_continued(s);
        let constant = ((1.0 + s) * ln_r).exp() + phi * ((1.0 - s) * ln_r).exp();
        let fourier = self.scaled_leading(t) * r * self.fourier_sum(slice, p.x, p.y);
        half_units * (constant + fourier)
    }

    /// Certified table for height `r` and order `t ≠ 0`, held by the caller
    /// for repeated evaluation at that height.
    pub(crate) fn prepare(&self, r: f64, t: f64) -> Result<Arc<Slice>> {
        Self::check_window(&HyperbolicPoint { x: 0.0, y: 0.0, r }, t)?;
        let x = self.certified_cutoff(r, t)?;
        if x > self.max_norm_cutoff {
            return Err(Error::TruncationFailure {
                needed: x,
                max: self.max_norm_cutoff,
            });
        }
        self.slice(r, t, x as i64)
    }

    /// `E(P, it)` from a table made by [`Self::prepare`] at `(P.r, t)`.
    pub(crate) fn eval_prepared(&self, p: &HyperbolicPoint, t: f64, slice: &Slice) -> Complex64 {
        self.assemble(p, t, slice)
    }

    /// `E(P, it)` together with the cutoff used.
    pub fn eval_detail(&self, p: &HyperbolicPoint, t: f64) -> Result<EvalDetail> {
        Self::check_window(p, t)?;
        if t == 0.0 {
            // φ(0) = -1 and E(P, s) = φ(s) E(P, -s)
            return Ok(EvalDetail {
                value: Complex64::new(0.0, 0.0),
                norm_cutoff: 0,
                terms: 0,
            });
        }
        let x = self.certified_cutoff(p.r, t)?;
        if x > self.max_norm_cutoff {
            return Err(Error::TruncationFailure {
                needed: x,
                max: self.max_norm_cutoff,
            });
        }
        self.eval_at_cutoff(p, t, x)
    }

    /// `E(P, it)` with the `ω`-sum cut at `N(ω) ≤ cutoff`, no certificate.
    pub fn eval_at_cutoff(&self, p: &HyperbolicPoint, t: f64, cutoff: u64) -> Result<EvalDetail> {
        Self::check_window(p, t)?;
        if t == 0.0 {
            return Ok(EvalDetail {
                value: Complex64::new(0.0, 0.0),
                norm_cutoff: cutoff,
                terms: 0,
            });
        }
        let slice = self.slice(p.r, t, cutoff as i64)?;
        Ok(EvalDetail {
            value: self.assemble(p, t, &slice),
            norm_cutoff: slice.cutoff as u64,
            terms: slice.count,
        })
    }
}

/// `E(P, it)` for `r ∈ [10⁻², 10²]`, `|t| ≤ 200`.
pub fn eisenstein_eval(ev: &EisensteinEvaluator, p: &HyperbolicPoint, t: f64) -> Result<Complex64> {
    Ok(ev.eval_detail(p, t)?.value)
}

/// `|E(γP, it) - E(P, it)| / (|E(P, it)| + 10⁻³⁰)`.
pub fn check_automorphy(
    ev: &EisensteinEvaluator,
    p: &HyperbolicPoint,
    t: f64,
    g: &GroupElement,
) -> Result<f64> {
    if g.field() != *ev.field() {
        return Err(Error::FieldMismatch(format!(
            "group element over {} for evaluator over {}",
            g.field(),
            ev.field()
        )));
    }
    let q = mobius_act(g, p)?;
    let e0 = eisenstein_eval(ev, p, t)?;
    let e1 = eisenstein_eval(ev, &q, t)?;
    Ok((e1 - e0).norm() / (e0.norm() + 1e-30))
}

/// Order used in place of `t = 0`, where `E(P, 0)` vanishes identically.
pub const LAPLACIAN_T_FLOOR: f64 = 1e-3;

/// Relative residual of `-Δ_h E = (1 + t²) E` with the central-difference
/// Laplacian `r²(∂²_x + ∂²_y + ∂²_r) - r∂_r` of step `h`.
///
/// All stencil points share the cutoff certified at `r - h`, so the
/// truncated sum is the same smooth function at every node. For
/// `|t| < LAPLACIAN_T_FLOOR` the order is raised to the floor, where `E/t`
/// approximates the `s`-derivative at `s = 0`, an eigenfunction with
/// eigenvalue `1`.
pub fn laplacian_residual(
    ev: &EisensteinEvaluator,
    p: &HyperbolicPoint,
    t: f64,
    h: f64,
) -> Result<f64> {
    if !(1e-4..=1e-2).contains(&h) {
        return Err(Error::InvalidArgument(format!(
            "step h = {h:e} outside [1e-4, 1e-2]"
        )));
    }
    let t = if t.abs() < LAPLACIAN_T_FLOOR {
        LAPLACIAN_T_FLOOR.copysign(if t < 0.0 { -1.0 } else { 1.0 })
    } else {
        t
    };
    for r in [p.r - h, p.r + h] {
        EisensteinEvaluator::check_window(&HyperbolicPoint { r, ..*p }, t)?;
    }
    let cutoff = ev.certified_cutoff(p.r - h, t)?;
    if cutoff > ev.max_norm_cutoff() {
        return Err(Error::TruncationFailure {
            needed: cutoff,
            max: ev.max_norm_cutoff(),
        });
    }
    let e = |x: f64, y: f64, r: f64| -> Result<Complex64> {
        Ok(ev
            .eval_at_cutoff(&HyperbolicPoint { x, y, r }, t, cutoff)?
            .value)
    };
    let (x, y, r) = (p.x, p.y, p.r);
    let c = e(x, y, r)?;
    let (xp, xm) = (e(x + h, y, r)?, e(x - h, y, r)?);
    let (yp, ym) = (e(x, y + h, r)?, e(x, y - h, r)?);
    let (rp, rm) = (e(x, y, r + h)?, e(x, y, r - h)?);
    let h2 = h * h;
    let dxx = (xp - 2.0 * c + xm) / h2;
    let dyy = (yp - 2.0 * c + ym) / h2;
    let drr = (rp - 2.0 * c + rm) / h2;
    let dr = (rp - rm) / (2.0 * h);
    let lap = r * r * (dxx + dyy + drr) - r * dr;
    let lambda = 1.0 + t * t;
    Ok((-lap - lambda * c).norm() / (lambda * c.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::point::GroupElement;

    fn ev(d: i64) -> EisensteinEvaluator {
        EisensteinEvaluator::for_field(Field::new(d).unwrap(), 1e-12).unwrap()
    }

    fn pt(x: f64, y: f64, r: f64) -> HyperbolicPoint {
        HyperbolicPoint::new(x, y, r).unwrap()
    }

    #[test]
    fn mpmath_reference_value() {
        // 20-digit mpmath evaluation of the same expansion, truncated far past the tail
        let e = eisenstein_eval(&ev(-1), &pt(0.3, 0.2, 1.1), 4.0).unwrap();
        let expect = Complex64::new(1.387_115_823_920_250_6, -1.282_381_018_077_854_9);
        assert!((e - expect).norm() < 1e-11, "{e}");
    }

    #[test]
    fn large_height_is_constant_term() {
        let v = ev(-1);
        let p = pt(0.1, 0.4, 10.0);
        let e = eisenstein_eval(&v, &p, 1.0).unwrap();
        let s = Complex64::new(0.0, 1.0);
        let phi = v.zeta_ctx().scattering_phi(s).unwrap();
        let c = 2.0
            * (Complex64::new(10.0, 0.0).powc(1.0 + s)
                + phi * Complex64::new(10.0, 0.0).powc(1.0 - s));
        assert!((e - c).norm() < 1e-10);
    }

    #[test]
    fn translations_and_inversion() {
        for d in [-1, -3, -2] {
            let v = ev(d);
            let f = *v.field();
            let p = pt(0.3, 0.2, 1.1);
            for g in [
                GroupElement::translation(f.one()),
                GroupElement::translation(f.element(0, 1)),
            ] {
                assert!(check_automorphy(&v, &p, 4.0, &g).unwrap() < 1e-10);
            }
            assert!(
                check_automorphy(&v, &p, 4.0, &GroupElement::inversion(&f)).unwrap() < 1e-6,
                "D = {d}"
            );
            assert_eq!(
                check_automorphy(&v, &p, 4.0, &GroupElement::identity(&f)).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn reflection_is_conjugation() {
        let v = ev(-7);
        for (p, t) in [(pt(0.1, -0.3, 0.9), 3.5), (pt(0.45, 0.05, 2.0), 17.0)] {
            let a = eisenstein_eval(&v, &p, t).unwrap();
            let b = eisenstein_eval(&v, &p, -t).unwrap();
            assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn doubling_cutoff_is_within_tolerance() {
        let v = ev(-3);
        for (p, t) in [(pt(0.2, 0.1, 0.8), 12.0), (pt(-0.4, 0.3, 0.5), 40.0)] {
            let d = v.eval_detail(&p, t).unwrap();
            let e2 = v.eval_at_cutoff(&p, t, 2 * d.norm_cutoff).unwrap();
            assert!((d.value - e2.value).norm() < v.tail_tolerance());
        }
    }

    #[test]
    fn window_and_truncation_errors() {
        let v = ev(-1);
        assert!(matches!(
            eisenstein_eval(&v, &pt(0.0, 0.0, 1e-3), 1.0),
            Err(Error::OutOfWindow(_))
        ));
        assert!(matches!(
            eisenstein_eval(&v, &pt(0.0, 0.0, 1.0), 201.0),
            Err(Error::OutOfWindow(_))
        ));
        let small = v.with_max_norm_cutoff(10).unwrap();
        assert!(matches!(
            eisenstein_eval(&small, &pt(0.0, 0.0, 0.5), 30.0),
            Err(Error::TruncationFailure { .. })
        ));
        assert!(EisensteinEvaluator::for_field(Field::new(-1).unwrap(), 1e-3).is_err());
    }

    #[test]
    fn laplacian_eigenvalue() {
        let v = ev(-1);
        let p = pt(0.3, 0.2, 1.1);
        assert!(laplacian_residual(&v, &p, 0.0, 1e-3).unwrap() < 1e-4);
        assert!(laplacian_residual(&v, &p, 5.0, 1e-3).unwrap() < 1e-3);
        let a = laplacian_residual(&v, &p, 2.0, 1e-2).unwrap();
        let b = laplacian_residual(&v, &p, 2.0, 5e-3).unwrap();
        assert!((3.5..=4.5).contains(&(a / b)), "{a} {b}");
    }
}
