//! Dedekind zeta functions `ζ_K(s) = ζ(s) L(s, χ_{d_K})`, the completed
//! zeta `Λ(s)` and the scattering coefficient `φ(s)`.
//!
//! Both factors are Hurwitz sums evaluated by Euler–Maclaurin summation.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::RwLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadfield::Field;
use crate::specfun::gamma::log_gamma;

/// `B_{2k} / (2k)!`, `k = 1..=20`.
const BERNOULLI_OVER_FACTORIAL: [f64; 20] = [
    8.3333333333333333333e-2,
    -1.3888888888888888889e-3,
    3.3068783068783068783e-5,
    -8.2671957671957671958e-7,
    2.0876756987868098979e-8,
    -5.2841901386874931848e-10,
    1.3382536530684678833e-11,
    -3.3896802963225828668e-13,
    8.5860620562778445641e-15,
    -2.174868698558061873e-16,
    5.5090028283602295152e-18,
    -1.3954464685812523341e-19,
    3.5347070396294674717e-21,
    -8.9535174270375468504e-23,
    2.2679524523376830603e-24,
    -5.7447906688722024453e-26,
    1.4551724756148649019e-27,
    -3.6859949406653101782e-29,
    9.336734257095044672e-31,
    -2.3650224157006299346e-32,
];

/// Largest `|Im s|` accepted by the public entry points.
pub const IM_WINDOW: f64 = 1e3;
/// Radius of the excluded disc around the pole `s = 1`.
pub const POLE_GUARD: f64 = 1e-6;

/// Kronecker symbol `(d / n)` for `n ≥ 1`.
pub fn kronecker_character(d: i64, n: u64) -> i32 {
    assert!(n >= 1, "kronecker_character needs n >= 1");
    let mut n = n;
    let mut result = 1;
    while n.is_multiple_of(2) {
        n /= 2;
        match d.rem_euclid(8) {
            1 | 7 => {}
            3 | 5 => result = -result,
            _ => return 0,
        }
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

fn jacobi(a: u64, n: u64) -> i32 {
    let mut a = a % n;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

fn em_cutoff(s: Complex64) -> u64 {
    (0.53 * s.norm() + 21.0).ceil() as u64
}

/// `Σ_{n≥0} (n + α)^{-s}` for `α ∈ (0, 1]`, `s ≠ 1`, continued to all `s`.
pub fn hurwitz_zeta(s: Complex64, alpha: f64) -> Complex64 {
    let n = em_cutoff(s);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += (-s * (k as f64 + alpha).ln()).exp();
    }
    let x = n as f64 + alpha;
    let lnx = x.ln();
    let xs = (-s * lnx).exp();
    sum += xs * x / (s - 1.0) + 0.5 * xs;
    // B_{2k}/(2k)! · s(s+1)…(s+2k-2) · x^{-s-2k+1}
    let mut rising = s;
    let mut pow = xs / x;
    let inv_x2 = 1.0 / (x * x);
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = rising * pow * *b;
        sum += term;
        if term.norm() < 1e-18 * sum.norm() {
            break;
        }
        let j = 2.0 * k as f64 + 1.0;
        rising *= (s + j) * (s + j + 1.0);
        pow *= inv_x2;
    }
    sum
}

/// Riemann `ζ(s)`, `s ≠ 1`.
pub fn riemann_zeta(s: Complex64) -> Complex64 {
    hurwitz_zeta(s, 1.0)
}

/// `L(s, χ_d) = q^{-s} Σ_{a=1}^{q} χ(a) ζ(s, a/q)` with `q = |d|`.
pub fn dirichlet_l(d: i64, s: Complex64) -> Complex64 {
    let q = d.unsigned_abs();
    let mut sum = Complex64::new(0.0, 0.0);
    for a in 1..q {
        let chi = kronecker_character(d, a);
        if chi != 0 {
            sum += hurwitz_zeta(s, a as f64 / q as f64) * chi as f64;
        }
    }
    sum * (-s * (q as f64).ln()).exp()
}

/// `Λ(s)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompletedZetaValue {
    pub s: Complex64,
    pub lambda_value: Complex64,
}

/// Fixed field data plus a memo of computed `ζ_K` values.
#[derive(Debug)]
pub struct ZetaContext {
    field: Field,
    precision_target: f64,
    cache: RwLock<HashMap<(u64, u64), Complex64>>,
}

impl Clone for ZetaContext {
    fn clone(&self) -> Self {
        let cache = self.cache.read().expect("zeta cache poisoned").clone();
        ZetaContext {
            field: self.field,
            precision_target: self.precision_target,
            cache: RwLock::new(cache),
        }
    }
}

impl ZetaContext {
    /// `precision_target` must lie in `(0, 10⁻⁶]`.
    pub fn new(field: Field, precision_target: f64) -> Result<ZetaContext> {
        if !(precision_target > 0.0 && precision_target <= 1e-6) {
            return Err(Error::InvalidArgument(format!(
                "precision_target {precision_target:e} outside (0, 1e-6]"
            )));
        }
        Ok(ZetaContext {
            field,
            precision_target,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision_target(&self) -> f64 {
        self.precision_target
    }

    fn check_window(&self, s: Complex64) -> Result<()> {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("zeta argument {s}")));
        }
        if (s - 1.0).norm() < POLE_GUARD {
            return Err(Error::Pole(format!("|s - 1| < {POLE_GUARD:e} at s = {s}")));
        }
        if s.re <= 0.5 || s.im.abs() > IM_WINDOW {
            return Err(Error::OutOfWindow(format!(
                "s = {s} outside Re(s) > 1/2, |Im(s)| <= {IM_WINDOW}"
            )));
        }
        Ok(())
    }

    /// `ζ_K(s)` on `Re(s) > 1/2`, `|Im(s)| ≤ 10³`, `|s - 1| ≥ 10⁻⁶`.
    pub fn dedekind_zeta(&self, s: Complex64) -> Result<Complex64> {
        self.check_window(s)?;
        Ok(self.zeta_k_continued(s))
    }

    /// `ζ_K(s)` by the same summation, for any `s ≠ 1` with `|Im(s)| ≤ 10³`.
    pub(crate) fn zeta_k_continued(&self, s: Complex64) -> Complex64 {
        let key = (s.re.to_bits(), s.im.to_bits());
        if let Some(v) = self.cache.read().expect("zeta cache poisoned").get(&key) {
            return *v;
        }
        let v = riemann_zeta(s) * dirichlet_l(self.field.disc(), s);
        self.cache
            .write()
            .expect("zeta cache poisoned")
            .insert(key, v);
        v
    }

    /// `Λ(s) = (2π/√|d_K|)^{-s} Γ(s) ζ_K(s)`.
    pub fn completed_lambda(&self, s: Complex64) -> Result<CompletedZetaValue> {
        let z = self.dedekind_zeta(s)?;
        let ln = -s * (2.0 * PI / self.field.sqrt_abs_disc()).ln() + log_gamma(s)?;
        Ok(CompletedZetaValue {
            s,
            lambda_value: ln.exp() * z,
        })
    }

    /// `φ(s) = (2π / (s √|d_K|)) ζ_K(s) / ζ_K(1 + s)`.
    ///
    /// `ζ_K(s)` is taken from the Euler–Maclaurin continuation, so the
    /// critical line `Re(s) = 0` is admissible.
    pub fn scattering_phi(&self, s: Complex64) -> Result<Complex64> {
        if s.norm() == 0.0 {
            return Err(Error::SingularPoint("φ(s) has a pole at s = 0".into()));
        }
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("φ argument {s}")));
        }
        let s1 = s + 1.0;
        self.check_window(s1)?;
        if (s - 1.0).norm() < POLE_GUARD {
            return Err(Error::Pole(format!("ζ_K(s) has a pole at s = 1, got {s}")));
        }
        let den = self.zeta_k_continued(s1);
        if den.norm() == 0.0 {
            return Err(Error::SingularPoint(format!(
                "ζ_K(1 + s) vanishes at s = {s}"
            )));
        }
        Ok(self.phi_continued(s))
    }

    /// `φ(s)` without window or pole checks, for `s ≠ 0`.
    pub(crate) fn phi_continued(&self, s: Complex64) -> Complex64 {
        let num = self.zeta_k_continued(s);
        let den = self.zeta_k_continued(s + 1.0);
        2.0 * PI / (s * self.field.sqrt_abs_disc()) * num / den
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("zeta cache poisoned").len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::CLASS_NUMBER_ONE;

    fn ctx(d: i64) -> ZetaContext {
        ZetaContext::new(Field::new(d).unwrap(), 1e-10).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_character(-4, 1), 1);
        assert_eq!(kronecker_character(-4, 3), -1);
        assert_eq!(kronecker_character(-4, 2), 0);
        assert_eq!(kronecker_character(-3, 2), -1);
        assert_eq!(kronecker_character(-8, 3), 1);
        assert_eq!(kronecker_character(-7, 2), 1);
    }

    // oracle: count of ideals of norm p is 1 + χ(p), so χ(p) + 1 = #{x mod p : x² ≡ d}
    #[test]
    fn kronecker_matches_quadratic_residue_count() {
        for d in [-4i64, -8, -3, -7, -11, -19, -43, -67, -163] {
            for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 67, 163] {
                let roots = (0..p)
                    .filter(|x| (x * x) as i64 % p as i64 == d.rem_euclid(p as i64))
                    .count();
                assert_eq!(
                    kronecker_character(d, p) + 1,
                    roots as i32,
                    "d = {d}, p = {p}"
                );
            }
        }
    }

    #[test]
    fn kronecker_multiplicative_and_periodic() {
        for d in [-4i64, -8, -3, -163] {
            let q = d.unsigned_abs();
            for m in 1..60u64 {
                for n in 1..60u64 {
                    assert_eq!(
                        kronecker_character(d, m * n),
                        kronecker_character(d, m) * kronecker_character(d, n)
                    );
                }
                assert_eq!(kronecker_character(d, m), kronecker_character(d, m + q));
            }
        }
    }

    #[test]
    fn riemann_zeta_values() {
        assert!((riemann_zeta(c(2.0, 0.0)) - PI * PI / 6.0).norm() < 1e-14);
        assert!((riemann_zeta(c(0.0, 0.0)) + 0.5).norm() < 1e-14);
        assert!((riemann_zeta(c(-1.0, 0.0)) + 1.0 / 12.0).norm() < 1e-14);
        // first nontrivial zero
        assert!(riemann_zeta(c(0.5, 14.134725141734693790)).norm() < 1e-12);
    }

    // mpmath: zeta(s) * L(s, χ_d) via mpmath's Hurwitz zeta, 30 digits
    #[test]
    fn dedekind_reference_values() {
        let cases = [
            (-1, c(2.0, 0.0), c(1.5067030099229850309, 0.0)),
            (
                -3,
                c(2.0, 5.0),
                c(1.1008078116260528974, 0.05862438000017827864),
            ),
            (
                -163,
                c(1.5, -20.0),
                c(0.94101258014391130972, 0.061002786627933786846),
            ),
            (-7, c(3.0, 0.0), c(1.3142605841294704081, 0.0)),
        ];
        for (d, s, expect) in cases {
            let z = ctx(d).dedekind_zeta(s).unwrap();
            assert!(
                (z - expect).norm() <= 1e-12 * expect.norm(),
                "D = {d}: {z} vs {expect}"
            );
        }
        // on the critical line, outside the public window
        let z = ctx(-2).zeta_k_continued(c(0.5, 100.0));
        let expect = c(2.0045642861611401061, -3.939067205045514942);
        assert!((z - expect).norm() <= 1e-11 * expect.norm(), "{z}");
    }

    #[test]
    fn window_and_pole_errors() {
        let z = ctx(-1);
        assert!(matches!(
            z.dedekind_zeta(c(1.0 + 1e-7, 0.0)),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            z.dedekind_zeta(c(0.4, 0.0)),
            Err(Error::OutOfWindow(_))
        ));
        assert!(matches!(
            z.dedekind_zeta(c(2.0, 1001.0)),
            Err(Error::OutOfWindow(_))
        ));
        assert!(ZetaContext::new(Field::new(-1).unwrap(), 1e-5).is_err());
        assert!(matches!(
            z.scattering_phi(c(0.0, 0.0)),
            Err(Error::SingularPoint(_))
        ));
    }

    #[test]
    fn reflection_symmetry() {
        let z = ctx(-7);
        let s = c(2.0, 5.0);
        let a = z.dedekind_zeta(s).unwrap();
        let b = z.dedekind_zeta(s.conj()).unwrap();
        assert!((a.conj() - b).norm() < 1e-15 * a.norm());
        let la = z.completed_lambda(s).unwrap().lambda_value;
        let lb = z.completed_lambda(s.conj()).unwrap().lambda_value;
        assert!((la.conj() - lb).norm() < 1e-14 * la.norm());
    }

    #[test]
    fn completed_lambda_at_two() {
        let z = ctx(-1);
        let v = z.completed_lambda(c(2.0, 0.0)).unwrap().lambda_value;
        let expect = z.dedekind_zeta(c(2.0, 0.0)).unwrap() / (PI * PI);
        assert!((v - expect).norm() < 1e-14);
    }

    #[test]
    fn lambda_nonvanishing_on_one_line() {
        for d in CLASS_NUMBER_ONE {
            let z = ctx(d);
            for t in 1..=50 {
                let v = z.completed_lambda(c(1.0, t as f64)).unwrap().lambda_value;
                assert!(v.norm() > 0.0);
                // ζ_K(1 + it) itself is bounded away from 0 on this range
                assert!(z.dedekind_zeta(c(1.0, t as f64)).unwrap().norm() > 1e-3);
            }
        }
    }

    #[test]
    fn functional_equation() {
        // Λ(s) = Λ(1 - s), checked off the public window via the continuation
        for d in [-1, -3, -163] {
            let z = ctx(d);
            let f = |s: Complex64| {
                (-s * (2.0 * PI / z.field().sqrt_abs_disc()).ln() + log_gamma(s).unwrap()).exp()
                    * z.zeta_k_continued(s)
            };
            for s in [c(0.3, 7.0), c(0.8, -40.0), c(2.5, 1.0)] {
                let a = f(s);
                let b = f(1.0 - s);
                assert!((a - b).norm() < 1e-10 * a.norm(), "D = {d}, s = {s}");
            }
        }
    }

    #[test]
    fn unitarity_examples() {
        let z = ctx(-1);
        assert!((z.scattering_phi(c(0.0, 5.0)).unwrap().norm() - 1.0).abs() < 1e-8);
        let p = z.scattering_phi(c(0.0, 3.0)).unwrap() * z.scattering_phi(c(0.0, -3.0)).unwrap();
        assert!((p - 1.0).norm() < 1e-8);
        let a = z.scattering_phi(c(0.0, 2.0)).unwrap();
        let b = z.scattering_phi(c(0.0, -2.0)).unwrap();
        assert!((a.conj() - b).norm() < 1e-14);
    }

    #[test]
    fn cache_is_transparent() {
        let z = ctx(-11);
        let s = c(1.7, 33.0);
        let a = z.dedekind_zeta(s).unwrap();
        assert_eq!(z.cache_len(), 1);
        let b = z.dedekind_zeta(s).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
        let fresh = ctx(-11).dedekind_zeta(s).unwrap();
        assert_eq!(a, fresh);
    }
}
