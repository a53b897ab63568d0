//! Quadrature rules: Gauss–Legendre panels and the double-exponential
//! exp-sinh rule on `[0, ∞)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values a quadrature rule can accumulate.
pub trait QuadValue:
    Copy
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> GaussLegendre {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// `∫_a^b f` with one application of the rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Shared 32-point rule.
pub fn gl32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(32))
}

/// Settings for [`exp_sinh`].
#[derive(Debug, Clone, Copy)]
pub struct ExpSinh {
    /// Substitution `x = scale · exp(π/2 · sinh τ)`.
    pub scale: f64,
    /// Relative agreement required between successive step halvings.
    pub rel_tol: f64,
    /// Absolute floor for the agreement test.
    pub abs_tol: f64,
    /// Maximum number of halvings of the initial step `1/2`.
    pub max_levels: u32,
}

impl Default for ExpSinh {
    fn default() -> Self {
        ExpSinh {
            scale: 1.0,
            rel_tol: 1e-13,
            abs_tol: 0.0,
            max_levels: 8,
        }
    }
}

/// `∫_0^∞ f(x) dx` for `f` analytic on `(0, ∞)`, integrable endpoint
/// behaviour at 0 and at least exponential decay at infinity.
pub fn exp_sinh<T: QuadValue, F: FnMut(f64) -> T>(mut f: F, opts: ExpSinh) -> Result<T> {
    let mut term = |tau: f64| -> T {
        let e = FRAC_PI_2 * tau.sinh();
        let x = opts.scale * e.exp();
        if x == 0.0 || !x.is_finite() {
            return T::zero();
        }
        let w = x * FRAC_PI_2 * tau.cosh();
        let v = f(x);
        if v.magnitude() == 0.0 {
            T::zero()
        } else {
            v * w
        }
    };
    // level 0: all integer multiples of h0
    let h0 = 0.5;
    let mut sum = term(0.0) + sweep(&mut term, 0.0, h0);
    let mut estimate = sum * h0;
    let mut h = h0;
    for _ in 0..opts.max_levels {
        h *= 0.5;
        // new nodes are the odd multiples of h
        sum = sum + sweep(&mut term, h, 2.0 * h);
        let next = sum * h;
        let diff = (next - estimate).magnitude();
        if !next.magnitude().is_finite() {
            return Err(Error::Nonconvergence(
                "exp-sinh produced a non-finite sum".into(),
            ));
        }
        if diff <= opts.rel_tol * next.magnitude() || diff <= opts.abs_tol {
            return Ok(next);
        }
        estimate = next;
    }
    Err(Error::Nonconvergence(format!(
        "exp-sinh did not reach relative tolerance {:e} within {} halvings",
        opts.rel_tol, opts.max_levels
    )))
}

// Σ term(±(start + k·step)) for k ≥ 0, stopping once terms vanish.
fn sweep<T: QuadValue, F: FnMut(f64) -> T>(term: &mut F, start: f64, step: f64) -> T {
    let mut total = T::zero();
    for dir in [1.0, -1.0] {
        let mut tau = start;
        if tau == 0.0 {
            tau = step;
        }
        let mut small = 0;
        let mut peak = 0.0f64;
        while tau < 6.5 {
            let v = term(dir * tau);
            let m = v.magnitude();
            total = total + v;
            peak = peak.max(m);
            if m <= 1e-18 * peak || m == 0.0 {
                small += 1;
                if small >= 3 {
                    break;
                }
            } else {
                small = 0;
            }
            tau += step;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_moments() {
        for n in [1, 2, 5, 16, 32] {
            let r = GaussLegendre::new(n);
            assert!((r.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for k in 0..(2 * n) {
                let exact = if k % 2 == 1 {
                    0.0
                } else {
                    2.0 / (k as f64 + 1.0)
                };
                let q: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                assert!((q - exact).abs() < 1e-13, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn gl_panel_integral() {
        let v = gl16().integrate(0.0, PI, f64::sin);
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn exp_sinh_classics() {
        let v: f64 = exp_sinh(|x| (-x).exp(), ExpSinh::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
        // ∫ e^{-(1-i)x} = (1+i)/2
        let z = exp_sinh(
            |x| (Complex64::new(-1.0, 1.0) * x).exp(),
            ExpSinh::default(),
        )
        .unwrap();
        assert!((z - Complex64::new(0.5, 0.5)).norm() < 1e-13);
        // ∫ x^{-1/2} e^{-x} = √π
        let v: f64 = exp_sinh(|x| (-x).exp() / x.sqrt(), ExpSinh::default()).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-13);
        // ∫ ln(x)² e^{-x} = γ² + π²/6
        let g = 0.577_215_664_901_532_9f64;
        let v: f64 = exp_sinh(|x| x.ln().powi(2) * (-x).exp(), ExpSinh::default()).unwrap();
        assert!((v - (g * g + PI * PI / 6.0)).abs() < 1e-13);
        // narrow Gaussian far from the default scale
        let opts = ExpSinh {
            scale: 1e-3,
            ..ExpSinh::default()
        };
        let v: f64 = exp_sinh(|x| (-1e6 * x * x).exp(), opts).unwrap();
        assert!((v - 0.5 * PI.sqrt() * 1e-3).abs() < 1e-16);
    }
}
