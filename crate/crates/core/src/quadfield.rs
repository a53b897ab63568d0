//! Exact arithmetic in the ring of integers `O_K` of the nine imaginary
//! quadratic fields `K = Q(√D)` with class number one.
//!
//! Elements are stored as integer coordinates `a + b·ω_K` in the integral
//! basis `{1, ω_K}` with `ω_K = √D` when `D ≡ 2, 3 (mod 4)` and
//! `ω_K = (1 + √D)/2` when `D ≡ 1 (mod 4)`.

use std::fmt;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The nine squarefree `D < 0` with `h(Q(√D)) = 1`.
pub const CLASS_NUMBER_ONE: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

/// An imaginary quadratic field of class number one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    d: i64,
    disc: i64,
    units: u32,
    half_integral: bool,
}

impl Field {
    /// Builds `Q(√D)`; any `D` outside [`CLASS_NUMBER_ONE`] is rejected.
    pub fn new(d: i64) -> Result<Field> {
        if !CLASS_NUMBER_ONE.contains(&d) {
            return Err(Error::UnsupportedField(d));
        }
        let half_integral = d.rem_euclid(4) == 1;
        let disc = if half_integral { d } else { 4 * d };
        let units = match d {
            -1 => 4,
            -3 => 6,
            _ => 2,
        };
        Ok(Field {
            d,
            disc,
            units,
            half_integral,
        })
    }

    /// The squarefree integer `D`.
    pub fn d(&self) -> i64 {
        self.d
    }

    /// Field discriminant `d_K`.
    pub fn disc(&self) -> i64 {
        self.disc
    }

    /// `|O_K^*|`.
    pub fn unit_count(&self) -> u32 {
        self.units
    }

    /// `√|d_K|`.
    pub fn sqrt_abs_disc(&self) -> f64 {
        (self.disc.abs() as f64).sqrt()
    }

    /// True when `ω_K = (1 + √D)/2`.
    pub fn is_half_integral(&self) -> bool {
        self.half_integral
    }

    /// Human-readable description of the second basis element.
    pub fn basis_second_generator(&self) -> &'static str {
        if self.half_integral {
            "(1+sqrt(D))/2"
        } else {
            "sqrt(D)"
        }
    }

    /// `ω_K` as a complex number.
    pub fn omega(&self) -> Complex64 {
        let s = (self.d.abs() as f64).sqrt();
        if self.half_integral {
            Complex64::new(0.5, 0.5 * s)
        } else {
            Complex64::new(0.0, s)
        }
    }

    pub fn element(&self, a: i64, b: i64) -> RingElement {
        RingElement { a, b, field: *self }
    }

    pub fn one(&self) -> RingElement {
        self.element(1, 0)
    }

    /// Norm form `N(a + bω_K)`.
    pub fn norm_of(&self, a: i64, b: i64) -> i64 {
        if self.half_integral {
            a * a + a * b + ((1 - self.d) / 4) * b * b
        } else {
            a * a - self.d * b * b
        }
    }

    /// All units of `O_K`, in deterministic order.
    pub fn units(&self) -> Vec<RingElement> {
        enumerate_by_norm(self, 1).elements
    }

    /// Canonical representative of a unit class: the unit multiple whose
    /// argument lies in `[0, 2π/|O_K^*|)`.
    fn is_canonical(&self, a: i64, b: i64) -> bool {
        match self.units {
            // first quadrant sector for Z[i], first sextant for Z[ρ]
            4 | 6 => a > 0 && b >= 0,
            _ => {
                let twice_re = if self.half_integral { 2 * a + b } else { 2 * a };
                twice_re > 0 || (twice_re == 0 && b > 0)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.d)
    }
}

/// An element `a + b·ω_K` of `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingElement {
    pub a: i64,
    pub b: i64,
    pub field: Field,
}

impl RingElement {
    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn norm(&self) -> i64 {
        self.field.norm_of(self.a, self.b)
    }

    pub fn abs(&self) -> f64 {
        (self.norm() as f64).sqrt()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.a as f64, 0.0) + self.field.omega() * self.b as f64
    }

    pub fn conj(&self) -> RingElement {
        if self.field.half_integral {
            self.field.element(self.a + self.b, -self.b)
        } else {
            self.field.element(self.a, -self.b)
        }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        let f = self.field;
        let (a, b, c, d) = (self.a, self.b, other.a, other.b);
        // ω² = D, or ω² = ω + (D-1)/4
        if f.half_integral {
            let k = (f.d - 1) / 4;
            f.element(a * c + b * d * k, a * d + b * c + b * d)
        } else {
            f.element(a * c + b * d * f.d, a * d + b * c)
        }
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.field.element(self.a + other.a, self.b + other.b)
    }

    pub fn neg(&self) -> RingElement {
        self.field.element(-self.a, -self.b)
    }

    /// Exact quotient `self / d` when `d | self` in `O_K`.
    pub fn div_exact(&self, d: &RingElement) -> Option<RingElement> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let p = self.mul(&d.conj());
        if p.a % n == 0 && p.b % n == 0 {
            Some(self.field.element(p.a / n, p.b / n))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &RingElement) -> bool {
        other.div_exact(self).is_some()
    }

    /// Unit multiple in the canonical sector.
    pub fn canonical(&self) -> RingElement {
        for u in self.field.units() {
            let v = self.mul(&u);
            if self.field.is_canonical(v.a, v.b) {
                return v;
            }
        }
        *self
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}w", self.a, self.b)
    }
}

/// Nonzero lattice points up to a norm bound, ordered by `(norm, a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePointSet {
    pub elements: Vec<RingElement>,
    pub norm_bound: i64,
}

impl LatticePointSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// CSV rows `a,b,norm` with a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "a,b,norm")?;
        for e in &self.elements {
            writeln!(out, "{},{},{}", e.a, e.b, e.norm())?;
        }
        Ok(())
    }
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// All nonzero `ω ∈ O_K` with `N(ω) ≤ x`, each exactly once.
pub fn enumerate_by_norm(field: &Field, x: i64) -> LatticePointSet {
    let mut elements = Vec::new();
    if x >= 1 {
        let ad = field.d.abs();
        if field.half_integral {
            // N = (a + b/2)² + |D| b²/4
            let bmax = isqrt(4 * x / ad) + 1;
            for b in -bmax..=bmax {
                let rest = 4 * x - ad * b * b;
                if rest < 0 {
                    continue;
                }
                // (2a + b)² ≤ rest
                let s = isqrt(rest);
                let lo = (-s - b).div_euclid(2) - 1;
                let hi = (s - b).div_euclid(2) + 1;
                for a in lo..=hi {
                    let n = field.norm_of(a, b);
                    if (a != 0 || b != 0) && n <= x {
                        elements.push(field.element(a, b));
                    }
                }
            }
        } else {
            let bmax = isqrt(x / ad);
            for b in -bmax..=bmax {
                let amax = isqrt(x - ad * b * b);
                for a in -amax..=amax {
                    if a != 0 || b != 0 {
                        elements.push(field.element(a, b));
                    }
                }
            }
        }
    }
    elements.sort_by_key(|e| (e.norm(), e.a, e.b));
    LatticePointSet {
        elements,
        norm_bound: x,
    }
}

/// Lattice points bucketed by norm, for repeated divisor queries.
#[derive(Debug, Clone)]
pub struct NormIndex {
    field: Field,
    bound: i64,
    by_norm: Vec<Vec<RingElement>>,
}

impl NormIndex {
    pub fn new(field: &Field, bound: i64) -> NormIndex {
        let mut by_norm = vec![Vec::new(); (bound.max(0) + 1) as usize];
        for e in enumerate_by_norm(field, bound).elements {
            by_norm[e.norm() as usize].push(e);
        }
        NormIndex {
            field: *field,
            bound,
            by_norm,
        }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn with_norm(&self, n: i64) -> &[RingElement] {
        &self.by_norm[n as usize]
    }

    /// Divisor classes of `ω` by trial division over lattice points whose
    /// norm divides `N(ω)`. Requires `N(ω) ≤ bound`.
    pub fn divisors(&self, w: &RingElement) -> Result<Vec<RingElement>> {
        if w.is_zero() {
            return Err(Error::InvalidArgument("divisors of zero".into()));
        }
        let n = w.norm();
        if n > self.bound {
            return Err(Error::InvalidArgument(format!(
                "norm {n} exceeds index bound {}",
                self.bound
            )));
        }
        let mut out = Vec::new();
        for m in integer_divisors(n) {
            for d in self.with_norm(m) {
                if self.field.is_canonical(d.a, d.b) && d.divides(w) {
                    out.push(*d);
                }
            }
        }
        out.sort_by_key(|e| (e.norm(), e.a, e.b));
        Ok(out)
    }

    /// Norms of the divisor classes of `ω`, ascending.
    pub fn divisor_norms(&self, w: &RingElement) -> Result<Vec<i64>> {
        Ok(self.divisors(w)?.iter().map(|d| d.norm()).collect())
    }
}

/// Positive divisors of `n ≥ 1`, ascending.
pub fn integer_divisors(n: i64) -> Vec<i64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut k = 1;
    while k * k <= n {
        if n % k == 0 {
            small.push(k);
            if k * k != n {
                large.push(n / k);
            }
        }
        k += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// One representative per unit class of the divisors of `ω`.
pub fn divisors_up_to_units(w: &RingElement) -> Result<Vec<RingElement>> {
    if w.is_zero() {
        return Err(Error::InvalidArgument("divisors of zero".into()));
    }
    NormIndex::new(&w.field, w.norm()).divisors(w)
}

/// `Σ_{d | ω, d mod units} N(d)^s`, equal to `|O_K^*|⁻¹ Σ_{d | ω} |d|^{2s}`.
pub fn sigma_s(w: &RingElement, s: Complex64) -> Result<Complex64> {
    let norms: Vec<i64> = divisors_up_to_units(w)?.iter().map(|d| d.norm()).collect();
    Ok(sigma_from_norms(&norms, s))
}

/// `σ_s` from a precomputed list of divisor-class norms.
pub fn sigma_from_norms(norms: &[i64], s: Complex64) -> Complex64 {
    norms.iter().map(|&n| (s * (n as f64).ln()).exp()).sum()
}

/// Rows `(X, Σ_{0 < N(ω) ≤ X} σ_0(ω))` for `X = 1..=x_max`.
pub fn divisor_sum_scan(field: &Field, x_max: i64) -> Result<Vec<(i64, u64)>> {
    if x_max < 1 {
        return Err(Error::InvalidArgument("x_max must be >= 1".into()));
    }
    let idx = NormIndex::new(field, x_max);
    let mut per_norm = vec![0u64; (x_max + 1) as usize];
    for n in 1..=x_max {
        for w in idx.with_norm(n) {
            per_norm[n as usize] += idx.divisors(w)?.len() as u64;
        }
    }
    let mut acc = 0u64;
    Ok((1..=x_max)
        .map(|x| {
            acc += per_norm[x as usize];
            (x, acc)
        })
        .collect())
}
