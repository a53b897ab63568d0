//! Points of `H³`, quaternions and the action of `PSL2(O_K)`.

use std::ops::{Add, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadfield::{Field, RingElement};

/// Largest k-component tolerated in a Möbius image before rejecting it.
pub const K_COMPONENT_TOL: f64 = 1e-12;

/// The point `z + r j` of upper half-space, `z = x + iy`, `r > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicPoint {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

impl HyperbolicPoint {
    pub fn new(x: f64, y: f64, r: f64) -> Result<HyperbolicPoint> {
        if !(x.is_finite() && y.is_finite() && r.is_finite()) || r <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "point ({x}, {y}, {r}) is not in H3"
            )));
        }
        Ok(HyperbolicPoint { x, y, r })
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::new(self.x, self.y, self.r, 0.0)
    }
}

/// `w + x i + y j + z k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion { w, x, y, z }
    }

    pub fn from_complex(c: Complex64) -> Quaternion {
        Quaternion::new(c.re, c.im, 0.0, 0.0)
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn inv(&self) -> Option<Quaternion> {
        let n = self.norm_sqr();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        let c = self.conj();
        Some(Quaternion::new(c.w / n, c.x / n, c.y / n, c.z / n))
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

/// A matrix `[[a, b], [c, d]]` over `O_K` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement {
    pub a: RingElement,
    pub b: RingElement,
    pub c: RingElement,
    pub d: RingElement,
}

impl GroupElement {
    pub fn new(
        a: RingElement,
        b: RingElement,
        c: RingElement,
        d: RingElement,
    ) -> Result<GroupElement> {
        let f = a.field;
        if [b.field, c.field, d.field].iter().any(|g| g.d() != f.d()) {
            return Err(Error::InvalidGroupElement(
                "entries from different fields".into(),
            ));
        }
        let det = a.mul(&d).add(&b.mul(&c).neg());
        if det != f.one() {
            return Err(Error::InvalidGroupElement(format!(
                "determinant {} + {}·ω is not 1",
                det.a, det.b
            )));
        }
        Ok(GroupElement { a, b, c, d })
    }

    pub fn identity(field: &Field) -> GroupElement {
        let (o, z) = (field.one(), field.element(0, 0));
        GroupElement {
            a: o,
            b: z,
            c: z,
            d: o,
        }
    }

    /// `[[1, w], [0, 1]]`.
    pub fn translation(w: RingElement) -> GroupElement {
        let f = w.field;
        GroupElement {
            a: f.one(),
            b: w,
            c: f.element(0, 0),
            d: f.one(),
        }
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn inversion(field: &Field) -> GroupElement {
        let (o, z) = (field.one(), field.element(0, 0));
        GroupElement {
            a: z,
            b: o.neg(),
            c: o,
            d: z,
        }
    }

    pub fn field(&self) -> Field {
        self.a.field
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, o: &GroupElement) -> GroupElement {
        let m = |p: &RingElement, q: &RingElement, r: &RingElement, s: &RingElement| {
            p.mul(q).add(&r.mul(s))
        };
        GroupElement {
            a: m(&self.a, &o.a, &self.b, &o.c),
            b: m(&self.a, &o.b, &self.b, &o.d),
            c: m(&self.c, &o.a, &self.d, &o.c),
            d: m(&self.c, &o.b, &self.d, &o.d),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            a: self.d,
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a,
        }
    }

    /// `Π_k T^{w_k} S` for `w_k = a_k + b_k ω`.
    pub fn from_word(field: &Field, letters: &[(i64, i64)]) -> GroupElement {
        let s = GroupElement::inversion(field);
        letters
            .iter()
            .fold(GroupElement::identity(field), |g, &(a, b)| {
                g.compose(&GroupElement::translation(field.element(a, b)))
                    .compose(&s)
            })
    }
}

/// `(aP + b)(cP + d)⁻¹` in the quaternions.
pub fn mobius_act(g: &GroupElement, p: &HyperbolicPoint) -> Result<HyperbolicPoint> {
    let q = |e: &RingElement| Quaternion::from_complex(e.to_complex());
    let pq = p.to_quaternion();
    let num = q(&g.a) * pq + q(&g.b);
    let den = q(&g.c) * pq + q(&g.d);
    let inv = den
        .inv()
        .ok_or_else(|| Error::InvalidGroupElement("cP + d is not invertible".into()))?;
    let img = num * inv;
    if img.z.abs() > K_COMPONENT_TOL * img.norm_sqr().sqrt().max(1.0) {
        return Err(Error::InvalidGroupElement(format!(
            "image has k-component {:e}",
            img.z
        )));
    }
    if !(img.y > 0.0) || !img.w.is_finite() || !img.x.is_finite() {
        return Err(Error::InvalidGroupElement(format!(
            "image height {} is not positive",
            img.y
        )));
    }
    Ok(HyperbolicPoint {
        x: img.w,
        y: img.x,
        r: img.y,
    })
}

/// The upper-triangular map `P ↦ (az + b)/d + |a/d| r j` of determinant `ad`.
pub fn upper_triangular_act(
    a: Complex64,
    b: Complex64,
    d: Complex64,
    p: &HyperbolicPoint,
) -> HyperbolicPoint {
    let z = (a * p.z() + b) / d;
    HyperbolicPoint {
        x: z.re,
        y: z.im,
        r: p.r * a.norm() / d.norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gi() -> Field {
        Field::new(-1).unwrap()
    }

    #[test]
    fn quaternion_units() {
        let i = Quaternion::new(0.0, 1.0, 0.0, 0.0);
        let j = Quaternion::new(0.0, 0.0, 1.0, 0.0);
        let k = Quaternion::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i * j, k);
        assert_eq!(j * i, Quaternion::new(0.0, 0.0, 0.0, -1.0));
        assert_eq!(i * i, Quaternion::new(-1.0, 0.0, 0.0, 0.0));
        assert_eq!(j * k, i);
        let q = Quaternion::new(0.3, -1.2, 2.0, 0.7);
        let e = q * q.inv().unwrap();
        assert!(
            (e.w - 1.0).abs() < 1e-15
                && e.x.abs() < 1e-15
                && e.y.abs() < 1e-15
                && e.z.abs() < 1e-15
        );
    }

    #[test]
    fn identity_and_translation() {
        let f = gi();
        let p = HyperbolicPoint::new(0.3, 0.2, 1.1).unwrap();
        assert_eq!(mobius_act(&GroupElement::identity(&f), &p).unwrap(), p);
        let q = mobius_act(&GroupElement::translation(f.element(0, 1)), &p).unwrap();
        assert!(
            (q.x - 0.3).abs() < 1e-15 && (q.y - 1.2).abs() < 1e-15 && (q.r - 1.1).abs() < 1e-15
        );
    }

    #[test]
    fn inversion_fixes_j() {
        let f = gi();
        let j = HyperbolicPoint::new(0.0, 0.0, 1.0).unwrap();
        let q = mobius_act(&GroupElement::inversion(&f), &j).unwrap();
        assert!(q.x.abs() < 1e-15 && q.y.abs() < 1e-15 && (q.r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inversion_matches_closed_form() {
        // S(z + rj) = -z̄/(|z|² + r²) + r/(|z|² + r²) j
        let f = Field::new(-3).unwrap();
        let p = HyperbolicPoint::new(0.3, 0.2, 1.1).unwrap();
        let n = 0.09 + 0.04 + 1.21;
        let q = mobius_act(&GroupElement::inversion(&f), &p).unwrap();
        assert!(
            (q.x + 0.3 / n).abs() < 1e-15
                && (q.y - 0.2 / n).abs() < 1e-15
                && (q.r - 1.1 / n).abs() < 1e-15
        );
    }

    #[test]
    fn action_is_a_group_action() {
        let f = Field::new(-7).unwrap();
        let g = GroupElement::translation(f.element(1, 1)).compose(&GroupElement::inversion(&f));
        let h = GroupElement::inversion(&f).compose(&GroupElement::translation(f.element(-2, 1)));
        let p = HyperbolicPoint::new(-0.1, 0.35, 0.8).unwrap();
        let lhs = mobius_act(&g.compose(&h), &p).unwrap();
        let rhs = mobius_act(&g, &mobius_act(&h, &p).unwrap()).unwrap();
        assert!(
            (lhs.x - rhs.x).abs() < 1e-13
                && (lhs.y - rhs.y).abs() < 1e-13
                && (lhs.r - rhs.r).abs() < 1e-13
        );
        let back = mobius_act(&g.inverse(), &mobius_act(&g, &p).unwrap()).unwrap();
        assert!(
            (back.x - p.x).abs() < 1e-13
                && (back.y - p.y).abs() < 1e-13
                && (back.r - p.r).abs() < 1e-13
        );
    }

    #[test]
    fn words_have_determinant_one() {
        let f = Field::new(-3).unwrap();
        let g = GroupElement::from_word(&f, &[(1, 0), (-2, 1), (0, 1)]);
        assert!(GroupElement::new(g.a, g.b, g.c, g.d).is_ok());
        let s = GroupElement::inversion(&f);
        let t = GroupElement::translation(f.element(1, 0));
        assert_eq!(GroupElement::from_word(&f, &[(1, 0)]), t.compose(&s));
        assert_eq!(GroupElement::from_word(&f, &[]), GroupElement::identity(&f));
    }

    #[test]
    fn determinant_is_checked() {
        let f = gi();
        let two = f.element(2, 0);
        assert!(matches!(
            GroupElement::new(two, f.element(0, 0), f.element(0, 0), f.one()),
            Err(Error::InvalidGroupElement(_))
        ));
        // [[i, 0], [0, -i]] has determinant 1
        assert!(GroupElement::new(
            f.element(0, 1),
            f.element(0, 0),
            f.element(0, 0),
            f.element(0, -1)
        )
        .is_ok());
        assert!(HyperbolicPoint::new(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn upper_triangular_scaling() {
        let p = HyperbolicPoint::new(0.2, -0.4, 0.5).unwrap();
        let q = upper_triangular_act(
            Complex64::new(1.0, 1.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            &p,
        );
        assert!((q.r - 0.5 * 2f64.sqrt()).abs() < 1e-15);
        let z = Complex64::new(1.0, 1.0) * p.z();
        assert!((q.x - z.re).abs() < 1e-15 && (q.y - z.im).abs() < 1e-15);
    }
}
