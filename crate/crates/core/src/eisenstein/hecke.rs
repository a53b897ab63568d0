//! Hecke operators `T_n` on `E(P, it)`.

use num_complex::Complex64;

use super::evaluator::{eisenstein_eval, EisensteinEvaluator};
use super::point::{upper_triangular_act, HyperbolicPoint};
use crate::error::{Error, Result};
use crate::quadfield::{divisors_up_to_units, RingElement};

/// The coset `[[a, b], [0, d]]` with `ad = n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeckeRepresentative {
    pub a: RingElement,
    pub b: RingElement,
    pub d: RingElement,
}

/// A complete residue system of `O_K / dO_K`.
pub fn residues_mod(d: &RingElement) -> Result<Vec<RingElement>> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("residues modulo zero".into()));
    }
    let n = d.norm();
    let f = d.field;
    let mut reps: Vec<RingElement> = Vec::with_capacity(n as usize);
    // N(d) ∈ dO_K, so the box [0, N(d))² meets every class
    'outer: for y in 0..n {
        for x in 0..n {
            let c = f.element(x, y);
            if reps.iter().all(|r| !d.divides(&c.add(&r.neg()))) {
                reps.push(c);
                if reps.len() as i64 == n {
                    break 'outer;
                }
            }
        }
    }
    Ok(reps)
}

/// Upper-triangular coset representatives of determinant `n`: `d` over
/// divisor classes, `a = n/d`, `b` over residues mod `d`.
pub fn hecke_representatives(n: &RingElement) -> Result<Vec<HeckeRepresentative>> {
    if n.is_zero() {
        return Err(Error::InvalidArgument("Hecke operator T_0".into()));
    }
    let mut out = Vec::new();
    for d in divisors_up_to_units(n)? {
        let a = n.div_exact(&d).expect("divisor");
        for b in residues_mod(&d)? {
            out.push(HeckeRepresentative { a, b, d });
        }
    }
    Ok(out)
}

/// `(1/√N(n)) Σ_reps E(γP, it)`.
pub fn hecke_apply(
    ev: &EisensteinEvaluator,
    n: &RingElement,
    p: &HyperbolicPoint,
    t: f64,
) -> Result<Complex64> {
    if n.field != *ev.field() {
        return Err(Error::FieldMismatch(format!(
            "n over {} for evaluator over {}",
            n.field,
            ev.field()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for rep in hecke_representatives(n)? {
        let q = upper_triangular_act(
            rep.a.to_complex(),
            rep.b.to_complex(),
            rep.d.to_complex(),
            p,
        );
        acc += eisenstein_eval(ev, &q, t)?;
    }
    Ok(acc / (n.norm() as f64).sqrt())
}

/// Eigenvalue of `T_n` on `E(·, it)` read off the Fourier coefficients:
/// `|n|^{it} σ_{-it}(n)`.
pub fn hecke_eigenvalue(n: &RingElement, t: f64) -> Result<f64> {
    let h = 0.5 * (n.norm() as f64).ln();
    Ok(divisors_up_to_units(n)?
        .iter()
        .map(|d| (t * (h - (d.norm() as f64).ln())).cos())
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::Field;

    #[test]
    fn residue_systems() {
        let f = Field::new(-1).unwrap();
        assert_eq!(residues_mod(&f.one()).unwrap(), vec![f.element(0, 0)]);
        let r = residues_mod(&f.element(1, 1)).unwrap();
        assert_eq!(r.len(), 2);
        let g = Field::new(-7).unwrap();
        for (a, b) in [(2, 1), (3, 0), (1, 2)] {
            let d = g.element(a, b);
            assert_eq!(residues_mod(&d).unwrap().len() as i64, d.norm());
        }
    }

    #[test]
    fn representative_count_is_sigma_one() {
        let f = Field::new(-1).unwrap();
        // σ_1(1+i) = 1 + 2, σ_1(2) = 1 + 2 + 4
        assert_eq!(hecke_representatives(&f.element(1, 1)).unwrap().len(), 3);
        assert_eq!(hecke_representatives(&f.element(2, 0)).unwrap().len(), 7);
        assert_eq!(hecke_representatives(&f.element(0, 1)).unwrap().len(), 1);
    }

    #[test]
    fn eigenvalue_at_one_plus_i() {
        let f = Field::new(-1).unwrap();
        let t = 3.0;
        let v = hecke_eigenvalue(&f.element(1, 1), t).unwrap();
        assert!((v - 2.0 * (0.5 * t * 2f64.ln()).cos()).abs() < 1e-15);
    }

    #[test]
    fn unit_is_identity_and_eigenfunction() {
        let f = Field::new(-1).unwrap();
        let ev = EisensteinEvaluator::for_field(f, 1e-12).unwrap();
        let p = HyperbolicPoint::new(0.3, 0.2, 1.1).unwrap();
        let e = eisenstein_eval(&ev, &p, 3.0).unwrap();
        assert!((hecke_apply(&ev, &f.element(0, 1), &p, 3.0).unwrap() - e).norm() < 1e-13);
        let n = f.element(1, 1);
        let lambda = hecke_eigenvalue(&n, 3.0).unwrap();
        for (x, y, r) in [
            (0.3, 0.2, 1.1),
            (-0.1, 0.4, 0.9),
            (0.25, -0.35, 1.5),
            (0.0, 0.1, 0.7),
            (0.45, 0.45, 2.0),
        ] {
            let p = HyperbolicPoint::new(x, y, r).unwrap();
            let ratio =
                hecke_apply(&ev, &n, &p, 3.0).unwrap() / eisenstein_eval(&ev, &p, 3.0).unwrap();
            assert!((ratio - lambda).norm() < 1e-6, "{ratio} vs {lambda}");
        }
    }
}
