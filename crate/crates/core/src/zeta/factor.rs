use crate::intpoly::IntPoly;
use alloc::vec::Vec;
use num_bigint::BigInt;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, Zero};

/// One factor of a Weil-type polynomial and its multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilFactor {
    pub poly: IntPoly,
    pub multiplicity: u32,
}

fn strip(p: &mut IntPoly, d: &IntPoly) -> u32 {
    let mut k = 0;
    while p.degree().unwrap_or(0) >= d.degree().unwrap_or(0) {
        match p.div_exact(d) {
            Some(quo) => {
                *p = quo;
                k += 1;
            }
            None => break,
        }
    }
    k
}

/// Split a weight-2 polynomial over `F_q` into `1 ∓ qT`, integer quadratics
/// `1 + aT + q²T²` with `|a| ≤ 2q`, and an irreducible remainder.
pub fn factor_weil(poly: &IntPoly, q: u64) -> Vec<WeilFactor> {
    let qb = BigInt::from(q);
    let q2 = &qb * &qb;
    let mut rest = poly.clone();
    let mut out = Vec::new();
    for c in [-qb.clone(), qb.clone()] {
        let lin = IntPoly::linear(c);
        let k = strip(&mut rest, &lin);
        if k > 0 {
            out.push(WeilFactor { poly: lin, multiplicity: k });
        }
    }
    let bound = 2 * q as i64;
    for a in -bound..=bound {
        if rest.degree().unwrap_or(0) < 2 {
            break;
        }
        let quad = IntPoly::new(alloc::vec![BigInt::one(), BigInt::from(a), q2.clone()]);
        let k = strip(&mut rest, &quad);
        if k > 0 {
            out.push(WeilFactor { poly: quad, multiplicity: k });
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(WeilFactor { poly: rest, multiplicity: 1 });
    }
    out
}

/// Every reciprocal root of `poly` has absolute value `q^{weight/2}` up to a
/// relative error `rel`.
pub fn weil_magnitudes_ok(poly: &IntPoly, q: u64, weight: u32, rel: f64) -> bool {
    let scale = (q as f64).powf(weight as f64 / 2.0);
    // roots of P(u / q^{w/2}) lie on the unit circle
    poly.scaled_roots(scale).iter().all(|z| (z.norm() - 1.0).abs() <= rel)
}

/// Greatest common factor normalised to constant term 1.
pub fn common_factor(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let g = a.gcd(b);
    let c0 = g.coeff(0);
    if c0.is_zero() {
        return g;
    }
    let sign = if c0.is_negative() { -BigInt::one() } else { BigInt::one() };
    let g = g.scale(&sign);
    let c0 = g.coeff(0);
    if c0.is_one() {
        return g;
    }
    g.div_exact(&IntPoly::constant(c0.clone())).unwrap_or(g)
}

/// Extend known coefficients `c_0..=c_k` of a degree-`d` polynomial whose
/// reciprocal roots have absolute value `q^{weight/2}`, via
/// `c_{d−j} = ε q^{weight(d/2−j)} c_j` with `ε = ±1`. Returns the unique
/// sign choice with all roots on the circle, if there is exactly one.
pub fn complete_by_functional_equation(known: &[BigInt], d: usize, q: u64, weight: u32) -> Option<IntPoly> {
    if known.len() < d / 2 + 1 || known.is_empty() {
        return None;
    }
    if weight * d as u32 % 2 == 1 {
        return None;
    }
    let qb = BigInt::from(q);
    let mut found = Vec::new();
    for eps in [1i32, -1] {
        let mut c = alloc::vec![BigInt::zero(); d + 1];
        let mut consistent = true;
        for j in 0..=d {
            if j < known.len() {
                c[j] = known[j].clone();
            }
        }
        for j in 0..=d / 2 {
            let e = weight as i64 * (d as i64 - 2 * j as i64);
            let scaled = &c[j] * qb.pow((e / 2) as u32) * eps;
            let k = d - j;
            if k < known.len() {
                if known[k] != scaled {
                    consistent = false;
                }
            } else {
                c[k] = scaled;
            }
        }
        if !consistent {
            continue;
        }
        let p = IntPoly::new(c);
        if p.degree() == Some(d) && weil_magnitudes_ok(&p, q, weight, 1e-3) {
            found.push(p);
        }
    }
    (found.len() == 1).then(|| found.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: i64) -> IntPoly {
        IntPoly::linear(BigInt::from(c))
    }

    fn quad(a: i64, q: i64) -> IntPoly {
        IntPoly::from_i64s(&[1, a, q * q])
    }

    #[test]
    fn factors_table_shape() {
        let q = 281;
        let p = lin(-q).pow(3) * lin(q).pow(16) * quad(238, q);
        let f = factor_weil(&p, q as u64);
        assert_eq!(f.len(), 3);
        assert_eq!(f[0], WeilFactor { poly: lin(-q), multiplicity: 3 });
        assert_eq!(f[1], WeilFactor { poly: lin(q), multiplicity: 16 });
        assert_eq!(f[2], WeilFactor { poly: quad(238, q), multiplicity: 1 });
        assert!(f.iter().all(|w| weil_magnitudes_ok(&w.poly, q as u64, 2, 1e-9)));
    }

    #[test]
    fn irreducible_remainder() {
        let q = 5;
        let p = IntPoly::from_i64s(&[1, 1, 40, 25, 625]);
        let f = factor_weil(&p, q);
        assert_eq!(f, alloc::vec![WeilFactor { poly: p.clone(), multiplicity: 1 }]);
        assert!(!weil_magnitudes_ok(&lin(-3), 5, 2, 1e-6));
    }

    #[test]
    fn gcd_normalised() {
        let a = lin(-7).pow(2) * quad(3, 7);
        let b = lin(-7) * lin(7);
        assert_eq!(common_factor(&a, &b), lin(-7));
        assert_eq!(common_factor(&a, &lin(2)), IntPoly::one());
    }

    #[test]
    fn completion() {
        let q = 281i64;
        // (1 − qT)³(1 + qT): c₂ = 0 lets both signs through, only one is on the circle
        let target = lin(-q).pow(3) * lin(q);
        let known = &target.coeffs()[..3];
        assert_eq!(complete_by_functional_equation(known, 4, q as u64, 2), Some(target));
        let t2 = lin(-q) * quad(78, q);
        // odd degree: both signs put the roots on the circle
        assert_eq!(complete_by_functional_equation(&t2.coeffs()[..2], 3, q as u64, 2), None);
        assert_eq!(complete_by_functional_equation(&t2.coeffs()[..3], 3, q as u64, 2), Some(t2));
        assert_eq!(complete_by_functional_equation(&[BigInt::one()], 4, 7, 2), None);
    }
}
