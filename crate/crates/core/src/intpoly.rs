//! Dense univariate polynomials with arbitrary-precision integer coefficients.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients stored from the constant term up; no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `x^n − 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        Self::monomial(BigInt::one(), n) - Self::one()
    }

    /// `1 + c·T`.
    pub fn linear(c: BigInt) -> Self {
        Self::new(vec![BigInt::one(), c])
    }

    /// The `n`-th cyclotomic polynomial.
    pub fn cyclotomic(n: usize) -> Self {
        let mut num = Self::one();
        let mut den = Self::one();
        for d in crate::arith::divisors(n as u64) {
            match crate::arith::moebius(n as u64 / d) {
                1 => num = &num * &Self::x_pow_minus_one(d as usize),
                -1 => den = &den * &Self::x_pow_minus_one(d as usize),
                _ => {}
            }
        }
        num.div_exact(&den).expect("cyclotomic quotient is exact")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `p(c·x)`.
    pub fn substitute_scaled(&self, c: &BigInt) -> Self {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Self::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Quotient and remainder over `Z`, or `None` if some step is not integral.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dd = d.degree()?;
        let lead = d.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (c, rem) = top.div_rem(&lead);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        Some((Self::new(q), Self::new(r)))
    }

    /// `self / d` when `d` divides `self` in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().unwrap().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    /// Primitive greatest common divisor over `Q`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.degree() < b.degree() {
            core::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("nonzero divisor");
        let lead = d.coeffs[dd].clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let top = r.coeffs[rd].clone();
            let shifted = Self::monomial(top, rd - dd);
            r = &r.scale(&lead) - &(&shifted * d);
        }
        r
    }

    /// Complex roots by Aberth iteration; multiplicities give clusters.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        self.scaled_roots(1.0)
    }

    /// Roots of `P(u / s)`, i.e. the roots of `P` multiplied by `s`.
    pub fn scaled_roots(&self, s: f64) -> Vec<Complex64> {
        let Some(n) = self.degree() else { return Vec::new() };
        if n == 0 {
            return Vec::new();
        }
        let c: Vec<f64> = self.coeffs.iter().enumerate().map(|(k, v)| v.to_f64().unwrap() / s.powi(k as i32)).collect();
        let lead = c[n];
        let c: Vec<f64> = c.iter().map(|v| v / lead).collect();
        let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + core::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        for _ in 0..500 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let (p, dp) = horner_with_derivative(&c, z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let repulse: Complex64 =
                    (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * repulse);
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1.0));
            }
            if moved < 1e-15 {
                break;
            }
        }
        z
    }
}

fn horner_with_derivative(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;
    fn sub(self, o: IntPoly) -> IntPoly {
        &self - &o
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;
    fn mul(self, o: IntPoly) -> IntPoly {
        &self * &o
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl IntPoly {
    /// Render with variable `var`, e.g. `1 + 78T + 78961T^2`.
    pub fn to_string_in(&self, var: &str) -> String {
        use core::fmt::Write;
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let show = k == 0 || !mag.is_one();
            if show {
                let _ = write!(s, "{mag}");
            }
            match k {
                0 => {}
                1 => s.push_str(var),
                _ => {
                    let _ = write!(s, "{var}^{k}");
                }
            }
        }
        s
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("T"))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn cyclotomics() {
        assert_eq!(IntPoly::cyclotomic(1), p(&[-1, 1]));
        assert_eq!(IntPoly::cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(IntPoly::cyclotomic(8), p(&[1, 0, 0, 0, 1]));
        assert_eq!(IntPoly::cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(IntPoly::cyclotomic(14).degree(), Some(6));
        let prod =
            crate::arith::divisors(12).iter().fold(IntPoly::one(), |acc, &d| &acc * &IntPoly::cyclotomic(d as usize));
        assert_eq!(prod, IntPoly::x_pow_minus_one(12));
    }

    #[test]
    fn division_and_gcd() {
        let a = &p(&[1, 2]) * &p(&[3, 0, 1]);
        assert_eq!(a.div_exact(&p(&[1, 2])), Some(p(&[3, 0, 1])));
        assert_eq!(p(&[1, 0, 1]).div_exact(&p(&[1, 1])), None);
        let g = (&p(&[1, 1]) * &p(&[2, 1])).gcd(&(&p(&[1, 1]) * &p(&[5, 0, 1])));
        assert_eq!(g, p(&[1, 1]));
        assert_eq!(p(&[6, 4]).primitive(), p(&[3, 2]));
        assert_eq!(p(&[1, 1]).gcd(&p(&[2, 1])), IntPoly::one());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 78, 78961]).to_string(), "1 + 78T + 78961T^2");
        assert_eq!(p(&[1, -281]).to_string(), "1 - 281T");
        assert_eq!(p(&[0, -1, 0, 2]).to_string_in("x"), "-x + 2x^3");
    }

    #[test]
    fn roots_of_known_polynomials() {
        let r = p(&[1, 78, 78961]).complex_roots();
        for z in r {
            assert!((z.norm() - 1.0 / 281.0).abs() < 1e-12);
        }
        let mut r: Vec<f64> = p(&[-6, 11, -6, 1]).complex_roots().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-9);
        }
    }
}
