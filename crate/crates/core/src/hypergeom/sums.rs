use super::{bcm_data, field_of_definition, is_good, FieldOfDefinition, HypergeometricParameters};
use crate::error::{Error, Result};
use crate::ff::{FieldTable, GaussSumTable};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::ToPrimitive;

/// Residual bound `min(factor · q^{d/2}, ceiling)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub factor: f64,
    /// Keeps the bound below 1/2 so rounding stays unambiguous.
    pub ceiling: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { factor: 1e-6, ceiling: 0.25 }
    }
}

impl Tolerance {
    pub fn bound(&self, q: u64, d: usize) -> f64 {
        (self.factor * (q as f64).powf(d as f64 / 2.0)).min(self.ceiling)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactValue {
    Integer(i128),
    /// `re + im·i`.
    Gaussian(i128, i128),
    /// `(re + im·i) / q^e` with `e ≥ 1` and `q` not dividing both parts.
    Scaled {
        re: i128,
        im: i128,
        q: u64,
        e: u32,
    },
}

impl ExactValue {
    pub fn as_integer(&self) -> Option<i128> {
        match *self {
            Self::Integer(v) => Some(v),
            Self::Gaussian(re, 0) => Some(re),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match *self {
            Self::Integer(v) => Complex64::new(v as f64, 0.0),
            Self::Gaussian(a, b) => Complex64::new(a as f64, b as f64),
            Self::Scaled { re, im, q, e } => Complex64::new(re as f64, im as f64) / (q as f64).powi(e as i32),
        }
    }
}

impl core::fmt::Display for ExactValue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let gaussian = |f: &mut core::fmt::Formatter<'_>, a: i128, b: i128| match (a, b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}i"),
            (a, b) if b < 0 => write!(f, "{a} - {}i", -b),
            (a, b) => write!(f, "{a} + {b}i"),
        };
        match *self {
            Self::Integer(v) => write!(f, "{v}"),
            Self::Gaussian(a, b) => gaussian(f, a, b),
            Self::Scaled { re, im, q, e } => {
                if im != 0 {
                    write!(f, "(")?;
                    gaussian(f, re, im)?;
                    write!(f, ")")?;
                } else {
                    write!(f, "{re}")?;
                }
                if e == 1 {
                    write!(f, "/{q}")
                } else {
                    write!(f, "/{q}^{e}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperSumValue {
    pub exact: ExactValue,
    pub raw: Complex64,
    pub residual: f64,
    pub bound: f64,
}

impl HyperSumValue {
    /// Smallest `e` for which `q^e · raw` rounds within the bound. The bound
    /// is tightened to `ceiling / q^e` so distinct values stay separated.
    fn round(raw: Complex64, field: &FieldOfDefinition, q: u64, d: usize, tol: &Tolerance) -> Result<Self> {
        let gaussian = match field {
            FieldOfDefinition::Rationals => false,
            FieldOfDefinition::GaussianRationals => true,
            other => return Err(Error::Unsupported(format!("values in {}", other.describe()))),
        };
        let bound = tol.bound(q, d);
        let mut first = None;
        let mut scale = 1.0f64;
        for e in 0..=2 * d as u32 {
            let scaled = raw * scale;
            if scaled.norm() > (1u64 << 50) as f64 {
                break;
            }
            let re = scaled.re.round();
            let im = if gaussian { scaled.im.round() } else { 0.0 };
            let residual = (scaled - Complex64::new(re, im)).norm() / scale;
            if residual.is_nan() {
                break;
            }
            first.get_or_insert(residual);
            if residual <= bound.min(tol.ceiling / scale) {
                let (re, im) = (re as i128, im as i128);
                let exact = match (e, gaussian) {
                    (0, false) => ExactValue::Integer(re),
                    (0, true) => ExactValue::Gaussian(re, im),
                    _ => ExactValue::Scaled { re, im, q, e },
                };
                return Ok(Self { exact, raw, residual, bound });
            }
            scale *= q as f64;
        }
        Err(Error::Residual { residual: first.unwrap_or(f64::NAN), bound })
    }
}

// deterministic pairwise reduction
fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Pairwise sum of `term(0..n)` in fixed-size blocks.
fn blocked_sum(n: u64, term: impl Fn(u64) -> Complex64) -> Complex64 {
    const BLOCK: u64 = 1 << 12;
    let mut buf = Vec::with_capacity(BLOCK as usize);
    let mut partial = Vec::with_capacity(n.div_ceil(BLOCK) as usize);
    let mut start = 0;
    while start < n {
        buf.clear();
        buf.extend((start..n.min(start + BLOCK)).map(&term));
        partial.push(pairwise_sum(&buf));
        start += BLOCK;
    }
    pairwise_sum(&partial)
}

/// `e^{2πik/n}` as a product of a coarse and a fine table, each of size about `√n`.
struct Roots {
    n: u64,
    step: u64,
    coarse: Vec<Complex64>,
    fine: Vec<Complex64>,
}

impl Roots {
    fn new(n: u64) -> Self {
        let step = (n as f64).sqrt().ceil().max(1.0) as u64;
        let at = |k: u64| Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
        let coarse = (0..n.div_ceil(step)).map(|a| at(a * step)).collect();
        let fine = (0..step).map(at).collect();
        Self { n, step, coarse, fine }
    }

    fn get(&self, k: u64) -> Complex64 {
        let k = k % self.n;
        self.coarse[(k / self.step) as usize] * self.fine[(k % self.step) as usize]
    }
}

fn scaled_integers(v: &[num_rational::Rational64], n: u64) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            let den = *x.denom() as u64;
            if n % den != 0 {
                Err(Error::Divisibility { q_minus_one: n, denominator: den })
            } else {
                Ok(*x.numer() * (n / den) as i64)
            }
        })
        .collect()
}

/// `−1/(q−1) Σ_m ω((−1)^d t)^m Π_i g(m+α_iN) g(−m−β_iN) / (g(α_iN) g(−β_iN))`, `N = q − 1`.
pub fn hyper_sum_classic(
    params: &HypergeometricParameters,
    t: u32,
    f: &FieldTable,
    gauss: &GaussSumTable,
    tol: &Tolerance,
) -> Result<HyperSumValue> {
    if t == 0 {
        return Err(Error::ZeroArgument);
    }
    let n = f.q_times();
    let a = scaled_integers(params.alpha(), n)?;
    let b = scaled_integers(params.beta(), n)?;
    let d = params.degree();
    let arg = if d % 2 == 1 { f.neg(t) } else { t };
    let l = f.log(arg)? as u64;
    let roots = Roots::new(n);
    let norm: Complex64 = a.iter().zip(&b).map(|(&ai, &bi)| gauss.g(ai) * gauss.g(-bi)).product();
    let total = blocked_sum(n, |m| {
        let mut term = roots.get(m * l % n);
        let m = m as i64;
        for (&ai, &bi) in a.iter().zip(&b) {
            term *= gauss.g(m + ai) * gauss.g(-m - bi);
        }
        term
    });
    let raw = -total / (norm * n as f64);
    HyperSumValue::round(raw, &field_of_definition(params), f.q(), d, tol)
}

fn bigint_to_field(x: &BigInt, f: &FieldTable) -> u32 {
    f.from_int(x.mod_floor(&BigInt::from(f.p())).to_i64().unwrap())
}

/// `(−1)^{r+s}/(1−q) Σ_m q^{−s(0)+s(m)} Π g(p_j m) Π g(−q_j m) ω(ε M^{−1} t)^m`.
pub fn hyper_sum_bcm(
    params: &HypergeometricParameters,
    t: u32,
    f: &FieldTable,
    gauss: &GaussSumTable,
    tol: &Tolerance,
) -> Result<HyperSumValue> {
    if t == 0 {
        return Err(Error::ZeroArgument);
    }
    if !is_good(f.q(), params) {
        return Err(Error::NotGood { q: f.q(), denominator: params.denominator_lcm() });
    }
    let data = bcm_data(params)?;
    let n = f.q_times();
    let q = f.q() as f64;
    let m_inv = f.mul(bigint_to_field(data.m.denom(), f), f.inv(bigint_to_field(data.m.numer(), f))?);
    let mut arg = f.mul(m_inv, t);
    if data.epsilon < 0 {
        arg = f.neg(arg);
    }
    let l = f.log(arg)? as u64;
    let roots = Roots::new(n);
    let s0 = data.s(0, n) as i32;
    let base = q.powi(-s0);
    let term = |m: u64| {
        let mut term = roots.get(m * l % n) * base;
        for &pj in &data.p_list {
            term *= gauss.g((pj * m) as i64);
        }
        for &qj in &data.q_list {
            term *= gauss.g(-((qj * m) as i64));
        }
        term
    };
    let mut total = blocked_sum(n, term);
    // q^{s(m)} differs from 1 only when the order of m is a cyclotomic index of D
    for (&k, &e) in data.d_exponents.iter() {
        if n % k == 0 && e > 0 {
            for j in (0..k).filter(|&j| crate::arith::gcd(j, k) == 1) {
                let m = j * (n / k);
                total += term(m) * (q.powi(e as i32) - 1.0);
            }
        }
    }
    let sign = if (data.p_list.len() + data.q_list.len()) % 2 == 0 { 1.0 } else { -1.0 };
    let raw = total * sign / (1.0 - q);
    HyperSumValue::round(raw, &FieldOfDefinition::Rationals, f.q(), params.degree(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldOptions;

    fn params(a: &[(i64, i64)], b: &[(i64, i64)]) -> HypergeometricParameters {
        HypergeometricParameters::from_pairs(a, b).unwrap()
    }

    fn ctx(p: u64) -> (FieldTable, GaussSumTable) {
        let f = FieldTable::new(p, 1).unwrap();
        let g = GaussSumTable::new(&f).unwrap();
        (f, g)
    }

    // H(1/2; 0 | t) = φ(1 − t) for the quadratic character φ
    fn half_oracle(p: u64, t: u64) -> i128 {
        crate::arith::legendre(1 - t as i64, p) as i128
    }

    #[test]
    fn degree_one_agrees_with_oracle() {
        let h = params(&[(1, 2)], &[(0, 1)]);
        for p in [5u64, 13, 17, 29] {
            let (f, g) = ctx(p);
            for t in 1..p as u32 {
                let c = hyper_sum_classic(&h, t, &f, &g, &Tolerance::default()).unwrap();
                let b = hyper_sum_bcm(&h, t, &f, &g, &Tolerance::default()).unwrap();
                assert_eq!(c.exact, b.exact, "p={p} t={t}");
                assert_eq!(c.exact.as_integer().unwrap(), half_oracle(p, t as u64), "p={p} t={t}");
            }
        }
    }

    #[test]
    fn quartic_block_at_281() {
        let (f, g) = ctx(281);
        let h = params(&[(1, 4), (1, 2), (3, 4)], &[(0, 1), (0, 1), (0, 1)]);
        let t = f.inv(f.pow_u(3, 4)).unwrap();
        let c = hyper_sum_classic(&h, t, &f, &g, &Tolerance::default()).unwrap();
        let b = hyper_sum_bcm(&h, t, &f, &g, &Tolerance::default()).unwrap();
        assert_eq!(c.exact, ExactValue::Integer(203));
        assert_eq!(b.exact, ExactValue::Integer(203));
    }

    #[test]
    fn generator_independence() {
        let h = params(&[(1, 8), (3, 8), (5, 8), (7, 8)], &[(0, 1), (1, 4), (1, 2), (3, 4)]);
        let f1 = FieldTable::new(41, 1).unwrap();
        let f2 = FieldTable::with_options(41, 1, FieldOptions { generator_rank: 1, ..Default::default() }).unwrap();
        assert_ne!(f1.generator(), f2.generator());
        let (g1, g2) = (GaussSumTable::new(&f1).unwrap(), GaussSumTable::new(&f2).unwrap());
        for t in [1u32, 2, 7, 30] {
            let a = hyper_sum_classic(&h, t, &f1, &g1, &Tolerance::default()).unwrap();
            let b = hyper_sum_classic(&h, t, &f2, &g2, &Tolerance::default()).unwrap();
            assert_eq!(a.exact, b.exact);
            let a = hyper_sum_bcm(&h, t, &f1, &g1, &Tolerance::default()).unwrap();
            let b = hyper_sum_bcm(&h, t, &f2, &g2, &Tolerance::default()).unwrap();
            assert_eq!(a.exact, b.exact);
        }
    }

    #[test]
    fn gaussian_values() {
        let (f, g) = ctx(13);
        let h = params(&[(1, 4)], &[(0, 1)]);
        let v = hyper_sum_classic(&h, 5, &f, &g, &Tolerance::default()).unwrap();
        assert!(matches!(v.exact, ExactValue::Gaussian(..)));
        assert!(v.residual < 1e-9);
    }

    #[test]
    fn preconditions() {
        let (f, g) = ctx(13);
        let h = params(&[(1, 8)], &[(0, 1)]);
        assert_eq!(
            hyper_sum_classic(&h, 1, &f, &g, &Tolerance::default()).unwrap_err(),
            Error::Divisibility { q_minus_one: 12, denominator: 8 }
        );
        let h = params(&[(1, 2)], &[(0, 1)]);
        assert_eq!(hyper_sum_bcm(&h, 0, &f, &g, &Tolerance::default()).unwrap_err(), Error::ZeroArgument);
        let tight = Tolerance { factor: 0.0, ceiling: 0.0 };
        assert!(matches!(hyper_sum_classic(&h, 2, &f, &g, &tight), Err(Error::Residual { .. }) | Ok(_)));
    }

    #[test]
    fn denominators_in_q() {
        let f = FieldTable::new(41, 1).unwrap();
        let g = GaussSumTable::new(&f).unwrap();
        let direct = GaussSumTable::direct(&f).unwrap();
        let h = params(&[(1, 8), (3, 8), (5, 8), (7, 8)], &[(1, 4), (1, 4), (3, 4), (3, 4)]);
        let tol = Tolerance::default();
        let mut scaled = 0;
        for t in 1..41u32 {
            let c = hyper_sum_classic(&h, t, &f, &g, &tol).unwrap();
            let b = hyper_sum_bcm(&h, t, &f, &g, &tol).unwrap();
            let d = hyper_sum_classic(&h, t, &f, &direct, &tol).unwrap();
            assert_eq!(c.exact, b.exact, "t={t}");
            assert!((d.raw - c.exact.to_complex()).norm() < 1e-9, "t={t}");
            if let ExactValue::Scaled { re, q, e, .. } = c.exact {
                assert_eq!((q, e), (41, 1));
                assert_ne!(re % 41, 0);
                scaled += 1;
            }
        }
        assert!(scaled > 0);
    }
}
