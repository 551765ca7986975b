//! L-polynomials of hypergeometric sums and zeta numerators of quartic pencils.
//!
//! An L-polynomial is `exp(−Σ_r s_r T^r / r)` for power sums `s_r`; it is
//! recovered from finitely many `s_r` with Newton's identities
//! `k c_k = −Σ_{i=1}^k s_i c_{k−i}`. For a hypergeometric block
//! `s_r = χ(q^r) q^{r·tate} H_{q^r}(α; β | t)`.

mod assemble;
mod factor;

pub use assemble::{
    assemble_px_f4, assemble_px_l2l2, calibrate_signs, gaussian_block, hodge_weight, minus_one_block, octic_block,
    r_block, trace_check, trace_count, BlockReport, Calibration, Orientation, Pencil, ZetaReport,
};
pub use factor::{common_factor, complete_by_functional_equation, factor_weil, weil_magnitudes_ok, WeilFactor};

use crate::arith::legendre;
use crate::error::{Error, Result};
use crate::ff::{FieldOptions, FieldTable, GaussSumTable, FIELD_CAP};
use crate::hypergeom::{field_of_definition, hyper_sum_bcm, hyper_sum_classic, HypergeometricParameters, Tolerance};
use crate::intpoly::IntPoly;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

/// Integer polynomial with constant term 1 whose reciprocal roots should have
/// absolute value `q^{weight/2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub poly: IntPoly,
    pub q: u64,
    pub weight: u32,
    pub provenance: String,
}

impl LPolynomial {
    pub fn new(poly: IntPoly, q: u64, weight: u32, provenance: impl Into<String>) -> Self {
        Self { poly, q, weight, provenance: provenance.into() }
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.poly.coeff(k)
    }
}

/// Coefficients `c_0 = 1, c_1, …, c_n` from power sums `s_1, …, s_n`.
pub fn newton_coefficients(s: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut c = Vec::with_capacity(s.len() + 1);
    c.push(BigInt::one());
    for k in 1..=s.len() {
        let acc: BigInt = (1..=k).map(|i| &s[i - 1] * &c[k - i]).sum();
        let (quo, rem) = (-acc).div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(Error::Polynomiality(format!("coefficient {k} is not integral")));
        }
        c.push(quo);
    }
    Ok(c)
}

/// Power sums of `Π (1 − α_i T)`, the inverse of [`newton_coefficients`].
pub fn power_sums(c: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut v = -BigInt::from(k) * c.get(k).cloned().unwrap_or_default();
        for i in 1..k {
            v -= &s[i - 1] * c.get(k - i).cloned().unwrap_or_default();
        }
        s.push(v);
    }
    s
}

/// Quadratic characters used to twist power sums. Evaluated at `q^r` for a
/// prime `q`; the `√−1` characters live on `Q(i)` and need `q ≡ 1 mod 4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Character {
    Trivial,
    /// `(−1)^{(N−1)/2}`.
    MinusOne,
    /// Quadratic character of `ψ` in `F_N`.
    Psi(u64),
    /// `(−1)^{(N−1)/4}` at a split prime of norm `q`.
    SqrtMinusOne,
    /// Product of [`Character::SqrtMinusOne`] and [`Character::Psi`].
    SqrtMinusOnePsi(u64),
}

impl Character {
    pub fn value(&self, q: u64, r: u32) -> Result<i64> {
        let qr = (q as u128).pow(r);
        let psi_char = |psi: u64| -> Result<i64> {
            let l = legendre(psi as i64, q) as i64;
            if l == 0 {
                return Err(Error::Unsupported(format!("psi ≡ 0 mod {q} has no quadratic character value")));
            }
            Ok(l.pow(r))
        };
        let sqrt_minus_one = || -> Result<i64> {
            if q % 4 != 1 {
                return Err(Error::Unsupported(format!("q = {q} is inert in Q(i)")));
            }
            Ok(if ((qr - 1) / 4) % 2 == 0 { 1 } else { -1 })
        };
        match *self {
            Self::Trivial => Ok(1),
            Self::MinusOne => Ok(if ((qr - 1) / 2) % 2 == 0 { 1 } else { -1 }),
            Self::Psi(psi) => psi_char(psi),
            Self::SqrtMinusOne => sqrt_minus_one(),
            Self::SqrtMinusOnePsi(psi) => Ok(sqrt_minus_one()? * psi_char(psi)?),
        }
    }
}

/// `s_r ↦ χ(q^r) · q^{r·tate} · σ^r · s_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Twist {
    pub character: Character,
    pub tate: u32,
    /// Global sign `σ` fixed by calibration.
    pub sign: i8,
}

impl Twist {
    pub const NONE: Twist = Twist { character: Character::Trivial, tate: 0, sign: 1 };

    pub fn new(character: Character, tate: u32) -> Self {
        Self { character, tate, sign: 1 }
    }
}

/// Field and Gauss tables of `F_{p^r}`, built on first use.
pub struct ExtensionCache {
    p: u64,
    cap: u64,
    options: FieldOptions,
    levels: Vec<Option<(FieldTable, GaussSumTable)>>,
    values: BTreeMap<HKey, BigInt>,
}

type HKey = (Vec<Rational64>, Vec<Rational64>, u64, u32);

impl ExtensionCache {
    pub fn new(p: u64) -> Self {
        Self::with_options(p, FieldOptions::default())
    }

    pub fn with_options(p: u64, options: FieldOptions) -> Self {
        let cap = options.cap.unwrap_or(FIELD_CAP);
        Self { p, cap, options, levels: Vec::new(), values: BTreeMap::new() }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Largest `r` with `p^r` within the field cap.
    pub fn max_r(&self) -> u32 {
        let mut r = 0;
        let mut size = 1u128;
        while size * self.p as u128 <= self.cap as u128 {
            size *= self.p as u128;
            r += 1;
        }
        r
    }

    pub fn level(&mut self, r: u32) -> Result<&(FieldTable, GaussSumTable)> {
        let idx = r as usize;
        if self.levels.len() <= idx {
            self.levels.resize_with(idx + 1, || None);
        }
        if self.levels[idx].is_none() {
            let f = FieldTable::with_options(self.p, r, self.options)?;
            let g = GaussSumTable::new(&f)?;
            self.levels[idx] = Some((f, g));
        }
        Ok(self.levels[idx].as_ref().unwrap())
    }

    /// Drop the tables of `F_{p^r}`.
    pub fn release(&mut self, r: u32) {
        if let Some(slot) = self.levels.get_mut(r as usize) {
            *slot = None;
        }
    }
}

/// `H_{p^r}(α; β | t)` for `t` in the prime field, lifted to `F_{p^r}`.
pub fn hyper_power_sum(
    params: &HypergeometricParameters,
    t: u64,
    r: u32,
    cache: &mut ExtensionCache,
    tol: &Tolerance,
) -> Result<BigInt> {
    let p = cache.p();
    let key = (params.alpha().to_vec(), params.beta().to_vec(), t % p, r);
    if let Some(v) = cache.values.get(&key) {
        return Ok(v.clone());
    }
    let (f, g) = cache.level(r)?;
    // prime-field elements keep their integer encoding in every extension
    let t = (t % p) as u32;
    let v = if field_of_definition(params).is_rational() {
        hyper_sum_bcm(params, t, f, g, tol)?
    } else {
        hyper_sum_classic(params, t, f, g, tol)?
    };
    let v = v
        .exact
        .as_integer()
        .map(BigInt::from)
        .ok_or_else(|| Error::Unsupported(format!("non-rational value {:?} in an L-polynomial", v.exact)))?;
    cache.values.insert(key, v.clone());
    Ok(v)
}

/// How much of an L-polynomial was determined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockStatus {
    /// All coefficients from power sums.
    Complete,
    /// Complete, and the next power sum confirmed the degree.
    PolynomialityChecked,
    /// Only `c_0..=c_through` are known.
    Truncated { through: usize },
    /// `c_0..=c_through` from power sums, the rest from the functional equation.
    Completed { through: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LResult {
    /// The L-polynomial, or its truncation when `status` is `Truncated`.
    pub poly: LPolynomial,
    pub power_sums: Vec<BigInt>,
    pub status: BlockStatus,
}

pub fn l_polynomial(
    params: &HypergeometricParameters,
    t: u64,
    degree: usize,
    cache: &mut ExtensionCache,
    tol: &Tolerance,
) -> Result<LResult> {
    twisted_l_polynomial(params, t, degree, Twist::NONE, cache, tol)
}

pub fn twisted_l_polynomial(
    params: &HypergeometricParameters,
    t: u64,
    degree: usize,
    twist: Twist,
    cache: &mut ExtensionCache,
    tol: &Tolerance,
) -> Result<LResult> {
    let q = cache.p();
    let reach = if degree == 0 { 0 } else { (cache.max_r() as usize).min(degree + 1) };
    let mut s = Vec::with_capacity(reach);
    for r in 1..=reach as u32 {
        let h = hyper_power_sum(params, t, r, cache, tol)?;
        let chi = twist.character.value(q, r)? * (twist.sign as i64).pow(r);
        s.push(h * chi * BigInt::from(q).pow(r * twist.tate));
    }
    let c = newton_coefficients(&s)?;
    let weight = hodge_weight(params) + 2 * twist.tate;
    let name = format!("H({:?}; {:?}) twist {:?}", params.alpha(), params.beta(), twist);
    let status = if reach > degree {
        if !c[degree + 1].is_zero() {
            return Err(Error::Polynomiality(format!("T^{} coefficient {} of {name}", degree + 1, c[degree + 1])));
        }
        BlockStatus::PolynomialityChecked
    } else if reach == degree {
        BlockStatus::Complete
    } else {
        BlockStatus::Truncated { through: reach }
    };
    let kept = IntPoly::new(c[..=reach.min(degree)].to_vec());
    Ok(LResult { poly: LPolynomial::new(kept, q, weight, name), power_sums: s, status })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn newton_round_trip() {
        // (1 − 2T)(1 − 3T)(1 + 5T)
        let p = IntPoly::from_i64s(&[1, -2]) * IntPoly::from_i64s(&[1, -3]) * IntPoly::from_i64s(&[1, 5]);
        let s = power_sums(p.coeffs(), 4);
        assert_eq!(s, big(&[0, 38, -90, 722]));
        let c = newton_coefficients(&s).unwrap();
        assert_eq!(IntPoly::new(c), p);
        assert!(newton_coefficients(&big(&[1, 0])).is_err());
        assert_eq!(newton_coefficients(&[]).unwrap(), big(&[1]));
    }

    #[test]
    fn characters() {
        assert_eq!(Character::MinusOne.value(281, 1).unwrap(), 1);
        assert_eq!(Character::MinusOne.value(43, 1).unwrap(), -1);
        assert_eq!(Character::MinusOne.value(43, 2).unwrap(), 1);
        assert_eq!(Character::SqrtMinusOne.value(281, 1).unwrap(), 1);
        assert_eq!(Character::SqrtMinusOne.value(13, 1).unwrap(), -1);
        assert_eq!(Character::SqrtMinusOne.value(13, 2).unwrap(), 1);
        assert!(Character::SqrtMinusOne.value(43, 1).is_err());
        assert_eq!(Character::Psi(3).value(281, 1).unwrap(), -1);
        assert_eq!(Character::SqrtMinusOnePsi(3).value(281, 2).unwrap(), 1);
        assert_eq!(Character::Trivial.value(7, 3).unwrap(), 1);
    }

    #[test]
    fn cache_reach() {
        assert_eq!(ExtensionCache::new(281).max_r(), 3);
        assert_eq!(ExtensionCache::new(41).max_r(), 4);
        let mut c = ExtensionCache::new(5);
        assert_eq!(c.level(2).unwrap().0.q(), 25);
    }

    #[test]
    fn degree_zero_is_one() {
        let h = HypergeometricParameters::from_pairs(&[(1, 2)], &[(0, 1)]).unwrap();
        let mut c = ExtensionCache::with_options(13, FieldOptions { cap: Some(13), ..Default::default() });
        let l = l_polynomial(&h, 2, 0, &mut c, &Tolerance::default()).unwrap();
        assert_eq!(l.poly.poly, IntPoly::one());
    }
}
