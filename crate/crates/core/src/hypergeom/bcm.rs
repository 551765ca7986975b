use super::{field_of_definition, HypergeometricParameters};
use crate::arith::{divisors, euler_phi, moebius};
use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Integers `p_j`, `q_j` with
/// `Π (x^{p_j} − 1) / Π (x^{q_j} − 1) = Π (x − e^{2πiα_j}) / Π (x − e^{2πiβ_j})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcmData {
    pub p_list: Vec<u64>,
    pub q_list: Vec<u64>,
    /// `Π p_j^{p_j} / Π q_j^{q_j}`.
    pub m: BigRational,
    /// `(−1)^{Σ q_j}`.
    pub epsilon: i8,
    /// Exponent of `Φ_n` in `D(x) = gcd(Π (x^{p_j} − 1), Π (x^{q_j} − 1))`.
    pub(crate) d_exponents: BTreeMap<u64, u32>,
}

impl BcmData {
    /// Multiplicity of `e^{2πi m / N}` as a root of `D(x)`.
    pub fn s(&self, m: u64, n: u64) -> u32 {
        let order = n / crate::arith::gcd(m % n, n);
        self.d_exponents.get(&order).copied().unwrap_or(0)
    }

    pub fn d_polynomial(&self) -> IntPoly {
        self.d_exponents.iter().fold(IntPoly::one(), |acc, (&k, &e)| &acc * &IntPoly::cyclotomic(k as usize).pow(e))
    }

    /// Check the defining rational-function identity by cross-multiplying in `Z[x]`.
    pub fn verify_identity(&self, params: &HypergeometricParameters) -> bool {
        let (a, b) = cyclotomic_exponents(params);
        let side = |e: &BTreeMap<u64, i64>| {
            e.iter().fold(IntPoly::one(), |acc, (&k, &m)| &acc * &IntPoly::cyclotomic(k as usize).pow(m as u32))
        };
        let prod = |v: &[u64]| v.iter().fold(IntPoly::one(), |acc, &k| &acc * &IntPoly::x_pow_minus_one(k as usize));
        &prod(&self.p_list) * &side(&b) == &prod(&self.q_list) * &side(&a)
    }
}

// exponent of Φ_n in Π (x − e^{2πiα}) and in Π (x − e^{2πiβ})
fn cyclotomic_exponents(params: &HypergeometricParameters) -> (BTreeMap<u64, i64>, BTreeMap<u64, i64>) {
    let count = |v: &[num_rational::Rational64]| {
        let mut m: BTreeMap<u64, i64> = BTreeMap::new();
        for x in v {
            *m.entry(*x.denom() as u64).or_default() += 1;
        }
        for (n, c) in m.iter_mut() {
            *c /= euler_phi(*n) as i64;
        }
        m
    };
    (count(params.alpha()), count(params.beta()))
}

pub fn bcm_data(params: &HypergeometricParameters) -> Result<BcmData> {
    if !field_of_definition(params).is_rational() {
        return Err(Error::NotDefinedOverQ);
    }
    let (a, b) = cyclotomic_exponents(params);
    let top = a.keys().chain(b.keys()).copied().max().unwrap_or(1);
    let e = |n: u64| a.get(&n).copied().unwrap_or(0) - b.get(&n).copied().unwrap_or(0);
    // x^m − 1 = Π_{n|m} Φ_n, so e_n = Σ_{n|m} γ_m; invert over multiples
    let mut p_list = Vec::new();
    let mut q_list = Vec::new();
    for m in 1..=top {
        let gamma: i64 = (1..=top / m).map(|k| moebius(k) * e(m * k)).sum();
        for _ in 0..gamma.max(0) {
            p_list.push(m);
        }
        for _ in 0..(-gamma).max(0) {
            q_list.push(m);
        }
    }
    let mut mm = BigRational::one();
    for &p in &p_list {
        mm *= BigRational::from_integer(BigInt::from(p).pow(p as u32));
    }
    for &q in &q_list {
        mm /= BigRational::from_integer(BigInt::from(q).pow(q as u32));
    }
    let epsilon = if q_list.iter().sum::<u64>() % 2 == 0 { 1 } else { -1 };
    let mult = |v: &[u64], n: u64| v.iter().filter(|&&k| k % n == 0).count() as u32;
    let mut d_exponents = BTreeMap::new();
    let all: alloc::collections::BTreeSet<u64> = p_list.iter().chain(&q_list).flat_map(|&k| divisors(k)).collect();
    for n in all {
        let s = mult(&p_list, n).min(mult(&q_list, n));
        if s > 0 {
            d_exponents.insert(n, s);
        }
    }
    let data = BcmData { p_list, q_list, m: mm, epsilon, d_exponents };
    if !data.verify_identity(params) {
        return Err(Error::Parameters(format!("cyclotomic resolution failed for {params:?}")));
    }
    if data.m.is_zero() {
        return Err(Error::Parameters("degenerate BCM data".into()));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn params(a: &[(i64, i64)], b: &[(i64, i64)]) -> HypergeometricParameters {
        HypergeometricParameters::from_pairs(a, b).unwrap()
    }

    #[test]
    fn half_over_zero() {
        // (x + 1) / (x − 1) = (x² − 1) / (x − 1)²
        let d = bcm_data(&params(&[(1, 2)], &[(0, 1)])).unwrap();
        assert_eq!(d.p_list, [2]);
        assert_eq!(d.q_list, [1, 1]);
        assert_eq!(d.m, BigRational::from_integer(4.into()));
        assert_eq!(d.epsilon, 1);
        assert_eq!(d.d_polynomial(), IntPoly::from_i64s(&[-1, 1]));
    }

    #[test]
    fn quartic_block() {
        let p = params(&[(1, 4), (1, 2), (3, 4)], &[(0, 1), (0, 1), (0, 1)]);
        let d = bcm_data(&p).unwrap();
        assert_eq!(d.p_list, [4]);
        assert_eq!(d.q_list, [1, 1, 1, 1]);
        assert_eq!(d.m, BigRational::from_integer(256.into()));
        assert_eq!(d.epsilon, 1);
        assert_eq!(d.d_polynomial(), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(d.s(0, 280), 1);
        assert_eq!(d.s(140, 280), 0);
        assert!(d.verify_identity(&p));
    }

    #[test]
    fn other_blocks() {
        let d = bcm_data(&params(&[(1, 4), (3, 4)], &[(0, 1), (1, 2)])).unwrap();
        assert_eq!((d.p_list.clone(), d.q_list.clone()), (vec![4], vec![2, 2]));
        assert_eq!(d.m, BigRational::from_integer(16.into()));
        assert_eq!(d.d_polynomial(), IntPoly::x_pow_minus_one(2));
        assert_eq!((d.s(0, 40), d.s(20, 40), d.s(10, 40)), (1, 1, 0));
        let d = bcm_data(&params(&[(1, 8), (3, 8), (5, 8), (7, 8)], &[(0, 1), (1, 4), (1, 2), (3, 4)])).unwrap();
        assert_eq!((d.p_list.clone(), d.q_list.clone()), (vec![8], vec![4, 4]));
        assert_eq!(d.m, BigRational::from_integer(256.into()));
        assert_eq!(d.epsilon, 1);
        let d = bcm_data(&params(&[(1, 3), (2, 3)], &[(0, 1), (1, 2)])).unwrap();
        assert!(d.verify_identity(&params(&[(1, 3), (2, 3)], &[(0, 1), (1, 2)])));
        assert_eq!((d.p_list.clone(), d.q_list.clone()), (vec![3], vec![1, 2]));
    }

    #[test]
    fn rejects_non_rational() {
        assert_eq!(bcm_data(&params(&[(1, 4)], &[(0, 1)])).unwrap_err(), Error::NotDefinedOverQ);
    }
}
