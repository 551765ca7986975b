//! Hypergeometric parameters, truncated series mod p, and finite-field
//! hypergeometric sums.

mod bcm;
mod sums;

pub use bcm::{bcm_data, BcmData};
pub use sums::{hyper_sum_bcm, hyper_sum_classic, ExactValue, HyperSumValue, Tolerance};

use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Zero};

/// Multisets `α`, `β` of equal size, reduced into `[0, 1)` and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypergeometricParameters {
    alpha: Vec<Rational64>,
    beta: Vec<Rational64>,
}

fn frac_part(x: Rational64) -> Rational64 {
    x - x.floor()
}

impl HypergeometricParameters {
    pub fn new(alpha: Vec<Rational64>, beta: Vec<Rational64>) -> Result<Self> {
        if alpha.len() != beta.len() || alpha.is_empty() {
            return Err(Error::Parameters(format!("|alpha| = {} but |beta| = {}", alpha.len(), beta.len())));
        }
        let mut alpha: Vec<_> = alpha.into_iter().map(frac_part).collect();
        let mut beta: Vec<_> = beta.into_iter().map(frac_part).collect();
        alpha.sort();
        beta.sort();
        if let Some(a) = alpha.iter().find(|a| beta.contains(a)) {
            return Err(Error::Parameters(format!("{a} lies in both alpha and beta")));
        }
        Ok(Self { alpha, beta })
    }

    /// Shorthand from `(numerator, denominator)` pairs.
    pub fn from_pairs(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> Result<Self> {
        let f = |v: &[(i64, i64)]| v.iter().map(|&(a, b)| Rational64::new(a, b)).collect();
        Self::new(f(alpha), f(beta))
    }

    pub fn alpha(&self) -> &[Rational64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Rational64] {
        &self.beta
    }

    pub fn degree(&self) -> usize {
        self.alpha.len()
    }

    /// Least common multiple of all denominators.
    pub fn denominator_lcm(&self) -> u64 {
        self.alpha.iter().chain(&self.beta).fold(1i64, |acc, x| acc.lcm(x.denom())) as u64
    }
}

/// `(x)_k` as an exact rational.
pub fn rising_factorial(x: Rational64, k: u32) -> Rational64 {
    (0..k).fold(Rational64::one(), |acc, i| acc * (x + i as i64))
}

fn rational_mod_p(x: Rational64, p: u64) -> Result<u64> {
    let den = x.denom().rem_euclid(p as i64) as u64;
    let inv = inv_mod(den, p).ok_or(Error::ModularZeroDivision(p))?;
    Ok(mul_mod(x.numer().rem_euclid(p as i64) as u64, inv, p))
}

/// `Σ_{k=0}^{cutoff} Π(α_i)_k / Π(β_j)_k · z^k mod p`.
///
/// A `β` entry of `0` stands for `1`, so `β = {0, …, 0}` supplies the `k!`
/// divisors of the classical `F(α; 1, …, 1 | z)` normalization.
pub fn truncated_series(params: &HypergeometricParameters, z: u64, p: u64, cutoff: u64) -> Result<u64> {
    if cutoff >= p {
        return Err(Error::Parameters(format!("cutoff {cutoff} must be below p = {p}")));
    }
    if params.denominator_lcm() % p == 0 {
        return Err(Error::ModularZeroDivision(p));
    }
    let lift = |b: &Rational64| if b.is_zero() { Rational64::one() } else { *b };
    let alpha: Vec<u64> = params.alpha.iter().map(|&a| rational_mod_p(a, p)).collect::<Result<_>>()?;
    let beta: Vec<u64> = params.beta.iter().map(|b| rational_mod_p(lift(b), p)).collect::<Result<_>>()?;
    let z = z % p;
    let mut term = 1u64;
    let mut sum = 1u64;
    for k in 0..cutoff {
        let mut num = z;
        let mut den = 1u64;
        for a in &alpha {
            num = mul_mod(num, (a + k) % p, p);
        }
        for b in &beta {
            den = mul_mod(den, (b + k) % p, p);
        }
        if num == 0 {
            break;
        }
        let inv = inv_mod(den, p).ok_or(Error::ModularZeroDivision(p))?;
        term = mul_mod(mul_mod(term, num, p), inv, p);
        sum = (sum + term) % p;
    }
    Ok(sum)
}

/// Which field the pair `(α, β)` is defined over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldOfDefinition {
    Rationals,
    GaussianRationals,
    /// Fixed field of a subgroup of `(Z/N)^×` of the given index.
    Other {
        conductor: u64,
        degree: u64,
    },
}

impl FieldOfDefinition {
    pub fn is_rational(&self) -> bool {
        *self == Self::Rationals
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Rationals => "Q".into(),
            Self::GaussianRationals => "Q(i)".into(),
            Self::Other { conductor, degree } => format!("degree-{degree} subfield of Q(zeta_{conductor})"),
        }
    }
}

fn scaled_multiset(v: &[Rational64], k: i64) -> Vec<Rational64> {
    let mut out: Vec<_> = v.iter().map(|&x| frac_part(x * k)).collect();
    out.sort();
    out
}

/// Units `k mod N` fixing both multisets under `x ↦ kx`.
pub fn galois_stabilizer(params: &HypergeometricParameters) -> Vec<u64> {
    let n = params.denominator_lcm();
    (1..=n.max(1))
        .filter(|&k| n == 1 || (k < n && k.gcd(&n) == 1))
        .filter(|&k| {
            scaled_multiset(&params.alpha, k as i64) == params.alpha
                && scaled_multiset(&params.beta, k as i64) == params.beta
        })
        .collect()
}

pub fn field_of_definition(params: &HypergeometricParameters) -> FieldOfDefinition {
    let n = params.denominator_lcm();
    let stab = galois_stabilizer(params);
    let group = crate::arith::euler_phi(n);
    let index = group / stab.len() as u64;
    if index == 1 {
        return FieldOfDefinition::Rationals;
    }
    // Q(i) is the fixed field of {k ≡ 1 mod 4}
    if n % 4 == 0 && index == 2 && stab.iter().all(|k| k % 4 == 1) {
        return FieldOfDefinition::GaussianRationals;
    }
    FieldOfDefinition::Other { conductor: n, degree: index }
}

/// `gcd(q, N) = 1` for the common denominator `N`.
pub fn is_good(q: u64, params: &HypergeometricParameters) -> bool {
    q.gcd(&params.denominator_lcm()) == 1
}

/// A partition `α = α₀ ⊔ α′`, `β = β₀ ⊔ β′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Splitting {
    pub alpha0: Vec<Rational64>,
    pub alpha1: Vec<Rational64>,
    pub beta0: Vec<Rational64>,
    pub beta1: Vec<Rational64>,
}

/// Largest sub-multiset that is a union of full Galois orbits.
pub fn galois_closed_part(v: &[Rational64]) -> (Vec<Rational64>, Vec<Rational64>) {
    let mut counts: BTreeMap<Rational64, usize> = BTreeMap::new();
    for &x in v {
        *counts.entry(x).or_default() += 1;
    }
    let mut closed = Vec::new();
    let dens: alloc::collections::BTreeSet<i64> = v.iter().map(|x| *x.denom()).collect();
    for n in dens {
        let orbit: Vec<Rational64> = (0..n).filter(|a| a.gcd(&n) == 1).map(|a| Rational64::new(a, n)).collect();
        let mult = orbit.iter().map(|x| counts.get(x).copied().unwrap_or(0)).min().unwrap_or(0);
        if mult == 0 {
            continue;
        }
        for x in &orbit {
            for _ in 0..mult {
                closed.push(*x);
            }
            *counts.get_mut(x).unwrap() -= mult;
        }
    }
    let mut rest = Vec::new();
    for (x, c) in counts.into_iter().filter(|&(_, c)| c > 0) {
        for _ in 0..c {
            rest.push(x);
        }
    }
    closed.sort();
    (closed, rest)
}

/// A splitting with `α₀, β₀` defined over `Q` and `(q−1)α′, (q−1)β′` integral.
pub fn is_splittable(q: u64, params: &HypergeometricParameters) -> Option<Splitting> {
    let (alpha0, alpha1) = galois_closed_part(&params.alpha);
    let (beta0, beta1) = galois_closed_part(&params.beta);
    let integral = |v: &[Rational64]| v.iter().all(|x| (q - 1) % (*x.denom() as u64) == 0);
    (integral(&alpha1) && integral(&beta1)).then_some(Splitting { alpha0, alpha1, beta0, beta1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn params(a: &[(i64, i64)], b: &[(i64, i64)]) -> HypergeometricParameters {
        HypergeometricParameters::from_pairs(a, b).unwrap()
    }

    #[test]
    fn construction() {
        let p = params(&[(3, 4), (1, 4), (5, 2)], &[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(p.alpha(), &[Rational64::new(1, 4), Rational64::new(1, 2), Rational64::new(3, 4)]);
        assert_eq!(p.denominator_lcm(), 4);
        assert!(HypergeometricParameters::from_pairs(&[(1, 2)], &[(3, 2)]).is_err());
        assert!(HypergeometricParameters::from_pairs(&[(1, 2)], &[]).is_err());
    }

    #[test]
    fn rising() {
        assert_eq!(rising_factorial(Rational64::new(1, 2), 2), Rational64::new(3, 4));
        assert_eq!(rising_factorial(Rational64::new(1, 1), 4), Rational64::new(24, 1));
    }

    #[test]
    fn series_constant_term() {
        let p = params(&[(1, 2), (1, 2)], &[(0, 1), (0, 1)]);
        assert_eq!(truncated_series(&p, 0, 13, 6).unwrap(), 1);
    }

    #[test]
    fn series_matches_legendre_traces() {
        let p = params(&[(1, 2), (1, 2)], &[(0, 1), (0, 1)]);
        for prime in [5u64, 7, 11, 13, 17, 19, 23] {
            let m = (prime - 1) / 2;
            for psi in 2..prime {
                let s = truncated_series(&p, psi, prime, m).unwrap();
                let s = if m % 2 == 1 { (prime - s) % prime } else { s };
                let a = crate::counting::legendre_trace(psi, prime).unwrap();
                assert_eq!(s as i64, a.rem_euclid(prime as i64));
            }
        }
    }

    #[test]
    fn series_zero_division() {
        let p = params(&[(1, 2)], &[(1, 3)]);
        assert_eq!(truncated_series(&p, 1, 3, 2).unwrap_err(), Error::ModularZeroDivision(3));
        // (2/5 + 1) ≡ 0 mod 7 in the denominator at k = 1
        let p = params(&[(1, 2)], &[(2, 5)]);
        assert_eq!(truncated_series(&p, 1, 7, 3).unwrap_err(), Error::ModularZeroDivision(7));
    }

    #[test]
    fn fields_of_definition() {
        assert!(field_of_definition(&params(&[(1, 4), (1, 2), (3, 4)], &[(0, 1), (0, 1), (0, 1)])).is_rational());
        assert!(!field_of_definition(&params(&[(1, 14), (9, 14), (11, 14)], &[(0, 1), (1, 4), (3, 4)])).is_rational());
        assert!(field_of_definition(&params(&[(1, 3), (2, 3)], &[(0, 1), (0, 1)])).is_rational());
        assert_eq!(field_of_definition(&params(&[(1, 4)], &[(0, 1)])), FieldOfDefinition::GaussianRationals);
        assert_eq!(
            field_of_definition(&params(&[(1, 14), (9, 14), (11, 14)], &[(0, 1), (1, 4), (3, 4)])),
            FieldOfDefinition::Other { conductor: 28, degree: 2 }
        );
    }

    #[test]
    fn goodness() {
        let p = params(&[(1, 4), (1, 2), (3, 4)], &[(0, 1), (0, 1), (0, 1)]);
        assert!(is_good(281, &p));
        assert!(!is_good(2, &p));
        assert!(!is_good(7, &params(&[(1, 14)], &[(0, 1)])));
    }

    // every pair of sub-multisets, checked against the definition
    fn exhaustive_split(q: u64, p: &HypergeometricParameters) -> bool {
        let subsets = |v: &[Rational64]| -> Vec<(Vec<Rational64>, Vec<Rational64>)> {
            (0u32..1 << v.len())
                .map(|mask| {
                    let (a, b): (Vec<_>, Vec<_>) = v.iter().enumerate().partition(|(i, _)| mask >> i & 1 == 1);
                    (a.into_iter().map(|x| *x.1).collect(), b.into_iter().map(|x| *x.1).collect())
                })
                .collect()
        };
        let stable = |v: &[Rational64]| {
            let n = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
            let mut s = v.to_vec();
            s.sort();
            (1..n.max(2)).filter(|k| k.gcd(&n) == 1).all(|k| scaled_multiset(v, k) == s)
        };
        let integral = |v: &[Rational64]| v.iter().all(|x| (q - 1) % (*x.denom() as u64) == 0);
        subsets(p.alpha()).iter().any(|(a0, a1)| {
            stable(a0) && integral(a1) && subsets(p.beta()).iter().any(|(b0, b1)| stable(b0) && integral(b1))
        })
    }

    #[test]
    fn splittability() {
        let p = params(&[(1, 14), (9, 14), (11, 14)], &[(0, 1), (1, 4), (3, 4)]);
        let s = is_splittable(29, &p).unwrap();
        assert!(s.alpha0.is_empty());
        assert_eq!(s.beta0, p.beta());
        assert!(is_splittable(17, &p).is_none());
        let q = params(&[(1, 4), (1, 2), (3, 4)], &[(0, 1), (0, 1), (0, 1)]);
        let s = is_splittable(281, &q).unwrap();
        assert!(s.alpha1.is_empty() && s.beta1.is_empty());
        let cases = [
            p.clone(),
            q,
            params(&[(1, 8), (3, 8), (1, 2)], &[(0, 1), (1, 3), (2, 3)]),
            params(&[(1, 5), (2, 5), (3, 5), (4, 5)], &[(0, 1), (0, 1), (1, 2), (1, 6)]),
        ];
        for c in &cases {
            for q in [3u64, 5, 7, 9, 11, 13, 17, 25, 29, 31, 41, 43, 71, 73] {
                assert_eq!(is_splittable(q, c).is_some(), exhaustive_split(q, c), "q={q} {c:?}");
            }
        }
    }
}
