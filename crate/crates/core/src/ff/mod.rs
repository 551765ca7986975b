//! Finite fields `F_{p^r}` realised as lookup tables.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{r-1} p^{r-1}` where
//! `c_0 + c_1 x + ...` is the reduced polynomial representative modulo the
//! field's defining polynomial. The prime subfield is therefore `0..p`.

mod gauss;
mod poly_fp;

pub use gauss::{additive_character, mult_character_power, GaussSumTable, DIRECT_GAUSS_LIMIT};

use crate::arith::{factorize, is_prime};
use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
use poly_fp::FpPoly;

/// Largest field size for which tables are built (covers `281^3`).
pub const FIELD_CAP: u64 = 25_000_000;

/// A prime power `q = p^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    pub p: u64,
    pub r: u32,
    pub q: u64,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::ZeroExponent);
        }
        let q = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
        if q > u64::MAX as u128 {
            return Err(Error::FieldCap { size: q, cap: FIELD_CAP });
        }
        Ok(Self { p, r, q: q as u64 })
    }

    /// Parse a decomposition of an integer that should be a prime power.
    pub fn from_q(q: u64) -> Result<Self> {
        match crate::arith::prime_power_decompose(q) {
            Some((p, r)) => Self::new(p, r),
            None => Err(Error::NotPrime(q)),
        }
    }

    /// `q^k` as a prime power.
    pub fn pow(&self, k: u32) -> Result<Self> {
        Self::new(self.p, self.r * k)
    }
}

impl core::fmt::Display for PrimePower {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.r == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.r)
        }
    }
}

/// Which defining polynomial and generator to use.
///
/// Rank 0 selects the smallest candidate in integer-encoding order; other
/// ranks give alternate, still deterministic, realisations of the same field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FieldOptions {
    pub modulus_rank: usize,
    pub generator_rank: usize,
    /// Override for [`FIELD_CAP`]; `None` keeps the default.
    pub cap: Option<u64>,
}

/// A realised finite field with discrete-log, exponential and trace tables.
#[derive(Clone)]
pub struct FieldTable {
    prime_power: PrimePower,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
}

impl core::fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FieldTable")
            .field("q", &self.prime_power)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldTable {
    fn eq(&self, other: &Self) -> bool {
        self.prime_power == other.prime_power
            && self.modulus == other.modulus
            && self.generator == other.generator
            && self.exp == other.exp
            && self.trace == other.trace
    }
}

impl FieldTable {
    /// Build the canonical table for `F_{p^r}`.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::with_options(p, r, FieldOptions::default())
    }

    pub fn with_options(p: u64, r: u32, opts: FieldOptions) -> Result<Self> {
        let pp = PrimePower::new(p, r)?;
        let cap = opts.cap.unwrap_or(FIELD_CAP);
        if pp.q > cap {
            return Err(Error::FieldCap { size: pp.q as u128, cap });
        }
        let modulus = nth_irreducible(p, r as usize, opts.modulus_rank);
        let gen_poly = nth_primitive(p, &modulus, pp.q, opts.generator_rank);
        let generator = gen_poly.encode(p) as u32;

        let n = (pp.q - 1) as usize;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![u32::MAX; pp.q as usize];
        if r == 1 {
            let g = generator as u64;
            let mut x = 1u64;
            for j in 0..n {
                exp.push(x as u32);
                log[x as usize] = j as u32;
                x = x * g % p;
            }
        } else {
            let mut x = FpPoly::one(r as usize);
            for j in 0..n {
                let e = x.encode(p) as u32;
                exp.push(e);
                log[e as usize] = j as u32;
                x = x.mul_mod(&gen_poly, &modulus, p);
            }
        }

        // trace is F_p-linear: tr(sum c_i x^i) = sum c_i tr(x^i)
        let basis_trace: Vec<u64> = (0..r as usize)
            .map(|i| {
                let mut xi = FpPoly::zero(r as usize);
                xi.0[i] = 1;
                poly_fp::trace_of(&xi, &modulus, p, r)
            })
            .collect();
        let trace = (0..pp.q)
            .map(|mut k| {
                let mut t = 0u64;
                for &bt in &basis_trace {
                    t += (k % p) * bt;
                    k /= p;
                }
                (t % p) as u32
            })
            .collect();

        Ok(Self { prime_power: pp, modulus, generator, exp, log, trace })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.prime_power
    }
    pub fn p(&self) -> u64 {
        self.prime_power.p
    }
    pub fn q(&self) -> u64 {
        self.prime_power.q
    }
    /// `q - 1`, the order of the multiplicative group.
    pub fn q_times(&self) -> u64 {
        self.prime_power.q - 1
    }
    /// Coefficients of the monic defining polynomial, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn generator(&self) -> u32 {
        self.generator
    }
    pub fn exp_table(&self) -> &[u32] {
        &self.exp
    }

    #[inline]
    pub fn exp(&self, j: u64) -> u32 {
        self.exp[(j % self.q_times()) as usize]
    }

    /// Discrete logarithm with respect to the fixed generator.
    #[inline]
    pub fn log(&self, x: u32) -> Result<u32> {
        if x == 0 {
            Err(Error::ZeroLog)
        } else {
            Ok(self.log[x as usize])
        }
    }

    /// Logarithm of a nonzero element; the value at zero is meaningless.
    #[inline]
    pub fn log_unchecked(&self, x: u32) -> u32 {
        self.log[x as usize]
    }

    /// Absolute trace to `F_p`.
    #[inline]
    pub fn trace(&self, x: u32) -> u32 {
        self.trace[x as usize]
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, a: i64) -> u32 {
        a.rem_euclid(self.p() as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let p = self.p() as u32;
        if self.prime_power.r == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.prime_power.r {
                let d = (a % p + b % p) % p;
                out += d * place;
                a /= p;
                b /= p;
                place = place.wrapping_mul(p);
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let p = self.p() as u32;
        if self.prime_power.r == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            let mut a = a;
            let mut out = 0u32;
            let mut place = 1u32;
            for _ in 0..self.prime_power.r {
                let d = (p - a % p) % p;
                out += d * place;
                a /= p;
                place = place.wrapping_mul(p);
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.prime_power.r == 1 {
            return ((a as u64 * b as u64) % self.p()) as u32;
        }
        let n = self.q_times();
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        let l = self.log(a)? as u64;
        Ok(self.exp((self.q_times() - l) % self.q_times()))
    }

    /// `a^e` for any integer exponent; `0^0 = 1`, negative powers of zero error.
    pub fn pow(&self, a: u32, e: i64) -> Result<u32> {
        if a == 0 {
            return match e.cmp(&0) {
                core::cmp::Ordering::Equal => Ok(1),
                core::cmp::Ordering::Greater => Ok(0),
                core::cmp::Ordering::Less => Err(Error::ZeroLog),
            };
        }
        let n = self.q_times() as i128;
        let l = self.log[a as usize] as i128;
        Ok(self.exp((l * e as i128).rem_euclid(n) as u64))
    }

    /// Power with a nonnegative exponent, infallible.
    #[inline]
    pub fn pow_u(&self, a: u32, e: u32) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = self.q_times();
        let l = self.log[a as usize] as u64;
        self.exp[((l * e as u64) % n) as usize]
    }

    /// Quadratic character of `F_q` as -1, 0, 1 (`q` odd).
    pub fn quadratic_character(&self, a: u32) -> i32 {
        if a == 0 {
            0
        } else if self.log[a as usize] % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Iterator over all field elements in encoding order.
    pub fn elements(&self) -> core::ops::Range<u32> {
        0..self.q() as u32
    }

    /// Coordinates of an element in the polynomial basis.
    pub fn digits(&self, mut x: u32) -> Vec<u64> {
        let p = self.p() as u32;
        (0..self.prime_power.r)
            .map(|_| {
                let d = x % p;
                x /= p;
                d as u64
            })
            .collect()
    }
}

/// Rabin irreducibility test over `F_p`, scanning monic polynomials of degree
/// `r` in increasing integer order of their low coefficients.
fn nth_irreducible(p: u64, r: usize, rank: usize) -> Vec<u64> {
    let count = p.pow(r as u32);
    let mut seen = 0;
    for k in 0..count {
        let mut coeffs = Vec::with_capacity(r + 1);
        let mut t = k;
        for _ in 0..r {
            coeffs.push(t % p);
            t /= p;
        }
        coeffs.push(1);
        if poly_fp::is_irreducible(&coeffs, p) {
            if seen == rank {
                return coeffs;
            }
            seen += 1;
        }
    }
    panic!("fewer than {} irreducible polynomials of degree {r} over F_{p}", rank + 1)
}

fn nth_primitive(p: u64, modulus: &[u64], q: u64, rank: usize) -> FpPoly {
    let r = modulus.len() - 1;
    let primes: Vec<u64> = factorize(q - 1).into_iter().map(|(l, _)| l).collect();
    let one = FpPoly::one(r);
    let mut seen = 0;
    for k in 1..q {
        let g = FpPoly::decode(k, p, r);
        if primes.iter().all(|&l| g.pow_mod((q - 1) / l, modulus, p) != one) {
            if seen == rank {
                return g;
            }
            seen += 1;
        }
    }
    panic!("fewer than {} primitive elements", rank + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f73_generator_is_smallest_primitive_root() {
        let f = FieldTable::new(73, 1).unwrap();
        assert_eq!(f.generator(), 5);
        assert_eq!(f.q(), 73);
    }

    #[test]
    fn f2_is_generated_by_one() {
        let f = FieldTable::new(2, 1).unwrap();
        assert_eq!(f.generator(), 1);
        assert_eq!(f.exp_table(), &[1]);
    }

    #[test]
    fn f9_uses_x2_plus_1() {
        // monic quadratics over F_3 in scan order: x^2 (reducible), x^2 + 1 (no roots)
        let f = FieldTable::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let g = f.generator();
        let order = (1..=8).find(|&k| f.pow_u(g, k) == 1).unwrap();
        assert_eq!(order, 8);
        // x itself has order 4 in F_3[x]/(x^2+1); 1 + x is the smallest primitive element
        assert_eq!(g, 1 + 3);
    }

    #[test]
    fn tables_are_inverse() {
        for (p, r) in [(2, 3), (5, 2), (7, 1), (3, 3)] {
            let f = FieldTable::new(p, r).unwrap();
            for x in 1..f.q() as u32 {
                assert_eq!(f.exp(f.log(x).unwrap() as u64), x);
            }
        }
    }

    #[test]
    fn trace_matches_power_sum() {
        let f = FieldTable::new(3, 2).unwrap();
        for x in f.elements() {
            // x + x^p computed with field arithmetic
            let direct = f.add(x, f.pow_u(x, 3));
            assert!(direct < 3, "trace must land in F_p");
            assert_eq!(f.trace(x), direct);
        }
        let f = FieldTable::new(5, 1).unwrap();
        assert_eq!(f.trace(0), 0);
        let f73 = FieldTable::new(73, 1).unwrap();
        assert_eq!(f73.trace(5), 5);
    }

    #[test]
    fn trace_is_linear_and_surjective() {
        let f = FieldTable::new(2, 4).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.trace(f.add(a, b)), (f.trace(a) + f.trace(b)) % 2);
            }
        }
        assert!(f.elements().any(|x| f.trace(x) != 0));
    }

    #[test]
    fn arithmetic_is_a_field() {
        let f = FieldTable::new(5, 2).unwrap();
        for a in f.elements() {
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
            for b in f.elements().step_by(3) {
                for c in f.elements().step_by(7) {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn deterministic_and_alternate_builds() {
        let a = FieldTable::new(7, 2).unwrap();
        let b = FieldTable::new(7, 2).unwrap();
        assert_eq!(a, b);
        let alt =
            FieldTable::with_options(7, 2, FieldOptions { modulus_rank: 1, generator_rank: 1, cap: None }).unwrap();
        assert_ne!(a.modulus(), alt.modulus());
        assert_ne!(a, alt);
    }

    #[test]
    fn errors() {
        assert_eq!(FieldTable::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(FieldTable::new(281, 4), Err(Error::FieldCap { .. })));
        assert_eq!(PrimePower::new(5, 0).unwrap_err(), Error::ZeroExponent);
        let f = FieldTable::new(5, 1).unwrap();
        assert_eq!(f.log(0), Err(Error::ZeroLog));
    }
}
