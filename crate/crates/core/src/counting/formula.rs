use crate::arith::{inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};
use crate::invertible::{xi_set, ExponentMatrix};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// `ν(A) mod p` from the age-one set:
/// `(−1)^n Σ_ξ (p−1)! / Π_i ((p−1)ξ_i)!`.
///
/// Needs `|det A|` to divide `p − 1`. Candidates with a coordinate outside
/// `[0, 1]` have no factorial and are left out of the sum.
pub fn affine_count_mod_p(a: &ExponentMatrix, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let det = a.abs_det();
    if (p - 1) % det != 0 {
        return Err(Error::DetDoesNotDivide { det, p_minus_one: p - 1 });
    }
    affine_count_mod_p_integral(a, p)
}

/// The same sum under the weaker requirement that every `(p−1)ξ_i` is an integer.
pub fn affine_count_mod_p_integral(a: &ExponentMatrix, p: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut fact = alloc::vec![1u64; p as usize];
    for k in 1..p as usize {
        fact[k] = mul_mod(fact[k - 1], k as u64 % p, p);
    }
    let pm1 = BigInt::from(p - 1);
    let mut sum = 0u64;
    for (_, xi) in xi_set(a)?.elements {
        let mut term = fact[(p - 1) as usize];
        for c in &xi {
            let scaled = c * &pm1;
            if !scaled.is_integer() {
                return Err(Error::Divisibility { q_minus_one: p - 1, denominator: c.denom().to_u64().unwrap_or(0) });
            }
            let k = scaled.to_integer().to_u64().expect("0 <= (p-1)ξ <= p-1");
            term = mul_mod(term, inv_mod(fact[k as usize], p).expect("k < p"), p);
        }
        sum = (sum + term) % p;
    }
    let n = a.dim() - 1;
    Ok(if n % 2 == 1 { (p - sum) % p } else { sum })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_affine_bruteforce, CountOptions, PencilSpec};
    use crate::ff::FieldTable;
    use crate::invertible::fixtures::*;
    use crate::invertible::ExponentMatrix;

    #[test]
    fn examples() {
        assert_eq!(affine_count_mod_p(&chain_cubic(), 73).unwrap(), 67);
        assert_eq!(5761 % 73, 67);
        assert_eq!(affine_count_mod_p(&chain_quintic(), 251).unwrap(), 6);
    }

    #[test]
    fn fermat_cone_mod_5() {
        assert_eq!(affine_count_mod_p_integral(&f4(), 5).unwrap(), 1);
        assert!(matches!(affine_count_mod_p(&f4(), 5), Err(Error::DetDoesNotDivide { .. })));
        let f = FieldTable::new(5, 1).unwrap();
        let brute = count_affine_bruteforce(&PencilSpec::new(f4()), &f, &CountOptions::default()).unwrap().count;
        assert_eq!(brute % 5, 1);
    }

    #[test]
    fn integral_form_on_fermat_cones() {
        let opts = CountOptions::default();
        for (m, p) in [
            (f4(), 13),
            (f4(), 17),
            (ExponentMatrix::diagonal(&[3, 3, 3]), 7),
            (ExponentMatrix::diagonal(&[3, 3, 3]), 13),
        ] {
            let f = FieldTable::new(p, 1).unwrap();
            let brute = count_affine_bruteforce(&PencilSpec::new(m.clone()), &f, &opts).unwrap().count;
            assert_eq!(affine_count_mod_p_integral(&m, p).unwrap(), brute % p, "p={p}");
        }
    }

    #[test]
    fn hypotheses() {
        assert_eq!(
            affine_count_mod_p(&chain_cubic(), 71).unwrap_err(),
            Error::DetDoesNotDivide { det: 12, p_minus_one: 70 }
        );
        assert_eq!(affine_count_mod_p(&f4(), 9).unwrap_err(), Error::NotPrime(9));
    }
}
