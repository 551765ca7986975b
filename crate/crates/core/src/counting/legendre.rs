use crate::arith::{inv_mod, is_prime, legendre, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// `a_p = 1 + p − #E_ψ(F_p)` for `E_ψ : y² = x(x−1)(x−ψ)`.
pub fn legendre_trace(psi: u64, p: u64) -> Result<i64> {
    check(psi, p)?;
    let psi = psi % p;
    let affine: i64 = (0..p)
        .map(|x| {
            let v = mul_mod(mul_mod(x, (x + p - 1) % p, p), (x + p - psi) % p, p);
            1 + legendre(v as i64, p) as i64
        })
        .sum();
    Ok(1 + p as i64 - (affine + 1))
}

fn check(psi: u64, p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if psi % p == 0 || psi % p == 1 {
        return Err(Error::SingularMember(alloc::format!("psi = {} mod {p}", psi % p)));
    }
    Ok(())
}

/// Lower summation index of the truncated series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IgusaStart {
    Zero,
    One,
}

/// `(−1)^{(p−1)/2} Σ_{n=start}^{(p−1)/2} ((1/2)_n / n!)² ψ^n mod p`.
pub fn igusa_truncation(psi: u64, p: u64, start: IgusaStart) -> Result<u64> {
    check(psi, p)?;
    let m = (p - 1) / 2;
    let half = inv_mod(2, p).unwrap();
    let psi = psi % p;
    // c_n = (1/2)_n / n!
    let mut c = 1u64;
    let mut sum = if start == IgusaStart::Zero { 1 } else { 0 };
    for n in 1..=m {
        let rise = (half + n - 1) % p;
        c = mul_mod(mul_mod(c, rise, p), inv_mod(n, p).unwrap(), p);
        sum = (sum + mul_mod(mul_mod(c, c, p), pow_mod(psi, n, p), p)) % p;
    }
    Ok(if m % 2 == 1 { (p - sum) % p } else { sum })
}

/// Pick the start index agreeing with the point-count trace for every `ψ`
/// at each calibration prime, or `None` if neither does.
pub fn calibrate_igusa_start(primes: &[u64]) -> Result<Option<IgusaStart>> {
    'start: for start in [IgusaStart::Zero, IgusaStart::One] {
        for &p in primes {
            for psi in 2..p {
                let a = legendre_trace(psi, p)?.rem_euclid(p as i64) as u64;
                if igusa_truncation(psi, p, start)? != a {
                    continue 'start;
                }
            }
        }
        return Ok(Some(start));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    // count (x, y) pairs directly
    fn trace_oracle(psi: u64, p: u64) -> i64 {
        let mut n = 1;
        for x in 0..p {
            let v = x * (x + p - 1) % p * ((x + p - psi) % p) % p;
            for y in 0..p {
                if y * y % p == v {
                    n += 1;
                }
            }
        }
        1 + p as i64 - n
    }

    #[test]
    fn traces_match_oracle() {
        for p in [5u64, 7, 11, 13, 17] {
            for psi in 2..p {
                let a = legendre_trace(psi, p).unwrap();
                assert_eq!(a, trace_oracle(psi, p));
                assert!((a * a) as u64 <= 4 * p);
            }
        }
        assert_eq!(legendre_trace(2, 5).unwrap(), trace_oracle(2, 5));
        assert_eq!(legendre_trace(3, 7).unwrap(), trace_oracle(3, 7));
    }

    #[test]
    fn singular_members() {
        assert!(matches!(legendre_trace(1, 7), Err(Error::SingularMember(_))));
        assert!(matches!(legendre_trace(7, 7), Err(Error::SingularMember(_))));
        assert!(matches!(igusa_truncation(0, 5, IgusaStart::Zero), Err(Error::SingularMember(_))));
    }

    #[test]
    fn calibration_picks_zero() {
        assert_eq!(calibrate_igusa_start(&[5, 7, 11, 13]).unwrap(), Some(IgusaStart::Zero));
    }

    #[test]
    fn supersingular_members() {
        // y² = x(x−1)(x+1) is supersingular for p ≡ 3 mod 4
        for p in [7u64, 11, 19, 23] {
            assert_eq!(legendre_trace(p - 1, p).unwrap() % p as i64, 0);
            assert_eq!(igusa_truncation(p - 1, p, IgusaStart::Zero).unwrap(), 0);
        }
    }
}
