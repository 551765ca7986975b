//! Small-integer number theory used throughout the crate.

use alloc::vec::Vec;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo a prime `p`; `None` when `a ≡ 0`.
pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Reduce a signed integer into `[0, m)`.
#[inline]
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = alloc::vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// If `q = p^r` for a prime `p`, return `(p, r)`.
pub fn prime_power_decompose(q: u64) -> Option<(u64, u32)> {
    let f = factorize(q);
    match f.as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

/// Multiplicative order of `a` modulo prime `p` (requires `a ≠ 0`).
pub fn order_mod(a: u64, p: u64) -> u64 {
    let mut ord = p - 1;
    for (l, _) in factorize(p - 1) {
        while ord % l == 0 && pow_mod(a, ord / l, p) == 1 {
            ord /= l;
        }
    }
    ord
}

/// Legendre symbol `(a / p)` for odd prime `p`, as -1, 0 or 1.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = reduce_i64(a, p);
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(281));
        assert!(!is_prime(1));
        assert!(!is_prime(281 * 281));
        assert!(is_prime(2_305_843_009_213_693_951));
        assert_eq!(factorize(22_188_040), alloc::vec![(2, 3), (5, 1), (7, 1), (109, 1), (727, 1)]);
        assert_eq!(prime_power_decompose(9), Some((3, 2)));
        assert_eq!(prime_power_decompose(12), None);
        assert_eq!(divisors(12), alloc::vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
    }

    #[test]
    fn smallest_primitive_root_of_73_is_5() {
        // brute-force order check of 2, 3, 4, 5
        let orders: Vec<u64> = (2..=5).map(|a| order_mod(a, 73)).collect();
        assert_eq!(orders, alloc::vec![9, 12, 9, 72]);
    }

    #[test]
    fn legendre_symbol() {
        assert_eq!(legendre(-1, 5), 1);
        assert_eq!(legendre(-1, 3), -1);
        assert_eq!(legendre(10, 5), 0);
    }
}
