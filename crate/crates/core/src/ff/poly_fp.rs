//! Dense polynomials over `F_p` used only while constructing field tables.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FpPoly(pub Vec<u64>);

impl FpPoly {
    pub fn zero(r: usize) -> Self {
        FpPoly(vec![0; r])
    }

    pub fn one(r: usize) -> Self {
        let mut v = vec![0; r];
        v[0] = 1;
        FpPoly(v)
    }

    pub fn decode(mut k: u64, p: u64, r: usize) -> Self {
        let mut v = Vec::with_capacity(r);
        for _ in 0..r {
            v.push(k % p);
            k /= p;
        }
        FpPoly(v)
    }

    pub fn encode(&self, p: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    /// Product reduced modulo the monic `modulus` of degree `r = self.len()`.
    pub fn mul_mod(&self, other: &Self, modulus: &[u64], p: u64) -> Self {
        let r = self.0.len();
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        for k in (r..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for i in 0..=r {
                let idx = k - r + i;
                prod[idx] = (prod[idx] + (p - c) * modulus[i]) % p;
            }
        }
        prod.truncate(r);
        FpPoly(prod)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &[u64], p: u64) -> Self {
        let mut acc = Self::one(self.0.len());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus, p);
            }
            base = base.mul_mod(&base, modulus, p);
            e >>= 1;
        }
        acc
    }
}

/// `x + x^p + ... + x^{p^{r-1}}`, which lies in `F_p`.
pub(crate) fn trace_of(x: &FpPoly, modulus: &[u64], p: u64, r: u32) -> u64 {
    let mut acc = vec![0u64; x.0.len()];
    let mut y = x.clone();
    for _ in 0..r {
        for (a, b) in acc.iter_mut().zip(&y.0) {
            *a = (*a + b) % p;
        }
        y = y.pow_mod(p, modulus, p);
    }
    debug_assert!(acc[1..].iter().all(|&c| c == 0));
    acc[0]
}

// Plain (non-reduced) polynomial helpers for the irreducibility test.

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn inv(a: u64, p: u64) -> u64 {
    crate::arith::inv_mod(a, p).expect("nonzero")
}

fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut a = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv(b[db], p);
    while a.len() - 1 >= db && !(a.len() == 1 && a[0] == 0) {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for i in 0..=db {
            let idx = da - db + i;
            a[idx] = (a[idx] + (p - c) * b[i] % p) % p;
        }
        a = trim(a);
        if da == 0 {
            break;
        }
    }
    a
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !(b.len() == 1 && b[0] == 0) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` of degree `r` is irreducible iff `x^{p^r} ≡ x (mod f)` and
/// `gcd(x^{p^{r/l}} - x, f) = 1` for every prime `l | r`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = f.len() - 1;
    if r == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let mut x = FpPoly::zero(r);
    x.0[1] = 1;
    let frob = |k: usize| {
        let mut y = x.clone();
        for _ in 0..k {
            y = y.pow_mod(p, f, p);
        }
        y
    };
    let full = frob(r);
    if full != x {
        return false;
    }
    for (l, _) in crate::arith::factorize(r as u64) {
        let mut y = frob(r / l as usize).0;
        y[1] = (y[1] + p - 1) % p;
        let g = gcd(f, &y, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}
