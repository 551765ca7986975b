use super::{CountMethod, CountResult, PencilSpec, Polynomial, VarietyKind};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::ff::FieldTable;
use crate::invertible::weights;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

/// Default limit on evaluated points.
pub const WORK_CAP: u128 = 10_000_000_000;

// largest q for which trinomial root-count tables are built
const TABLE_LIMIT: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub cap: u128,
    /// Points per work unit; the result does not depend on it.
    pub chunk: u64,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self { cap: WORK_CAP, chunk: 1 << 12 }
    }
}

fn check_cap(work: u128, opts: &CountOptions) -> Result<()> {
    if work > opts.cap {
        Err(Error::WorkCap { work, cap: opts.cap })
    } else {
        Ok(())
    }
}

fn par_sum<F>(total: u64, chunk: u64, f: F) -> u64
where
    F: Fn(u64, u64) -> u64 + Sync + Send,
{
    let chunk = chunk.max(1);
    let pieces = total.div_ceil(chunk);
    let run = move |c: u64| f(c * chunk, ((c + 1) * chunk).min(total));
    #[cfg(feature = "std")]
    {
        use rayon::prelude::*;
        (0..pieces).into_par_iter().map(run).sum()
    }
    #[cfg(not(feature = "std"))]
    {
        (0..pieces).map(run).sum()
    }
}

fn digits_of(mut idx: u64, q: u64, out: &mut [u32]) {
    for d in out.iter_mut().rev() {
        *d = (idx % q) as u32;
        idx /= q;
    }
}

// advance a base-q odometer, last coordinate fastest
fn step(x: &mut [u32], q: u32) {
    for d in x.iter_mut().rev() {
        *d += 1;
        if *d < q {
            return;
        }
        *d = 0;
    }
}

/// Normalized projective representatives of length `m`, indexed lexicographically.
fn projective_rep(mut idx: u64, q: u64, out: &mut [u32]) {
    let m = out.len();
    let mut lead = 0;
    let mut block = q.pow((m - 1) as u32);
    while idx >= block {
        idx -= block;
        lead += 1;
        block /= q;
    }
    for d in out[..lead].iter_mut() {
        *d = 0;
    }
    out[lead] = 1;
    digits_of(idx, q, &mut out[lead + 1..]);
}

fn projective_size(q: u64, m: usize) -> u64 {
    (0..m).map(|i| q.pow(i as u32)).sum()
}

/// Count zeros of `F` in `F_q^{n+1}` by evaluating every point.
pub fn count_affine_bruteforce(spec: &PencilSpec, f: &FieldTable, opts: &CountOptions) -> Result<CountResult> {
    let n = spec.dim();
    let q = f.q();
    check_cap((q as u128).pow(n as u32), opts)?;
    let poly = spec.polynomial(f)?;
    let total = q.pow(n as u32);
    let count = par_sum(total, opts.chunk, |lo, hi| {
        let mut x = vec![0u32; n];
        digits_of(lo, q, &mut x);
        let mut c = 0;
        for _ in lo..hi {
            if poly.eval(&x, f) == 0 {
                c += 1;
            }
            step(&mut x, q as u32);
        }
        c
    });
    Ok(CountResult { count, field: f.prime_power(), kind: VarietyKind::Affine, method: CountMethod::Brute })
}

/// Projective count by evaluating every normalized representative.
pub fn count_projective_bruteforce(spec: &PencilSpec, f: &FieldTable, opts: &CountOptions) -> Result<CountResult> {
    require_unweighted(spec)?;
    let n = spec.dim();
    let q = f.q();
    let total = projective_size(q, n);
    check_cap(total as u128, opts)?;
    let poly = spec.polynomial(f)?;
    let count = par_sum(total, opts.chunk, |lo, hi| {
        let mut x = vec![0u32; n];
        (lo..hi)
            .filter(|&i| {
                projective_rep(i, q, &mut x);
                poly.eval(&x, f) == 0
            })
            .count() as u64
    });
    Ok(CountResult { count, field: f.prime_power(), kind: VarietyKind::Projective, method: CountMethod::Brute })
}

fn require_unweighted(spec: &PencilSpec) -> Result<()> {
    let w = weights(&spec.matrix)?;
    if w.all_ones() {
        Ok(())
    } else {
        Err(Error::Weighted(w.weights))
    }
}

/// `F` viewed as a polynomial in the last variable with coefficients in the others.
struct LastVar<'a> {
    f: &'a FieldTable,
    /// Distinct exponents of the last variable, increasing.
    exps: Vec<u32>,
    /// `(group, coefficient, prefix exponents)` per term.
    terms: Vec<(usize, u32, Vec<u32>)>,
    /// Nonzero-root counts of `y^k2 + B y^k1 + C`, indexed `B·q + C`.
    tables: BTreeMap<(u32, u32), Vec<u32>>,
    scan_needed: bool,
}

impl<'a> LastVar<'a> {
    fn new(poly: &Polynomial, f: &'a FieldTable) -> Self {
        let last = poly.nvars() - 1;
        let mut exps: Vec<u32> = poly.terms().iter().map(|(_, e)| e[last]).collect();
        exps.sort_unstable();
        exps.dedup();
        let terms =
            poly.terms().iter().map(|(c, e)| (exps.binary_search(&e[last]).unwrap(), *c, e[..last].to_vec())).collect();
        let mut tables = BTreeMap::new();
        let small = f.q() <= TABLE_LIMIT;
        let k = exps.len();
        if small {
            for a in 0..k {
                for b in a + 1..k {
                    for c in b + 1..k {
                        let key = (exps[b] - exps[a], exps[c] - exps[a]);
                        tables.entry(key).or_insert_with(|| trinomial_table(key.0, key.1, f));
                    }
                }
            }
        }
        let scan_needed = k >= 4 || (k >= 3 && !small);
        Self { f, exps, terms, tables, scan_needed }
    }

    fn coefficients(&self, prefix: &[u32], out: &mut [u32]) {
        let f = self.f;
        let n = f.q_times();
        out.iter_mut().for_each(|c| *c = 0);
        for (g, c, e) in &self.terms {
            let mut l = f.log_unchecked(*c) as u64;
            let mut vanishes = false;
            for (&k, &x) in e.iter().zip(prefix) {
                if k > 0 {
                    if x == 0 {
                        vanishes = true;
                        break;
                    }
                    l += k as u64 * f.log_unchecked(x) as u64;
                }
            }
            if !vanishes {
                out[*g] = f.add(out[*g], f.exp(l % n));
            }
        }
    }

    fn eval_y(&self, coeffs: &[u32], y: u32) -> u32 {
        let f = self.f;
        let mut acc = 0;
        for (&k, &c) in self.exps.iter().zip(coeffs) {
            if c != 0 {
                acc = f.add(acc, f.mul(c, f.pow_u(y, k)));
            }
        }
        acc
    }

    /// Number of `y ∈ F_q` with `Σ c_k y^k = 0`.
    fn roots(&self, coeffs: &[u32]) -> u64 {
        let f = self.f;
        let q = f.q();
        let zero_root = self.exps[0] > 0 || coeffs[0] == 0;
        let mut nz = [(0u32, 0u32); 3];
        let mut len = 0;
        for (&k, &c) in self.exps.iter().zip(coeffs) {
            if c != 0 {
                if len == 3 {
                    len = 4;
                    break;
                }
                nz[len] = (k, c);
                len += 1;
            }
        }
        let nonzero = match len {
            0 => q - 1,
            1 => 0,
            2 => {
                let (a, ca) = nz[0];
                let (b, cb) = nz[1];
                let u = f.neg(f.mul(ca, f.inv(cb).unwrap()));
                let g = gcd((b - a) as u64, q - 1);
                if f.log_unchecked(u) as u64 % g == 0 {
                    g
                } else {
                    0
                }
            }
            3 if q <= TABLE_LIMIT => {
                let (a, ca) = nz[0];
                let (b, cb) = nz[1];
                let (c, cc) = nz[2];
                let inv = f.inv(cc).unwrap();
                let bb = f.mul(cb, inv) as usize;
                let cc0 = f.mul(ca, inv) as usize;
                self.tables[&(b - a, c - a)][bb * q as usize + cc0] as u64
            }
            _ => (1..q as u32).filter(|&y| self.eval_y(coeffs, y) == 0).count() as u64,
        };
        nonzero + zero_root as u64
    }
}

fn trinomial_table(k1: u32, k2: u32, f: &FieldTable) -> Vec<u32> {
    let q = f.q() as usize;
    let mut t = vec![0u32; q * q];
    for y in 1..q as u32 {
        let y1 = f.pow_u(y, k1);
        let y2 = f.pow_u(y, k2);
        for b in 0..q as u32 {
            let c = f.neg(f.add(y2, f.mul(b, y1)));
            t[b as usize * q + c as usize] += 1;
        }
    }
    t
}

fn lastvar_work(lv: &LastVar<'_>, prefixes: u64, q: u64) -> u128 {
    if lv.scan_needed {
        prefixes as u128 * q as u128
    } else {
        prefixes as u128
    }
}

/// Affine count in `O(q^n)`: for each prefix, count roots in the last variable.
pub fn count_affine_lastvar(spec: &PencilSpec, f: &FieldTable, opts: &CountOptions) -> Result<CountResult> {
    let n = spec.dim();
    let q = f.q();
    let poly = spec.polynomial(f)?;
    let result =
        |count| CountResult { count, field: f.prime_power(), kind: VarietyKind::Affine, method: CountMethod::LastVar };
    if poly.is_zero() {
        return Ok(result(q.pow(n as u32)));
    }
    let lv = LastVar::new(&poly, f);
    let total = q.pow((n - 1) as u32);
    check_cap(lastvar_work(&lv, total, q), opts)?;
    let count = par_sum(total, opts.chunk, |lo, hi| {
        let mut x = vec![0u32; n - 1];
        let mut coeffs = vec![0u32; lv.exps.len()];
        digits_of(lo, q, &mut x);
        let mut c = 0;
        for _ in lo..hi {
            lv.coefficients(&x, &mut coeffs);
            c += lv.roots(&coeffs);
            step(&mut x, q as u32);
        }
        c
    });
    Ok(result(count))
}

/// Points of the hypersurface in `P^n(F_q)`; requires all weights equal to one.
pub fn count_projective(spec: &PencilSpec, f: &FieldTable, opts: &CountOptions) -> Result<CountResult> {
    require_unweighted(spec)?;
    let n = spec.dim();
    let q = f.q();
    let poly = spec.polynomial(f)?;
    let lv = LastVar::new(&poly, f);
    let total = projective_size(q, n - 1);
    check_cap(lastvar_work(&lv, total, q), opts)?;
    let mut point = vec![0u32; n];
    point[n - 1] = 1;
    let at_infinity = (poly.eval(&point, f) == 0) as u64;
    let count = par_sum(total, opts.chunk, |lo, hi| {
        let mut x = vec![0u32; n - 1];
        let mut coeffs = vec![0u32; lv.exps.len()];
        let mut c = 0;
        for i in lo..hi {
            projective_rep(i, q, &mut x);
            lv.coefficients(&x, &mut coeffs);
            c += lv.roots(&coeffs);
        }
        c
    });
    Ok(CountResult {
        count: count + at_infinity,
        field: f.prime_power(),
        kind: VarietyKind::Projective,
        method: CountMethod::LastVar,
    })
}

/// Number of projective points where `F` and every partial derivative vanish.
pub fn singular_points(spec: &PencilSpec, f: &FieldTable, opts: &CountOptions) -> Result<u64> {
    require_unweighted(spec)?;
    let n = spec.dim();
    let q = f.q();
    let poly = spec.polynomial(f)?;
    let partials: Vec<Polynomial> = (0..n).map(|j| poly.derivative(j, f)).collect();
    let singular = |x: &[u32]| poly.eval(x, f) == 0 && partials.iter().all(|d| d.eval(x, f) == 0);
    let lv = LastVar::new(&poly, f);
    let total = projective_size(q, n - 1);
    check_cap(total as u128 * q as u128, opts)?;
    let mut point = vec![0u32; n];
    point[n - 1] = 1;
    let at_infinity = singular(&point) as u64;
    let count = par_sum(total, opts.chunk, |lo, hi| {
        let mut x = vec![0u32; n];
        let mut coeffs = vec![0u32; lv.exps.len()];
        let mut c = 0;
        for i in lo..hi {
            projective_rep(i, q, &mut x[..n - 1]);
            lv.coefficients(&x[..n - 1], &mut coeffs);
            if lv.roots(&coeffs) == 0 {
                continue;
            }
            for y in 0..q as u32 {
                if lv.eval_y(&coeffs, y) == 0 {
                    x[n - 1] = y;
                    if singular(&x) {
                        c += 1;
                    }
                }
            }
        }
        c
    });
    Ok(count + at_infinity)
}

/// No projective point of the reduction is singular.
pub fn is_smooth_fiber(spec: &PencilSpec, f: &FieldTable, opts: &CountOptions) -> Result<bool> {
    Ok(singular_points(spec, f, opts)? == 0)
}
