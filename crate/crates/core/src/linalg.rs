//! Exact integer and rational linear algebra on small dense matrices.

use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_int_matrix(rows: &[Vec<u32>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Fraction-free (Bareiss) determinant.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse over `Q`, or `None` if singular.
pub fn inverse(m: &IntMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(piv, col);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..2 * n {
                    let v = &a[col][j] * &f;
                    a[i][j] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_vec(m: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter().map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
}

/// Invariant factors of an integer matrix (nonzero diagonal of its Smith form).
pub fn smith_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero pivot in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let qt = a[i][t].div_floor(&a[t][t]);
            if !qt.is_zero() {
                for j in t..cols {
                    let v = &qt * &a[t][j];
                    a[i][j] -= v;
                }
            }
            if !a[i][t].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let qt = a[t][j].div_floor(&a[t][t]);
            if !qt.is_zero() {
                for i in t..rows {
                    let v = &qt * &a[i][t];
                    a[i][j] -= v;
                }
            }
            if !a[t][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // enforce divisibility: fold an offending row into row t and retry
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    for k in t..cols {
                        let v = a[i][k].clone();
                        a[t][k] += v;
                    }
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if !fixed {
            continue;
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Basis of `{x ∈ Z^m : v·x = 0}` for a nonzero integer row vector `v`.
pub fn integer_kernel(v: &[BigInt]) -> Vec<Vec<BigInt>> {
    let m = v.len();
    let mut row = v.to_vec();
    // columns of `u` track the unimodular transform
    let mut u: IntMatrix =
        (0..m).map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    loop {
        let nonzero: Vec<usize> = (0..m).filter(|&j| !row[j].is_zero()).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let piv = *nonzero.iter().min_by_key(|&&j| row[j].abs()).unwrap();
        for &j in &nonzero {
            if j == piv {
                continue;
            }
            let qt = row[j].div_floor(&row[piv]);
            let sub = &qt * &row[piv];
            row[j] -= sub;
            for i in 0..m {
                let v = &qt * &u[i][piv];
                u[i][j] -= v;
            }
        }
    }
    let piv = (0..m).find(|&j| !row[j].is_zero());
    (0..m).filter(|&j| Some(j) != piv).map(|j| (0..m).map(|i| u[i][j].clone()).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinants() {
        assert_eq!(det(&im(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 3]])), BigInt::from(12));
        assert_eq!(det(&im(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det(&im(&[&[1, 2], &[2, 4]])), BigInt::zero());
        assert_eq!(det(&im(&[&[3, 1, 0, 0], &[0, 3, 1, 0], &[0, 0, 3, 1], &[1, 0, 0, 3]])), BigInt::from(80));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = im(&[&[2, 1, 0], &[0, 2, 1], &[0, 0, 3]]);
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            let col: Vec<BigRational> = (0..3).map(|k| inv[k][i].clone()).collect();
            let arat: RatMatrix =
                a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
            let e = mat_vec(&arat, &col);
            for (k, x) in e.iter().enumerate() {
                assert_eq!(x.is_one(), k == i);
            }
        }
        assert!(inverse(&im(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn smith_forms() {
        let s = smith_invariants(&im(&[&[4, 0], &[0, 6]]));
        assert_eq!(s, alloc::vec![BigInt::from(2), BigInt::from(12)]);
        let s = smith_invariants(&im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s, alloc::vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let s = smith_invariants(&im(&[&[3, 1], &[1, 3]]));
        assert_eq!(s, alloc::vec![BigInt::from(1), BigInt::from(8)]);
    }

    #[test]
    fn kernel_of_row() {
        let v: Vec<BigInt> = [2, 1, 1, 4].iter().map(|&x| BigInt::from(x)).collect();
        let k = integer_kernel(&v);
        assert_eq!(k.len(), 3);
        for b in &k {
            let dot: BigInt = b.iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
        // the kernel is saturated: its Smith invariants are all 1
        let s = smith_invariants(&k);
        assert!(s.iter().all(|x| x.is_one()));
    }
}
