//! Invertible polynomials `F_A = Σ_i Π_j x_j^{a_ij}` and their BHK data.
//!
//! All arithmetic here is exact.

mod atomic;
mod groups;
mod xi;

pub use atomic::{atomic_decomposition, AtomKind, AtomicBlock, AtomicDecomposition};
pub use groups::{aut_group, sl_j_quotient, DiagonalSymmetry, SlJQuotient, SymmetryGroup, GROUP_CAP};
pub use xi::{is_narrow, xi_set, XiSet};

use crate::error::{Error, Result};
use crate::linalg;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Square exponent matrix; row `i` is the exponent vector of monomial `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentMatrix {
    rows: Vec<Vec<u32>>,
}

impl ExponentMatrix {
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        Ok(Self { rows })
    }

    pub fn diagonal(exponents: &[u32]) -> Self {
        let n = exponents.len();
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { exponents[i] } else { 0 }).collect()).collect();
        Self { rows }
    }

    /// Number of variables `n + 1`.
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.rows[i][j]
    }

    pub fn transpose(&self) -> Self {
        Self { rows: linalg::transpose(&self.rows) }
    }

    /// Simultaneous permutation: new row/column `k` is old row/column `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let rows = perm.iter().map(|&i| perm.iter().map(|&j| self.rows[i][j]).collect()).collect();
        Self { rows }
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&linalg::to_int_matrix(&self.rows))
    }

    /// `|det A|` as a machine integer.
    pub fn abs_det(&self) -> u64 {
        self.det().abs().to_u64().expect("determinant fits in u64")
    }

    pub(crate) fn int_matrix(&self) -> linalg::IntMatrix {
        linalg::to_int_matrix(&self.rows)
    }

    pub(crate) fn inverse(&self) -> Result<linalg::RatMatrix> {
        linalg::inverse(&self.int_matrix()).ok_or(Error::Singular)
    }
}

/// Primitive positive weights `r` and degree `d` with `A r = d·1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    pub weights: Vec<u64>,
    pub degree: u64,
}

impl WeightSystem {
    pub fn is_calabi_yau(&self) -> bool {
        self.weights.iter().sum::<u64>() == self.degree
    }

    pub fn all_ones(&self) -> bool {
        self.weights.iter().all(|&w| w == 1)
    }
}

/// Solve `A x = 1` over `Q` and clear denominators.
pub fn weights(a: &ExponentMatrix) -> Result<WeightSystem> {
    let inv = a.inverse()?;
    let ones: Vec<BigRational> = (0..a.dim()).map(|_| BigRational::from_integer(1.into())).collect();
    let x = linalg::mat_vec(&inv, &ones);
    if x.iter().any(|v| !v.is_positive()) {
        return Err(Error::NoWeights);
    }
    let l = x.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let mut r: Vec<BigInt> = x.iter().map(|v| (v * &l).to_integer()).collect();
    let mut d = l;
    let g = r.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    for v in r.iter_mut() {
        *v /= &g;
    }
    d /= &g;
    Ok(WeightSystem {
        weights: r.iter().map(|v| v.to_u64().expect("weight fits in u64")).collect(),
        degree: d.to_u64().expect("degree fits in u64"),
    })
}

pub fn is_calabi_yau(a: &ExponentMatrix) -> Result<bool> {
    Ok(weights(a)?.is_calabi_yau())
}

/// The BHK transpose `A^T` with its (dual) weight system.
pub fn transpose_mirror(a: &ExponentMatrix) -> Result<(ExponentMatrix, WeightSystem)> {
    let at = a.transpose();
    let w = weights(&at)?;
    Ok((at, w))
}

/// Everything the invertibility criterion checks, in one place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvertibleData {
    pub matrix: ExponentMatrix,
    pub det: BigInt,
    pub weights: WeightSystem,
    pub dual_weights: WeightSystem,
    pub decomposition: AtomicDecomposition,
}

impl InvertibleData {
    pub fn is_calabi_yau(&self) -> bool {
        self.weights.is_calabi_yau()
    }
}

/// `det A ≠ 0`, positive weights exist and an atomic decomposition exists.
pub fn validate(a: &ExponentMatrix) -> Result<InvertibleData> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::Singular);
    }
    let w = weights(a)?;
    let decomposition = atomic_decomposition(a)?;
    let (_, dual) = transpose_mirror(a)?;
    Ok(InvertibleData { matrix: a.clone(), det, weights: w, dual_weights: dual, decomposition })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::ExponentMatrix;
    use alloc::vec;

    pub fn chain_cubic() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![2, 1, 0], vec![0, 2, 1], vec![0, 0, 3]]).unwrap()
    }
    pub fn chain_quintic() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![2, 1, 0, 0], vec![0, 5, 0, 0], vec![0, 0, 5, 0], vec![0, 0, 0, 5]]).unwrap()
    }
    pub fn f4() -> ExponentMatrix {
        ExponentMatrix::diagonal(&[4, 4, 4, 4])
    }
    pub fn f2l2() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![4, 0, 0, 0], vec![0, 4, 0, 0], vec![0, 0, 3, 1], vec![0, 0, 1, 3]]).unwrap()
    }
    pub fn f1l3() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![4, 0, 0, 0], vec![0, 3, 1, 0], vec![0, 0, 3, 1], vec![0, 1, 0, 3]]).unwrap()
    }
    pub fn l2l2() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![3, 1, 0, 0], vec![1, 3, 0, 0], vec![0, 0, 3, 1], vec![0, 0, 1, 3]]).unwrap()
    }
    pub fn l4() -> ExponentMatrix {
        ExponentMatrix::new(vec![vec![3, 1, 0, 0], vec![0, 3, 1, 0], vec![0, 0, 3, 1], vec![1, 0, 0, 3]]).unwrap()
    }
}
