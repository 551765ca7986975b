use super::{weights, DiagonalSymmetry, ExponentMatrix};
use crate::error::Result;
use crate::linalg;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Age-one vectors `ξ = (A^T)^{-1} v` with `v ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiSet {
    /// Exponent vector `v` and the vector `ξ`, all coordinates in `[0, 1]`.
    pub elements: Vec<(Vec<u64>, Vec<BigRational>)>,
    /// Candidates dropped because some coordinate left `[0, 1]`.
    pub excluded: Vec<(Vec<u64>, Vec<BigRational>)>,
}

/// Enumerate `v ∈ (Z≥1)^{n+1}` with `Σ r_j v_j = d`.
pub fn xi_set(a: &ExponentMatrix) -> Result<XiSet> {
    let w = weights(a)?;
    let inv_t = linalg::inverse(&linalg::to_int_matrix(&a.transpose().rows().to_vec()))
        .expect("weights exist, so A is invertible");
    let mut out = XiSet { elements: Vec::new(), excluded: Vec::new() };
    let n = a.dim();
    let mut v = alloc::vec![1u64; n];
    let base: u64 = w.weights.iter().sum();
    if base <= w.degree {
        enumerate(&w.weights, 0, w.degree - base, &mut v, &mut |v| {
            let vr: Vec<BigRational> = v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
            let xi = linalg::mat_vec(&inv_t, &vr);
            let inside = xi.iter().all(|c| !c.is_negative() && *c <= BigRational::one());
            if inside {
                out.elements.push((v.to_vec(), xi));
            } else {
                out.excluded.push((v.to_vec(), xi));
            }
        });
    }
    Ok(out)
}

// distribute `slack` extra weight over v[j..]
fn enumerate(r: &[u64], j: usize, slack: u64, v: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if j == r.len() {
        if slack == 0 {
            f(v);
        }
        return;
    }
    let mut extra = 0;
    while extra * r[j] <= slack {
        v[j] = 1 + extra;
        enumerate(r, j + 1, slack - extra * r[j], v, f);
        extra += 1;
    }
    v[j] = 1;
}

/// No coordinate of `g` is zero.
pub fn is_narrow(g: &DiagonalSymmetry) -> bool {
    g.is_narrow()
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::super::transpose_mirror;
    use super::*;

    fn rats(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect()
    }

    #[test]
    fn examples() {
        let x = xi_set(&chain_cubic()).unwrap();
        assert_eq!(x.elements.len(), 1);
        assert_eq!(x.elements[0].1, rats(&[(1, 2), (1, 4), (1, 4)]));
        let x = xi_set(&chain_quintic()).unwrap();
        assert_eq!(x.elements.len(), 1);
        assert_eq!(x.elements[0].1, rats(&[(1, 2), (1, 10), (1, 5), (1, 5)]));
        assert!(x.excluded.is_empty());
    }

    #[test]
    fn calabi_yau_has_dual_weight_element() {
        for m in [f4(), f2l2(), f1l3(), l2l2(), l4(), ExponentMatrix::diagonal(&[3, 3, 3])] {
            let x = xi_set(&m).unwrap();
            assert_eq!(x.elements.len(), 1);
            let (_, w) = transpose_mirror(&m).unwrap();
            let expect: Vec<BigRational> =
                w.weights.iter().map(|&q| BigRational::new(BigInt::from(q), BigInt::from(w.degree))).collect();
            assert_eq!(x.elements[0].1, expect);
            assert!(is_narrow(&DiagonalSymmetry::from_rationals(&x.elements[0].1)));
        }
    }

    #[test]
    fn non_calabi_yau_sets() {
        // x^5 + y^5 + z^5: v with v_0+v_1+v_2 = 5, ξ = v/5
        let x = xi_set(&ExponentMatrix::diagonal(&[5, 5, 5])).unwrap();
        assert_eq!(x.elements.len(), 6);
        assert!(x.excluded.is_empty());
        // weights sum past the degree leaves nothing
        assert!(xi_set(&ExponentMatrix::diagonal(&[2, 2, 2])).unwrap().elements.is_empty());
    }

    #[test]
    fn narrowness() {
        let g = DiagonalSymmetry::from_rationals(&rats(&[(0, 1), (1, 2), (1, 2)]));
        assert!(!is_narrow(&g));
        assert!(!is_narrow(&DiagonalSymmetry::identity(4)));
        assert!(is_narrow(&DiagonalSymmetry::from_rationals(&rats(&[(1, 2), (1, 4), (1, 4)]))));
    }
}
