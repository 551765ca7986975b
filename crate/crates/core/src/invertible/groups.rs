use super::{weights, ExponentMatrix};
use crate::error::{Error, Result};
use crate::linalg;
use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Largest group enumerated element by element.
pub const GROUP_CAP: u64 = 1_000_000;

/// A diagonal automorphism `x_j ↦ e^{2πi ξ_j} x_j`, stored as `ξ_j = numerators[j] / denominator`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagonalSymmetry {
    numerators: Vec<u64>,
    denominator: u64,
}

impl DiagonalSymmetry {
    /// Reduces numerators mod the denominator.
    pub fn new(numerators: Vec<u64>, denominator: u64) -> Self {
        assert!(denominator > 0, "zero denominator");
        let numerators = numerators.into_iter().map(|v| v % denominator).collect();
        let mut g = Self { numerators, denominator };
        g.normalize();
        g
    }

    /// From rationals, taken mod 1.
    pub fn from_rationals(xi: &[BigRational]) -> Self {
        let d = xi.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
        let nums = xi.iter().map(|v| (v * &d).to_integer().mod_floor(&d).to_u64().expect("numerator fits")).collect();
        Self::new(nums, d.to_u64().expect("denominator fits"))
    }

    fn normalize(&mut self) {
        let g = self.numerators.iter().fold(self.denominator, |acc, &v| acc.gcd(&v));
        if g > 1 {
            self.denominator /= g;
            for v in self.numerators.iter_mut() {
                *v /= g;
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        Self { numerators: vec![0; n], denominator: 1 }
    }

    pub fn xi(&self) -> Vec<BigRational> {
        self.numerators.iter().map(|&v| BigRational::new(BigInt::from(v), BigInt::from(self.denominator))).collect()
    }

    pub fn age(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numerators.iter().sum::<u64>()), BigInt::from(self.denominator))
    }

    pub fn is_narrow(&self) -> bool {
        self.numerators.iter().all(|&v| v != 0)
    }

    pub fn compose(&self, other: &Self) -> Self {
        let d = self.denominator.lcm(&other.denominator);
        let (a, b) = (d / self.denominator, d / other.denominator);
        let nums = self.numerators.iter().zip(&other.numerators).map(|(&x, &y)| (x * a + y * b) % d).collect();
        Self::new(nums, d)
    }

    pub fn numerators(&self) -> &[u64] {
        &self.numerators
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    fn scaled_to(&self, d: u64) -> Option<Vec<u64>> {
        if d % self.denominator != 0 {
            return None;
        }
        let k = d / self.denominator;
        Some(self.numerators.iter().map(|&v| v * k).collect())
    }
}

/// Finite group of diagonal symmetries, all written over one denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    denominator: u64,
    elements: Vec<Vec<u64>>,
    /// Invariant factors `d_1 | d_2 | …`, trivial factors dropped.
    pub invariants: Vec<u64>,
}

impl SymmetryGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = DiagonalSymmetry> + '_ {
        self.elements.iter().map(move |v| DiagonalSymmetry::new(v.clone(), self.denominator))
    }

    pub fn contains(&self, g: &DiagonalSymmetry) -> bool {
        g.scaled_to(self.denominator).is_some_and(|v| self.elements.binary_search(&v).is_ok())
    }

    fn closure(denominator: u64, generators: &[Vec<u64>], n: usize, cap: u64) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let zero = vec![0u64; n];
        seen.insert(zero.clone());
        let mut queue = VecDeque::from([zero]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y: Vec<u64> = x.iter().zip(g).map(|(&a, &b)| (a + b) % denominator).collect();
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::GroupCap { order: seen.len() as u128, cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(Self { denominator, elements: seen.into_iter().collect(), invariants: Vec::new() })
    }
}

fn nontrivial(inv: Vec<BigInt>) -> Vec<u64> {
    inv.into_iter().map(|v| v.to_u64().expect("invariant fits")).filter(|&v| v > 1).collect()
}

/// Generators of `Aut(F_A)`: the columns of `A^{-1}`, written over `|det A|`.
fn aut_generators(a: &ExponentMatrix) -> Result<(u64, Vec<Vec<u64>>)> {
    let d = a.abs_det();
    if d == 0 {
        return Err(Error::Singular);
    }
    let inv = a.inverse()?;
    let n = a.dim();
    let dd = BigInt::from(d);
    let gens = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let v = (&inv[i][j] * &dd).to_integer();
                    v.mod_floor(&dd).to_u64().unwrap()
                })
                .collect()
        })
        .collect();
    Ok((d, gens))
}

pub fn aut_group(a: &ExponentMatrix) -> Result<SymmetryGroup> {
    aut_group_capped(a, GROUP_CAP)
}

pub fn aut_group_capped(a: &ExponentMatrix, cap: u64) -> Result<SymmetryGroup> {
    let d = a.abs_det();
    if d > cap {
        return Err(Error::GroupCap { order: d as u128, cap });
    }
    let (den, gens) = aut_generators(a)?;
    let mut g = SymmetryGroup::closure(den, &gens, a.dim(), cap)?;
    g.invariants = nontrivial(linalg::smith_invariants(&a.int_matrix()));
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlJQuotient {
    pub sl: SymmetryGroup,
    pub j: SymmetryGroup,
    /// Invariant factors of `SL/J`.
    pub invariants: Vec<u64>,
}

impl SlJQuotient {
    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }
}

/// Invariant factors of `SL/J` without enumerating either group.
///
/// With `Aut ≅ Z^n / A Z^n` via `u ↦ A^{-1} u`, the age of `u` is `q·u / d^T`
/// for the dual weights `q`, and `J` is the class of `(1, …, 1)`.
pub fn sl_j_invariants(a: &ExponentMatrix) -> Result<Vec<u64>> {
    let w = weights(a)?;
    if !w.is_calabi_yau() {
        return Err(Error::NotCalabiYau);
    }
    let dual = weights(&a.transpose())?;
    let n = a.dim();
    let mut row: Vec<BigInt> = dual.weights.iter().map(|&v| BigInt::from(v)).collect();
    row.push(BigInt::from(dual.degree));
    let kernel = linalg::integer_kernel(&row);
    // columns of `basis` span {u : q·u ≡ 0 mod d^T}
    let basis: linalg::IntMatrix = (0..n).map(|i| kernel.iter().map(|k| k[i].clone()).collect()).collect();
    let binv = linalg::inverse(&basis).ok_or(Error::Singular)?;
    let mut gens = a.int_matrix();
    for r in gens.iter_mut() {
        r.push(BigInt::from(1));
    }
    let pres: linalg::IntMatrix = binv
        .iter()
        .map(|brow| {
            (0..=n)
                .map(|c| {
                    let s = brow
                        .iter()
                        .zip(&gens)
                        .fold(BigRational::zero(), |acc, (b, g)| acc + b * BigRational::from_integer(g[c].clone()));
                    assert!(s.is_integer(), "generator outside the SL lattice");
                    s.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(nontrivial(linalg::smith_invariants(&pres)))
}

/// `SL(F_A)`, `J(F_A)` and the invariants of `SL/J`. Requires the Calabi-Yau condition.
pub fn sl_j_quotient(a: &ExponentMatrix) -> Result<SlJQuotient> {
    let invariants = sl_j_invariants(a)?;
    let aut = aut_group(a)?;
    let den = aut.denominator;
    let sl_elems: Vec<Vec<u64>> = aut.elements.iter().filter(|v| v.iter().sum::<u64>() % den == 0).cloned().collect();
    let w = weights(a)?;
    let jgen: Vec<u64> = w.weights.iter().map(|&r| r * (den / w.degree)).collect();
    let mut j = SymmetryGroup::closure(den, &[jgen], a.dim(), GROUP_CAP)?;
    j.invariants = vec![j.order() as u64].into_iter().filter(|&v| v > 1).collect();
    let mut sl = SymmetryGroup { denominator: den, elements: sl_elems, invariants: Vec::new() };
    // SL itself: the quotient lattice without the J column
    sl.invariants = sl_invariants(a)?;
    Ok(SlJQuotient { sl, j, invariants })
}

fn sl_invariants(a: &ExponentMatrix) -> Result<Vec<u64>> {
    let dual = weights(&a.transpose())?;
    let n = a.dim();
    let mut row: Vec<BigInt> = dual.weights.iter().map(|&v| BigInt::from(v)).collect();
    row.push(BigInt::from(dual.degree));
    let kernel = linalg::integer_kernel(&row);
    let basis: linalg::IntMatrix = (0..n).map(|i| kernel.iter().map(|k| k[i].clone()).collect()).collect();
    let binv = linalg::inverse(&basis).ok_or(Error::Singular)?;
    let am = a.int_matrix();
    let pres: linalg::IntMatrix = binv
        .iter()
        .map(|brow| {
            (0..n)
                .map(|c| {
                    brow.iter()
                        .zip(&am)
                        .fold(BigRational::zero(), |acc, (b, g)| acc + b * BigRational::from_integer(g[c].clone()))
                        .to_integer()
                })
                .collect()
        })
        .collect();
    Ok(nontrivial(linalg::smith_invariants(&pres)))
}
