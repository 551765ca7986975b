//! Point counts on hypersurfaces defined by (deformed) invertible polynomials.

mod enumerate;
mod formula;
mod legendre;
mod poly;

pub use enumerate::{
    count_affine_bruteforce, count_affine_lastvar, count_projective, count_projective_bruteforce, is_smooth_fiber,
    singular_points, CountOptions, WORK_CAP,
};
pub use formula::{affine_count_mod_p, affine_count_mod_p_integral};
pub use legendre::{calibrate_igusa_start, igusa_truncation, legendre_trace, IgusaStart};
pub use poly::Polynomial;

use crate::error::{Error, Result};
use crate::ff::{FieldTable, PrimePower};
use crate::invertible::{transpose_mirror, weights, ExponentMatrix};

/// `F_A − d^T ψ x_0⋯x_n`, or plain `F_A` when `psi` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PencilSpec {
    pub matrix: ExponentMatrix,
    /// Field element in integer encoding.
    pub psi: Option<u32>,
}

impl PencilSpec {
    pub fn new(matrix: ExponentMatrix) -> Self {
        Self { matrix, psi: None }
    }

    pub fn deformed(matrix: ExponentMatrix, psi: u32) -> Self {
        Self { matrix, psi: Some(psi) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Coefficient of `x_0⋯x_n`, i.e. `−d^T ψ`.
    pub fn deformation_coefficient(&self, f: &FieldTable) -> Result<Option<u32>> {
        let Some(psi) = self.psi else { return Ok(None) };
        if psi as u64 >= f.q() {
            return Err(Error::Parameters(alloc::format!("psi {psi} is not an element of F_{}", f.q())));
        }
        let (_, dual) = transpose_mirror(&self.matrix)?;
        let dt = f.from_int((dual.degree % f.p()) as i64);
        Ok(Some(f.neg(f.mul(dt, psi))))
    }

    pub fn polynomial(&self, f: &FieldTable) -> Result<Polynomial> {
        let n = self.dim();
        let mut terms: alloc::vec::Vec<(u32, alloc::vec::Vec<u32>)> =
            self.matrix.rows().iter().map(|r| (1u32, r.clone())).collect();
        if let Some(c) = self.deformation_coefficient(f)? {
            terms.push((c, alloc::vec![1; n]));
        }
        Ok(Polynomial::new(n, terms, f))
    }

    /// All weights equal, so the zero locus lives in ordinary projective space.
    pub fn is_unweighted(&self) -> Result<bool> {
        Ok(weights(&self.matrix)?.all_ones())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarietyKind {
    Affine,
    Projective,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountMethod {
    Brute,
    LastVar,
    Formula,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub count: u64,
    pub field: PrimePower,
    pub kind: VarietyKind,
    pub method: CountMethod,
}

/// Evaluate the pencil member at `point`.
pub fn evaluate(spec: &PencilSpec, point: &[u32], f: &FieldTable) -> Result<u32> {
    if point.len() != spec.dim() {
        return Err(Error::Dimension { expected: spec.dim(), got: point.len() });
    }
    Ok(spec.polynomial(f)?.eval(point, f))
}

/// `#X_A(ψ) ≡ #X_B(ψ) (mod q)` for two Calabi-Yau pencils with equal dual weights.
pub fn congruence_check(a: &ExponentMatrix, b: &ExponentMatrix, psi: u32, f: &FieldTable) -> Result<bool> {
    let (x, y) = congruence_counts(a, b, psi, f, &CountOptions::default())?;
    Ok(x % f.q() == y % f.q())
}

/// The two projective counts behind [`congruence_check`].
pub fn congruence_counts(
    a: &ExponentMatrix,
    b: &ExponentMatrix,
    psi: u32,
    f: &FieldTable,
    opts: &CountOptions,
) -> Result<(u64, u64)> {
    let (_, da) = transpose_mirror(a)?;
    let (_, db) = transpose_mirror(b)?;
    if da != db {
        return Err(Error::DualWeightsDiffer);
    }
    if !weights(a)?.is_calabi_yau() || !weights(b)?.is_calabi_yau() {
        return Err(Error::NotCalabiYau);
    }
    let ca = count_projective(&PencilSpec::deformed(a.clone(), psi), f, opts)?.count;
    let cb = count_projective(&PencilSpec::deformed(b.clone(), psi), f, opts)?.count;
    Ok((ca, cb))
}
