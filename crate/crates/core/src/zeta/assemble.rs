use super::factor::{complete_by_functional_equation, factor_weil, weil_magnitudes_ok, WeilFactor};
use super::{newton_coefficients, BlockStatus, Character, ExtensionCache, LPolynomial, LResult, Twist};
use crate::arith::{inv_mod, pow_mod};
use crate::counting::{count_projective, is_smooth_fiber, CountOptions, PencilSpec};
use crate::error::{Error, Result};
use crate::ff::FieldTable;
use crate::hypergeom::{HypergeometricParameters, Tolerance};
use crate::intpoly::IntPoly;
use crate::invertible::ExponentMatrix;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pencil {
    F4,
    L2L2,
}

impl Pencil {
    pub fn matrix(&self) -> ExponentMatrix {
        match self {
            Self::F4 => ExponentMatrix::diagonal(&[4, 4, 4, 4]),
            Self::L2L2 => {
                ExponentMatrix::new(vec![vec![3, 1, 0, 0], vec![1, 3, 0, 0], vec![0, 0, 3, 1], vec![0, 0, 1, 3]])
                    .expect("square")
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::F4 => "F4",
            Self::L2L2 => "L2L2",
        }
    }
}

/// Orientation of the hypergeometric argument relative to `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `t = ψ^{−4}`.
    Inverse,
    /// `t = ψ^4`.
    Direct,
}

/// Frozen conventions: argument orientation and the sign `σ` of the
/// `R`, `φ_{−1}` and `Q(i)` blocks, in that order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Calibration {
    pub orientation: Orientation,
    pub signs: [i8; 3],
}

impl Default for Calibration {
    fn default() -> Self {
        Self { orientation: Orientation::Inverse, signs: [1, 1, 1] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub name: String,
    pub l: LResult,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaReport {
    pub pencil: Pencil,
    pub q: u64,
    pub psi: u64,
    pub t: u64,
    pub smooth: bool,
    /// `None` when a block could only be determined to low order.
    pub px: Option<LPolynomial>,
    /// `P_X mod T^{k+1}` for the largest `k` every block determines.
    pub px_truncated: IntPoly,
    pub blocks: Vec<BlockReport>,
    pub factors: Vec<WeilFactor>,
    pub weil_ok: bool,
    pub notes: Vec<String>,
}

fn params(alpha: &[(i64, i64)], beta: &[(i64, i64)]) -> HypergeometricParameters {
    HypergeometricParameters::from_pairs(alpha, beta).expect("valid block parameters")
}

/// Degree-3 block shared by both pencils.
pub fn r_block() -> HypergeometricParameters {
    params(&[(1, 4), (1, 2), (3, 4)], &[(0, 1), (0, 1), (0, 1)])
}

pub fn minus_one_block() -> HypergeometricParameters {
    params(&[(1, 4), (3, 4)], &[(0, 1), (1, 2)])
}

pub fn gaussian_block() -> HypergeometricParameters {
    params(&[(1, 2)], &[(0, 1)])
}

pub fn octic_block() -> HypergeometricParameters {
    params(&[(1, 8), (3, 8), (5, 8), (7, 8)], &[(0, 1), (1, 4), (1, 2), (3, 4)])
}

/// Hodge weight: range of the interlacing count of `α` against `β`, minus one.
pub fn hodge_weight(h: &HypergeometricParameters) -> u32 {
    let mut marks: Vec<(num_rational::Rational64, i32)> =
        h.beta().iter().map(|b| (*b, 1)).chain(h.alpha().iter().map(|a| (*a, -1))).collect();
    marks.sort();
    let (mut run, mut lo, mut hi) = (0i32, 0i32, 0i32);
    for (_, step) in marks {
        run += step;
        lo = lo.min(run);
        hi = hi.max(run);
    }
    (hi - lo - 1).max(0) as u32
}

fn argument(psi: u64, q: u64, orientation: Orientation) -> Result<u64> {
    if psi % q == 0 {
        return Err(Error::ZeroArgument);
    }
    let p4 = pow_mod(psi % q, 4, q);
    Ok(match orientation {
        Orientation::Inverse => inv_mod(p4, q).ok_or(Error::ZeroArgument)?,
        Orientation::Direct => p4,
    })
}

struct BlockPlan {
    name: &'static str,
    params: HypergeometricParameters,
    degree: usize,
    twist: Twist,
    multiplicity: u32,
}

fn raw_power_sums(plan: &BlockPlan, t: u64, cache: &mut ExtensionCache, tol: &Tolerance) -> Result<Vec<BigInt>> {
    let q = cache.p();
    let reach = (cache.max_r() as usize).min(plan.degree + 1);
    let mut s = Vec::with_capacity(reach);
    for r in 1..=reach as u32 {
        let h = super::hyper_power_sum(&plan.params, t, r, cache, tol)?;
        let chi = plan.twist.character.value(q, r)?;
        s.push(h * chi * BigInt::from(q).pow(r * plan.twist.tate));
    }
    Ok(s)
}

fn block_from_sums(plan: &BlockPlan, raw: &[BigInt], sign: i8, q: u64) -> Result<BlockReport> {
    let s: Vec<BigInt> = raw.iter().enumerate().map(|(i, v)| v * (sign as i64).pow(i as u32 + 1)).collect();
    let c = newton_coefficients(&s)?;
    let weight = hodge_weight(&plan.params) + 2 * plan.twist.tate;
    let d = plan.degree;
    let mut status = if s.len() > d {
        if !c[d + 1].is_zero() {
            return Err(Error::Polynomiality(format!("block {} has T^{} coefficient {}", plan.name, d + 1, c[d + 1])));
        }
        BlockStatus::PolynomialityChecked
    } else if s.len() == d {
        BlockStatus::Complete
    } else {
        BlockStatus::Truncated { through: s.len() }
    };
    let mut poly = IntPoly::new(c[..=s.len().min(d)].to_vec());
    if let BlockStatus::Truncated { through } = status {
        if let Some(full) = complete_by_functional_equation(&c, d, q, weight) {
            poly = full;
            status = BlockStatus::Completed { through };
        }
    }
    let mut twist = plan.twist;
    twist.sign = sign;
    let join = |v: &[Rational64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    let provenance = format!(
        "{} = H({}; {}) character {:?}, Tate {}, sign {:+}",
        plan.name,
        join(plan.params.alpha()),
        join(plan.params.beta()),
        twist.character,
        twist.tate,
        twist.sign
    );
    Ok(BlockReport {
        name: plan.name.into(),
        l: LResult { poly: LPolynomial::new(poly, q, weight, provenance), power_sums: s, status },
        multiplicity: plan.multiplicity,
    })
}

fn truncate(p: &IntPoly, k: usize) -> IntPoly {
    IntPoly::new(p.coeffs().iter().take(k + 1).cloned().collect())
}

fn check_field(q: u64) -> Result<()> {
    if q % 4 != 1 {
        return Err(Error::Unsupported(format!("q = {q} is not split in Q(i); only q ≡ 1 mod 4 is assembled")));
    }
    Ok(())
}

fn smooth(pencil: Pencil, psi: u64, f: &FieldTable) -> Result<bool> {
    let spec = PencilSpec::deformed(pencil.matrix(), psi as u32);
    is_smooth_fiber(&spec, f, &CountOptions::default())
}

fn plans(pencil: Pencil, psi: u64) -> Vec<BlockPlan> {
    let mut v = vec![
        BlockPlan { name: "R", params: r_block(), degree: 3, twist: Twist::NONE, multiplicity: 1 },
        BlockPlan {
            name: "phi(-1)",
            params: minus_one_block(),
            degree: 2,
            twist: Twist::new(Character::MinusOne, 1),
            multiplicity: if pencil == Pencil::F4 { 3 } else { 1 },
        },
    ];
    match pencil {
        Pencil::F4 => v.push(BlockPlan {
            name: "Q(i)",
            params: gaussian_block(),
            degree: 1,
            twist: Twist::new(Character::SqrtMinusOne, 1),
            // six copies at each of the two primes above q
            multiplicity: 12,
        }),
        Pencil::L2L2 => v.push(BlockPlan {
            name: "Q(i) octic",
            params: octic_block(),
            degree: 4,
            twist: Twist::new(Character::SqrtMinusOnePsi(psi), 1),
            multiplicity: 2,
        }),
    }
    v
}

fn assemble(
    pencil: Pencil,
    psi: u64,
    cache: &mut ExtensionCache,
    calibration: &Calibration,
    tol: &Tolerance,
) -> Result<ZetaReport> {
    let q = cache.p();
    check_field(q)?;
    let psi = psi % q;
    let t = argument(psi, q, calibration.orientation)?;
    if !smooth(pencil, psi, &cache.level(1)?.0)? {
        return Err(Error::SingularMember(format!("{} at psi = {psi} over F_{q}", pencil.name())));
    }
    if t == 1 {
        // singular points may live over an extension only
        return Err(Error::SingularMember(format!("{} at psi = {psi}: psi^4 = 1", pencil.name())));
    }
    let mut blocks = Vec::new();
    for (i, plan) in plans(pencil, psi).iter().enumerate() {
        let raw = raw_power_sums(plan, t, cache, tol)?;
        let sign = calibration.signs.get(i).copied().unwrap_or(1);
        blocks.push(block_from_sums(plan, &raw, sign, q)?);
    }
    let mut notes = Vec::new();
    let mut full = IntPoly::one();
    let mut reach = usize::MAX;
    if pencil == Pencil::L2L2 {
        // ζ_{Q(i)}(s−1)^4 at a split prime
        full = IntPoly::linear(-BigInt::from(q)).pow(8);
        notes.push(String::from("Dedekind block (1 - qT)^8"));
    }
    let mut complete = true;
    for b in &blocks {
        full = &full * &b.l.poly.poly.pow(b.multiplicity);
        match b.l.status {
            BlockStatus::Truncated { through } => {
                complete = false;
                reach = reach.min(through);
                notes.push(format!("block {} determined through T^{through} only (field cap)", b.name));
            }
            BlockStatus::Completed { through } => {
                reach = reach.min(through);
                notes.push(format!(
                    "block {} verified through T^{through} (r <= {through}); higher coefficients from the functional equation",
                    b.name
                ));
            }
            _ => {}
        }
    }
    let px_truncated = if reach == usize::MAX { full.clone() } else { truncate(&full, reach) };
    let (px, factors, weil_ok) = if complete {
        let factors = factor_weil(&full, q);
        let ok = factors.iter().all(|w| weil_magnitudes_ok(&w.poly, q, 2, 1e-6));
        (Some(LPolynomial::new(full, q, 2, format!("{} pencil, psi = {psi}", pencil.name()))), factors, ok)
    } else {
        (None, Vec::new(), false)
    };
    Ok(ZetaReport { pencil, q, psi, t, smooth: true, px, px_truncated, blocks, factors, weil_ok, notes })
}

/// Zeta numerator of the Fermat quartic pencil over a prime `q ≡ 1 mod 4`.
pub fn assemble_px_f4(
    psi: u64,
    cache: &mut ExtensionCache,
    calibration: &Calibration,
    tol: &Tolerance,
) -> Result<ZetaReport> {
    assemble(Pencil::F4, psi, cache, calibration, tol)
}

/// Zeta numerator of the `L2L2` pencil over a prime `q ≡ 1 mod 4`.
pub fn assemble_px_l2l2(
    psi: u64,
    cache: &mut ExtensionCache,
    calibration: &Calibration,
    tol: &Tolerance,
) -> Result<ZetaReport> {
    assemble(Pencil::L2L2, psi, cache, calibration, tol)
}

/// Fix the orientation and block signs from one `F4` row with known `P_X`.
/// Returns every matching convention, the preferred one first.
pub fn calibrate_signs(
    psi: u64,
    target: &IntPoly,
    cache: &mut ExtensionCache,
    tol: &Tolerance,
) -> Result<Vec<Calibration>> {
    let q = cache.p();
    check_field(q)?;
    let mut found = Vec::new();
    for orientation in [Orientation::Inverse, Orientation::Direct] {
        let t = argument(psi % q, q, orientation)?;
        let plans = plans(Pencil::F4, psi);
        let raw: Vec<Vec<BigInt>> = plans.iter().map(|p| raw_power_sums(p, t, cache, tol)).collect::<Result<_>>()?;
        for mask in 0..8u8 {
            let signs = [0, 1, 2].map(|i| if mask >> i & 1 == 1 { -1i8 } else { 1 });
            let mut full = IntPoly::one();
            for (i, plan) in plans.iter().enumerate() {
                let b = block_from_sums(plan, &raw[i], signs[i], q)?;
                full = &full * &b.l.poly.poly.pow(b.multiplicity);
            }
            if &full == target {
                found.push(Calibration { orientation, signs });
            }
        }
    }
    Ok(found)
}

/// `#X(F_q) = 1 + q + q² − c₁(P_X)` for a K3 quartic.
pub fn trace_count(px: &IntPoly, q: u64) -> BigInt {
    let q = BigInt::from(q);
    BigInt::one() + &q + &q * &q - px.coeff(1)
}

/// Compare the assembled `P_X` with a direct projective count.
pub fn trace_check(report: &ZetaReport, f: &FieldTable) -> Result<bool> {
    let px = report.px.as_ref().ok_or_else(|| Error::Unsupported(String::from("P_X not fully determined")))?;
    if f.q() != report.q {
        return Err(Error::Parameters(format!("field F_{} does not match q = {}", f.q(), report.q)));
    }
    let spec = PencilSpec::deformed(report.pencil.matrix(), report.psi as u32);
    let count = count_projective(&spec, f, &CountOptions::default())?;
    Ok(BigInt::from(count.count) == trace_count(&px.poly, report.q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(c: i64) -> IntPoly {
        IntPoly::linear(BigInt::from(c))
    }

    fn quad(a: i64, q: i64) -> IntPoly {
        IntPoly::from_i64s(&[1, a, q * q])
    }

    #[test]
    fn weights() {
        assert_eq!(hodge_weight(&r_block()), 2);
        assert_eq!(hodge_weight(&minus_one_block()), 0);
        assert_eq!(hodge_weight(&gaussian_block()), 0);
        assert_eq!(hodge_weight(&octic_block()), 0);
        assert_eq!(hodge_weight(&params(&[(1, 2), (1, 2)], &[(0, 1), (0, 1)])), 1);
    }

    #[test]
    fn small_field_f4_and_l2l2() {
        let q = 41u64;
        let f = FieldTable::new(q, 1).unwrap();
        let mut cache = ExtensionCache::new(q);
        let tol = Tolerance::default();
        let cal = Calibration::default();
        let mut done = 0;
        for psi in 1..q {
            let Ok(a) = assemble_px_f4(psi, &mut cache, &cal, &tol) else { continue };
            let b = assemble_px_l2l2(psi, &mut cache, &cal, &tol).unwrap();
            for rep in [&a, &b] {
                let px = rep.px.as_ref().unwrap();
                assert_eq!(px.degree(), 21);
                assert!(rep.weil_ok, "{psi}");
                assert!(trace_check(rep, &f).unwrap(), "{:?} {psi}", rep.pencil);
                assert!(rep
                    .blocks
                    .iter()
                    .all(|b| b.l.status == BlockStatus::PolynomialityChecked || b.l.status == BlockStatus::Complete));
            }
            let r = &a.blocks[0].l.poly.poly;
            let g = super::super::common_factor(&a.px.as_ref().unwrap().poly, &b.px.as_ref().unwrap().poly);
            assert!(g.div_exact(r).is_some());
            done += 1;
        }
        assert!(done > 30);
    }

    #[test]
    fn table_rows_at_281() {
        let q = 281i64;
        let mut cache = ExtensionCache::new(q as u64);
        let tol = Tolerance::default();
        let target = lin(-q).pow(19) * quad(78, q);
        let cal = calibrate_signs(3, &target, &mut cache, &tol).unwrap();
        assert_eq!(cal, vec![Calibration::default()]);
        let cal = cal[0];
        let f4 = assemble_px_f4(3, &mut cache, &cal, &tol).unwrap();
        assert_eq!(f4.px.as_ref().unwrap().poly, target);
        let f4 = assemble_px_f4(10, &mut cache, &cal, &tol).unwrap();
        assert_eq!(f4.px.unwrap().poly, lin(-q).pow(5) * lin(q).pow(16));
        let f4 = assemble_px_f4(5, &mut cache, &cal, &tol).unwrap();
        assert_eq!(f4.px.unwrap().poly, lin(-q).pow(13) * lin(q).pow(6) * quad(418, q));
        let l = assemble_px_l2l2(4, &mut cache, &cal, &tol).unwrap();
        assert!(matches!(l.blocks[2].l.status, BlockStatus::Completed { through: 3 }));
        assert_eq!(l.px.unwrap().poly, lin(-q).pow(15) * lin(q).pow(4) * quad(-434, q));
        assert!(matches!(assemble_px_f4(1, &mut cache, &cal, &tol), Err(Error::SingularMember(_))));
        assert!(matches!(assemble_px_f4(0, &mut cache, &cal, &tol), Err(Error::ZeroArgument)));
    }

    #[test]
    fn inert_rejected() {
        let mut cache = ExtensionCache::new(43);
        let r = assemble_px_f4(2, &mut cache, &Calibration::default(), &Tolerance::default());
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn singular_only_over_extension() {
        use crate::counting::singular_points;
        // 5 has order 4 mod 13
        let spec = PencilSpec::deformed(Pencil::L2L2.matrix(), 5);
        let f13 = FieldTable::new(13, 1).unwrap();
        let f169 = FieldTable::new(13, 2).unwrap();
        assert_eq!(singular_points(&spec, &f13, &CountOptions::default()).unwrap(), 0);
        assert!(singular_points(&spec, &f169, &CountOptions::default()).unwrap() > 0);
        let mut cache = ExtensionCache::new(13);
        let r = assemble_px_l2l2(5, &mut cache, &Calibration::default(), &Tolerance::default());
        assert!(matches!(r, Err(Error::SingularMember(_))));
    }
}
