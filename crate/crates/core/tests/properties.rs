use bhkzeta_core::counting::{count_affine_bruteforce, count_affine_lastvar, CountOptions, PencilSpec};
use bhkzeta_core::ff::{FieldTable, GaussSumTable};
use bhkzeta_core::hypergeom::{hyper_sum_classic, HypergeometricParameters, Tolerance};
use bhkzeta_core::intpoly::IntPoly;
use bhkzeta_core::invertible::ExponentMatrix;
use bhkzeta_core::zeta::{factor_weil, newton_coefficients, power_sums};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn f81() -> &'static FieldTable {
    static F: OnceLock<FieldTable> = OnceLock::new();
    F.get_or_init(|| FieldTable::new(3, 4).unwrap())
}

proptest! {
    #[test]
    fn field_axioms(a in 0u32..81, b in 0u32..81, c in 0u32..81) {
        let f = f81();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.exp(f.log(a).unwrap() as u64), a);
        }
    }

    #[test]
    fn newton_round_trip(c in proptest::collection::vec(-50i64..50, 1..7)) {
        let mut coeffs = vec![BigInt::from(1)];
        coeffs.extend(c.iter().map(|&x| BigInt::from(x)));
        let s = power_sums(&coeffs, c.len());
        prop_assert_eq!(newton_coefficients(&s).unwrap(), coeffs);
    }

    #[test]
    fn division_inverts_product(a in proptest::collection::vec(-20i64..20, 1..6), b in proptest::collection::vec(-20i64..20, 1..5)) {
        let a = IntPoly::from_i64s(&a);
        let mut b = b;
        b[0] = 1;
        let b = IntPoly::from_i64s(&b);
        let ab = &a * &b;
        prop_assert_eq!(ab.div_exact(&b), Some(a));
    }

    #[test]
    fn weil_products_factor(k in 0u32..4, j in 0u32..4, a in -10i64..=10) {
        let q = 5i64;
        let p = IntPoly::from_i64s(&[1, -q]).pow(k) * IntPoly::from_i64s(&[1, q]).pow(j) * IntPoly::from_i64s(&[1, a, q * q]);
        let mut back = IntPoly::one();
        for w in factor_weil(&p, q as u64) {
            back = &back * &w.poly.pow(w.multiplicity);
        }
        prop_assert_eq!(back, p);
    }
}

#[test]
fn gauss_tables_agree() {
    for (p, r) in [(5u64, 1u32), (3, 2), (7, 2), (31, 1)] {
        let f = FieldTable::new(p, r).unwrap();
        let fft = GaussSumTable::new(&f).unwrap();
        let direct = GaussSumTable::direct(&f).unwrap();
        for (a, b) in fft.values().iter().zip(direct.values()) {
            assert!((a - b).norm() < 1e-9 * f.q() as f64);
        }
    }
}

#[test]
fn random_sums_are_stable_across_gauss_tables() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = FieldTable::new(73, 1).unwrap();
    let fft = GaussSumTable::new(&f).unwrap();
    let direct = GaussSumTable::direct(&f).unwrap();
    let h = HypergeometricParameters::from_pairs(&[(1, 3), (2, 3)], &[(0, 1), (1, 2)]).unwrap();
    for _ in 0..20 {
        let t = rng.gen_range(1..73u32);
        let a = hyper_sum_classic(&h, t, &f, &fft, &Tolerance::default()).unwrap();
        let b = hyper_sum_classic(&h, t, &f, &direct, &Tolerance::default()).unwrap();
        assert_eq!(a.exact, b.exact);
    }
}

#[test]
fn counting_methods_agree_on_random_diagonals() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = CountOptions::default();
    for _ in 0..10 {
        let exps: Vec<u32> = (0..3).map(|_| rng.gen_range(2..7)).collect();
        let spec = PencilSpec::new(ExponentMatrix::diagonal(&exps));
        let f = FieldTable::new([7u64, 11, 13][rng.gen_range(0..3)], 1).unwrap();
        let a = count_affine_bruteforce(&spec, &f, &opts).unwrap().count;
        let b = count_affine_lastvar(&spec, &f, &opts).unwrap().count;
        assert_eq!(a, b, "{exps:?} over F_{}", f.q());
    }
}
