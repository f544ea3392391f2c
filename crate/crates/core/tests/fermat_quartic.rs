//! The Fermat quartic surface over F_5, end to end from lifted counts.

use mirror_zeta::counting::{count_fermat_lifted, count_via_charsum, DworkInstance};
use mirror_zeta::ff::{build_field, FieldCtx, FqElem};
use mirror_zeta::slope::{
    mul_mod, newton_polygon, reduce_mod, slope_part, slope_zeta, Slope, SlopeInterval,
};
use mirror_zeta::zeta::{
    r_poly, recover_zeta, sign_root_deviation, IntPoly, Variety, ZetaData, ZetaShape,
};
use num_bigint::BigInt;

// #X(F_25) was cross-checked by enumerating fourth-power sums over F_5[s]/(s^2 - 2).
const X_COUNTS: [u64; 5] = [0, 1112, 15360, 402072, 9753600];
const Y_COUNTS: [u64; 4] = [30, 662, 16110, 390822];
const Q: [i64; 4] = [1, 1, -5, -125];

fn f5() -> FieldCtx {
    build_field(5, 1, 0).expect("F_5")
}

fn recovered(variety: Variety, m: u32) -> ZetaData {
    let base = f5();
    let counts: Vec<BigInt> = (1..=m)
        .map(|k| {
            let c = count_fermat_lifted(3, &base, k, None).expect("lifted count");
            BigInt::from(if variety == Variety::X { c.x } else { c.y })
        })
        .collect();
    recover_zeta(&ZetaShape::new(variety, 3), 5, 1, None, &counts, true).expect("recovery")
}

#[test]
fn lifted_counts_match_frozen_values() {
    let base = f5();
    for k in 1..=5u32 {
        let c = count_fermat_lifted(3, &base, k, None).unwrap();
        assert_eq!(c.x, u128::from(X_COUNTS[k as usize - 1]), "X over F_5^{k}");
        if k <= 4 {
            assert_eq!(c.y, u128::from(Y_COUNTS[k as usize - 1]), "Y over F_5^{k}");
        }
    }
}

#[test]
fn lifted_counts_agree_with_extension_tables() {
    let base = f5();
    let inst = DworkInstance::new(3, FqElem::ZERO).unwrap();
    for k in 1..=4 {
        let ext = base.extend(k).unwrap();
        let direct = count_via_charsum(&inst, &ext.field, None).unwrap();
        assert_eq!(
            direct,
            count_fermat_lifted(3, &base, k, None).unwrap(),
            "k={k}"
        );
    }
}

#[test]
fn q_divides_p_and_r_has_unit_roots() {
    let p = recovered(Variety::X, 12);
    let q = recovered(Variety::Y, 4);
    assert_eq!(p.numerator.degree(), 21);
    assert_eq!(q.numerator, IntPoly::from_i64(&Q).unwrap());
    let r = r_poly(&p.numerator, &q.numerator, 5).unwrap();
    assert_eq!(r.degree(), 18);
    assert!(sign_root_deviation(&r).unwrap() < 1e-8);
}

#[test]
fn slope_parts_multiply_back() {
    let p = recovered(Variety::X, 12);
    let segments = newton_polygon(&p.numerator, 5, 1).segments();
    assert!(!segments.is_empty());
    let mut product = vec![BigInt::from(1)];
    for i in 0..3 {
        let interval = SlopeInterval::half_open(Slope::from(i), Slope::from(i + 1));
        let part = slope_part(&p.numerator, 5, 1, interval, 20).unwrap();
        product = mul_mod(&product, &part.coefficients, 5, 20);
    }
    assert_eq!(product, reduce_mod(&p.numerator, 5, 20));
    assert!(!slope_zeta(&p).is_one());
}
