//! Exhaustive point counts. These are the oracles for the character-sum
//! formulas, so they share nothing with them beyond field arithmetic.

use num_bigint::BigInt;
use num_integer::binomial;

use super::{CountError, DworkInstance};
use crate::ff::{FieldCtx, FqElem};

/// Default cap on enumerated points.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 34;

/// Largest q for which the q x q last-coordinate table is built.
const TABLE_LIMIT: u64 = 2048;

fn check_cap(work: u128, cap: u128) -> Result<(), CountError> {
    if work > cap {
        Err(CountError::EnumerationTooLarge { work, cap })
    } else {
        Ok(())
    }
}

fn power_u128(q: u64, e: usize) -> u128 {
    (q as u128).saturating_pow(e as u32)
}

/// Walk all tuples in `values^depth`, threading a running sum and product.
fn walk<F: FnMut(FqElem, FqElem)>(
    field: &FieldCtx,
    values: &[FqElem],
    weight: &dyn Fn(FqElem) -> FqElem,
    depth: usize,
    sum: FqElem,
    prod: FqElem,
    leaf: &mut F,
) {
    if depth == 0 {
        leaf(sum, prod);
        return;
    }
    for &x in values {
        walk(
            field,
            values,
            weight,
            depth - 1,
            field.add(sum, weight(x)),
            field.mul(prod, x),
            leaf,
        );
    }
}

/// Number of zeros of the pencil polynomial in affine (n+1)-space.
pub fn count_affine_brute(
    inst: &DworkInstance,
    field: &FieldCtx,
    cap: u128,
) -> Result<u128, CountError> {
    let n = inst.n();
    let q = field.q();
    check_cap(power_u128(q, n + 1), cap)?;
    let deg = n as u64 + 1;
    let elems: Vec<FqElem> = field.elements().collect();
    let pw: Vec<FqElem> = elems.iter().map(|&a| field.pow(a, deg)).collect();
    let weight = |a: FqElem| pw[a.code() as usize];
    let lambda = inst.lambda();
    let mut total = 0u128;
    if q <= TABLE_LIMIT {
        // table[c][v] = #{y : y^(n+1) + c y = v}
        let qs = q as usize;
        let mut table = vec![0u32; qs * qs];
        for &c in &elems {
            for &y in &elems {
                let v = field.add(pw[y.code() as usize], field.mul(c, y));
                table[c.code() as usize * qs + v.code() as usize] += 1;
            }
        }
        walk(
            field,
            &elems,
            &weight,
            n,
            FqElem::ZERO,
            FqElem::ONE,
            &mut |s, prod| {
                let c = field.mul(lambda, prod);
                let v = field.neg(s);
                total += table[c.code() as usize * qs + v.code() as usize] as u128;
            },
        );
    } else {
        walk(
            field,
            &elems,
            &weight,
            n,
            FqElem::ZERO,
            FqElem::ONE,
            &mut |s, prod| {
                let c = field.mul(lambda, prod);
                for &y in &elems {
                    let v = field.add(field.add(s, pw[y.code() as usize]), field.mul(c, y));
                    if v.is_zero() {
                        total += 1;
                    }
                }
            },
        );
    }
    Ok(total)
}

/// Number of zeros of the mirror Laurent polynomial in the torus `G_m^n`.
pub fn count_torus_brute(
    inst: &DworkInstance,
    field: &FieldCtx,
    cap: u128,
) -> Result<u128, CountError> {
    let n = inst.n();
    let q = field.q();
    check_cap(power_u128(q - 1, n), cap)?;
    let units: Vec<FqElem> = field.elements().skip(1).collect();
    let ident = |a: FqElem| a;
    let lambda = inst.lambda();
    let mut total = 0u128;
    let inv = |a: FqElem| field.inv(a).expect("unit");
    if q <= TABLE_LIMIT {
        // table[P][v] = #{y != 0 : y + 1/(P y) = v}
        let qs = q as usize;
        let mut table = vec![0u32; qs * qs];
        for &pr in &units {
            for &y in &units {
                let v = field.add(y, inv(field.mul(pr, y)));
                table[pr.code() as usize * qs + v.code() as usize] += 1;
            }
        }
        walk(
            field,
            &units,
            &ident,
            n - 1,
            FqElem::ZERO,
            FqElem::ONE,
            &mut |s, prod| {
                let v = field.neg(field.add(s, lambda));
                total += table[prod.code() as usize * qs + v.code() as usize] as u128;
            },
        );
    } else {
        walk(
            field,
            &units,
            &ident,
            n - 1,
            FqElem::ZERO,
            FqElem::ONE,
            &mut |s, prod| {
                let base = field.add(s, lambda);
                for &y in &units {
                    let v = field.add(field.add(base, y), inv(field.mul(prod, y)));
                    if v.is_zero() {
                        total += 1;
                    }
                }
            },
        );
    }
    Ok(total)
}

/// Projective count over normalised representatives (first nonzero
/// coordinate equal to 1), evaluating the pencil polynomial directly.
pub fn count_projective_brute(
    inst: &DworkInstance,
    field: &FieldCtx,
    cap: u128,
) -> Result<u128, CountError> {
    let n = inst.n();
    let q = field.q();
    check_cap(power_u128(q, n) * 2, cap)?;
    let deg = n as u64 + 1;
    let elems: Vec<FqElem> = field.elements().collect();
    let mut total = 0u128;
    let qs = elems.len() as u128;
    for lead in 0..=n {
        let free = n - lead;
        for idx in 0..qs.pow(free as u32) {
            let mut rest = idx;
            let mut sum = FqElem::ONE;
            let mut prod = FqElem::ONE;
            for _ in 0..free {
                let x = elems[(rest % qs) as usize];
                rest /= qs;
                sum = field.add(sum, field.pow(x, deg));
                prod = field.mul(prod, x);
            }
            // coordinates before the leading one vanish
            if lead > 0 {
                prod = FqElem::ZERO;
            }
            if field.add(sum, field.mul(inst.lambda(), prod)).is_zero() {
                total += 1;
            }
        }
    }
    Ok(total)
}

/// `#{y in G_m^d : 1 + y_1 + ... + y_d = 0}` by enumeration.
pub fn diagonal_torus_count(d: usize, field: &FieldCtx, cap: u128) -> Result<u128, CountError> {
    let q = field.q();
    check_cap(power_u128(q - 1, d), cap)?;
    let units: Vec<FqElem> = field.elements().skip(1).collect();
    let ident = |a: FqElem| a;
    let mut total = 0u128;
    walk(
        field,
        &units,
        &ident,
        d,
        FqElem::ONE,
        FqElem::ONE,
        &mut |s, _| {
            if s.is_zero() {
                total += 1;
            }
        },
    );
    Ok(total)
}

/// `#Y` assembled orbit by orbit: the open torus contributes N_g*, each
/// proper face of dimension d >= 1 (there are C(n+1, d+1) of them)
/// contributes the zeros of the sum of its d+1 vertex monomials, and the
/// vertices contribute nothing.
pub fn count_y_by_strata(
    inst: &DworkInstance,
    field: &FieldCtx,
    cap: u128,
) -> Result<u128, CountError> {
    let n = inst.n();
    let mut total = count_torus_brute(inst, field, cap)?;
    for d in 1..n {
        let faces = binomial(n as u128 + 1, d as u128 + 1);
        total += faces * diagonal_torus_count(d, field, cap)?;
    }
    Ok(total)
}

/// Both sides of `sum_faces ((q-1)^dim + (-1)^(dim+1)) = q (q^n - 1)/(q - 1)`,
/// summing over all faces of the n-simplex including itself.
pub fn stratum_identity_sides(n: usize, q: u64) -> (BigInt, BigInt) {
    let qb = BigInt::from(q);
    let mut lhs = BigInt::from(0);
    for d in 0..=n {
        let faces = BigInt::from(binomial(n as u64 + 1, d as u64 + 1));
        let sign = if d % 2 == 0 { -1 } else { 1 };
        lhs += faces * (num_traits::pow(&qb - 1, d) + BigInt::from(sign));
    }
    let rhs = &qb * (num_traits::pow(qb.clone(), n) - 1) / (&qb - 1);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{count_x, count_y};
    use crate::ff::build_field;

    const CAP: u128 = DEFAULT_ENUMERATION_CAP;

    #[test]
    fn fermat_cubic_small_fields() {
        let f2 = build_field(2, 1, 0).unwrap();
        let inst = DworkInstance::new(2, FqElem::ZERO).unwrap();
        assert_eq!(count_affine_brute(&inst, &f2, CAP).unwrap(), 4);
        let f4 = build_field(2, 2, 0).unwrap();
        let nf = count_affine_brute(&inst, &f4, CAP).unwrap();
        assert_eq!(nf, 28);
        assert_eq!(count_x(nf, 4).unwrap(), 9);
    }

    #[test]
    fn origin_always_counts() {
        let f = build_field(5, 1, 0).unwrap();
        for l in f.elements() {
            let inst = DworkInstance::new(3, l).unwrap();
            assert!(count_affine_brute(&inst, &f, CAP).unwrap() >= 1);
        }
    }

    #[test]
    fn torus_small_cases() {
        let f2 = build_field(2, 1, 0).unwrap();
        let inst = DworkInstance::new(2, FqElem::ZERO).unwrap();
        assert_eq!(count_torus_brute(&inst, &f2, CAP).unwrap(), 0);
        assert_eq!(count_y(0, 2, 2).unwrap(), 3);

        // over GF(3), x + y + 1/(xy) takes the values 0, 2, 2, 2 at
        // (1,1), (1,2), (2,1), (2,2)
        let f3 = build_field(3, 1, 0).unwrap();
        let inst = DworkInstance::new(2, FqElem::ONE).unwrap();
        assert_eq!(count_torus_brute(&inst, &f3, CAP).unwrap(), 3);
        let inst = DworkInstance::new(2, f3.from_int(2)).unwrap();
        assert_eq!(count_torus_brute(&inst, &f3, CAP).unwrap(), 0);

        let f4 = build_field(2, 2, 0).unwrap();
        let inst = DworkInstance::new(3, FqElem::ZERO).unwrap();
        assert!(count_torus_brute(&inst, &f4, CAP).unwrap() <= 27);
    }

    #[test]
    fn projective_enumeration_agrees() {
        for (p, r, n) in [(5, 1, 3), (2, 2, 2), (3, 2, 2), (7, 1, 2), (3, 1, 4)] {
            let f = build_field(p, r, 0).unwrap();
            for l in f.elements() {
                let inst = DworkInstance::new(n, l).unwrap();
                let nf = count_affine_brute(&inst, &f, CAP).unwrap();
                let direct = count_projective_brute(&inst, &f, CAP).unwrap();
                assert_eq!(count_x(nf, f.q()).unwrap(), direct, "p={p} r={r} n={n}");
            }
        }
    }

    #[test]
    fn strata_match_closed_form() {
        for (p, r, n) in [(7, 1, 3), (3, 1, 2), (2, 2, 3), (5, 1, 2)] {
            let f = build_field(p, r, 0).unwrap();
            for l in f.elements() {
                let inst = DworkInstance::new(n, l).unwrap();
                let ng = count_torus_brute(&inst, &f, CAP).unwrap();
                let by_formula = count_y(ng, f.q(), n).unwrap();
                assert_eq!(count_y_by_strata(&inst, &f, CAP).unwrap(), by_formula);
            }
        }
    }

    #[test]
    fn hyperplane_in_torus_closed_form() {
        let f = build_field(7, 1, 0).unwrap();
        for d in 1..4 {
            let expect = ((6i128.pow(d as u32) + if d % 2 == 0 { -1 } else { 1 }) / 7) as u128;
            assert_eq!(diagonal_torus_count(d, &f, CAP).unwrap(), expect);
        }
    }

    #[test]
    fn stratum_identity() {
        for n in 1..=6 {
            for q in [2u64, 3, 4, 5, 7, 8, 9, 49] {
                let (l, r) = stratum_identity_sides(n, q);
                assert_eq!(l, r, "n={n} q={q}");
            }
        }
    }

    #[test]
    fn enumeration_cap() {
        let f = build_field(7, 1, 0).unwrap();
        let inst = DworkInstance::new(4, FqElem::ONE).unwrap();
        assert!(matches!(
            count_affine_brute(&inst, &f, 1000),
            Err(CountError::EnumerationTooLarge { .. })
        ));
    }
}
