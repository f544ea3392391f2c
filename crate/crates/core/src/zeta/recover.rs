//! Numerator recovery from power sums of reciprocal roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::roots::{weight_purity_check, DEFAULT_PURITY_TOL};
use super::{IntPoly, ZetaError};

/// Coefficients `c_0 = 1, c_1, ..., c_m` of `prod (1 - beta_j T)` from the
/// first m power sums, by Newton's identities `k c_k = -sum s_j c_(k-j)`.
pub fn newton_coefficients(power_sums: &[BigInt]) -> Result<Vec<BigInt>, ZetaError> {
    let mut c = vec![BigInt::one()];
    for k in 1..=power_sums.len() {
        let acc: BigInt = (1..=k).map(|j| &power_sums[j - 1] * &c[k - j]).sum();
        let (quot, rem) = (-acc).div_rem(&BigInt::from(k));
        if !rem.is_zero() {
            return Err(ZetaError::NonIntegralCoefficient(k));
        }
        c.push(quot);
    }
    Ok(c)
}

/// Fill `c_i` for `i > d/2` from `c_(d-i) q^(w(i - d/2))` times `sign`,
/// checking every coefficient already known. None when the known
/// coefficients contradict the equation or a power of q is fractional.
fn complete_with_sign(
    head: &[BigInt],
    degree: usize,
    weight: u32,
    q: u64,
    sign: i8,
) -> Option<IntPoly> {
    let qb = BigInt::from(q);
    let mut coeffs = Vec::with_capacity(degree + 1);
    for i in 0..=degree {
        if 2 * i < degree {
            coeffs.push(head[i].clone());
            continue;
        }
        if 2 * i == degree {
            // the middle coefficient is its own mirror image
            if sign < 0 && !head[i].is_zero() {
                return None;
            }
            coeffs.push(head[i].clone());
            continue;
        }
        let twice_exp = weight as usize * (2 * i - degree);
        if !twice_exp.is_multiple_of(2) {
            return None;
        }
        let mirrored = &coeffs[degree - i];
        let mut value: BigInt = mirrored * num_traits::pow(qb.clone(), twice_exp / 2);
        if sign < 0 {
            value = -value;
        }
        if let Some(known) = head.get(i) {
            if *known != value {
                return None;
            }
        }
        coeffs.push(value);
    }
    IntPoly::new(coeffs).ok()
}

/// The integer polynomial of the given degree whose reciprocal roots have
/// the given power sums. With `use_functional_equation`, coefficients past
/// the middle come from the functional equation of a pure polynomial of
/// weight `w`, with the sign chosen by integrality, purity, the Weil bound
/// and agreement with every supplied power sum.
pub fn recover_numerator(
    power_sums: &[BigInt],
    degree: usize,
    weight: u32,
    q: u64,
    use_functional_equation: bool,
) -> Result<IntPoly, ZetaError> {
    let m = power_sums.len();
    if degree == 0 {
        if let Some(k) = power_sums.iter().position(|s| !s.is_zero()) {
            return Err(ZetaError::InconsistentCounts { k: k + 1 });
        }
        return Ok(IntPoly::one());
    }
    let need = if use_functional_equation {
        degree.div_ceil(2)
    } else {
        degree
    };
    if m < need {
        return Err(ZetaError::InsufficientData { have: m, need });
    }
    let known = m.min(degree);
    let head = newton_coefficients(&power_sums[..known])?;
    if !use_functional_equation {
        let p = IntPoly::new(head)?;
        return match first_mismatch(&p, power_sums) {
            Some(k) => Err(ZetaError::InconsistentCounts { k }),
            None => Ok(p),
        };
    }
    let mut accepted: Vec<IntPoly> = Vec::new();
    for sign in [1i8, -1] {
        let Some(p) = complete_with_sign(&head, degree, weight, q, sign) else {
            continue;
        };
        if first_mismatch(&p, power_sums).is_some() || !p.within_weil_bound(q, weight) {
            continue;
        }
        let pure = weight_purity_check(&p, q, weight, DEFAULT_PURITY_TOL).is_ok_and(|r| r.passed);
        if pure && !accepted.contains(&p) {
            accepted.push(p);
        }
    }
    match accepted.len() {
        0 => Err(ZetaError::NoConsistentSign),
        1 => Ok(accepted.pop().expect("one candidate")),
        _ => Err(ZetaError::AmbiguousSign),
    }
}

fn first_mismatch(p: &IntPoly, power_sums: &[BigInt]) -> Option<usize> {
    p.power_sums(power_sums.len())
        .iter()
        .zip(power_sums)
        .position(|(a, b)| a != b)
        .map(|i| i + 1)
}
