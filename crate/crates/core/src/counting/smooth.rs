//! Singularity search for members of the pencil.
//!
//! A singular point has `(n+1) x_i^n = -lambda prod_{j != i} x_j` for every
//! i. When p does not divide n+1 these force all `x_i != 0`, and taking the
//! product of `(n+1) x_i^(n+1) = -lambda prod x` over i shows the member is
//! singular exactly when `(-lambda)^(n+1) = (n+1)^(n+1)`. That criterion is
//! reported next to the literal condition `lambda^n != (n+1)^(n+1)` and the
//! outcome of an exhaustive search over small extensions.

use serde::Serialize;

use super::{CountError, DworkInstance};
use crate::ff::{FieldCtx, FqElem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Smooth,
    Singular,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessReport {
    pub verdict: Smoothness,
    /// Extension degree and coordinates (element codes) of a singular point.
    pub singular_point: Option<(u32, Vec<u32>)>,
    pub searched_up_to: u32,
    /// `lambda^n != (n+1)^(n+1)`, read literally.
    pub printed_condition: bool,
    /// `(-lambda)^(n+1) != (n+1)^(n+1)`; None when p divides n+1.
    pub jacobian_condition: Option<bool>,
}

/// Search for singular points over `GF(q^s)`, `s <= k_max`.
pub fn smoothness_probe(
    inst: &DworkInstance,
    base: &FieldCtx,
    k_max: u32,
    cap: u128,
) -> Result<SmoothnessReport, CountError> {
    let n = inst.n();
    let deg = n as u64 + 1;
    let lambda = inst.lambda();
    let n1 = base.from_int(deg as i64);
    let target = base.pow(n1, deg);
    let printed_condition = base.pow(lambda, n as u64) != target;
    let jacobian_condition = if n1.is_zero() {
        None
    } else {
        Some(base.pow(base.neg(lambda), deg) != target)
    };

    let work: u128 = (1..=k_max)
        .map(|s| (base.q() as u128).saturating_pow(s * n as u32))
        .sum();
    if work > cap {
        return Err(CountError::EnumerationTooLarge { work, cap });
    }

    let mut singular_point = None;
    for s in 1..=k_max {
        let ext = base.extend(s)?;
        let f = &ext.field;
        let lam = ext.embed(lambda);
        if let Some(pt) = find_singular(f, n, lam) {
            singular_point = Some((s, pt.iter().map(|e| e.code()).collect()));
            break;
        }
    }
    let verdict = match (&singular_point, jacobian_condition) {
        (Some(_), _) | (None, Some(false)) => Smoothness::Singular,
        (None, Some(true)) => Smoothness::Smooth,
        (None, None) => Smoothness::Unknown,
    };
    Ok(SmoothnessReport {
        verdict,
        singular_point,
        searched_up_to: k_max,
        printed_condition,
        jacobian_condition,
    })
}

fn find_singular(f: &FieldCtx, n: usize, lambda: FqElem) -> Option<Vec<FqElem>> {
    let deg = n as u64 + 1;
    let n1 = f.from_int(deg as i64);
    let elems: Vec<FqElem> = f.elements().collect();
    let qs = elems.len() as u128;
    let mut pt = vec![FqElem::ZERO; n + 1];
    for lead in 0..=n {
        let free = n - lead;
        for idx in 0..qs.pow(free as u32) {
            for c in pt.iter_mut() {
                *c = FqElem::ZERO;
            }
            pt[lead] = FqElem::ONE;
            let mut rest = idx;
            for slot in pt.iter_mut().skip(lead + 1) {
                *slot = elems[(rest % qs) as usize];
                rest /= qs;
            }
            let prod_all = pt.iter().fold(FqElem::ONE, |a, &x| f.mul(a, x));
            let value = pt
                .iter()
                .fold(f.mul(lambda, prod_all), |a, &x| f.add(a, f.pow(x, deg)));
            if !value.is_zero() {
                continue;
            }
            let critical = (0..=n).all(|i| {
                let others = pt
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .fold(FqElem::ONE, |a, (_, &x)| f.mul(a, x));
                let d = f.add(f.mul(n1, f.pow(pt[i], n as u64)), f.mul(lambda, others));
                d.is_zero()
            });
            if critical {
                return Some(pt.clone());
            }
        }
    }
    None
}
