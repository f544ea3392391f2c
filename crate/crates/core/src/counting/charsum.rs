//! Counts from Gauss sums:
//!
//! `q N_f = sum_{Mk=0} q^(n+2-s) (q-1)^(s-n-2) prod G(k_j) chi(lambda)^(k_{n+2})`
//! `q N_g* = (q-1)^n + sum_{Nk=0} (q-1)^(-1) prod G(k_j) chi(lambda)^(k_{n+2})`
//!
//! Both sums are evaluated in `W[pi] / p^N` and pinned to integers using a
//! priori bounds on the counts.

use num_bigint::BigInt;
use num_traits::One;

use super::solutions::{mirror_solutions, pencil_solutions, SolutionVector};
use super::{count_y, CountError, DworkInstance};
use crate::ff::FieldCtx;
use crate::padic::{GaussSums, ModRing, Tower, TowerElem, MAX_MODULUS_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CharsumCounts {
    pub n_f: u128,
    pub n_gstar: u128,
    pub x: u128,
    pub y: u128,
    pub precision: u32,
}

/// Smallest N with `p^(N-r) > 2 max(#X bound, N_g* bound)`, where
/// `#X <= (q^(n+1)-1)/(q-1)` and `N_g* <= (q-1)^n`.
pub fn required_precision(n: usize, p: u64, r: u32) -> Result<u32, CountError> {
    let q = num_traits::pow(BigInt::from(p), r as usize);
    let x_bound: BigInt = (num_traits::pow(q.clone(), n + 1) - 1) / (&q - 1);
    let g_bound: BigInt = num_traits::pow(&q - 1, n);
    let bound = BigInt::from(2) * x_bound.max(g_bound);
    let mut extra = 0u32;
    let mut pk = BigInt::one();
    while pk <= bound {
        pk *= p;
        extra += 1;
    }
    let needed = r + extra;
    let max_bits = (p as f64).log2() * needed as f64;
    if max_bits > MAX_MODULUS_BITS as f64 || ModRing::new(p, needed).is_err() {
        return Err(CountError::PrecisionInsufficient { needed });
    }
    Ok(needed)
}

fn gauss_product(
    sums: &GaussSums<'_>,
    sol: &SolutionVector,
    chi_lambda: Option<u64>,
) -> Result<TowerElem, CountError> {
    let tower = sums.tower();
    let mut acc = tower.one();
    for &kj in &sol.k {
        acc = tower.mul(&acc, &sums.get(kj)?);
    }
    if let Some(dl) = chi_lambda {
        let order = sums.field().q() - 1;
        let e = (dl as u128 * sol.last() as u128 % order as u128) as u64;
        if e != 0 {
            let chi = tower.from_unramified(&sums.teich().omega_pow(e));
            acc = tower.mul(&acc, &chi);
        }
    }
    Ok(acc)
}

/// Character-sum point counts for `inst` over `field`. The precision is
/// [`required_precision`] unless a larger one is supplied.
pub fn count_via_charsum(
    inst: &DworkInstance,
    field: &FieldCtx,
    precision: Option<u32>,
) -> Result<CharsumCounts, CountError> {
    let n = inst.n();
    let (p, r) = (field.p(), field.r());
    let prec = resolve_precision(n, p, r, precision)?;
    let tower = Tower::new(field, prec)?;
    let sums = GaussSums::new(&tower, field);
    let lambda_zero = inst.lambda().is_zero();
    let chi_lambda = if lambda_zero {
        None
    } else {
        Some(field.dlog(inst.lambda())?)
    };
    assemble(&tower, n, r, field.q(), lambda_zero, |sol| {
        gauss_product(&sums, sol, chi_lambda)
    })
}

/// Counts of the Fermat member (`lambda = 0`) over the degree-k extension
/// of `base`, using only Gauss sums of `base`. Every character that occurs
/// is then a character of `base` composed with the norm, and
/// Hasse-Davenport gives `G_{q^k}(chi o N) = -(-G_q(chi))^k`.
pub fn count_fermat_lifted(
    n: usize,
    base: &FieldCtx,
    k: u32,
    precision: Option<u32>,
) -> Result<CharsumCounts, CountError> {
    if n < 2 {
        return Err(CountError::BadDimension(n));
    }
    let (p, r, q) = (base.p(), base.r(), base.q());
    let big_q = (q as u128)
        .checked_pow(k)
        .filter(|&v| v <= u64::MAX as u128)
        .ok_or(CountError::PrecisionInsufficient { needed: r * k })? as u64;
    let prec = resolve_precision(n, p, r * k, precision)?;
    let tower = Tower::new(base, prec)?;
    let sums = GaussSums::new(&tower, base);
    let norm_exp = (big_q - 1) / (q - 1);
    let lifted = |kj: u64| -> Result<TowerElem, CountError> {
        if kj == 0 {
            return Ok(tower.from_residue(tower.ring().from_u128(big_q as u128 - 1)));
        }
        if kj == big_q - 1 {
            return Ok(tower.from_int(-(big_q as i128)));
        }
        if !kj.is_multiple_of(norm_exp) {
            return Err(CountError::NotLiftable {
                k: kj,
                field: big_q,
            });
        }
        let g = tower.neg(&sums.get(kj / norm_exp)?);
        Ok(tower.neg(&tower.pow(&g, k as u128)))
    };
    assemble(&tower, n, r * k, big_q, true, |sol| {
        let mut acc = tower.one();
        for &kj in &sol.k {
            acc = tower.mul(&acc, &lifted(kj)?);
        }
        Ok(acc)
    })
}

fn resolve_precision(n: usize, p: u64, r: u32, precision: Option<u32>) -> Result<u32, CountError> {
    let needed = required_precision(n, p, r)?;
    match precision {
        Some(np) if np < needed => Err(CountError::PrecisionInsufficient { needed }),
        Some(np) => Ok(np),
        None => Ok(needed),
    }
}

/// Sum both character formulas over a field of `q = p^r` elements, with
/// `product` giving the Gauss-sum product (and lambda twist) of a solution,
/// then pin the results to integers.
fn assemble<F>(
    tower: &Tower,
    n: usize,
    r: u32,
    q: u64,
    lambda_zero: bool,
    mut product: F,
) -> Result<CharsumCounts, CountError>
where
    F: FnMut(&SolutionVector) -> Result<TowerElem, CountError>,
{
    let ring = *tower.ring();
    let p = tower.p();
    let prec = tower.precision();
    let qm1_inv = ring.inv((q - 1) as u128).expect("q - 1 is a unit");
    let q_res = ring.from_u128(q as u128);

    let mut pencil = tower.zero();
    for sol in pencil_solutions(n, q, lambda_zero) {
        let prod = product(&sol)?;
        // q^(n+2-s) (q-1)^(s-n-2)
        let gap = (n + 2 - sol.support) as u128;
        let coeff = ring.mul(ring.pow(q_res, gap), ring.pow(qm1_inv, gap));
        tower.add_assign(&mut pencil, &tower.scale(&prod, coeff));
    }

    let mut mirror = tower.from_residue(ring.pow((q - 1) as u128, n as u128));
    for sol in mirror_solutions(n, q, lambda_zero) {
        let prod = product(&sol)?;
        tower.add_assign(&mut mirror, &tower.scale(&prod, qm1_inv));
    }

    let coarse = ModRing::new(p, prec - r)?;
    let pr = (p as u128).pow(r);
    let pin = |value: &TowerElem, what: &str| -> Result<u128, CountError> {
        let a = tower
            .as_rational(value)
            .ok_or_else(|| CountError::NonIntegralResult(format!("{what} has irrational part")))?;
        if a % pr != 0 {
            return Err(CountError::NonIntegralResult(format!(
                "{what} is not divisible by q"
            )));
        }
        Ok(coarse.from_u128(a / pr))
    };
    let nf_mod = pin(&pencil, "q N_f")?;
    let ng_mod = pin(&mirror, "q N_g*")?;
    let coarse_inv = coarse.inv((q - 1) as u128).expect("unit");
    let x = coarse.mul(coarse.sub(nf_mod, 1 % coarse.modulus()), coarse_inv);
    let half = coarse.modulus() / 2;
    if x > half {
        return Err(CountError::NonIntegralResult(format!(
            "#X residue {x} above bound"
        )));
    }
    if ng_mod > half {
        return Err(CountError::NonIntegralResult(format!(
            "N_g* residue {ng_mod} above bound"
        )));
    }
    let n_f = 1 + (q as u128 - 1) * x;
    let y = count_y(ng_mod, q, n)?;
    Ok(CharsumCounts {
        n_f,
        n_gstar: ng_mod,
        x,
        y,
        precision: prec,
    })
}

#[cfg(test)]
/// Contribution of the trivial mirror solutions, `(-1)^n/(q-1)`, as an
/// element of `Z/p^N`; used to check the assembled trivial part.
pub(crate) fn trivial_mirror_part(sums: &GaussSums<'_>, n: usize) -> Result<u128, CountError> {
    let tower = sums.tower();
    let ring = *tower.ring();
    let q = sums.field().q();
    let qm1_inv = ring.inv((q - 1) as u128).expect("unit");
    let mut acc = tower.zero();
    for sol in mirror_solutions(n, q, false) {
        if sol.k.iter().all(|&x| x == 0 || x == q - 1) {
            let prod = gauss_product(sums, &sol, None)?;
            tower.add_assign(&mut acc, &tower.scale(&prod, qm1_inv));
        }
    }
    tower
        .as_rational(&acc)
        .ok_or_else(|| CountError::NonIntegralResult("trivial part".into()))
}
