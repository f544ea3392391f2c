//! Slope factorisation of integer polynomials over the p-adic integers.
//!
//! A polynomial `P = A B` with A collecting the reciprocal roots of small
//! slope is split by alternating
//! `A <- P / B mod T^(m+1)` (power series, B has constant term 1) and
//! `B <- P div A` (division from the top), in floating p-adic arithmetic
//! with guard digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use super::polygon::{newton_polygon, Slope};
use super::SlopeError;
use crate::zeta::IntPoly;

/// `[lo, hi)` or `[lo, hi]` in `ord_q` units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SlopeInterval {
    #[serde(serialize_with = "ser_slope")]
    pub lo: Slope,
    #[serde(serialize_with = "ser_slope")]
    pub hi: Slope,
    pub closed: bool,
}

fn ser_slope<S: serde::Serializer>(s: &Slope, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&format!("{}/{}", s.numer(), s.denom()))
}

impl SlopeInterval {
    pub fn half_open(lo: Slope, hi: Slope) -> Self {
        SlopeInterval {
            lo,
            hi,
            closed: false,
        }
    }

    pub fn closed(lo: Slope, hi: Slope) -> Self {
        SlopeInterval {
            lo,
            hi,
            closed: true,
        }
    }

    pub fn contains(&self, s: Slope) -> bool {
        s >= self.lo && (s < self.hi || (self.closed && s == self.hi))
    }
}

/// The factor of P whose reciprocal roots have slope in `interval`,
/// as residues modulo `p^precision`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicFactor {
    pub interval: SlopeInterval,
    pub p: u64,
    pub precision: u32,
    #[serde(with = "crate::decimal::vec")]
    pub coefficients: Vec<BigInt>,
}

impl PadicFactor {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Floating p-adic number `p^v u` with u a unit known mod `p^W`.
#[derive(Debug, Clone)]
struct Qp {
    v: i64,
    u: BigInt,
}

struct Arith {
    p: BigInt,
    modulus: BigInt,
}

impl Arith {
    fn new(p: u64, digits: u32) -> Self {
        let pb = BigInt::from(p);
        let modulus = num_traits::pow(pb.clone(), digits as usize);
        Arith { p: pb, modulus }
    }

    fn zero(&self) -> Qp {
        Qp {
            v: 0,
            u: BigInt::zero(),
        }
    }

    fn normalize(&self, mut v: i64, u: BigInt) -> Qp {
        let mut u = u.mod_floor(&self.modulus);
        if u.is_zero() {
            return self.zero();
        }
        loop {
            let (q, r) = u.div_rem(&self.p);
            if !r.is_zero() {
                break;
            }
            u = q;
            v += 1;
        }
        Qp { v, u }
    }

    fn lift(&self, c: &BigInt) -> Qp {
        self.normalize(0, c.clone())
    }

    fn pow_p(&self, e: i64) -> BigInt {
        num_traits::pow(self.p.clone(), e as usize)
    }

    fn add(&self, a: &Qp, b: &Qp) -> Qp {
        if a.u.is_zero() {
            return b.clone();
        }
        if b.u.is_zero() {
            return a.clone();
        }
        let v = a.v.min(b.v);
        let sum = &a.u * self.pow_p(a.v - v) + &b.u * self.pow_p(b.v - v);
        self.normalize(v, sum)
    }

    fn neg(&self, a: &Qp) -> Qp {
        Qp {
            v: a.v,
            u: (-&a.u).mod_floor(&self.modulus),
        }
    }

    fn sub(&self, a: &Qp, b: &Qp) -> Qp {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Qp, b: &Qp) -> Qp {
        if a.u.is_zero() || b.u.is_zero() {
            return self.zero();
        }
        Qp {
            v: a.v + b.v,
            u: (&a.u * &b.u).mod_floor(&self.modulus),
        }
    }

    fn div(&self, a: &Qp, b: &Qp) -> Qp {
        if a.u.is_zero() {
            return self.zero();
        }
        let inv = b.u.modinv(&self.modulus).expect("unit part is invertible");
        Qp {
            v: a.v - b.v,
            u: (&a.u * inv).mod_floor(&self.modulus),
        }
    }

    /// Residue mod `p^n`, or None when the value is not integral.
    fn residue(&self, a: &Qp, n: u32) -> Option<BigInt> {
        if a.u.is_zero() {
            return Some(BigInt::zero());
        }
        if a.v < 0 {
            return None;
        }
        let m = num_traits::pow(self.p.clone(), n as usize);
        Some((&a.u * self.pow_p(a.v)).mod_floor(&m))
    }
}

/// Power-series quotient `num / den mod T^len`, den with constant term 1.
fn series_div(ar: &Arith, num: &[Qp], den: &[Qp], len: usize) -> Vec<Qp> {
    let mut out: Vec<Qp> = Vec::with_capacity(len);
    for i in 0..len {
        let mut v = num.get(i).cloned().unwrap_or_else(|| ar.zero());
        for j in 1..=i.min(den.len() - 1) {
            v = ar.sub(&v, &ar.mul(&den[j], &out[i - j]));
        }
        out.push(v);
    }
    out
}

/// Quotient of `num` by `den` from the top, of degree `deg num - deg den`.
fn top_div(ar: &Arith, num: &[Qp], den: &[Qp]) -> Vec<Qp> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    let mut rem: Vec<Qp> = num.to_vec();
    let mut quot = vec![ar.zero(); dn - dd + 1];
    let lead = &den[dd];
    for i in (0..=dn - dd).rev() {
        let c = ar.div(&rem[i + dd], lead);
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] = ar.sub(&rem[i + j], &ar.mul(&c, dc));
        }
        quot[i] = c;
    }
    quot
}

fn residues(ar: &Arith, poly: &[Qp], n: u32) -> Option<Vec<BigInt>> {
    poly.iter().map(|c| ar.residue(c, n)).collect()
}

/// Split `P = A B` with `deg A = m` carrying the m smallest slopes.
fn split(
    ar: &Arith,
    poly: &[Qp],
    m: usize,
    precision: u32,
) -> Result<(Vec<Qp>, Vec<Qp>), SlopeError> {
    let d = poly.len() - 1;
    if m == 0 {
        let mut one = vec![ar.zero()];
        one[0] = ar.lift(&BigInt::one());
        return Ok((one, poly.to_vec()));
    }
    if m == d {
        return Ok((poly.to_vec(), vec![ar.lift(&BigInt::one())]));
    }
    let max_iter = 4 * precision as usize;
    let mut b = vec![ar.lift(&BigInt::one())];
    let mut last: Option<(Vec<BigInt>, Vec<BigInt>)> = None;
    for _ in 0..max_iter {
        let a = series_div(ar, poly, &b, m + 1);
        let next_b = top_div(ar, poly, &a);
        let key = (
            residues(ar, &a, precision),
            residues(ar, &next_b, precision),
        );
        b = next_b;
        if let (Some(ra), Some(rb)) = key {
            if last.as_ref() == Some(&(ra.clone(), rb.clone())) {
                return Ok((a, b));
            }
            last = Some((ra, rb));
        } else {
            last = None;
        }
    }
    Err(SlopeError::PrecisionTooLow {
        iterations: max_iter,
    })
}

/// The slope part of `poly` for `interval`, modulo `p^precision`.
pub fn slope_part(
    poly: &IntPoly,
    p: u64,
    r: u32,
    interval: SlopeInterval,
    precision: u32,
) -> Result<PadicFactor, SlopeError> {
    if precision == 0 {
        return Err(SlopeError::ZeroPrecision);
    }
    let np = newton_polygon(poly, p, r);
    let slopes = np.slope_list();
    let below = slopes.iter().filter(|&&s| s < interval.lo).count();
    let upto = slopes
        .iter()
        .filter(|&&s| s < interval.lo || interval.contains(s))
        .count();
    let modulus = num_traits::pow(BigInt::from(p), precision as usize);
    let one_factor = |coefficients| PadicFactor {
        interval,
        p,
        precision,
        coefficients,
    };
    if upto <= below {
        return Ok(one_factor(vec![BigInt::one()]));
    }
    // guard digits cover the valuation of the leading coefficients divided by
    let total_height: i64 = slopes
        .iter()
        .map(|s| (s * r as i64).ceil().to_integer())
        .sum();
    let guard = 2 * total_height.max(0) as u32 + 2 * slopes.len() as u32 + 8;
    let ar = Arith::new(p, precision + guard);
    let coeffs: Vec<Qp> = poly.coeffs().iter().map(|c| ar.lift(c)).collect();
    let (low, _) = split(&ar, &coeffs, upto, precision)?;
    let (_, part) = split(&ar, &low, below, precision)?;
    let coefficients = residues(&ar, &part, precision).ok_or(SlopeError::NonIntegralFactor)?;
    debug_assert!(coefficients[0] == BigInt::one() % &modulus);
    Ok(one_factor(coefficients))
}

/// Product of residue polynomials modulo `p^n`.
pub fn mul_mod(a: &[BigInt], b: &[BigInt], p: u64, n: u32) -> Vec<BigInt> {
    let m = num_traits::pow(BigInt::from(p), n as usize);
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + x * y).mod_floor(&m);
        }
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// `poly` reduced coefficientwise modulo `p^n`.
pub fn reduce_mod(poly: &IntPoly, p: u64, n: u32) -> Vec<BigInt> {
    let m = num_traits::pow(BigInt::from(p), n as usize);
    let mut out: Vec<BigInt> = poly.coeffs().iter().map(|c| c.mod_floor(&m)).collect();
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Evaluate a residue polynomial at `x` modulo `p^n`.
pub fn eval_mod(poly: &[BigInt], x: &BigInt, p: u64, n: u32) -> BigInt {
    let m = num_traits::pow(BigInt::from(p), n as usize);
    poly.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(&m))
}

/// The unit root of `1 - a T + q T^2` (p not dividing a) by Hensel
/// lifting `x^2 - a x + q = 0` from `x = a`.
pub fn unit_root(a: i64, q: u64, p: u64, n: u32) -> BigInt {
    let m = num_traits::pow(BigInt::from(p), n as usize);
    let a = BigInt::from(a);
    let qb = BigInt::from(q);
    let mut x = a.mod_floor(&m);
    for _ in 0..=n {
        let f = (&x * &x - &a * &x + &qb).mod_floor(&m);
        let df = (BigInt::from(2) * &x - &a).mod_floor(&m);
        let inv = df.modinv(&m).expect("simple unit root");
        x = (&x - f * inv).mod_floor(&m);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c).unwrap()
    }

    fn half_open(lo: i64, hi: i64) -> SlopeInterval {
        SlopeInterval::half_open(Slope::from(lo), Slope::from(hi))
    }

    #[test]
    fn ordinary_elliptic_unit_root() {
        // 1 - 3T + 7T^2 over F_7
        let n = 12;
        let f = slope_part(&poly(&[1, -3, 7]), 7, 1, half_open(0, 1), n).unwrap();
        assert_eq!(f.degree(), 1);
        let u = unit_root(3, 7, 7, n);
        let m = num_traits::pow(BigInt::from(7), n as usize);
        // factor is 1 - u T
        assert_eq!(f.coefficients[1], (-&u).mod_floor(&m));
        // P(1/u) = 0 mod p^N
        let inv = u.modinv(&m).unwrap();
        assert!(eval_mod(&reduce_mod(&poly(&[1, -3, 7]), 7, n), &inv, 7, n).is_zero());
    }

    #[test]
    fn single_slope_and_empty_interval() {
        let p = poly(&[1, 0, 5]);
        let whole = slope_part(
            &p,
            5,
            1,
            SlopeInterval::closed(Slope::from(0), Slope::from(1)),
            8,
        )
        .unwrap();
        assert_eq!(whole.coefficients, reduce_mod(&p, 5, 8));
        let none = slope_part(&p, 5, 1, half_open(0, 0), 8).unwrap();
        assert_eq!(none.coefficients, vec![BigInt::one()]);
        let none = slope_part(&p, 5, 1, half_open(1, 2), 8).unwrap();
        assert_eq!(none.coefficients, vec![BigInt::one()]);
    }

    #[test]
    fn unit_intervals_multiply_back() {
        // slopes 0, 1/2, 1/2, 1, 2 over p = 3
        let p = poly(&[1, -2])
            .mul(&poly(&[1, 0, 3]))
            .mul(&poly(&[1, -3]))
            .mul(&poly(&[1, 9]));
        let n = 10;
        let mut prod = vec![BigInt::one()];
        for i in 0..3 {
            let f = slope_part(&p, 3, 1, half_open(i, i + 1), n).unwrap();
            prod = mul_mod(&prod, &f.coefficients, 3, n);
        }
        assert_eq!(prod, reduce_mod(&p, 3, n));
        let mid = slope_part(&p, 3, 1, half_open(0, 1), n).unwrap();
        assert_eq!(mid.degree(), 3);
    }
}
