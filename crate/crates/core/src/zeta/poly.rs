//! Integer polynomials with constant term 1.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ZetaError;

/// `1 + c_1 T + ... + c_d T^d` over Z, stored lowest degree first with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPoly {
    #[serde(with = "crate::decimal::vec")]
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self, ZetaError> {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.first() != Some(&BigInt::one()) {
            return Err(ZetaError::ConstantTermNotOne);
        }
        Ok(IntPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self, ZetaError> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out).expect("product of constant-one polynomials")
    }

    /// `1 - a T`.
    pub fn linear(a: &BigInt) -> IntPoly {
        IntPoly::new(vec![BigInt::one(), -a]).expect("constant one")
    }

    /// `P(c T)`.
    pub fn scale_variable(&self, c: &BigInt) -> IntPoly {
        let mut pow = BigInt::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| {
                let v = a * &pow;
                pow *= c;
                v
            })
            .collect();
        IntPoly::new(coeffs).expect("constant term unchanged")
    }

    /// Power sums `s_k = sum beta_j^k` of the reciprocal roots, `k = 1..=m`.
    pub fn power_sums(&self, m: usize) -> Vec<BigInt> {
        let mut s: Vec<BigInt> = Vec::with_capacity(m);
        for k in 1..=m {
            // k c_k = -sum_{j=1}^{k} s_j c_{k-j}
            let mut acc = -BigInt::from(k) * self.coeff(k);
            for j in 1..k {
                acc -= &s[j - 1] * self.coeff(k - j);
            }
            s.push(acc);
        }
        s
    }

    /// `|c_i| <= C(d, i) q^(w i / 2)` for every i.
    pub fn within_weil_bound(&self, q: u64, weight: u32) -> bool {
        let d = self.degree() as u64;
        let qb = BigInt::from(q);
        self.coeffs.iter().enumerate().all(|(i, c)| {
            let binom = BigInt::from(num_integer::binomial(d as u128, i as u128));
            let bound_sq = &binom * &binom * num_traits::pow(qb.clone(), weight as usize * i);
            c * c <= bound_sq
        })
    }

    /// Exact quotient `self / divisor` if it exists in Z[T].
    pub fn divide(&self, divisor: &IntPoly) -> Option<IntPoly> {
        if divisor.degree() > self.degree() {
            return None;
        }
        let qdeg = self.degree() - divisor.degree();
        // power-series division; the divisor has constant term 1
        let mut quot: Vec<BigInt> = Vec::with_capacity(qdeg + 1);
        for i in 0..=qdeg {
            let mut v = self.coeff(i);
            for j in 1..=i.min(divisor.degree()) {
                v -= divisor.coeff(j) * &quot[i - j];
            }
            quot.push(v);
        }
        let candidate = IntPoly::new(quot).ok()?;
        (candidate.mul(divisor) == *self).then_some(candidate)
    }

    /// Divide out `(1 - T)` and `(1 + T)` as often as possible; returns
    /// their multiplicities and the cofactor.
    pub fn strip_unit_signs(&self) -> (usize, usize, IntPoly) {
        let minus = IntPoly::linear(&BigInt::one());
        let plus = IntPoly::linear(&-BigInt::one());
        let mut cur = self.clone();
        let mut a = 0;
        while let Some(next) = cur.divide(&minus) {
            cur = next;
            a += 1;
        }
        let mut b = 0;
        while let Some(next) = cur.divide(&plus) {
            cur = next;
            b += 1;
        }
        (a, b, cur)
    }

    pub fn content_divisible_by(&self, i: usize, d: &BigInt) -> bool {
        self.coeff(i).is_multiple_of(d)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "T")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Quotient `P/Q`, or [`ZetaError::NotDivisible`].
pub fn divide_check(p: &IntPoly, q: &IntPoly) -> Result<IntPoly, ZetaError> {
    p.divide(q).ok_or(ZetaError::NotDivisible)
}

/// Given `P/Q = R(qT)`, return R, checking each coefficient of the
/// quotient is divisible by the matching power of q.
pub fn r_poly(p: &IntPoly, q_poly: &IntPoly, q: u64) -> Result<IntPoly, ZetaError> {
    let quotient = divide_check(p, q_poly)?;
    let qb = BigInt::from(q);
    let mut pow = BigInt::one();
    let mut coeffs = Vec::with_capacity(quotient.degree() + 1);
    for (i, c) in quotient.coeffs().iter().enumerate() {
        let (d, m) = c.div_rem(&pow);
        if !m.is_zero() {
            return Err(ZetaError::SubstitutionNotIntegral(i));
        }
        coeffs.push(d);
        pow *= &qb;
    }
    IntPoly::new(coeffs)
}
