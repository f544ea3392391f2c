//! Residues modulo `p^N` with `p^N <= 2^126`.

use super::PadicError;

/// Largest admissible modulus exponent in bits.
pub const MAX_MODULUS_BITS: u32 = 126;

/// The ring `Z / p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModRing {
    p: u64,
    n: u32,
    m: u128,
}

impl ModRing {
    pub fn new(p: u64, n: u32) -> Result<Self, PadicError> {
        if n == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let m = (p as u128)
            .checked_pow(n)
            .filter(|&m| m <= 1u128 << MAX_MODULUS_BITS)
            .ok_or(PadicError::PrecisionTooLarge { p, n })?;
        Ok(ModRing { p, n, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u128 {
        self.m
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            a + (self.m - b)
        }
    }

    #[inline]
    pub fn neg(&self, a: u128) -> u128 {
        if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        if self.m <= 1u128 << 64 {
            // both operands fit in 64 bits
            return (a * b) % self.m;
        }
        let (mut x, mut y) = if a < b { (b, a) } else { (a, b) };
        let mut acc = 0u128;
        while y > 0 {
            if y & 1 == 1 {
                acc = self.add(acc, x);
            }
            x = self.add(x, x);
            y >>= 1;
        }
        acc
    }

    pub fn pow(&self, mut a: u128, mut e: u128) -> u128 {
        let mut acc = 1 % self.m;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn from_u128(&self, a: u128) -> u128 {
        a % self.m
    }

    pub fn from_i128(&self, a: i128) -> u128 {
        let m = self.m as i128;
        a.rem_euclid(m) as u128
    }

    /// Image of an arbitrary-precision integer.
    pub fn from_bigint(&self, a: &num_bigint::BigInt) -> u128 {
        use num_traits::ToPrimitive;
        let m = num_bigint::BigInt::from(self.m);
        let r = ((a % &m) + &m) % &m;
        r.to_u128().expect("reduced residue fits")
    }

    /// Representative in `(-p^N/2, p^N/2]`.
    pub fn to_signed(&self, a: u128) -> i128 {
        if a > self.m / 2 {
            -((self.m - a) as i128)
        } else {
            a as i128
        }
    }

    /// Inverse of a unit.
    pub fn inv(&self, a: u128) -> Option<u128> {
        let a = a % self.m;
        if a.is_multiple_of(self.p as u128) {
            return None;
        }
        let m = self.m as i128;
        let (mut old_r, mut r) = (a as i128, m);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let quot = old_r / r;
            (old_r, r) = (r, old_r - quot * r);
            (old_s, s) = (s, old_s - quot * s);
        }
        debug_assert_eq!(old_r, 1);
        Some(old_s.rem_euclid(m) as u128)
    }

    /// `v_p(a)`, capped at N for zero.
    pub fn vp(&self, mut a: u128) -> u32 {
        if a == 0 {
            return self.n;
        }
        let p = self.p as u128;
        let mut v = 0;
        while a.is_multiple_of(p) {
            a /= p;
            v += 1;
        }
        v
    }

    /// Reduce into a coarser ring `Z / p^M`, `M <= N`.
    pub fn truncate_to(&self, a: u128, coarser: &ModRing) -> u128 {
        debug_assert!(coarser.n <= self.n && coarser.p == self.p);
        a % coarser.m
    }
}
