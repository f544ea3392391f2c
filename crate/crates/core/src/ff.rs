//! Finite fields GF(p^r) with full discrete-log tables.
//!
//! Elements are stored as a single integer code: the base-p digits of the code
//! are the coordinates of the element in the power basis `1, x, ..., x^(r-1)`
//! of `GF(p)[x]/(modulus)`. Multiplication goes through the log/antilog
//! tables; addition is digitwise, or through the Zech table when the operands
//! are already in log form.

use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

/// Largest field order for which tables are built unless overridden.
pub const DEFAULT_FIELD_CAP: u64 = 1 << 26;

/// Marker used in log-domain arithmetic for the zero element.
pub const LOG_ZERO: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {q} exceeds the table cap {cap}")]
    FieldTooLarge { q: u128, cap: u64 },
    #[error("degree must be positive")]
    ZeroDegree,
    #[error("discrete logarithm of zero")]
    LogOfZero,
    #[error("no root of the base modulus found in the extension")]
    NoEmbedding,
}

/// `q = p^r` together with its factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimePower {
    p: u32,
    r: u32,
    q: u64,
}

impl PrimePower {
    pub fn new(p: u64, r: u32) -> Result<Self, FfError> {
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        if r == 0 {
            return Err(FfError::ZeroDegree);
        }
        let q = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
        if q > u64::MAX as u128 || p > u32::MAX as u64 {
            return Err(FfError::FieldTooLarge { q, cap: u64::MAX });
        }
        Ok(PrimePower {
            p: p as u32,
            r,
            q: q as u64,
        })
    }

    pub fn p(&self) -> u64 {
        self.p as u64
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.r)
        }
    }
}

/// Trial division; fields here are desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of a [`FieldCtx`], encoded by its base-p coordinate digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    pub fn from_code(code: u32) -> Self {
        FqElem(code)
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

// Dense polynomials over GF(p), lowest degree first, no trailing zeros.
mod fp_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let c = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            for (i, &mi) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (c * mi) % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn pow_mod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mul_mod(&result, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&result, m, p)
    }

    fn inv_mod_p(a: u64, p: u64) -> u64 {
        let mut result = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        result
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let inv = inv_mod_p(*b.last().unwrap(), p);
            let monic: Vec<u64> = b.iter().map(|&c| c * inv % p).collect();
            let r = rem(&a, &monic, p);
            a = monic;
            b = r;
        }
        a
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }
}

/// Rabin's irreducibility test for a monic polynomial of degree `r` over GF(p).
pub fn is_irreducible(modulus: &[u64], p: u64) -> bool {
    let r = modulus.len() - 1;
    if r == 1 {
        return true;
    }
    if modulus[0] == 0 {
        return false;
    }
    let x = vec![0u64, 1];
    let pr = |k: usize| (p as u128).pow(k as u32);
    let full = fp_poly::pow_mod(&x, pr(r), modulus, p);
    if fp_poly::sub(&full, &x, p) != Vec::<u64>::new() {
        return false;
    }
    for l in prime_factors(r as u64) {
        let h = fp_poly::pow_mod(&x, pr(r / l as usize), modulus, p);
        let diff = fp_poly::sub(&h, &x, p);
        let g = fp_poly::gcd(modulus, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// A concrete model of GF(p^r) with log, antilog, trace and Zech tables.
#[derive(Clone)]
pub struct FieldCtx {
    pp: PrimePower,
    seed: u64,
    modulus: Vec<u64>,
    generator: FqElem,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    zech: OnceLock<Vec<u32>>,
    digit_pow: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("q", &self.pp.to_string())
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

/// Build GF(p^r) under the default table cap.
pub fn build_field(p: u64, r: u32, seed: u64) -> Result<FieldCtx, FfError> {
    build_field_with_cap(p, r, seed, DEFAULT_FIELD_CAP)
}

pub fn build_field_with_cap(p: u64, r: u32, seed: u64, cap: u64) -> Result<FieldCtx, FfError> {
    if !is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    if r == 0 {
        return Err(FfError::ZeroDegree);
    }
    let q = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
    if q > cap as u128 || q > u32::MAX as u128 {
        return Err(FfError::FieldTooLarge { q, cap });
    }
    let pp = PrimePower::new(p, r)?;
    let modulus = find_modulus(p, r, seed);
    FieldCtx::from_modulus(pp, seed, modulus)
}

/// First monic irreducible polynomial of degree r, scanning the lower
/// coefficient codes cyclically from `seed`.
fn find_modulus(p: u64, r: u32, seed: u64) -> Vec<u64> {
    let q = p.pow(r);
    for step in 0..q {
        let code = (seed % q + step) % q;
        let mut m: Vec<u64> = digits(code, p, r as usize);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut code: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(code % p);
        code /= p;
    }
    out
}

impl FieldCtx {
    fn from_modulus(pp: PrimePower, seed: u64, modulus: Vec<u64>) -> Result<Self, FfError> {
        let p = pp.p();
        let r = pp.r() as usize;
        let q = pp.q();
        let digit_pow: Vec<u32> = (0..r).map(|i| p.pow(i as u32) as u32).collect();
        let encode = |v: &[u64]| -> u32 {
            v.iter()
                .enumerate()
                .map(|(i, &d)| d as u32 * digit_pow[i])
                .sum()
        };
        let order = q - 1;
        let factors = prime_factors(order);
        let is_generator = |cand: &[u64]| -> bool {
            if cand.iter().all(|&c| c == 0) {
                return false;
            }
            factors.iter().all(|&l| {
                let e = fp_poly::pow_mod(cand, (order / l) as u128, &modulus, p);
                e != vec![1u64]
            })
        };
        // x first (cheap multiplication when primitive), then codes in order
        let mut candidates: Vec<u64> = Vec::new();
        if r > 1 {
            candidates.push(p);
        }
        candidates.extend(1..q);
        let mut generator = None;
        for c in candidates {
            let poly = {
                let mut d = digits(c, p, r);
                fp_poly::trim(&mut d);
                d
            };
            if q == 2 || is_generator(&poly) {
                generator = Some(c);
                break;
            }
        }
        let generator = generator.expect("cyclic group has a generator");
        let gen_digits = digits(generator, p, r);
        let gen_is_x = r > 1 && generator == p;

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![LOG_ZERO; q as usize];
        let mut cur = vec![0u64; r];
        cur[0] = 1;
        for j in 0..order {
            let code = encode(&cur);
            exp.push(code);
            log[code as usize] = j as u32;
            cur = if gen_is_x {
                mul_by_x(&cur, &modulus, p)
            } else {
                let mut prod = fp_poly::mul_mod(&cur, &gen_digits, &modulus, p);
                prod.resize(r, 0);
                prod
            };
        }

        let mut ctx = FieldCtx {
            pp,
            seed,
            modulus,
            generator: FqElem(generator as u32),
            exp,
            log,
            trace: Vec::new(),
            zech: OnceLock::new(),
            digit_pow,
        };
        // the trace is GF(p)-linear, so tabulate it on the basis and extend
        let basis_trace: Vec<u32> = (0..r)
            .map(|i| ctx.trace_by_frobenius(FqElem(ctx.digit_pow[i])))
            .collect();
        let pu = p as u32;
        let trace: Vec<u32> = (0..q as u32)
            .map(|c| {
                let mut x = c;
                let mut t = 0u64;
                for &bt in &basis_trace {
                    t = (t + (x % pu) as u64 * bt as u64) % p;
                    x /= pu;
                }
                t as u32
            })
            .collect();
        ctx.trace = trace;
        Ok(ctx)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn p(&self) -> u64 {
        self.pp.p()
    }

    pub fn r(&self) -> u32 {
        self.pp.r()
    }

    pub fn q(&self) -> u64 {
        self.pp.q()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Monic modulus, lowest coefficient first (length r+1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> FqElem {
        self.generator
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q() as u32).map(FqElem)
    }

    pub fn coeffs(&self, a: FqElem) -> Vec<u64> {
        digits(a.0 as u64, self.p(), self.r() as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FqElem {
        let p = self.p();
        FqElem(
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| (c % p) as u32 * self.digit_pow[i])
                .sum(),
        )
    }

    /// Image of an integer under Z -> GF(p).
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p() as i64) as u32)
    }

    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.p() == 2 {
            return FqElem(a.0 ^ b.0);
        }
        let p = self.p() as u32;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        for &w in &self.digit_pow {
            out += ((x % p + y % p) % p) * w;
            x /= p;
            y /= p;
        }
        out.into()
    }

    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.p() as u32;
        let mut x = a.0;
        let mut out = 0u32;
        for &w in &self.digit_pow {
            out += ((p - x % p) % p) * w;
            x /= p;
        }
        FqElem(out)
    }

    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        FqElem(self.exp[(s % (self.q() - 1)) as usize])
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        let order = self.q() - 1;
        let l = self.log[a.0 as usize] as u64;
        Some(FqElem(self.exp[((order - l) % order) as usize]))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        if e == 0 {
            return FqElem::ONE;
        }
        if a.is_zero() {
            return FqElem::ZERO;
        }
        let order = self.q() - 1;
        let l = self.log[a.0 as usize] as u128;
        FqElem(self.exp[((l * e as u128) % order as u128) as usize])
    }

    /// `generator^j`.
    pub fn exp(&self, j: u64) -> FqElem {
        FqElem(self.exp[(j % (self.q() - 1)) as usize])
    }

    pub fn dlog(&self, a: FqElem) -> Result<u64, FfError> {
        if a.is_zero() {
            return Err(FfError::LogOfZero);
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    /// Absolute trace to GF(p), as an integer in [0, p).
    pub fn trace(&self, a: FqElem) -> u64 {
        self.trace[a.0 as usize] as u64
    }

    /// Trace of `generator^j`.
    pub fn trace_of_exp(&self, j: u64) -> u64 {
        self.trace[self.exp[(j % (self.q() - 1)) as usize] as usize] as u64
    }

    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.p())
    }

    fn trace_by_frobenius(&self, a: FqElem) -> u32 {
        let mut acc = FqElem::ZERO;
        let mut cur = a;
        for _ in 0..self.r() {
            acc = self.add(acc, cur);
            cur = self.frobenius(cur);
        }
        debug_assert!(acc.0 < self.p() as u32);
        acc.0
    }

    /// Log-domain element (or [`LOG_ZERO`]).
    pub fn to_log(&self, a: FqElem) -> u32 {
        self.log[a.0 as usize]
    }

    pub fn from_log(&self, l: u32) -> FqElem {
        if l == LOG_ZERO {
            FqElem::ZERO
        } else {
            FqElem(self.exp[l as usize])
        }
    }

    /// Addition of two log-domain elements through the Zech table.
    #[inline]
    pub fn log_add(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO {
            return b;
        }
        if b == LOG_ZERO {
            return a;
        }
        let order = (self.q() - 1) as u32;
        let diff = if b >= a { b - a } else { b + order - a };
        let z = self.zech_table()[diff as usize];
        if z == LOG_ZERO {
            LOG_ZERO
        } else {
            let s = a as u64 + z as u64;
            (s % order as u64) as u32
        }
    }

    /// `Z(j)` with `g^Z(j) = 1 + g^j`, built on first use.
    pub fn zech_table(&self) -> &[u32] {
        self.zech.get_or_init(|| {
            (0..(self.q() - 1) as u32)
                .map(|j| {
                    let s = self.add(FqElem(self.exp[j as usize]), FqElem::ONE);
                    self.log[s.0 as usize]
                })
                .collect()
        })
    }

    #[inline]
    pub fn log_mul(&self, a: u32, b: u32) -> u32 {
        if a == LOG_ZERO || b == LOG_ZERO {
            return LOG_ZERO;
        }
        ((a as u64 + b as u64) % (self.q() - 1)) as u32
    }

    /// Build GF(q^k) together with the embedding of this field into it.
    pub fn extend(&self, k: u32) -> Result<Extension, FfError> {
        self.extend_with_cap(k, DEFAULT_FIELD_CAP)
    }

    pub fn extend_with_cap(&self, k: u32, cap: u64) -> Result<Extension, FfError> {
        if k == 0 {
            return Err(FfError::ZeroDegree);
        }
        if k == 1 {
            return Ok(Extension {
                field: self.clone(),
                embed: self.elements().collect(),
                degree: 1,
            });
        }
        let big = build_field_with_cap(self.p(), self.r() * k, self.seed, cap)?;
        // Roots of the base modulus live in the subfield of order q, i.e. among
        // the powers of generator^((Q-1)/(q-1)) and zero.
        let step = (big.q() - 1) / (self.q() - 1);
        let mut beta = None;
        let subfield =
            std::iter::once(FqElem::ZERO).chain((0..self.q() - 1).map(|i| big.exp(i * step)));
        for cand in subfield {
            let mut acc = FqElem::ZERO;
            for &c in self.modulus.iter().rev() {
                acc = big.add(big.mul(acc, cand), big.from_int(c as i64));
            }
            if acc.is_zero() {
                beta = Some(cand);
                break;
            }
        }
        let beta = beta.ok_or(FfError::NoEmbedding)?;
        let r = self.r() as usize;
        let mut beta_pows = Vec::with_capacity(r);
        let mut cur = FqElem::ONE;
        for _ in 0..r {
            beta_pows.push(cur);
            cur = big.mul(cur, beta);
        }
        let embed = self
            .elements()
            .map(|a| {
                self.coeffs(a)
                    .iter()
                    .zip(&beta_pows)
                    .fold(FqElem::ZERO, |acc, (&c, &b)| {
                        big.add(acc, big.mul(big.from_int(c as i64), b))
                    })
            })
            .collect();
        Ok(Extension {
            field: big,
            embed,
            degree: k,
        })
    }
}

impl From<u32> for FqElem {
    fn from(c: u32) -> Self {
        FqElem(c)
    }
}

fn mul_by_x(cur: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let r = cur.len();
    let top = cur[r - 1];
    let mut out = vec![0u64; r];
    for i in (1..r).rev() {
        out[i] = cur[i - 1];
    }
    if top != 0 {
        for i in 0..r {
            out[i] = (out[i] + p - (top * modulus[i]) % p) % p;
        }
    }
    out
}

/// GF(q^k) with the field embedding of GF(q).
#[derive(Debug, Clone)]
pub struct Extension {
    pub field: FieldCtx,
    embed: Vec<FqElem>,
    degree: u32,
}

impl Extension {
    pub fn embed(&self, a: FqElem) -> FqElem {
        self.embed[a.code() as usize]
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_two() {
        let f = build_field(2, 1, 0).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.generator(), FqElem::ONE);
        assert_eq!(f.dlog(FqElem::ONE).unwrap(), 0);
    }

    #[test]
    fn rejects_composites_and_large_fields() {
        assert_eq!(build_field(9, 1, 0).unwrap_err(), FfError::NotPrime(9));
        assert!(matches!(
            build_field_with_cap(3, 10, 0, 1000),
            Err(FfError::FieldTooLarge {
                q: 59049,
                cap: 1000
            })
        ));
    }

    #[test]
    fn gf9_generator_order() {
        let f = build_field(3, 2, 0).unwrap();
        let g = f.generator();
        let mut cur = g;
        let mut ord = 1;
        while cur != FqElem::ONE {
            cur = f.mul(cur, g);
            ord += 1;
        }
        assert_eq!(ord, 8);
    }

    #[test]
    fn gf125_log_bijection() {
        let f = build_field(5, 3, 0).unwrap();
        let mut seen = [false; 124];
        for a in f.elements().skip(1) {
            let l = f.dlog(a).unwrap() as usize;
            assert!(!seen[l]);
            seen[l] = true;
            assert_eq!(f.exp(l as u64), a);
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn gf4_trace_of_omega() {
        // x^2 + x + 1 is the only irreducible quadratic over GF(2)
        let f = build_field(2, 2, 0).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let omega = f.from_coeffs(&[0, 1]);
        assert_eq!(f.trace(omega), 1);
        assert_eq!(f.trace(FqElem::ZERO), 0);
        assert_eq!(f.trace(FqElem::ONE), 0);
    }

    #[test]
    fn gf9_additive_character_orthogonality() {
        let f = build_field(3, 2, 0).unwrap();
        // sum of zeta_3^{Tr(a)} over the field vanishes: each trace value is hit q/p times
        let mut hist = [0u32; 3];
        for a in f.elements() {
            hist[f.trace(a) as usize] += 1;
        }
        assert_eq!(hist, [3, 3, 3]);
    }

    #[test]
    fn dlog_is_a_homomorphism_gf25() {
        let f = build_field(5, 2, 0).unwrap();
        for a in f.elements().skip(1) {
            for b in f.elements().skip(1) {
                let lhs = f.dlog(f.mul(a, b)).unwrap();
                let rhs = (f.dlog(a).unwrap() + f.dlog(b).unwrap()) % 24;
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(f.dlog(FqElem::ZERO), Err(FfError::LogOfZero));
        assert_eq!(f.dlog(f.generator()).unwrap(), 1);
    }

    #[test]
    fn fermat_little_theorem_exhaustive() {
        for (p, r) in [(2, 3), (3, 2), (5, 2), (7, 1), (2, 4)] {
            let f = build_field(p, r, 0).unwrap();
            let q = f.q();
            for a in f.elements() {
                assert_eq!(f.pow(a, q), a);
                if !a.is_zero() {
                    assert_eq!(f.pow(a, q - 1), FqElem::ONE);
                }
            }
        }
    }

    #[test]
    fn power_multiset_covers_residues() {
        let f = build_field(3, 2, 0).unwrap();
        let order = f.q() - 1;
        for k in 1..order {
            let g = num_integer::gcd(k, order);
            let mut counts = vec![0u64; order as usize];
            for a in f.elements().skip(1) {
                counts[((f.dlog(a).unwrap() * k) % order) as usize] += 1;
            }
            for (res, &c) in counts.iter().enumerate() {
                let expect = if (res as u64).is_multiple_of(g) { g } else { 0 };
                assert_eq!(c, expect, "k={k} res={res}");
            }
        }
    }

    #[test]
    fn zech_addition_matches_digitwise() {
        let f = build_field(3, 3, 1).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                let la = f.to_log(a);
                let lb = f.to_log(b);
                assert_eq!(f.from_log(f.log_add(la, lb)), f.add(a, b));
            }
        }
    }

    #[test]
    fn extension_embeds_fixed_points() {
        let base = build_field(3, 1, 0).unwrap();
        let ext = base.extend(2).unwrap();
        assert_eq!(ext.field.q(), 9);
        let fixed: Vec<FqElem> = ext
            .field
            .elements()
            .filter(|&a| ext.field.pow(a, 3) == a)
            .collect();
        let mut images: Vec<FqElem> = base.elements().map(|a| ext.embed(a)).collect();
        images.sort();
        assert_eq!(images, fixed);
    }

    #[test]
    fn extension_degree_one_is_identity() {
        let base = build_field(2, 2, 0).unwrap();
        let ext = base.extend(1).unwrap();
        for a in base.elements() {
            assert_eq!(ext.embed(a), a);
        }
    }

    #[test]
    fn embedding_is_a_ring_map_and_scales_trace() {
        for (p, r, k) in [(2, 1, 3), (2, 2, 2), (3, 2, 2), (5, 1, 2), (2, 2, 3)] {
            let base = build_field(p, r, 0).unwrap();
            let ext = base.extend(k).unwrap();
            assert_eq!(ext.embed(FqElem::ZERO), FqElem::ZERO);
            assert_eq!(ext.embed(FqElem::ONE), FqElem::ONE);
            for a in base.elements() {
                let ea = ext.embed(a);
                assert_eq!(
                    ext.field.trace(ea),
                    (k as u64 * base.trace(a)) % p,
                    "trace compatibility p={p} r={r} k={k}"
                );
                for b in base.elements() {
                    let eb = ext.embed(b);
                    assert_eq!(ext.embed(base.add(a, b)), ext.field.add(ea, eb));
                    assert_eq!(ext.embed(base.mul(a, b)), ext.field.mul(ea, eb));
                }
            }
        }
    }

    #[test]
    fn irreducibility_rejects_products_of_non_dividing_degree() {
        // (x^2+x+1)(x^3+x+1) over GF(2) has no roots in GF(2) yet is reducible
        let a = [1u64, 1, 1];
        let b = [1u64, 1, 0, 1];
        let mut prod = vec![0u64; 6];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % 2;
            }
        }
        assert!(!is_irreducible(&prod, 2));
        assert!(is_irreducible(&[1, 0, 1, 0, 0, 1], 2));
    }

    #[test]
    fn different_seeds_give_isomorphic_models() {
        let a = build_field(2, 4, 0).unwrap();
        let b = build_field(2, 4, 5).unwrap();
        assert_ne!(a.modulus(), b.modulus());
        let mut ta: Vec<u64> = a.elements().map(|x| a.trace(x)).collect();
        let mut tb: Vec<u64> = b.elements().map(|x| b.trace(x)).collect();
        ta.sort();
        tb.sort();
        assert_eq!(ta, tb);
    }
}
