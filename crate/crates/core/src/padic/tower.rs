//! The ring `W[pi]`: the unramified extension of degree r over `Z_p`,
//! adjoined a uniformizer `pi = zeta_p - 1`, truncated modulo `p^N`.
//!
//! An element is stored as `rows x r` residues, row i holding the
//! coefficient of `pi^i` (itself an element of W in the power basis of the
//! lifted field modulus). For p = 2 there is a single row and `zeta_2 = -1`.

use num_integer::binomial;

use super::ring::ModRing;
use super::PadicError;
use crate::ff::{FieldCtx, FqElem};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TowerElem {
    coords: Vec<u128>,
}

impl TowerElem {
    pub fn coords(&self) -> &[u128] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// Truncated arithmetic context for `W[pi] / p^N`.
#[derive(Debug, Clone)]
pub struct Tower {
    field_p: u64,
    field_r: u32,
    ring: ModRing,
    rows: usize,
    modulus: Vec<u128>,
    // pi^rows = -sum_t relation[t] pi^t
    relation: Vec<u128>,
    zeta_pows: Vec<TowerElem>,
}

impl Tower {
    pub fn new(field: &FieldCtx, precision: u32) -> Result<Self, PadicError> {
        Self::from_parts(field.p(), field.r(), field.modulus(), precision)
    }

    pub fn from_parts(
        p: u64,
        r: u32,
        field_modulus: &[u64],
        precision: u32,
    ) -> Result<Self, PadicError> {
        let ring = ModRing::new(p, precision)?;
        let rows = if p == 2 { 1 } else { (p - 1) as usize };
        let modulus = field_modulus
            .iter()
            .map(|&c| c as u128 % ring.modulus())
            .collect();
        let relation = if p == 2 {
            // pi = -2
            vec![ring.from_u128(2)]
        } else {
            (0..rows)
                .map(|t| ring.from_u128(binomial(p as u128, t as u128 + 1)))
                .collect()
        };
        let mut tower = Tower {
            field_p: p,
            field_r: r,
            ring,
            rows,
            modulus,
            relation,
            zeta_pows: Vec::new(),
        };
        let zeta = tower.zeta();
        let mut pows = Vec::with_capacity(p as usize);
        let mut cur = tower.one();
        for _ in 0..p {
            pows.push(cur.clone());
            cur = tower.mul(&cur, &zeta);
        }
        tower.zeta_pows = pows;
        Ok(tower)
    }

    pub fn ring(&self) -> &ModRing {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.field_p
    }

    pub fn r(&self) -> u32 {
        self.field_r
    }

    pub fn q(&self) -> u128 {
        (self.field_p as u128).pow(self.field_r)
    }

    pub fn precision(&self) -> u32 {
        self.ring.precision()
    }

    /// Number of `pi`-rows: p - 1, or 1 when p = 2.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Ramification index of `W[pi]` over W, in the valuation sense.
    pub fn ramification(&self) -> u32 {
        (self.field_p - 1) as u32
    }

    pub fn width(&self) -> usize {
        self.field_r as usize
    }

    /// Monic lifted field modulus, lowest coefficient first.
    pub fn unramified_modulus(&self) -> &[u128] {
        &self.modulus
    }

    /// Coefficients of the monic relation satisfied by `pi`, lowest first.
    pub fn eisenstein(&self) -> Vec<u128> {
        let mut e = self.relation.clone();
        e.push(1);
        e
    }

    pub fn zero(&self) -> TowerElem {
        TowerElem {
            coords: vec![0; self.rows * self.width()],
        }
    }

    pub fn one(&self) -> TowerElem {
        self.from_int(1)
    }

    pub fn from_int(&self, a: i128) -> TowerElem {
        let mut z = self.zero();
        z.coords[0] = self.ring.from_i128(a);
        z
    }

    pub fn from_residue(&self, a: u128) -> TowerElem {
        let mut z = self.zero();
        z.coords[0] = self.ring.from_u128(a);
        z
    }

    /// Embed an element of W given by its r coordinates.
    pub fn from_unramified(&self, w: &[u128]) -> TowerElem {
        let mut z = self.zero();
        z.coords[..w.len()].copy_from_slice(w);
        z
    }

    /// Row 0 of an element, i.e. the W-component when the element lies in W.
    pub fn unramified_part<'a>(&self, x: &'a TowerElem) -> &'a [u128] {
        &x.coords[..self.width()]
    }

    pub fn pi(&self) -> TowerElem {
        if self.rows == 1 {
            return self.from_int(-2);
        }
        let mut z = self.zero();
        z.coords[self.width()] = 1;
        z
    }

    pub fn zeta(&self) -> TowerElem {
        self.add(&self.one(), &self.pi())
    }

    /// `zeta_p^t` for `0 <= t < p`.
    pub fn zeta_pow(&self, t: u64) -> &TowerElem {
        &self.zeta_pows[(t % self.field_p) as usize]
    }

    pub fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| self.ring.add(x, y))
                .collect(),
        }
    }

    pub fn add_assign(&self, a: &mut TowerElem, b: &TowerElem) {
        for (x, &y) in a.coords.iter_mut().zip(&b.coords) {
            *x = self.ring.add(*x, y);
        }
    }

    pub fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .map(|(&x, &y)| self.ring.sub(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &TowerElem) -> TowerElem {
        TowerElem {
            coords: a.coords.iter().map(|&x| self.ring.neg(x)).collect(),
        }
    }

    pub fn scale(&self, a: &TowerElem, s: u128) -> TowerElem {
        let s = self.ring.from_u128(s);
        TowerElem {
            coords: a.coords.iter().map(|&x| self.ring.mul(x, s)).collect(),
        }
    }

    /// Product in W of two r-coordinate vectors.
    pub fn unr_mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let r = self.width();
        let ring = &self.ring;
        let mut t = vec![0u128; 2 * r - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    t[i + j] = ring.add(t[i + j], ring.mul(x, y));
                }
            }
        }
        for deg in (r..t.len()).rev() {
            let c = t[deg];
            if c == 0 {
                continue;
            }
            for (i, &fi) in self.modulus[..r].iter().enumerate() {
                if fi != 0 {
                    let idx = deg - r + i;
                    t[idx] = ring.sub(t[idx], ring.mul(c, fi));
                }
            }
        }
        t.truncate(r);
        t
    }

    pub fn unr_pow(&self, a: &[u128], mut e: u128) -> Vec<u128> {
        let mut acc = vec![0u128; self.width()];
        acc[0] = 1 % self.ring.modulus();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.unr_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.unr_mul(&base, &base);
            }
        }
        acc
    }

    pub fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let r = self.width();
        let e = self.rows;
        let ring = &self.ring;
        let row = |x: &TowerElem, i: usize| -> Vec<u128> { x.coords[i * r..(i + 1) * r].to_vec() };
        let nonzero =
            |x: &TowerElem, i: usize| x.coords[i * r..(i + 1) * r].iter().any(|&c| c != 0);
        let mut acc: Vec<Vec<u128>> = vec![vec![0u128; r]; 2 * e - 1];
        for i in 0..e {
            if !nonzero(a, i) {
                continue;
            }
            let ai = row(a, i);
            for j in 0..e {
                if !nonzero(b, j) {
                    continue;
                }
                let prod = self.unr_mul(&ai, &row(b, j));
                for (dst, &v) in acc[i + j].iter_mut().zip(&prod) {
                    *dst = ring.add(*dst, v);
                }
            }
        }
        for deg in (e..acc.len()).rev() {
            let top = std::mem::take(&mut acc[deg]);
            if top.iter().all(|&c| c == 0) {
                continue;
            }
            for (t, &ct) in self.relation.iter().enumerate() {
                if ct == 0 {
                    continue;
                }
                let idx = deg - e + t;
                for (dst, &v) in acc[idx].iter_mut().zip(&top) {
                    *dst = ring.sub(*dst, ring.mul(v, ct));
                }
            }
        }
        let mut coords = Vec::with_capacity(e * r);
        for rowv in acc.into_iter().take(e) {
            coords.extend(rowv);
        }
        TowerElem { coords }
    }

    pub fn pow(&self, a: &TowerElem, mut e: u128) -> TowerElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Digit lift of a field element into W (not multiplicative).
    pub fn digit_lift(&self, field: &FieldCtx, a: FqElem) -> Vec<u128> {
        field.coeffs(a).into_iter().map(|c| c as u128).collect()
    }

    /// If `x` is a rational residue (every coordinate but the constant one
    /// vanishes), return it.
    pub fn as_rational(&self, x: &TowerElem) -> Option<u128> {
        if x.coords[1..].iter().all(|&c| c == 0) {
            Some(x.coords[0])
        } else {
            None
        }
    }

    /// Truncate into a tower of lower precision over the same field.
    pub fn truncate(&self, x: &TowerElem, coarser: &Tower) -> TowerElem {
        TowerElem {
            coords: x
                .coords
                .iter()
                .map(|&c| self.ring.truncate_to(c, &coarser.ring))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    #[test]
    fn p2_has_trivial_ramified_layer() {
        let f = build_field(2, 1, 0).unwrap();
        let t = Tower::new(&f, 8).unwrap();
        assert_eq!(t.rows(), 1);
        assert_eq!(t.pi(), t.from_int(-2));
        assert_eq!(t.zeta(), t.from_int(-1));
    }

    #[test]
    fn gf3_eisenstein_relation() {
        let f = build_field(3, 1, 0).unwrap();
        let t = Tower::new(&f, 5).unwrap();
        assert_eq!(t.eisenstein(), vec![3, 3, 1]);
        let pi = t.pi();
        let lhs = t.add(&t.add(&t.mul(&pi, &pi), &t.scale(&pi, 3)), &t.from_int(3));
        assert!(lhs.is_zero());
        // Eisenstein: constant term is p times a unit, and zeta^p = 1
        assert_eq!(t.pow(&t.zeta(), 3), t.one());
    }

    #[test]
    fn gf9_shape() {
        let f = build_field(3, 2, 0).unwrap();
        let t = Tower::new(&f, 4).unwrap();
        assert_eq!((t.rows(), t.width()), (2, 2));
        assert_eq!(t.zero().coords().len(), 4);
    }

    #[test]
    fn zeta_is_a_primitive_pth_root() {
        for p in [3u64, 5, 7] {
            let f = build_field(p, 1, 0).unwrap();
            let t = Tower::new(&f, 6).unwrap();
            let mut sum = t.zero();
            for k in 0..p {
                sum = t.add(&sum, t.zeta_pow(k));
            }
            assert!(sum.is_zero(), "p={p}");
            assert_ne!(t.zeta(), t.one());
        }
    }

    #[test]
    fn lifted_modulus_reduces_to_field_modulus() {
        let f = build_field(5, 3, 2).unwrap();
        let t = Tower::new(&f, 7).unwrap();
        let red: Vec<u64> = t
            .unramified_modulus()
            .iter()
            .map(|&c| (c % 5) as u64)
            .collect();
        assert_eq!(red, f.modulus());
    }
}
