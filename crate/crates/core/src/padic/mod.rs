//! Truncated p-adic arithmetic: `Z/p^N`, the tower `W[pi]`, Teichmüller
//! lifts, Gauss sums and their valuations.

mod gauss;
mod ring;
mod tower;

pub use gauss::{teich, write_gauss_table, GaussSums, TeichTable};
pub use ring::{ModRing, MAX_MODULUS_BITS};
pub use tower::{Tower, TowerElem};

use num_rational::Ratio;
use thiserror::Error;

use crate::ff::PrimePower;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("p^N = {p}^{n} exceeds 2^126")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("Gauss sum index {k} outside [0, {max}]")]
    IndexOutOfRange { k: u64, max: u64 },
}

/// A valuation measured in steps of `ord(pi)`, i.e. in units of
/// `1/(r(p-1))` of `ord_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Valuation {
    steps: u64,
    steps_per_q: u64,
    ramification: u64,
    exact: bool,
}

impl Valuation {
    /// Valuation counted in powers of `pi` (equivalently `(p-1) ord_p`).
    pub fn pi_steps(&self) -> u64 {
        self.steps
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn ord_q(&self) -> Ratio<i64> {
        Ratio::new(self.steps as i64, self.steps_per_q as i64)
    }

    pub fn ord_p(&self) -> Ratio<i64> {
        Ratio::new(self.steps as i64, self.ramification as i64)
    }
}

/// Valuation of a tower element. When every coordinate vanishes modulo
/// `p^N` the result is the precision horizon and is flagged inexact.
pub fn pi_valuation(tower: &Tower, x: &TowerElem) -> Valuation {
    let e = tower.ramification() as u64;
    let r = tower.width();
    let ring = tower.ring();
    let steps_per_q = e * tower.r() as u64;
    let best = x
        .coords()
        .chunks(r)
        .enumerate()
        .filter(|(_, row)| row.iter().any(|&c| c != 0))
        .map(|(i, row)| {
            let v = row
                .iter()
                .map(|&c| ring.vp(c))
                .min()
                .unwrap_or(ring.precision());
            i as u64 + e * v as u64
        })
        .min();
    match best {
        Some(steps) => Valuation {
            steps,
            steps_per_q,
            ramification: e,
            exact: true,
        },
        None => Valuation {
            steps: e * ring.precision() as u64,
            steps_per_q,
            ramification: e,
            exact: false,
        },
    }
}

/// Sum of the base-p digits of `k`, using r digits.
pub fn digit_sum(k: u64, pp: PrimePower) -> u64 {
    let p = pp.p();
    let mut k = k;
    let mut s = 0;
    for _ in 0..pp.r() {
        s += k % p;
        k /= p;
    }
    s + k
}

/// `ord_q` of `prod_j G(k_j)` by Stickelberger: `sum_j sigma(k_j) / (r(p-1))`.
pub fn gauss_product_ord_q(k: &[u64], pp: PrimePower) -> Ratio<i64> {
    let steps: u64 = k.iter().map(|&x| digit_sum(x, pp)).sum();
    Ratio::new(steps as i64, (pp.r() as u64 * (pp.p() - 1)) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;

    #[test]
    fn digit_sums() {
        let pp = PrimePower::new(5, 2).unwrap();
        assert_eq!(digit_sum(0, pp), 0);
        assert_eq!(digit_sum(24, pp), 8);
        assert_eq!(digit_sum(13, pp), 5);
    }

    #[test]
    fn valuation_of_p_and_pi() {
        let f = build_field(3, 1, 0).unwrap();
        let t = Tower::new(&f, 6).unwrap();
        assert_eq!(pi_valuation(&t, &t.from_int(3)).ord_q(), Ratio::new(1, 1));
        assert_eq!(pi_valuation(&t, &t.pi()).ord_q(), Ratio::new(1, 2));
        let z = pi_valuation(&t, &t.zero());
        assert!(!z.is_exact());

        let f9 = build_field(3, 2, 0).unwrap();
        let t9 = Tower::new(&f9, 6).unwrap();
        assert_eq!(pi_valuation(&t9, &t9.from_int(3)).ord_q(), Ratio::new(1, 2));
    }

    #[test]
    fn product_valuation_matches_tower() {
        let f = build_field(3, 2, 0).unwrap();
        let t = Tower::new(&f, 8).unwrap();
        let g = GaussSums::new(&t, &f);
        let k = [1, 5, 8, 0];
        let prod = k
            .iter()
            .fold(t.one(), |acc, &x| t.mul(&acc, &g.get(x).unwrap()));
        assert_eq!(
            pi_valuation(&t, &prod).ord_q(),
            gauss_product_ord_q(&k, f.prime_power())
        );
    }

    #[test]
    fn valuation_p2() {
        let f = build_field(2, 2, 0).unwrap();
        let t = Tower::new(&f, 10).unwrap();
        let v = pi_valuation(&t, &t.from_int(8));
        assert_eq!(v.ord_p(), Ratio::new(3, 1));
        assert_eq!(v.ord_q(), Ratio::new(3, 2));
    }
}
