//! Zeta functions of `X_lambda`, its toric mirror `Y_lambda` and the
//! affine torus hypersurface `g = 0`, recovered from point counts.
//!
//! Each is `numerator^(+-1)` times explicit factors `(1 - q^i T)^e`:
//!
//! - X: `P^((-1)^n) / prod_{i<n} (1 - q^i T)`, P of degree
//!   `n(n^n - (-1)^n)/(n+1)`, pure of weight n-1;
//! - Y: `Q^((-1)^n) / prod_{i<n} (1 - q^i T)`, Q of degree n and weight n-1;
//! - g: `Q^((-1)^n) prod_{i<n} (1 - q^i T)^((-1)^(n-i) C(n, i+1))`.
//!
//! Q divides P, and `P(T)/Q(T) = R_n(qT)` for an integer polynomial R_n.

mod poly;
mod recover;
mod roots;

pub use poly::{divide_check, r_poly, IntPoly};
pub use recover::{newton_coefficients, recover_numerator};
pub use roots::{
    complex_roots, sign_root_deviation, weight_purity_check, PurityReport, DEFAULT_PURITY_TOL,
};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const ZETA_SCHEMA: &str = "zeta/1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("numerator polynomial must have constant term 1")]
    ConstantTermNotOne,
    #[error("{have} power sums supplied, {need} needed")]
    InsufficientData { have: usize, need: usize },
    #[error("neither sign of the functional equation gives a pure integer polynomial")]
    NoConsistentSign,
    #[error("both signs of the functional equation fit the data")]
    AmbiguousSign,
    #[error("Newton's identities give a non-integral coefficient c_{0}")]
    NonIntegralCoefficient(usize),
    #[error("recovered polynomial disagrees with the count over the degree-{k} extension")]
    InconsistentCounts { k: usize },
    #[error("Q does not divide P")]
    NotDivisible,
    #[error("coefficient {0} of P/Q is not divisible by q^{0}")]
    SubstitutionNotIntegral(usize),
    #[error("root finding did not converge")]
    RootFindingFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variety {
    X,
    Y,
    #[serde(rename = "affine_g")]
    AffineG,
}

/// `n(n^n - (-1)^n)/(n+1)`.
pub fn expected_degree_p(n: usize) -> usize {
    let nn = (n as i128).pow(n as u32);
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    (n as i128 * (nn - sign) / (n as i128 + 1)) as usize
}

/// Everything about a zeta function except its numerator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaShape {
    pub variety: Variety,
    pub n: usize,
    pub numerator_exponent: i32,
    /// Pairs `(i, e)` standing for `(1 - q^i T)^e`.
    pub trivial_factors: Vec<(u32, i64)>,
    pub degree: usize,
    pub weight: u32,
}

impl ZetaShape {
    pub fn new(variety: Variety, n: usize) -> Self {
        let numerator_exponent = if n.is_multiple_of(2) { 1 } else { -1 };
        let trivial_factors = match variety {
            Variety::X | Variety::Y => (0..n as u32).map(|i| (i, -1)).collect(),
            Variety::AffineG => (0..n as u32)
                .map(|i| {
                    let sign = if (n as u32 - i).is_multiple_of(2) {
                        1
                    } else {
                        -1
                    };
                    (i, sign * num_integer::binomial(n as i64, i as i64 + 1))
                })
                .collect(),
        };
        let degree = match variety {
            Variety::X => expected_degree_p(n),
            Variety::Y | Variety::AffineG => n,
        };
        ZetaShape {
            variety,
            n,
            numerator_exponent,
            trivial_factors,
            degree,
            weight: n as u32 - 1,
        }
    }

    /// Extension degrees to count: half the numerator degree, rounded up,
    /// plus one validation row.
    pub fn count_budget(&self) -> usize {
        self.degree.div_ceil(2) + 1
    }

    /// Power sums of the numerator's reciprocal roots from counts
    /// `#V(F_(q^k))`, `k = 1, 2, ...`:
    /// `s_k = -e (N_k + sum_i e_i q^(ik))` with e the numerator exponent.
    pub fn power_sums_from_counts(&self, counts: &[BigInt], q: u64) -> Vec<BigInt> {
        let qb = BigInt::from(q);
        counts
            .iter()
            .enumerate()
            .map(|(idx, count)| {
                let k = idx + 1;
                let trivial: BigInt = self
                    .trivial_factors
                    .iter()
                    .map(|&(i, e)| BigInt::from(e) * num_traits::pow(qb.clone(), i as usize * k))
                    .sum();
                let s = count + trivial;
                if self.numerator_exponent > 0 {
                    -s
                } else {
                    s
                }
            })
            .collect()
    }
}

/// A zeta function with its numerator recovered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaData {
    pub schema: String,
    pub variety: Variety,
    pub n: usize,
    pub p: u64,
    pub r: u32,
    #[serde(with = "crate::decimal::option")]
    pub lambda_dlog: Option<u64>,
    #[serde(rename = "numerator_coeffs")]
    pub numerator: IntPoly,
    pub numerator_exponent: i32,
    pub trivial_factors: Vec<(u32, i64)>,
}

impl ZetaData {
    pub fn q(&self) -> u64 {
        self.p.pow(self.r)
    }

    pub fn shape(&self) -> ZetaShape {
        ZetaShape::new(self.variety, self.n)
    }

    /// `#V(F_(q^k))` for `k = 1..=m`, read off the product formula.
    pub fn counts(&self, m: usize) -> Vec<BigInt> {
        let qb = BigInt::from(self.q());
        self.numerator
            .power_sums(m)
            .into_iter()
            .enumerate()
            .map(|(idx, s)| {
                let k = idx + 1;
                let trivial: BigInt = self
                    .trivial_factors
                    .iter()
                    .map(|&(i, e)| BigInt::from(e) * num_traits::pow(qb.clone(), i as usize * k))
                    .sum();
                let from_numerator = if self.numerator_exponent > 0 { -s } else { s };
                from_numerator - trivial
            })
            .collect()
    }
}

/// Recover the zeta function of shape `shape` over `GF(p^r)` from counts
/// over the extensions of degree `1..=counts.len()`.
pub fn recover_zeta(
    shape: &ZetaShape,
    p: u64,
    r: u32,
    lambda_dlog: Option<u64>,
    counts: &[BigInt],
    use_functional_equation: bool,
) -> Result<ZetaData, ZetaError> {
    let q = p.pow(r);
    let sums = shape.power_sums_from_counts(counts, q);
    let numerator = recover_numerator(
        &sums,
        shape.degree,
        shape.weight,
        q,
        use_functional_equation,
    )?;
    Ok(ZetaData {
        schema: ZETA_SCHEMA.to_string(),
        variety: shape.variety,
        n: shape.n,
        p,
        r,
        lambda_dlog,
        numerator,
        numerator_exponent: shape.numerator_exponent,
        trivial_factors: shape.trivial_factors.clone(),
    })
}
