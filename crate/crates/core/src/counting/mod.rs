//! Point counts for the Dwork pencil
//! `X: x_1^(n+1) + ... + x_(n+1)^(n+1) + lambda x_1...x_(n+1) = 0` in `P^n`
//! and its mirror `g = x_1 + ... + x_n + 1/(x_1...x_n) + lambda`, by
//! exhaustive enumeration and by Gauss-sum character formulas.

mod brute;
mod charsum;
mod record;
mod smooth;
pub mod solutions;

pub use brute::{
    count_affine_brute, count_projective_brute, count_torus_brute, count_y_by_strata,
    diagonal_torus_count, stratum_identity_sides, DEFAULT_ENUMERATION_CAP,
};
pub use charsum::{count_fermat_lifted, count_via_charsum, required_precision, CharsumCounts};
pub(crate) use record::count_over;
pub use record::{count_instance, CountMethod, CountRecord, COUNT_SCHEMA};
pub use smooth::{smoothness_probe, Smoothness, SmoothnessReport};
pub use solutions::{
    classify, is_admissible, mirror_solutions, pencil_solutions, SolutionClass, SolutionVector,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::ff::{Extension, FfError, FqElem};
use crate::padic::PadicError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("dimension n = {0} is below 2")]
    BadDimension(usize),
    #[error("enumeration of {work} points exceeds the cap {cap}")]
    EnumerationTooLarge { work: u128, cap: u128 },
    #[error("{what} is not divisible by {by}")]
    DivisibilityViolation { what: String, by: String },
    #[error("counts need p^N with N = {needed}, beyond the supported 2^126")]
    PrecisionInsufficient { needed: u32 },
    #[error("brute force ({brute}) and character sums ({charsum}) disagree")]
    OracleMismatch { brute: String, charsum: String },
    #[error("exponent {k} over GF({field}) is not a norm-lifted character")]
    NotLiftable { k: u64, field: u64 },
    #[error("character sum did not reduce to an integer: {0}")]
    NonIntegralResult(String),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Padic(#[from] PadicError),
}

impl CountError {
    /// The count is well posed but lies beyond a table, enumeration or
    /// precision limit.
    pub fn is_capacity(&self) -> bool {
        matches!(
            self,
            CountError::EnumerationTooLarge { .. }
                | CountError::PrecisionInsufficient { .. }
                | CountError::Field(FfError::FieldTooLarge { .. })
                | CountError::Padic(_)
        )
    }
}

/// A member of the pencil over a fixed field, identified by n and lambda.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DworkInstance {
    n: usize,
    lambda: FqElem,
}

impl DworkInstance {
    pub fn new(n: usize, lambda: FqElem) -> Result<Self, CountError> {
        if n < 2 {
            return Err(CountError::BadDimension(n));
        }
        Ok(DworkInstance { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> FqElem {
        self.lambda
    }

    /// The same member viewed over an extension field.
    pub fn base_change(&self, ext: &Extension) -> DworkInstance {
        DworkInstance {
            n: self.n,
            lambda: ext.embed(self.lambda),
        }
    }

    /// Columns `W_j = (1, V_j)` of the homogenised pencil polynomial.
    pub fn pencil_exponents(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n + 2);
        for j in 0..=n {
            let mut w = vec![0i64; n + 2];
            w[0] = 1;
            w[j + 1] = n as i64 + 1;
            cols.push(w);
        }
        cols.push(vec![1; n + 2]);
        cols
    }

    /// Columns `(1, V_j)` for the mirror Laurent polynomial, in the order
    /// `x_1, ..., x_n, 1/(x_1...x_n), constant`.
    pub fn mirror_exponents(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n + 2);
        for j in 0..n {
            let mut w = vec![0i64; n + 1];
            w[0] = 1;
            w[j + 1] = 1;
            cols.push(w);
        }
        let mut inv = vec![-1i64; n + 1];
        inv[0] = 1;
        cols.push(inv);
        let mut constant = vec![0i64; n + 1];
        constant[0] = 1;
        cols.push(constant);
        cols
    }

    /// The `(n+2) x (n+2)` pencil exponent matrix, row-major.
    pub fn pencil_matrix(&self) -> Vec<Vec<i64>> {
        transpose(&self.pencil_exponents())
    }

    /// The `(n+1) x (n+2)` mirror exponent matrix, row-major. Row i >= 1
    /// reads `k_i - k_{n+1}`.
    pub fn mirror_matrix(&self) -> Vec<Vec<i64>> {
        transpose(&self.mirror_exponents())
    }
}

fn transpose(cols: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = cols[0].len();
    (0..rows)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect()
}

/// `#X = (N_f - 1)/(q - 1)`.
pub fn count_x(n_f: u128, q: u64) -> Result<u128, CountError> {
    let q = q as u128;
    if n_f == 0 || !(n_f - 1).is_multiple_of(q - 1) {
        return Err(CountError::DivisibilityViolation {
            what: format!("N_f - 1 = {}", n_f as i128 - 1),
            by: format!("q - 1 = {}", q - 1),
        });
    }
    Ok((n_f - 1) / (q - 1))
}

/// `#Y = N_g* - ((q-1)^n + (-1)^(n+1))/q + (q^n - 1)/(q - 1)`.
pub fn count_y(n_gstar: u128, q: u64, n: usize) -> Result<u128, CountError> {
    let qb = BigInt::from(q);
    let sign = if (n + 1).is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let torus_part: BigInt = num_traits::pow(&qb - 1, n) + sign;
    if !(&torus_part % &qb).is_zero() {
        return Err(CountError::DivisibilityViolation {
            what: format!("(q-1)^n + (-1)^(n+1) = {torus_part}"),
            by: format!("q = {q}"),
        });
    }
    let boundary: BigInt = (num_traits::pow(qb.clone(), n) - 1) / (&qb - 1);
    let y = BigInt::from(n_gstar) - torus_part / &qb + boundary;
    use num_traits::ToPrimitive;
    y.to_u128()
        .ok_or_else(|| CountError::NonIntegralResult(format!("#Y = {y}")))
}

/// Whether `a ≡ b (mod m)` for nonnegative counts.
pub fn congruent(a: u128, b: u128, m: &BigInt) -> bool {
    ((BigInt::from(a) - BigInt::from(b)) % m).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_matrices() {
        let inst = DworkInstance::new(3, FqElem::ONE).unwrap();
        let m = inst.pencil_matrix();
        assert_eq!(m[0], vec![1, 1, 1, 1, 1]);
        assert_eq!(m[1], vec![4, 0, 0, 0, 1]);
        assert_eq!(m[4], vec![0, 0, 0, 4, 1]);
        let nm = inst.mirror_matrix();
        assert_eq!(nm.len(), 4);
        assert_eq!(nm[0], vec![1, 1, 1, 1, 1]);
        assert_eq!(nm[1], vec![1, 0, 0, -1, 0]);
        assert_eq!(nm[3], vec![0, 0, 1, -1, 0]);
        assert!(DworkInstance::new(1, FqElem::ONE).is_err());
    }

    #[test]
    fn projective_counts_from_affine() {
        assert_eq!(count_x(4, 2).unwrap(), 3);
        assert_eq!(count_x(28, 4).unwrap(), 9);
        assert!(count_x(27, 4).is_err());
    }

    #[test]
    fn toric_closure_formula() {
        // n=2, q=2, N_g* = 0: 0 - (1 - 1)/2 + 3
        assert_eq!(count_y(0, 2, 2).unwrap(), 3);
    }
}
