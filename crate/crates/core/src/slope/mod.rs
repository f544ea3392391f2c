//! Newton polygons, slope factorisation and the slope zeta function
//! `S_p(X, u, T)`, in which every reciprocal root or pole of slope s is
//! replaced by `u^s`.

mod factor;
mod hodge;
mod polygon;

pub use factor::{
    eval_mod, mul_mod, reduce_mod, slope_part, unit_root, PadicFactor, SlopeInterval,
};
pub use hodge::{
    hodge_numbers_dwork, hodge_polygon, matching_row, ordinarity_test, ordinary_slope_zeta,
    HodgeData,
};
pub use polygon::{newton_polygon, vp_int, NewtonPolygon, Slope};

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::zeta::ZetaData;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlopeError {
    #[error("slope factor did not stabilise within {iterations} iterations")]
    PrecisionTooLow { iterations: usize },
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("slope factor has non-integral coefficients")]
    NonIntegralFactor,
    #[error("numerator of size {numerator} does not match Hodge data of size {hodge}")]
    DimensionMismatch { numerator: usize, hodge: usize },
}

/// `prod_s (1 - u^s T)^(m_s)` as the finite map `s -> m_s`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlopeZeta {
    terms: BTreeMap<Slope, i64>,
}

impl SlopeZeta {
    pub fn one() -> Self {
        Self::default()
    }

    /// Reduced form: equal slopes are combined and zero multiplicities
    /// dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Slope, i64)>) -> Self {
        let mut out = SlopeZeta::one();
        for (s, m) in terms {
            out.add(s, m);
        }
        out
    }

    pub fn add(&mut self, slope: Slope, mult: i64) {
        let entry = self.terms.entry(slope).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.terms.remove(&slope);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Slope, i64> {
        &self.terms
    }

    pub fn multiplicity(&self, s: Slope) -> i64 {
        self.terms.get(&s).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.terms.is_empty()
    }

    /// `S^e`.
    pub fn pow(&self, e: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(&s, &m)| (s, m * e)))
    }

    pub fn mul(&self, other: &SlopeZeta) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(&s, &m)| (s, m)),
        )
    }

    /// `sum m_s`, the exponent of `(1 - T)` at `u = 1`.
    pub fn total(&self) -> i64 {
        self.terms.values().sum()
    }

    /// The part with slopes in `interval`.
    pub fn restrict(&self, interval: &SlopeInterval) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(&s, _)| interval.contains(s))
                .map(|(&s, &m)| (s, m)),
        )
    }
}

impl fmt::Display for SlopeZeta {
    /// `1/((1 - T)^2 (1 - uT)^20 (1 - u^2T)^2)` style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |s: &Slope, m: i64| {
            let u = if s.is_zero() {
                String::new()
            } else if *s == Slope::from(1) {
                "u".to_string()
            } else if s.is_integer() {
                format!("u^{}", s.numer())
            } else {
                format!("u^({}/{})", s.numer(), s.denom())
            };
            let base = format!("(1 - {u}T)");
            if m.abs() == 1 {
                base
            } else {
                format!("{base}^{}", m.abs())
            }
        };
        let num: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, &m)| m > 0)
            .map(|(s, &m)| factor(s, m))
            .collect();
        let den: Vec<String> = self
            .terms
            .iter()
            .filter(|(_, &m)| m < 0)
            .map(|(s, &m)| factor(s, m))
            .collect();
        let num = if num.is_empty() {
            "1".to_string()
        } else {
            num.join("")
        };
        match den.len() {
            0 => write!(f, "{num}"),
            1 => write!(f, "{num}/{}", den[0]),
            _ => write!(f, "{num}/({})", den.join("")),
        }
    }
}

fn slope_key(s: &Slope) -> String {
    format!("{}/{}", s.numer(), s.denom())
}

impl Serialize for SlopeZeta {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map: BTreeMap<String, i64> =
            self.terms.iter().map(|(k, &v)| (slope_key(k), v)).collect();
        map.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SlopeZeta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let map = BTreeMap::<String, i64>::deserialize(d)?;
        let mut terms = Vec::with_capacity(map.len());
        for (k, v) in map {
            let (num, den) = k
                .split_once('/')
                .ok_or_else(|| D::Error::custom(format!("slope {k}")))?;
            let num: i64 = num.parse().map_err(D::Error::custom)?;
            let den: i64 = den.parse().map_err(D::Error::custom)?;
            if den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            terms.push((Slope::new(num, den), v));
        }
        Ok(SlopeZeta::from_terms(terms))
    }
}

/// Slope zeta function of a recovered zeta function.
pub fn slope_zeta(z: &ZetaData) -> SlopeZeta {
    let np = newton_polygon(&z.numerator, z.p, z.r);
    let sign = i64::from(z.numerator_exponent.signum());
    let numerator = np
        .segments()
        .into_iter()
        .map(|(s, len)| (s, sign * len as i64));
    let trivial = z
        .trivial_factors
        .iter()
        .map(|&(i, e)| (Slope::from(i as i64), e));
    SlopeZeta::from_terms(numerator.chain(trivial))
}

/// `S(u, 1/(u^d T)) = S(u, T) (-u^(d/2) T)^e` read on exponents:
/// `m_s = m_(d-s)` for every s, `sum m_s s = (d/2) sum m_s`, and
/// `e = -sum m_s`.
pub fn slope_fe_check(s: &SlopeZeta, d: i64, e: i64) -> bool {
    let dd = Slope::from(d);
    let symmetric = s
        .terms()
        .iter()
        .all(|(&slope, &m)| s.multiplicity(dd - slope) == m);
    let weighted: Slope = s.terms().iter().map(|(&slope, &m)| slope * m).sum();
    let centred = weighted * 2 == dd * s.total();
    symmetric && centred && e == -s.total()
}

/// `S_p(X) = S_p(Y)^((-1)^d)`.
pub fn mirror_slope_identity(x: &SlopeZeta, y: &SlopeZeta, d: usize) -> bool {
    let e = if d.is_multiple_of(2) { 1 } else { -1 };
    *x == y.pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{IntPoly, Variety, ZetaShape, ZETA_SCHEMA};

    fn k3_display() -> SlopeZeta {
        SlopeZeta::from_terms([
            (Slope::from(0), -2),
            (Slope::from(1), -20),
            (Slope::from(2), -2),
        ])
    }

    #[test]
    fn fe_examples() {
        assert!(slope_fe_check(&k3_display(), 2, 24));
        assert!(slope_fe_check(&SlopeZeta::one(), 3, 0));
        let asym = SlopeZeta::from_terms([(Slope::from(0), -1), (Slope::from(1), -3)]);
        assert!(!slope_fe_check(&asym, 1, 4));
    }

    #[test]
    fn reduced_form_and_render() {
        let s = SlopeZeta::from_terms([(Slope::from(1), 2), (Slope::from(1), -2)]);
        assert!(s.is_one());
        assert_eq!(s.to_string(), "1");
        assert_eq!(
            k3_display().to_string(),
            "1/((1 - T)^2(1 - uT)^20(1 - u^2T)^2)"
        );
        let frac = SlopeZeta::from_terms([(Slope::new(1, 2), 2)]);
        assert_eq!(frac.to_string(), "(1 - u^(1/2)T)^2");
    }

    #[test]
    fn json_map() {
        let json = serde_json::to_string(&k3_display()).unwrap();
        assert_eq!(json, r#"{"0/1":-2,"1/1":-20,"2/1":-2}"#);
        let back: SlopeZeta = serde_json::from_str(&json).unwrap();
        assert_eq!(back, k3_display());
    }

    #[test]
    fn ordinary_elliptic_cancels() {
        let shape = ZetaShape::new(Variety::X, 2);
        let z = ZetaData {
            schema: ZETA_SCHEMA.into(),
            variety: Variety::X,
            n: 2,
            p: 7,
            r: 1,
            lambda_dlog: Some(1),
            numerator: IntPoly::from_i64(&[1, -3, 7]).unwrap(),
            numerator_exponent: shape.numerator_exponent,
            trivial_factors: shape.trivial_factors,
        };
        let s = slope_zeta(&z);
        assert!(s.is_one());
        assert!(slope_fe_check(&s, 1, 0));
    }

    #[test]
    fn quintic_closed_form() {
        let s = ordinary_slope_zeta(&hodge_numbers_dwork(4));
        let display = SlopeZeta::from_terms([
            (Slope::from(1), 101),
            (Slope::from(2), 101),
            (Slope::from(0), -1),
            (Slope::from(1), -1),
            (Slope::from(2), -1),
            (Slope::from(3), -1),
        ]);
        assert_eq!(
            s,
            display.mul(&SlopeZeta::from_terms([
                (Slope::from(0), 1),
                (Slope::from(3), 1)
            ]))
        );
        assert_eq!(
            s,
            SlopeZeta::from_terms([(Slope::from(1), 100), (Slope::from(2), 100)])
        );
        assert_eq!(ordinary_slope_zeta(&hodge_numbers_dwork(3)), k3_display());
    }
}
