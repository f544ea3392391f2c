//! Parameter selection on the command line: `all`, `subfield`, or a comma
//! list of discrete-log exponents and the token `zero`.

use std::fmt;
use std::str::FromStr;

use mirror_zeta::ff::{FieldCtx, FqElem};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaValue {
    Zero,
    /// `g^j` for the field's generator g.
    Dlog(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaSpec {
    All,
    /// Zero and the nonzero elements of the prime field.
    Subfield,
    List(Vec<LambdaValue>),
}

impl LambdaSpec {
    /// Elements in output order: zero first, then increasing exponent.
    pub fn resolve(&self, field: &FieldCtx) -> Result<Vec<FqElem>, CliError> {
        let order = field.q() - 1;
        match self {
            LambdaSpec::All => Ok(std::iter::once(FqElem::ZERO)
                .chain((0..order).map(|j| field.exp(j)))
                .collect()),
            LambdaSpec::Subfield => {
                let step = order / (field.p() - 1);
                Ok(std::iter::once(FqElem::ZERO)
                    .chain((0..order).step_by(step as usize).map(|j| field.exp(j)))
                    .collect())
            }
            LambdaSpec::List(values) => values
                .iter()
                .map(|v| match *v {
                    LambdaValue::Zero => Ok(FqElem::ZERO),
                    LambdaValue::Dlog(j) if j < order => Ok(field.exp(j)),
                    LambdaValue::Dlog(j) => Err(CliError::Config(format!(
                        "lambda exponent {j} is not below q - 1 = {order}"
                    ))),
                })
                .collect(),
        }
    }
}

impl FromStr for LambdaSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "all" => return Ok(LambdaSpec::All),
            "subfield" => return Ok(LambdaSpec::Subfield),
            _ => {}
        }
        let values = s
            .split(',')
            .map(|tok| match tok.trim() {
                "zero" => Ok(LambdaValue::Zero),
                t => t
                    .parse()
                    .map(LambdaValue::Dlog)
                    .map_err(|_| format!("bad lambda `{t}`")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LambdaSpec::List(values))
    }
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::All => f.write_str("all"),
            LambdaSpec::Subfield => f.write_str("subfield"),
            LambdaSpec::List(values) => {
                let parts: Vec<String> = values
                    .iter()
                    .map(|v| match v {
                        LambdaValue::Zero => "zero".to_string(),
                        LambdaValue::Dlog(j) => j.to_string(),
                    })
                    .collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

impl Serialize for LambdaSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LambdaSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}
