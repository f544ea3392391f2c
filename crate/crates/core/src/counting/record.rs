use serde::{Deserialize, Serialize};

use super::{
    count_affine_brute, count_torus_brute, count_via_charsum, count_x, count_y, CountError,
    DworkInstance,
};
use crate::decimal;
use crate::ff::{Extension, FieldCtx};

pub const COUNT_SCHEMA: &str = "count/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Brute,
    Charsum,
    Both,
}

/// One line of count output. Integers are carried as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRecord {
    pub schema: String,
    #[serde(with = "decimal")]
    pub n: usize,
    #[serde(with = "decimal")]
    pub p: u64,
    #[serde(with = "decimal")]
    pub r: u32,
    #[serde(with = "decimal")]
    pub k: u32,
    #[serde(with = "decimal::option")]
    pub lambda_dlog: Option<u64>,
    #[serde(rename = "Nf", with = "decimal")]
    pub n_f: u128,
    #[serde(rename = "Ngstar", with = "decimal")]
    pub n_gstar: u128,
    #[serde(rename = "X", with = "decimal")]
    pub x: u128,
    #[serde(rename = "Y", with = "decimal")]
    pub y: u128,
    pub method: CountMethod,
    #[serde(with = "decimal::option")]
    pub precision: Option<u32>,
}

impl CountRecord {
    /// Extension field size `q^k`.
    pub fn field_size(&self) -> u128 {
        (self.p as u128).pow(self.r * self.k)
    }
}

/// Count the member `inst` of the pencil (lambda in `base`) over the
/// degree-k extension of `base`.
pub fn count_instance(
    inst: &DworkInstance,
    base: &FieldCtx,
    k: u32,
    method: CountMethod,
    cap: u128,
) -> Result<CountRecord, CountError> {
    let ext = base.extend(k)?;
    count_over(inst, base, &ext, method, cap, None)
}

/// As [`count_instance`], with the extension already built and an
/// optional precision override for the character sums.
pub(crate) fn count_over(
    inst: &DworkInstance,
    base: &FieldCtx,
    ext: &Extension,
    method: CountMethod,
    cap: u128,
    precision: Option<u32>,
) -> Result<CountRecord, CountError> {
    let field = &ext.field;
    let lifted = inst.base_change(ext);
    let k = ext.degree();
    let n = inst.n();
    let q = field.q();
    let lambda_dlog = if inst.lambda().is_zero() {
        None
    } else {
        Some(base.dlog(inst.lambda())?)
    };
    let mut record = CountRecord {
        schema: COUNT_SCHEMA.to_string(),
        n,
        p: base.p(),
        r: base.r(),
        k,
        lambda_dlog,
        n_f: 0,
        n_gstar: 0,
        x: 0,
        y: 0,
        method,
        precision: None,
    };
    let brute = |record: &mut CountRecord| -> Result<(), CountError> {
        let nf = count_affine_brute(&lifted, field, cap)?;
        let ng = count_torus_brute(&lifted, field, cap)?;
        record.n_f = nf;
        record.n_gstar = ng;
        record.x = count_x(nf, q)?;
        record.y = count_y(ng, q, n)?;
        Ok(())
    };
    match method {
        CountMethod::Brute => brute(&mut record)?,
        CountMethod::Charsum => {
            let c = count_via_charsum(&lifted, field, precision)?;
            record.n_f = c.n_f;
            record.n_gstar = c.n_gstar;
            record.x = c.x;
            record.y = c.y;
            record.precision = Some(c.precision);
        }
        CountMethod::Both => {
            brute(&mut record)?;
            let c = count_via_charsum(&lifted, field, precision)?;
            if (c.n_f, c.n_gstar) != (record.n_f, record.n_gstar) {
                return Err(CountError::OracleMismatch {
                    brute: format!("Nf={} Ngstar={}", record.n_f, record.n_gstar),
                    charsum: format!("Nf={} Ngstar={}", c.n_f, c.n_gstar),
                });
            }
            record.precision = Some(c.precision);
        }
    }
    Ok(record)
}
