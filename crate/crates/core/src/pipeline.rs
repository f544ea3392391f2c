//! End-to-end runs shared by the command line and the acceptance suite:
//! counts over a tower of extensions, congruence rows, zeta recovery with
//! its checks, and slope analysis.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::{
    count_fermat_lifted, count_over, smoothness_probe, CountError, CountMethod, CountRecord,
    DworkInstance, Smoothness, SmoothnessReport, COUNT_SCHEMA, DEFAULT_ENUMERATION_CAP,
};
use crate::decimal;
use crate::ff::{FieldCtx, FqElem, DEFAULT_FIELD_CAP};
use crate::slope::{
    hodge_numbers_dwork, hodge_polygon, matching_row, newton_polygon, slope_fe_check, slope_zeta,
    NewtonPolygon, SlopeZeta,
};
use crate::zeta::{
    expected_degree_p, r_poly, recover_zeta, sign_root_deviation, weight_purity_check, IntPoly,
    PurityReport, Variety, ZetaData, ZetaError, ZetaShape, DEFAULT_PURITY_TOL,
};

pub const CONGRUENCE_SCHEMA: &str = "congruence/1";
pub const ZETA_RUN_SCHEMA: &str = "zeta-run/1";
pub const SLOPE_SCHEMA: &str = "slope/1";

/// Budget for building extension fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    #[default]
    Ci,
    Extended,
}

/// Dimensions of the default sweep.
pub const CI_DIMENSIONS: [usize; 3] = [2, 3, 4];
/// Fields `(p, r)` of the default sweep: every `q <= 9`.
pub const CI_FIELDS: [(u64, u32); 7] = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)];
/// Extension degrees counted by the default sweep.
pub const CI_K_MAX: u32 = 2;

/// Limits shared by every run: the tier's field cap, the enumeration cap
/// for brute force, and an optional p-adic precision override.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub tier: Tier,
    pub enumeration_cap: u128,
    pub precision: Option<u32>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            tier: Tier::Ci,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            precision: None,
        }
    }
}

impl Budget {
    pub fn with_tier(tier: Tier) -> Self {
        Budget {
            tier,
            ..Budget::default()
        }
    }
}

impl Tier {
    /// Largest extension field built element by element.
    pub fn field_cap(self) -> u64 {
        match self {
            Tier::Ci => 1 << 20,
            Tier::Extended => DEFAULT_FIELD_CAP,
        }
    }
}

/// Counts over the degree-k extension of `base`. The Fermat member uses
/// base-field Gauss sums when every character involved is a lift;
/// otherwise the extension is built, within the tier's field cap.
pub fn count_extension(
    inst: &DworkInstance,
    base: &FieldCtx,
    k: u32,
    method: CountMethod,
    budget: Budget,
) -> Result<CountRecord, CountError> {
    if inst.lambda().is_zero() && method == CountMethod::Charsum {
        match count_fermat_lifted(inst.n(), base, k, budget.precision) {
            Ok(c) => {
                return Ok(CountRecord {
                    schema: COUNT_SCHEMA.to_string(),
                    n: inst.n(),
                    p: base.p(),
                    r: base.r(),
                    k,
                    lambda_dlog: None,
                    n_f: c.n_f,
                    n_gstar: c.n_gstar,
                    x: c.x,
                    y: c.y,
                    method,
                    precision: Some(c.precision),
                })
            }
            Err(CountError::NotLiftable { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let ext = base.extend_with_cap(k, budget.tier.field_cap())?;
    count_over(
        inst,
        base,
        &ext,
        method,
        budget.enumeration_cap,
        budget.precision,
    )
}

/// One row of the mirror congruence check over `GF(q^k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub schema: String,
    pub n: usize,
    pub p: u64,
    pub r: u32,
    pub k: u32,
    #[serde(with = "decimal::option")]
    pub lambda_dlog: Option<u64>,
    #[serde(rename = "X", with = "decimal")]
    pub x: u128,
    #[serde(rename = "Y", with = "decimal")]
    pub y: u128,
    #[serde(with = "decimal")]
    pub modulus: BigInt,
    /// `(#X - #Y) mod q^k`.
    #[serde(with = "decimal")]
    pub residue_difference: BigInt,
    pub pass: bool,
    /// `#X = N_g* + 1 - n(-1)^(n-1) mod q^k`, checked for nonzero lambda.
    pub torus_form: Option<bool>,
}

pub fn congruence_report(rec: &CountRecord) -> CongruenceReport {
    let modulus = BigInt::from(rec.field_size());
    let diff = BigInt::from(rec.x) - BigInt::from(rec.y);
    let residue_difference = num_integer::Integer::mod_floor(&diff, &modulus);
    let torus_form = rec.lambda_dlog.map(|_| {
        let sign: i64 = if (rec.n - 1).is_multiple_of(2) { 1 } else { -1 };
        let rhs = BigInt::from(rec.n_gstar) + 1 - BigInt::from(rec.n as i64 * sign);
        num_integer::Integer::mod_floor(&(BigInt::from(rec.x) - rhs), &modulus) == BigInt::from(0)
    });
    CongruenceReport {
        schema: CONGRUENCE_SCHEMA.to_string(),
        n: rec.n,
        p: rec.p,
        r: rec.r,
        k: rec.k,
        lambda_dlog: rec.lambda_dlog,
        x: rec.x,
        y: rec.y,
        modulus,
        pass: residue_difference == BigInt::from(0),
        residue_difference,
        torus_form,
    }
}

/// What happened to the numerator P of X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PStatus {
    Recovered,
    /// The member is singular, so P is not defined by the shape used.
    Singular,
    /// The counts P needs are over fields beyond the tier cap.
    BeyondTier,
    Failed,
}

/// Checks run on a recovered pair `(P, Q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaChecks {
    pub purity_p: Option<PurityReport>,
    pub purity_q: Option<PurityReport>,
    pub weil_bound_p: bool,
    pub weil_bound_q: bool,
    /// Expanding both zeta functions reproduces every count used.
    pub round_trip: bool,
    /// `#X = #Y mod q^k` read off the recovered zeta functions.
    pub congruent: bool,
    pub divides: bool,
    pub r_poly: Option<IntPoly>,
    pub r_error: Option<String>,
    pub r_degree_expected: usize,
    /// Multiplicities of `(1 - T)` and `(1 + T)` in R when it is a
    /// product of such factors.
    pub r_sign_factors: Option<(usize, usize)>,
    pub r_sign_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaRun {
    pub schema: String,
    pub n: usize,
    pub p: u64,
    pub r: u32,
    #[serde(with = "decimal::option")]
    pub lambda_dlog: Option<u64>,
    pub smoothness: SmoothnessReport,
    pub counts: Vec<CountRecord>,
    pub x: Option<ZetaData>,
    pub p_status: PStatus,
    pub x_error: Option<String>,
    pub y: Option<ZetaData>,
    pub y_error: Option<String>,
    pub checks: Option<ZetaChecks>,
}

impl ZetaRun {
    /// Both numerators recovered and every check passed.
    pub fn succeeded(&self) -> bool {
        let Some(c) = &self.checks else { return false };
        c.purity_p.as_ref().is_some_and(|r| r.passed)
            && c.purity_q.as_ref().is_some_and(|r| r.passed)
            && c.weil_bound_p
            && c.weil_bound_q
            && c.round_trip
            && c.congruent
            && c.divides
            && c.r_error.is_none()
    }

    /// Recovered zeta functions that satisfy the functional equation; a
    /// singular member's Q is left out.
    pub fn pure_zetas(&self) -> impl Iterator<Item = &ZetaData> {
        let singular = self.p_status == PStatus::Singular;
        self.x
            .iter()
            .chain(self.y.iter().filter(move |_| !singular))
    }
}

/// Count, recover P and Q, and check divisibility, purity and R_n.
/// Singular members only get Q, read off Newton's identities without the
/// functional equation; members whose P would need counts over fields
/// beyond the tier cap also only get Q.
pub fn run_zeta(
    n: usize,
    base: &FieldCtx,
    lambda: FqElem,
    budget: Budget,
) -> Result<ZetaRun, CountError> {
    let inst = DworkInstance::new(n, lambda)?;
    let (p, r) = (base.p(), base.r());
    let q = base.q();
    let lambda_dlog = if lambda.is_zero() {
        None
    } else {
        Some(base.dlog(lambda)?)
    };
    let smoothness = smoothness_probe(&inst, base, 1, budget.enumeration_cap)?;
    let shape_x = ZetaShape::new(Variety::X, n);
    let shape_y = ZetaShape::new(Variety::Y, n);
    let smooth = smoothness.verdict != Smoothness::Singular;
    // singular members skip the functional equation, so Q needs deg Q counts
    let m_y = if smooth {
        shape_y.count_budget()
    } else {
        shape_y.count_budget().max(shape_y.degree)
    };
    let reachable = |m: usize| {
        lambda.is_zero()
            || (q as u128)
                .checked_pow(m as u32)
                .is_some_and(|s| s <= budget.tier.field_cap() as u128)
    };
    let x_blocked = if !smooth {
        Some((
            PStatus::Singular,
            "singular member: P is not recovered".to_string(),
        ))
    } else if !reachable(shape_x.count_budget()) {
        let m = shape_x.count_budget();
        Some((
            PStatus::BeyondTier,
            format!("P needs counts over GF({q}^{m}) beyond the tier cap"),
        ))
    } else {
        None
    };
    // the top Fermat count is the one that meets precision and table limits
    let mut top = None;
    let x_blocked = match x_blocked {
        None if lambda.is_zero() => {
            let m = shape_x.count_budget();
            match count_extension(&inst, base, m as u32, CountMethod::Charsum, budget) {
                Ok(rec) => {
                    top = Some(rec);
                    None
                }
                Err(e) if e.is_capacity() => Some((
                    PStatus::BeyondTier,
                    format!("P needs a count over degree {m}: {e}"),
                )),
                Err(_) => None,
            }
        }
        blocked => blocked,
    };
    let m_x = if x_blocked.is_none() {
        shape_x.count_budget()
    } else {
        0
    };

    let mut counts = Vec::new();
    let mut count_error: Option<(bool, String)> = None;
    let count_next = |counts: &mut Vec<CountRecord>| {
        let k = counts.len() as u32 + 1;
        match count_extension(&inst, base, k, CountMethod::Charsum, budget) {
            Ok(rec) => {
                counts.push(rec);
                None
            }
            Err(e) => Some((e.is_capacity(), format!("count over degree {k}: {e}"))),
        }
    };
    while counts.len() < m_x.max(m_y) {
        if counts.len() + 1 == m_x {
            if let Some(rec) = top.take() {
                counts.push(rec);
                continue;
            }
        }
        count_error = count_next(&mut counts);
        if count_error.is_some() {
            break;
        }
    }
    let column = |counts: &[CountRecord], pick: fn(&CountRecord) -> u128| {
        counts
            .iter()
            .map(|c| BigInt::from(pick(c)))
            .collect::<Vec<_>>()
    };
    let recover = |shape: &ZetaShape, data: &[BigInt], m: usize, err: &Option<(bool, String)>| {
        if data.len() < m {
            return Err(Failure::Counts(
                err.as_ref()
                    .map_or_else(|| "missing counts".into(), |(_, e)| e.clone()),
            ));
        }
        recover_zeta(shape, p, r, lambda_dlog, data, smooth).map_err(Failure::Zeta)
    };

    // an ambiguous sign is settled by further counts, up to deg Q
    let mut ys = column(&counts, |c| c.y);
    let mut y_result = recover(&shape_y, &ys, m_y, &count_error);
    while matches!(y_result, Err(Failure::Zeta(ZetaError::AmbiguousSign)))
        && counts.len() < shape_y.degree
        && count_error.is_none()
    {
        count_error = count_next(&mut counts);
        ys = column(&counts, |c| c.y);
        y_result = recover(&shape_y, &ys, m_y, &count_error);
    }
    let xs = column(&counts, |c| c.x);
    let (y, y_error) = split(y_result.map_err(|e| e.to_string()));
    let (x, x_error, p_status) = match x_blocked {
        None => match recover(&shape_x, &xs, m_x, &count_error) {
            Ok(z) => (Some(z), None, PStatus::Recovered),
            Err(e @ Failure::Counts(_)) if count_error.as_ref().is_some_and(|(cap, _)| *cap) => {
                (None, Some(e.to_string()), PStatus::BeyondTier)
            }
            Err(e) => (None, Some(e.to_string()), PStatus::Failed),
        },
        Some((status, reason)) => (None, Some(reason), status),
    };

    let checks = match (&x, &y) {
        (Some(zx), Some(zy)) => Some(zeta_checks(zx, zy, &xs, &ys, q)),
        _ => None,
    };
    Ok(ZetaRun {
        schema: ZETA_RUN_SCHEMA.to_string(),
        n,
        p,
        r,
        lambda_dlog,
        smoothness,
        counts,
        x,
        p_status,
        x_error,
        y,
        y_error,
        checks,
    })
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    Counts(String),
    #[error(transparent)]
    Zeta(ZetaError),
}

fn split<T>(r: Result<T, String>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e)),
    }
}

fn zeta_checks(zx: &ZetaData, zy: &ZetaData, xs: &[BigInt], ys: &[BigInt], q: u64) -> ZetaChecks {
    let w = zx.n as u32 - 1;
    let purity = |poly: &IntPoly| {
        if poly.is_one() {
            None
        } else {
            weight_purity_check(poly, q, w, DEFAULT_PURITY_TOL).ok()
        }
    };
    let m = xs.len().min(ys.len());
    let round_trip = zx.counts(xs.len()) == xs && zy.counts(ys.len()) == ys;
    let cx = zx.counts(m);
    let cy = zy.counts(m);
    let congruent = (1..=m).all(|k| {
        let modulus = num_traits::pow(BigInt::from(q), k);
        num_integer::Integer::mod_floor(&(&cx[k - 1] - &cy[k - 1]), &modulus) == BigInt::from(0)
    });
    let quotient = r_poly(&zx.numerator, &zy.numerator, q);
    let divides = zx.numerator.divide(&zy.numerator).is_some();
    let (r_poly, r_error) = split(quotient.map_err(|e| e.to_string()));
    let (r_sign_factors, r_sign_deviation) = match &r_poly {
        Some(rp) => {
            let (a, b, rest) = rp.strip_unit_signs();
            let exact = rest.is_one().then_some((a, b));
            let dev = if rp.is_one() {
                Some(0.0)
            } else {
                sign_root_deviation(rp).ok()
            };
            (exact, dev)
        }
        None => (None, None),
    };
    ZetaChecks {
        purity_p: purity(&zx.numerator),
        purity_q: purity(&zy.numerator),
        weil_bound_p: zx.numerator.within_weil_bound(q, w),
        weil_bound_q: zy.numerator.within_weil_bound(q, w),
        round_trip,
        congruent,
        divides,
        r_poly,
        r_error,
        r_degree_expected: expected_degree_p(zx.n) - zx.n,
        r_sign_factors,
        r_sign_deviation,
    }
}

/// Slope analysis of one recovered zeta function.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeRun {
    pub schema: String,
    pub variety: Variety,
    pub n: usize,
    pub p: u64,
    pub r: u32,
    #[serde(with = "decimal::option")]
    pub lambda_dlog: Option<u64>,
    pub newton_polygon: NewtonPolygon,
    pub hodge_polygon: NewtonPolygon,
    pub slope_zeta: SlopeZeta,
    pub rendered: String,
    /// Euler characteristic fed to the functional equation.
    pub euler: i64,
    pub functional_equation: bool,
    pub ordinary: bool,
    pub newton_above_hodge: bool,
}

/// Newton and Hodge polygons of the numerator, the slope zeta function and
/// its functional equation. X is compared with the primitive middle Hodge
/// row; the mirror numerator with slopes `0, 1, ..., n-1` once each.
pub fn analyse_slopes(z: &ZetaData) -> SlopeRun {
    let np = newton_polygon(&z.numerator, z.p, z.r);
    let d = z.n - 1;
    let (row, euler) = match z.variety {
        Variety::X => {
            let h = hodge_numbers_dwork(z.n);
            let row = matching_row(&h, np.degree()).unwrap_or_else(|_| h.primitive_middle.clone());
            (row, Some(h.euler_characteristic()))
        }
        Variety::Y | Variety::AffineG => (vec![1; z.n], None),
    };
    let hodge = hodge_polygon(&row);
    let s = slope_zeta(z);
    let euler = euler.unwrap_or(-s.total());
    SlopeRun {
        schema: SLOPE_SCHEMA.to_string(),
        variety: z.variety,
        n: z.n,
        p: z.p,
        r: z.r,
        lambda_dlog: z.lambda_dlog,
        ordinary: np == hodge,
        newton_above_hodge: np.lies_above(&hodge),
        newton_polygon: np,
        hodge_polygon: hodge,
        rendered: s.to_string(),
        functional_equation: slope_fe_check(&s, d as i64, euler),
        euler,
        slope_zeta: s,
    }
}

/// Counts over `GF(q^k)` for every lambda in `base` and `k` in `ks`.
pub fn count_grid(
    n: usize,
    base: &FieldCtx,
    ks: &[u32],
    method: CountMethod,
    budget: Budget,
) -> Result<Vec<CountRecord>, CountError> {
    let mut out = Vec::new();
    for lambda in base.elements() {
        let inst = DworkInstance::new(n, lambda)?;
        for &k in ks {
            out.push(count_extension(&inst, base, k, method, budget)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::build_field;
    use crate::slope::Slope;

    #[test]
    fn elliptic_pipeline() {
        let f = build_field(7, 1, 0).unwrap();
        let run = run_zeta(2, &f, f.exp(1), Budget::default()).unwrap();
        assert!(run.succeeded(), "{run:?}");
        let c = run.checks.unwrap();
        assert_eq!(c.r_poly, Some(IntPoly::one()));
        assert_eq!(run.x.unwrap().numerator, run.y.unwrap().numerator);
    }

    #[test]
    fn singular_member_keeps_q() {
        let f = build_field(7, 1, 0).unwrap();
        let run = run_zeta(2, &f, f.from_int(1), Budget::default()).unwrap();
        assert_eq!(run.smoothness.verdict, Smoothness::Singular);
        assert_eq!(run.p_status, PStatus::Singular);
        assert!(run.x.is_none());
        assert!(!run.counts.is_empty());
        assert!(!run.succeeded());
    }

    #[test]
    fn fermat_quartic_pipeline() {
        let f = build_field(5, 1, 0).unwrap();
        let run = run_zeta(3, &f, FqElem::ZERO, Budget::default()).unwrap();
        assert!(run.succeeded(), "{run:?}");
        let c = run.checks.as_ref().unwrap();
        let rp = c.r_poly.as_ref().unwrap();
        assert_eq!(rp.degree(), 18);
        let (a, b) = c.r_sign_factors.unwrap();
        assert_eq!(a + b, 18);
        let sx = analyse_slopes(run.x.as_ref().unwrap());
        assert!(sx.ordinary && sx.functional_equation && sx.newton_above_hodge);
        assert_eq!(
            sx.slope_zeta,
            SlopeZeta::from_terms([
                (Slope::from(0), -2),
                (Slope::from(1), -20),
                (Slope::from(2), -2)
            ])
        );
    }

    #[test]
    fn congruence_rows() {
        let f = build_field(3, 1, 0).unwrap();
        let rows = count_grid(3, &f, &[1, 2], CountMethod::Both, Budget::default()).unwrap();
        assert_eq!(rows.len(), 6);
        for rec in &rows {
            let rep = congruence_report(rec);
            assert!(rep.pass, "{rep:?}");
            assert_ne!(rep.torus_form, Some(false), "{rep:?}");
        }
        let mut bad = rows[0].clone();
        bad.x += 1;
        let rep = congruence_report(&bad);
        assert!(!rep.pass);
        assert_eq!(rep.residue_difference, BigInt::from(1));
    }
}
