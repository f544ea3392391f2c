//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Each export returns a JSON string; the functions behind them are plain
//! Rust so they can be tested natively.

use mirror_zeta::counting::{CountMethod, DworkInstance};
use mirror_zeta::ff::{build_field, FieldCtx, FqElem};
use mirror_zeta::padic::{digit_sum, pi_valuation, GaussSums, Tower};
use mirror_zeta::pipeline::{
    analyse_slopes, congruence_report, count_extension, run_zeta, Budget, PStatus,
};
use num_rational::Ratio;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest field the page will build; keeps every request interactive.
pub const MAX_Q: u64 = 64;
pub const MAX_N: usize = 4;
const GAUSS_PRECISION: u32 = 10;

#[derive(Debug, Serialize)]
pub struct CountRow {
    pub lambda: String,
    pub x: String,
    pub y: String,
    pub congruent: bool,
}

#[derive(Debug, Serialize)]
pub struct GaussRow {
    pub k: u64,
    pub digit_sum: u64,
    /// ord_p of the computed sum as `a/b`.
    pub ord_p: String,
    pub predicted: String,
    pub agrees: bool,
}

#[derive(Debug, Serialize)]
pub struct ZetaSummary {
    pub smoothness: String,
    pub p_status: PStatus,
    pub x_counts: Vec<String>,
    pub y_counts: Vec<String>,
    pub p_poly: Option<String>,
    pub q_poly: Option<String>,
    pub r_poly: Option<String>,
    pub notes: Vec<String>,
    pub slopes: Vec<SlopeLine>,
}

#[derive(Debug, Serialize)]
pub struct SlopeLine {
    pub variety: String,
    pub slope_zeta: String,
    pub ordinary: bool,
    pub functional_equation: bool,
}

fn small_field(p: u64, r: u32) -> Result<FieldCtx, String> {
    let q = p.checked_pow(r).filter(|&q| q <= MAX_Q);
    if q.is_none() {
        return Err(format!(
            "the page handles fields with at most {MAX_Q} elements"
        ));
    }
    build_field(p, r, 0).map_err(|e| e.to_string())
}

fn check_n(n: usize) -> Result<(), String> {
    if (2..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must lie in 2..={MAX_N}"))
    }
}

fn lambda_label(f: &FieldCtx, lambda: FqElem) -> String {
    match f.dlog(lambda) {
        Ok(j) if !lambda.is_zero() => format!("g^{j}"),
        _ => "0".into(),
    }
}

/// `#X` and `#Y` over `GF(q^k)` for every member of the pencil.
pub fn count_rows(n: usize, p: u64, r: u32, k: u32) -> Result<Vec<CountRow>, String> {
    check_n(n)?;
    let f = small_field(p, r)?;
    let lambdas = std::iter::once(FqElem::ZERO).chain((0..f.q() - 1).map(|j| f.exp(j)));
    lambdas
        .map(|lambda| {
            let inst = DworkInstance::new(n, lambda).map_err(|e| e.to_string())?;
            let rec = count_extension(&inst, &f, k, CountMethod::Charsum, Budget::default())
                .map_err(|e| e.to_string())?;
            Ok(CountRow {
                lambda: lambda_label(&f, lambda),
                x: rec.x.to_string(),
                y: rec.y.to_string(),
                congruent: congruence_report(&rec).pass,
            })
        })
        .collect()
}

/// Gauss sums `G(k)` over `GF(q)` with their valuations next to the digit-sum
/// prediction.
pub fn gauss_rows(p: u64, r: u32) -> Result<Vec<GaussRow>, String> {
    let f = small_field(p, r)?;
    let tower = Tower::new(&f, GAUSS_PRECISION).map_err(|e| e.to_string())?;
    let sums = GaussSums::new(&tower, &f);
    (0..f.q())
        .map(|k| {
            let g = sums.get(k).map_err(|e| e.to_string())?;
            let v = pi_valuation(&tower, &g);
            let sigma = digit_sum(k, f.prime_power());
            let predicted = Ratio::new(sigma as i64, p as i64 - 1);
            Ok(GaussRow {
                k,
                digit_sum: sigma,
                ord_p: v.ord_p().to_string(),
                predicted: predicted.to_string(),
                agrees: v.is_exact() && v.ord_p() == predicted,
            })
        })
        .collect()
}

/// Zeta numerators, R and slope zeta functions of one member. `lambda` is
/// an exponent of the generator; `None` is the Fermat member.
pub fn zeta_summary(n: usize, p: u64, r: u32, lambda: Option<u64>) -> Result<ZetaSummary, String> {
    check_n(n)?;
    let f = small_field(p, r)?;
    let elem = match lambda {
        None => FqElem::ZERO,
        Some(j) if j < f.q() - 1 => f.exp(j),
        Some(j) => return Err(format!("exponent {j} is not below q - 1 = {}", f.q() - 1)),
    };
    let run = run_zeta(n, &f, elem, Budget::default()).map_err(|e| e.to_string())?;
    let notes = [&run.x_error, &run.y_error]
        .into_iter()
        .flatten()
        .cloned()
        .collect();
    Ok(ZetaSummary {
        smoothness: format!("{:?}", run.smoothness.verdict).to_lowercase(),
        p_status: run.p_status,
        x_counts: run.counts.iter().map(|c| c.x.to_string()).collect(),
        y_counts: run.counts.iter().map(|c| c.y.to_string()).collect(),
        p_poly: run.x.as_ref().map(|z| z.numerator.to_string()),
        q_poly: run.y.as_ref().map(|z| z.numerator.to_string()),
        r_poly: run
            .checks
            .as_ref()
            .and_then(|c| c.r_poly.as_ref())
            .map(ToString::to_string),
        notes,
        slopes: run
            .pure_zetas()
            .map(|z| {
                let s = analyse_slopes(z);
                SlopeLine {
                    variety: format!("{:?}", z.variety),
                    slope_zeta: s.rendered,
                    ordinary: s.ordinary,
                    functional_equation: s.functional_equation,
                }
            })
            .collect(),
    })
}

fn to_js<T: Serialize>(result: Result<T, String>) -> Result<String, JsError> {
    let value = result.map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn counts(n: usize, p: u32, r: u32, k: u32) -> Result<String, JsError> {
    to_js(count_rows(n, p.into(), r, k))
}

#[wasm_bindgen]
pub fn gauss(p: u32, r: u32) -> Result<String, JsError> {
    to_js(gauss_rows(p.into(), r))
}

/// A negative `lambda` selects the Fermat member.
#[wasm_bindgen]
pub fn zeta(n: usize, p: u32, r: u32, lambda: i32) -> Result<String, JsError> {
    let lambda = u64::try_from(lambda).ok();
    to_js(zeta_summary(n, p.into(), r, lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elliptic_counts_are_congruent() {
        let rows = count_rows(2, 7, 1, 1).unwrap();
        assert_eq!(rows.len(), 7);
        assert_eq!(rows[0].lambda, "0");
        assert!(rows.iter().all(|r| r.congruent));
    }

    #[test]
    fn large_fields_are_refused() {
        assert!(count_rows(2, 3, 4, 1).is_err());
        assert!(count_rows(5, 3, 1, 1).is_err());
    }

    #[test]
    fn gauss_valuations_follow_digit_sums() {
        let rows = gauss_rows(3, 2).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.agrees));
    }

    #[test]
    fn fermat_quartic_summary() {
        let s = zeta_summary(3, 5, 1, None).unwrap();
        assert_eq!(s.q_poly.as_deref(), Some("1 + T - 5T^2 - 125T^3"));
        assert_eq!(s.slopes.len(), 2);
        assert!(s.slopes.iter().all(|l| l.functional_equation));
    }

    #[test]
    fn bad_exponent_is_reported() {
        assert!(zeta_summary(2, 5, 1, Some(4)).is_err());
    }
}
