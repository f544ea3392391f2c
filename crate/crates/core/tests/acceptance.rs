//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Set `MIRROR_ZETA_TIER=extended` to also rebuild the quartic's numerator
//! from counts over the extension fields themselves (about a minute).
//! Criterion 9 contains a mirror-side identity that the computed zeta
//! functions contradict; it is reported as FAIL and listed in
//! `KNOWN_FAILURES`, so it does not change the exit status. Any other FAIL
//! does.

use std::time::{Duration, Instant};

use mirror_zeta::counting::{
    count_instance, count_y, count_y_by_strata, pencil_solutions, stratum_identity_sides,
    CountMethod, DworkInstance, Smoothness, SolutionClass, DEFAULT_ENUMERATION_CAP,
};
use mirror_zeta::ff::{build_field, FieldCtx, FqElem};
use mirror_zeta::padic::{digit_sum, gauss_product_ord_q, pi_valuation, GaussSums, Tower};
use mirror_zeta::pipeline::{
    analyse_slopes, congruence_report, count_extension, run_zeta, Budget, Tier, ZetaRun,
    CI_DIMENSIONS, CI_FIELDS,
};
use mirror_zeta::slope::{
    hodge_numbers_dwork, mirror_slope_identity, ordinary_slope_zeta, slope_fe_check, slope_zeta,
    Slope, SlopeZeta,
};
use mirror_zeta::zeta::{recover_zeta, IntPoly, Variety, ZetaData, ZetaShape};
use num_bigint::BigInt;
use num_rational::Ratio;

const PURITY_TOL: f64 = 1e-8;
const SIGN_ROOT_TOL: f64 = 1e-8;
const CAP: u128 = DEFAULT_ENUMERATION_CAP;
const GAUSS_FIELDS: [(u64, u32); 6] = [(2, 2), (3, 1), (3, 2), (5, 1), (7, 1), (2, 3)];
const KNOWN_FAILURES: [u32; 1] = [9];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn field(p: u64, r: u32) -> FieldCtx {
    build_field(p, r, 0).expect("field")
}

fn prime_power(q: u64) -> (u64, u32) {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q > 1");
    let mut r = 0;
    let mut x = q;
    while x > 1 {
        x /= p;
        r += 1;
    }
    (p, r)
}

fn gauss_interpolation() -> Outcome {
    let mut checked = 0;
    for (p, r) in GAUSS_FIELDS {
        let f = field(p, r);
        let t = Tower::new(&f, 12).expect("tower");
        let g = GaussSums::new(&t, &f);
        for a in f.elements() {
            if &g.interpolate(a).expect("sum") != t.zeta_pow(f.trace(a)) {
                return Outcome::new(false, format!("GF({p}^{r}) element {}", a.code()));
            }
            checked += 1;
        }
    }
    Outcome::new(true, format!("{checked} elements at N=12"))
}

fn stickelberger() -> Outcome {
    let mut checked = 0;
    for (p, r) in GAUSS_FIELDS {
        let f = field(p, r);
        let t = Tower::new(&f, 12).expect("tower");
        let g = GaussSums::new(&t, &f);
        for k in 0..f.q() {
            let v = pi_valuation(&t, &g.get(k).expect("sum"));
            let sigma = digit_sum(k, f.prime_power());
            if !v.is_exact() || v.ord_p() != Ratio::new(sigma as i64, p as i64 - 1) {
                return Outcome::new(false, format!("GF({p}^{r}) k={k}"));
            }
            checked += 1;
        }
    }
    Outcome::new(true, format!("{checked} Gauss sums"))
}

fn oracle_equivalence() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        for q in [4, 5, 7, 8, 9] {
            let (p, r) = prime_power(q);
            let f = field(p, r);
            for lambda in f.elements() {
                let inst = DworkInstance::new(n, lambda).expect("n");
                if let Err(e) = count_instance(&inst, &f, 1, CountMethod::Both, CAP) {
                    return Outcome::new(
                        false,
                        format!("n={n} q={q} lambda={}: {e}", lambda.code()),
                    );
                }
                checked += 1;
            }
        }
    }
    Outcome::new(true, format!("{checked} members"))
}

fn mirror_congruence() -> Outcome {
    let mut rows = 0;
    for n in [2, 3, 4] {
        for q in [3, 5, 7] {
            let f = field(q, 1);
            for lambda in f.elements() {
                let inst = DworkInstance::new(n, lambda).expect("n");
                for k in 1..=3 {
                    let rec = match count_extension(
                        &inst,
                        &f,
                        k,
                        CountMethod::Charsum,
                        Budget::default(),
                    ) {
                        Ok(rec) => rec,
                        Err(e) if k == 3 => {
                            eprintln!("  skipped n={n} q={q} k=3: {e}");
                            continue;
                        }
                        Err(e) => return Outcome::new(false, e.to_string()),
                    };
                    let report = congruence_report(&rec);
                    if !report.pass || report.torus_form == Some(false) {
                        return Outcome::new(false, format!("{report:?}"));
                    }
                    rows += 1;
                }
            }
        }
    }
    Outcome::new(true, format!("{rows} congruences, 0 failures"))
}

fn mirror_count_identity() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        for q in [3u64, 4, 5] {
            let (lhs, rhs) = stratum_identity_sides(n, q);
            if lhs != rhs {
                return Outcome::new(false, format!("face identity n={n} q={q}"));
            }
            let (p, r) = prime_power(q);
            let f = field(p, r);
            for lambda in f.elements() {
                let inst = DworkInstance::new(n, lambda).expect("n");
                let rec = count_instance(&inst, &f, 1, CountMethod::Charsum, CAP).expect("count");
                let strata = count_y_by_strata(&inst, &f, CAP).expect("strata");
                if count_y(rec.n_gstar, q, n).expect("Y") != strata || rec.y != strata {
                    return Outcome::new(false, format!("n={n} q={q} lambda={}", lambda.code()));
                }
                checked += 1;
            }
        }
    }
    Outcome::new(true, format!("{checked} members"))
}

fn valuation_lemmas() -> Outcome {
    let (mut nonzero, mut admissible) = (0usize, 0usize);
    for q in [4u64, 5, 7, 8, 9, 11, 13] {
        let (p, r) = prime_power(q);
        let pp = field(p, r).prime_power();
        for n in [2, 3, 4] {
            for sol in pencil_solutions(n, q, false) {
                if sol.class == SolutionClass::Zero {
                    continue;
                }
                let v = gauss_product_ord_q(&sol.k, pp);
                let floor = if sol.class == SolutionClass::Admissible {
                    2
                } else {
                    1
                };
                if v < Ratio::from(floor) {
                    return Outcome::new(false, format!("q={q} n={n} k={:?} ord_q={v}", sol.k));
                }
                nonzero += 1;
                admissible += usize::from(sol.class == SolutionClass::Admissible);
            }
        }
    }
    Outcome::new(
        true,
        format!("{nonzero} nonzero solutions, {admissible} admissible"),
    )
}

fn elliptic_zeta(recovered: &mut Vec<ZetaData>) -> Outcome {
    let mut members = 0;
    let mut worst: f64 = 0.0;
    for q in [5u64, 7, 13] {
        let f = field(q, 1);
        for lambda in f.elements() {
            let run = run_zeta(2, &f, lambda, Budget::default()).expect("run");
            collect(&run, recovered);
            if run.smoothness.verdict != Smoothness::Smooth {
                continue;
            }
            let (Some(x), Some(y), Some(c)) = (&run.x, &run.y, &run.checks) else {
                return Outcome::new(false, format!("q={q}: {:?} {:?}", run.x_error, run.y_error));
            };
            let purity = c.purity_p.as_ref().expect("degree 2");
            worst = worst.max(purity.max_deviation);
            let ok = x.numerator == y.numerator
                && x.numerator.degree() == 2
                && c.r_poly.as_ref() == Some(&IntPoly::one())
                && purity.max_deviation <= PURITY_TOL;
            if !ok {
                return Outcome::new(
                    false,
                    format!(
                        "q={q} lambda={}: P={} Q={}",
                        lambda.code(),
                        x.numerator,
                        y.numerator
                    ),
                );
            }
            members += 1;
        }
    }
    Outcome::new(
        true,
        format!("{members} smooth members, max |alpha|/sqrt(q) - 1 = {worst:.1e}"),
    )
}

fn quartic_zeta(recovered: &mut Vec<ZetaData>, tier: Tier) -> Outcome {
    let f = field(5, 1);
    let run = run_zeta(3, &f, FqElem::ZERO, Budget::with_tier(tier)).expect("run");
    collect(&run, recovered);
    let (Some(x), Some(y), Some(c)) = (&run.x, &run.y, &run.checks) else {
        return Outcome::new(false, format!("{:?} {:?}", run.x_error, run.y_error));
    };
    let dev = c.r_sign_deviation.unwrap_or(f64::INFINITY);
    let r_deg = c.r_poly.as_ref().map_or(0, IntPoly::degree);
    let mut ok = y.numerator.degree() == 3
        && x.numerator.degree() == 21
        && c.divides
        && r_deg == 18
        && dev <= SIGN_ROOT_TOL;
    let mut detail = format!(
        "lambda=0 over F_5: deg Q=3, deg P={}, Q | P: {}, deg R={r_deg}, max ||alpha|-1|+|Im| = {dev:.1e}",
        x.numerator.degree(),
        c.divides
    );
    if tier == Tier::Extended {
        match direct_quartic_numerator(&f) {
            Ok(direct) => {
                ok &= direct == x.numerator;
                detail.push_str(&format!(
                    "; direct engine k<=11 agrees: {}",
                    direct == x.numerator
                ));
            }
            Err(e) => {
                ok = false;
                detail.push_str(&format!("; direct engine: {e}"));
            }
        }
    } else {
        detail.push_str("; counts via base-field Gauss sums");
    }
    Outcome::new(ok, detail)
}

/// P recovered from counts over `GF(5^k)`, `k <= 11`, each computed in the
/// extension field itself, then checked against the degree-12 count.
fn direct_quartic_numerator(f: &FieldCtx) -> Result<IntPoly, String> {
    let inst = DworkInstance::new(3, FqElem::ZERO).map_err(|e| e.to_string())?;
    let mut xs = Vec::new();
    for k in 1..=11 {
        let ext = f
            .extend_with_cap(k, Tier::Extended.field_cap())
            .map_err(|e| e.to_string())?;
        let c = mirror_zeta::counting::count_via_charsum(&inst.base_change(&ext), &ext.field, None)
            .map_err(|e| e.to_string())?;
        xs.push(BigInt::from(c.x));
    }
    let z = recover_zeta(&ZetaShape::new(Variety::X, 3), 5, 1, None, &xs, true)
        .map_err(|e| e.to_string())?;
    let k12 = count_extension(&inst, f, 12, CountMethod::Charsum, Budget::default())
        .map_err(|e| e.to_string())?;
    if z.counts(12)[11] != BigInt::from(k12.x) {
        return Err("degree-12 count disagrees".into());
    }
    Ok(z.numerator)
}

fn collect(run: &ZetaRun, out: &mut Vec<ZetaData>) {
    out.extend(run.pure_zetas().cloned());
}

/// Adds every pure zeta function of the CI grid not already collected.
fn ci_sweep(recovered: &mut Vec<ZetaData>) -> Result<(), String> {
    let key = |z: &ZetaData| (z.variety, z.n, z.p, z.r, z.lambda_dlog);
    for (p, r) in CI_FIELDS {
        let f = build_field(p, r, 0).map_err(|e| e.to_string())?;
        let lambdas = std::iter::once(FqElem::ZERO).chain((0..f.q() - 1).map(|j| f.exp(j)));
        for lambda in lambdas {
            for n in CI_DIMENSIONS {
                let run = run_zeta(n, &f, lambda, Budget::default())
                    .map_err(|e| format!("n={n} q={}: {e}", f.q()))?;
                for z in run.pure_zetas() {
                    if !recovered.iter().any(|seen| key(seen) == key(z)) {
                        recovered.push(z.clone());
                    }
                }
            }
        }
    }
    Ok(())
}

fn k3_display() -> SlopeZeta {
    SlopeZeta::from_terms([
        (Slope::from(0), -2),
        (Slope::from(1), -20),
        (Slope::from(2), -2),
    ])
}

fn slope_zeta_criterion(recovered: &[ZetaData]) -> Outcome {
    let fe_failures: Vec<String> = recovered
        .iter()
        .filter(|z| !analyse_slopes(z).functional_equation)
        .map(|z| {
            format!(
                "{:?} n={} q={} lambda={:?}",
                z.variety,
                z.n,
                z.q(),
                z.lambda_dlog
            )
        })
        .collect();
    let fe_ok = fe_failures.is_empty();
    let quartic = |v: Variety| {
        recovered
            .iter()
            .find(|z| z.n == 3 && z.q() == 5 && z.variety == v && z.lambda_dlog.is_none())
    };
    let (Some(x), Some(y)) = (quartic(Variety::X), quartic(Variety::Y)) else {
        return Outcome::new(false, "quartic zeta functions missing");
    };
    let sx = slope_zeta(x);
    let sy = slope_zeta(y);
    let x_ok = sx == k3_display() && slope_fe_check(&sx, 2, 24);
    let y_ok = sy.is_one();
    let detail = format!(
        "FE on {} zeta functions: {}; S(X) = {sx} matches display: {x_ok}; S(Y) = {sy}, expected 1: {y_ok}; S(X) = S(Y)^(-1)^d: {}",
        recovered.len(),
        if fe_ok { "ok".to_string() } else { fe_failures.join(", ") },
        mirror_slope_identity(&sx, &sy, 2),
    );
    Outcome::new(fe_ok && x_ok && y_ok, detail)
}

fn ordinary_closed_form() -> Outcome {
    let h = hodge_numbers_dwork(4);
    let computed = ordinary_slope_zeta(&h);
    let display = SlopeZeta::from_terms([
        (Slope::from(0), 1),
        (Slope::from(1), 101),
        (Slope::from(2), 101),
        (Slope::from(3), 1),
        (Slope::from(0), -1),
        (Slope::from(1), -1),
        (Slope::from(2), -1),
        (Slope::from(3), -1),
    ]);
    let e = h.e_vector();
    Outcome::new(
        computed == display && e == [0, 100, 100, 0],
        format!("{computed}, e = {e:?}"),
    )
}

fn newton_above_hodge(recovered: &[ZetaData]) -> Outcome {
    let violations: Vec<String> = recovered
        .iter()
        .filter(|z| !analyse_slopes(z).newton_above_hodge)
        .map(|z| {
            format!(
                "{:?} n={} q={} lambda={:?}",
                z.variety,
                z.n,
                z.q(),
                z.lambda_dlog
            )
        })
        .collect();
    Outcome::new(
        violations.is_empty(),
        format!(
            "{} polygon pairs, violations: {violations:?}",
            recovered.len()
        ),
    )
}

fn main() {
    let tier = match std::env::var("MIRROR_ZETA_TIER").as_deref() {
        Ok("extended") => Tier::Extended,
        _ => Tier::Ci,
    };
    let mut recovered = Vec::new();
    let mut lines = Vec::new();
    let mut run = |id: u32, name: &str, budget: Duration, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let elapsed = t.elapsed();
        let pass = out.pass && elapsed <= budget;
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {id:>2} {verdict} {name} [{:.2}s / {}s] {}",
            elapsed.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
        lines.push((id, pass));
    };
    let secs = Duration::from_secs;
    run(
        1,
        "gauss-sum interpolation",
        secs(10),
        &mut gauss_interpolation,
    );
    run(2, "stickelberger valuations", secs(10), &mut stickelberger);
    run(
        3,
        "character sums = enumeration",
        secs(120),
        &mut oracle_equivalence,
    );
    run(
        4,
        "mirror congruence mod q^k",
        secs(600),
        &mut mirror_congruence,
    );
    run(
        5,
        "mirror count by strata",
        secs(60),
        &mut mirror_count_identity,
    );
    run(
        6,
        "gauss product valuations",
        secs(120),
        &mut valuation_lemmas,
    );
    run(7, "n=2 zeta, P = Q, R = 1", secs(60), &mut || {
        elliptic_zeta(&mut recovered)
    });
    let budget8 = if tier == Tier::Extended {
        secs(3600)
    } else {
        secs(60)
    };
    run(8, "n=3 zeta, Q | P, R roots +-1", budget8, &mut || {
        quartic_zeta(&mut recovered, tier)
    });
    run(9, "slope zeta", secs(600), &mut || {
        if let Err(e) = ci_sweep(&mut recovered) {
            return Outcome::new(false, format!("CI sweep: {e}"));
        }
        slope_zeta_criterion(&recovered)
    });
    run(
        10,
        "ordinary closed form",
        secs(1),
        &mut ordinary_closed_form,
    );
    run(11, "newton above hodge", secs(60), &mut || {
        newton_above_hodge(&recovered)
    });

    let passed = lines.iter().filter(|(_, p)| *p).count();
    println!("{passed}/{} criteria passed", lines.len());
    let unexpected: Vec<u32> = lines
        .iter()
        .filter(|(id, p)| !p && !KNOWN_FAILURES.contains(id))
        .map(|(id, _)| *id)
        .collect();
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
