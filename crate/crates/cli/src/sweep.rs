//! Grid sweeps: counts, congruences, zeta recovery and slopes for every
//! member of every requested pencil, with a summary and a manifest.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use mirror_zeta::counting::{
    CountMethod, CountRecord, DworkInstance, Smoothness, DEFAULT_ENUMERATION_CAP,
};
use mirror_zeta::ff::{build_field, FieldCtx, FqElem};
use mirror_zeta::pipeline::{
    analyse_slopes, congruence_report, count_extension, run_zeta, Budget, CongruenceReport,
    PStatus, SlopeRun, Tier, ZetaRun, CI_DIMENSIONS, CI_FIELDS, CI_K_MAX,
};
use mirror_zeta::slope::{mirror_slope_identity, slope_zeta};
use mirror_zeta::zeta::Variety;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::lambda::LambdaSpec;
use crate::output::Sink;

pub const SUMMARY_SCHEMA: &str = "sweep-summary/1";
pub const MANIFEST_SCHEMA: &str = "sweep-manifest/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KMaxOverride {
    pub n: usize,
    pub q: u64,
    pub k_max: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub prime_list: Vec<u64>,
    pub r_list: Vec<u32>,
    /// Fields with more elements are left out of the grid.
    pub max_q: Option<u64>,
    pub k_max: u32,
    pub k_max_overrides: Vec<KMaxOverride>,
    pub lambda: LambdaSpec,
    pub method: CountMethod,
    pub tier: Tier,
    pub output_dir: Option<PathBuf>,
    pub precision: Option<u32>,
    pub enumeration_cap: u64,
    pub zeta: bool,
    pub seed: u64,
}

impl Default for SweepConfig {
    /// The CI grid: `n <= 4`, `q <= 9`, `k <= 2`, every lambda.
    fn default() -> Self {
        let mut primes: Vec<u64> = CI_FIELDS.iter().map(|&(p, _)| p).collect();
        primes.dedup();
        let mut degrees: Vec<u32> = CI_FIELDS.iter().map(|&(_, r)| r).collect();
        degrees.sort_unstable();
        degrees.dedup();
        SweepConfig {
            n_list: CI_DIMENSIONS.to_vec(),
            prime_list: primes,
            r_list: degrees,
            max_q: Some(9),
            k_max: CI_K_MAX,
            k_max_overrides: Vec::new(),
            lambda: LambdaSpec::All,
            method: CountMethod::Charsum,
            tier: Tier::Ci,
            output_dir: None,
            precision: None,
            enumeration_cap: DEFAULT_ENUMERATION_CAP as u64,
            zeta: true,
            seed: 0,
        }
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn budget(&self) -> Budget {
        Budget {
            tier: self.tier,
            enumeration_cap: self.enumeration_cap as u128,
            precision: self.precision,
        }
    }

    /// `(p, r)` pairs in increasing order of q.
    pub fn fields(&self) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = self
            .prime_list
            .iter()
            .flat_map(|&p| self.r_list.iter().map(move |&r| (p, r)))
            .filter(|&(p, r)| {
                self.max_q
                    .is_none_or(|m| p.checked_pow(r).is_some_and(|q| q <= m))
            })
            .collect();
        out.sort_by_key(|&(p, r)| (p.pow(r), p));
        out.dedup();
        out
    }

    pub fn k_max_for(&self, n: usize, q: u64) -> u32 {
        self.k_max_overrides
            .iter()
            .find(|o| o.n == n && o.q == q)
            .map_or(self.k_max, |o| o.k_max)
    }

    /// Grid points whose counts need fields beyond the tier's cap.
    pub fn offenders(&self) -> Vec<String> {
        let cap = self.tier.field_cap() as u128;
        let mut out = Vec::new();
        for (p, r) in self.fields() {
            let q = p.pow(r);
            for &n in &self.n_list {
                let k = self.k_max_for(n, q);
                if (q as u128).checked_pow(k).is_none_or(|s| s > cap) {
                    out.push(format!("n={n} q={q} k={k}"));
                }
            }
        }
        out
    }
}

/// Everything computed for one member of one pencil.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceOutcome {
    pub id: String,
    pub n: usize,
    pub p: u64,
    pub r: u32,
    pub lambda_dlog: Option<u64>,
    pub counts: Vec<CountRecord>,
    pub congruences: Vec<CongruenceReport>,
    pub zeta: Option<ZetaRun>,
    pub slopes: Vec<SlopeRun>,
    pub mirror_slope_identity: Option<bool>,
    pub error: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl InstanceOutcome {
    pub fn completed(&self) -> bool {
        self.error.is_none()
    }

    fn max_precision(&self) -> Option<u32> {
        self.counts.iter().filter_map(|c| c.precision).max()
    }
}

pub fn instance_id(n: usize, p: u64, r: u32, lambda_dlog: Option<u64>) -> String {
    match lambda_dlog {
        Some(j) => format!("n{n}-p{p}-r{r}-g{j}"),
        None => format!("n{n}-p{p}-r{r}-zero"),
    }
}

struct Job<'a> {
    n: usize,
    field: &'a FieldCtx,
    lambda: FqElem,
    k_max: u32,
}

fn run_job(job: &Job<'_>, cfg: &SweepConfig) -> InstanceOutcome {
    let t = Instant::now();
    let f = job.field;
    let lambda_dlog = (!job.lambda.is_zero()).then(|| f.dlog(job.lambda).expect("nonzero"));
    let mut out = InstanceOutcome {
        id: instance_id(job.n, f.p(), f.r(), lambda_dlog),
        n: job.n,
        p: f.p(),
        r: f.r(),
        lambda_dlog,
        counts: Vec::new(),
        congruences: Vec::new(),
        zeta: None,
        slopes: Vec::new(),
        mirror_slope_identity: None,
        error: None,
        elapsed: Duration::ZERO,
    };
    let budget = cfg.budget();
    let result = (|| -> Result<(), String> {
        let inst = DworkInstance::new(job.n, job.lambda).map_err(|e| e.to_string())?;
        for k in 1..=job.k_max {
            let rec = count_extension(&inst, f, k, cfg.method, budget)
                .map_err(|e| format!("k={k}: {e}"))?;
            out.congruences.push(congruence_report(&rec));
            out.counts.push(rec);
        }
        if cfg.zeta {
            let run = run_zeta(job.n, f, job.lambda, budget).map_err(|e| format!("zeta: {e}"))?;
            out.slopes = run.pure_zetas().map(analyse_slopes).collect();
            if let (Some(x), Some(y)) = (&run.x, &run.y) {
                out.mirror_slope_identity = Some(mirror_slope_identity(
                    &slope_zeta(x),
                    &slope_zeta(y),
                    job.n - 1,
                ));
            }
            out.zeta = Some(run);
        }
        Ok(())
    })();
    out.error = result.err();
    out.elapsed = t.elapsed();
    out
}

/// Run every grid point, in parallel, returning outcomes in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<InstanceOutcome>, CliError> {
    let fields: Vec<FieldCtx> = cfg
        .fields()
        .into_iter()
        .map(|(p, r)| build_field(p, r, cfg.seed))
        .collect::<Result<_, _>>()?;
    let mut jobs = Vec::new();
    for field in &fields {
        let lambdas = cfg.lambda.resolve(field)?;
        for &n in &cfg.n_list {
            let k_max = cfg.k_max_for(n, field.q());
            jobs.extend(lambdas.iter().map(|&lambda| Job {
                n,
                field,
                lambda,
                k_max,
            }));
        }
    }
    Ok(jobs.par_iter().map(|job| run_job(job, cfg)).collect())
}

/// Per-family aggregate, one per `(n, p, r)`.
#[derive(Debug, Clone, Default, Serialize)]
pub struct FamilySummary {
    pub n: usize,
    pub p: u64,
    pub r: u32,
    pub instances: usize,
    pub completed: usize,
    pub smooth: usize,
    pub congruence_rows: usize,
    pub congruence_failures: usize,
    pub torus_form_failures: usize,
    pub x_recovered: usize,
    pub y_recovered: usize,
    pub recovery_failures: usize,
    pub check_failures: usize,
    pub ordinary_x: usize,
    pub ordinary_fraction_x: Option<f64>,
    pub fe_failures: usize,
    pub newton_hodge_violations: usize,
    pub mirror_slope_identity_holds: usize,
    /// Rendered slope zeta functions with multiplicities, per variety.
    pub slope_zetas: BTreeMap<String, BTreeMap<String, usize>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub schema: String,
    pub instances: usize,
    pub completed: usize,
    pub congruence_rows: usize,
    pub congruence_failures: usize,
    pub fe_failures: usize,
    pub newton_hodge_violations: usize,
    pub families: Vec<FamilySummary>,
}

pub fn summarise(outcomes: &[InstanceOutcome]) -> SweepSummary {
    let mut families: BTreeMap<(usize, u64, u32), FamilySummary> = BTreeMap::new();
    for o in outcomes {
        let fam = families
            .entry((o.n, o.p, o.r))
            .or_insert_with(|| FamilySummary {
                n: o.n,
                p: o.p,
                r: o.r,
                ..FamilySummary::default()
            });
        fam.instances += 1;
        fam.completed += usize::from(o.completed());
        fam.congruence_rows += o.congruences.len();
        fam.congruence_failures += o.congruences.iter().filter(|c| !c.pass).count();
        fam.torus_form_failures += o
            .congruences
            .iter()
            .filter(|c| c.torus_form == Some(false))
            .count();
        if let Some(z) = &o.zeta {
            fam.smooth += usize::from(z.smoothness.verdict == Smoothness::Smooth);
            fam.x_recovered += usize::from(z.x.is_some());
            fam.y_recovered += usize::from(z.y.is_some());
            fam.recovery_failures +=
                usize::from(z.y.is_none()) + usize::from(z.p_status == PStatus::Failed);
            fam.check_failures += usize::from(z.checks.is_some() && !z.succeeded());
        }
        for s in &o.slopes {
            if s.variety == Variety::X {
                fam.ordinary_x += usize::from(s.ordinary);
            }
            fam.fe_failures += usize::from(!s.functional_equation);
            fam.newton_hodge_violations += usize::from(!s.newton_above_hodge);
            let key = serde_json::to_value(s.variety)
                .ok()
                .and_then(|v| v.as_str().map(String::from));
            *fam.slope_zetas
                .entry(key.unwrap_or_default())
                .or_default()
                .entry(s.rendered.clone())
                .or_default() += 1;
        }
        fam.mirror_slope_identity_holds += usize::from(o.mirror_slope_identity == Some(true));
    }
    let families: Vec<FamilySummary> = families
        .into_values()
        .map(|mut f| {
            f.ordinary_fraction_x =
                (f.x_recovered > 0).then(|| f.ordinary_x as f64 / f.x_recovered as f64);
            f
        })
        .collect();
    SweepSummary {
        schema: SUMMARY_SCHEMA.to_string(),
        instances: outcomes.len(),
        completed: outcomes.iter().filter(|o| o.completed()).count(),
        congruence_rows: families.iter().map(|f| f.congruence_rows).sum(),
        congruence_failures: families.iter().map(|f| f.congruence_failures).sum(),
        fe_failures: families.iter().map(|f| f.fe_failures).sum(),
        newton_hodge_violations: families.iter().map(|f| f.newton_hodge_violations).sum(),
        families,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestEntry {
    pub id: String,
    pub status: &'static str,
    pub k_max: u32,
    pub max_precision: Option<u32>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub core_version: String,
    pub config: SweepConfig,
    pub instances: Vec<ManifestEntry>,
    pub failed: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub started_unix: u64,
    pub total_seconds: f64,
    pub threads: usize,
    pub instances: BTreeMap<String, f64>,
}

pub fn manifest(cfg: &SweepConfig, outcomes: &[InstanceOutcome]) -> Manifest {
    let instances: Vec<ManifestEntry> = outcomes
        .iter()
        .map(|o| ManifestEntry {
            id: o.id.clone(),
            status: if o.completed() { "completed" } else { "failed" },
            k_max: cfg.k_max_for(o.n, o.p.pow(o.r)),
            max_precision: o.max_precision(),
            error: o.error.clone(),
        })
        .collect();
    Manifest {
        schema: MANIFEST_SCHEMA.to_string(),
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: mirror_zeta::VERSION.to_string(),
        // where the report was written is not part of it
        config: SweepConfig {
            output_dir: None,
            ..cfg.clone()
        },
        failed: outcomes
            .iter()
            .filter(|o| !o.completed())
            .map(|o| o.id.clone())
            .collect(),
        instances,
    }
}

/// Write every output file. Timing lives apart from the rest so that the
/// other files are reproducible byte for byte.
pub fn write_outputs(
    sink: &Sink,
    cfg: &SweepConfig,
    outcomes: &[InstanceOutcome],
    started: SystemTime,
    total: Duration,
    threads: usize,
) -> Result<SweepSummary, CliError> {
    let counts: Vec<&CountRecord> = outcomes.iter().flat_map(|o| &o.counts).collect();
    let congruences: Vec<&CongruenceReport> =
        outcomes.iter().flat_map(|o| &o.congruences).collect();
    let zetas: Vec<&ZetaRun> = outcomes.iter().filter_map(|o| o.zeta.as_ref()).collect();
    let slopes: Vec<&SlopeRun> = outcomes.iter().flat_map(|o| &o.slopes).collect();
    sink.jsonl("counts", &counts)?;
    sink.jsonl("congruence", &congruences)?;
    sink.jsonl("zeta", &zetas)?;
    sink.jsonl("slope", &slopes)?;
    let summary = summarise(outcomes);
    sink.json("summary", &summary)?;
    sink.json("manifest", &manifest(cfg, outcomes))?;
    let timing = Timing {
        started_unix: started
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        total_seconds: total.as_secs_f64(),
        threads,
        instances: outcomes
            .iter()
            .map(|o| (o.id.clone(), o.elapsed.as_secs_f64()))
            .collect(),
    };
    sink.json("timing", &timing)?;
    Ok(summary)
}
