//! Subcommand handlers. Each returns `Ok` or a [`CliError`] carrying its
//! exit code; human-readable notes go to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime};

use clap::{Args, Parser, Subcommand};
use mirror_zeta::counting::{CountMethod, CountRecord, DworkInstance};
use mirror_zeta::ff::{build_field, FieldCtx};
use mirror_zeta::padic::{write_gauss_table, GaussSums, Tower};
use mirror_zeta::pipeline::{
    analyse_slopes, congruence_report, count_extension, run_zeta, Budget, CongruenceReport,
    PStatus, SlopeRun, Tier, ZetaRun, ZETA_RUN_SCHEMA,
};
use mirror_zeta::slope::{mirror_slope_identity, slope_zeta, SlopeZeta};
use mirror_zeta::zeta::{Variety, ZetaData, ZETA_SCHEMA};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;
use crate::lambda::LambdaSpec;
use crate::output::Sink;
use crate::sweep::{run_sweep, write_outputs, SweepConfig};

#[derive(Debug, Parser)]
#[command(
    name = "mirror-zeta",
    version,
    about = "Point counts, mirror congruences and slope zeta functions of the Dwork pencil"
)]
pub struct Cli {
    /// JSON sweep configuration; its caps, tier and seed apply to every command.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory. Without it, JSON lines go to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed selecting the field model (modulus and generator).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Field-size tier: `ci` (tables up to 2^20 elements) or `extended`.
    #[arg(long, global = true, value_parser = parse_tier)]
    pub tier: Option<Tier>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Point counts of X and Y over extensions.
    Count(CountArgs),
    /// #X = #Y mod q^k, one row per (lambda, k).
    Congruence(FamilyArgs),
    /// Recover P and Q and check divisibility, purity and R_n.
    Zeta(ZetaArgs),
    /// Slope zeta functions, Newton and Hodge polygons.
    Slope(SlopeArgs),
    /// Run a parameter grid and write a report directory.
    Sweep,
    /// Dump a Gauss-sum table.
    Gauss(GaussArgs),
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    /// Dimension of the ambient projective space.
    #[arg(long)]
    pub n: usize,
    /// Characteristic.
    #[arg(long)]
    pub p: u64,
    /// Degree of the base field over F_p.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Extension degrees, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<u32>,
    /// `all`, `subfield`, or a list of exponents of the generator and `zero`.
    #[arg(long, default_value = "all")]
    pub lambda: LambdaSpec,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// `charsum`, `brute` or `both` (brute force as an oracle).
    #[arg(long, default_value = "charsum", value_parser = parse_method)]
    pub method: CountMethod,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// An exponent of the generator, or `zero`.
    #[arg(long)]
    pub lambda: LambdaSpec,
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    /// Zeta output (`zeta/1` or `zeta-run/1` JSON, one per line) to read
    /// instead of computing.
    #[arg(long, conflicts_with_all = ["n", "p", "lambda"])]
    pub input: Option<PathBuf>,
    #[arg(long, required_unless_present = "input")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "input")]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// An exponent of the generator, or `zero`.
    #[arg(long, required_unless_present = "input")]
    pub lambda: Option<LambdaSpec>,
}

#[derive(Debug, Args)]
pub struct GaussArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Coordinates are kept modulo p^precision.
    #[arg(long, default_value_t = 12)]
    pub precision: u32,
    /// Indices to dump; all of `0..=q-1` by default.
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<u64>,
}

fn parse_enum<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}

fn parse_tier(s: &str) -> Result<Tier, String> {
    parse_enum(s)
}

fn parse_method(s: &str) -> Result<CountMethod, String> {
    parse_enum(s)
}

/// Settings after merging the config file with command-line flags.
pub struct Context {
    pub config: SweepConfig,
    pub sink: Sink,
    pub threads: usize,
}

impl Context {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let mut config = match &cli.config {
            Some(path) => SweepConfig::from_json(&fs::read_to_string(path)?)?,
            None => SweepConfig::default(),
        };
        if let Some(t) = cli.tier {
            config.tier = t;
        }
        if let Some(s) = cli.seed {
            config.seed = s;
        }
        if let Some(out) = &cli.out {
            config.output_dir = Some(out.clone());
        }
        let dir = match &cli.command {
            Command::Sweep => Some(
                config
                    .output_dir
                    .clone()
                    .unwrap_or_else(|| PathBuf::from("sweep-out")),
            ),
            _ => cli.out.clone(),
        };
        Ok(Context {
            sink: Sink::new(dir.as_deref())?,
            config,
            threads: cli.threads,
        })
    }

    fn budget(&self) -> Budget {
        self.config.budget()
    }

    fn field(&self, p: u64, r: u32) -> Result<FieldCtx, CliError> {
        Ok(build_field(p, r, self.config.seed)?)
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::from_cli(&cli)?;
    if ctx.threads > 0 {
        // a second initialisation only happens in tests and is harmless
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(ctx.threads)
            .build_global();
    }
    match &cli.command {
        Command::Count(a) => cmd_count(&ctx, a),
        Command::Congruence(a) => cmd_congruence(&ctx, a),
        Command::Zeta(a) => cmd_zeta(&ctx, a),
        Command::Slope(a) => cmd_slope(&ctx, a),
        Command::Sweep => cmd_sweep(&ctx),
        Command::Gauss(a) => cmd_gauss(&ctx, a),
    }
}

fn family_counts(
    ctx: &Context,
    a: &FamilyArgs,
    method: CountMethod,
) -> Result<Vec<CountRecord>, CliError> {
    let f = ctx.field(a.field.p, a.field.r)?;
    let lambdas = a.lambda.resolve(&f)?;
    let budget = ctx.budget();
    let jobs: Vec<_> = lambdas
        .iter()
        .flat_map(|&l| a.k.iter().map(move |&k| (l, k)))
        .collect();
    let records: Result<Vec<CountRecord>, CliError> = jobs
        .par_iter()
        .map(|&(lambda, k)| {
            let inst = DworkInstance::new(a.field.n, lambda)?;
            Ok(count_extension(&inst, &f, k, method, budget)?)
        })
        .collect();
    records
}

pub fn cmd_count(ctx: &Context, a: &CountArgs) -> Result<(), CliError> {
    let records = family_counts(ctx, &a.family, a.method)?;
    ctx.sink.jsonl("counts", &records)
}

#[derive(Debug, Serialize)]
pub struct CongruenceSummary {
    pub schema: &'static str,
    pub rows: usize,
    pub passed: usize,
    pub failed: usize,
    pub torus_form_checked: usize,
    pub torus_form_failed: usize,
}

pub fn congruence_summary(rows: &[CongruenceReport]) -> CongruenceSummary {
    let torus: Vec<bool> = rows.iter().filter_map(|r| r.torus_form).collect();
    CongruenceSummary {
        schema: "congruence-summary/1",
        rows: rows.len(),
        passed: rows.iter().filter(|r| r.pass).count(),
        failed: rows.iter().filter(|r| !r.pass).count(),
        torus_form_checked: torus.len(),
        torus_form_failed: torus.iter().filter(|&&ok| !ok).count(),
    }
}

/// Report failures on stderr and turn them into exit code 5.
pub fn judge_congruences(rows: &[CongruenceReport]) -> Result<(), CliError> {
    let bad: Vec<&CongruenceReport> = rows
        .iter()
        .filter(|r| !r.pass || r.torus_form == Some(false))
        .collect();
    for r in &bad {
        eprintln!(
            "FAIL n={} q={}^{} k={} lambda={:?}: #X={} #Y={} residue {} mod {}",
            r.n, r.p, r.r, r.k, r.lambda_dlog, r.x, r.y, r.residue_difference, r.modulus
        );
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(CliError::Congruence(bad.len()))
    }
}

pub fn cmd_congruence(ctx: &Context, a: &FamilyArgs) -> Result<(), CliError> {
    let records = family_counts(ctx, a, CountMethod::Charsum)?;
    let rows: Vec<CongruenceReport> = records.iter().map(congruence_report).collect();
    ctx.sink.jsonl("congruence", &rows)?;
    let summary = congruence_summary(&rows);
    ctx.sink.json("congruence_summary", &summary)?;
    eprintln!(
        "{} rows, {} passed, {} failed",
        summary.rows, summary.passed, summary.failed
    );
    judge_congruences(&rows)
}

fn single_lambda(spec: &LambdaSpec, f: &FieldCtx) -> Result<mirror_zeta::ff::FqElem, CliError> {
    match spec {
        LambdaSpec::List(v) if v.len() == 1 => Ok(spec.resolve(f)?[0]),
        _ => Err(CliError::Config(format!(
            "expected a single lambda, got `{spec}`"
        ))),
    }
}

pub fn cmd_zeta(ctx: &Context, a: &ZetaArgs) -> Result<(), CliError> {
    let f = ctx.field(a.field.p, a.field.r)?;
    let lambda = single_lambda(&a.lambda, &f)?;
    let run = run_zeta(a.field.n, &f, lambda, ctx.budget())?;
    ctx.sink.json("zeta_run", &run)?;
    if ctx.sink.dir().is_some() {
        for z in run.x.iter().chain(run.y.iter()) {
            ctx.sink.json(&format!("zeta_{:?}", z.variety), z)?;
        }
    }
    report_zeta(&run);
    judge_zeta(&run)
}

fn report_zeta(run: &ZetaRun) {
    let xs: Vec<String> = run.counts.iter().map(|c| c.x.to_string()).collect();
    let ys: Vec<String> = run.counts.iter().map(|c| c.y.to_string()).collect();
    eprintln!("#X: {}", xs.join(", "));
    eprintln!("#Y: {}", ys.join(", "));
    match &run.x {
        Some(z) => eprintln!("P = {}", z.numerator),
        None => eprintln!("P: {}", run.x_error.as_deref().unwrap_or("not recovered")),
    }
    match &run.y {
        Some(z) => eprintln!("Q = {}", z.numerator),
        None => eprintln!("Q: {}", run.y_error.as_deref().unwrap_or("not recovered")),
    }
    if let Some(c) = &run.checks {
        match &c.r_poly {
            Some(r) => eprintln!("R_{} = {r}", run.n),
            None => eprintln!("R_{}: {}", run.n, c.r_error.as_deref().unwrap_or("-")),
        }
        if let Some(d) = c.r_sign_deviation {
            eprintln!("max distance of R roots from +-1: {d:.2e}");
        }
    }
}

fn judge_zeta(run: &ZetaRun) -> Result<(), CliError> {
    if let Some(e) = &run.y_error {
        return Err(CliError::Recovery(format!("Q: {e}")));
    }
    match run.p_status {
        PStatus::Singular => Ok(()),
        PStatus::BeyondTier => Err(CliError::Cap(run.x_error.clone().unwrap_or_default())),
        PStatus::Failed => Err(CliError::Recovery(format!(
            "P: {}",
            run.x_error.clone().unwrap_or_default()
        ))),
        PStatus::Recovered if run.succeeded() => Ok(()),
        PStatus::Recovered => Err(CliError::Recovery("checks on (P, Q) failed".into())),
    }
}

/// `S_p(X)` against `S_p(Y)^((-1)^d)` for one member.
#[derive(Debug, Serialize)]
pub struct MirrorSlopeRow {
    pub schema: &'static str,
    pub n: usize,
    pub p: u64,
    pub r: u32,
    pub lambda_dlog: Option<u64>,
    pub x: SlopeZeta,
    pub y: SlopeZeta,
    pub identity_holds: bool,
}

fn read_zeta_file(path: &Path) -> Result<Vec<ZetaData>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let stream = serde_json::Deserializer::from_str(&text).into_iter::<Value>();
    let mut out = Vec::new();
    for value in stream {
        let value = value?;
        match value.get("schema").and_then(Value::as_str) {
            Some(ZETA_SCHEMA) => out.push(serde_json::from_value(value)?),
            Some(ZETA_RUN_SCHEMA) => {
                let singular = value.get("p_status").and_then(Value::as_str) == Some("singular");
                let sides: &[&str] = if singular { &["x"] } else { &["x", "y"] };
                for side in sides {
                    if let Some(z) = value.get(*side).filter(|v| !v.is_null()) {
                        out.push(serde_json::from_value(z.clone())?);
                    }
                }
            }
            other => {
                return Err(CliError::Config(format!(
                    "unexpected schema {other:?} in {}",
                    path.display()
                )))
            }
        }
    }
    Ok(out)
}

pub fn cmd_slope(ctx: &Context, a: &SlopeArgs) -> Result<(), CliError> {
    let zetas = match (&a.input, a.n, a.p, &a.lambda) {
        (Some(path), ..) => read_zeta_file(path)?,
        (None, Some(n), Some(p), Some(spec)) => {
            let f = ctx.field(p, a.r)?;
            let run = run_zeta(n, &f, single_lambda(spec, &f)?, ctx.budget())?;
            run.pure_zetas().cloned().collect()
        }
        _ => {
            return Err(CliError::Config(
                "give --input or --n, --p and --lambda".into(),
            ))
        }
    };
    let rows: Vec<SlopeRun> = zetas.iter().map(analyse_slopes).collect();
    ctx.sink.jsonl("slope", &rows)?;
    let mut mirror = Vec::new();
    for x in zetas.iter().filter(|z| z.variety == Variety::X) {
        let partner = zetas.iter().find(|y| {
            y.variety == Variety::Y
                && (y.n, y.p, y.r, y.lambda_dlog) == (x.n, x.p, x.r, x.lambda_dlog)
        });
        if let Some(y) = partner {
            let (sx, sy) = (slope_zeta(x), slope_zeta(y));
            mirror.push(MirrorSlopeRow {
                schema: "slope-mirror/1",
                n: x.n,
                p: x.p,
                r: x.r,
                lambda_dlog: x.lambda_dlog,
                identity_holds: mirror_slope_identity(&sx, &sy, x.n - 1),
                x: sx,
                y: sy,
            });
        }
    }
    if !mirror.is_empty() {
        ctx.sink.jsonl("slope_mirror", &mirror)?;
    }
    for row in &rows {
        eprintln!(
            "{:?} n={} q={}^{}: S = {}; ordinary: {}; FE: {}",
            row.variety, row.n, row.p, row.r, row.rendered, row.ordinary, row.functional_equation
        );
    }
    let broken: Vec<String> = rows
        .iter()
        .filter(|r| !r.functional_equation)
        .map(|r| {
            format!(
                "{:?} n={} q={}^{} lambda={:?}",
                r.variety, r.n, r.p, r.r, r.lambda_dlog
            )
        })
        .collect();
    if broken.is_empty() {
        Ok(())
    } else {
        Err(CliError::FunctionalEquation(broken.join(", ")))
    }
}

pub fn cmd_sweep(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.config;
    let offenders = cfg.offenders();
    if !offenders.is_empty() {
        return Err(CliError::Cap(format!(
            "grid needs the extended tier: {}",
            offenders.join("; ")
        )));
    }
    let started = SystemTime::now();
    let t = Instant::now();
    let outcomes = run_sweep(cfg)?;
    let summary = write_outputs(
        &ctx.sink,
        cfg,
        &outcomes,
        started,
        t.elapsed(),
        rayon::current_num_threads(),
    )?;
    eprintln!(
        "{} instances, {} completed, {} congruence rows ({} failed), {} FE failures, {} Newton/Hodge violations",
        summary.instances,
        summary.completed,
        summary.congruence_rows,
        summary.congruence_failures,
        summary.fe_failures,
        summary.newton_hodge_violations
    );
    if summary.completed == summary.instances {
        Ok(())
    } else {
        Err(CliError::PartialSweep {
            failed: summary.instances - summary.completed,
            total: summary.instances,
        })
    }
}

pub fn cmd_gauss(ctx: &Context, a: &GaussArgs) -> Result<(), CliError> {
    let f = ctx.field(a.p, a.r)?;
    let tower = Tower::new(&f, a.precision).map_err(|e| CliError::Cap(e.to_string()))?;
    let sums = GaussSums::new(&tower, &f);
    let ks: Vec<u64> = if a.k.is_empty() {
        (0..f.q()).collect()
    } else {
        a.k.clone()
    };
    if let Some(&bad) = ks.iter().find(|&&k| k >= f.q()) {
        return Err(CliError::Config(format!(
            "index {bad} outside [0, {}]",
            f.q() - 1
        )));
    }
    let mut out = ctx.sink.writer("gauss.jsonl")?;
    write_gauss_table(&mut out, &sums, ks)?;
    out.flush()?;
    Ok(())
}
