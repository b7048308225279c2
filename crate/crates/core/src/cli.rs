//! The `zetalab` command line. Every numeric parameter comes from a JSON
//! config; flags only pick paths and verbosity. Each run writes its outputs
//! and one `record.json` into the output directory (`--out`, else
//! `$ZETALAB_OUT`, else `./zetalab-out`).
//!
//! Exit codes: 0 success, 1 I/O or replay mismatch, 2 config error,
//! 3 domain or invariant error, 4 numeric failure.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{ArgAction, Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::numeric::fmt17;
use crate::random_model::{ErgodicShift, RNG_NAME};
use crate::shifts::ShiftEngine;
use crate::smoothing::{approximation_deficit, phi_n, zeta_n, Cutoff, DeficitRequest, SmoothingParams};
use crate::special_functions::{
    hurwitz_zeta_with, periodic_hurwitz_zeta_with, periodic_zeta_with, steuding_eval_with, EulerMaclaurin, Evaluation,
    PeriodicHurwitzSpec, PeriodicSequence, SteudingFunctionSpec,
};
use crate::stats::{
    collect_lattice_samples, collect_model_samples, compare, ecdf_nodes, mean_value_diagnostic, EmpiricalDistribution,
    DEFAULT_INTERVALS_PER_UNIT,
};
use crate::torus_analysis::{decay_envelope, fourier_table, integer_relation_scan, CharacterIndex, FrequencySet};
use crate::universality_search::{density_vs_epsilon, scan, ShiftExperiment, ShiftLattice, TargetForm};

pub const OUT_ENV: &str = "ZETALAB_OUT";
pub const RECORD_FILE: &str = "record.json";
const ECDF_POINTS: usize = 200;

#[derive(Parser)]
#[command(
    name = "zetalab",
    version,
    about = "Numerical laboratory for joint universality of zeta-functions"
)]
struct Cli {
    /// More log output (repeatable).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file.
    config: PathBuf,
    /// Output directory.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a function at a list of points.
    Eval(RunArgs),
    /// Universality scan over the shift lattice.
    Scan(RunArgs),
    /// Orbit averages g_N of a torus character.
    Fourier(RunArgs),
    /// Search for small integer relations among frequencies.
    Indep(RunArgs),
    /// Lattice samples against Haar model samples at test points.
    Limitcheck(RunArgs),
    /// Mean sup distance between the functions and their smoothed approximants.
    Deficit(RunArgs),
    /// Re-run a recorded run and compare output hashes.
    Replay {
        record: PathBuf,
        /// Output directory (default: `replay/` next to the record).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Scan(_) => "scan",
            Command::Fourier(_) => "fourier",
            Command::Indep(_) => "indep",
            Command::Limitcheck(_) => "limitcheck",
            Command::Deficit(_) => "deficit",
            Command::Replay { .. } => "replay",
        }
    }
}

/// A finished computation before it is written out.
#[derive(Debug, Default)]
pub struct Run {
    pub files: Vec<(String, String)>,
    pub stdout: String,
    pub seeds: Vec<u64>,
    pub rng: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_unix: f64,
    pub elapsed_seconds: f64,
}

/// Everything needed to reproduce a run: `command` and `config` alone
/// determine the outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: Value,
    pub seeds: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    pub timing: Timing,
    pub outputs: Vec<OutputEntry>,
}

pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn out_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("zetalab-out"))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn dispatch(command: &Command) -> Result<i32> {
    match command {
        Command::Replay { record, out } => replay(record, out),
        Command::Eval(args)
        | Command::Scan(args)
        | Command::Fourier(args)
        | Command::Indep(args)
        | Command::Limitcheck(args)
        | Command::Deficit(args) => {
            let config = read_json(&args.config)?;
            run_and_record(command.name(), config, &out_dir(&args.out))?;
            Ok(0)
        }
    }
}

fn replay(record_path: &Path, out: &Option<PathBuf>) -> Result<i32> {
    let record: RunRecord = serde_json::from_value(read_json(record_path)?)?;
    let dir = out
        .clone()
        .unwrap_or_else(|| record_path.parent().unwrap_or(Path::new(".")).join("replay"));
    let fresh = run_and_record(&record.command, record.config.clone(), &dir)?;
    let mut mismatches = 0;
    for old in &record.outputs {
        let status = match fresh.outputs.iter().find(|o| o.file == old.file) {
            Some(new) if new.sha256 == old.sha256 => "identical",
            Some(_) => "DIFFERS",
            None => "MISSING",
        };
        if status != "identical" {
            mismatches += 1;
        }
        println!("{} {status}", old.file);
    }
    Ok(if mismatches == 0 { 0 } else { 1 })
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Runs `command` on `config`, writes its files and the record into `dir`.
pub fn run_and_record(command: &str, config: Value, dir: &Path) -> Result<RunRecord> {
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64());
    let clock = Instant::now();
    log::info!("running {command}");
    let run = execute(command, &config)?;
    let elapsed = clock.elapsed().as_secs_f64();
    std::fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    for (name, contents) in &run.files {
        std::fs::write(dir.join(name), contents)?;
        outputs.push(OutputEntry {
            file: name.clone(),
            sha256: sha256_hex(contents.as_bytes()),
            bytes: contents.len() as u64,
        });
    }
    let record = RunRecord {
        tool: "zetalab".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: command.into(),
        config,
        seeds: run.seeds,
        rng: run.rng,
        timing: Timing {
            started_unix: started,
            elapsed_seconds: elapsed,
        },
        outputs,
    };
    std::fs::write(dir.join(RECORD_FILE), serde_json::to_string_pretty(&record)? + "\n")?;
    print!("{}", run.stdout);
    log::info!("{command} finished in {elapsed:.3}s, outputs in {}", dir.display());
    Ok(record)
}

/// Runs one subcommand in memory.
pub fn execute(command: &str, config: &Value) -> Result<Run> {
    let config = config.clone();
    match command {
        "eval" => cmd_eval(serde_json::from_value(config)?),
        "scan" => cmd_scan(serde_json::from_value(config)?),
        "fourier" => cmd_fourier(serde_json::from_value(config)?),
        "indep" => cmd_indep(serde_json::from_value(config)?),
        "limitcheck" => cmd_limitcheck(serde_json::from_value(config)?),
        "deficit" => cmd_deficit(serde_json::from_value(config)?),
        other => Err(Error::Config(format!("unknown command {other:?}"))),
    }
}

fn pretty(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FunctionChoice {
    Steuding {
        spec: SteudingFunctionSpec,
    },
    Hurwitz {
        alpha: f64,
    },
    PeriodicZeta {
        seq: PeriodicSequence,
    },
    PeriodicHurwitz {
        spec: PeriodicHurwitzSpec,
    },
    PhiN {
        spec: SteudingFunctionSpec,
        smoothing: SmoothingParams,
        #[serde(default)]
        cutoff: Cutoff,
    },
    ZetaN {
        spec: PeriodicHurwitzSpec,
        smoothing: SmoothingParams,
        #[serde(default)]
        cutoff: Cutoff,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EvalConfig {
    function: FunctionChoice,
    points: Vec<Complex64>,
    #[serde(default)]
    em: EulerMaclaurin,
}

fn cmd_eval(cfg: EvalConfig) -> Result<Run> {
    let mut rows = Vec::new();
    for &s in &cfg.points {
        let e = match &cfg.function {
            FunctionChoice::Steuding { spec } => steuding_eval_with(spec, s, &cfg.em)?,
            FunctionChoice::Hurwitz { alpha } => hurwitz_zeta_with(s, *alpha, &cfg.em)?,
            FunctionChoice::PeriodicZeta { seq } => periodic_zeta_with(seq, s, &cfg.em)?,
            FunctionChoice::PeriodicHurwitz { spec } => periodic_hurwitz_zeta_with(spec, s, &cfg.em)?,
            FunctionChoice::PhiN {
                spec,
                smoothing,
                cutoff,
            } => {
                let t = phi_n(spec, s, smoothing, *cutoff)?;
                Evaluation {
                    value: t.value,
                    error_bound: t.tail_bound,
                }
            }
            FunctionChoice::ZetaN {
                spec,
                smoothing,
                cutoff,
            } => {
                let t = zeta_n(spec, s, smoothing, *cutoff)?;
                Evaluation {
                    value: t.value,
                    error_bound: t.tail_bound,
                }
            }
        };
        rows.push(vec![
            fmt17(s.re),
            fmt17(s.im),
            fmt17(e.value.re),
            fmt17(e.value.im),
            fmt17(e.error_bound),
        ]);
    }
    let table = csv("re_s,im_s,re_value,im_value,error_bound", rows);
    Ok(Run {
        stdout: table.clone(),
        files: vec![("values.csv".into(), table)],
        ..Run::default()
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanConfig {
    experiment: ShiftExperiment,
    #[serde(default)]
    engine: ShiftEngine,
    /// Extra tolerances to recount at, ascending.
    #[serde(default)]
    epsilons: Vec<f64>,
}

fn cmd_scan(cfg: ScanConfig) -> Result<Run> {
    let exp = &cfg.experiment;
    let estimate = scan(exp, &cfg.engine)?;
    let rows = estimate.per_k_distances.clone().unwrap_or_default();
    let curve = density_vs_epsilon(&rows, &cfg.epsilons)?;
    let seeds: Vec<u64> = exp
        .targets
        .iter()
        .filter_map(|t| match t.form {
            TargetForm::Sampled { seed, .. } => Some(seed),
            _ => None,
        })
        .collect();
    let results = json!({
        "epsilon": exp.epsilon,
        "hits": estimate.hits,
        "total": estimate.total,
        "density": estimate.density,
        "density_vs_epsilon": curve
            .iter()
            .map(|(e, d)| json!({"epsilon": e, "hits": d.hits, "total": d.total, "density": d.density}))
            .collect::<Vec<_>>(),
    });
    let mut header = String::from("k,d_phi");
    for j in 1..exp.targets.len() {
        let _ = write!(header, ",d_zeta_{j}");
    }
    header.push_str(",hit");
    let per_k = csv(
        &header,
        rows.iter().map(|r| {
            let mut row = vec![r.k.to_string()];
            row.extend(r.distances.iter().map(|&d| fmt17(d)));
            row.push(u8::from(r.hit).to_string());
            row
        }),
    );
    Ok(Run {
        stdout: format!(
            "hits {} of {}, density {}\n",
            estimate.hits,
            estimate.total,
            fmt17(estimate.density)
        ),
        files: vec![("results.json".into(), pretty(&results)?), ("per_k.csv".into(), per_k)],
        rng: (!seeds.is_empty()).then(|| RNG_NAME.to_string()),
        seeds,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FourierConfig {
    index: CharacterIndex,
    shift: ErgodicShift,
    ns: Vec<u64>,
}

fn cmd_fourier(cfg: FourierConfig) -> Result<Run> {
    let rows = fourier_table(&cfg.index, &cfg.shift, &cfg.ns)?;
    let table = csv(
        "support,theta,n,re_gn,im_gn,abs_gn,re_gn_closed,im_gn_closed,scaled_abs_gn,envelope",
        rows.iter().map(|r| {
            let closed = r
                .gn_closed
                .map_or((String::new(), String::new()), |c| (fmt17(c.re), fmt17(c.im)));
            let envelope = if r.gn_closed.is_some() && !cfg.index.is_trivial() {
                fmt17(decay_envelope(r.theta))
            } else {
                String::new()
            };
            vec![
                format!("\"{}\"", r.support),
                fmt17(r.theta),
                r.n.to_string(),
                fmt17(r.gn.re),
                fmt17(r.gn.im),
                fmt17(r.gn.norm()),
                closed.0,
                closed.1,
                fmt17((r.n as f64 + 1.0) * r.gn.norm()),
                envelope,
            ]
        }),
    );
    Ok(Run {
        stdout: table.clone(),
        files: vec![("fourier.csv".into(), table)],
        ..Run::default()
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShiftFrequencies {
    shift: ErgodicShift,
    prime_bound: u64,
    m_bound: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IndepConfig {
    #[serde(default)]
    frequencies: Option<FrequencySet>,
    #[serde(default)]
    from_shift: Option<ShiftFrequencies>,
    max_coeff: i64,
    #[serde(default = "default_subset_size")]
    subset_size: usize,
}

fn default_subset_size() -> usize {
    3
}

fn cmd_indep(cfg: IndepConfig) -> Result<Run> {
    let freqs = match (cfg.frequencies, cfg.from_shift) {
        (Some(f), None) => f,
        (None, Some(s)) => FrequencySet::for_shift(&s.shift, s.prime_bound, s.m_bound)?,
        _ => {
            return Err(Error::Config(
                "give exactly one of `frequencies` and `from_shift`".into(),
            ))
        }
    };
    let relations = integer_relation_scan(&freqs, cfg.max_coeff, cfg.subset_size)?;
    let mut stdout = String::new();
    if relations.is_empty() {
        let _ = writeln!(stdout, "no relation with coefficients up to {}", cfg.max_coeff);
    }
    for r in &relations {
        let coeffs: Vec<String> = r.coeffs.iter().map(i64::to_string).collect();
        let _ = writeln!(
            stdout,
            "({}) on [{}] residual {}",
            coeffs.join(","),
            r.labels.join(", "),
            fmt17(r.residual)
        );
    }
    let report = json!({
        "frequencies": freqs.len(),
        "max_coeff": cfg.max_coeff,
        "subset_size": cfg.subset_size,
        "relations": relations,
    });
    Ok(Run {
        stdout,
        files: vec![("relations.json".into(), pretty(&report)?)],
        ..Run::default()
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    samples: u64,
    seed: u64,
    #[serde(default)]
    smoothing: Option<SmoothingParams>,
    #[serde(default)]
    cutoff: Cutoff,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeanValueConfig {
    sigma0: f64,
    ts: Vec<f64>,
    #[serde(default = "default_density")]
    intervals_per_unit: f64,
}

fn default_density() -> f64 {
    DEFAULT_INTERVALS_PER_UNIT
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LimitCheckConfig {
    phi: SteudingFunctionSpec,
    #[serde(default)]
    zetas: Vec<PeriodicHurwitzSpec>,
    test_points: Vec<Complex64>,
    lattice: ShiftLattice,
    model: ModelConfig,
    #[serde(default)]
    mean_value: Option<MeanValueConfig>,
    #[serde(default)]
    engine: ShiftEngine,
}

fn ecdf_rows(dist: &EmpiricalDistribution, source: &str, rows: &mut Vec<Vec<String>>) {
    for slot in 0..dist.slots() {
        let values = dist.slot_values(slot);
        for (part, pick) in [
            ("re", (|z: &Complex64| z.re) as fn(&Complex64) -> f64),
            ("im", |z| z.im),
        ] {
            let xs: Vec<f64> = values.iter().map(pick).collect();
            for (x, f) in ecdf_nodes(&xs, ECDF_POINTS) {
                rows.push(vec![slot.to_string(), part.into(), source.into(), fmt17(x), fmt17(f)]);
            }
        }
    }
}

fn cmd_limitcheck(cfg: LimitCheckConfig) -> Result<Run> {
    let lattice = collect_lattice_samples(&cfg.phi, &cfg.zetas, &cfg.lattice, &cfg.test_points, &cfg.engine)?;
    let model = collect_model_samples(
        &cfg.phi,
        &cfg.zetas,
        &cfg.test_points,
        cfg.model.samples,
        cfg.model.seed,
        cfg.model.smoothing.as_ref(),
        cfg.model.cutoff,
    )?;
    let report = compare(&lattice, &model)?;
    let mean_values = match &cfg.mean_value {
        Some(mv) => mv
            .ts
            .iter()
            .map(|&t| mean_value_diagnostic(&cfg.phi, mv.sigma0, t, mv.intervals_per_unit, &cfg.engine))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let moments = csv(
        "slot,re_mean_lattice,im_mean_lattice,re_mean_model,im_mean_model,mean_gap,mean_se,\
         second_lattice,second_model,second_gap,second_se,ks_re,ks_im,ks_threshold,flagged",
        report.slots.iter().map(|s| {
            vec![
                s.slot.to_string(),
                fmt17(s.a.mean.re),
                fmt17(s.a.mean.im),
                fmt17(s.b.mean.re),
                fmt17(s.b.mean.im),
                fmt17(s.mean_gap),
                fmt17(s.mean_se),
                fmt17(s.a.second),
                fmt17(s.b.second),
                fmt17(s.second_gap),
                fmt17(s.second_se),
                fmt17(s.re.statistic),
                fmt17(s.im.statistic),
                fmt17(s.re.threshold),
                u8::from(s.flagged()).to_string(),
            ]
        }),
    );
    let mut ecdf = Vec::new();
    ecdf_rows(&lattice, "lattice", &mut ecdf);
    ecdf_rows(&model, "model", &mut ecdf);
    let mut stdout = moments.clone();
    if report.flagged() {
        stdout.push_str("ECDF gap flagged\n");
    }
    let summary = json!({
        "flagged": report.flagged(),
        "comparison": report,
        "mean_value": mean_values,
    });
    Ok(Run {
        stdout,
        files: vec![
            ("report.json".into(), pretty(&summary)?),
            ("moments.csv".into(), moments),
            ("ecdf.csv".into(), csv("slot,part,source,x,ecdf", ecdf)),
        ],
        seeds: vec![cfg.model.seed],
        rng: Some(RNG_NAME.into()),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DeficitConfig {
    request: DeficitRequest,
    /// Sweep over these `n` (needs `request.smoothing` for `σ₀*`).
    #[serde(default)]
    ns: Vec<u64>,
    #[serde(default)]
    engine: ShiftEngine,
}

fn cmd_deficit(cfg: DeficitConfig) -> Result<Run> {
    let mut rows = Vec::new();
    if cfg.ns.is_empty() {
        let d = approximation_deficit(&cfg.request, &cfg.engine)?;
        let n = cfg.request.smoothing.map_or(String::new(), |p| p.n.to_string());
        rows.push(vec![n, fmt17(d)]);
    } else {
        let template = cfg
            .request
            .smoothing
            .ok_or_else(|| Error::Config("an `ns` sweep needs `request.smoothing`".into()))?;
        for &n in &cfg.ns {
            let mut req = cfg.request.clone();
            req.smoothing = Some(SmoothingParams::with_exponent(n, template.sigma0_star)?);
            rows.push(vec![n.to_string(), fmt17(approximation_deficit(&req, &cfg.engine)?)]);
        }
    }
    let table = csv("n,deficit", rows);
    Ok(Run {
        stdout: table.clone(),
        files: vec![("deficit.csv".into(), table)],
        ..Run::default()
    })
}
