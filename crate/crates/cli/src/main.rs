use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use entangle_atlas::criteria::evaluate_all_with;
use entangle_atlas::plot::emit_plots;
use entangle_atlas::report::{csv_string, json_string, DimensionTiming, RunManifest};
use entangle_atlas::state_file::parse_state;
use entangle_atlas::survey::run_survey_with_progress;
use entangle_atlas::{
    CriteriaVerdict, EntropicIndex, EntropyReport, Error, SurveyConfig, SurveyRecord, SystemDims, Tolerances,
};

const THREADS_ENV: &str = "ENTANGLE_ATLAS_THREADS";

#[derive(Parser)]
#[command(
    name = "entangle-atlas",
    version,
    about = "Monte Carlo survey of separability criteria"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample random states for a range of dimensions and tally every criterion.
    Survey(SurveyArgs),
    /// Re-run a survey from a manifest written by an earlier run.
    Rerun(RerunArgs),
    /// Evaluate every criterion on one state read from a file.
    Evaluate(EvaluateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Both,
}

impl Format {
    fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Both => "both",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Args)]
struct SurveyArgs {
    /// Dimension of subsystem A.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=3))]
    n1: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n2_min: Option<u64>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n2_max: Option<u64>,
    /// Samples per dimension pair.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (overridden by ENTANGLE_ATLAS_THREADS).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
    /// Also tally the conditional-entropy criterion at this finite q.
    #[arg(long)]
    q: Option<f64>,
    /// Sign tolerance for every criterion.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Switch::On)]
    plots: Switch,
}

#[derive(Args)]
struct RerunArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    /// State file: `n_a n_b` header, then `i j re im` lines.
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    n1: Option<usize>,
    #[arg(long)]
    n2: Option<usize>,
    /// Extra finite entropic index to report and test.
    #[arg(long)]
    q: Option<f64>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ConfigInvalid(_)
            | Error::InvalidQ(_)
            | Error::Parse { .. }
            | Error::NonHermitianInput { .. }
            | Error::InvalidTrace { .. }
            | Error::NotPositive { .. }
            | Error::DimensionMismatch { .. }
            | Error::InvalidDimension(_)
            | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numeric(e.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Numeric(format!("{}: {e}", path.display()))
}

fn workers_override() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Usage(format!("{THREADS_ENV}={v:?} is not a positive integer"))),
        },
    }
}

fn config_from_args(args: &SurveyArgs) -> Result<SurveyConfig, Failure> {
    let n1 = args.n1 as usize;
    let mut cfg = SurveyConfig::new(n1);
    let lo = args.n2_min.map_or(*cfg.n2_range.start(), |v| v as usize);
    let hi = args.n2_max.map_or(*cfg.n2_range.end(), |v| v as usize);
    cfg.n2_range = lo..=hi;
    cfg.samples_per_dim = args.samples;
    cfg.seed = args.seed;
    cfg.workers = args.workers as usize;
    cfg.q_finite = args.q;
    cfg.crit_tol = args.tol;
    if let Some(w) = workers_override()? {
        cfg.workers = w;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str, written: &mut Vec<String>) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))?;
    written.push(file_name(path));
    Ok(())
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn execute_survey(cfg: SurveyConfig, out_dir: &Path, format: Format, plots: bool) -> Result<(), Failure> {
    for w in cfg.warnings() {
        eprintln!("warning: {w}");
    }
    fs::create_dir_all(out_dir).map_err(|e| io_failure(out_dir, e))?;

    let mut timings = Vec::new();
    let records: Vec<SurveyRecord> = run_survey_with_progress(&cfg, |rec, secs| {
        eprintln!(
            "n1={} n2={}: {} samples in {secs:.1}s",
            rec.dims.n_a, rec.dims.n_b, rec.samples
        );
        timings.push(DimensionTiming {
            n1: rec.dims.n_a,
            n2: rec.dims.n_b,
            seconds: secs,
        });
    })?;

    let stem = format!("survey_n1={}", cfg.n1);
    let mut written = Vec::new();
    if matches!(format, Format::Csv | Format::Both) {
        write_file(
            &out_dir.join(format!("{stem}.csv")),
            &csv_string(&records)?,
            &mut written,
        )?;
    }
    if matches!(format, Format::Json | Format::Both) {
        write_file(
            &out_dir.join(format!("{stem}.json")),
            &json_string(&records)?,
            &mut written,
        )?;
    }
    let anomalies: Vec<_> = records.iter().flat_map(|r| r.anomalies.iter().copied()).collect();
    if !anomalies.is_empty() {
        eprintln!(
            "warning: {} samples where PPT and reduction disagree on a 2xN system; see {stem}.anomalies.json",
            anomalies.len()
        );
        let text = serde_json::to_string_pretty(&anomalies).map_err(Error::from)?;
        write_file(&out_dir.join(format!("{stem}.anomalies.json")), &text, &mut written)?;
    }
    if plots {
        for path in emit_plots(&records, out_dir, &format!("{stem}_"))? {
            written.push(file_name(&path));
        }
    }

    let manifest = RunManifest {
        tool: env!("CARGO_BIN_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        config: cfg,
        format: format.as_str().into(),
        plots,
        timings,
        outputs: written,
    };
    let path = out_dir.join(format!("{stem}.manifest.json"));
    fs::write(&path, manifest.to_json()?).map_err(|e| io_failure(&path, e))?;
    Ok(())
}

fn cmd_survey(args: SurveyArgs) -> Result<(), Failure> {
    let cfg = config_from_args(&args)?;
    execute_survey(cfg, &args.out_dir, args.format, args.plots == Switch::On)
}

fn cmd_rerun(args: RerunArgs) -> Result<(), Failure> {
    let text =
        fs::read_to_string(&args.manifest).map_err(|e| Failure::Usage(format!("{}: {e}", args.manifest.display())))?;
    let manifest = RunManifest::from_json(&text)?;
    let format = match manifest.format.as_str() {
        "csv" => Format::Csv,
        "json" => Format::Json,
        "both" => Format::Both,
        other => return Err(Failure::Usage(format!("unknown format `{other}` in manifest"))),
    };
    let mut cfg = manifest.config;
    if let Some(w) = workers_override()? {
        cfg.workers = w;
    }
    execute_survey(cfg, &args.out_dir, format, manifest.plots)
}

#[derive(Serialize)]
struct Evaluation {
    dims: SystemDims,
    tolerances: Tolerances,
    verdict: CriteriaVerdict,
    entropies: Vec<EntropyReport>,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&args.state).map_err(|e| Failure::Usage(format!("{}: {e}", args.state.display())))?;
    let rho = parse_state(&text)?;
    let dims = rho.dims();
    for (flag, given, actual) in [("--n1", args.n1, dims.n_a), ("--n2", args.n2, dims.n_b)] {
        if let Some(g) = given.filter(|&g| g != actual) {
            return Err(Failure::Usage(format!(
                "dims mismatch: {flag} {g} but the state file declares {}",
                dims
            )));
        }
    }
    let tol = Tolerances::default();
    let verdict = evaluate_all_with(&rho, args.q, &tol)?;
    let mut indices = vec![
        EntropicIndex::Finite(1.0),
        EntropicIndex::Finite(2.0),
        EntropicIndex::Infinity,
    ];
    if let Some(q) = args.q {
        indices.push(EntropicIndex::finite(q)?);
    }
    let entropies = indices
        .into_iter()
        .map(|q| EntropyReport::for_state(&rho, q))
        .collect::<Result<Vec<_>, _>>()?;
    let out = Evaluation {
        dims,
        tolerances: tol,
        verdict,
        entropies,
    };
    println!("{}", serde_json::to_string_pretty(&out).map_err(Error::from)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Survey(a) => cmd_survey(a),
        Command::Rerun(a) => cmd_rerun(a),
        Command::Evaluate(a) => cmd_evaluate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
