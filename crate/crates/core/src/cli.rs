//! The `mvhota` command line.
//!
//! Exit codes: 0 on success, 1 when input is well formed but invalid (bad
//! flag values, dataset invariant violations, geometry mismatch), 2 on I/O
//! errors, malformed files and command-line usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::config::{EvalConfig, DEFAULT_ALPHA};
use crate::dataset::{load_dataset, validate_pair, Dataset, Role};
use crate::error::Error;
use crate::metrics::{alpha_sweep, evaluate_detailed, occlusion_index};
use crate::par::Execution;
use crate::report::{self, Format};
use crate::synth::{self, CorrespondenceCase, SynthConfig, Variant};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "mvhota", version, about = "Multi-view tracking evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score predictions against ground truth.
    Evaluate(EvaluateArgs),
    /// Write a synthetic ground-truth / prediction pair.
    Synth(SynthArgs),
    /// Check datasets and report geometry or coverage problems.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Table,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Format {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Table => Format::Table,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub pred: PathBuf,
    /// Detection radius in pixels.
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Discard prediction ids and assign them by temporal matching.
    #[arg(long)]
    pub assign_ids: bool,
    /// Evaluate every class label separately and macro-average.
    #[arg(long)]
    pub per_class: bool,
    /// AssAcc and CorresAcc reported when there is no true positive.
    #[arg(long, default_value_t = 0.0)]
    pub zero_tp_policy: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    /// Write every frame match as JSON.
    #[arg(long, value_name = "PATH")]
    pub dump_matches: Option<PathBuf>,
    /// Also evaluate at each alpha in LO:HI:STEP.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub alpha_sweep: Option<String>,
    /// Evaluate despite a geometry mismatch, over the union of views and frames.
    #[arg(long)]
    pub force: bool,
    /// Print provenance (version, inputs, settings) as JSON on stderr.
    #[arg(long)]
    pub meta: bool,
    /// Run every stage on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fixture {
    HandoffA,
    HandoffB,
    Occlusion,
    Matched,
    Spurious,
    Missed,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Directory receiving gt.json and pred.json.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Write a built-in fixture instead of a random sequence.
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub n_views: usize,
    #[arg(long, default_value_t = 20)]
    pub n_frames: usize,
    #[arg(long, default_value_t = 5)]
    pub n_points: usize,
    #[arg(long, default_value_t = 40.0)]
    pub motion_amplitude: f64,
    #[arg(long, default_value_t = 0.0)]
    pub view_drop_prob: f64,
    #[arg(long, default_value_t = 0.0)]
    pub temporal_drop_prob: f64,
    #[arg(long, default_value_t = 1.0)]
    pub pred_noise_sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub pred_fp_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub pred_miss_rate: f64,
    #[arg(long, default_value_t = 0.0)]
    pub id_switch_prob: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ghost_prob: f64,
    #[arg(long, default_value_t = 640)]
    pub image_width: u32,
    #[arg(long, default_value_t = 480)]
    pub image_height: u32,
    #[arg(long)]
    pub meta: bool,
}

impl SynthArgs {
    pub fn config(&self) -> SynthConfig {
        SynthConfig {
            n_views: self.n_views,
            n_frames: self.n_frames,
            n_points: self.n_points,
            motion_amplitude: self.motion_amplitude,
            view_drop_prob: self.view_drop_prob,
            temporal_drop_prob: self.temporal_drop_prob,
            pred_noise_sigma: self.pred_noise_sigma,
            pred_fp_rate: self.pred_fp_rate,
            pred_miss_rate: self.pred_miss_rate,
            id_switch_prob: self.id_switch_prob,
            ghost_prob: self.ghost_prob,
            image_width: self.image_width,
            image_height: self.image_height,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub gt: PathBuf,
    #[arg(long)]
    pub pred: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure {
            code: if e.is_input_error() {
                EXIT_INPUT
            } else {
                EXIT_INVALID
            },
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::from(Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}

fn invalid(message: String) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message,
    }
}

/// Parses `LO:HI:STEP` into the list of thresholds `LO, LO+STEP, ...` up to
/// and including `HI`.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, step] = parts.as_slice() else {
        return Err(format!("alpha sweep must be LO:HI:STEP (got {spec:?})"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("alpha sweep: {s:?} is not a number"))
    };
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(format!("alpha sweep needs 0 < LO <= HI (got {lo}:{hi})"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(format!("alpha sweep step must be positive (got {step})"));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n >= 10_000 {
        return Err("alpha sweep has more than 10000 points".into());
    }
    Ok((0..=n).map(|k| lo + k as f64 * step).collect())
}

fn write_to(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn load_pair(gt: &Path, pred: &Path) -> Result<(Dataset, Dataset), Failure> {
    Ok((
        load_dataset(gt, Role::GroundTruth)?,
        load_dataset(pred, Role::Prediction)?,
    ))
}

pub fn run_evaluate(args: &EvaluateArgs) -> Result<(), Failure> {
    let config = EvalConfig {
        alpha: args.alpha,
        per_class: args.per_class,
        zero_tp_policy: args.zero_tp_policy,
        reassign_ids: args.assign_ids,
    };
    config.validate()?;
    let sweep = args
        .alpha_sweep
        .as_deref()
        .map(parse_sweep)
        .transpose()
        .map_err(invalid)?;
    let (gt, pred) = load_pair(&args.gt, &args.pred)?;

    let issues = validate_pair(&gt, &pred);
    for issue in &issues.issues {
        eprintln!("warning: {issue}");
    }
    if issues.has_geometry_mismatch() && !args.force {
        return Err(invalid(
            "ground truth and prediction geometry differ (use --force to evaluate anyway)".into(),
        ));
    }

    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let evaluation = evaluate_detailed(&gt, &pred, &config, exec)?;
    let mut report = evaluation.report;
    if let Some(alphas) = &sweep {
        report.alpha_sweep = Some(alpha_sweep(&gt, &pred, &config, alphas, exec)?);
    }

    if let Some(path) = &args.dump_matches {
        write_to(Some(path), &report::matches_json(&evaluation.sequences))?;
    }
    write_to(args.output.as_deref(), &report::render(&report, args.format.into()))?;

    if args.meta {
        let meta = json!({
            "tool": "mvhota",
            "version": env!("CARGO_PKG_VERSION"),
            "command": "evaluate",
            "gt": args.gt,
            "pred": args.pred,
            "config": config,
            "alpha_sweep": args.alpha_sweep,
            "parallel": exec.is_parallel(),
        });
        eprintln!("{meta}");
    }
    Ok(())
}

pub fn run_synth(args: &SynthArgs) -> Result<(), Failure> {
    let (gt, pred) = match args.fixture {
        None => synth::generate(&args.config())?,
        Some(Fixture::HandoffA) => synth::handoff_fixture(Variant::A),
        Some(Fixture::HandoffB) => synth::handoff_fixture(Variant::B),
        Some(Fixture::Occlusion) => {
            let gt = synth::occlusion_fixture();
            let pred = Dataset::new(Role::Prediction, gt.geometry(), gt.points().to_vec())?;
            (gt, pred)
        }
        Some(Fixture::Matched) => synth::three_view_fixture(CorrespondenceCase::Matched),
        Some(Fixture::Spurious) => synth::three_view_fixture(CorrespondenceCase::Spurious),
        Some(Fixture::Missed) => synth::three_view_fixture(CorrespondenceCase::Missed),
    };

    std::fs::create_dir_all(&args.out_dir).map_err(|e| io_failure(&args.out_dir, e))?;
    gt.save(&args.out_dir.join("gt.json"))?;
    pred.save(&args.out_dir.join("pred.json"))?;

    let summary = match occlusion_index(&gt) {
        Some(oi) => format!(
            "Occlusion Index {:.4}  weighted {:.4}  temporal {:.4}  multi-view {:.4}\n",
            oi.simple, oi.weighted_mean, oi.temporal_mean, oi.multiview_mean
        ),
        None => "Occlusion Index n/a\n".to_string(),
    };
    write_to(None, &summary)?;

    if args.meta {
        let meta = json!({
            "tool": "mvhota",
            "version": env!("CARGO_PKG_VERSION"),
            "command": "synth",
            "fixture": args.fixture.map(|f| format!("{f:?}")),
            "config": args.config(),
        });
        eprintln!("{meta}");
    }
    Ok(())
}

pub fn run_validate(args: &ValidateArgs) -> Result<(), Failure> {
    let gt = load_dataset(&args.gt, Role::GroundTruth)?;
    let Some(pred_path) = &args.pred else {
        write_to(None, &format!("ok: {} ground-truth points\n", gt.len()))?;
        return Ok(());
    };
    let pred = load_dataset(pred_path, Role::Prediction)?;
    let report = validate_pair(&gt, &pred);
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_to(None, &text)?;
    if report.has_geometry_mismatch() {
        return Err(invalid("ground truth and prediction geometry differ".into()));
    }
    Ok(())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Evaluate(a) => run_evaluate(a),
        Command::Synth(a) => run_synth(a),
        Command::Validate(a) => run_validate(a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}
