use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dcqd_core::channels::{build_channel, find_preset, ChannelSpec};
use dcqd_core::dcqd::{bell_frequencies, extract_relaxation_ratio, CalibrationData, InputLabel, RelaxationEstimate};
use dcqd_core::estimation::{mle_qpt, MleOptions};
use dcqd_core::io::{from_json_str, read_json, write_json};
use dcqd_core::labsim::{self, BellCounts, CountFile, ErrorModel, RunSpec, Scheme};
use dcqd_core::report::{compare_methods, emit_chi_plot_data};
use dcqd_core::{ChiMatrix, Error, KrausSet};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const LEDGER: &str = "\
Configuration ledger (single qubit):
  SQPT            18 settings (6 inputs x 3 bases); minimal variant 12
  DCQD             4 settings (BELL, HV, DA, LR probe pairs)
  DCQD calibration 45 settings (36 probe-state tomography + 9 analyzer probes)
  SQPT with error characterization 24; AAPT 54-288; two-qubit QPT 288

Exit codes: 0 success, 2 usage or validation error, 3 result undefined for the data.";

#[derive(Parser)]
#[command(name = "dcqd", version, about = "Simulated SQPT and DCQD process tomography", after_help = LEDGER)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Channel construction.
    #[command(subcommand)]
    Channel(ChannelCommand),
    /// Simulate photon counts for one scheme.
    Simulate(SimulateArgs),
    /// Characterize probe states and the Bell analyzer from calibration counts.
    Calibrate {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximum-likelihood χ from count records.
    Reconstruct(ReconstructArgs),
    /// Jamiolkowski fidelity between two χ files, optionally against a truth.
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// CSV of χ elements (m,n,abs,re,im).
    Plotdata {
        #[arg(long)]
        chi: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// T2:T1 ratio from the BELL configuration of a DCQD count file.
    Relaxation {
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum ChannelCommand {
    /// Build χ and Kraus operators from a spec or a zoo preset.
    Build {
        /// Spec as inline JSON or a path to a JSON file.
        #[arg(long, required_unless_present = "preset", conflicts_with = "preset")]
        spec: Option<String>,
        /// Zoo preset (fig3a ... fig3f).
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Sqpt,
    Dcqd,
    Calibration,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum MethodArg {
    Sqpt,
    Dcqd,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    /// Channel spec or a file written by `channel build`.
    #[arg(long)]
    channel: PathBuf,
    /// Pairs per configuration.
    #[arg(long)]
    n: u64,
    #[arg(long)]
    seed: u64,
    /// Preparation/measurement error model.
    #[arg(long)]
    errors: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReconstructArgs {
    #[arg(long, value_enum)]
    scheme: MethodArg,
    #[arg(long)]
    counts: PathBuf,
    /// Output of `calibrate` (DCQD only).
    #[arg(long)]
    calibration: Option<PathBuf>,
    /// Constrain to trace-preserving processes.
    #[arg(long)]
    tp: bool,
    /// Parametric bootstrap resamples.
    #[arg(long, default_value_t = 0)]
    bootstrap: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct ChannelFile {
    spec: ChannelSpec,
    chi: ChiMatrix,
    kraus: KrausSet,
}

#[derive(Serialize)]
struct RelaxationReport {
    config_id: usize,
    counts: BellCounts,
    #[serde(flatten)]
    estimate: RelaxationEstimate,
}

/// Reads `path` as JSON and returns the member `key` if present, the whole
/// document otherwise.
fn read_member<T: serde::de::DeserializeOwned>(path: &Path, key: &str) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse { path: ".".into(), message: e.to_string() })?;
    let inner = match value.get(key) {
        Some(v) => serde_json::to_string(v)?,
        None => text,
    };
    from_json_str(&inner).with_context(|| format!("reading {}", path.display()))
}

fn read_channel_spec(path: &Path) -> anyhow::Result<ChannelSpec> {
    read_member(path, "spec")
}

fn read_chi(path: &Path) -> anyhow::Result<ChiMatrix> {
    read_member(path, "chi")
}

fn read_counts(path: &Path) -> anyhow::Result<CountFile> {
    CountFile::load(path).with_context(|| format!("reading {}", path.display()))
}

fn channel_build(spec: Option<String>, preset: Option<String>, out: &Path) -> anyhow::Result<()> {
    let spec = match (spec, preset) {
        (_, Some(name)) => match find_preset(&name) {
            Some(p) => p.spec,
            None => bail!(Error::InvalidParameter { name: "preset".into(), detail: format!("unknown preset `{name}`") }),
        },
        (Some(s), None) if s.trim_start().starts_with('{') => from_json_str(&s)?,
        (Some(s), None) => read_json(&s).with_context(|| format!("reading {s}"))?,
        (None, None) => unreachable!("clap requires one of --spec/--preset"),
    };
    let built = build_channel(&spec)?;
    write_json(out, &ChannelFile { spec, chi: built.chi, kraus: built.kraus })?;
    Ok(())
}

fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let channel = read_channel_spec(&args.channel)?;
    let errors: ErrorModel = match &args.errors {
        Some(p) => read_json(p).with_context(|| format!("reading {}", p.display()))?,
        None => ErrorModel::default(),
    };
    let scheme = match args.scheme {
        SchemeArg::Sqpt => Scheme::Sqpt,
        SchemeArg::Dcqd => Scheme::Dcqd,
        SchemeArg::Calibration => Scheme::Calibration,
    };
    let spec = RunSpec::new(channel, scheme, args.n, args.seed).with_errors(errors);
    labsim::simulate_run(&spec)?.save(&args.out)?;
    Ok(())
}

fn calibrate(counts: &Path, out: &Path) -> anyhow::Result<()> {
    let file = read_counts(counts)?;
    let outcome = labsim::calibrate(&file, &MleOptions::default())?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    write_json(out, &outcome)?;
    Ok(())
}

fn reconstruct(args: ReconstructArgs) -> anyhow::Result<()> {
    let file = read_counts(&args.counts)?;
    let expected = match args.scheme {
        MethodArg::Sqpt => Scheme::Sqpt,
        MethodArg::Dcqd => Scheme::Dcqd,
    };
    if file.spec.scheme != expected {
        bail!(Error::InvalidParameter { name: "scheme".into(), detail: format!("count file holds {:?} records", file.spec.scheme) });
    }
    let model = match (args.scheme, &args.calibration) {
        (MethodArg::Sqpt, Some(_)) => {
            bail!(Error::InvalidParameter { name: "calibration".into(), detail: "calibration applies to the DCQD scheme only".into() })
        }
        (MethodArg::Sqpt, None) => labsim::sqpt_likelihood(&file)?,
        (MethodArg::Dcqd, Some(path)) => {
            let cal: CalibrationData = read_member(path, "data")?;
            labsim::dcqd_likelihood(&file, Some(&cal))?
        }
        (MethodArg::Dcqd, None) => labsim::dcqd_likelihood(&file, None)?,
    };
    let options = MleOptions { trace_preserving: args.tp, bootstrap: args.bootstrap, seed: file.spec.seed, ..MleOptions::default() };
    let result = mle_qpt(&model, &options)?;
    if !result.converged {
        eprintln!("warning: optimizer stopped after {} iterations without converging", result.iterations);
    }
    write_json(&args.out, &result)?;
    Ok(())
}

fn compare(a: &Path, b: &Path, truth: Option<&Path>, out: &Path) -> anyhow::Result<()> {
    let a = read_chi(a)?;
    let b = read_chi(b)?;
    let truth = truth.map(read_chi).transpose()?;
    write_json(out, &compare_methods(&a, &b, truth.as_ref())?)?;
    Ok(())
}

fn plotdata(chi: &Path, out: &Path) -> anyhow::Result<()> {
    let chi = read_chi(chi)?;
    std::fs::write(out, emit_chi_plot_data(&chi)).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn relaxation(counts: &Path, out: &Path) -> anyhow::Result<()> {
    let file = read_counts(counts)?;
    let Some(record) = file.dcqd_records().into_iter().find(|r| r.input_label == InputLabel::Bell) else {
        bail!(Error::InvalidData("no BELL configuration in the count file".into()));
    };
    let freqs = bell_frequencies(record.counts.as_array().map(|c| c as f64))?;
    let estimate = extract_relaxation_ratio(freqs)?;
    write_json(out, &RelaxationReport { config_id: record.config_id, counts: record.counts, estimate })?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Channel(ChannelCommand::Build { spec, preset, out }) => channel_build(spec, preset, &out),
        Command::Simulate(args) => simulate(args),
        Command::Calibrate { counts, out } => calibrate(&counts, &out),
        Command::Reconstruct(args) => reconstruct(args),
        Command::Compare { a, b, truth, out } => compare(&a, &b, truth.as_deref(), &out),
        Command::Plotdata { chi, out } => plotdata(&chi, &out),
        Command::Relaxation { counts, out } => relaxation(&counts, &out),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::ExtractionUndefined(_) | Error::UndefinedFidelity | Error::UnderDetermined { .. }) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
