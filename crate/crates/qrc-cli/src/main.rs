//! Command-line driver: each subcommand runs one experiment family with
//! benchmark defaults, writes the result CSV plus a JSON provenance
//! sidecar into the output directory, and prints a short summary.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use qrc_core::experiment::{
    self, export_trajectory, parse_config, run_noise_sweep, run_phase_sweep, run_prediction,
    run_size_scaling, run_stm, run_working_memory, seed_fanout, AnsatzKind, ExperimentSpec,
    ResultTable, SignalKind, TaskKind,
};
use qrc_core::reservoir::{run_sequence, FeedbackLayout, ReservoirConfig};
use qrc_core::signals;
use qrc_core::unitary::{AnsatzSpec, DenseUnitary};

#[derive(Parser)]
#[command(
    name = "qrc",
    about = "Feedback-driven quantum reservoir computing lab",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Flat `key = value` experiment config (defaults follow the benchmark
    /// setup when omitted).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the ensemble size.
    #[arg(long)]
    ensemble: Option<usize>,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for the result CSV and its JSON sidecar.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Enable the echo-state-network baseline.
    #[arg(long)]
    esn: bool,
    /// Scrambler family: `haar` or `he:<layers>`.
    #[arg(long)]
    ansatz: Option<String>,
}

#[derive(Args)]
struct PredictArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Input signal: random | cosine | mackey_glass | ising.
    #[arg(long)]
    signal: Option<String>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Input signal: random | cosine | mackey_glass | ising.
    #[arg(long, default_value = "cosine")]
    signal: String,
    /// Number of cycles to run.
    #[arg(long, default_value_t = 1000)]
    cycles: usize,
    /// Qubit pairs to export, e.g. `1:2,3:4`; defaults to all adjacent
    /// odd-even pairs.
    #[arg(long)]
    pairs: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Short-term memory task: R² per delay and the total capacity.
    Stm(CommonArgs),
    /// Total capacity versus feedback strength, with phase labels.
    Phase(CommonArgs),
    /// Forecasting NMSE per horizon, optionally against the baseline.
    Predict(PredictArgs),
    /// Forecasting across register sizes with per-size feedback weights.
    Scaling(CommonArgs),
    /// Capacity under finite measurement statistics.
    Noise(CommonArgs),
    /// Memory revival through the delayed second feedback layer.
    WorkingMemory(CommonArgs),
    /// Run one realization and export its measurement trajectory.
    Trajectory(TrajectoryArgs),
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Stm(args) => {
            let spec = build_spec(&args, TaskKind::Stm, |_| {})?;
            let outcome = run_stm(&spec)?;
            println!(
                "capacity {:.4} +- {:.4} over {} realizations",
                outcome.capacity_mean, outcome.capacity_stderr, outcome.ensemble
            );
            write_outputs(&args.out, "stm", &outcome.to_table(), &spec)
        }
        Command::Phase(args) => {
            let spec = build_spec(&args, TaskKind::Stm, |spec| {
                if spec.feedback_weight_sweep.is_empty() {
                    spec.feedback_weight_sweep = (1..=24).map(|k| 0.5 * k as f64).collect();
                }
            })?;
            let outcome = run_phase_sweep(&spec)?;
            for (idx, fb) in outcome.feedback_weights.iter().enumerate() {
                println!(
                    "a_fb {fb:5.2}: capacity {:8.4} +- {:6.4}  {:?}",
                    outcome.capacity_mean[idx], outcome.capacity_stderr[idx], outcome.phases[idx]
                );
            }
            write_outputs(&args.out, "phase", &outcome.to_table(), &spec)
        }
        Command::Predict(args) => {
            let signal = args.signal.clone();
            let spec = build_spec(&args.common, TaskKind::Predict, |spec| {
                spec.signal = SignalKind::Cosine;
                spec.feedback_weight = 2.5;
            })?;
            let spec = with_signal_override(spec, signal.as_deref())?;
            let spec = with_default_esn_nodes(spec, args.common.esn, &[8, 50, 100]);
            let outcome = run_prediction(&spec)?;
            for (idx, tau) in outcome.horizons.iter().enumerate() {
                let esn: Vec<String> = outcome
                    .esn_best_nmse
                    .iter()
                    .map(|(nodes, curve)| format!("esn{nodes} {:.3e}", curve[idx]))
                    .collect();
                println!(
                    "tau {tau:2}: qrc {:.3e}  {}",
                    outcome.qrc_nmse_mean[idx],
                    esn.join("  ")
                );
            }
            write_outputs(&args.common.out, "predict", &outcome.to_table(), &spec)
        }
        Command::Scaling(args) => {
            let spec = build_spec(&args, TaskKind::Predict, |spec| {
                spec.signal = SignalKind::Ising;
                if spec.size_sweep.is_empty() {
                    spec.size_sweep =
                        vec![(6, 1.5), (7, 2.0), (8, 2.5), (9, 3.5), (10, 5.5)];
                }
            })?;
            let spec = with_default_esn_nodes(spec, args.esn, &[100]);
            let outcome = run_size_scaling(&spec)?;
            for (s, (n, fb)) in outcome.sizes.iter().enumerate() {
                println!(
                    "N={n} (a_fb {fb}): NMSE(tau=1) {:.3e}",
                    outcome.qrc_nmse_mean[s][1]
                );
            }
            write_outputs(&args.out, "scaling", &outcome.to_table(), &spec)
        }
        Command::Noise(args) => {
            let spec = build_spec(&args, TaskKind::Stm, |spec| {
                if spec.shots_sweep.is_empty() {
                    spec.shots_sweep = vec![1_000, 10_000, 100_000, 1_000_000];
                }
            })?;
            let outcome = run_noise_sweep(&spec)?;
            for (s, shots) in outcome.shots.iter().enumerate() {
                for (f, fb) in outcome.feedback_weights.iter().enumerate() {
                    println!(
                        "shots {shots:>9}, a_fb {fb}: capacity {:.4}",
                        outcome.capacity_mean[s][f]
                    );
                }
            }
            for (f, fb) in outcome.feedback_weights.iter().enumerate() {
                println!(
                    "shots       inf, a_fb {fb}: capacity {:.4}",
                    outcome.ideal_capacity_mean[f]
                );
            }
            write_outputs(&args.out, "noise", &outcome.to_table(), &spec)
        }
        Command::WorkingMemory(args) => {
            let spec = build_spec(&args, TaskKind::Stm, |spec| {
                spec.extra_feedback_delay.get_or_insert(15);
                spec.max_delay = spec.max_delay.max(65);
            })?;
            let outcome = run_working_memory(&spec)?;
            println!(
                "capacity {:.4}; R2(14) {:.4}, R2(15) {:.4}, R2(30) {:.4}",
                outcome.capacity_mean, outcome.r2_mean[14], outcome.r2_mean[15],
                outcome.r2_mean[30]
            );
            write_outputs(&args.out, "working_memory", &outcome.to_table(), &spec)
        }
        Command::Trajectory(args) => run_trajectory(args),
    }
}

/// Load the config (or defaults), apply per-subcommand defaults, then the
/// flag overrides.
fn build_spec(
    args: &CommonArgs,
    task: TaskKind,
    defaults: impl FnOnce(&mut ExperimentSpec),
) -> Result<ExperimentSpec> {
    let mut spec = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_config(&text)?
        }
        None => ExperimentSpec::default(),
    };
    spec.task = task;
    if args.config.is_none() {
        defaults(&mut spec);
    }
    if let Some(ensemble) = args.ensemble {
        spec.ensemble = ensemble;
        spec.esn_ensemble = ensemble;
    }
    if let Some(seed) = args.seed {
        spec.master_seed = seed;
    }
    if let Some(ansatz) = &args.ansatz {
        spec.ansatz = experiment::parse_ansatz(ansatz)?;
    }
    spec.validate()?;
    Ok(spec)
}

fn with_signal_override(mut spec: ExperimentSpec, signal: Option<&str>) -> Result<ExperimentSpec> {
    if let Some(name) = signal {
        spec.signal = parse_signal(name)?;
    }
    Ok(spec)
}

fn parse_signal(name: &str) -> Result<SignalKind> {
    Ok(match name {
        "random" => SignalKind::Random,
        "cosine" => SignalKind::Cosine,
        "mackey_glass" => SignalKind::MackeyGlass,
        "ising" => SignalKind::Ising,
        other => bail!("unknown signal `{other}`"),
    })
}

/// The baseline runs when `--esn` is given (with these default node
/// counts) or when the config already names node counts.
fn with_default_esn_nodes(
    mut spec: ExperimentSpec,
    esn: bool,
    default_nodes: &[usize],
) -> ExperimentSpec {
    if esn && spec.esn_nodes.is_empty() {
        spec.esn_nodes = default_nodes.to_vec();
    }
    spec
}

fn run_trajectory(args: TrajectoryArgs) -> Result<()> {
    let mut spec = match &args.common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            parse_config(&text)?
        }
        None => ExperimentSpec {
            feedback_weight: 2.5,
            ..ExperimentSpec::default()
        },
    };
    spec.signal = parse_signal(&args.signal)?;
    if let Some(seed) = args.common.seed {
        spec.master_seed = seed;
    }
    if let Some(ansatz) = &args.common.ansatz {
        spec.ansatz = experiment::parse_ansatz(ansatz)?;
    }

    let mut rng = ChaCha12Rng::seed_from_u64(seed_fanout(spec.master_seed, 0));
    let unitary = match spec.ansatz {
        AnsatzKind::Haar => DenseUnitary::haar(spec.n_qubits, &mut rng),
        AnsatzKind::HardwareEfficient { layers } => {
            AnsatzSpec::sample(spec.n_qubits, layers, &mut rng).build()
        }
    };
    let config = ReservoirConfig::new(
        spec.input_weight,
        spec.feedback_weight,
        unitary,
        FeedbackLayout::canonical(spec.n_qubits)?,
    )?;

    let series = match spec.signal {
        SignalKind::Random => signals::gen_uniform_random(args.cycles, &mut rng),
        SignalKind::Cosine => signals::gen_cosine(args.cycles, spec.cosine_freq),
        SignalKind::MackeyGlass => signals::gen_mackey_glass(args.cycles, &spec.mg)?,
        SignalKind::Ising => signals::gen_ising_dynamics(args.cycles, &spec.ising)?,
    };
    let traj = run_sequence(&config, series.values(), &mut rng)?;

    let pairs = match &args.pairs {
        Some(text) => parse_pairs(text)?,
        None => (0..spec.n_qubits / 2).map(|k| (2 * k + 1, 2 * k + 2)).collect(),
    };
    let csv = export_trajectory(&traj, &pairs)?;

    fs::create_dir_all(&args.common.out)?;
    let path = args.common.out.join("trajectory.csv");
    fs::write(&path, csv)?;
    println!(
        "wrote {} ({} cycles, pairs {:?})",
        path.display(),
        traj.len(),
        pairs
    );
    Ok(())
}

fn parse_pairs(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split(',')
        .map(|pair| {
            let (i, j) = pair
                .trim()
                .split_once(':')
                .with_context(|| format!("pair `{pair}` is not `i:j`"))?;
            Ok((i.trim().parse()?, j.trim().parse()?))
        })
        .collect()
}

fn write_outputs(out: &Path, name: &str, table: &ResultTable, spec: &ExperimentSpec) -> Result<()> {
    fs::create_dir_all(out)?;
    let csv_path = out.join(format!("{name}.csv"));
    fs::write(&csv_path, table.to_csv())?;
    let meta_path = out.join(format!("{name}.meta.json"));
    fs::write(&meta_path, experiment::sidecar_json(spec)?)?;
    println!("wrote {} and {}", csv_path.display(), meta_path.display());
    Ok(())
}
