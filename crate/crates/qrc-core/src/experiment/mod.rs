//! Experiment orchestration: declarative specs, deterministic seed fan-out,
//! ensemble execution, and the benchmark suite runners.
//!
//! Every ensemble member gets its own seed from [`seed_fanout`], so a
//! realization rerun in isolation reproduces its in-ensemble result, and
//! parallel and serial execution give identical tables. Sweeps reuse the
//! per-realization seeds across sweep points, pairing the comparisons.

mod config;
mod table;

pub use config::{parse_ansatz, parse_config};
pub use table::{format_float, mean_stderr, sidecar_json, ResultRow, ResultTable};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::esn::{grid_search, EsnGrid, GridOrder};
use crate::readout::{make_targets, PreparedDesign, SplitSpec, TargetKind, TaskTargets};
use crate::reservoir::{
    run_sequence, ExtraFeedback, FeedbackLayout, ReservoirConfig, Trajectory,
};
use crate::signals::{
    gen_cosine, gen_ising_dynamics, gen_mackey_glass, gen_uniform_random, IsingParams, MgParams,
    SignalSeries,
};
use crate::unitary::{AnsatzSpec, DenseUnitary};

/// Deterministic injective map from (master seed, stream index) to a
/// per-stream seed: the index is spread by an odd multiplier (a bijection
/// mod 2^64), folded into the master, and finished with a SplitMix64 mix
/// (also a bijection), so distinct indices can never collide.
pub fn seed_fanout(master_seed: u64, index: u64) -> u64 {
    let mut z = master_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stream index of the shared input series (clear of realization indices).
const SHARED_SERIES_INDEX: u64 = 1 << 40;
/// Base stream index for classical-baseline realizations.
const ESN_SEED_OFFSET: u64 = 2 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Stm,
    Predict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalKind {
    Random,
    Cosine,
    MackeyGlass,
    Ising,
}

/// How the scrambling unitary of each realization is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AnsatzKind {
    Haar,
    HardwareEfficient { layers: usize },
}

/// Declarative description of one experiment. Parsed from the flat config
/// format (see [`parse_config`]) and serialized into the JSON sidecar.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ExperimentSpec {
    pub task: TaskKind,
    pub signal: SignalKind,
    pub n_qubits: usize,
    pub input_weight: f64,
    pub feedback_weight: f64,
    /// Feedback weights for sweep runners; empty means no sweep.
    pub feedback_weight_sweep: Vec<f64>,
    pub ansatz: AnsatzKind,
    pub extra_feedback_delay: Option<usize>,
    pub measurement_shots: Option<u64>,
    /// Shot counts for the noise sweep.
    pub shots_sweep: Vec<u64>,
    pub ensemble: usize,
    pub split: SplitSpec,
    pub max_delay: usize,
    pub max_horizon: usize,
    pub master_seed: u64,
    /// Memory task: share one random input series across the ensemble
    /// instead of drawing a fresh series per realization.
    pub shared_inputs: bool,
    pub cosine_freq: f64,
    pub mg: MgParams,
    pub ising: IsingParams,
    /// Baseline node counts; empty disables the baseline.
    pub esn_nodes: Vec<usize>,
    pub esn_grid: EsnGrid,
    pub esn_grid_order: GridOrder,
    pub esn_ensemble: usize,
    /// Size-scaling points as (qubit count, feedback weight).
    pub size_sweep: Vec<(usize, f64)>,
    #[serde(skip)]
    pub parallel: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            task: TaskKind::Stm,
            signal: SignalKind::Random,
            n_qubits: 8,
            input_weight: 0.001,
            feedback_weight: 2.0,
            feedback_weight_sweep: Vec::new(),
            ansatz: AnsatzKind::Haar,
            extra_feedback_delay: None,
            measurement_shots: None,
            shots_sweep: Vec::new(),
            ensemble: 128,
            split: SplitSpec::default(),
            max_delay: 25,
            max_horizon: 20,
            master_seed: 42,
            shared_inputs: false,
            cosine_freq: std::f64::consts::PI / 25.0,
            mg: MgParams::default(),
            ising: IsingParams::nonintegrable(),
            esn_nodes: Vec::new(),
            esn_grid: EsnGrid::default(),
            esn_grid_order: GridOrder::MeanThenMin,
            esn_ensemble: 128,
            size_sweep: Vec::new(),
            parallel: true,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.split.validate()?;
        if self.ensemble == 0 || self.esn_ensemble == 0 {
            return Err(Error::InvalidConfig("ensemble sizes must be positive".into()));
        }
        if self.max_delay > self.split.washout {
            return Err(Error::InvalidConfig(format!(
                "max delay {} exceeds the washout {}",
                self.max_delay, self.split.washout
            )));
        }
        if !(self.input_weight.is_finite() && self.input_weight >= 0.0)
            || !(self.feedback_weight.is_finite() && self.feedback_weight >= 0.0)
        {
            return Err(Error::InvalidConfig(
                "weights must be finite and non-negative".into(),
            ));
        }
        if let Some(0) = self.measurement_shots {
            return Err(Error::InvalidConfig("measurement shots must be positive".into()));
        }
        Ok(())
    }
}

fn sample_unitary<R: Rng + ?Sized>(
    ansatz: AnsatzKind,
    n_qubits: usize,
    rng: &mut R,
) -> DenseUnitary {
    match ansatz {
        AnsatzKind::Haar => DenseUnitary::haar(n_qubits, rng),
        AnsatzKind::HardwareEfficient { layers } => {
            AnsatzSpec::sample(n_qubits, layers, rng).build()
        }
    }
}

fn build_reservoir(
    spec: &ExperimentSpec,
    n_qubits: usize,
    feedback_weight: f64,
    unitary: DenseUnitary,
    shots: Option<u64>,
) -> Result<ReservoirConfig> {
    let layout = FeedbackLayout::canonical(n_qubits)?;
    let mut config =
        ReservoirConfig::new(spec.input_weight, feedback_weight, unitary, layout.clone())?;
    if let Some(delay) = spec.extra_feedback_delay {
        config = config.with_extra_feedback(ExtraFeedback { delay, layout })?;
    }
    if let Some(shots) = shots {
        config = config.with_measurement_shots(shots)?;
    }
    Ok(config)
}

/// Map a closure over the ensemble, one deterministic seed per realization,
/// results merged in realization order regardless of scheduling.
fn ensemble_map<T, F>(spec: &ExperimentSpec, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize, u64) -> Result<T> + Sync,
{
    let jobs: Vec<(usize, u64)> = (0..spec.ensemble)
        .map(|r| (r, seed_fanout(spec.master_seed, r as u64)))
        .collect();
    if spec.parallel {
        jobs.into_par_iter().map(|(r, seed)| f(r, seed)).collect()
    } else {
        jobs.into_iter().map(|(r, seed)| f(r, seed)).collect()
    }
}

/// Deterministic signal for prediction tasks; the random signal draws from
/// its own seed stream so it is identical for every realization.
fn generate_signal(spec: &ExperimentSpec, len: usize) -> Result<SignalSeries> {
    match spec.signal {
        SignalKind::Random => {
            let mut rng =
                ChaCha12Rng::seed_from_u64(seed_fanout(spec.master_seed, SHARED_SERIES_INDEX));
            Ok(gen_uniform_random(len, &mut rng))
        }
        SignalKind::Cosine => Ok(gen_cosine(len, spec.cosine_freq)),
        SignalKind::MackeyGlass => gen_mackey_glass(len, &spec.mg),
        SignalKind::Ising => gen_ising_dynamics(len, &spec.ising),
    }
}

/// R² per delay 0..=max_delay from one reservoir run over `series`.
fn delay_r2_curve<R: Rng + ?Sized>(
    config: &ReservoirConfig,
    series: &SignalSeries,
    split: &SplitSpec,
    max_delay: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let traj = run_sequence(config, &series.values()[..split.total()], rng)?;
    let prepared = PreparedDesign::new(&traj, split)?;
    (0..=max_delay)
        .map(|d| {
            let targets = make_targets(series, TargetKind::Delay(d), split)?;
            Ok(prepared.score(&targets)?.r_squared)
        })
        .collect()
}

// ---------------------------------------------------------------------
// Short-term memory
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct StmOutcome {
    pub delays: Vec<usize>,
    pub r2_mean: Vec<f64>,
    pub r2_stderr: Vec<f64>,
    pub capacity_mean: f64,
    pub capacity_stderr: f64,
    /// Per-realization total capacity, in realization order.
    pub capacities: Vec<f64>,
    pub ensemble: usize,
}

impl StmOutcome {
    pub fn to_table(&self) -> ResultTable {
        let mut table = ResultTable::default();
        for (idx, &d) in self.delays.iter().enumerate() {
            table.push(
                "delay",
                d,
                "r_squared",
                self.r2_mean[idx],
                self.r2_stderr[idx],
                self.ensemble,
            );
        }
        table.push(
            "delay",
            "sum",
            "capacity",
            self.capacity_mean,
            self.capacity_stderr,
            self.ensemble,
        );
        table
    }
}

/// Memory task: per realization a fresh scrambler (and, unless
/// `shared_inputs`, a fresh uniform input series), the full train/test
/// pipeline per delay, averaged over the ensemble.
pub fn run_stm(spec: &ExperimentSpec) -> Result<StmOutcome> {
    spec.validate()?;
    if spec.signal != SignalKind::Random {
        return Err(Error::InvalidConfig(
            "the memory task is defined on the uniform random signal".into(),
        ));
    }
    let total = spec.split.total();
    let shared = if spec.shared_inputs {
        let mut rng =
            ChaCha12Rng::seed_from_u64(seed_fanout(spec.master_seed, SHARED_SERIES_INDEX));
        Some(gen_uniform_random(total, &mut rng))
    } else {
        None
    };

    let curves = ensemble_map(spec, |_r, seed| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let unitary = sample_unitary(spec.ansatz, spec.n_qubits, &mut rng);
        let config = build_reservoir(
            spec,
            spec.n_qubits,
            spec.feedback_weight,
            unitary,
            spec.measurement_shots,
        )?;
        let series = match &shared {
            Some(series) => series.clone(),
            None => gen_uniform_random(total, &mut rng),
        };
        delay_r2_curve(&config, &series, &spec.split, spec.max_delay, &mut rng)
    })?;

    Ok(summarize_stm(spec, curves))
}

fn summarize_stm(spec: &ExperimentSpec, curves: Vec<Vec<f64>>) -> StmOutcome {
    let delays: Vec<usize> = (0..=spec.max_delay).collect();
    let mut r2_mean = Vec::with_capacity(delays.len());
    let mut r2_stderr = Vec::with_capacity(delays.len());
    for idx in 0..delays.len() {
        let column: Vec<f64> = curves.iter().map(|c| c[idx]).collect();
        let (mean, se) = mean_stderr(&column);
        r2_mean.push(mean);
        r2_stderr.push(se);
    }
    let capacities: Vec<f64> = curves.iter().map(|c| c.iter().sum()).collect();
    let (capacity_mean, capacity_stderr) = mean_stderr(&capacities);
    StmOutcome {
        delays,
        r2_mean,
        r2_stderr,
        capacity_mean,
        capacity_stderr,
        capacities,
        ensemble: spec.ensemble,
    }
}

/// The memory task with the delayed second feedback layer, exposing the
/// revival peaks at multiples of the delay.
pub fn run_working_memory(spec: &ExperimentSpec) -> Result<StmOutcome> {
    if spec.extra_feedback_delay.is_none() {
        return Err(Error::InvalidConfig(
            "working-memory runs need extra_feedback_delay".into(),
        ));
    }
    run_stm(spec)
}

// ---------------------------------------------------------------------
// Feedback-strength phase sweep
// ---------------------------------------------------------------------

/// Reporting label for one sweep point, derived from the mean capacity
/// curve: the rising flank up to the argmax is stable, the falling flank
/// unstable, and the collapsed tail (capacity below 0.5) over-rotating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseLabel {
    Stable,
    Unstable,
    OverRotation,
}

impl PhaseLabel {
    pub fn code(self) -> u8 {
        match self {
            PhaseLabel::Stable => 0,
            PhaseLabel::Unstable => 1,
            PhaseLabel::OverRotation => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhaseSweepOutcome {
    pub feedback_weights: Vec<f64>,
    pub capacity_mean: Vec<f64>,
    pub capacity_stderr: Vec<f64>,
    pub phases: Vec<PhaseLabel>,
    pub ensemble: usize,
}

impl PhaseSweepOutcome {
    pub fn to_table(&self) -> ResultTable {
        let mut table = ResultTable::default();
        for (idx, &fb) in self.feedback_weights.iter().enumerate() {
            table.push(
                "feedback_weight",
                fb,
                "capacity",
                self.capacity_mean[idx],
                self.capacity_stderr[idx],
                self.ensemble,
            );
            table.push(
                "feedback_weight",
                fb,
                "phase_code",
                f64::from(self.phases[idx].code()),
                0.0,
                self.ensemble,
            );
        }
        table
    }

    /// Index of the capacity maximum.
    pub fn argmax(&self) -> usize {
        self.capacity_mean
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(idx, _)| idx)
            .unwrap_or(0)
    }
}

/// Capacity versus feedback weight. Each realization keeps its scrambler
/// and input series fixed across the sweep, so the curve is paired.
pub fn run_phase_sweep(spec: &ExperimentSpec) -> Result<PhaseSweepOutcome> {
    spec.validate()?;
    if spec.feedback_weight_sweep.is_empty() {
        return Err(Error::InvalidConfig(
            "phase sweep needs feedback_weight_sweep values".into(),
        ));
    }
    if spec.signal != SignalKind::Random {
        return Err(Error::InvalidConfig(
            "the memory task is defined on the uniform random signal".into(),
        ));
    }
    let total = spec.split.total();
    let sweep = spec.feedback_weight_sweep.clone();

    let per_realization = ensemble_map(spec, |_r, seed| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let unitary = sample_unitary(spec.ansatz, spec.n_qubits, &mut rng);
        let series = gen_uniform_random(total, &mut rng);
        let run_rng = rng;
        sweep
            .iter()
            .map(|&fb| {
                let config = build_reservoir(
                    spec,
                    spec.n_qubits,
                    fb,
                    unitary.clone(),
                    spec.measurement_shots,
                )?;
                let mut rng = run_rng.clone();
                let curve =
                    delay_r2_curve(&config, &series, &spec.split, spec.max_delay, &mut rng)?;
                Ok(curve.iter().sum())
            })
            .collect::<Result<Vec<f64>>>()
    })?;

    let mut capacity_mean = Vec::with_capacity(sweep.len());
    let mut capacity_stderr = Vec::with_capacity(sweep.len());
    for idx in 0..sweep.len() {
        let column: Vec<f64> = per_realization.iter().map(|c| c[idx]).collect();
        let (mean, se) = mean_stderr(&column);
        capacity_mean.push(mean);
        capacity_stderr.push(se);
    }

    let argmax = capacity_mean
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(idx, _)| idx)
        .unwrap_or(0);
    let phases = capacity_mean
        .iter()
        .enumerate()
        .map(|(idx, &mean)| {
            if idx <= argmax {
                PhaseLabel::Stable
            } else if mean >= 0.5 {
                PhaseLabel::Unstable
            } else {
                PhaseLabel::OverRotation
            }
        })
        .collect();

    Ok(PhaseSweepOutcome {
        feedback_weights: sweep,
        capacity_mean,
        capacity_stderr,
        phases,
        ensemble: spec.ensemble,
    })
}

// ---------------------------------------------------------------------
// Forecasting
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PredictionOutcome {
    pub horizons: Vec<usize>,
    pub qrc_nmse_mean: Vec<f64>,
    pub qrc_nmse_stderr: Vec<f64>,
    /// Best grid-searched baseline NMSE per horizon, one entry per node
    /// count.
    pub esn_best_nmse: Vec<(usize, Vec<f64>)>,
    pub ensemble: usize,
}

impl PredictionOutcome {
    pub fn to_table(&self) -> ResultTable {
        let mut table = ResultTable::default();
        for (idx, &tau) in self.horizons.iter().enumerate() {
            table.push(
                "horizon",
                tau,
                "qrc_nmse",
                self.qrc_nmse_mean[idx],
                self.qrc_nmse_stderr[idx],
                self.ensemble,
            );
        }
        for (nodes, curve) in &self.esn_best_nmse {
            for (idx, &tau) in self.horizons.iter().enumerate() {
                table.push("horizon", tau, &format!("esn{nodes}_nmse"), curve[idx], 0.0, 0);
            }
        }
        table
    }
}

/// Forecasting benchmark: ensemble-mean NMSE per horizon for the quantum
/// reservoir, plus grid-searched baselines when node counts are configured.
pub fn run_prediction(spec: &ExperimentSpec) -> Result<PredictionOutcome> {
    spec.validate()?;
    let total = spec.split.total();
    let series = generate_signal(spec, total + spec.max_horizon)?;
    let horizons: Vec<usize> = (0..=spec.max_horizon).collect();
    let target_sets: Vec<TaskTargets> = horizons
        .iter()
        .map(|&tau| make_targets(&series, TargetKind::Horizon(tau), &spec.split))
        .collect::<Result<_>>()?;

    let per_realization = ensemble_map(spec, |_r, seed| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let unitary = sample_unitary(spec.ansatz, spec.n_qubits, &mut rng);
        let config = build_reservoir(
            spec,
            spec.n_qubits,
            spec.feedback_weight,
            unitary,
            spec.measurement_shots,
        )?;
        let traj = run_sequence(&config, &series.values()[..total], &mut rng)?;
        let prepared = PreparedDesign::new(&traj, &spec.split)?;
        target_sets
            .iter()
            .map(|targets| Ok(prepared.score(targets)?.nmse))
            .collect::<Result<Vec<f64>>>()
    })?;

    let mut qrc_nmse_mean = Vec::with_capacity(horizons.len());
    let mut qrc_nmse_stderr = Vec::with_capacity(horizons.len());
    for idx in 0..horizons.len() {
        let column: Vec<f64> = per_realization.iter().map(|c| c[idx]).collect();
        let (mean, se) = mean_stderr(&column);
        qrc_nmse_mean.push(mean);
        qrc_nmse_stderr.push(se);
    }

    let esn_best_nmse = run_esn_baseline(spec, &series, &target_sets)?;

    Ok(PredictionOutcome {
        horizons,
        qrc_nmse_mean,
        qrc_nmse_stderr,
        esn_best_nmse,
        ensemble: spec.ensemble,
    })
}

fn run_esn_baseline(
    spec: &ExperimentSpec,
    series: &SignalSeries,
    target_sets: &[TaskTargets],
) -> Result<Vec<(usize, Vec<f64>)>> {
    let seeds: Vec<u64> = (0..spec.esn_ensemble)
        .map(|r| seed_fanout(spec.master_seed, ESN_SEED_OFFSET + r as u64))
        .collect();
    spec.esn_nodes
        .iter()
        .map(|&nodes| {
            let best = grid_search(
                nodes,
                &spec.esn_grid,
                spec.esn_grid_order,
                series.values(),
                target_sets,
                &spec.split,
                &seeds,
            )?;
            Ok((nodes, best))
        })
        .collect()
}

// ---------------------------------------------------------------------
// Size scaling
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SizeScalingOutcome {
    /// (qubit count, feedback weight) per sweep point.
    pub sizes: Vec<(usize, f64)>,
    pub horizons: Vec<usize>,
    /// `[size][horizon]` ensemble means.
    pub qrc_nmse_mean: Vec<Vec<f64>>,
    pub qrc_nmse_stderr: Vec<Vec<f64>>,
    pub esn_best_nmse: Vec<(usize, Vec<f64>)>,
    pub ensemble: usize,
}

impl SizeScalingOutcome {
    pub fn to_table(&self) -> ResultTable {
        let mut table = ResultTable::default();
        for (s, &(n, _fb)) in self.sizes.iter().enumerate() {
            for (idx, &tau) in self.horizons.iter().enumerate() {
                table.push(
                    "n_qubits",
                    n,
                    &format!("nmse_horizon_{tau}"),
                    self.qrc_nmse_mean[s][idx],
                    self.qrc_nmse_stderr[s][idx],
                    self.ensemble,
                );
            }
        }
        for (nodes, curve) in &self.esn_best_nmse {
            for (idx, &tau) in self.horizons.iter().enumerate() {
                table.push(
                    "n_qubits",
                    format!("esn{nodes}"),
                    &format!("nmse_horizon_{tau}"),
                    curve[idx],
                    0.0,
                    0,
                );
            }
        }
        table
    }
}

/// Forecasting across register sizes, each with its own tuned feedback
/// weight; the baseline (over the same signal) is computed once.
pub fn run_size_scaling(spec: &ExperimentSpec) -> Result<SizeScalingOutcome> {
    spec.validate()?;
    if spec.size_sweep.is_empty() {
        return Err(Error::InvalidConfig("size sweep needs (N, weight) points".into()));
    }
    let horizons: Vec<usize> = (0..=spec.max_horizon).collect();
    let mut qrc_nmse_mean = Vec::new();
    let mut qrc_nmse_stderr = Vec::new();
    for &(n_qubits, feedback_weight) in &spec.size_sweep {
        let sub = ExperimentSpec {
            n_qubits,
            feedback_weight,
            esn_nodes: Vec::new(),
            size_sweep: Vec::new(),
            ..spec.clone()
        };
        let outcome = run_prediction(&sub)?;
        qrc_nmse_mean.push(outcome.qrc_nmse_mean);
        qrc_nmse_stderr.push(outcome.qrc_nmse_stderr);
    }

    let total = spec.split.total();
    let series = generate_signal(spec, total + spec.max_horizon)?;
    let target_sets: Vec<TaskTargets> = horizons
        .iter()
        .map(|&tau| make_targets(&series, TargetKind::Horizon(tau), &spec.split))
        .collect::<Result<_>>()?;
    let esn_best_nmse = run_esn_baseline(spec, &series, &target_sets)?;

    Ok(SizeScalingOutcome {
        sizes: spec.size_sweep.clone(),
        horizons,
        qrc_nmse_mean,
        qrc_nmse_stderr,
        esn_best_nmse,
        ensemble: spec.ensemble,
    })
}

// ---------------------------------------------------------------------
// Measurement-noise sweep
// ---------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct NoiseSweepOutcome {
    pub shots: Vec<u64>,
    pub feedback_weights: Vec<f64>,
    /// `[shot][feedback]` ensemble means.
    pub capacity_mean: Vec<Vec<f64>>,
    pub capacity_stderr: Vec<Vec<f64>>,
    /// Noise-free reference per feedback weight.
    pub ideal_capacity_mean: Vec<f64>,
    pub ideal_capacity_stderr: Vec<f64>,
    /// Per-realization ideal capacities (for exactness checks).
    pub ideal_capacities: Vec<Vec<f64>>,
    pub ensemble: usize,
}

impl NoiseSweepOutcome {
    pub fn to_table(&self) -> ResultTable {
        let mut table = ResultTable::default();
        for (s, &shots) in self.shots.iter().enumerate() {
            for (f, &fb) in self.feedback_weights.iter().enumerate() {
                table.push(
                    "measurement_shots",
                    shots,
                    &format!("capacity_fb_{fb}"),
                    self.capacity_mean[s][f],
                    self.capacity_stderr[s][f],
                    self.ensemble,
                );
            }
        }
        for (f, &fb) in self.feedback_weights.iter().enumerate() {
            table.push(
                "measurement_shots",
                "inf",
                &format!("capacity_fb_{fb}"),
                self.ideal_capacity_mean[f],
                self.ideal_capacity_stderr[f],
                self.ensemble,
            );
        }
        table
    }
}

/// Capacity under finite measurement statistics, over shot counts and
/// feedback weights, with the exact (infinite-shot) column for reference.
/// Each realization reuses one scrambler and one input series across every
/// grid point.
pub fn run_noise_sweep(spec: &ExperimentSpec) -> Result<NoiseSweepOutcome> {
    spec.validate()?;
    if spec.shots_sweep.is_empty() {
        return Err(Error::InvalidConfig("noise sweep needs shots_sweep values".into()));
    }
    if spec.shots_sweep.contains(&0) {
        return Err(Error::InvalidArgument("shot counts must be positive".into()));
    }
    if spec.signal != SignalKind::Random {
        return Err(Error::InvalidConfig(
            "the memory task is defined on the uniform random signal".into(),
        ));
    }
    let feedback_weights = if spec.feedback_weight_sweep.is_empty() {
        vec![spec.feedback_weight]
    } else {
        spec.feedback_weight_sweep.clone()
    };
    let shots = spec.shots_sweep.clone();
    let total = spec.split.total();

    struct RealizationResult {
        noisy: Vec<Vec<f64>>,
        ideal: Vec<f64>,
    }

    let per_realization = ensemble_map(spec, |_r, seed| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let unitary = sample_unitary(spec.ansatz, spec.n_qubits, &mut rng);
        let series = gen_uniform_random(total, &mut rng);
        let run_rng = rng;

        let capacity_at = |fb: f64, shot_count: Option<u64>| -> Result<f64> {
            let config =
                build_reservoir(spec, spec.n_qubits, fb, unitary.clone(), shot_count)?;
            let mut rng = run_rng.clone();
            let curve = delay_r2_curve(&config, &series, &spec.split, spec.max_delay, &mut rng)?;
            Ok(curve.iter().sum())
        };

        let noisy = shots
            .iter()
            .map(|&shot_count| {
                feedback_weights
                    .iter()
                    .map(|&fb| capacity_at(fb, Some(shot_count)))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        let ideal = feedback_weights
            .iter()
            .map(|&fb| capacity_at(fb, None))
            .collect::<Result<Vec<f64>>>()?;
        Ok(RealizationResult { noisy, ideal })
    })?;

    let mut capacity_mean = vec![vec![0.0; feedback_weights.len()]; shots.len()];
    let mut capacity_stderr = vec![vec![0.0; feedback_weights.len()]; shots.len()];
    for s in 0..shots.len() {
        for f in 0..feedback_weights.len() {
            let column: Vec<f64> = per_realization.iter().map(|r| r.noisy[s][f]).collect();
            let (mean, se) = mean_stderr(&column);
            capacity_mean[s][f] = mean;
            capacity_stderr[s][f] = se;
        }
    }
    let mut ideal_capacity_mean = Vec::new();
    let mut ideal_capacity_stderr = Vec::new();
    for f in 0..feedback_weights.len() {
        let column: Vec<f64> = per_realization.iter().map(|r| r.ideal[f]).collect();
        let (mean, se) = mean_stderr(&column);
        ideal_capacity_mean.push(mean);
        ideal_capacity_stderr.push(se);
    }
    let ideal_capacities = per_realization.iter().map(|r| r.ideal.clone()).collect();

    Ok(NoiseSweepOutcome {
        shots,
        feedback_weights,
        capacity_mean,
        capacity_stderr,
        ideal_capacity_mean,
        ideal_capacity_stderr,
        ideal_capacities,
        ensemble: spec.ensemble,
    })
}

// ---------------------------------------------------------------------
// Trajectory export
// ---------------------------------------------------------------------

/// Render per-cycle measurement values of the chosen qubit pairs as CSV,
/// header `cycle,z<i>,z<j>[,...]`, floats with 17 significant digits.
pub fn export_trajectory(traj: &Trajectory, pairs: &[(usize, usize)]) -> Result<String> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("need at least one qubit pair".into()));
    }
    let mut qubits = Vec::new();
    for &(i, j) in pairs {
        for q in [i, j] {
            if q == 0 || q > traj.n_qubits() {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: traj.n_qubits(),
                });
            }
            qubits.push(q);
        }
    }
    let mut out = String::from("cycle");
    for q in &qubits {
        out.push_str(&format!(",z{q}"));
    }
    out.push('\n');
    for (k, row) in traj.rows().enumerate() {
        out.push_str(&(k + 1).to_string());
        for q in &qubits {
            out.push(',');
            out.push_str(&format_float(row[q - 1]));
        }
        out.push('\n');
    }
    Ok(out)
}
