//! The feedback-driven reservoir cycle.
//!
//! Each cycle starts from `|0...0>`, injects the current input on qubits
//! (1, 2) through the two-qubit embedding gate, writes the previous cycle's
//! measurement vector back in through the feedback layout (optionally a
//! second, delayed layer), applies the fixed scrambling unitary, and reads
//! out exact Z expectation values on all qubits. The resulting vector is the
//! only state carried to the next cycle.

use std::collections::VecDeque;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::statevector::Statevector;
use crate::unitary::DenseUnitary;

/// One feedback wire: component `source` of the fed-back vector drives the
/// embedding gate on the (1-based) qubit pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LayoutEntry {
    pub source: usize,
    pub qubits: (usize, usize),
}

/// Ordered feedback wiring. Every component of the fed-back vector is
/// encoded exactly once, on adjacent qubit pairs, applied in list order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeedbackLayout {
    entries: Vec<LayoutEntry>,
}

impl FeedbackLayout {
    /// The wiring used throughout: component `a` drives the pair
    /// `(q, q + 1)` with `q = 3 + ((a - 1) mod (N - 3))`, cycling round
    /// robin over the feedback qubits 3..N. Defined for `N` in 6..=10.
    pub fn canonical(n_qubits: usize) -> Result<Self> {
        if !(6..=10).contains(&n_qubits) {
            return Err(Error::InvalidConfig(format!(
                "canonical layout is defined for 6..=10 qubits, got {n_qubits}"
            )));
        }
        let entries = (1..=n_qubits)
            .map(|source| {
                let q = 3 + (source - 1) % (n_qubits - 3);
                LayoutEntry {
                    source,
                    qubits: (q, q + 1),
                }
            })
            .collect();
        Self::new(entries, n_qubits)
    }

    /// Validate a hand-built layout for an `n_qubits` register: one entry
    /// per component, adjacent in-range pairs. Canonical layouts keep the
    /// pairs within qubits 3..N, leaving (1, 2) to the input gate; custom
    /// layouts for small test registers may use any adjacent pair.
    pub fn new(entries: Vec<LayoutEntry>, n_qubits: usize) -> Result<Self> {
        if entries.len() != n_qubits {
            return Err(Error::InvalidConfig(format!(
                "layout needs exactly {n_qubits} entries, got {}",
                entries.len()
            )));
        }
        let mut seen = vec![false; n_qubits];
        for entry in &entries {
            let (i, j) = entry.qubits;
            if entry.source == 0 || entry.source > n_qubits {
                return Err(Error::InvalidConfig(format!(
                    "layout source {} out of range 1..={n_qubits}",
                    entry.source
                )));
            }
            if seen[entry.source - 1] {
                return Err(Error::InvalidConfig(format!(
                    "layout encodes component {} twice",
                    entry.source
                )));
            }
            seen[entry.source - 1] = true;
            if i == 0 || j > n_qubits {
                return Err(Error::InvalidConfig(format!(
                    "layout pair ({i}, {j}) out of range for {n_qubits} qubits"
                )));
            }
            if j != i + 1 {
                return Err(Error::InvalidConfig(format!(
                    "layout pair ({i}, {j}) is not adjacent"
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[LayoutEntry] {
        &self.entries
    }
}

/// A second feedback layer carrying the measurement vector from `delay`
/// cycles back, wired like the first layer.
#[derive(Clone, Debug)]
pub struct ExtraFeedback {
    pub delay: usize,
    pub layout: FeedbackLayout,
}

/// Fixed parameters of one reservoir realization.
#[derive(Clone, Debug)]
pub struct ReservoirConfig {
    n_qubits: usize,
    input_weight: f64,
    feedback_weight: f64,
    reservoir_unitary: DenseUnitary,
    layout: FeedbackLayout,
    extra_feedback: Option<ExtraFeedback>,
    measurement_shots: Option<u64>,
}

impl ReservoirConfig {
    pub fn new(
        input_weight: f64,
        feedback_weight: f64,
        reservoir_unitary: DenseUnitary,
        layout: FeedbackLayout,
    ) -> Result<Self> {
        let n_qubits = reservoir_unitary.n_qubits();
        if n_qubits < 2 {
            return Err(Error::InvalidConfig(
                "the input gate needs at least 2 qubits".into(),
            ));
        }
        if !(input_weight.is_finite() && feedback_weight.is_finite())
            || input_weight < 0.0
            || feedback_weight < 0.0
        {
            return Err(Error::InvalidConfig(
                "input and feedback weights must be finite and non-negative".into(),
            ));
        }
        if layout.entries.len() != n_qubits {
            return Err(Error::InvalidConfig(format!(
                "layout has {} entries for a {n_qubits}-qubit register",
                layout.entries.len()
            )));
        }
        Ok(Self {
            n_qubits,
            input_weight,
            feedback_weight,
            reservoir_unitary,
            layout,
            extra_feedback: None,
            measurement_shots: None,
        })
    }

    /// Add the delayed second feedback layer.
    pub fn with_extra_feedback(mut self, extra: ExtraFeedback) -> Result<Self> {
        if extra.delay == 0 {
            return Err(Error::InvalidConfig("feedback delay must be positive".into()));
        }
        if extra.layout.entries.len() != self.n_qubits {
            return Err(Error::InvalidConfig(
                "second-layer layout does not match register size".into(),
            ));
        }
        self.extra_feedback = Some(extra);
        Ok(self)
    }

    /// Emulate finite measurement statistics with `shots` samples per
    /// expectation value.
    pub fn with_measurement_shots(mut self, shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::InvalidArgument(
                "measurement shot count must be positive".into(),
            ));
        }
        self.measurement_shots = Some(shots);
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn input_weight(&self) -> f64 {
        self.input_weight
    }

    pub fn feedback_weight(&self) -> f64 {
        self.feedback_weight
    }

    pub fn reservoir_unitary(&self) -> &DenseUnitary {
        &self.reservoir_unitary
    }

    pub fn layout(&self) -> &FeedbackLayout {
        &self.layout
    }

    pub fn extra_feedback(&self) -> Option<&ExtraFeedback> {
        self.extra_feedback.as_ref()
    }

    pub fn measurement_shots(&self) -> Option<u64> {
        self.measurement_shots
    }
}

/// Per-cycle measurement vectors, stored row-major: row `k` (1-based cycle
/// index) holds the N expectation values of cycle `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    n_qubits: usize,
    values: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.values.len() / self.n_qubits
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Measurement vector of cycle `k` (1-based).
    pub fn row(&self, cycle: usize) -> &[f64] {
        assert!(cycle >= 1 && cycle <= self.len(), "cycle {cycle} out of range");
        &self.values[(cycle - 1) * self.n_qubits..cycle * self.n_qubits]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.n_qubits)
    }
}

/// Uniform [0, 1] vector used to stand in for measurement results that
/// precede the first cycle.
pub fn init_feedback_vector<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Vec<f64> {
    (0..n_qubits).map(|_| rng.gen::<f64>()).collect()
}

/// Perturb each expectation value with Gaussian noise of standard deviation
/// `sqrt((1 - z^2) / shots)`, then clamp back into [-1, 1]. Models the
/// statistical uncertainty of estimating `<Z>` from `shots` samples.
pub fn apply_shot_noise<R: Rng + ?Sized>(z: &mut [f64], shots: u64, rng: &mut R) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidArgument(
            "measurement shot count must be positive".into(),
        ));
    }
    let inv = 1.0 / shots as f64;
    for value in z.iter_mut() {
        let variance = (1.0 - *value * *value).max(0.0) * inv;
        if variance > 0.0 {
            let noise: f64 = rng.sample(StandardNormal);
            *value = (*value + variance.sqrt() * noise).clamp(-1.0, 1.0);
        }
    }
    Ok(())
}

struct CycleEngine<'a> {
    config: &'a ReservoirConfig,
    state: Statevector,
    scratch: Statevector,
}

impl<'a> CycleEngine<'a> {
    fn new(config: &'a ReservoirConfig) -> Self {
        let state = Statevector::zero_state(config.n_qubits);
        let scratch = state.clone();
        Self {
            config,
            state,
            scratch,
        }
    }

    fn run<R: Rng + ?Sized>(
        &mut self,
        input: f64,
        feedback: &[f64],
        delayed_feedback: Option<&[f64]>,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        let cfg = self.config;
        if !input.is_finite() {
            return Err(Error::NonFinite("cycle input".into()));
        }
        if feedback.len() != cfg.n_qubits || feedback.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "feedback vector must have one finite entry per qubit".into(),
            ));
        }
        match (&cfg.extra_feedback, delayed_feedback) {
            (Some(_), Some(fb2)) => {
                if fb2.len() != cfg.n_qubits || fb2.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "delayed feedback vector must have one finite entry per qubit".into(),
                    ));
                }
            }
            (None, None) => {}
            (Some(_), None) => {
                return Err(Error::InvalidArgument(
                    "configuration has a second feedback layer but no delayed vector was given"
                        .into(),
                ))
            }
            (None, Some(_)) => {
                return Err(Error::InvalidArgument(
                    "delayed feedback given but no second layer is configured".into(),
                ))
            }
        }

        self.state.reset_zero();
        self.state
            .apply_embedding(1, 2, cfg.input_weight * input)?;
        for entry in cfg.layout.entries() {
            let (i, j) = entry.qubits;
            self.state
                .apply_embedding(i, j, cfg.feedback_weight * feedback[entry.source - 1])?;
        }
        if let (Some(extra), Some(fb2)) = (&cfg.extra_feedback, delayed_feedback) {
            for entry in extra.layout.entries() {
                let (i, j) = entry.qubits;
                self.state
                    .apply_embedding(i, j, cfg.feedback_weight * fb2[entry.source - 1])?;
            }
        }
        self.state
            .apply_unitary_buffered(&cfg.reservoir_unitary, &mut self.scratch)?;

        let mut z = self.state.z_expectations();
        if let Some(shots) = cfg.measurement_shots {
            apply_shot_noise(&mut z, shots, rng)?;
        }
        Ok(z)
    }
}

/// Run a single cycle. `delayed_feedback` must be given exactly when the
/// configuration carries a second feedback layer.
pub fn run_cycle<R: Rng + ?Sized>(
    config: &ReservoirConfig,
    input: f64,
    feedback: &[f64],
    delayed_feedback: Option<&[f64]>,
    rng: &mut R,
) -> Result<Vec<f64>> {
    CycleEngine::new(config).run(input, feedback, delayed_feedback, rng)
}

/// Drive the reservoir through a whole input sequence.
///
/// The feedback vector for the first cycle is drawn uniform in [0, 1]; when
/// a second feedback layer with delay `D` is configured, cycles that would
/// reach before the first cycle read from a history buffer pre-filled with
/// `D - 1` further uniform vectors. With measurement noise configured, the
/// noisy values are both recorded and fed back.
pub fn run_sequence<R: Rng + ?Sized>(
    config: &ReservoirConfig,
    inputs: &[f64],
    rng: &mut R,
) -> Result<Trajectory> {
    for (k, s) in inputs.iter().enumerate() {
        if !s.is_finite() || !(0.0..=1.0).contains(s) {
            return Err(Error::InvalidArgument(format!(
                "input {s} at cycle {} is outside [0, 1]",
                k + 1
            )));
        }
    }
    let n = config.n_qubits;
    let mut engine = CycleEngine::new(config);
    let mut values = Vec::with_capacity(inputs.len() * n);

    // history[0] is the most recent vector z_{k-1}; the back holds the
    // oldest entry needed by the delayed layer.
    let depth = config
        .extra_feedback
        .as_ref()
        .map(|extra| extra.delay)
        .unwrap_or(1);
    let mut history: VecDeque<Vec<f64>> = VecDeque::with_capacity(depth + 1);
    history.push_back(init_feedback_vector(n, rng));
    for _ in 1..depth {
        history.push_back(init_feedback_vector(n, rng));
    }

    for &input in inputs {
        let z = {
            let feedback = history.front().expect("history is never empty");
            let delayed = config
                .extra_feedback
                .as_ref()
                .map(|_| history.back().expect("history is never empty").as_slice());
            engine.run(input, feedback, delayed, rng)?
        };
        values.extend_from_slice(&z);
        history.push_front(z);
        if history.len() > depth {
            history.pop_back();
        }
    }

    Ok(Trajectory {
        n_qubits: n,
        values,
    })
}
