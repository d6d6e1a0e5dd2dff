//! Leaky-tanh echo state network, the classical reservoir baseline.
//!
//! State update: `x_{k+1} = (1 - lr) x_k + lr · tanh(w_in s_{k+1} + W x_k)`
//! with Rademacher input weights and a Gaussian recurrent matrix rescaled to
//! a prescribed spectral radius. The readout is ridge-trained on the same
//! washout/train/test windows as the quantum pipeline.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::readout::{design_matrix_from_states, nmse, SplitSpec, TaskTargets};

/// Fixed hyperparameters of one network.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct EsnParams {
    pub nodes: usize,
    pub spectral_radius: f64,
    pub leak_rate: f64,
    pub ridge: f64,
}

impl EsnParams {
    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::InvalidConfig("node count must be positive".into()));
        }
        if !(self.spectral_radius.is_finite() && self.spectral_radius > 0.0) {
            return Err(Error::InvalidConfig(
                "spectral radius must be positive".into(),
            ));
        }
        if !(self.leak_rate > 0.0 && self.leak_rate <= 1.0) {
            return Err(Error::InvalidConfig("leak rate must lie in (0, 1]".into()));
        }
        if !(self.ridge.is_finite() && self.ridge >= 0.0) {
            return Err(Error::InvalidConfig(
                "ridge strength must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// An initialized network with its running state.
#[derive(Clone, Debug)]
pub struct EchoStateNetwork {
    input_weights: DVector<f64>,
    recurrent: DMatrix<f64>,
    state: DVector<f64>,
    leak_rate: f64,
}

/// Largest eigenvalue magnitude of a real square matrix.
///
/// Gaussian recurrent matrices routinely have a complex dominant pair, for
/// which plain power iteration does not converge, so this goes through the
/// full (Schur-based) eigenvalue computation.
pub fn spectral_radius(m: &DMatrix<f64>) -> f64 {
    m.complex_eigenvalues()
        .iter()
        .map(|ev| ev.norm())
        .fold(0.0, f64::max)
}

impl EchoStateNetwork {
    /// Draw a network: input weights ±1 with equal probability, recurrent
    /// weights standard Gaussian rescaled so the spectral radius matches
    /// `params.spectral_radius` within 1e-6 relative.
    pub fn init<R: Rng + ?Sized>(params: &EsnParams, rng: &mut R) -> Result<Self> {
        params.validate()?;
        let n = params.nodes;
        let input_weights =
            DVector::from_fn(n, |_, _| if rng.gen::<bool>() { 1.0 } else { -1.0 });
        for _attempt in 0..4 {
            let mut recurrent = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let radius = spectral_radius(&recurrent);
            if radius <= f64::EPSILON {
                continue; // measure-zero degenerate draw, resample
            }
            recurrent *= params.spectral_radius / radius;
            return Ok(Self {
                input_weights,
                recurrent,
                state: DVector::zeros(n),
                leak_rate: params.leak_rate,
            });
        }
        Err(Error::InvalidConfig(
            "recurrent matrix kept sampling with zero spectral radius".into(),
        ))
    }

    pub fn nodes(&self) -> usize {
        self.state.len()
    }

    pub fn input_weights(&self) -> &DVector<f64> {
        &self.input_weights
    }

    pub fn recurrent(&self) -> &DMatrix<f64> {
        &self.recurrent
    }

    pub fn state(&self) -> &DVector<f64> {
        &self.state
    }

    pub fn reset(&mut self) {
        self.state.fill(0.0);
    }

    /// One leaky-tanh update with scalar input `input`.
    pub fn step(&mut self, input: f64) {
        let mut pre = &self.recurrent * &self.state;
        pre.axpy(input, &self.input_weights, 1.0);
        let lr = self.leak_rate;
        for (x, p) in self.state.iter_mut().zip(pre.iter()) {
            *x = (1.0 - lr) * *x + lr * p.tanh();
        }
    }

    /// Drive the network over a series from the zero state and collect one
    /// state row per cycle (cycle k = state after consuming input k).
    pub fn collect_states(&mut self, inputs: &[f64]) -> DMatrix<f64> {
        self.reset();
        let mut states = DMatrix::zeros(inputs.len(), self.nodes());
        for (k, &input) in inputs.iter().enumerate() {
            self.step(input);
            for (col, value) in self.state.iter().enumerate() {
                states[(k, col)] = *value;
            }
        }
        states
    }
}

/// Run one network over the series and return the ridge-readout test NMSE.
pub fn evaluate<R: Rng + ?Sized>(
    params: &EsnParams,
    inputs: &[f64],
    targets: &TaskTargets,
    split: &SplitSpec,
    rng: &mut R,
) -> Result<f64> {
    if inputs.len() < split.total() {
        return Err(Error::InvalidArgument(format!(
            "series of {} inputs is shorter than the split total {}",
            inputs.len(),
            split.total()
        )));
    }
    let mut esn = EchoStateNetwork::init(params, rng)?;
    let states = esn.collect_states(&inputs[..split.total()]);
    let scored = score_states(&states, split, params.ridge, std::slice::from_ref(targets))?;
    Ok(scored[0])
}

/// Fit and score many target sets against one collected state matrix: the
/// Gram factorization is shared across targets.
fn score_states(
    states: &DMatrix<f64>,
    split: &SplitSpec,
    ridge: f64,
    target_sets: &[TaskTargets],
) -> Result<Vec<f64>> {
    let x_train = design_matrix_from_states(states, split.washout, split.train_len);
    let x_test = design_matrix_from_states(states, split.washout + split.train_len, split.test_len);
    let mut gram = x_train.tr_mul(&x_train);
    for k in 0..gram.nrows() {
        gram[(k, k)] += ridge;
    }
    let chol = gram.cholesky().ok_or_else(|| {
        Error::InvalidArgument("ridge system is singular; increase the ridge strength".into())
    })?;
    target_sets
        .iter()
        .map(|targets| {
            let rhs = x_train.tr_mul(&DMatrix::from_column_slice(
                targets.train.len(),
                1,
                targets.train.as_slice(),
            ));
            let weights = chol.solve(&rhs);
            let output = &x_test * DVector::from_column_slice(weights.as_slice());
            nmse(targets.test.as_slice(), output.as_slice())
        })
        .collect()
}

/// Hyperparameter grid; the defaults are the standard benchmark grid.
#[derive(Clone, Debug, serde::Serialize)]
pub struct EsnGrid {
    pub spectral_radii: Vec<f64>,
    pub leak_rates: Vec<f64>,
    pub ridge: f64,
}

impl Default for EsnGrid {
    fn default() -> Self {
        Self {
            spectral_radii: vec![0.5, 0.75, 0.95, 1.25, 1.5],
            leak_rates: vec![0.4, 0.6, 0.8, 1.0],
            ridge: 1e-5,
        }
    }
}

/// How ensemble averaging and grid minimization compose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum GridOrder {
    /// Mean NMSE over realizations per cell, then the grid minimum
    /// (default).
    MeanThenMin,
    /// Per-realization minimum over the grid, then the mean.
    MinThenMean,
}

/// Best NMSE per target set over the hyperparameter grid.
///
/// Each (cell, realization) pair runs the network once and scores every
/// target set against the same states. Realization seeds come from
/// `seeds[realization]`, identical across cells so comparisons are paired.
pub fn grid_search(
    nodes: usize,
    grid: &EsnGrid,
    order: GridOrder,
    inputs: &[f64],
    target_sets: &[TaskTargets],
    split: &SplitSpec,
    seeds: &[u64],
) -> Result<Vec<f64>> {
    use rand::SeedableRng;
    if grid.spectral_radii.is_empty() || grid.leak_rates.is_empty() {
        return Err(Error::InvalidConfig("empty hyperparameter grid".into()));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidConfig("need at least one realization".into()));
    }
    let n_cells = grid.spectral_radii.len() * grid.leak_rates.len();
    // nmse[cell][realization][target]
    let mut scores = vec![vec![Vec::new(); seeds.len()]; n_cells];
    let mut cell = 0;
    for &radius in &grid.spectral_radii {
        for &leak in &grid.leak_rates {
            let params = EsnParams {
                nodes,
                spectral_radius: radius,
                leak_rate: leak,
                ridge: grid.ridge,
            };
            for (r, &seed) in seeds.iter().enumerate() {
                let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
                let mut esn = EchoStateNetwork::init(&params, &mut rng)?;
                let states = esn.collect_states(&inputs[..split.total()]);
                scores[cell][r] = score_states(&states, split, grid.ridge, target_sets)?;
            }
            cell += 1;
        }
    }

    let n_targets = target_sets.len();
    let best = match order {
        GridOrder::MeanThenMin => (0..n_targets)
            .map(|t| {
                (0..n_cells)
                    .map(|c| {
                        scores[c].iter().map(|row| row[t]).sum::<f64>() / seeds.len() as f64
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
        GridOrder::MinThenMean => (0..n_targets)
            .map(|t| {
                (0..seeds.len())
                    .map(|r| {
                        (0..n_cells)
                            .map(|c| scores[c][r][t])
                            .fold(f64::INFINITY, f64::min)
                    })
                    .sum::<f64>()
                    / seeds.len() as f64
            })
            .collect(),
    };
    Ok(best)
}
