//! Linear readout training and evaluation.
//!
//! The readout sees one row per cycle: the N measurement values augmented
//! with a constant 1, so a trained model has N + 1 weights with the bias
//! last. Fitting is least squares through an SVD pseudo-inverse, or ridge
//! regression for the classical baseline.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::reservoir::Trajectory;
use crate::signals::SignalSeries;

/// Washout/training/testing cycle counts. Training rows are cycles
/// `washout+1 ..= washout+train_len`, testing rows the `test_len` cycles
/// after that; the windows never overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SplitSpec {
    pub washout: usize,
    pub train_len: usize,
    pub test_len: usize,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            washout: 500,
            train_len: 2000,
            test_len: 2000,
        }
    }
}

impl SplitSpec {
    pub fn total(&self) -> usize {
        self.washout + self.train_len + self.test_len
    }

    pub fn validate(&self) -> Result<()> {
        if self.washout == 0 || self.train_len == 0 || self.test_len == 0 {
            return Err(Error::InvalidConfig(
                "washout, training, and testing lengths must all be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Trained readout: N feature weights plus the bias as the last entry.
#[derive(Clone, Debug)]
pub struct ReadoutModel {
    pub weights: DVector<f64>,
}

impl ReadoutModel {
    pub fn predict(&self, design: &DMatrix<f64>) -> DVector<f64> {
        design * &self.weights
    }
}

/// What the readout should reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TargetKind {
    /// The input from `delay` cycles earlier (memory task).
    Delay(usize),
    /// The input `horizon` cycles ahead (forecasting task).
    Horizon(usize),
}

/// Target values aligned to the training and testing windows.
#[derive(Clone, Debug)]
pub struct TaskTargets {
    pub train: DVector<f64>,
    pub test: DVector<f64>,
}

/// Design matrix over `count` cycles starting at the 1-based `first_cycle`:
/// row `t` is the cycle's measurement vector with an appended 1.
pub fn design_matrix(traj: &Trajectory, first_cycle: usize, count: usize) -> Result<DMatrix<f64>> {
    if first_cycle == 0 || count == 0 || first_cycle + count - 1 > traj.len() {
        return Err(Error::InvalidArgument(format!(
            "cycles {first_cycle}..{} exceed the {}-cycle trajectory",
            first_cycle + count - 1,
            traj.len()
        )));
    }
    let n = traj.n_qubits();
    let mut x = DMatrix::zeros(count, n + 1);
    for t in 0..count {
        let row = traj.row(first_cycle + t);
        for (col, value) in row.iter().enumerate() {
            x[(t, col)] = *value;
        }
        x[(t, n)] = 1.0;
    }
    Ok(x)
}

/// Design matrix over `count` rows of a plain state matrix (row = cycle),
/// starting at 0-based row `offset`, with the bias column appended. Serves
/// readouts whose features are not a [`Trajectory`], like the classical
/// baseline.
pub fn design_matrix_from_states(
    states: &DMatrix<f64>,
    offset: usize,
    count: usize,
) -> DMatrix<f64> {
    let cols = states.ncols();
    let mut x = DMatrix::zeros(count, cols + 1);
    for t in 0..count {
        for col in 0..cols {
            x[(t, col)] = states[(offset + t, col)];
        }
        x[(t, cols)] = 1.0;
    }
    x
}

/// Least-squares fit through the SVD pseudo-inverse, dropping singular
/// values below `1e-12 · σ_max` so rank-deficient designs stay well posed.
pub fn fit_pseudo_inverse(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<ReadoutModel> {
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(Error::InvalidArgument("empty design matrix".into()));
    }
    if x.nrows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            got: y.len(),
        });
    }
    let svd = x.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let eps = 1e-12 * sigma_max;
    let weights = svd
        .solve(y, eps)
        .map_err(|msg| Error::InvalidArgument(format!("SVD solve failed: {msg}")))?;
    Ok(ReadoutModel { weights })
}

/// Ridge fit `(XᵀX + βI) w = Xᵀy` via Cholesky. `β = 0` on a singular
/// system falls back to the pseudo-inverse solution.
pub fn fit_ridge(x: &DMatrix<f64>, y: &DVector<f64>, ridge: f64) -> Result<ReadoutModel> {
    if !(ridge.is_finite() && ridge >= 0.0) {
        return Err(Error::InvalidArgument(
            "ridge strength must be finite and non-negative".into(),
        ));
    }
    if x.nrows() == 0 || x.ncols() == 0 {
        return Err(Error::InvalidArgument("empty design matrix".into()));
    }
    if x.nrows() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            got: y.len(),
        });
    }
    let mut gram = x.tr_mul(x);
    for k in 0..gram.nrows() {
        gram[(k, k)] += ridge;
    }
    match gram.cholesky() {
        Some(chol) => {
            let rhs = x.tr_mul(&DMatrix::from_column_slice(y.len(), 1, y.as_slice()));
            let solved = chol.solve(&rhs);
            Ok(ReadoutModel {
                weights: DVector::from_column_slice(solved.as_slice()),
            })
        }
        None => fit_pseudo_inverse(x, y),
    }
}

/// Squared correlation `cov²(target, output) / (var(target) var(output))`,
/// clamped to [0, 1]; zero when either variance is below 1e-15 (a constant
/// output carries no correlation).
pub fn r_squared(target: &[f64], output: &[f64]) -> Result<f64> {
    if target.len() != output.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            got: output.len(),
        });
    }
    if target.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two samples for a correlation".into(),
        ));
    }
    let n = target.len() as f64;
    let mean_t = target.iter().sum::<f64>() / n;
    let mean_o = output.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var_t = 0.0;
    let mut var_o = 0.0;
    for (t, o) in target.iter().zip(output) {
        let (dt, dy) = (t - mean_t, o - mean_o);
        cov += dt * dy;
        var_t += dt * dt;
        var_o += dy * dy;
    }
    cov /= n;
    var_t /= n;
    var_o /= n;
    if var_t < 1e-15 || var_o < 1e-15 {
        return Ok(0.0);
    }
    Ok((cov * cov / (var_t * var_o)).clamp(0.0, 1.0))
}

/// Normalized mean squared error `‖target - output‖² / ‖target‖²`.
pub fn nmse(target: &[f64], output: &[f64]) -> Result<f64> {
    if target.len() != output.len() {
        return Err(Error::DimensionMismatch {
            expected: target.len(),
            got: output.len(),
        });
    }
    let mut err = 0.0;
    let mut norm = 0.0;
    for (t, o) in target.iter().zip(output) {
        err += (t - o) * (t - o);
        norm += t * t;
    }
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero-norm target".into()));
    }
    Ok(err / norm)
}

/// Total memory capacity: the sum of `R²_d` over the delays `0..=d_max`.
pub fn memory_capacity(r2_by_delay: &[f64]) -> f64 {
    r2_by_delay.iter().sum()
}

/// Align target values to the train/test windows of `split`. Delay targets
/// need `delay <= washout`; horizon targets need the series to extend
/// `horizon` cycles past the last test cycle.
pub fn make_targets(
    series: &SignalSeries,
    kind: TargetKind,
    split: &SplitSpec,
) -> Result<TaskTargets> {
    split.validate()?;
    let total = split.total();
    let needed = match kind {
        TargetKind::Delay(delay) => {
            if delay > split.washout {
                return Err(Error::InvalidArgument(format!(
                    "delay {delay} exceeds the washout of {}",
                    split.washout
                )));
            }
            total
        }
        TargetKind::Horizon(horizon) => total + horizon,
    };
    if series.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "series of length {} is too short; need {needed}",
            series.len()
        )));
    }
    let target_at = |cycle: usize| -> f64 {
        match kind {
            TargetKind::Delay(delay) => series.value(cycle - delay),
            TargetKind::Horizon(horizon) => series.value(cycle + horizon),
        }
    };
    let train = DVector::from_iterator(
        split.train_len,
        (split.washout + 1..=split.washout + split.train_len).map(target_at),
    );
    let test_first = split.washout + split.train_len + 1;
    let test = DVector::from_iterator(
        split.test_len,
        (test_first..test_first + split.test_len).map(target_at),
    );
    Ok(TaskTargets { train, test })
}

/// Which fit the readout uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FitKind {
    PseudoInverse,
    Ridge(f64),
}

/// Test-window scores of a trained readout.
#[derive(Clone, Copy, Debug)]
pub struct TaskScore {
    pub r_squared: f64,
    pub nmse: f64,
}

/// Design matrices of a trajectory with the training factorization cached,
/// so many targets (delays, horizons) can be scored against one run.
pub struct PreparedDesign {
    svd: nalgebra::SVD<f64, nalgebra::Dyn, nalgebra::Dyn>,
    eps: f64,
    x_test: DMatrix<f64>,
}

impl PreparedDesign {
    pub fn new(traj: &Trajectory, split: &SplitSpec) -> Result<Self> {
        split.validate()?;
        if traj.len() < split.total() {
            return Err(Error::InvalidArgument(format!(
                "trajectory of {} cycles is shorter than the split total {}",
                traj.len(),
                split.total()
            )));
        }
        let x_train = design_matrix(traj, split.washout + 1, split.train_len)?;
        let x_test = design_matrix(
            traj,
            split.washout + split.train_len + 1,
            split.test_len,
        )?;
        let svd = x_train.svd(true, true);
        let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        Ok(Self {
            svd,
            eps: 1e-12 * sigma_max,
            x_test,
        })
    }

    /// Fit on the training window, score on the testing window.
    pub fn score(&self, targets: &TaskTargets) -> Result<TaskScore> {
        let weights = self
            .svd
            .solve(&targets.train, self.eps)
            .map_err(|msg| Error::InvalidArgument(format!("SVD solve failed: {msg}")))?;
        let output = &self.x_test * weights;
        Ok(TaskScore {
            r_squared: r_squared(targets.test.as_slice(), output.as_slice())?,
            nmse: nmse(targets.test.as_slice(), output.as_slice())?,
        })
    }
}

/// One-shot convenience over [`PreparedDesign`] for a single target.
pub fn train_and_score(
    traj: &Trajectory,
    targets: &TaskTargets,
    split: &SplitSpec,
    fit: FitKind,
) -> Result<TaskScore> {
    match fit {
        FitKind::PseudoInverse => PreparedDesign::new(traj, split)?.score(targets),
        FitKind::Ridge(ridge) => {
            let x_train = design_matrix(traj, split.washout + 1, split.train_len)?;
            let x_test = design_matrix(
                traj,
                split.washout + split.train_len + 1,
                split.test_len,
            )?;
            let model = fit_ridge(&x_train, &targets.train, ridge)?;
            let output = model.predict(&x_test);
            Ok(TaskScore {
                r_squared: r_squared(targets.test.as_slice(), output.as_slice())?,
                nmse: nmse(targets.test.as_slice(), output.as_slice())?,
            })
        }
    }
}
