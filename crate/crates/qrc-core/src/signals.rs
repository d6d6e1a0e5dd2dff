//! Benchmark input sequences, normalized to the unit interval.
//!
//! Four generators: iid uniform noise (memory task), a cosine wave, the
//! chaotic Mackey-Glass delay differential equation, and exact expectation
//! dynamics of a small Ising spin chain (integrable and nonintegrable
//! parameter points).

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};

/// A generated series in [0, 1] together with the affine map that produced
/// it: `value = (raw - raw_min) / (raw_max - raw_min)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalSeries {
    values: Vec<f64>,
    raw_min: f64,
    raw_max: f64,
}

impl SignalSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn raw_min(&self) -> f64 {
        self.raw_min
    }

    pub fn raw_max(&self) -> f64 {
        self.raw_max
    }

    /// Value of cycle `k` (1-based).
    pub fn value(&self, k: usize) -> f64 {
        self.values[k - 1]
    }
}

/// Min-max normalize a raw series onto [0, 1], recording the affine map.
/// A constant series maps to all 0.5; "constant" allows a relative spread
/// of 1e-12 so rounding noise on a frozen observable is not stretched
/// across the whole interval.
pub fn normalize_to_unit_interval(raw: &[f64]) -> Result<SignalSeries> {
    if raw.is_empty() {
        return Err(Error::InvalidArgument("cannot normalize an empty series".into()));
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("raw series".into()));
    }
    let raw_min = raw.iter().copied().fold(f64::INFINITY, f64::min);
    let raw_max = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = raw_max - raw_min;
    let scale = raw_min.abs().max(raw_max.abs()).max(1.0);
    let values = if span <= 1e-12 * scale {
        vec![0.5; raw.len()]
    } else {
        raw.iter().map(|v| (v - raw_min) / span).collect()
    };
    Ok(SignalSeries {
        values,
        raw_min,
        raw_max,
    })
}

/// `len` iid uniform [0, 1] draws; already in range, no normalization.
pub fn gen_uniform_random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> SignalSeries {
    SignalSeries {
        values: (0..len).map(|_| rng.gen()).collect(),
        raw_min: 0.0,
        raw_max: 1.0,
    }
}

/// Cosine wave `(cos(omega k) + 1) / 2` for cycles `k = 1..=len` — the
/// unique affine image of a cosine in [0, 1].
pub fn gen_cosine(len: usize, angular_freq: f64) -> SignalSeries {
    SignalSeries {
        values: (1..=len)
            .map(|k| (f64::cos(angular_freq * k as f64) + 1.0) * 0.5)
            .collect(),
        raw_min: -1.0,
        raw_max: 1.0,
    }
}

/// Mackey-Glass parameters: `x'(t) = drive·x(t-delay)/(1 + x(t-delay)^exponent) - decay·x(t)`,
/// integrated with fixed-step RK4 and a linearly interpolated delay term.
/// Chaotic for `delay > 16.8` at the standard (0.2, 10, 0.1) values.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct MgParams {
    pub drive: f64,
    pub exponent: f64,
    pub decay: f64,
    pub delay: f64,
    /// RK4 step; must evenly divide one time unit so series samples land on
    /// grid points.
    pub step: f64,
    /// Time units discarded before sampling starts.
    pub burn_in: f64,
}

impl Default for MgParams {
    fn default() -> Self {
        Self {
            drive: 0.2,
            exponent: 10.0,
            decay: 0.1,
            delay: 17.0,
            step: 0.1,
            burn_in: 1000.0,
        }
    }
}

impl MgParams {
    fn steps_per_unit(&self) -> Result<usize> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig("integration step must be positive".into()));
        }
        let spu = (1.0 / self.step).round();
        if spu < 1.0 || (spu * self.step - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "step {} does not divide one time unit",
                self.step
            )));
        }
        Ok(spu as usize)
    }

    fn validate(&self) -> Result<usize> {
        if !(self.delay.is_finite() && self.delay > 0.0) {
            return Err(Error::InvalidConfig("delay must be positive".into()));
        }
        if self.delay < self.step {
            return Err(Error::InvalidConfig(
                "delay must be at least one integration step".into(),
            ));
        }
        if !(self.burn_in.is_finite() && self.burn_in >= 0.0) {
            return Err(Error::InvalidConfig("burn-in must be non-negative".into()));
        }
        self.steps_per_unit()
    }
}

/// Integrate the delay equation for `n_steps` RK4 steps from the constant
/// history `x(t <= 0) = initial`. Returns the grid values `x(0), x(h), ...`,
/// `n_steps + 1` of them.
pub fn mackey_glass_raw(params: &MgParams, initial: f64, n_steps: usize) -> Result<Vec<f64>> {
    params.validate()?;
    let h = params.step;
    let mut grid = Vec::with_capacity(n_steps + 1);
    grid.push(initial);

    let delayed = |grid: &[f64], time: f64| -> f64 {
        if time <= 0.0 {
            return initial;
        }
        let pos = time / h;
        let idx = pos.floor() as usize;
        let frac = pos - idx as f64;
        if idx + 1 >= grid.len() || frac == 0.0 {
            grid[idx.min(grid.len() - 1)]
        } else {
            grid[idx] * (1.0 - frac) + grid[idx + 1] * frac
        }
    };
    let rhs = |x: f64, x_delayed: f64| -> f64 {
        params.drive * x_delayed / (1.0 + x_delayed.powf(params.exponent)) - params.decay * x
    };

    for n in 0..n_steps {
        let t = n as f64 * h;
        let x = grid[n];
        let d0 = delayed(&grid, t - params.delay);
        let dh = delayed(&grid, t + 0.5 * h - params.delay);
        let d1 = delayed(&grid, t + h - params.delay);
        let k1 = rhs(x, d0);
        let k2 = rhs(x + 0.5 * h * k1, dh);
        let k3 = rhs(x + 0.5 * h * k2, dh);
        let k4 = rhs(x + h * k3, d1);
        let next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("Mackey-Glass state at step {n}")));
        }
        grid.push(next);
    }
    Ok(grid)
}

/// Generate `len` Mackey-Glass samples at integer times after the burn-in,
/// from the constant initial history `x(t <= 0) = 1.2`, min-max normalized.
pub fn gen_mackey_glass(len: usize, params: &MgParams) -> Result<SignalSeries> {
    let spu = params.validate()?;
    let burn_units = params.burn_in.round();
    if (params.burn_in - burn_units).abs() > 1e-9 {
        return Err(Error::InvalidConfig(
            "burn-in must be a whole number of time units".into(),
        ));
    }
    let burn_units = burn_units as usize;
    let n_steps = (burn_units + len) * spu;
    let grid = mackey_glass_raw(params, 1.2, n_steps)?;
    let raw: Vec<f64> = (1..=len)
        .map(|k| grid[(burn_units + k) * spu])
        .collect();
    normalize_to_unit_interval(&raw)
}

/// Ising chain parameters:
/// `H = -coupling · Σ σz_i σz_{i+1} + transverse_field · Σ σx_i + longitudinal_field · Σ σz_i`
/// on an open chain, evolved exactly from the all-up state; the observable
/// is `<σz>` at `site`, sampled every `step` time units.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct IsingParams {
    pub spins: usize,
    pub coupling: f64,
    pub transverse_field: f64,
    pub longitudinal_field: f64,
    pub step: f64,
    pub site: usize,
}

impl IsingParams {
    /// Free-fermion-solvable point (transverse field only).
    pub fn integrable() -> Self {
        Self {
            spins: 5,
            coupling: 1.0,
            transverse_field: 1.0,
            longitudinal_field: 0.0,
            step: 0.05,
            site: 3,
        }
    }

    /// Chaotic spectral statistics at fields (1.05, -0.5).
    pub fn nonintegrable() -> Self {
        Self {
            spins: 5,
            coupling: 1.0,
            transverse_field: 1.05,
            longitudinal_field: -0.5,
            step: 0.05,
            site: 3,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.spins < 2 || self.spins > 12 {
            return Err(Error::InvalidConfig(format!(
                "spin count {} outside the dense-diagonalization range 2..=12",
                self.spins
            )));
        }
        if self.site == 0 || self.site > self.spins {
            return Err(Error::InvalidConfig(format!(
                "observable site {} out of range 1..={}",
                self.site, self.spins
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig("time step must be positive".into()));
        }
        Ok(())
    }

    /// Dense Hamiltonian in the computational basis (spin `i` owns bit
    /// `i - 1`; bit 0 is spin-up with `σz = +1`). Real symmetric.
    pub fn hamiltonian(&self) -> DMatrix<f64> {
        let dim = 1usize << self.spins;
        let z = |basis: usize, spin: usize| -> f64 {
            if (basis >> (spin - 1)) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        };
        let mut h = DMatrix::zeros(dim, dim);
        for basis in 0..dim {
            let mut diag = 0.0;
            for spin in 1..self.spins {
                diag -= self.coupling * z(basis, spin) * z(basis, spin + 1);
            }
            for spin in 1..=self.spins {
                diag += self.longitudinal_field * z(basis, spin);
            }
            h[(basis, basis)] = diag;
            for spin in 1..=self.spins {
                let flipped = basis ^ (1 << (spin - 1));
                h[(flipped, basis)] += self.transverse_field;
            }
        }
        h
    }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi
/// rotations: returns the eigenvalues and the orthogonal matrix whose
/// columns are the eigenvectors. Jacobi keeps the eigenvector basis
/// orthonormal to machine precision, which the conservation checks on the
/// exact spin evolution rely on, and it leaves a diagonal matrix strictly
/// untouched.
pub fn jacobi_eigen(matrix: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = matrix.nrows();
    assert_eq!(n, matrix.ncols(), "matrix must be square");
    let mut a = matrix.clone();
    let mut v = DMatrix::identity(n, n);
    let norm = a.norm().max(f64::MIN_POSITIVE);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 1e-15 * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Two-sided rotation GᵀAG on columns/rows p, q.
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    (a.diagonal(), v)
}

/// Exact `<σz_site>(k·step)` for `k = 1..=len` (unnormalized).
pub fn ising_raw_series(len: usize, params: &IsingParams) -> Result<Vec<f64>> {
    params.validate()?;
    let h = params.hamiltonian();
    let dim = h.nrows();
    let (eigenvalues, eigenvectors) = jacobi_eigen(&h);
    // Initial state is the all-up basis vector e_0, so the eigenbasis
    // coefficients are the first row of the eigenvector matrix.
    let coeffs: DVector<f64> = eigenvectors.row(0).transpose();

    let z_sign: Vec<f64> = (0..dim)
        .map(|basis| {
            if (basis >> (params.site - 1)) & 1 == 0 {
                1.0
            } else {
                -1.0
            }
        })
        .collect();

    let mut series = Vec::with_capacity(len);
    let mut cos_part = DVector::zeros(dim);
    let mut sin_part = DVector::zeros(dim);
    for k in 1..=len {
        let t = k as f64 * params.step;
        for j in 0..dim {
            let phase = eigenvalues[j] * t;
            cos_part[j] = coeffs[j] * phase.cos();
            sin_part[j] = -coeffs[j] * phase.sin();
        }
        let psi_re = &eigenvectors * &cos_part;
        let psi_im = &eigenvectors * &sin_part;
        let mut value = 0.0;
        for basis in 0..dim {
            value += (psi_re[basis] * psi_re[basis] + psi_im[basis] * psi_im[basis])
                * z_sign[basis];
        }
        series.push(value);
    }
    Ok(series)
}

/// Normalized Ising observable series.
pub fn gen_ising_dynamics(len: usize, params: &IsingParams) -> Result<SignalSeries> {
    normalize_to_unit_interval(&ising_raw_series(len, params)?)
}
