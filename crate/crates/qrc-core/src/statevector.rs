//! Dense statevector simulation of pure N-qubit states.
//!
//! Conventions, fixed once and relied on by every oracle test:
//!
//! - Qubits are 1-based; qubit `q` owns bit position `q - 1` of the basis
//!   index, with little-endian ordering (qubit 1 is the least significant
//!   bit).
//! - Rotation gates follow the half-angle convention
//!   `R_P(θ) = exp(-i θ P / 2)` for `P ∈ {X, Y, Z}`.
//! - Gate products written as operators act right to left: the rightmost
//!   factor is applied first in time.
//!
//! Amplitudes are stored as split real/imaginary arrays so the hot dense
//! matrix-vector product in the reservoir cycle vectorizes cleanly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::unitary::DenseUnitary;

/// Rotation generator for single-qubit gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

/// Pure state of an `n`-qubit register as a complex amplitude vector of
/// length `2^n`.
#[derive(Clone, Debug)]
pub struct Statevector {
    n_qubits: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Statevector {
    /// The all-zeros computational basis state `|0...0>`.
    pub fn zero_state(n_qubits: usize) -> Self {
        assert!((1..=24).contains(&n_qubits), "unsupported register size");
        let dim = 1usize << n_qubits;
        let mut re = vec![0.0; dim];
        re[0] = 1.0;
        Self {
            n_qubits,
            re,
            im: vec![0.0; dim],
        }
    }

    /// Re-prepare `|0...0>` in place.
    pub fn reset_zero(&mut self) {
        self.re.fill(0.0);
        self.im.fill(0.0);
        self.re[0] = 1.0;
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    /// Amplitude of basis index `idx` (bit `q - 1` of `idx` is qubit `q`).
    pub fn amplitude(&self, idx: usize) -> Complex64 {
        Complex64::new(self.re[idx], self.im[idx])
    }

    /// All amplitudes as a complex vector, for composition with dense
    /// operator oracles.
    pub fn to_complex_vec(&self) -> Vec<Complex64> {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect()
    }

    /// Build a state from explicit amplitudes. The vector must have length
    /// `2^n` for some `n >= 1` and unit norm within 1e-10.
    pub fn from_amplitudes(amps: &[Complex64]) -> Result<Self> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude vector length {dim} is not a power of two >= 2"
            )));
        }
        let state = Self {
            n_qubits: dim.trailing_zeros() as usize,
            re: amps.iter().map(|a| a.re).collect(),
            im: amps.iter().map(|a| a.im).collect(),
        };
        if (state.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "state norm {} is not 1",
                state.norm()
            )));
        }
        Ok(state)
    }

    /// Euclidean norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.re
            .iter()
            .zip(&self.im)
            .map(|(r, i)| r * r + i * i)
            .sum::<f64>()
            .sqrt()
    }

    fn check_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit == 0 || qubit > self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(qubit - 1)
    }

    /// Apply `exp(-i angle/2 · P)` on `target` for the given axis `P`.
    pub fn apply_rotation(&mut self, axis: RotationAxis, angle: f64, target: usize) -> Result<()> {
        let bit = self.check_qubit(target)?;
        rotation_kernel(&mut self.re, &mut self.im, bit, axis, angle);
        Ok(())
    }

    /// Apply CNOT with the given control and target qubits.
    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        let c = self.check_qubit(control)?;
        let t = self.check_qubit(target)?;
        if c == t {
            return Err(Error::IdenticalQubits(control));
        }
        cnot_kernel(&mut self.re, &mut self.im, c, t);
        Ok(())
    }

    /// Two-qubit embedding gate used for input and feedback encoding:
    /// `CX_{ij} · RZ_j(θ) · CX_{ij} · RX_i(θ) · RX_j(θ)` as an operator
    /// product, i.e. applied in temporal order RX_i, RX_j, CX, RZ_j, CX.
    pub fn apply_embedding(&mut self, i: usize, j: usize, angle: f64) -> Result<()> {
        let bi = self.check_qubit(i)?;
        let bj = self.check_qubit(j)?;
        if bi == bj {
            return Err(Error::IdenticalQubits(i));
        }
        rotation_kernel(&mut self.re, &mut self.im, bi, RotationAxis::X, angle);
        rotation_kernel(&mut self.re, &mut self.im, bj, RotationAxis::X, angle);
        cnot_kernel(&mut self.re, &mut self.im, bi, bj);
        rotation_kernel(&mut self.re, &mut self.im, bj, RotationAxis::Z, angle);
        cnot_kernel(&mut self.re, &mut self.im, bi, bj);
        Ok(())
    }

    /// Multiply the state by a dense unitary, allocating a scratch buffer.
    pub fn apply_unitary(&mut self, u: &DenseUnitary) -> Result<()> {
        let mut scratch = self.clone();
        self.apply_unitary_buffered(u, &mut scratch)
    }

    /// Multiply the state by a dense unitary using a caller-owned scratch
    /// state of the same size, avoiding allocation in tight loops.
    pub fn apply_unitary_buffered(
        &mut self,
        u: &DenseUnitary,
        scratch: &mut Statevector,
    ) -> Result<()> {
        if u.dim() != self.dim() || scratch.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.dim(),
            });
        }
        u.matvec(&self.re, &self.im, &mut scratch.re, &mut scratch.im);
        std::mem::swap(&mut self.re, &mut scratch.re);
        std::mem::swap(&mut self.im, &mut scratch.im);
        Ok(())
    }

    /// Exact expectation value of Pauli Z on `qubit`, in [-1, 1].
    pub fn expectation_z(&self, qubit: usize) -> Result<f64> {
        let bit = self.check_qubit(qubit)?;
        let mut value = 0.0;
        for (idx, (r, i)) in self.re.iter().zip(&self.im).enumerate() {
            let p = r * r + i * i;
            if (idx >> bit) & 1 == 0 {
                value += p;
            } else {
                value -= p;
            }
        }
        Ok(value.clamp(-1.0, 1.0))
    }

    /// Z expectation values for every qubit, qubit 1 first. Entries are
    /// clamped to [-1, 1] against rounding in the probability sum.
    pub fn z_expectations(&self) -> Vec<f64> {
        let mut values = vec![0.0; self.n_qubits];
        for (idx, (r, i)) in self.re.iter().zip(&self.im).enumerate() {
            let p = r * r + i * i;
            for (bit, value) in values.iter_mut().enumerate() {
                if (idx >> bit) & 1 == 0 {
                    *value += p;
                } else {
                    *value -= p;
                }
            }
        }
        for value in &mut values {
            *value = value.clamp(-1.0, 1.0);
        }
        values
    }
}

/// Single-qubit rotation on split-layout amplitudes. `bit` is the 0-based
/// bit position of the target qubit.
pub(crate) fn rotation_kernel(
    re: &mut [f64],
    im: &mut [f64],
    bit: usize,
    axis: RotationAxis,
    angle: f64,
) {
    let half = 0.5 * angle;
    let c = half.cos();
    let s = half.sin();
    let step = 1usize << bit;
    let dim = re.len();
    let mut base = 0;
    while base < dim {
        for p0 in base..base + step {
            let p1 = p0 + step;
            let (ar, ai, br, bi) = (re[p0], im[p0], re[p1], im[p1]);
            match axis {
                RotationAxis::X => {
                    re[p0] = c * ar + s * bi;
                    im[p0] = c * ai - s * br;
                    re[p1] = s * ai + c * br;
                    im[p1] = -s * ar + c * bi;
                }
                RotationAxis::Y => {
                    re[p0] = c * ar - s * br;
                    im[p0] = c * ai - s * bi;
                    re[p1] = s * ar + c * br;
                    im[p1] = s * ai + c * bi;
                }
                RotationAxis::Z => {
                    re[p0] = c * ar + s * ai;
                    im[p0] = c * ai - s * ar;
                    re[p1] = c * br - s * bi;
                    im[p1] = c * bi + s * br;
                }
            }
        }
        base += 2 * step;
    }
}

/// CNOT on split-layout amplitudes; `control` and `target` are 0-based bit
/// positions.
pub(crate) fn cnot_kernel(re: &mut [f64], im: &mut [f64], control: usize, target: usize) {
    let cmask = 1usize << control;
    let tmask = 1usize << target;
    for idx in 0..re.len() {
        if idx & cmask != 0 && idx & tmask == 0 {
            let other = idx | tmask;
            re.swap(idx, other);
            im.swap(idx, other);
        }
    }
}
