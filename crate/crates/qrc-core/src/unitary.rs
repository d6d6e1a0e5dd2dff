//! Dense unitary operators: Haar-random sampling and the hardware-efficient
//! layered circuit used as an alternative scrambler.
//!
//! Matrices are stored row-major as split real/imaginary arrays; the
//! matrix-vector product below is the single hottest operation in a
//! reservoir run and is written to keep all four streams contiguous.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::statevector::{cnot_kernel, rotation_kernel, RotationAxis};

/// Dense `2^n x 2^n` unitary operator.
#[derive(Clone, Debug)]
pub struct DenseUnitary {
    n_qubits: usize,
    dim: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl DenseUnitary {
    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let mut u = Self {
            n_qubits,
            dim,
            re: vec![0.0; dim * dim],
            im: vec![0.0; dim * dim],
        };
        for k in 0..dim {
            u.re[k * dim + k] = 1.0;
        }
        u
    }

    /// Wrap an explicit matrix, validating unitarity: the Frobenius norm of
    /// `U†U - I` must be below 1e-10.
    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self> {
        let dim = m.nrows();
        if m.ncols() != dim || dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "matrix must be square with power-of-two dimension, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let u = Self::from_matrix_unchecked(m);
        let defect = u.unitarity_defect();
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(u)
    }

    fn from_matrix_unchecked(m: &DMatrix<Complex64>) -> Self {
        let dim = m.nrows();
        let mut re = vec![0.0; dim * dim];
        let mut im = vec![0.0; dim * dim];
        for row in 0..dim {
            for col in 0..dim {
                let v = m[(row, col)];
                re[row * dim + col] = v.re;
                im[row * dim + col] = v.im;
            }
        }
        Self {
            n_qubits: dim.trailing_zeros() as usize,
            dim,
            re,
            im,
        }
    }

    /// Sample from the Haar measure: QR decomposition of a complex
    /// standard-Gaussian matrix, with each column of Q rephased by
    /// `r_kk / |r_kk|` so the distribution is exactly uniform.
    pub fn haar<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Self {
        let dim = 1usize << n_qubits;
        let ginibre = DMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let qr = ginibre.qr();
        let r = qr.r();
        let phases: Vec<Complex64> = (0..dim)
            .map(|k| {
                let d = r[(k, k)];
                if d.norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    d / d.norm()
                }
            })
            .collect();
        let mut q = qr.q();
        for (k, phase) in phases.iter().enumerate() {
            for v in q.column_mut(k).iter_mut() {
                *v *= phase;
            }
        }
        Self::from_matrix_unchecked(&q)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |row, col| {
            Complex64::new(self.re[row * self.dim + col], self.im[row * self.dim + col])
        })
    }

    /// Frobenius norm of `U†U - I`. O(dim^3); meant for tests and input
    /// validation, not hot paths.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.to_matrix();
        let gram = m.adjoint() * &m;
        let mut sum = 0.0;
        for row in 0..self.dim {
            for col in 0..self.dim {
                let want = if row == col { 1.0 } else { 0.0 };
                sum += (gram[(row, col)] - Complex64::new(want, 0.0)).norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// `y = U x` on split-layout vectors. Lengths must equal `dim`.
    pub fn matvec(&self, xr: &[f64], xi: &[f64], yr: &mut [f64], yi: &mut [f64]) {
        debug_assert_eq!(xr.len(), self.dim);
        debug_assert_eq!(yr.len(), self.dim);
        for row in 0..self.dim {
            let ar = &self.re[row * self.dim..(row + 1) * self.dim];
            let ai = &self.im[row * self.dim..(row + 1) * self.dim];
            // Four-lane partial sums so the reduction vectorizes.
            let mut acc_r = [0.0f64; 4];
            let mut acc_i = [0.0f64; 4];
            let chunks = self.dim / 4;
            for c in 0..chunks {
                let j = 4 * c;
                for k in 0..4 {
                    let (mr, mi) = (ar[j + k], ai[j + k]);
                    let (vr, vi) = (xr[j + k], xi[j + k]);
                    acc_r[k] += mr * vr - mi * vi;
                    acc_i[k] += mr * vi + mi * vr;
                }
            }
            let mut sr = (acc_r[0] + acc_r[1]) + (acc_r[2] + acc_r[3]);
            let mut si = (acc_i[0] + acc_i[1]) + (acc_i[2] + acc_i[3]);
            for j in 4 * chunks..self.dim {
                let (mr, mi) = (ar[j], ai[j]);
                let (vr, vi) = (xr[j], xi[j]);
                sr += mr * vr - mi * vi;
                si += mr * vi + mi * vr;
            }
            yr[row] = sr;
            yi[row] = si;
        }
    }
}

/// Specification of the hardware-efficient scrambler: a wall of RY(π/4)
/// rotations followed by `layers` of per-qubit random Pauli rotations, each
/// closed by a CNOT ladder on adjacent pairs.
#[derive(Clone, Debug)]
pub struct AnsatzSpec {
    n_qubits: usize,
    /// Per layer, per qubit (qubit 1 first): rotation axis and angle.
    layers: Vec<Vec<(RotationAxis, f64)>>,
}

impl AnsatzSpec {
    /// Draw a random specification: axes uniform over {X, Y, Z}, angles
    /// uniform over [0, 2π).
    pub fn sample<R: Rng + ?Sized>(n_qubits: usize, layers: usize, rng: &mut R) -> Self {
        let layers = (0..layers)
            .map(|_| {
                (0..n_qubits)
                    .map(|_| {
                        let axis = match rng.gen_range(0..3u8) {
                            0 => RotationAxis::X,
                            1 => RotationAxis::Y,
                            _ => RotationAxis::Z,
                        };
                        (axis, rng.gen_range(0.0..std::f64::consts::TAU))
                    })
                    .collect()
            })
            .collect();
        Self { n_qubits, layers }
    }

    pub fn from_layers(n_qubits: usize, layers: Vec<Vec<(RotationAxis, f64)>>) -> Result<Self> {
        for layer in &layers {
            if layer.len() != n_qubits {
                return Err(Error::InvalidConfig(format!(
                    "each layer needs {n_qubits} rotations, got {}",
                    layer.len()
                )));
            }
            for &(_, angle) in layer {
                if !(0.0..std::f64::consts::TAU).contains(&angle) {
                    return Err(Error::InvalidConfig(format!(
                        "rotation angle {angle} outside [0, 2π)"
                    )));
                }
            }
        }
        Ok(Self { n_qubits, layers })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_layers(&self) -> usize {
        self.layers.len()
    }

    /// Compose the circuit into a dense matrix. The circuit is applied to
    /// each column of the identity, i.e. the columns are the images of the
    /// basis states.
    pub fn build(&self) -> DenseUnitary {
        let n = self.n_qubits;
        let dim = 1usize << n;
        // Column-major accumulation: each column is one statevector.
        let mut col_re = vec![0.0; dim * dim];
        let mut col_im = vec![0.0; dim * dim];
        for k in 0..dim {
            col_re[k * dim + k] = 1.0;
        }

        let mut apply = |f: &mut dyn FnMut(&mut [f64], &mut [f64])| {
            for k in 0..dim {
                let (re, im) = (
                    &mut col_re[k * dim..(k + 1) * dim],
                    &mut col_im[k * dim..(k + 1) * dim],
                );
                f(re, im);
            }
        };

        for q in 0..n {
            apply(&mut |re, im| {
                rotation_kernel(re, im, q, RotationAxis::Y, std::f64::consts::FRAC_PI_4)
            });
        }
        for layer in &self.layers {
            for (q, &(axis, angle)) in layer.iter().enumerate() {
                apply(&mut |re, im| rotation_kernel(re, im, q, axis, angle));
            }
            // CNOT ladder: pairs (1,2),(3,4),... then (2,3),(4,5),...;
            // control is the lower qubit.
            for start in [1usize, 2] {
                let mut control = start;
                while control < n {
                    apply(&mut |re, im| cnot_kernel(re, im, control - 1, control));
                    control += 2;
                }
            }
        }

        // Transpose the column-major buffer into the row-major layout.
        let mut re = vec![0.0; dim * dim];
        let mut im = vec![0.0; dim * dim];
        for col in 0..dim {
            for row in 0..dim {
                re[row * dim + col] = col_re[col * dim + row];
                im[row * dim + col] = col_im[col * dim + row];
            }
        }
        DenseUnitary {
            n_qubits: n,
            dim,
            re,
            im,
        }
    }
}
