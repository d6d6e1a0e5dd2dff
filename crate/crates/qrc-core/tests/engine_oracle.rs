//! Cross-module integration checks: the full cycle against a dense composed
//! operator on a toy register, and timing probes for the heavy paths.

use nalgebra::DMatrix;
use num_complex::Complex64;
use qrc_core::reservoir::{run_cycle, run_sequence, FeedbackLayout, LayoutEntry, ReservoirConfig};
use qrc_core::statevector::RotationAxis;
use qrc_core::unitary::DenseUnitary;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

// Dense operator helpers, independent of the statevector kernels.

fn rotation_matrix(axis: RotationAxis, angle: f64) -> DMatrix<Complex64> {
    let half = 0.5 * angle;
    let (c, s) = (half.cos(), half.sin());
    let zero = Complex64::new(0.0, 0.0);
    match axis {
        RotationAxis::X => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -s),
                Complex64::new(0.0, -s),
                Complex64::new(c, 0.0),
            ],
        ),
        RotationAxis::Y => DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(c, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::new(s, 0.0),
                Complex64::new(c, 0.0),
            ],
        ),
        RotationAxis::Z => {
            DMatrix::from_row_slice(2, 2, &[Complex64::new(c, -s), zero, zero, Complex64::new(c, s)])
        }
    }
}

fn embed_single(gate: &DMatrix<Complex64>, qubit: usize, n: usize) -> DMatrix<Complex64> {
    let mut op = DMatrix::identity(1, 1);
    for q in (1..=n).rev() {
        let factor = if q == qubit {
            gate.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        op = op.kronecker(&factor);
    }
    op
}

fn cnot_matrix(control: usize, target: usize, n: usize) -> DMatrix<Complex64> {
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for col in 0..dim {
        let row = if (col >> (control - 1)) & 1 == 1 {
            col ^ (1 << (target - 1))
        } else {
            col
        };
        m[(row, col)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Embedding gate as a dense operator: CX·RZ_j·CX·RX_i·RX_j.
fn embedding_matrix(i: usize, j: usize, theta: f64, n: usize) -> DMatrix<Complex64> {
    cnot_matrix(i, j, n)
        * embed_single(&rotation_matrix(RotationAxis::Z, theta), j, n)
        * cnot_matrix(i, j, n)
        * embed_single(&rotation_matrix(RotationAxis::X, theta), i, n)
        * embed_single(&rotation_matrix(RotationAxis::X, theta), j, n)
}

#[test]
fn toy_cycle_matches_composed_dense_circuit() {
    // 3-qubit register, all feedback pairs (2, 3): compose the whole cycle
    // into one 8x8 matrix, apply it to |000>, and read the Z profile.
    let n = 3;
    let mut rng = ChaCha12Rng::seed_from_u64(51);
    let u_res = DenseUnitary::haar(n, &mut rng);
    let layout = FeedbackLayout::new(
        (1..=n)
            .map(|source| LayoutEntry {
                source,
                qubits: (2, 3),
            })
            .collect(),
        n,
    )
    .unwrap();
    let input_weight = 0.8;
    let feedback_weight = 1.7;
    let config =
        ReservoirConfig::new(input_weight, feedback_weight, u_res.clone(), layout).unwrap();

    let input = 0.63;
    let feedback = [0.21, 0.84, 0.55];
    let z = run_cycle(&config, input, &feedback, None, &mut rng).unwrap();

    // Operator product: later gates on the left.
    let mut op = embedding_matrix(1, 2, input_weight * input, n);
    for value in feedback {
        op = embedding_matrix(2, 3, feedback_weight * value, n) * op;
    }
    op = u_res.to_matrix() * op;

    let mut state = nalgebra::DVector::from_element(1 << n, Complex64::new(0.0, 0.0));
    state[0] = Complex64::new(1.0, 0.0);
    let final_state = op * state;
    for qubit in 1..=n {
        let mut expectation = 0.0;
        for (idx, amp) in final_state.iter().enumerate() {
            let sign = if (idx >> (qubit - 1)) & 1 == 0 { 1.0 } else { -1.0 };
            expectation += sign * amp.norm_sqr();
        }
        assert!(
            (z[qubit - 1] - expectation).abs() < 1e-10,
            "qubit {qubit}: {} vs {expectation}",
            z[qubit - 1]
        );
    }
}

#[test]
fn cosine_driven_trajectory_inherits_the_input_period() {
    // Input period 50 forces a 50-cycle periodic orbit in the measurement
    // trajectory once the transient has washed out.
    let n = 8;
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let u_res = DenseUnitary::haar(n, &mut rng);
    let config = ReservoirConfig::new(
        0.001,
        2.5,
        u_res,
        FeedbackLayout::canonical(n).unwrap(),
    )
    .unwrap();
    let series = qrc_core::signals::gen_cosine(900, std::f64::consts::PI / 25.0);
    let traj = run_sequence(&config, series.values(), &mut rng).unwrap();
    let mut sup: f64 = 0.0;
    for k in 600..850 {
        for q in 0..n {
            sup = sup.max((traj.row(k + 50)[q] - traj.row(k)[q]).abs());
        }
    }
    assert!(sup < 0.05, "trajectory not 50-cycle periodic: sup {sup}");
}

#[test]
#[ignore = "timing probe, run explicitly"]
fn timing_probe() {
    let mut rng = ChaCha12Rng::seed_from_u64(1);
    for n in [8usize, 10] {
        let start = std::time::Instant::now();
        let u = DenseUnitary::haar(n, &mut rng);
        let haar_time = start.elapsed();
        let config =
            ReservoirConfig::new(0.001, 2.5, u, FeedbackLayout::canonical(n).unwrap()).unwrap();
        let inputs: Vec<f64> = (0..4500).map(|_| rng.gen()).collect();
        let start = std::time::Instant::now();
        let traj = run_sequence(&config, &inputs, &mut rng).unwrap();
        let run_time = start.elapsed();
        println!(
            "n={n}: haar {:?}, 4500-cycle run {:?} ({} rows)",
            haar_time,
            run_time,
            traj.len()
        );
    }
}
