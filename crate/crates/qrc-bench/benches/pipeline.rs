use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use qrc_core::esn::{EchoStateNetwork, EsnParams};
use qrc_core::readout::{design_matrix, fit_pseudo_inverse};
use qrc_core::reservoir::{run_sequence, FeedbackLayout, ReservoirConfig};
use qrc_core::signals::{gen_mackey_glass, MgParams};
use qrc_core::unitary::{AnsatzSpec, DenseUnitary};

fn bench_reservoir_cycles(c: &mut Criterion) {
    let mut group = c.benchmark_group("reservoir_cycles_x100");
    for n_qubits in [6usize, 8, 10] {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let config = ReservoirConfig::new(
            0.001,
            2.5,
            DenseUnitary::haar(n_qubits, &mut rng),
            FeedbackLayout::canonical(n_qubits).unwrap(),
        )
        .unwrap();
        let inputs: Vec<f64> = (0..100).map(|_| rng.gen()).collect();
        group.bench_function(format!("n{n_qubits}"), |b| {
            b.iter_batched(
                || ChaCha12Rng::seed_from_u64(7),
                |mut run_rng| run_sequence(&config, &inputs, &mut run_rng).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    group.finish();
}

fn bench_unitary_sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("unitary_sampling");
    group.sample_size(10);
    group.bench_function("haar_n8", |b| {
        b.iter_batched(
            || ChaCha12Rng::seed_from_u64(2),
            |mut rng| DenseUnitary::haar(8, &mut rng),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("hardware_efficient_n8_l10", |b| {
        b.iter_batched(
            || ChaCha12Rng::seed_from_u64(3),
            |mut rng| AnsatzSpec::sample(8, 10, &mut rng).build(),
            BatchSize::SmallInput,
        )
    });
    group.finish();
}

fn bench_readout_fit(c: &mut Criterion) {
    let mut rng = ChaCha12Rng::seed_from_u64(4);
    let config = ReservoirConfig::new(
        0.5,
        2.0,
        DenseUnitary::haar(8, &mut rng),
        FeedbackLayout::canonical(8).unwrap(),
    )
    .unwrap();
    let inputs: Vec<f64> = (0..2100).map(|_| rng.gen()).collect();
    let traj = run_sequence(&config, &inputs, &mut rng).unwrap();
    let x = design_matrix(&traj, 101, 2000).unwrap();
    let y = nalgebra_vec(&inputs[100..2100]);
    c.bench_function("pseudo_inverse_2000x9", |b| {
        b.iter(|| fit_pseudo_inverse(&x, &y).unwrap())
    });
}

fn nalgebra_vec(values: &[f64]) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_column_slice(values)
}

fn bench_esn_steps(c: &mut Criterion) {
    let params = EsnParams {
        nodes: 100,
        spectral_radius: 0.95,
        leak_rate: 0.8,
        ridge: 1e-5,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let esn = EchoStateNetwork::init(&params, &mut rng).unwrap();
    c.bench_function("esn_100_nodes_x100_steps", |b| {
        b.iter_batched(
            || esn.clone(),
            |mut esn| {
                for k in 0..100 {
                    esn.step((k as f64 * 0.01).fract());
                }
                esn
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_signal_generation(c: &mut Criterion) {
    c.bench_function("mackey_glass_1000_samples", |b| {
        b.iter(|| {
            gen_mackey_glass(
                1000,
                &MgParams {
                    burn_in: 100.0,
                    ..MgParams::default()
                },
            )
            .unwrap()
        })
    });
}

criterion_group!(
    benches,
    bench_reservoir_cycles,
    bench_unitary_sampling,
    bench_readout_fit,
    bench_esn_steps,
    bench_signal_generation
);
criterion_main!(benches);
