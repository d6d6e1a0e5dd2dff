//! Simulation laboratory for feedback-driven quantum reservoir computing.
//!
//! A quantum reservoir computer processes a scalar input sequence through a
//! small quantum register. Each cycle re-prepares the register from scratch:
//! the current input and the previous cycle's measurement vector are written
//! in through two-qubit rotation gates, a fixed scrambling unitary entangles
//! all qubits, and exact Pauli-Z expectation values are read out on every
//! qubit. The measurement vector is the only state carried between cycles,
//! so memory of past inputs lives entirely in the classical feedback loop.
//!
//! The crate is organized around that pipeline:
//!
//! - [`statevector`] / [`unitary`] — dense pure-state simulation and the
//!   gate set the protocol needs (rotations, CNOT, the two-qubit embedding
//!   gate, Haar-random and hardware-efficient scramblers).
//! - [`reservoir`] — the per-cycle protocol, feedback wiring for 6..10
//!   qubits, an optional delayed second feedback layer, and a Gaussian
//!   shot-noise channel.
//! - [`signals`] — benchmark input generators: uniform random, cosine,
//!   Mackey-Glass, and exact Ising spin dynamics, normalized to [0, 1].
//! - [`readout`] — linear readout training (pseudo-inverse and ridge),
//!   delay/horizon targets, and the R²/NMSE/memory-capacity metrics.
//! - [`esn`] — a leaky-tanh echo state network baseline with the standard
//!   spectral-radius/leak-rate grid search.
//! - [`experiment`] — deterministic, seed-fanned experiment runners for the
//!   benchmark suite, with CSV/JSON persistence.

pub mod error;
pub mod esn;
pub mod experiment;
pub mod readout;
pub mod reservoir;
pub mod signals;
pub mod statevector;
pub mod unitary;

pub use error::{Error, Result};
pub use esn::{EchoStateNetwork, EsnGrid, EsnParams, GridOrder};
pub use experiment::{
    seed_fanout, AnsatzKind, ExperimentSpec, ResultTable, SignalKind, TaskKind,
};
pub use readout::{FitKind, ReadoutModel, SplitSpec, TargetKind, TaskTargets};
pub use reservoir::{FeedbackLayout, ReservoirConfig, Trajectory};
pub use signals::{IsingParams, MgParams, SignalSeries};
pub use statevector::{RotationAxis, Statevector};
pub use unitary::{AnsatzSpec, DenseUnitary};
