//! Dense pure-state simulation for small qubit registers.
//!
//! Qubit 0 is the most significant bit of an amplitude index, so the
//! register `[q0, q1, q2]` stores `|q0 q1 q2>` at index `q0*4 + q1*2 + q2`.

mod error;
mod gate;
mod measure;
mod state;

pub use error::{Error, Result};
pub use gate::{phase_from_interaction, Entangler, Gate};
pub use measure::{Basis, Forced, MeasurementRecord, OutcomeSource, Sampled};
pub use state::{fidelity_up_to_global_phase, PureState, QubitInit};

pub use num_complex::Complex64 as C64;

/// Register size used when no explicit cap is given.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Tolerance for state comparisons.
pub const STATE_TOL: f64 = 1e-10;

/// Tolerance for probabilities and norms.
pub const PROB_TOL: f64 = 1e-12;
