//! Maximizing the concurrence of a two-qubit state with single-qubit filters.
//!
//! The main entry point is [`filtering::maximize`], which alternately
//! balances the reduced state of each qubit until both are `I/2`, switching
//! to joint Newton steps on both qubits when that stalls. The other modules
//! provide the supporting pieces:
//!
//! * [`qmat`]: fixed-size complex matrices, Kronecker products, partial
//!   traces and small Hermitian eigensolvers.
//! * [`states`]: validated density operators and the named example states.
//! * [`concurrence`]: the concurrence functional for unnormalized operators.
//! * [`scan`]: grid scans, random search and an independent reference
//!   concurrence used to cross-check the result.
//! * [`random`]: seeded samplers for states, unitaries and filters.
//! * [`emit`]: CSV output.

pub mod concurrence;
pub mod emit;
pub mod error;
pub mod filtering;
pub mod qmat;
pub mod random;
pub mod scan;
pub mod states;

pub use concurrence::{concurrence, normalized_concurrence, ConcurrenceValue};
pub use error::{Error, Result};
pub use filtering::{maximize, IterationConfig, LocalOperator, MaximizationTrace, StepRecord};
pub use qmat::{Complex, Mat2, Mat4, Qubit};
pub use states::{DensityOperator, PureState};
