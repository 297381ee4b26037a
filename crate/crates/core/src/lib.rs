//! Simulation toolkit for quantum process discrimination: telling apart
//! non-orthogonal measurements and unitaries from a finite number of uses.
//!
//! * [`linalg`]: small dense complex matrices and states, eigenphases.
//! * [`rng`]: counter-based, seedable random streams.
//! * [`qubit`]: gates, Bell and W states, Bloch-axis measurements.
//! * [`fock`]: two-party linear optics on a truncated Fock space.
//! * [`protocols`]: the discrimination schemes and the parallel-uses planner.
//! * [`noise`]: visibility noise and confidence statistics.
//! * [`experiment`]: config-driven runner and report formats.

pub mod error;
pub mod experiment;
pub mod fock;
pub mod format;
pub mod linalg;
pub mod noise;
pub mod protocols;
pub mod qubit;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::{C64, Ensemble, Operator, PureState, Tensor, Tolerances};
pub use rng::RandomStream;
