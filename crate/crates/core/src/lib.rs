//! Detection of tripartite steering in three-qubit states.
//!
//! A state is mapped to `τ¹` or `τ²` (see [`taumap`]), and entanglement
//! criteria evaluated on the mapped state (see [`witness`]) certify steering
//! of the original state (see [`steering`]). The [`lhsmodel`] module builds the
//! explicit separable decompositions behind those guarantees.

pub mod error;
pub mod lhsmodel;
pub mod qmat;
pub mod states;
pub mod steering;
pub mod taumap;
pub mod witness;

pub use error::{Error, Property, Result};
pub use qmat::{ComplexMatrix, Subsystem, ThreeQubitState, C64, EPS_ARITH, EPS_HERM, EPS_PSD, EPS_TRACE};

pub use taumap::{build_tau1, build_tau2, Direction, Scenario, Strength, TauKind, TauState};

pub use steering::{detect, reproduce_tables, threshold, Conclusion, SteeringReport, ThresholdResult};
pub use witness::{CriterionId, CriterionVerdict};
