//! Bethe-ansatz scattering solver.
//!
//! Builds the dense complex boundary-condition system for a coupling
//! topology and solves it directly. The same assembly recipe produces the
//! printed five- and seven-equation systems of the single-drive model, the
//! converter systems, and the full converter network that the reference
//! text only describes procedurally.

pub mod scatter;
pub mod system;
pub mod topology;

pub use scatter::{scatter, ScatteringSolution, PROBABILITY_SLACK};
pub use system::{build_system, solve_labeled, solve_vector, LinearSystem};
pub use topology::{CouplingTopology, DriveCouplingTerm, Level, ModeCouplingTerm, ModeId, ModeTopology, V_G};
