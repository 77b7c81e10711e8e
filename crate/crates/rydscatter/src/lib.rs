//! Single-photon scattering for waveguide-coupled, driven Rydberg atom
//! pairs.
//!
//! Two interacting Rydberg atoms coupled to one or two waveguide bands and
//! dressed by classical drives behave, after adiabatic elimination, as a
//! two-level giant atom with phase-controlled chiral couplings. This crate
//! computes the resulting transmission, reflection and frequency-conversion
//! spectra three ways and cross-checks them against each other:
//!
//! * [`solver`] assembles and solves the exact boundary-condition linear
//!   systems (full four-level networks and eliminated two-level networks);
//! * [`analytic`] evaluates the closed-form transmissivities and conversion
//!   efficiencies;
//! * [`continuous`] adds finite-width coupling profiles, with an adaptive
//!   quadrature oracle for the overlap integrals.
//!
//! [`sweep`] layers parameter sweeps, figure presets and CSV/JSON emission
//! on top; [`checks`] bundles the quantitative self-test suite used by the
//! CLI and the acceptance tests.

pub mod analytic;
pub mod checks;
pub mod continuous;
pub mod error;
pub mod model;
pub mod quad2d;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{
    effective_rate, lamb_shift, normalize_phase, ComplexScalar, Direction, DriveField,
    EffectiveRates, ModelFamily, ModelKind, Port, ScatterParams, WaveguideMode,
};
pub use solver::{scatter, ScatteringSolution};
