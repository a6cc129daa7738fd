//! Exact simulation and verification of multi-particle bunching in m-mode
//! linear interferometers.
//!
//! The crate computes output statistics of n particles evolving through a
//! unitary U under four distinguishability models (indistinguishable
//! bosons, fully distinguishable particles, fermions, and per-species
//! mixtures), and derives the bunching observables measured in integrated
//! photonics experiments: bunching probability, per-mode full-bunching
//! probabilities, and the quantum/classical full-bunching ratio, which
//! equals n!/∏gₖ! for every unitary, mode count, and target mode. Haar
//! Monte Carlo ensembles reproduce the average behavior (the bosonic
//! birthday paradox), with a closed-form expression for the ensemble mean
//! as an independent cross-check.
//!
//! Everything numeric is generic over the real scalar type (see
//! [`scalar::Scalar`]); the aliases below pin the default double-precision
//! instantiations.

pub mod bunching;
pub mod circuit;
pub mod ensemble;
pub mod error;
pub mod haar;
pub mod io;
pub mod matrix;
pub mod model;
pub mod permanent;
pub mod rng;
pub mod scalar;
pub mod states;
pub mod verify;

pub use bunching::{
    bunching_probability, expected_full_bunching_ratio, full_bunching_probability,
    full_bunching_ratio, hom_invert, mixture_bunching_probability, predicted_ratio_mixture,
    BunchingReport,
};
pub use circuit::{
    build_unitary, make_preset, preset_unitary, CircuitElement, CircuitSpec, CompiledPreset,
    PhaseSource, Preset,
};
pub use ensemble::{
    birthday_formula, distinguishability_sweep, haar_ensemble_scan, EnsembleReport, EnsembleRun,
    Histogram,
};
pub use error::{Error, Result};
pub use haar::haar_sample;
pub use matrix::{check_unitary, multiply, ComplexMatrix, UnitaryMatrix};
pub use model::{
    output_distribution, scattering_submatrix, transition_probability, OutputDistribution,
    StatisticsModel,
};
pub use permanent::{determinant, permanent_glynn, permanent_naive, permanent_ryser};
pub use rng::Seed;
pub use scalar::Scalar;
pub use states::{enumerate_outputs, output_state_count, InputSpec, OccupationState, Particle};

/// Double-precision complex amplitude.
pub type C64 = num_complex::Complex<f64>;
/// Single-precision complex amplitude.
pub type C32 = num_complex::Complex<f32>;

/// Default double-precision matrix.
pub type Matrix64 = ComplexMatrix<f64>;
/// Default double-precision unitary.
pub type Unitary64 = UnitaryMatrix<f64>;
/// Default double-precision output distribution.
pub type Distribution64 = OutputDistribution<f64>;
/// Default double-precision bunching report.
pub type BunchingReport64 = BunchingReport<f64>;
/// Default double-precision ensemble report.
pub type EnsembleReport64 = EnsembleReport<f64>;

/// Single-precision variants, mostly exercised by tests.
pub type Matrix32 = ComplexMatrix<f32>;
pub type Unitary32 = UnitaryMatrix<f32>;
