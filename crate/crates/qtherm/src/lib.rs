//! # qtherm
//!
//! Simulation and readout toolkit for a dissipative single-qubit
//! thermometer. A qubit with gap `omega` couples to a thermal sample through
//! excitation/de-excitation channels and to a parasitic dephasing channel;
//! its exactly solvable Bloch dynamics encodes the sample temperature.
//!
//! The crate covers four layers:
//!
//! - [`qubit`] — state algebra: Bloch/density representations, energies,
//!   entropies, and the closed-form Gibbs family.
//! - [`dynamics`] — the three-channel relaxation: analytic propagation, a
//!   fixed-step RK4 oracle, and rate bookkeeping.
//! - [`inference`] — the temperature readout pipeline: maximum-entropy
//!   reference temperature, error functions bounding its deviation, and the
//!   regime-corrected dynamical temperature.
//! - [`metrology`] — quantum Fisher information diagnostics and the
//!   Cramer-Rao variance bound.
//!
//! [`experiment`] wires the layers into declarative runs (built-in presets or
//! parsed config files) that emit deterministic CSV tables; the `qtherm`
//! binary is a thin front end over it.
//!
//! ## Examples
//!
//! One runnable example per capability lives under `examples/`:
//!
//! ```bash
//! cargo run --example relaxation              # propagate and cross-check a trajectory
//! cargo run --example reference_temperature   # beta_r vs the effective temperature
//! cargo run --example corrected_readout       # full readout pipeline on one preset
//! cargo run --example qfi_dynamics            # coherent vs incoherent Fisher information
//! cargo run --example finite_lag              # finite-lag estimator orderings
//! cargo run --example interval_bounds         # worst-case errors over a temperature interval
//! cargo run --example run_preset -- fig3a out.csv
//! ```

pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod inference;
pub mod metrology;
pub mod qubit;

pub use error::{Error, Result};
pub use qubit::{BathSpec, BlochVector, GibbsState, QubitHamiltonian};
