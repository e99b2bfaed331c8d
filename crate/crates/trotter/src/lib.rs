//! Trotter error for product formulas on qubit Hamiltonians.
//!
//! The crate builds Lie-Trotter and Suzuki schedules, measures their error
//! exactly on small systems, evaluates commutator-scaling error bounds
//! (including the explicit fourth-order coefficient tables), and turns either
//! into a Trotter number. Applications cover Heisenberg benchmarks, local
//! observables, quantum Monte Carlo step selection and asymptotic resource
//! plans.

pub mod bench;
pub mod bounds;
pub mod checks;
pub mod dense;
pub mod error;
pub mod formula;
pub mod hamiltonians;
pub mod io;
pub mod local_obs;
pub mod pauli;
pub mod planner;
pub mod qmc;
pub mod rng;
pub mod sectors;

pub use error::{Error, Result};
