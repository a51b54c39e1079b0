//! Temperature-dependent Casimir interaction between two identical,
//! nonmagnetic parallel plates.
//!
//! The [`lifshitz`] module evaluates the Matsubara-summed Lifshitz formula
//! for the pressure and free energy per area; [`dispersion`] supplies the
//! plate response ε(iζ); [`asymptotics`] holds closed-form limits used as
//! cross-checks; [`thermo`] derives the entropy and runs thermodynamic
//! consistency audits; [`sweep`] drives parameter sweeps and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod constants;
pub mod dispersion;
pub mod error;
pub mod lifshitz;
pub mod quadrature;
pub mod sweep;
pub mod thermo;

pub use dispersion::{DispersionModel, DrudeParams, Extended, NuSchedule, PermittivityTable};
pub use error::{Error, Result};
pub use lifshitz::{Estimate, LifshitzQuery, ThermoResult, Tolerances, ZeroModePolicy};
