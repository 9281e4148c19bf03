//! Command-line driver for the two-fluid plasma solver.
//!
//! The library half of this crate exposes the pieces the `twofluid` binary is
//! built from, so integration tests can drive full simulations in process:
//!
//! * [`config`]: flat `key = value` run configuration and CLI override merging,
//! * [`driver`]: the [`driver::Sim`] loop tying grid, stepper, and diagnostics
//!   together, plus convergence-study helpers,
//! * [`snapshot`]: plain-text state snapshots and their reader.

pub mod config;
pub mod driver;
pub mod snapshot;
