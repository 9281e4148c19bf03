//! Solver core for the ideal two-fluid plasma equations (ion and electron
//! Euler fluids coupled to Maxwell's equations) on 2D structured grids.
//!
//! The spatial discretization combines entropy-stable finite-difference
//! fluxes for the two fluids with a vertex-based multidimensional Riemann
//! solver for Maxwell's equations that preserves the discrete divergence of B
//! exactly and keeps the divergence of E consistent with Gauss's law.
//! Hyperbolic-divergence cleaning (`Phm`) and plain componentwise Rusanov
//! (`None`) Maxwell solvers are available for comparison.

pub mod diagnostics;
pub mod fluid_flux;
pub mod grid;
pub mod maxwell_flux;
pub mod problems;
pub mod source;
pub mod state;
pub mod timeint;

/// A state that violates positivity of density or pressure.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{what} = {value:e}")]
pub struct Inadmissible {
    pub what: &'static str,
    pub value: f64,
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    // the cause is folded into the display message rather than chained as a
    // source, so wrappers that print error chains do not repeat it
    #[error("inadmissible state at cell ({i}, {j}): {cause}")]
    Admissibility {
        i: isize,
        j: isize,
        cause: Inadmissible,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// MinMod limiter: picks the smaller-magnitude argument when both agree in
/// sign, zero otherwise.
#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a > 0.0 && b > 0.0 {
        a.min(b)
    } else if a < 0.0 && b < 0.0 {
        a.max(b)
    } else {
        0.0
    }
}
