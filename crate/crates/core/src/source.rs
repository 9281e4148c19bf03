//! Lorentz-force and current coupling between the fluids and Maxwell's
//! equations, and the exact per-cell implicit solve used by the IMEX
//! integrator.
//!
//! The source is stiff: its time scales (plasma frequency, gyrofrequency)
//! shrink with the normalized Larmor radius while the flux time scales do
//! not. It is also entropy-neutral: V . s = 0 because u . (u x B) = 0 and
//! the electric-field work cancels between momentum and energy rows.

use crate::maxwell_flux::CleaningMode;
use crate::state::{slot, Cons, GasParams, NCOMP};
use crate::SolverError;

/// Source vector at a single state:
/// ion/electron momenta: r_a (rho_a E + m_a x B); energies: r_a m_a . E;
/// E field: -j / eps0 with j = r_i m_i + r_e m_e; phi (cleaning mode only):
/// xi rho_c / eps0 with rho_c = r_i rho_i + r_e rho_e. All other rows zero.
pub fn eval_source(u: &Cons, g: &GasParams, mode: CleaningMode) -> Cons {
    let mut s = [0.0; NCOMP];
    let b = [u[slot::BX], u[slot::BY], u[slot::BZ]];
    let e = [u[slot::EX], u[slot::EY], u[slot::EZ]];
    for (sp, r) in [(0usize, g.r_i), (1usize, g.r_e)] {
        let o = 5 * sp;
        let rho = u[o];
        let m = [u[o + 1], u[o + 2], u[o + 3]];
        s[o + 1] = r * (rho * e[0] + m[1] * b[2] - m[2] * b[1]);
        s[o + 2] = r * (rho * e[1] + m[2] * b[0] - m[0] * b[2]);
        s[o + 3] = r * (rho * e[2] + m[0] * b[1] - m[1] * b[0]);
        s[o + 4] = r * (m[0] * e[0] + m[1] * e[1] + m[2] * e[2]);
    }
    let inv_eps = 1.0 / g.eps0;
    s[slot::EX] = -(g.r_i * u[slot::MX_I] + g.r_e * u[slot::MX_E]) * inv_eps;
    s[slot::EY] = -(g.r_i * u[slot::MY_I] + g.r_e * u[slot::MY_E]) * inv_eps;
    s[slot::EZ] = -(g.r_i * u[slot::MZ_I] + g.r_e * u[slot::MZ_E]) * inv_eps;
    if mode == CleaningMode::Phm {
        s[slot::PHI] = g.xi * (g.r_i * u[slot::RHO_I] + g.r_e * u[slot::RHO_E]) * inv_eps;
    }
    s
}

/// Solves the 9x9 linear system a x = rhs in place with partial pivoting.
/// Returns false if a pivot vanishes.
fn lu_solve_9(a: &mut [[f64; 9]; 9], rhs: &mut [f64; 9]) -> bool {
    for col in 0..9 {
        let mut pivot = col;
        for row in col + 1..9 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col] == 0.0 {
            return false;
        }
        if pivot != col {
            a.swap(pivot, col);
            rhs.swap(pivot, col);
        }
        let inv = 1.0 / a[col][col];
        for row in col + 1..9 {
            let factor = a[row][col] * inv;
            if factor != 0.0 {
                for k in col + 1..9 {
                    a[row][k] -= factor * a[col][k];
                }
                rhs[row] -= factor * rhs[col];
            }
            a[row][col] = 0.0;
        }
    }
    for col in (0..9).rev() {
        let mut x = rhs[col];
        for k in col + 1..9 {
            x -= a[col][k] * rhs[k];
        }
        rhs[col] = x / a[col][col];
    }
    true
}

/// Solves the implicit stage U* = U0 + lambda s(U*) exactly.
///
/// Densities, B and psi have no source, so they pass through unchanged and
/// the momentum/E-field block is linear in the nine unknowns
/// (m_i, m_e, E); it is solved with a dense partial-pivot LU. The energies
/// and phi then follow explicitly from the solved values:
/// en_a* = en_a0 + lambda r_a m_a* . E*, phi* = phi0 + lambda xi rho_c/eps0.
pub fn implicit_source_stage(
    u0: &Cons,
    lambda: f64,
    g: &GasParams,
    mode: CleaningMode,
) -> Result<Cons, SolverError> {
    let b = [u0[slot::BX], u0[slot::BY], u0[slot::BZ]];
    let mut a = [[0.0; 9]; 9];
    let mut rhs = [0.0; 9];

    // momentum blocks: (I - lambda r C) m_a - lambda r rho_a E = m_a0, where
    // C m = m x B
    for (sp, r) in [(0usize, g.r_i), (1usize, g.r_e)] {
        let o = 3 * sp;
        let rho = u0[5 * sp];
        let lr = lambda * r;
        a[o][o] = 1.0;
        a[o][o + 1] = -lr * b[2];
        a[o][o + 2] = lr * b[1];
        a[o + 1][o] = lr * b[2];
        a[o + 1][o + 1] = 1.0;
        a[o + 1][o + 2] = -lr * b[0];
        a[o + 2][o] = -lr * b[1];
        a[o + 2][o + 1] = lr * b[0];
        a[o + 2][o + 2] = 1.0;
        for k in 0..3 {
            a[o + k][6 + k] = -lr * rho;
            rhs[o + k] = u0[5 * sp + 1 + k];
        }
    }
    // E block: E + (lambda/eps0)(r_i m_i + r_e m_e) = E0
    let le = lambda / g.eps0;
    for k in 0..3 {
        a[6 + k][k] = le * g.r_i;
        a[6 + k][3 + k] = le * g.r_e;
        a[6 + k][6 + k] = 1.0;
        rhs[6 + k] = u0[slot::EX + k];
    }

    if !lu_solve_9(&mut a, &mut rhs) {
        return Err(SolverError::Numerical(
            "singular implicit source system".into(),
        ));
    }

    let mut u = *u0;
    for k in 0..3 {
        u[slot::MX_I + k] = rhs[k];
        u[slot::MX_E + k] = rhs[3 + k];
        u[slot::EX + k] = rhs[6 + k];
    }
    let e = [rhs[6], rhs[7], rhs[8]];
    u[slot::EN_I] += lambda * g.r_i * (rhs[0] * e[0] + rhs[1] * e[1] + rhs[2] * e[2]);
    u[slot::EN_E] += lambda * g.r_e * (rhs[3] * e[0] + rhs[4] * e[1] + rhs[5] * e[2]);
    if mode == CleaningMode::Phm {
        u[slot::PHI] += lambda * g.xi * (g.r_i * u0[slot::RHO_I] + g.r_e * u0[slot::RHO_E]) / g.eps0;
    }
    Ok(u)
}
