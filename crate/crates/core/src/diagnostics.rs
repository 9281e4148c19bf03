//! Run diagnostics: vertex-centered divergence monitors for B and for the
//! Gauss-law bookkeeping of E, total entropy, the reconnected-flux measure
//! of reconnection runs, and CSV helpers for the time series.

use crate::grid::{BoundaryKind, Field, Grid2D, NGHOST};
use crate::state::{entropy, slot, species_block, GasParams};
use crate::SolverError;

/// Norms of a vertex-sampled scalar: mean absolute value, root mean square,
/// and maximum absolute value.
#[derive(Clone, Copy, Debug, Default)]
pub struct DivNorms {
    pub l1: f64,
    pub l2: f64,
    pub max: f64,
}

/// Computes the norms of a vertex field in a fixed serial order, so results
/// do not depend on the thread count.
pub fn norms_of(v: &[f64]) -> DivNorms {
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    let mut max = 0.0f64;
    for &x in v {
        l1 += x.abs();
        l2 += x * x;
        max = max.max(x.abs());
    }
    let n = v.len().max(1) as f64;
    DivNorms {
        l1: l1 / n,
        l2: (l2 / n).sqrt(),
        max,
    }
}

/// Vertices carrying divergence diagnostics: all of them on a periodic axis
/// (wrapping through the first ghost layer), interior-only otherwise, since
/// extrapolated and reflected ghosts are not governed by the update's
/// conservation structure.
pub fn vertex_counts(grid: &Grid2D) -> (usize, usize) {
    let vx = if grid.bc_x == BoundaryKind::Periodic {
        grid.nx
    } else {
        grid.nx - 1
    };
    let vy = if grid.bc_y == BoundaryKind::Periodic {
        grid.ny
    } else {
        grid.ny - 1
    };
    (vx, vy)
}

/// Divergence of a two-component cell field at the vertex (i+1/2, j+1/2),
/// averaging the two one-row finite differences per direction:
/// div = [dxf(bx)|_{j} + dxf(bx)|_{j+1}] / 2 + [dyf(by)|_{i} + dyf(by)|_{i+1}] / 2.
///
/// `get` maps a padded flat index to the (x, y) components; the field must
/// have valid first-layer ghosts on periodic axes.
fn vertex_div_with(grid: &Grid2D, get: impl Fn(usize) -> (f64, f64)) -> Vec<f64> {
    let (vx, vy) = vertex_counts(grid);
    let sx = grid.nx + 2 * NGHOST;
    let ng = NGHOST;
    let dxi = 1.0 / grid.dx;
    let dyi = 1.0 / grid.dy;
    let kof = |i: usize, j: usize| (j + ng) * sx + (i + ng);
    let mut out = vec![0.0; vx * vy];
    for j in 0..vy {
        for i in 0..vx {
            let (bx00, by00) = get(kof(i, j));
            let (bx10, by10) = get(kof(i + 1, j));
            let (bx01, by01) = get(kof(i, j + 1));
            let (bx11, by11) = get(kof(i + 1, j + 1));
            let ddx = 0.5 * ((bx11 - bx01) + (bx10 - bx00)) * dxi;
            let ddy = 0.5 * ((by11 - by10) + (by01 - by00)) * dyi;
            out[j * vx + i] = ddx + ddy;
        }
    }
    out
}

/// Per-vertex divergence of B. The field must be ghost-filled.
pub fn div_b_vertices(u: &Field, grid: &Grid2D) -> Vec<f64> {
    vertex_div_with(grid, |k| (u.data[k][slot::BX], u.data[k][slot::BY]))
}

/// Per-vertex divergence of E. The field must be ghost-filled.
pub fn div_e_vertices(u: &Field, grid: &Grid2D) -> Vec<f64> {
    vertex_div_with(grid, |k| (u.data[k][slot::EX], u.data[k][slot::EY]))
}

/// Per-vertex divergence of a padded current buffer, as produced by the
/// stepper's stage-weighted export.
pub fn div_current_vertices(j: &[[f64; 2]], grid: &Grid2D) -> Vec<f64> {
    vertex_div_with(grid, |k| (j[k][0], j[k][1]))
}

/// Norms of the per-vertex divergence of B.
pub fn div_b_norms(u: &Field, grid: &Grid2D) -> DivNorms {
    norms_of(&div_b_vertices(u, grid))
}

/// Norms of the discrete Gauss-law residual of one completed step:
/// div E(new) - div E(old) + dt/eps0 * div j, where j is the stage-weighted
/// effective current. With the multidimensional Maxwell solver this is zero
/// to round-off because the curl part of the update is divergence free.
pub fn gauss_residual(
    div_e_new: &[f64],
    div_e_old: &[f64],
    div_j: &[f64],
    dt: f64,
    eps0: f64,
) -> DivNorms {
    let s = dt / eps0;
    let mut res = vec![0.0; div_e_new.len()];
    for k in 0..div_e_new.len() {
        res[k] = div_e_new[k] - div_e_old[k] + s * div_j[k];
    }
    norms_of(&res)
}

/// Total physical entropy sum(e_i + e_e) dx dy over the interior, with
/// e = -rho s / (gamma - 1) and s = ln p - gamma ln rho. A fixed serial
/// summation order keeps the value independent of the thread count.
pub fn total_entropy(u: &Field, grid: &Grid2D, gas: &GasParams) -> Result<f64, SolverError> {
    let mut sum = 0.0;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let cell = u.at(i, j);
            for sp in 0..2 {
                let e = entropy(&species_block(cell, sp), gas.gamma(sp))
                    .map_err(|cause| SolverError::Admissibility { i, j, cause })?;
                sum += e;
            }
        }
    }
    Ok(sum * grid.dx * grid.dy)
}

/// Reconnected flux along the midplane y = 0: integral of |B_y| dx over the
/// central row divided by 2 B_0, by the midpoint rule. With an even row
/// count the two rows bracketing the midplane are averaged.
pub fn reconnected_flux(u: &Field, grid: &Grid2D, b0: f64) -> f64 {
    let rows: &[isize] = if grid.ny % 2 == 0 {
        &[grid.ny as isize / 2 - 1, grid.ny as isize / 2]
    } else {
        &[grid.ny as isize / 2]
    };
    let mut acc = 0.0;
    for &j in rows {
        let mut s = 0.0;
        for i in 0..grid.nx as isize {
            s += u.at(i, j)[slot::BY].abs();
        }
        acc += s * grid.dx / (2.0 * b0);
    }
    acc / rows.len() as f64
}

/// One diagnostics record of a run.
#[derive(Clone, Copy, Debug)]
pub struct DiagRow {
    pub t: f64,
    pub dt: f64,
    pub div_b: DivNorms,
    pub gauss: DivNorms,
    pub entropy: f64,
    pub reconnected_flux: Option<f64>,
}

pub fn csv_header(with_flux: bool) -> String {
    let mut s = String::from("t,dt,divB_L1,divB_L2,divE_res_L1,divE_res_L2,entropy");
    if with_flux {
        s.push_str(",reconnected_flux");
    }
    s
}

pub fn csv_row(r: &DiagRow) -> String {
    let mut s = format!(
        "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
        r.t, r.dt, r.div_b.l1, r.div_b.l2, r.gauss.l1, r.gauss.l2, r.entropy
    );
    if let Some(f) = r.reconnected_flux {
        s.push_str(&format!(",{f:.16e}"));
    }
    s
}
