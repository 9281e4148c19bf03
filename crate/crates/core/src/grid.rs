//! Uniform structured grid, cell-centered field storage with ghost layers,
//! and boundary fills.

use crate::state::{Cons, NCOMP};
use crate::SolverError;

/// Ghost-layer width. Two layers cover every stencil in the scheme: the
/// limited face traces reach one cell past a face and the vertex solver's
/// diagonal traces reach two cells past a vertex.
pub const NGHOST: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    /// Zeroth-order extrapolation of the nearest interior cell.
    Outflow,
    /// Perfectly conducting wall (y-axis only): reflects with tangential E
    /// and normal B odd, everything else even.
    ConductingWall,
}

#[derive(Clone, Debug)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub dx: f64,
    pub dy: f64,
    pub bc_x: BoundaryKind,
    pub bc_y: BoundaryKind,
}

impl Grid2D {
    pub fn new(
        nx: usize,
        ny: usize,
        bounds: (f64, f64, f64, f64),
        bc_x: BoundaryKind,
        bc_y: BoundaryKind,
    ) -> Result<Grid2D, SolverError> {
        let (xmin, xmax, ymin, ymax) = bounds;
        if nx == 0 || ny == 0 {
            return Err(SolverError::Config("grid must have nx, ny >= 1".into()));
        }
        if !(xmax > xmin) || !(ymax > ymin) {
            return Err(SolverError::Config("grid bounds must be increasing".into()));
        }
        if bc_x == BoundaryKind::ConductingWall {
            return Err(SolverError::Config(
                "conducting walls are supported on the y-axis only".into(),
            ));
        }
        if ny == 1 && bc_y != BoundaryKind::Periodic {
            return Err(SolverError::Config(
                "1D runs (ny = 1) require periodic y boundaries".into(),
            ));
        }
        if bc_y == BoundaryKind::ConductingWall && ny < 2 {
            return Err(SolverError::Config(
                "conducting walls require ny >= 2".into(),
            ));
        }
        Ok(Grid2D {
            nx,
            ny,
            xmin,
            xmax,
            ymin,
            ymax,
            dx: (xmax - xmin) / nx as f64,
            dy: (ymax - ymin) / ny as f64,
            bc_x,
            bc_y,
        })
    }

    /// Center x of cell column `i` (interior columns are 0..nx; ghost columns
    /// take negative or >= nx indices).
    #[inline]
    pub fn xc(&self, i: isize) -> f64 {
        self.xmin + (i as f64 + 0.5) * self.dx
    }

    /// Center y of cell row `j`.
    #[inline]
    pub fn yc(&self, j: isize) -> f64 {
        self.ymin + (j as f64 + 0.5) * self.dy
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }
}

/// Cell-centered conserved field including ghost layers.
///
/// Storage is row-major with the x-index fastest; cell (i, j) with
/// i in -NGHOST..nx+NGHOST maps to data[(j + NGHOST) * sx + (i + NGHOST)].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub nx: usize,
    pub ny: usize,
    pub data: Vec<Cons>,
}

impl Field {
    pub fn new(grid: &Grid2D) -> Field {
        let sx = grid.nx + 2 * NGHOST;
        let sy = grid.ny + 2 * NGHOST;
        Field {
            nx: grid.nx,
            ny: grid.ny,
            data: vec![[0.0; NCOMP]; sx * sy],
        }
    }

    /// Padded row length.
    #[inline]
    pub fn sx(&self) -> usize {
        self.nx + 2 * NGHOST
    }

    /// Padded column count.
    #[inline]
    pub fn sy(&self) -> usize {
        self.ny + 2 * NGHOST
    }

    #[inline]
    pub fn idx(&self, i: isize, j: isize) -> usize {
        debug_assert!(i >= -(NGHOST as isize) && i < (self.nx + NGHOST) as isize);
        debug_assert!(j >= -(NGHOST as isize) && j < (self.ny + NGHOST) as isize);
        (j + NGHOST as isize) as usize * self.sx() + (i + NGHOST as isize) as usize
    }

    #[inline]
    pub fn at(&self, i: isize, j: isize) -> &Cons {
        &self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn at_mut(&mut self, i: isize, j: isize) -> &mut Cons {
        let k = self.idx(i, j);
        &mut self.data[k]
    }

    /// Interior cell coordinates of padded flat index `k`, or None for a
    /// ghost cell.
    #[inline]
    pub fn interior_of_flat(&self, k: usize) -> Option<(usize, usize)> {
        let sx = self.sx();
        let jj = k / sx;
        let ii = k % sx;
        if ii >= NGHOST && ii < NGHOST + self.nx && jj >= NGHOST && jj < NGHOST + self.ny {
            Some((ii - NGHOST, jj - NGHOST))
        } else {
            None
        }
    }
}

/// Reflection signs across a conducting wall normal to y: odd components are
/// u_y of both species, B_y (normal B) and E_x, E_z (tangential E).
pub const WALL_Y_SIGNS: [f64; NCOMP] = [
    1.0, 1.0, -1.0, 1.0, 1.0, // ion: my odd
    1.0, 1.0, -1.0, 1.0, 1.0, // electron: my odd
    1.0, -1.0, 1.0, // B: By odd
    -1.0, 1.0, -1.0, // E: Ex, Ez odd
    1.0, 1.0, // psi, phi even
];

/// Fills both ghost layers of `u` according to the grid's boundary kinds.
///
/// The x-axis fill runs over interior rows, then the y-axis fill runs over
/// all columns including ghost columns, which populates the corners
/// consistently. Ghost values depend only on interior values, so the fill is
/// idempotent.
pub fn fill_ghosts(u: &mut Field, grid: &Grid2D) {
    let ng = NGHOST as isize;
    let nx = grid.nx as isize;
    let ny = grid.ny as isize;

    for j in 0..ny {
        for k in 1..=ng {
            let (left, right) = match grid.bc_x {
                BoundaryKind::Periodic => (
                    *u.at((-k).rem_euclid(nx), j),
                    *u.at((nx - 1 + k).rem_euclid(nx), j),
                ),
                BoundaryKind::Outflow => (*u.at(0, j), *u.at(nx - 1, j)),
                BoundaryKind::ConductingWall => unreachable!("validated in Grid2D::new"),
            };
            *u.at_mut(-k, j) = left;
            *u.at_mut(nx - 1 + k, j) = right;
        }
    }

    for i in -ng..nx + ng {
        for k in 1..=ng {
            let (bottom, top) = match grid.bc_y {
                BoundaryKind::Periodic => (
                    *u.at(i, (-k).rem_euclid(ny)),
                    *u.at(i, (ny - 1 + k).rem_euclid(ny)),
                ),
                BoundaryKind::Outflow => (*u.at(i, 0), *u.at(i, ny - 1)),
                BoundaryKind::ConductingWall => {
                    let mut bottom = *u.at(i, k - 1);
                    let mut top = *u.at(i, ny - k);
                    for c in 0..NCOMP {
                        bottom[c] *= WALL_Y_SIGNS[c];
                        top[c] *= WALL_Y_SIGNS[c];
                    }
                    (bottom, top)
                }
            };
            *u.at_mut(i, -k) = bottom;
            *u.at_mut(i, ny - 1 + k) = top;
        }
    }
}
