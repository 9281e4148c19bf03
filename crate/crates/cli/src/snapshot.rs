//! Plain-text state snapshots.
//!
//! A snapshot is a one-line header
//!
//! ```text
//! nx ny xmin xmax ymin ymax t
//! ```
//!
//! followed by `nx * ny` space-separated rows in row-major order (j outer, i
//! inner). Each row carries the 18 conserved components of a cell followed by
//! the two derived pressures `p_i p_e`, all printed with 16 fractional digits
//! so f64 values round-trip exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};

use twofluid_core::grid::{Field, Grid2D};
use twofluid_core::state::{cons_to_prim, GasParams, NCOMP};

/// Values per snapshot row: 18 conserved components plus both pressures.
pub const ROW_WIDTH: usize = NCOMP + 2;

/// Writes the interior of `u` to `path`.
pub fn write_snapshot(path: &Path, u: &Field, grid: &Grid2D, gas: &GasParams, t: f64) -> Result<()> {
    let ctx = || format!("writing snapshot {}", path.display());
    let file = File::create(path).with_context(ctx)?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "{} {} {:.16e} {:.16e} {:.16e} {:.16e} {:.16e}",
        grid.nx, grid.ny, grid.xmin, grid.xmax, grid.ymin, grid.ymax, t
    )
    .with_context(ctx)?;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let cell = u.at(i, j);
            let prim = cons_to_prim(cell, gas)
                .with_context(|| format!("snapshot cell ({i}, {j}) is inadmissible"))?;
            for (k, v) in cell.iter().enumerate() {
                if k > 0 {
                    write!(w, " ").with_context(ctx)?;
                }
                write!(w, "{v:.16e}").with_context(ctx)?;
            }
            writeln!(w, " {:.16e} {:.16e}", prim.ion.p, prim.ele.p).with_context(ctx)?;
        }
    }
    w.flush().with_context(ctx)
}

/// A snapshot read back from disk.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub nx: usize,
    pub ny: usize,
    pub bounds: (f64, f64, f64, f64),
    pub t: f64,
    /// `nx * ny` rows in the same order they were written.
    pub rows: Vec<[f64; ROW_WIDTH]>,
}

impl Snapshot {
    /// Row for cell `(i, j)`.
    pub fn row(&self, i: usize, j: usize) -> &[f64; ROW_WIDTH] {
        &self.rows[j * self.nx + i]
    }
}

/// Reads a snapshot produced by [`write_snapshot`].
pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let ctx = || format!("reading snapshot {}", path.display());
    let file = File::open(path).with_context(ctx)?;
    let mut lines = BufReader::new(file).lines();
    let header = match lines.next() {
        Some(line) => line.with_context(ctx)?,
        None => bail!("{}: empty snapshot", path.display()),
    };
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 7 {
        bail!("{}: malformed snapshot header", path.display());
    }
    let nx: usize = head[0].parse().with_context(ctx)?;
    let ny: usize = head[1].parse().with_context(ctx)?;
    let mut f = [0.0; 5];
    for (k, v) in f.iter_mut().enumerate() {
        *v = head[k + 2].parse().with_context(ctx)?;
    }
    let mut rows = Vec::with_capacity(nx * ny);
    for line in lines {
        let line = line.with_context(ctx)?;
        if line.trim().is_empty() {
            continue;
        }
        let mut row = [0.0; ROW_WIDTH];
        let mut count = 0;
        for (slot, tok) in row.iter_mut().zip(line.split_whitespace()) {
            *slot = tok.parse().with_context(ctx)?;
            count += 1;
        }
        if count != ROW_WIDTH || line.split_whitespace().count() != ROW_WIDTH {
            bail!(
                "{}: row {} does not hold {ROW_WIDTH} values",
                path.display(),
                rows.len()
            );
        }
        rows.push(row);
    }
    if rows.len() != nx * ny {
        bail!(
            "{}: expected {} rows, found {}",
            path.display(),
            nx * ny,
            rows.len()
        );
    }
    Ok(Snapshot {
        nx,
        ny,
        bounds: (f[0], f[1], f[2], f[3]),
        t: f[4],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use twofluid_core::problems::{init, ProblemSpec};

    #[test]
    fn snapshot_round_trips_exactly() {
        let spec = ProblemSpec::orszag_tang();
        let grid = spec.make_grid(6, 5).unwrap();
        let u = init(&spec, &grid).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.dat");
        write_snapshot(&path, &u, &grid, &spec.gas, 0.25).unwrap();

        let snap = read_snapshot(&path).unwrap();
        assert_eq!((snap.nx, snap.ny), (6, 5));
        assert_eq!(snap.t, 0.25);
        assert_eq!(snap.bounds.1, grid.xmax);
        for j in 0..5 {
            for i in 0..6 {
                let cell = u.at(i as isize, j as isize);
                let row = snap.row(i, j);
                // 16 fractional digits is 17 significant digits, enough to
                // reproduce every f64 bit for bit.
                for k in 0..NCOMP {
                    assert_eq!(row[k], cell[k], "component {k} at ({i}, {j})");
                }
                let prim = cons_to_prim(cell, &spec.gas).unwrap();
                assert_eq!(row[NCOMP], prim.ion.p);
                assert_eq!(row[NCOMP + 1], prim.ele.p);
            }
        }
    }

    #[test]
    fn read_rejects_truncated_and_malformed_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.dat");
        std::fs::write(&path, "").unwrap();
        assert!(read_snapshot(&path).is_err());
        std::fs::write(&path, "2 1 0 1 0 1\n").unwrap();
        assert!(read_snapshot(&path).is_err());
        std::fs::write(&path, "2 1 0.0 1.0 0.0 1.0 0.0\n1.0 2.0\n").unwrap();
        assert!(read_snapshot(&path).is_err());
    }
}
