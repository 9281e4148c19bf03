//! Simulation driver: owns the state, advances it step by step, and collects
//! per-step diagnostics. The `run`, `converge` and `compare` entry points
//! implement the three subcommands of the `twofluid` binary and are reused by
//! the integration tests.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};

use twofluid_core::diagnostics::{
    csv_header, csv_row, div_b_norms, div_current_vertices, div_e_vertices, gauss_residual,
    total_entropy, DiagRow,
};
use twofluid_core::grid::{fill_ghosts, Field, Grid2D};
use twofluid_core::problems::{exact_state, init, ProblemKind, ProblemSpec};
use twofluid_core::state::slot;
use twofluid_core::timeint::{compute_dt, SchemeConfig, Stepper};
use twofluid_core::SolverError;

use crate::config::Settings;
use crate::snapshot::write_snapshot;

/// A live simulation: problem, grid, current state and time, and the stepper.
pub struct Sim {
    pub spec: ProblemSpec,
    pub grid: Grid2D,
    pub scheme: SchemeConfig,
    pub u: Field,
    pub t: f64,
    pub steps: u64,
    stepper: Stepper,
    /// div E at the end of the previous step, for the Gauss-law residual.
    de_prev: Vec<f64>,
}

impl Sim {
    pub fn new(
        spec: &ProblemSpec,
        nx: usize,
        ny: usize,
        scheme: SchemeConfig,
    ) -> Result<Sim, SolverError> {
        scheme.validate()?;
        let grid = spec.make_grid(nx, ny)?;
        let u = init(spec, &grid)?;
        let de_prev = div_e_vertices(&u, &grid);
        Ok(Sim {
            spec: spec.clone(),
            stepper: Stepper::new(spec, &grid, scheme),
            grid,
            scheme,
            u,
            t: 0.0,
            steps: 0,
            de_prev,
        })
    }

    /// Takes one step at the CFL time step, capped at `cap` if given, and
    /// returns that step's diagnostics.
    pub fn step_once(&mut self, cap: Option<f64>) -> Result<DiagRow, SolverError> {
        let mut dt = compute_dt(&self.u, &self.grid, &self.spec.gas, &self.scheme)?;
        if let Some(c) = cap {
            dt = dt.min(c);
        }
        if !(dt > 1e-12 * self.t.abs().max(1.0)) {
            return Err(SolverError::Numerical(format!(
                "time step collapsed to {dt:e} at t = {}",
                self.t
            )));
        }
        self.stepper.step(&mut self.u, self.t, dt)?;
        self.t += dt;
        self.steps += 1;
        fill_ghosts(&mut self.u, &self.grid);

        let de = div_e_vertices(&self.u, &self.grid);
        let dj = div_current_vertices(self.stepper.weighted_current(), &self.grid);
        let gauss = gauss_residual(&de, &self.de_prev, &dj, dt, self.spec.gas.eps0);
        self.de_prev = de;
        Ok(DiagRow {
            t: self.t,
            dt,
            div_b: div_b_norms(&self.u, &self.grid),
            gauss,
            entropy: total_entropy(&self.u, &self.grid, &self.spec.gas)?,
            reconnected_flux: (self.spec.kind == ProblemKind::Gem).then(|| {
                twofluid_core::diagnostics::reconnected_flux(&self.u, &self.grid, self.spec.b0)
            }),
        })
    }

    /// Steps until `t_target`, clipping the last step to land on it exactly.
    /// `on_step` sees every completed step and may abort the run by returning
    /// an error.
    pub fn advance_to<F>(&mut self, t_target: f64, mut on_step: F) -> Result<()>
    where
        F: FnMut(&Sim, &DiagRow) -> Result<()>,
    {
        let eps = 1e-12 * t_target.abs().max(1.0);
        while self.t < t_target - eps {
            let rec = self.step_once(Some(t_target - self.t))?;
            on_step(self, &rec)?;
        }
        Ok(())
    }

    /// L1, L2 and max norms of the ion density error against the exact
    /// solution at the current time. `None` if the problem has no exact
    /// solution. Norms are per-cell averages, matching 1D convergence-table
    /// conventions on unit domains.
    pub fn ion_density_errors(&self) -> Option<(f64, f64, f64)> {
        if !self.spec.has_exact() {
            return None;
        }
        let (mut l1, mut l2, mut linf) = (0.0, 0.0, 0.0f64);
        for j in 0..self.grid.ny as isize {
            for i in 0..self.grid.nx as isize {
                let ex = exact_state(&self.spec, self.grid.xc(i), self.t)?;
                let d = self.u.at(i, j)[slot::RHO_I] - ex[slot::RHO_I];
                l1 += d.abs();
                l2 += d * d;
                linf = linf.max(d.abs());
            }
        }
        let n = (self.grid.nx * self.grid.ny) as f64;
        Some((l1 / n, (l2 / n).sqrt(), linf))
    }
}

/// What a completed `run` did, for the final status line.
pub struct RunSummary {
    pub steps: u64,
    pub t: f64,
    pub wall_seconds: f64,
    pub final_entropy: f64,
    pub files: Vec<PathBuf>,
}

/// Runs a problem to its end time, optionally writing a diagnostics CSV,
/// intermediate snapshots, and a final snapshot.
pub fn run(st: &Settings) -> Result<RunSummary> {
    let start = Instant::now();
    let mut sim = Sim::new(&st.spec, st.nx, st.ny, st.scheme)?;
    let mut files = Vec::new();

    let mut csv = match &st.out_dir {
        Some(dir) => {
            fs::create_dir_all(dir)
                .with_context(|| format!("creating output directory {}", dir.display()))?;
            if st.diagnostics {
                let path = dir.join("diagnostics.csv");
                let mut w = BufWriter::new(
                    File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))?,
                );
                writeln!(w, "{}", csv_header(st.spec.kind == ProblemKind::Gem))
                    .context("writing diagnostics")?;
                files.push(path);
                Some(w)
            } else {
                None
            }
        }
        None => None,
    };
    let mut last_entropy = total_entropy(&sim.u, &sim.grid, &sim.spec.gas)?;
    let mut log_step = |rec: &DiagRow, last_entropy: &mut f64| -> Result<()> {
        *last_entropy = rec.entropy;
        if let Some(w) = &mut csv {
            writeln!(w, "{}", csv_row(rec)).context("writing diagnostics")?;
        }
        Ok(())
    };

    for &ts in &st.snapshot_times {
        sim.advance_to(ts, |_, rec| log_step(rec, &mut last_entropy))?;
        if let Some(dir) = &st.out_dir {
            let path = dir.join(format!("snapshot_t{ts:.6}.dat"));
            write_snapshot(&path, &sim.u, &sim.grid, &sim.spec.gas, sim.t)?;
            files.push(path);
        }
    }
    sim.advance_to(st.tend, |_, rec| log_step(rec, &mut last_entropy))?;
    if let Some(w) = &mut csv {
        w.flush().context("writing diagnostics")?;
    }
    if let Some(dir) = &st.out_dir {
        let path = dir.join("final.dat");
        write_snapshot(&path, &sim.u, &sim.grid, &sim.spec.gas, sim.t)?;
        files.push(path);
    }
    Ok(RunSummary {
        steps: sim.steps,
        t: sim.t,
        wall_seconds: start.elapsed().as_secs_f64(),
        final_entropy: last_entropy,
        files,
    })
}

/// One resolution of a convergence study.
#[derive(Clone, Copy, Debug)]
pub struct ConvRow {
    pub nx: usize,
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Observed order between two successive rows, assuming doubled resolution.
pub fn order_between(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

/// Runs `spec` at each resolution to `tend` and measures ion density errors
/// against the exact solution. The problem must have one.
pub fn convergence_study(
    spec: &ProblemSpec,
    cells: &[usize],
    scheme: SchemeConfig,
    tend: f64,
) -> Result<Vec<ConvRow>> {
    let mut rows = Vec::with_capacity(cells.len());
    for &nx in cells {
        let mut sim = Sim::new(spec, nx, 1, scheme)?;
        sim.advance_to(tend, |_, _| Ok(()))?;
        let (l1, l2, linf) = sim.ion_density_errors().ok_or_else(|| {
            SolverError::Config(format!(
                "problem \"{}\" has no exact solution to converge against",
                spec.name
            ))
        })?;
        rows.push(ConvRow { nx, l1, l2, linf });
    }
    Ok(rows)
}

/// Renders a convergence table as CSV.
pub fn convergence_csv(rows: &[ConvRow]) -> String {
    let mut s = String::from("nx,L1,L1_order,L2,L2_order,Linf\n");
    for (k, r) in rows.iter().enumerate() {
        let ord = |f: fn(&ConvRow) -> f64| {
            if k == 0 {
                String::new()
            } else {
                format!("{:.3}", order_between(f(&rows[k - 1]), f(r)))
            }
        };
        s.push_str(&format!(
            "{},{:.6e},{},{:.6e},{},{:.6e}\n",
            r.nx,
            r.l1,
            ord(|r| r.l1),
            r.l2,
            ord(|r| r.l2),
            r.linf
        ));
    }
    s
}

/// Per-step divergence diagnostics of one Maxwell solver in a comparison.
pub struct CompareRun {
    pub mode: &'static str,
    pub rows: Vec<DiagRow>,
}

/// Runs the same problem with each Maxwell solver (multid, phm, none) and
/// collects per-step divergence diagnostics for all three.
pub fn compare(st: &Settings) -> Result<Vec<CompareRun>> {
    use twofluid_core::maxwell_flux::CleaningMode;
    let mut out = Vec::new();
    for (mode, name) in [
        (CleaningMode::MultiD, "multid"),
        (CleaningMode::Phm, "phm"),
        (CleaningMode::None, "none"),
    ] {
        let mut scheme = st.scheme;
        scheme.mode = mode;
        let mut sim = Sim::new(&st.spec, st.nx, st.ny, scheme)?;
        let mut rows = Vec::new();
        sim.advance_to(st.tend, |_, rec| {
            rows.push(rec.clone());
            Ok(())
        })?;
        out.push(CompareRun { mode: name, rows });
    }
    Ok(out)
}

/// Renders comparison runs as long-format CSV, one row per step per mode.
pub fn compare_csv(runs: &[CompareRun]) -> String {
    let mut s = String::from("mode,t,dt,divB_L1,divB_L2,divE_res_L1,divE_res_L2\n");
    for run in runs {
        for r in &run.rows {
            s.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                run.mode, r.t, r.dt, r.div_b.l1, r.div_b.l2, r.gauss.l1, r.gauss.l2
            ));
        }
    }
    s
}
