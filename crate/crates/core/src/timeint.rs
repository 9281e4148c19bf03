//! Time integration: CFL step control, the semidiscrete residual (flux
//! divergence plus manufactured forcing), and strong-stability-preserving
//! explicit and IMEX steppers.
//!
//! The residual and each stepper also export the stage-weighted effective
//! current so a driver can verify that the discrete Gauss law for E is
//! advanced consistently: the curl part of the Maxwell update has exactly
//! zero discrete divergence, so div E must change only through the current.

use rayon::prelude::*;

use crate::grid::{fill_ghosts, Field, Grid2D, NGHOST};
use crate::maxwell_flux::{
    diag_traces, face_trace_pair, multid_flux_x, multid_flux_y, rusanov_bz_ez, rusanov_flux_em,
    rusanov_flux_phm, vertex_solve, CleaningMode, Em, Phm, VertexEm,
};
use crate::problems::{add_forcing, forcing, ProblemSpec};
use crate::source::{eval_source, implicit_source_stage};
use crate::state::{
    cons_to_prim, entropy_vars_prim, slot, sound_speed, Cons, GasParams, Prim, NCOMP,
};
use crate::{Inadmissible, SolverError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Integrator {
    /// Two-stage second-order SSP Runge-Kutta (Heun).
    Rk2,
    /// Three-stage third-order SSP Runge-Kutta.
    Rk3,
    /// Two-stage second-order SSP IMEX scheme; the plasma source terms are
    /// implicit (and L-stable), fluxes stay explicit.
    ImexSsp2,
}

impl Integrator {
    /// Default CFL number: the IMEX scheme is not constrained by the source
    /// stiffness and runs near the flux limit, the explicit schemes keep a
    /// margin for the sources.
    pub fn default_cfl(self) -> f64 {
        match self {
            Integrator::ImexSsp2 => 0.45,
            _ => 0.2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Integrator::Rk2 => "rk2",
            Integrator::Rk3 => "rk3",
            Integrator::ImexSsp2 => "imex",
        }
    }
}

/// How left and right contributions are averaged inside the dissipation
/// operator of the entropy-stable flux. Only the arithmetic face mean is
/// implemented; the enum exists so configurations name the choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DissAvg {
    Arithmetic,
}

/// Spatial and temporal scheme selection for a run.
#[derive(Clone, Copy, Debug)]
pub struct SchemeConfig {
    pub mode: CleaningMode,
    pub integrator: Integrator,
    /// Reconstruction order of accuracy, 1 (no reconstruction) or 2
    /// (MinMod-limited traces).
    pub order: usize,
    pub cfl: f64,
    pub diss_avg: DissAvg,
}

impl SchemeConfig {
    pub fn new(mode: CleaningMode, integrator: Integrator) -> SchemeConfig {
        SchemeConfig {
            mode,
            integrator,
            order: 2,
            cfl: integrator.default_cfl(),
            diss_avg: DissAvg::Arithmetic,
        }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.order == 1 || self.order == 2) {
            return Err(SolverError::Config(format!(
                "reconstruction order must be 1 or 2, got {}",
                self.order
            )));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::Config(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        Ok(())
    }
}

/// Largest stable step from the cell-wise CFL bound. Per direction the
/// fastest signal is the larger of each species' |u| + a and the light speed
/// (scaled by the larger cleaning multiplier in PHM mode).
pub fn compute_dt(
    u: &Field,
    grid: &Grid2D,
    gas: &GasParams,
    scheme: &SchemeConfig,
) -> Result<f64, SolverError> {
    let c_eff = match scheme.mode {
        CleaningMode::Phm => gas.c * gas.kappa.max(gas.xi).max(1.0),
        _ => gas.c,
    };
    let ny = grid.ny;
    let rate_max = (0..ny as isize)
        .into_par_iter()
        .map(|j| -> Result<f64, SolverError> {
            let mut m = 0.0f64;
            for i in 0..grid.nx as isize {
                let w = cons_to_prim(u.at(i, j), gas)
                    .map_err(|e| SolverError::Admissibility { i, j, cause: e })?;
                let ai = sound_speed(&w.ion, gas.gamma_i);
                let ae = sound_speed(&w.ele, gas.gamma_e);
                let lx = (w.ion.u[0].abs() + ai)
                    .max(w.ele.u[0].abs() + ae)
                    .max(c_eff);
                let mut rate = lx / grid.dx;
                if ny > 1 {
                    let ly = (w.ion.u[1].abs() + ai)
                        .max(w.ele.u[1].abs() + ae)
                        .max(c_eff);
                    rate += ly / grid.dy;
                }
                m = m.max(rate);
            }
            Ok(m)
        })
        .try_reduce(|| 0.0f64, |a, b| Ok(a.max(b)))?;
    if !(rate_max > 0.0) {
        return Err(SolverError::Numerical(format!(
            "non-positive CFL rate {rate_max:e}"
        )));
    }
    Ok(scheme.cfl / rate_max)
}

/// Scratch buffers for one residual evaluation, sized for a fixed grid.
pub struct Workspace {
    prim: Vec<Prim>,
    ok: Vec<u8>,
    vi: Vec<[f64; 5]>,
    ve: Vec<[f64; 5]>,
    vtx: Vec<VertexEm>,
    fx: Vec<Cons>,
    fy: Vec<Cons>,
}

impl Workspace {
    pub fn new(grid: &Grid2D) -> Workspace {
        let n = (grid.nx + 2 * NGHOST) * (grid.ny + 2 * NGHOST);
        Workspace {
            prim: vec![Prim::default(); n],
            ok: vec![0; n],
            vi: vec![[0.0; 5]; n],
            ve: vec![[0.0; 5]; n],
            vtx: vec![VertexEm::default(); (grid.nx + 1) * (grid.ny + 1)],
            fx: vec![[0.0; NCOMP]; (grid.nx + 1) * grid.ny],
            fy: vec![[0.0; NCOMP]; grid.nx * (grid.ny + 1)],
        }
    }
}

#[inline]
fn em_of(u: &Cons) -> Em {
    [
        u[slot::BX],
        u[slot::BY],
        u[slot::BZ],
        u[slot::EX],
        u[slot::EY],
        u[slot::EZ],
    ]
}

#[inline]
fn phm_of(u: &Cons) -> Phm {
    [
        u[slot::BX],
        u[slot::BY],
        u[slot::BZ],
        u[slot::EX],
        u[slot::EY],
        u[slot::EZ],
        u[slot::PSI],
        u[slot::PHI],
    ]
}

/// Evaluates the semidiscrete residual L(u, t): flux divergence over the
/// interior plus the problem's forcing, refreshing ghost cells first.
///
/// `out_l` is field-shaped; ghost entries are zeroed. `out_j` receives the
/// effective current (j - eps0 * E-forcing) at every padded cell, which is
/// what the Gauss-law bookkeeping for E needs at this stage.
#[allow(clippy::too_many_arguments)]
pub fn residual(
    u: &mut Field,
    grid: &Grid2D,
    gas: &GasParams,
    scheme: &SchemeConfig,
    spec: &ProblemSpec,
    t: f64,
    ws: &mut Workspace,
    out_l: &mut [Cons],
    out_j: &mut [[f64; 2]],
) -> Result<(), SolverError> {
    fill_ghosts(u, grid);
    let u: &Field = u;
    let nx = grid.nx;
    let ny = grid.ny;
    let sx = u.sx();
    let ng = NGHOST as isize;
    let order = scheme.order;
    let has_forcing = spec.has_forcing();

    // cell sweep: primitives, entropy variables, effective current
    {
        let (prim, ok, vi, ve) = (&mut ws.prim, &mut ws.ok, &mut ws.vi, &mut ws.ve);
        prim.par_iter_mut()
            .zip(ok.par_iter_mut())
            .zip(vi.par_iter_mut())
            .zip(ve.par_iter_mut())
            .zip(out_j.par_iter_mut())
            .enumerate()
            .for_each(|(k, ((((p, okf), a), b), jv))| {
                let uk = &u.data[k];
                *okf = 0;
                if let Ok(w) = cons_to_prim(uk, gas) {
                    if let (Ok(wa), Ok(wb)) = (
                        entropy_vars_prim(&w.ion, gas.gamma_i),
                        entropy_vars_prim(&w.ele, gas.gamma_e),
                    ) {
                        *p = w;
                        *a = wa;
                        *b = wb;
                        *okf = 1;
                    }
                }
                let mut jx = gas.r_i * uk[slot::MX_I] + gas.r_e * uk[slot::MX_E];
                let mut jy = gas.r_i * uk[slot::MY_I] + gas.r_e * uk[slot::MY_E];
                if has_forcing {
                    let i = (k % sx) as isize - ng;
                    let f = forcing(spec, grid.xc(i), t);
                    jx -= gas.eps0 * f[slot::EX];
                    jy -= gas.eps0 * f[slot::EY];
                }
                *jv = [jx, jy];
            });
        if let Some(k) = ws.ok.iter().position(|&o| o == 0) {
            let i = (k % sx) as isize - ng;
            let j = (k / sx) as isize - ng;
            let source = cons_to_prim(&u.data[k], gas).err().unwrap_or(Inadmissible {
                what: "entropy variables",
                value: f64::NAN,
            });
            return Err(SolverError::Admissibility { i, j, cause: source });
        }
    }
    let prim: &[Prim] = &ws.prim;
    let vi: &[[f64; 5]] = &ws.vi;
    let ve: &[[f64; 5]] = &ws.ve;
    let pid = |i: isize, j: isize| -> usize { ((j + ng) as usize) * sx + (i + ng) as usize };

    // vertex sweep: each vertex value is solved once and shared by the four
    // adjacent faces
    if scheme.mode == CleaningMode::MultiD {
        let nvx = nx + 1;
        ws.vtx.par_iter_mut().enumerate().for_each(|(kv, v)| {
            let i = (kv % nvx) as isize - 1;
            let j = (kv / nvx) as isize - 1;
            let mut block = [[[0.0f64; 6]; 4]; 4];
            for (di, col) in block.iter_mut().enumerate() {
                for (dj, cell) in col.iter_mut().enumerate() {
                    *cell = em_of(u.at(i - 1 + di as isize, j - 1 + dj as isize));
                }
            }
            let tr = diag_traces(&block, order);
            *v = vertex_solve(&tr, gas.c);
        });
    }
    let vtx: &[VertexEm] = &ws.vtx;
    let vid = |i: isize, j: isize| -> usize { ((j + 1) as usize) * (nx + 1) + (i + 1) as usize };

    // x-face sweep: face (i+1/2, j) at index j*(nx+1) + i+1
    {
        let fx = &mut ws.fx;
        fx.par_iter_mut().enumerate().for_each(|(kf, f)| {
            let i = (kf % (nx + 1)) as isize - 1;
            let j = (kf / (nx + 1)) as isize;
            let ks = [pid(i - 1, j), pid(i, j), pid(i + 1, j), pid(i + 2, j)];
            let fi = crate::fluid_flux::es_face_flux(
                [
                    &prim[ks[0]].ion,
                    &prim[ks[1]].ion,
                    &prim[ks[2]].ion,
                    &prim[ks[3]].ion,
                ],
                [&vi[ks[0]], &vi[ks[1]], &vi[ks[2]], &vi[ks[3]]],
                gas.gamma_i,
                0,
                order,
            );
            let fe = crate::fluid_flux::es_face_flux(
                [
                    &prim[ks[0]].ele,
                    &prim[ks[1]].ele,
                    &prim[ks[2]].ele,
                    &prim[ks[3]].ele,
                ],
                [&ve[ks[0]], &ve[ks[1]], &ve[ks[2]], &ve[ks[3]]],
                gas.gamma_e,
                0,
                order,
            );
            let mut out = [0.0; NCOMP];
            out[..5].copy_from_slice(&fi);
            out[5..10].copy_from_slice(&fe);
            match scheme.mode {
                CleaningMode::MultiD => {
                    let (l, r) = face_trace_pair::<6>(
                        &em_of(u.at(i - 1, j)),
                        &em_of(u.at(i, j)),
                        &em_of(u.at(i + 1, j)),
                        &em_of(u.at(i + 2, j)),
                        order,
                    );
                    let rus = rusanov_bz_ez(&l, &r, 0, gas.c);
                    let em = multid_flux_x(&vtx[vid(i, j - 1)], &vtx[vid(i, j)], rus);
                    out[slot::BX..slot::BX + 6].copy_from_slice(&em);
                }
                CleaningMode::Phm => {
                    let (l, r) = face_trace_pair::<8>(
                        &phm_of(u.at(i - 1, j)),
                        &phm_of(u.at(i, j)),
                        &phm_of(u.at(i + 1, j)),
                        &phm_of(u.at(i + 2, j)),
                        order,
                    );
                    let em = rusanov_flux_phm(&l, &r, 0, gas.c, gas.kappa, gas.xi);
                    out[slot::BX..slot::BX + 8].copy_from_slice(&em);
                }
                CleaningMode::None => {
                    let (l, r) = face_trace_pair::<6>(
                        &em_of(u.at(i - 1, j)),
                        &em_of(u.at(i, j)),
                        &em_of(u.at(i + 1, j)),
                        &em_of(u.at(i + 2, j)),
                        order,
                    );
                    let em = rusanov_flux_em(&l, &r, 0, gas.c);
                    out[slot::BX..slot::BX + 6].copy_from_slice(&em);
                }
            }
            *f = out;
        });
    }

    // y-face sweep: face (i, j+1/2) at index (j+1)*nx + i; with a single
    // row the up and down fluxes of every cell coincide and drop out
    if ny > 1 {
        let fy = &mut ws.fy;
        fy.par_iter_mut().enumerate().for_each(|(kf, f)| {
            let i = (kf % nx) as isize;
            let j = (kf / nx) as isize - 1;
            let ks = [pid(i, j - 1), pid(i, j), pid(i, j + 1), pid(i, j + 2)];
            let fi = crate::fluid_flux::es_face_flux(
                [
                    &prim[ks[0]].ion,
                    &prim[ks[1]].ion,
                    &prim[ks[2]].ion,
                    &prim[ks[3]].ion,
                ],
                [&vi[ks[0]], &vi[ks[1]], &vi[ks[2]], &vi[ks[3]]],
                gas.gamma_i,
                1,
                order,
            );
            let fe = crate::fluid_flux::es_face_flux(
                [
                    &prim[ks[0]].ele,
                    &prim[ks[1]].ele,
                    &prim[ks[2]].ele,
                    &prim[ks[3]].ele,
                ],
                [&ve[ks[0]], &ve[ks[1]], &ve[ks[2]], &ve[ks[3]]],
                gas.gamma_e,
                1,
                order,
            );
            let mut out = [0.0; NCOMP];
            out[..5].copy_from_slice(&fi);
            out[5..10].copy_from_slice(&fe);
            match scheme.mode {
                CleaningMode::MultiD => {
                    let (l, r) = face_trace_pair::<6>(
                        &em_of(u.at(i, j - 1)),
                        &em_of(u.at(i, j)),
                        &em_of(u.at(i, j + 1)),
                        &em_of(u.at(i, j + 2)),
                        order,
                    );
                    let rus = rusanov_bz_ez(&l, &r, 1, gas.c);
                    let em = multid_flux_y(&vtx[vid(i - 1, j)], &vtx[vid(i, j)], rus);
                    out[slot::BX..slot::BX + 6].copy_from_slice(&em);
                }
                CleaningMode::Phm => {
                    let (l, r) = face_trace_pair::<8>(
                        &phm_of(u.at(i, j - 1)),
                        &phm_of(u.at(i, j)),
                        &phm_of(u.at(i, j + 1)),
                        &phm_of(u.at(i, j + 2)),
                        order,
                    );
                    let em = rusanov_flux_phm(&l, &r, 1, gas.c, gas.kappa, gas.xi);
                    out[slot::BX..slot::BX + 8].copy_from_slice(&em);
                }
                CleaningMode::None => {
                    let (l, r) = face_trace_pair::<6>(
                        &em_of(u.at(i, j - 1)),
                        &em_of(u.at(i, j)),
                        &em_of(u.at(i, j + 1)),
                        &em_of(u.at(i, j + 2)),
                        order,
                    );
                    let em = rusanov_flux_em(&l, &r, 1, gas.c);
                    out[slot::BX..slot::BX + 6].copy_from_slice(&em);
                }
            }
            *f = out;
        });
    }

    // combine: flux differences plus forcing over the interior
    {
        let fx: &[Cons] = &ws.fx;
        let fy: &[Cons] = &ws.fy;
        let dxi = 1.0 / grid.dx;
        let dyi = 1.0 / grid.dy;
        out_l.par_chunks_mut(sx).enumerate().for_each(|(row, lrow)| {
            let j = row as isize - ng;
            for e in lrow.iter_mut() {
                *e = [0.0; NCOMP];
            }
            if j < 0 || j >= ny as isize {
                return;
            }
            let ju = j as usize;
            for iu in 0..nx {
                let fl = &fx[ju * (nx + 1) + iu];
                let fr = &fx[ju * (nx + 1) + iu + 1];
                let l = &mut lrow[iu + NGHOST];
                for k in 0..NCOMP {
                    l[k] = (fl[k] - fr[k]) * dxi;
                }
                if ny > 1 {
                    let fd = &fy[ju * nx + iu];
                    let fu = &fy[(ju + 1) * nx + iu];
                    for k in 0..NCOMP {
                        l[k] += (fd[k] - fu[k]) * dyi;
                    }
                }
                if has_forcing {
                    add_forcing(spec, grid.xc(iu as isize), t, l);
                }
            }
        });
    }
    Ok(())
}

/// Evaluates the plasma source at every padded cell of a ghost-filled field.
pub fn source_field(u: &Field, gas: &GasParams, mode: CleaningMode, out: &mut [Cons]) {
    out.par_iter_mut()
        .zip(u.data.par_iter())
        .for_each(|(s, uk)| *s = eval_source(uk, gas, mode));
}

/// Applies the implicit source stage u -> u + lambda s(u) cellwise over the
/// interior, in place. Ghost cells are left untouched.
pub fn implicit_apply(
    f: &mut Field,
    lambda: f64,
    gas: &GasParams,
    mode: CleaningMode,
) -> Result<(), SolverError> {
    let sx = f.sx();
    let (nx, ny) = (f.nx as isize, f.ny as isize);
    let ng = NGHOST as isize;
    f.data
        .par_iter_mut()
        .enumerate()
        .try_for_each(|(k, cell)| -> Result<(), SolverError> {
            let i = (k % sx) as isize - ng;
            let j = (k / sx) as isize - ng;
            if i >= 0 && i < nx && j >= 0 && j < ny {
                *cell = implicit_source_stage(cell, lambda, gas, mode)?;
            }
            Ok(())
        })
}

/// One-step integrator with its stage storage.
///
/// After [`Stepper::step`] the field holds the new state and
/// [`Stepper::weighted_current`] the stage-weighted effective current of the
/// completed step, ready for the Gauss-law diagnostic.
pub struct Stepper {
    grid: Grid2D,
    gas: GasParams,
    scheme: SchemeConfig,
    spec: ProblemSpec,
    ws: Workspace,
    u1: Field,
    la: Vec<Cons>,
    lb: Vec<Cons>,
    sa: Vec<Cons>,
    sb: Vec<Cons>,
    ja: Vec<[f64; 2]>,
    jb: Vec<[f64; 2]>,
    jc: Vec<[f64; 2]>,
    jw: Vec<[f64; 2]>,
}

impl Stepper {
    pub fn new(spec: &ProblemSpec, grid: &Grid2D, scheme: SchemeConfig) -> Stepper {
        let n = (grid.nx + 2 * NGHOST) * (grid.ny + 2 * NGHOST);
        Stepper {
            grid: grid.clone(),
            gas: spec.gas,
            scheme,
            spec: spec.clone(),
            ws: Workspace::new(grid),
            u1: Field::new(grid),
            la: vec![[0.0; NCOMP]; n],
            lb: vec![[0.0; NCOMP]; n],
            sa: vec![[0.0; NCOMP]; n],
            sb: vec![[0.0; NCOMP]; n],
            ja: vec![[0.0; 2]; n],
            jb: vec![[0.0; 2]; n],
            jc: vec![[0.0; 2]; n],
            jw: vec![[0.0; 2]; n],
        }
    }

    pub fn scheme(&self) -> &SchemeConfig {
        &self.scheme
    }

    pub fn gas(&self) -> &GasParams {
        &self.gas
    }

    /// Stage-weighted effective current of the last completed step, at every
    /// padded cell.
    pub fn weighted_current(&self) -> &[[f64; 2]] {
        &self.jw
    }

    /// Advances `u` in place from `t` by `dt`.
    pub fn step(&mut self, u: &mut Field, t: f64, dt: f64) -> Result<(), SolverError> {
        match self.scheme.integrator {
            Integrator::Rk2 => self.step_rk2(u, t, dt),
            Integrator::Rk3 => self.step_rk3(u, t, dt),
            Integrator::ImexSsp2 => self.step_imex(u, t, dt),
        }
    }

    fn step_rk2(&mut self, u: &mut Field, t: f64, dt: f64) -> Result<(), SolverError> {
        residual(
            u,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t,
            &mut self.ws,
            &mut self.la,
            &mut self.ja,
        )?;
        source_field(u, &self.gas, self.scheme.mode, &mut self.sa);
        {
            let (la, sa, u0) = (&self.la, &self.sa, &*u);
            self.u1
                .data
                .par_iter_mut()
                .enumerate()
                .for_each(|(k, v)| {
                    for c in 0..NCOMP {
                        v[c] = u0.data[k][c] + dt * (la[k][c] + sa[k][c]);
                    }
                });
        }
        residual(
            &mut self.u1,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t + dt,
            &mut self.ws,
            &mut self.lb,
            &mut self.jb,
        )?;
        source_field(&self.u1, &self.gas, self.scheme.mode, &mut self.sb);
        {
            let (lb, sb, u1) = (&self.lb, &self.sb, &self.u1);
            u.data.par_iter_mut().enumerate().for_each(|(k, v)| {
                for c in 0..NCOMP {
                    v[c] = 0.5 * (v[c] + u1.data[k][c] + dt * (lb[k][c] + sb[k][c]));
                }
            });
        }
        weighted_pair(&mut self.jw, 0.5, &self.ja, 0.5, &self.jb, None);
        Ok(())
    }

    fn step_rk3(&mut self, u: &mut Field, t: f64, dt: f64) -> Result<(), SolverError> {
        residual(
            u,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t,
            &mut self.ws,
            &mut self.la,
            &mut self.ja,
        )?;
        source_field(u, &self.gas, self.scheme.mode, &mut self.sa);
        {
            let (la, sa, u0) = (&self.la, &self.sa, &*u);
            self.u1
                .data
                .par_iter_mut()
                .enumerate()
                .for_each(|(k, v)| {
                    for c in 0..NCOMP {
                        v[c] = u0.data[k][c] + dt * (la[k][c] + sa[k][c]);
                    }
                });
        }
        residual(
            &mut self.u1,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t + dt,
            &mut self.ws,
            &mut self.lb,
            &mut self.jb,
        )?;
        source_field(&self.u1, &self.gas, self.scheme.mode, &mut self.sb);
        {
            let (lb, sb, u0) = (&self.lb, &self.sb, &*u);
            self.u1
                .data
                .par_iter_mut()
                .enumerate()
                .for_each(|(k, v)| {
                    for c in 0..NCOMP {
                        v[c] =
                            0.75 * u0.data[k][c] + 0.25 * (v[c] + dt * (lb[k][c] + sb[k][c]));
                    }
                });
        }
        residual(
            &mut self.u1,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t + 0.5 * dt,
            &mut self.ws,
            &mut self.la,
            &mut self.jc,
        )?;
        source_field(&self.u1, &self.gas, self.scheme.mode, &mut self.sa);
        {
            let (la, sa, u1) = (&self.la, &self.sa, &self.u1);
            u.data.par_iter_mut().enumerate().for_each(|(k, v)| {
                for c in 0..NCOMP {
                    v[c] = (v[c] + 2.0 * (u1.data[k][c] + dt * (la[k][c] + sa[k][c]))) / 3.0;
                }
            });
        }
        weighted_pair(
            &mut self.jw,
            1.0 / 6.0,
            &self.ja,
            1.0 / 6.0,
            &self.jb,
            Some((2.0 / 3.0, &self.jc)),
        );
        Ok(())
    }

    fn step_imex(&mut self, u: &mut Field, t: f64, dt: f64) -> Result<(), SolverError> {
        let beta = 1.0 - 1.0 / f64::sqrt(2.0);
        self.u1.data.copy_from_slice(&u.data);
        implicit_apply(&mut self.u1, beta * dt, &self.gas, self.scheme.mode)?;
        residual(
            &mut self.u1,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t,
            &mut self.ws,
            &mut self.la,
            &mut self.ja,
        )?;
        source_field(&self.u1, &self.gas, self.scheme.mode, &mut self.sa);
        {
            let (la, sa, u0) = (&self.la, &self.sa, &*u);
            let w = dt * (1.0 - 2.0 * beta);
            self.u1
                .data
                .par_iter_mut()
                .enumerate()
                .for_each(|(k, v)| {
                    for c in 0..NCOMP {
                        v[c] = u0.data[k][c] + dt * la[k][c] + w * sa[k][c];
                    }
                });
        }
        implicit_apply(&mut self.u1, beta * dt, &self.gas, self.scheme.mode)?;
        residual(
            &mut self.u1,
            &self.grid,
            &self.gas,
            &self.scheme,
            &self.spec,
            t + dt,
            &mut self.ws,
            &mut self.lb,
            &mut self.jb,
        )?;
        source_field(&self.u1, &self.gas, self.scheme.mode, &mut self.sb);
        {
            let (la, lb, sa, sb) = (&self.la, &self.lb, &self.sa, &self.sb);
            let h = 0.5 * dt;
            u.data.par_iter_mut().enumerate().for_each(|(k, v)| {
                for c in 0..NCOMP {
                    v[c] += h * (la[k][c] + lb[k][c] + sa[k][c] + sb[k][c]);
                }
            });
        }
        weighted_pair(&mut self.jw, 0.5, &self.ja, 0.5, &self.jb, None);
        Ok(())
    }
}

fn weighted_pair(
    out: &mut [[f64; 2]],
    wa: f64,
    a: &[[f64; 2]],
    wb: f64,
    b: &[[f64; 2]],
    extra: Option<(f64, &[[f64; 2]])>,
) {
    out.par_iter_mut().enumerate().for_each(|(k, o)| {
        let mut v = [wa * a[k][0] + wb * b[k][0], wa * a[k][1] + wb * b[k][1]];
        if let Some((wc, c)) = extra {
            v[0] += wc * c[k][0];
            v[1] += wc * c[k][1];
        }
        *o = v;
    });
}
