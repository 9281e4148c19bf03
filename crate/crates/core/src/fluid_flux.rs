//! Entropy-conservative and entropy-stable finite-difference fluxes for the
//! Euler fluids.
//!
//! The face flux is the Chandrashekar entropy-conservative two-point flux
//! minus a dissipation term R |Lambda| R^T applied to limited jumps of the
//! entropy variables, where R is the eigenvector matrix scaled so that
//! R R^T equals the entropy symmetrizer dU/dV. Limiting happens in the
//! scaled characteristic variables w = R^T V, which keeps the dissipation
//! sign-definite cell by cell.

use crate::minmod;
use crate::state::{entropy_vars_prim, fluid_cons_to_prim, FluidPrim};
use crate::Inadmissible;

/// Logarithmic mean (a - b) / (ln a - ln b) for a, b > 0, continuously
/// extended with value a at a = b.
///
/// Near-equal arguments use the series of 2f/ln((1+f)/(1-f)) in
/// f = (b-a)/(b+a); elsewhere ln(b/a) is evaluated as ln_1p((b-a)/a) to
/// avoid cancellation. Both branches are accurate to a few ulp.
#[inline]
pub fn log_mean(a: f64, b: f64) -> f64 {
    debug_assert!(a > 0.0 && b > 0.0);
    let f = (b - a) / (b + a);
    let u = f * f;
    if u < 1e-5 {
        // truncation error ~ u^4/9 < 2e-21 relative
        (a + b) / (2.0 * (1.0 + u / 3.0 + u * u / 5.0 + u * u * u / 7.0))
    } else {
        (b - a) / f64::ln_1p((b - a) / a)
    }
}

/// Entropy-conservative flux from primitive face states.
///
/// With rho_ln and beta_ln the logarithmic means of rho and beta = rho/(2p),
/// overbars arithmetic means and n the unit normal of `dir`:
/// F_rho = rho_ln ubar_n, F_m = F_rho ubar + (rhobar / (2 betabar)) n,
/// F_en = (1/(2(gamma-1) beta_ln) - |u|^2bar / 2) F_rho + ubar . F_m.
#[inline]
pub fn ec_flux_prim(wl: &FluidPrim, wr: &FluidPrim, gamma: f64, dir: usize) -> [f64; 5] {
    let rho_ln = log_mean(wl.rho, wr.rho);
    let beta_l = wl.rho / (2.0 * wl.p);
    let beta_r = wr.rho / (2.0 * wr.p);
    let beta_ln = log_mean(beta_l, beta_r);
    let beta_bar = 0.5 * (beta_l + beta_r);
    let rho_bar = 0.5 * (wl.rho + wr.rho);
    let ubar = [
        0.5 * (wl.u[0] + wr.u[0]),
        0.5 * (wl.u[1] + wr.u[1]),
        0.5 * (wl.u[2] + wr.u[2]),
    ];
    let u2_bar = 0.5
        * (wl.u[0] * wl.u[0]
            + wl.u[1] * wl.u[1]
            + wl.u[2] * wl.u[2]
            + wr.u[0] * wr.u[0]
            + wr.u[1] * wr.u[1]
            + wr.u[2] * wr.u[2]);
    let un_bar = ubar[dir];
    let f_rho = rho_ln * un_bar;
    let p_tilde = rho_bar / (2.0 * beta_bar);
    let mut f_m = [f_rho * ubar[0], f_rho * ubar[1], f_rho * ubar[2]];
    f_m[dir] += p_tilde;
    let f_en = (0.5 / ((gamma - 1.0) * beta_ln) - 0.5 * u2_bar) * f_rho
        + ubar[0] * f_m[0]
        + ubar[1] * f_m[1]
        + ubar[2] * f_m[2];
    [f_rho, f_m[0], f_m[1], f_m[2], f_en]
}

/// Entropy-conservative flux from conserved face states.
pub fn ec_flux(
    ul: &[f64; 5],
    ur: &[f64; 5],
    gamma: f64,
    dir: usize,
) -> Result<[f64; 5], Inadmissible> {
    let wl = fluid_cons_to_prim(ul, gamma)?;
    let wr = fluid_cons_to_prim(ur, gamma)?;
    Ok(ec_flux_prim(&wl, &wr, gamma, dir))
}

/// Eigen system of the direction-`dir` Euler flux Jacobian at one state,
/// with eigenvectors scaled so that R R^T = dU/dV (the entropy
/// symmetrizer). `lam_abs` holds |eigenvalues| floored at 1e-12 a.
#[derive(Clone, Copy, Debug)]
pub struct FaceEigen {
    /// Scaled right eigenvector matrix, rt[row][col].
    pub rt: [[f64; 5]; 5],
    pub lam_abs: [f64; 5],
}

impl FaceEigen {
    /// w = R^T v.
    #[inline]
    pub fn rt_t_mul(&self, v: &[f64; 5]) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (c, o) in out.iter_mut().enumerate() {
            *o = self.rt[0][c] * v[0]
                + self.rt[1][c] * v[1]
                + self.rt[2][c] * v[2]
                + self.rt[3][c] * v[3]
                + self.rt[4][c] * v[4];
        }
        out
    }

    /// y = R w.
    #[inline]
    pub fn rt_mul(&self, w: &[f64; 5]) -> [f64; 5] {
        let mut out = [0.0; 5];
        for (r, o) in out.iter_mut().enumerate() {
            *o = self.rt[r][0] * w[0]
                + self.rt[r][1] * w[1]
                + self.rt[r][2] * w[2]
                + self.rt[r][3] * w[3]
                + self.rt[r][4] * w[4];
        }
        out
    }
}

/// Builds the scaled eigen system at state `w`.
///
/// Column order (acoustic-, entropy, shear, shear, acoustic+) with
/// eigenvalues (un - a, un, un, un, un + a); scaling factors
/// (rho/2gamma, rho(gamma-1)/gamma, p, p, rho/2gamma).
pub fn eigen_system(w: &FluidPrim, gamma: f64, dir: usize) -> FaceEigen {
    let a = (gamma * w.p / w.rho).sqrt();
    let [ux, uy, uz] = w.u;
    let q = 0.5 * (ux * ux + uy * uy + uz * uz);
    let h = a * a / (gamma - 1.0) + q;
    let un = w.u[dir];
    let mut n = [0.0; 3];
    n[dir] = 1.0;

    // unscaled columns, rows = (rho, mx, my, mz, en)
    let mut cols = [[0.0; 5]; 5];
    cols[0] = [
        1.0,
        ux - a * n[0],
        uy - a * n[1],
        uz - a * n[2],
        h - a * un,
    ];
    cols[1] = [1.0, ux, uy, uz, q];
    cols[2] = if dir == 0 {
        [0.0, 0.0, 1.0, 0.0, uy]
    } else {
        [0.0, 1.0, 0.0, 0.0, ux]
    };
    cols[3] = [0.0, 0.0, 0.0, 1.0, uz];
    cols[4] = [
        1.0,
        ux + a * n[0],
        uy + a * n[1],
        uz + a * n[2],
        h + a * un,
    ];

    let scale = [
        (w.rho / (2.0 * gamma)).sqrt(),
        (w.rho * (gamma - 1.0) / gamma).sqrt(),
        w.p.sqrt(),
        w.p.sqrt(),
        (w.rho / (2.0 * gamma)).sqrt(),
    ];
    let mut rt = [[0.0; 5]; 5];
    for c in 0..5 {
        for r in 0..5 {
            rt[r][c] = cols[c][r] * scale[c];
        }
    }

    let floor = 1e-12 * a;
    let lam = [un - a, un, un, un, un + a];
    let mut lam_abs = [0.0; 5];
    for k in 0..5 {
        lam_abs[k] = lam[k].abs().max(floor);
    }
    FaceEigen { rt, lam_abs }
}

/// Arithmetic mean of two primitive states, the face state at which the
/// dissipation eigen system is evaluated.
#[inline]
pub fn face_average(wl: &FluidPrim, wr: &FluidPrim) -> FluidPrim {
    FluidPrim {
        rho: 0.5 * (wl.rho + wr.rho),
        u: [
            0.5 * (wl.u[0] + wr.u[0]),
            0.5 * (wl.u[1] + wr.u[1]),
            0.5 * (wl.u[2] + wr.u[2]),
        ],
        p: 0.5 * (wl.p + wr.p),
    }
}

/// Entropy-stable face flux between cells 0 and 1 of a four-cell stencil
/// (-1, 0, 1, 2), given primitives and entropy variables per cell.
///
/// At `order` 2 the entropy-variable jump is reconstructed: both one-sided
/// traces at the face come from MinMod-limited slopes in the scaled
/// characteristic variables w = R^T V of the shared face eigen system. At
/// `order` 1 the raw jump w_1 - w_0 is used.
#[allow(clippy::too_many_arguments)]
pub fn es_face_flux(
    w: [&FluidPrim; 4],
    v: [&[f64; 5]; 4],
    gamma: f64,
    dir: usize,
    order: usize,
) -> [f64; 5] {
    let face = face_average(w[1], w[2]);
    let eig = eigen_system(&face, gamma, dir);

    let w0 = eig.rt_t_mul(v[1]);
    let w1 = eig.rt_t_mul(v[2]);
    let mut jump = [0.0; 5];
    if order >= 2 {
        let wm1 = eig.rt_t_mul(v[0]);
        let w2 = eig.rt_t_mul(v[3]);
        for c in 0..5 {
            let trace_l = w0[c] + 0.5 * minmod(w0[c] - wm1[c], w1[c] - w0[c]);
            let trace_r = w1[c] - 0.5 * minmod(w1[c] - w0[c], w2[c] - w1[c]);
            jump[c] = trace_r - trace_l;
        }
    } else {
        for c in 0..5 {
            jump[c] = w1[c] - w0[c];
        }
    }
    for c in 0..5 {
        jump[c] *= eig.lam_abs[c];
    }
    let diss = eig.rt_mul(&jump);

    let mut f = ec_flux_prim(w[1], w[2], gamma, dir);
    for k in 0..5 {
        f[k] -= 0.5 * diss[k];
    }
    f
}

/// Entropy-stable face flux from a four-cell conserved stencil; the face
/// sits between stencil entries 1 and 2.
pub fn es_flux(
    stencil: &[[f64; 5]; 4],
    gamma: f64,
    dir: usize,
    order: usize,
) -> Result<[f64; 5], Inadmissible> {
    let mut prims = [FluidPrim::default(); 4];
    let mut vars = [[0.0; 5]; 4];
    for k in 0..4 {
        prims[k] = fluid_cons_to_prim(&stencil[k], gamma)?;
        vars[k] = entropy_vars_prim(&prims[k], gamma)?;
    }
    Ok(es_face_flux(
        [&prims[0], &prims[1], &prims[2], &prims[3]],
        [&vars[0], &vars[1], &vars[2], &vars[3]],
        gamma,
        dir,
        order,
    ))
}
