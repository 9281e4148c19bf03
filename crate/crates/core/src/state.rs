//! Conserved and primitive state vectors, the ideal-gas closure, and the
//! entropy variables used by the entropy-stable fluid fluxes.

use crate::Inadmissible;

/// Number of conserved components per cell.
pub const NCOMP: usize = 18;

/// Conserved state of one cell:
/// ion (rho, mx, my, mz, energy), electron (rho, mx, my, mz, energy),
/// then Bx, By, Bz, Ex, Ey, Ez, psi, phi.
/// psi and phi are the divergence-cleaning scalars; they stay zero unless the
/// hyperbolic cleaning solver is active.
pub type Cons = [f64; NCOMP];

/// Slot indices into [`Cons`].
pub mod slot {
    pub const RHO_I: usize = 0;
    pub const MX_I: usize = 1;
    pub const MY_I: usize = 2;
    pub const MZ_I: usize = 3;
    pub const EN_I: usize = 4;
    pub const RHO_E: usize = 5;
    pub const MX_E: usize = 6;
    pub const MY_E: usize = 7;
    pub const MZ_E: usize = 8;
    pub const EN_E: usize = 9;
    pub const BX: usize = 10;
    pub const BY: usize = 11;
    pub const BZ: usize = 12;
    pub const EX: usize = 13;
    pub const EY: usize = 14;
    pub const EZ: usize = 15;
    pub const PSI: usize = 16;
    pub const PHI: usize = 17;
}

/// Physical parameters of a run, in nondimensional units with mu0 = 1.
///
/// `r_i` and `r_e` are the charge-to-mass ratios q_alpha / m_alpha (r_e < 0),
/// `c` the light speed and `eps0` the permittivity (eps0 = 1/c^2 when
/// mu0 = 1). `kappa` and `xi` are the cleaning-speed multipliers of the
/// hyperbolic cleaning system; they are inert in the other Maxwell solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GasParams {
    pub gamma_i: f64,
    pub gamma_e: f64,
    pub r_i: f64,
    pub r_e: f64,
    pub c: f64,
    pub eps0: f64,
    pub kappa: f64,
    pub xi: f64,
}

impl GasParams {
    /// Adiabatic index of species `s` (0 = ion, 1 = electron).
    #[inline]
    pub fn gamma(&self, s: usize) -> f64 {
        if s == 0 {
            self.gamma_i
        } else {
            self.gamma_e
        }
    }

    /// Charge-to-mass ratio of species `s`.
    #[inline]
    pub fn r(&self, s: usize) -> f64 {
        if s == 0 {
            self.r_i
        } else {
            self.r_e
        }
    }
}

/// Primitive variables of one fluid species.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct FluidPrim {
    pub rho: f64,
    pub u: [f64; 3],
    pub p: f64,
}

/// Primitive form of the full 18-component state.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Prim {
    pub ion: FluidPrim,
    pub ele: FluidPrim,
    pub b: [f64; 3],
    pub e: [f64; 3],
    pub psi: f64,
    pub phi: f64,
}

/// Offset of the 5-component fluid block of species `s` (0 = ion, 1 = electron).
#[inline]
pub fn species_offset(s: usize) -> usize {
    5 * s
}

/// The fluid 5-vector (rho, mx, my, mz, energy) of species `s`.
#[inline]
pub fn species_block(u: &Cons, s: usize) -> [f64; 5] {
    let o = species_offset(s);
    [u[o], u[o + 1], u[o + 2], u[o + 3], u[o + 4]]
}

/// Converts a fluid 5-vector to primitives. Errors if density or pressure is
/// not strictly positive.
#[inline]
pub fn fluid_cons_to_prim(u: &[f64; 5], gamma: f64) -> Result<FluidPrim, Inadmissible> {
    let rho = u[0];
    if !(rho > 0.0) {
        return Err(Inadmissible {
            what: "density",
            value: rho,
        });
    }
    let inv = 1.0 / rho;
    let vel = [u[1] * inv, u[2] * inv, u[3] * inv];
    let kin = 0.5 * (u[1] * vel[0] + u[2] * vel[1] + u[3] * vel[2]);
    let p = (gamma - 1.0) * (u[4] - kin);
    if !(p > 0.0) {
        return Err(Inadmissible {
            what: "pressure",
            value: p,
        });
    }
    Ok(FluidPrim { rho, u: vel, p })
}

/// Converts fluid primitives to the conserved 5-vector.
#[inline]
pub fn fluid_prim_to_cons(w: &FluidPrim, gamma: f64) -> [f64; 5] {
    let FluidPrim { rho, u, p } = *w;
    let kin = 0.5 * rho * (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]);
    [
        rho,
        rho * u[0],
        rho * u[1],
        rho * u[2],
        p / (gamma - 1.0) + kin,
    ]
}

/// Adiabatic sound speed sqrt(gamma p / rho).
#[inline]
pub fn sound_speed(w: &FluidPrim, gamma: f64) -> f64 {
    (gamma * w.p / w.rho).sqrt()
}

/// Converts the full conserved state to primitives, validating both species.
pub fn cons_to_prim(u: &Cons, g: &GasParams) -> Result<Prim, Inadmissible> {
    let ion = fluid_cons_to_prim(&species_block(u, 0), g.gamma_i)?;
    let ele = fluid_cons_to_prim(&species_block(u, 1), g.gamma_e)?;
    Ok(Prim {
        ion,
        ele,
        b: [u[slot::BX], u[slot::BY], u[slot::BZ]],
        e: [u[slot::EX], u[slot::EY], u[slot::EZ]],
        psi: u[slot::PSI],
        phi: u[slot::PHI],
    })
}

/// Converts the full primitive state to conserved form, validating both
/// species.
pub fn prim_to_cons(w: &Prim, g: &GasParams) -> Result<Cons, Inadmissible> {
    for (fluid, name) in [(&w.ion, "density"), (&w.ele, "density")] {
        if !(fluid.rho > 0.0) {
            return Err(Inadmissible {
                what: name,
                value: fluid.rho,
            });
        }
        if !(fluid.p > 0.0) {
            return Err(Inadmissible {
                what: "pressure",
                value: fluid.p,
            });
        }
    }
    let i5 = fluid_prim_to_cons(&w.ion, g.gamma_i);
    let e5 = fluid_prim_to_cons(&w.ele, g.gamma_e);
    let mut u = [0.0; NCOMP];
    u[..5].copy_from_slice(&i5);
    u[5..10].copy_from_slice(&e5);
    u[slot::BX] = w.b[0];
    u[slot::BY] = w.b[1];
    u[slot::BZ] = w.b[2];
    u[slot::EX] = w.e[0];
    u[slot::EY] = w.e[1];
    u[slot::EZ] = w.e[2];
    u[slot::PSI] = w.psi;
    u[slot::PHI] = w.phi;
    Ok(u)
}

/// Physical specific entropy s = ln p - gamma ln rho.
#[inline]
pub fn specific_entropy(w: &FluidPrim, gamma: f64) -> f64 {
    w.p.ln() - gamma * w.rho.ln()
}

/// Entropy density e = -rho s / (gamma - 1), the convex entropy of one fluid.
#[inline]
pub fn entropy(u: &[f64; 5], gamma: f64) -> Result<f64, Inadmissible> {
    let w = fluid_cons_to_prim(u, gamma)?;
    Ok(-w.rho * specific_entropy(&w, gamma) / (gamma - 1.0))
}

/// Entropy flux q_dir = e u_dir (dir 0 = x, 1 = y).
#[inline]
pub fn entropy_flux(u: &[f64; 5], gamma: f64, dir: usize) -> Result<f64, Inadmissible> {
    let w = fluid_cons_to_prim(u, gamma)?;
    let e = -w.rho * specific_entropy(&w, gamma) / (gamma - 1.0);
    Ok(e * w.u[dir])
}

/// Entropy flux potential chi_dir = rho u_dir, satisfying
/// chi_dir = V . f_dir(U) - q_dir(U).
#[inline]
pub fn entropy_potential(u: &[f64; 5], dir: usize) -> f64 {
    u[1 + dir]
}

/// Entropy variables V = de/dU of one fluid:
/// V = ((gamma - s)/(gamma - 1) - b |u|^2, 2 b u, -2 b) with b = rho / (2 p).
#[inline]
pub fn entropy_vars(u: &[f64; 5], gamma: f64) -> Result<[f64; 5], Inadmissible> {
    let w = fluid_cons_to_prim(u, gamma)?;
    entropy_vars_prim(&w, gamma)
}

/// Entropy variables from primitives; see [`entropy_vars`].
#[inline]
pub fn entropy_vars_prim(w: &FluidPrim, gamma: f64) -> Result<[f64; 5], Inadmissible> {
    let s = specific_entropy(w, gamma);
    let b = w.rho / (2.0 * w.p);
    let u2 = w.u[0] * w.u[0] + w.u[1] * w.u[1] + w.u[2] * w.u[2];
    Ok([
        (gamma - s) / (gamma - 1.0) - b * u2,
        2.0 * b * w.u[0],
        2.0 * b * w.u[1],
        2.0 * b * w.u[2],
        -2.0 * b,
    ])
}

/// Exact Euler flux of one fluid in direction `dir`.
#[inline]
pub fn fluid_flux_exact(w: &FluidPrim, gamma: f64, dir: usize) -> [f64; 5] {
    let un = w.u[dir];
    let kin = 0.5 * w.rho * (w.u[0] * w.u[0] + w.u[1] * w.u[1] + w.u[2] * w.u[2]);
    let en = w.p / (gamma - 1.0) + kin;
    let mut f = [
        w.rho * un,
        w.rho * un * w.u[0],
        w.rho * un * w.u[1],
        w.rho * un * w.u[2],
        (en + w.p) * un,
    ];
    f[1 + dir] += w.p;
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn gas() -> GasParams {
        GasParams {
            gamma_i: 5.0 / 3.0,
            gamma_e: 5.0 / 3.0,
            r_i: 1.0,
            r_e: -2.0,
            c: 1.0,
            eps0: 1.0,
            kappa: 1.0,
            xi: 1.0,
        }
    }

    #[test]
    fn prim_cons_round_trip_hand_values() {
        let g = gas();
        let w = Prim {
            ion: FluidPrim {
                rho: 2.0,
                u: [0.3, -0.4, 0.5],
                p: 1.7,
            },
            ele: FluidPrim {
                rho: 0.08,
                u: [-1.0, 2.0, 0.0],
                p: 0.01,
            },
            b: [0.1, 0.2, 0.3],
            e: [-0.1, 0.0, 0.4],
            psi: 0.05,
            phi: -0.02,
        };
        let u = prim_to_cons(&w, &g).unwrap();
        // ion energy = p/(gamma-1) + rho |u|^2 / 2 = 2.55 + 0.5
        assert_relative_eq!(u[slot::EN_I], 1.7 * 1.5 + 0.5, max_relative = 1e-15);
        let back = cons_to_prim(&u, &g).unwrap();
        assert_relative_eq!(back.ion.p, w.ion.p, max_relative = 1e-13);
        assert_relative_eq!(back.ele.u[1], w.ele.u[1], max_relative = 1e-13);
        assert_eq!(back.b, w.b);
        assert_eq!(back.psi, w.psi);
    }

    #[test]
    fn nonpositive_density_and_pressure_are_rejected() {
        let gamma = 5.0 / 3.0;
        assert!(fluid_cons_to_prim(&[0.0, 0.0, 0.0, 0.0, 1.0], gamma).is_err());
        assert!(fluid_cons_to_prim(&[-1.0, 0.0, 0.0, 0.0, 1.0], gamma).is_err());
        // energy exactly balances kinetic energy -> p = 0
        assert!(fluid_cons_to_prim(&[1.0, 1.0, 0.0, 0.0, 0.5], gamma).is_err());
        assert!(fluid_cons_to_prim(&[f64::NAN, 0.0, 0.0, 0.0, 1.0], gamma).is_err());
    }

    #[test]
    fn entropy_vars_at_unit_rest_state() {
        // rho = p = 1, u = 0, gamma = 5/3: s = 0, b = 1/2,
        // V = (gamma/(gamma-1), 0, 0, 0, -1) = (2.5, 0, 0, 0, -1).
        let gamma = 5.0 / 3.0;
        let u = fluid_prim_to_cons(
            &FluidPrim {
                rho: 1.0,
                u: [0.0; 3],
                p: 1.0,
            },
            gamma,
        );
        let v = entropy_vars(&u, gamma).unwrap();
        assert_relative_eq!(v[0], 2.5, max_relative = 1e-14);
        assert_eq!(v[1], 0.0);
        assert_eq!(v[2], 0.0);
        assert_eq!(v[3], 0.0);
        assert_relative_eq!(v[4], -1.0, max_relative = 1e-14);
    }

    #[test]
    fn entropy_vars_match_finite_difference_gradient_of_entropy() {
        let gamma = 5.0 / 3.0;
        let states = [
            [1.0, 0.2, -0.3, 0.1, 2.0],
            [0.3, 0.0, 0.0, 0.0, 0.9],
            [2.5, -1.0, 2.0, 0.4, 7.0],
        ];
        for u0 in states {
            let v = entropy_vars(&u0, gamma).unwrap();
            for k in 0..5 {
                let h = 1e-6 * u0[k].abs().max(1e-3);
                let mut up = u0;
                let mut dn = u0;
                up[k] += h;
                dn[k] -= h;
                let fd =
                    (entropy(&up, gamma).unwrap() - entropy(&dn, gamma).unwrap()) / (2.0 * h);
                assert_relative_eq!(v[k], fd, max_relative = 1e-6, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn entropy_potential_identity() {
        // chi_dir = V . f_dir - q_dir for assorted states and both directions.
        let gamma = 5.0 / 3.0;
        let states = [
            [1.0, 0.2, -0.3, 0.1, 2.0],
            [0.4, -0.1, 0.05, 0.0, 1.1],
            [3.0, 2.0, 1.0, -1.0, 9.0],
        ];
        for u in states {
            let w = fluid_cons_to_prim(&u, gamma).unwrap();
            let v = entropy_vars(&u, gamma).unwrap();
            for dir in 0..2 {
                let f = fluid_flux_exact(&w, gamma, dir);
                let vf: f64 = (0..5).map(|k| v[k] * f[k]).sum();
                let q = entropy_flux(&u, gamma, dir).unwrap();
                assert_relative_eq!(
                    entropy_potential(&u, dir),
                    vf - q,
                    max_relative = 1e-12,
                    epsilon = 1e-12
                );
            }
        }
    }

    proptest! {
        #[test]
        fn prim_cons_round_trip(
            rho in 1e-3f64..1e3,
            ux in -10.0f64..10.0,
            uy in -10.0f64..10.0,
            uz in -10.0f64..10.0,
            p in 1e-6f64..1e3,
        ) {
            let gamma = 5.0 / 3.0;
            let w = FluidPrim { rho, u: [ux, uy, uz], p };
            let u = fluid_prim_to_cons(&w, gamma);
            let back = fluid_cons_to_prim(&u, gamma).unwrap();
            prop_assert!((back.rho - rho).abs() <= 1e-12 * rho);
            prop_assert!((back.p - p).abs() <= 1e-9 * p.max(1e-12));
            for k in 0..3 {
                prop_assert!((back.u[k] - w.u[k]).abs() <= 1e-11 * (1.0 + w.u[k].abs()));
            }
        }
    }
}
