//! Semidiscrete entropy checks: the assembled spatial operator must not
//! produce total fluid entropy, and each cell must satisfy the local
//! entropy inequality against the numerical entropy flux.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twofluid_core::fluid_flux::es_flux;
use twofluid_core::grid::{BoundaryKind, Field, Grid2D};
use twofluid_core::maxwell_flux::CleaningMode;
use twofluid_core::problems::{init, ProblemSpec};
use twofluid_core::state::{
    entropy_potential, entropy_vars, fluid_prim_to_cons, prim_to_cons, species_block, FluidPrim,
    GasParams, Prim, NCOMP,
};
use twofluid_core::timeint::{residual, Integrator, SchemeConfig, Workspace};

fn plasma(c: f64) -> GasParams {
    GasParams {
        gamma_i: 5.0 / 3.0,
        gamma_e: 5.0 / 3.0,
        r_i: 1.0,
        r_e: -2.0,
        c,
        eps0: 1.0 / (c * c),
        kappa: 1.0,
        xi: 1.0,
    }
}

/// Total entropy production rate sum_cells V . L dx dy of the fluid rows.
fn production(spec: &ProblemSpec, grid: &Grid2D, u: &mut Field, order: usize) -> f64 {
    let mut scheme = SchemeConfig::new(CleaningMode::MultiD, Integrator::Rk2);
    scheme.order = order;
    let mut ws = Workspace::new(grid);
    let n = u.data.len();
    let mut l = vec![[0.0; NCOMP]; n];
    let mut jb = vec![[0.0; 2]; n];
    residual(u, grid, &spec.gas, &scheme, spec, 0.0, &mut ws, &mut l, &mut jb).unwrap();
    let mut total = 0.0;
    for j in 0..grid.ny as isize {
        for i in 0..grid.nx as isize {
            let k = u.idx(i, j);
            for sp in 0..2 {
                let v = entropy_vars(&species_block(u.at(i, j), sp), spec.gas.gamma(sp)).unwrap();
                for c in 0..5 {
                    total += v[c] * l[k][5 * sp + c];
                }
            }
        }
    }
    total * grid.dx * grid.dy
}

fn synthetic_spec(gas: GasParams) -> ProblemSpec {
    let mut spec = ProblemSpec::soliton(1.0);
    spec.gas = gas;
    spec
}

#[test]
fn smooth_wave_does_not_produce_entropy() {
    let spec = ProblemSpec::accuracy1d();
    let grid = spec.make_grid(64, 1).unwrap();
    let mut u = init(&spec, &grid).unwrap();
    for order in [1, 2] {
        let p = production(&spec, &grid, &mut u, order);
        assert!(p <= 1e-10, "order {order}: production {p:e}");
    }
}

#[test]
fn periodic_shock_data_dissipates_entropy() {
    let gas = plasma(10.0);
    let spec = synthetic_spec(gas);
    let grid = Grid2D::new(
        64,
        1,
        (0.0, 1.0, 0.0, 1.0),
        BoundaryKind::Periodic,
        BoundaryKind::Periodic,
    )
    .unwrap();
    let mut u = Field::new(&grid);
    for i in 0..64isize {
        let left = (16..48).contains(&i);
        let f = |hi: f64, lo: f64| if left { hi } else { lo };
        let w = Prim {
            ion: FluidPrim {
                rho: f(1.0, 0.125),
                u: [0.0; 3],
                p: f(1.0, 0.1),
            },
            ele: FluidPrim {
                rho: f(0.5, 0.0625),
                u: [0.0; 3],
                p: f(0.7, 0.07),
            },
            b: [0.75, f(1.0, -1.0), 0.0],
            e: [0.0; 3],
            psi: 0.0,
            phi: 0.0,
        };
        *u.at_mut(i, 0) = prim_to_cons(&w, &gas).unwrap();
    }
    for order in [1, 2] {
        let p = production(&spec, &grid, &mut u.clone(), order);
        assert!(p <= 1e-10, "order {order}: production {p:e}");
        assert!(p < -1e-6, "order {order}: jumps should dissipate, got {p:e}");
    }
}

#[test]
fn random_states_do_not_produce_entropy() {
    let gas = plasma(5.0);
    let spec = synthetic_spec(gas);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1905);
    for (nx, ny) in [(64usize, 1usize), (12, 12)] {
        let grid = Grid2D::new(
            nx,
            ny,
            (0.0, 1.0, 0.0, 0.7),
            BoundaryKind::Periodic,
            BoundaryKind::Periodic,
        )
        .unwrap();
        for trial in 0..5 {
            let mut u = Field::new(&grid);
            for j in 0..ny as isize {
                for i in 0..nx as isize {
                    let mut sp = || FluidPrim {
                        rho: rng.random_range(0.4..2.0),
                        u: [
                            rng.random_range(-0.8..0.8),
                            rng.random_range(-0.8..0.8),
                            rng.random_range(-0.8..0.8),
                        ],
                        p: rng.random_range(0.4..2.0),
                    };
                    let ion = sp();
                    let ele = sp();
                    let mut six = [0.0; 6];
                    for v in six.iter_mut() {
                        *v = rng.random_range(-1.0..1.0);
                    }
                    let w = Prim {
                        ion,
                        ele,
                        b: [six[0], six[1], six[2]],
                        e: [six[3], six[4], six[5]],
                        psi: 0.0,
                        phi: 0.0,
                    };
                    *u.at_mut(i, j) = prim_to_cons(&w, &gas).unwrap();
                }
            }
            for order in [1, 2] {
                let p = production(&spec, &grid, &mut u, order);
                assert!(
                    p <= 1e-10,
                    "{nx}x{ny} trial {trial} order {order}: production {p:e}"
                );
            }
        }
    }
}

#[test]
fn vortex_data_does_not_produce_entropy() {
    let spec = ProblemSpec::orszag_tang();
    let grid = spec.make_grid(32, 32).unwrap();
    let mut u = init(&spec, &grid).unwrap();
    let p = production(&spec, &grid, &mut u, 2);
    assert!(p <= 1e-10, "production {p:e}");
}

/// Local inequality: for every cell, V . dU/dt + flux difference of the
/// numerical entropy flux q = Vbar . F - chibar must be non-positive.
#[test]
fn each_cell_satisfies_the_local_entropy_inequality() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x77aa);
    let n = 64usize;
    for (gamma, dir, order) in [
        (5.0f64 / 3.0, 0usize, 2usize),
        (1.4, 0, 2),
        (5.0 / 3.0, 1, 2),
        (5.0 / 3.0, 0, 1),
    ] {
        // periodic ring of random states, moderately rough
        let mut cells = vec![[0.0f64; 5]; n];
        for cell in cells.iter_mut() {
            let w = FluidPrim {
                rho: rng.random_range(0.3..3.0),
                u: [
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                ],
                p: rng.random_range(0.3..3.0),
            };
            *cell = fluid_prim_to_cons(&w, gamma);
        }
        let at = |i: isize| cells[i.rem_euclid(n as isize) as usize];
        // face i + 1/2 for i in 0..n
        let mut fluxes = vec![[0.0f64; 5]; n];
        let mut qhat = vec![0.0f64; n];
        for i in 0..n as isize {
            let stencil = [at(i - 1), at(i), at(i + 1), at(i + 2)];
            let f = es_flux(&stencil, gamma, dir, order).unwrap();
            let vl = entropy_vars(&at(i), gamma).unwrap();
            let vr = entropy_vars(&at(i + 1), gamma).unwrap();
            let mut q = 0.0;
            for c in 0..5 {
                q += 0.5 * (vl[c] + vr[c]) * f[c];
            }
            q -= 0.5 * (entropy_potential(&at(i), dir) + entropy_potential(&at(i + 1), dir));
            fluxes[i as usize] = f;
            qhat[i as usize] = q;
        }
        for i in 0..n {
            let fl = fluxes[(i + n - 1) % n];
            let fr = fluxes[i];
            let ql = qhat[(i + n - 1) % n];
            let qr = qhat[i];
            let v = entropy_vars(&cells[i], gamma).unwrap();
            let mut rate = 0.0;
            let mut scale = 0.0f64;
            for c in 0..5 {
                rate += v[c] * (fl[c] - fr[c]);
                scale = scale.max(v[c].abs() * (fl[c].abs() + fr[c].abs()));
            }
            rate += qr - ql;
            assert!(
                rate <= 1e-12 * scale.max(1.0),
                "cell {i} dir {dir} order {order}: rate {rate:e}"
            );
        }
    }
}

#[test]
fn entropy_decays_over_a_full_shock_run() {
    // advance the periodic shock data a few dozen steps and watch the total
    // entropy: it must never increase across a step
    let gas = plasma(10.0);
    let spec = synthetic_spec(gas);
    let grid = Grid2D::new(
        128,
        1,
        (0.0, 1.0, 0.0, 1.0),
        BoundaryKind::Periodic,
        BoundaryKind::Periodic,
    )
    .unwrap();
    let mut u = Field::new(&grid);
    for i in 0..128isize {
        let left = (32..96).contains(&i);
        let f = |hi: f64, lo: f64| if left { hi } else { lo };
        let w = Prim {
            ion: FluidPrim {
                rho: f(1.0, 0.125),
                u: [0.0; 3],
                p: f(1.0, 0.1),
            },
            ele: FluidPrim {
                rho: f(0.5, 0.0625),
                u: [0.0; 3],
                p: f(0.7, 0.07),
            },
            b: [0.75, f(1.0, -1.0), 0.0],
            e: [0.0; 3],
            psi: 0.0,
            phi: 0.0,
        };
        *u.at_mut(i, 0) = prim_to_cons(&w, &gas).unwrap();
    }
    let scheme = SchemeConfig::new(CleaningMode::MultiD, Integrator::ImexSsp2);
    let mut st = twofluid_core::timeint::Stepper::new(&spec, &grid, scheme);
    let mut prev = twofluid_core::diagnostics::total_entropy(&u, &grid, &gas).unwrap();
    for _ in 0..40 {
        let dt = twofluid_core::timeint::compute_dt(&u, &grid, &gas, &scheme).unwrap();
        st.step(&mut u, 0.0, dt).unwrap();
        let s = twofluid_core::diagnostics::total_entropy(&u, &grid, &gas).unwrap();
        assert!(
            s <= prev + 1e-10,
            "entropy increased across a step: {prev:e} -> {s:e}"
        );
        prev = s;
    }
}
