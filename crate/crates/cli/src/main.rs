//! The `twofluid` binary: run two-fluid plasma benchmarks, convergence
//! studies, and Maxwell-solver comparisons from the command line.
//!
//! Exit codes: 0 on success, 2 for configuration and usage errors, 3 when the
//! solver fails (inadmissible states or a collapsed time step), 1 for IO and
//! other errors.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use twofluid_cli::config::{self, Overrides, Settings};
use twofluid_cli::driver;
use twofluid_core::maxwell_flux::CleaningMode;
use twofluid_core::problems::ProblemSpec;
use twofluid_core::timeint::SchemeConfig;
use twofluid_core::SolverError;

#[derive(Parser)]
#[command(name = "twofluid", version, about = "Two-fluid plasma solver")]
struct Cli {
    /// Worker threads for the solver; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a problem to its end time, writing diagnostics and snapshots.
    Run(RunArgs),
    /// Measure convergence of the 1D manufactured traveling wave.
    Converge(ConvergeArgs),
    /// Run each Maxwell solver on the same problem and compare divergence.
    Compare(CompareArgs),
}

/// Flags shared by `run` and `compare`; each overrides the same-named config
/// file key.
#[derive(Args)]
struct CommonArgs {
    /// Config file of key = value lines.
    config: Option<PathBuf>,
    /// Problem: accuracy1d, briowu, soliton, orszag_tang, rotor or gem.
    #[arg(long)]
    problem: Option<String>,
    /// Grid resolution, N or NXxNY.
    #[arg(long)]
    cells: Option<String>,
    /// Time integrator: rk2, rk3 or imex.
    #[arg(long)]
    integrator: Option<String>,
    /// Maxwell solver: multid, phm or none.
    #[arg(long)]
    mode: Option<String>,
    /// Reconstruction order, 1 or 2.
    #[arg(long)]
    order: Option<usize>,
    /// CFL number in (0, 1].
    #[arg(long)]
    cfl: Option<f64>,
    /// End time override.
    #[arg(long)]
    tend: Option<f64>,
    /// Normalized ion Larmor radius (briowu and soliton only).
    #[arg(long)]
    rg_hat: Option<f64>,
    /// PHM cleaning speed multiplier for div B.
    #[arg(long)]
    kappa: Option<f64>,
    /// PHM cleaning speed multiplier for div E.
    #[arg(long)]
    xi: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated times at which to write extra snapshots.
    #[arg(long)]
    snapshots: Option<String>,
    /// Skip the per-step diagnostics CSV.
    #[arg(long)]
    no_diagnostics: bool,
}

#[derive(Args)]
struct ConvergeArgs {
    /// Problem with an exact solution to converge against.
    #[arg(long, default_value = "accuracy1d")]
    problem: String,
    /// Comma-separated list of 1D resolutions.
    #[arg(long, default_value = "32,64,128,256")]
    cells: String,
    /// Time integrator: rk2, rk3 or imex.
    #[arg(long, default_value = "rk2")]
    integrator: String,
    /// Maxwell solver: multid, phm or none.
    #[arg(long, default_value = "multid")]
    mode: String,
    /// Reconstruction order, 1 or 2.
    #[arg(long)]
    order: Option<usize>,
    /// CFL number in (0, 1].
    #[arg(long)]
    cfl: Option<f64>,
    /// End time override.
    #[arg(long)]
    tend: Option<f64>,
    /// Directory for the convergence table CSV.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
}

fn mode_name(mode: CleaningMode) -> &'static str {
    match mode {
        CleaningMode::MultiD => "multid",
        CleaningMode::Phm => "phm",
        CleaningMode::None => "none",
    }
}

fn load_file(path: Option<&Path>) -> Result<BTreeMap<String, String>> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            Ok(config::parse_config(&text)?)
        }
        None => Ok(BTreeMap::new()),
    }
}

fn resolve_common(args: &CommonArgs, snapshots: Option<&str>, no_diag: bool) -> Result<Settings> {
    let file = load_file(args.config.as_deref())?;
    let ov = Overrides {
        problem: args.problem.clone(),
        rg_hat: args.rg_hat,
        cells: args.cells.clone(),
        integrator: args.integrator.clone(),
        mode: args.mode.clone(),
        order: args.order,
        cfl: args.cfl,
        kappa: args.kappa,
        xi: args.xi,
        tend: args.tend,
        out: args.out.clone(),
        snapshots: snapshots.map(str::to_owned),
        no_diagnostics: no_diag,
    };
    Ok(config::resolve(&file, &ov)?)
}

fn describe(st: &Settings) {
    println!(
        "problem={} grid={}x{} integrator={} maxwell={} order={} cfl={} tend={}",
        st.spec.name,
        st.nx,
        st.ny,
        st.scheme.integrator.name(),
        mode_name(st.scheme.mode),
        st.scheme.order,
        st.scheme.cfl,
        st.tend
    );
}

fn run_cmd(args: RunArgs) -> Result<()> {
    let st = resolve_common(&args.common, args.snapshots.as_deref(), args.no_diagnostics)?;
    describe(&st);
    let summary = driver::run(&st)?;
    println!(
        "steps={} t={:.6} entropy={:.9e} wall={:.2}s",
        summary.steps, summary.t, summary.final_entropy, summary.wall_seconds
    );
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}

fn converge_cmd(args: ConvergeArgs) -> Result<()> {
    let spec = ProblemSpec::by_name(&args.problem, None)?;
    let mut cells = Vec::new();
    for part in args.cells.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|_| SolverError::Config(format!("bad cell count {:?}", part.trim())))?;
        cells.push(n);
    }
    let mut scheme = SchemeConfig::new(
        config::parse_mode(&args.mode)?,
        config::parse_integrator(&args.integrator)?,
    );
    if let Some(o) = args.order {
        scheme.order = o;
    }
    if let Some(c) = args.cfl {
        scheme.cfl = c;
    }
    scheme.validate()?;
    let tend = args.tend.unwrap_or(spec.end_time);

    println!(
        "problem={} integrator={} maxwell={} order={} cfl={} tend={}",
        spec.name,
        scheme.integrator.name(),
        mode_name(scheme.mode),
        scheme.order,
        scheme.cfl,
        tend
    );
    let rows = driver::convergence_study(&spec, &cells, scheme, tend)?;
    println!("{:>6} {:>13} {:>7} {:>13} {:>7} {:>13}", "nx", "L1", "order", "L2", "order", "Linf");
    for (k, r) in rows.iter().enumerate() {
        let ord = |c: f64, f: f64| {
            if k == 0 {
                "-".to_string()
            } else {
                format!("{:.3}", driver::order_between(c, f))
            }
        };
        println!(
            "{:>6} {:>13.6e} {:>7} {:>13.6e} {:>7} {:>13.6e}",
            r.nx,
            r.l1,
            ord(if k > 0 { rows[k - 1].l1 } else { 0.0 }, r.l1),
            r.l2,
            ord(if k > 0 { rows[k - 1].l2 } else { 0.0 }, r.l2),
            r.linf
        );
    }
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let path = dir.join("convergence.csv");
        std::fs::write(&path, driver::convergence_csv(&rows))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn compare_cmd(args: CompareArgs) -> Result<()> {
    let st = resolve_common(&args.common, None, true)?;
    describe(&st);
    let runs = driver::compare(&st)?;
    println!(
        "{:>8} {:>7} {:>13} {:>13}",
        "mode", "steps", "divB_L1", "divE_res_L1"
    );
    for r in &runs {
        let last = r.rows.last().expect("a comparison run takes at least one step");
        let worst_gauss = r
            .rows
            .iter()
            .map(|row| row.gauss.l1)
            .fold(0.0f64, f64::max);
        println!(
            "{:>8} {:>7} {:>13.6e} {:>13.6e}",
            r.mode,
            r.rows.len(),
            last.div_b.l1,
            worst_gauss
        );
    }
    if let Some(dir) = &st.out_dir {
        let path = dir.join("compare.csv");
        std::fs::write(&path, driver::compare_csv(&runs))
            .with_context(|| format!("writing {}", path.display()))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

/// Maps the error chain onto the documented exit codes.
fn classify(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(se) = cause.downcast_ref::<SolverError>() {
            return match se {
                SolverError::Config(_) => 2,
                SolverError::Admissibility { .. } | SolverError::Numerical(_) => 3,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 1;
        }
    }
    1
}

fn main() {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: setting thread count: {e}");
            std::process::exit(2);
        }
    }
    let result = match cli.cmd {
        Cmd::Run(args) => run_cmd(args),
        Cmd::Converge(args) => converge_cmd(args),
        Cmd::Compare(args) => compare_cmd(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e:#}");
        std::process::exit(classify(&e));
    }
}
