//! Flat `key = value` run configuration.
//!
//! A config file is a sequence of `key = value` lines; `#` starts a comment
//! and blank lines are ignored. Keys are namespaced (`problem.`, `grid.`,
//! `scheme.`, `run.`, `output.`) and unknown keys are rejected so typos fail
//! loudly instead of silently falling back to defaults. Command-line flags
//! override file values, which override problem defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;

use twofluid_core::maxwell_flux::CleaningMode;
use twofluid_core::problems::ProblemSpec;
use twofluid_core::timeint::{DissAvg, Integrator, SchemeConfig};
use twofluid_core::SolverError;

/// Every key a config file may set.
pub const KNOWN_KEYS: &[&str] = &[
    "problem.name",
    "problem.rg_hat",
    "grid.nx",
    "grid.ny",
    "scheme.integrator",
    "scheme.maxwell",
    "scheme.order",
    "scheme.cfl",
    "scheme.kappa",
    "scheme.xi",
    "scheme.dissipation_average",
    "run.tend",
    "output.dir",
    "output.diagnostics",
    "output.snapshot_times",
];

/// Parses config text into a key-value map, rejecting malformed lines,
/// unknown keys and duplicates.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, SolverError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(SolverError::Config(format!(
                "config line {}: expected key = value, got {raw:?}",
                n + 1
            )));
        };
        let (k, v) = (k.trim(), v.trim());
        if !KNOWN_KEYS.contains(&k) {
            return Err(SolverError::Config(format!(
                "config line {}: unknown key {k:?}",
                n + 1
            )));
        }
        if map.insert(k.to_string(), v.to_string()).is_some() {
            return Err(SolverError::Config(format!(
                "config line {}: duplicate key {k:?}",
                n + 1
            )));
        }
    }
    Ok(map)
}

/// Renders a key-value map back into config text that [`parse_config`]
/// accepts.
pub fn serialize_config(map: &BTreeMap<String, String>) -> String {
    let mut s = String::new();
    for (k, v) in map {
        s.push_str(k);
        s.push_str(" = ");
        s.push_str(v);
        s.push('\n');
    }
    s
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub problem: Option<String>,
    pub rg_hat: Option<f64>,
    /// `"N"` or `"NXxNY"`.
    pub cells: Option<String>,
    pub integrator: Option<String>,
    pub mode: Option<String>,
    pub order: Option<usize>,
    pub cfl: Option<f64>,
    pub kappa: Option<f64>,
    pub xi: Option<f64>,
    pub tend: Option<f64>,
    pub out: Option<PathBuf>,
    /// Comma-separated snapshot times.
    pub snapshots: Option<String>,
    pub no_diagnostics: bool,
}

/// A fully resolved run: problem, resolution, scheme and output plan.
#[derive(Clone, Debug)]
pub struct Settings {
    pub spec: ProblemSpec,
    pub nx: usize,
    pub ny: usize,
    pub scheme: SchemeConfig,
    pub tend: f64,
    pub out_dir: Option<PathBuf>,
    /// Sorted times at which to write intermediate snapshots.
    pub snapshot_times: Vec<f64>,
    /// Whether to write the per-step diagnostics CSV.
    pub diagnostics: bool,
}

fn parse_f64(key: &str, v: &str) -> Result<f64, SolverError> {
    v.parse()
        .map_err(|_| SolverError::Config(format!("{key}: expected a number, got {v:?}")))
}

fn parse_usize(key: &str, v: &str) -> Result<usize, SolverError> {
    v.parse()
        .map_err(|_| SolverError::Config(format!("{key}: expected a positive integer, got {v:?}")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool, SolverError> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(SolverError::Config(format!(
            "{key}: expected true or false, got {v:?}"
        ))),
    }
}

/// Parses an integrator name: `rk2`, `rk3` or `imex`.
pub fn parse_integrator(v: &str) -> Result<Integrator, SolverError> {
    match v {
        "rk2" => Ok(Integrator::Rk2),
        "rk3" => Ok(Integrator::Rk3),
        "imex" => Ok(Integrator::ImexSsp2),
        _ => Err(SolverError::Config(format!(
            "unknown integrator {v:?} (expected rk2, rk3 or imex)"
        ))),
    }
}

/// Parses a Maxwell solver name: `multid`, `phm` or `none`.
pub fn parse_mode(v: &str) -> Result<CleaningMode, SolverError> {
    match v {
        "multid" => Ok(CleaningMode::MultiD),
        "phm" => Ok(CleaningMode::Phm),
        "none" => Ok(CleaningMode::None),
        _ => Err(SolverError::Config(format!(
            "unknown Maxwell solver {v:?} (expected multid, phm or none)"
        ))),
    }
}

/// Parses `"N"` or `"NXxNY"`. A bare `N` means `N x 1` for problems whose
/// default is one-dimensional and `N x N` otherwise.
pub fn parse_cells(v: &str, default_ny: usize) -> Result<(usize, usize), SolverError> {
    let (nx, ny) = if let Some((a, b)) = v.split_once('x') {
        (parse_usize("cells", a.trim())?, parse_usize("cells", b.trim())?)
    } else {
        let n = parse_usize("cells", v)?;
        (n, if default_ny == 1 { 1 } else { n })
    };
    if nx == 0 || ny == 0 {
        return Err(SolverError::Config("cells: counts must be positive".into()));
    }
    Ok((nx, ny))
}

/// Parses a comma-separated list of strictly positive times, sorted.
pub fn parse_times(key: &str, v: &str) -> Result<Vec<f64>, SolverError> {
    let mut times = Vec::new();
    for part in v.split(',') {
        let t = parse_f64(key, part.trim())?;
        if !(t > 0.0) {
            return Err(SolverError::Config(format!("{key}: times must be positive")));
        }
        times.push(t);
    }
    times.sort_by(|a, b| a.total_cmp(b));
    Ok(times)
}

/// Merges file values and command-line overrides into a run plan.
pub fn resolve(file: &BTreeMap<String, String>, ov: &Overrides) -> Result<Settings, SolverError> {
    let name = ov
        .problem
        .clone()
        .or_else(|| file.get("problem.name").cloned())
        .ok_or_else(|| {
            SolverError::Config("no problem selected (set problem.name or pass --problem)".into())
        })?;
    let rg_hat = match (ov.rg_hat, file.get("problem.rg_hat")) {
        (Some(r), _) => Some(r),
        (None, Some(v)) => Some(parse_f64("problem.rg_hat", v)?),
        (None, None) => None,
    };
    let mut spec = ProblemSpec::by_name(&name, rg_hat)?;

    let (nx, ny) = if let Some(cells) = &ov.cells {
        parse_cells(cells, spec.default_ny)?
    } else {
        let fx = file
            .get("grid.nx")
            .map(|v| parse_usize("grid.nx", v))
            .transpose()?;
        let fy = file
            .get("grid.ny")
            .map(|v| parse_usize("grid.ny", v))
            .transpose()?;
        match (fx, fy) {
            (None, None) => (spec.default_nx, spec.default_ny),
            (Some(x), None) => (x, if spec.default_ny == 1 { 1 } else { x }),
            (None, Some(_)) => {
                return Err(SolverError::Config("grid.ny given without grid.nx".into()))
            }
            (Some(x), Some(y)) => (x, y),
        }
    };
    if nx == 0 || ny == 0 {
        return Err(SolverError::Config("grid sizes must be positive".into()));
    }

    let integrator = match (&ov.integrator, file.get("scheme.integrator")) {
        (Some(v), _) => parse_integrator(v)?,
        (None, Some(v)) => parse_integrator(v)?,
        (None, None) => Integrator::ImexSsp2,
    };
    let mode = match (&ov.mode, file.get("scheme.maxwell")) {
        (Some(v), _) => parse_mode(v)?,
        (None, Some(v)) => parse_mode(v)?,
        (None, None) => CleaningMode::MultiD,
    };
    let mut scheme = SchemeConfig::new(mode, integrator);
    if let Some(o) = match (ov.order, file.get("scheme.order")) {
        (Some(o), _) => Some(o),
        (None, Some(v)) => Some(parse_usize("scheme.order", v)?),
        (None, None) => None,
    } {
        scheme.order = o;
    }
    if let Some(cfl) = match (ov.cfl, file.get("scheme.cfl")) {
        (Some(c), _) => Some(c),
        (None, Some(v)) => Some(parse_f64("scheme.cfl", v)?),
        (None, None) => None,
    } {
        scheme.cfl = cfl;
    }
    if let Some(v) = file.get("scheme.dissipation_average") {
        if v != "arithmetic" {
            return Err(SolverError::Config(format!(
                "scheme.dissipation_average: only \"arithmetic\" is implemented, got {v:?}"
            )));
        }
    }
    scheme.diss_avg = DissAvg::Arithmetic;
    scheme.validate()?;

    for (key, ov_val, slot) in [
        ("scheme.kappa", ov.kappa, &mut spec.gas.kappa),
        ("scheme.xi", ov.xi, &mut spec.gas.xi),
    ] {
        if let Some(v) = match (ov_val, file.get(key)) {
            (Some(x), _) => Some(x),
            (None, Some(v)) => Some(parse_f64(key, v)?),
            (None, None) => None,
        } {
            if !(v > 0.0) {
                return Err(SolverError::Config(format!("{key} must be positive")));
            }
            *slot = v;
        }
    }

    let tend = match (ov.tend, file.get("run.tend")) {
        (Some(t), _) => t,
        (None, Some(v)) => parse_f64("run.tend", v)?,
        (None, None) => spec.end_time,
    };
    if !(tend > 0.0) {
        return Err(SolverError::Config("run.tend must be positive".into()));
    }

    let out_dir = ov
        .out
        .clone()
        .or_else(|| file.get("output.dir").map(PathBuf::from));
    let snapshot_times = match (&ov.snapshots, file.get("output.snapshot_times")) {
        (Some(v), _) => parse_times("output.snapshot_times", v)?,
        (None, Some(v)) => parse_times("output.snapshot_times", v)?,
        (None, None) => Vec::new(),
    };
    if let Some(&last) = snapshot_times.last() {
        if last > tend {
            return Err(SolverError::Config(format!(
                "output.snapshot_times: {last} lies beyond the end time {tend}"
            )));
        }
    }
    let diagnostics = if ov.no_diagnostics {
        false
    } else {
        match file.get("output.diagnostics") {
            Some(v) => parse_bool("output.diagnostics", v)?,
            None => true,
        }
    };

    Ok(Settings {
        spec,
        nx,
        ny,
        scheme,
        tend,
        out_dir,
        snapshot_times,
        diagnostics,
    })
}
