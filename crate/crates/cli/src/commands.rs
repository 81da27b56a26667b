use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use ptcubic::classical::{e_star, integrate_orbit, MassConvention, OrbitTrace};
use ptcubic::density::{probability_density, uniform_grid, DensityCurve, GaussianState};
use ptcubic::hermitian::{hermitian_equivalent, observables, unscale, OperatorKind};
use ptcubic::metric::{rational_from_f64, unit_m, MetricSolution};
use ptcubic::spectral::{spectrum_report, SpectrumReport};

use crate::cache::MetricCache;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::{density_csv, orbit_csv, to_json, DimJson, MetricJson, ObservablesJson, SpectrumJson};
use crate::output::Outputs;
use crate::{verify, Command, State};

pub fn run(command: &Command, cfg: &RunConfig) -> Result<(), CliError> {
    let cache = MetricCache::from_env();
    let mut out = Outputs::new();
    match command {
        Command::Metric { out: path } => out.emit(path.as_deref(), &metric_json(cfg, &cache)?)?,
        Command::Hamiltonian { out: path } => out.emit(path.as_deref(), &hamiltonian_json(cfg, &cache)?)?,
        Command::Observables { out: path } => out.emit(path.as_deref(), &observables_json(cfg, &cache)?)?,
        Command::Spectrum { json, out: path } => {
            let report = spectrum_report(&cfg.params, cfg.basis, cfg.levels)?;
            let text = if *json || path.is_some() { to_json(&SpectrumJson::from_report(&report)) } else { spectrum_table(&report) };
            out.emit(path.as_deref(), &text)?;
        }
        Command::Orbit { csv, x0 } => {
            let traces = orbit_traces(cfg, *x0)?;
            if csv.is_none() && traces.len() > 1 {
                return Err(CliError::Usage("an energy sweep needs --csv".into()));
            }
            let paths = orbit_paths(csv.as_deref(), &cfg.energies);
            for ((energy, trace), path) in traces.iter().zip(&paths) {
                out.emit(path.as_deref(), &orbit_csv(trace))?;
                eprintln!("{}", orbit_summary(*energy, trace, cfg));
            }
        }
        Command::Density { state, csv } => {
            let curve = density_curve(cfg, *state)?;
            out.emit(csv.as_deref(), &density_csv(&curve))?;
            eprintln!("N = {:.16e}, peaks at x = {:?}", curve.norm, curve.peaks().iter().map(|&k| curve.grid[k]).collect::<Vec<_>>());
        }
        Command::Verify { golden_dir, bless } => {
            out.commit();
            return verify::run(cfg, &cache, golden_dir.as_deref(), *bless);
        }
    }
    out.commit();
    Ok(())
}

/// `𝓜` of the configured parameters as an exact rational.
pub fn m_value(cfg: &RunConfig) -> Result<BigRational, CliError> {
    let m = cfg.params.scaled_frequency();
    rational_from_f64(m).ok_or_else(|| CliError::Usage(format!("𝓜 = {m} is not representable")))
}

pub fn metric_json(cfg: &RunConfig, cache: &MetricCache) -> Result<String, CliError> {
    let order = cfg.order_or(3);
    let (sol, _) = cache.solve(order, &m_value(cfg)?)?;
    Ok(to_json(&MetricJson::from_solution(&sol)))
}

/// Metric orders needed for operators through `ϵ^order` (physical results are 𝓜-independent, so `𝓜 = 1`).
fn metric_for(order: u32, cache: &MetricCache) -> Result<MetricSolution, CliError> {
    let q = match order {
        0..=2 => 1,
        3..=4 => 3,
        5..=6 => 5,
        _ => return Err(CliError::Usage(format!("order must be at most 6, got {order}"))),
    };
    Ok(cache.solve(q, &unit_m())?.0)
}

pub fn hamiltonian_json(cfg: &RunConfig, cache: &MetricCache) -> Result<String, CliError> {
    let order = cfg.order_or(4);
    if order > 5 {
        return Err(CliError::Usage(format!("hamiltonian order must be at most 5, got {order}")));
    }
    let sol = metric_for(order, cache)?;
    let h = hermitian_equivalent(&sol)?;
    let dim = unscale(&h.series, sol.m_value(), OperatorKind::Energy)?.truncate(order as i32);
    Ok(to_json(&DimJson::from_operator(&dim)))
}

pub fn observables_json(cfg: &RunConfig, cache: &MetricCache) -> Result<String, CliError> {
    let order = cfg.order_or(2);
    let sol = metric_for(order, cache)?;
    let pair = observables(&sol, order as usize)?;
    let x = unscale(&pair.x, sol.m_value(), OperatorKind::Position)?;
    let p = unscale(&pair.p, sol.m_value(), OperatorKind::Momentum)?;
    Ok(to_json(&ObservablesJson { x: DimJson::from_operator(&x), p: DimJson::from_operator(&p) }))
}

pub fn spectrum_json(cfg: &RunConfig) -> Result<String, CliError> {
    Ok(to_json(&SpectrumJson::from_report(&spectrum_report(&cfg.params, cfg.basis, cfg.levels)?)))
}

pub fn spectrum_table(r: &SpectrumReport) -> String {
    let mut s = format!("# N = {}, pad = {}, 𝓜 = {}, ε = {}\n", r.basis, r.pad, r.m, r.eps);
    s.push_str("n  Re E                    Im E        formula                 |E − formula|\n");
    for (n, e) in r.levels().iter().enumerate() {
        writeln!(s, "{n:<2} {:<23.16e} {:<11.3e} {:<23.16e} {:.3e}", e.re, e.im, r.formula[n], r.deviations[n]).unwrap();
    }
    writeln!(s, "max |Im| = {:.3e} ({})", r.max_imag, if r.all_real() { "real" } else { "NOT real" }).unwrap();
    s
}

/// Orbits for every configured energy, using up to `cfg.jobs` threads.
pub fn orbit_traces(cfg: &RunConfig, x0: f64) -> Result<Vec<(f64, OrbitTrace)>, CliError> {
    let run = |e: f64| integrate_orbit(&cfg.params, e, x0, cfg.dt, cfg.steps).map(|t| (e, t));
    let jobs = cfg.jobs.min(cfg.energies.len()).max(1);
    if jobs == 1 {
        return cfg.energies.iter().map(|&e| run(e).map_err(CliError::from)).collect();
    }
    let chunk = cfg.energies.len().div_ceil(jobs);
    let results: Vec<_> = std::thread::scope(|s| {
        let handles: Vec<_> = cfg
            .energies
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&e| run(e)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("orbit worker panicked")).collect()
    });
    results.into_iter().map(|r| r.map_err(CliError::from)).collect()
}

/// `orbit.csv` for one energy; `orbit_E1.csv`, `orbit_E5.csv`, … for a sweep.
pub fn orbit_paths(csv: Option<&Path>, energies: &[f64]) -> Vec<Option<PathBuf>> {
    match csv {
        None => vec![None; energies.len()],
        Some(p) if energies.len() == 1 => vec![Some(p.to_path_buf())],
        Some(p) => {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "orbit".into());
            let ext = p.extension().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into());
            energies.iter().map(|e| Some(p.with_file_name(format!("{stem}_E{e}.{ext}")))).collect()
        }
    }
}

fn orbit_summary(energy: f64, t: &OrbitTrace, cfg: &RunConfig) -> String {
    let mut s = format!("E = {energy}: p0 = {:.6}, max relative drift = {:.3e}", t.p0, t.max_rel_drift);
    match (t.period, t.closure) {
        (Some(period), Some(c)) => write!(s, ", period = {period:.6}, closure = {c:.3e}").unwrap(),
        _ => s.push_str(", orbit did not return"),
    }
    if t.drift_exceeded {
        write!(s, " [warning: drift above {:.0e}]", t.drift_bound).unwrap();
    }
    let bound = e_star(&cfg.params, MassConvention::Corrected);
    if energy >= bound {
        write!(s, " [note: E ≥ E⋆ = {bound:.4}]").unwrap();
    }
    s
}

pub fn density_curve(cfg: &RunConfig, state: State) -> Result<DensityCurve, CliError> {
    let psi = match state {
        State::Ground => GaussianState::ground(),
        State::First => GaussianState::first_excited(),
    };
    let grid = uniform_grid(cfg.xmin, cfg.xmax, cfg.points)?;
    Ok(probability_density(&psi, &cfg.params, cfg.order_or(3), &grid)?)
}
