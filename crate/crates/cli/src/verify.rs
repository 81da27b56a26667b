//! `verify`: exact golden identities, numerical properties and, optionally, a
//! comparison of this build's artifacts against a golden directory.

use std::path::Path;

use num_rational::BigRational;
use ptcubic::classical::{classical_limit, e_star, integrate_orbit, MassConvention};
use ptcubic::density::quadrature::{adaptive_simpson, trapezoid};
use ptcubic::density::{probability_density, uniform_grid, GaussianState};
use ptcubic::goldens;
use ptcubic::hermitian::{hermitian_equivalent, observables, represent_in_observables, unscale, OperatorKind};
use ptcubic::metric::{position_residual, verify_metric, CubicModel};
use ptcubic::params::ModelParams;
use ptcubic::spectral::{first_order_energies, spectrum_report};
use ptcubic::weyl::{ratio, EpsilonSeries, GaussianRational, OperatorPoly, SymmetryKind, XPoly};

use crate::cache::MetricCache;
use crate::commands::{density_curve, hamiltonian_json, metric_json, observables_json, orbit_traces, spectrum_json};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::formats::{density_csv, orbit_csv};
use crate::golden::{ArtifactKind, GoldenOutcome, GoldenStore};
use crate::State;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn m_values() -> [BigRational; 2] {
    [ratio(1, 1), ratio(3, 2)]
}

fn metric_goldens(cache: &MetricCache) -> Check {
    for m in m_values() {
        let (sol, _) = cache.solve(3, &m).map_err(|e| e.to_string())?;
        ensure(sol.q(1) == Some(&goldens::q1(&m)), format!("Q1 differs at 𝓜 = {m}"))?;
        ensure(sol.q(3) == Some(&goldens::q3(&m)), format!("Q3 differs at 𝓜 = {m}"))?;
    }
    Ok("Q1, Q3 exact at 𝓜 = 1, 3/2".into())
}

fn metric_residuals(cache: &MetricCache) -> Check {
    let (sol, _) = cache.solve(5, &ratio(1, 1)).map_err(|e| e.to_string())?;
    let report = verify_metric(&sol).map_err(|e| e.to_string())?;
    for index in 0..3 {
        for n in 0..=12 {
            let r = position_residual(&sol, index, n).map_err(|e| e.to_string())?;
            ensure(r == XPoly::zero(), format!("Q{} residual on x^{n}", 2 * index + 1))?;
        }
    }
    Ok(format!("{} structural checks; oracle residuals vanish on x^0..x^12 for Q1, Q3, Q5", report.passed.len()))
}

fn hermitian_goldens(cache: &MetricCache) -> Check {
    for m in m_values() {
        let (sol, _) = cache.solve(5, &m).map_err(|e| e.to_string())?;
        let exp = hermitian_equivalent(&sol).map_err(|e| e.to_string())?;
        for j in [1, 3, 5] {
            ensure(exp.coeff(j).is_zero(), format!("h^({j}) ≠ 0"))?;
        }
        ensure(exp.coeff(2) == goldens::h2(&m), "h^(2) differs")?;
        ensure(exp.coeff(4) == goldens::h4(&m), "h^(4) differs")?;
        ensure(exp.comm_h1_q1 == goldens::comm_h1_q1(&m), "[H1,Q1] differs")?;
        ensure(exp.comm_h1_q3.as_ref() == Some(&goldens::comm_h1_q3(&m)), "[H1,Q3] differs")?;
        ensure(exp.triple_comm_h1_q1 == goldens::triple_comm_h1_q1(&m), "[[[H1,Q1],Q1],Q1] differs")?;
    }
    Ok("h1 = h3 = h5 = 0; h2, h4 and commutator identities exact".into())
}

fn observable_goldens(cache: &MetricCache) -> Check {
    for m in m_values() {
        let (sol, _) = cache.solve(3, &m).map_err(|e| e.to_string())?;
        let pair = observables(&sol, 2).map_err(|e| e.to_string())?;
        ensure(pair.x == goldens::x_observable(&m), "X differs")?;
        ensure(pair.p == goldens::p_observable(&m), "P differs")?;
        let comm = pair.x.commutator(&pair.p);
        ensure(comm == EpsilonSeries::constant(OperatorPoly::constant(GaussianRational::i()), 2), "[X,P] ≠ i")?;
        ensure(pair.x.transform(SymmetryKind::PT) == -&pair.x, "PT(X) ≠ −X")?;
        ensure(pair.p.transform(SymmetryKind::PT) == pair.p, "PT(P) ≠ P")?;
        let exp = hermitian_equivalent(&sol).map_err(|e| e.to_string())?;
        let pair4 = observables(&sol, 4).map_err(|e| e.to_string())?;
        ensure(represent_in_observables(&exp.series, &pair4) == CubicModel::new(m).hamiltonian(4), "h(X, P) ≠ H")?;
    }
    Ok("X, P exact; [X,P] = i; PT parities; h(X, P) = H through ε⁴".into())
}

fn physical_forms(cache: &MetricCache) -> Check {
    let (sol, _) = cache.solve(3, &ratio(1, 1)).map_err(|e| e.to_string())?;
    let exp = hermitian_equivalent(&sol).map_err(|e| e.to_string())?;
    let dim = unscale(&exp.series, sol.m_value(), OperatorKind::Energy).map_err(|e| e.to_string())?;
    ensure(dim == goldens::h_dimensionful(), "dimensionful h differs")?;
    let hc = classical_limit(&dim).map_err(|e| e.to_string())?;
    ensure(hc.as_dimensionful() == goldens::classical_hamiltonian(), "H_c differs")?;
    let es = e_star(&ModelParams::unit(0.1), MassConvention::Corrected);
    ensure((es - 25.0 / 3.0).abs() < 1e-12, format!("E⋆ = {es}"))?;
    Ok(format!("h in physical units and H_c exact; E⋆(ϵ = 0.1) = {es:.6}"))
}

fn energy_formula() -> Check {
    let mut worst: f64 = 0.0;
    for m in m_values() {
        let mf = ptcubic::weyl::ratio_to_f64(&m);
        for (n, e) in first_order_energies(&m, 0.1, 6).map_err(|e| e.to_string())?.iter().enumerate() {
            let nf = n as f64;
            let f = mf * (nf + 0.5) + 0.01 * (30.0 * nf * nf + 30.0 * nf + 11.0) / (8.0 * mf.powi(4));
            worst = worst.max((e - f).abs() / f);
        }
    }
    ensure(worst < 1e-12, format!("relative deviation {worst:e}"))?;
    Ok(format!("𝓜(n+½) + ε²⟨n|h2|n⟩ matches the closed form to {worst:.1e}"))
}

fn spectrum_properties() -> Check {
    let r = spectrum_report(&ModelParams::unit(0.05), 80, 5).map_err(|e| e.to_string())?;
    ensure(r.all_real(), format!("max |Im| = {:e}", r.max_imag))?;
    ensure(r.levels().iter().all(|e| e.re > 0.0), "nonpositive level")?;
    ensure(r.deviations[0] < 2e-4, format!("ground state off by {:e}", r.deviations[0]))?;
    let e0 = spectrum_report(&ModelParams::unit(0.1), 80, 1).map_err(|e| e.to_string())?.eigenvalues[0].re;
    ensure((e0 - 0.51375).abs() < 5e-3, format!("E0(0.1) = {e0}"))?;
    Ok(format!("lowest 5 real (|Im| ≤ {:.1e}); E0(0.05) off by {:.1e}; E0(0.1) = {e0:.6}", r.max_imag, r.deviations[0]))
}

fn orbit_properties() -> Check {
    let circle = integrate_orbit(&ModelParams::unit(0.0), 0.5, 0.0, 1e-3, 6600).map_err(|e| e.to_string())?;
    ensure(circle.closes_within(1e-6), "ϵ = 0 circle does not close")?;
    for energy in [1.0, 5.0] {
        let t = integrate_orbit(&ModelParams::unit(0.1), energy, 0.0, 1e-3, 8000).map_err(|e| e.to_string())?;
        ensure(t.closes_within(1e-6) && t.max_rel_drift < 1e-6, format!("E = {energy}: closure {:?}, drift {:e}", t.closure, t.max_rel_drift))?;
    }
    Ok("circle and E = 1, 5 orbits close to 1e-6 with drift < 1e-6".into())
}

fn density_properties() -> Check {
    let grid = uniform_grid(-4.0, 4.0, 400).map_err(|e| e.to_string())?;
    let g = probability_density(&GaussianState::ground(), &ModelParams::unit(0.0), 3, &grid).map_err(|e| e.to_string())?;
    let worst = grid
        .iter()
        .zip(&g.rho)
        .map(|(x, r)| (r - (-x * x).exp() / std::f64::consts::PI.sqrt()).abs())
        .fold(0.0, f64::max);
    ensure(worst < 1e-12, format!("ϵ = 0 density off by {worst:e}"))?;
    for eps in [0.1, 0.2] {
        for psi in [GaussianState::ground(), GaussianState::first_excited()] {
            let c = probability_density(&psi, &ModelParams::unit(eps), 3, &grid).map_err(|e| e.to_string())?;
            ensure(c.rho.iter().all(|r| *r >= 0.0), "negative density")?;
            let s = adaptive_simpson(|x| c.rho_at(x), -15.0, 15.0, 1e-12).map_err(|e| e.to_string())?;
            let t = trapezoid(|x| c.rho_at(x), -15.0, 15.0, 600).map_err(|e| e.to_string())?;
            ensure((s - 1.0).abs() < 1e-6 && (t - 1.0).abs() < 1e-6, format!("ϵ = {eps}: ∫ϱ = {s}, {t}"))?;
        }
    }
    Ok("ϵ = 0 forms exact; ∫ϱ = 1 by two quadratures; ϱ ≥ 0".into())
}

/// Each check as `(name, outcome)`.
pub fn checks(cache: &MetricCache) -> Vec<(&'static str, Check)> {
    vec![
        ("metric goldens", metric_goldens(cache)),
        ("metric residuals", metric_residuals(cache)),
        ("hermitian goldens", hermitian_goldens(cache)),
        ("observables", observable_goldens(cache)),
        ("physical forms", physical_forms(cache)),
        ("energy formula", energy_formula()),
        ("spectrum", spectrum_properties()),
        ("orbits", orbit_properties()),
        ("density", density_properties()),
    ]
}

fn golden_artifacts(cfg: &RunConfig, cache: &MetricCache) -> Result<Vec<(&'static str, ArtifactKind, String)>, CliError> {
    let first_energy = RunConfig { energies: cfg.energies[..1].to_vec(), ..cfg.clone() };
    let orbit = orbit_traces(&first_energy, 0.0)?;
    Ok(vec![
        ("metric", ArtifactKind::OperatorJson, metric_json(cfg, cache)?),
        ("hamiltonian", ArtifactKind::OperatorJson, hamiltonian_json(cfg, cache)?),
        ("observables", ArtifactKind::OperatorJson, observables_json(cfg, cache)?),
        ("spectrum", ArtifactKind::NumericJson, spectrum_json(cfg)?),
        ("orbit", ArtifactKind::Csv, orbit_csv(&orbit[0].1)),
        ("density", ArtifactKind::Csv, density_csv(&density_curve(cfg, State::Ground)?)),
    ])
}

pub fn run(cfg: &RunConfig, cache: &MetricCache, golden_dir: Option<&Path>, bless: bool) -> Result<(), CliError> {
    let results = checks(cache);
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("verify: {}/{} checks passed", results.len() - failed, results.len());
    let mut mismatched = 0;
    if let Some(dir) = golden_dir {
        let store = GoldenStore::new(dir, bless);
        let fingerprint = cfg.fingerprint();
        for (command, kind, text) in golden_artifacts(cfg, cache)? {
            let outcome = store.check(command, &fingerprint, kind, &text)?;
            let path = store.path_for(command, &fingerprint, kind);
            match outcome {
                GoldenOutcome::Match => println!("GOLDEN {command}: match ({})", path.display()),
                GoldenOutcome::Created => println!("GOLDEN {command}: stored ({})", path.display()),
                GoldenOutcome::Missing => {
                    mismatched += 1;
                    println!("GOLDEN {command}: missing ({})", path.display());
                }
                GoldenOutcome::Mismatch(why) => {
                    mismatched += 1;
                    println!("GOLDEN {command}: MISMATCH, {why} ({})", path.display());
                }
            }
        }
    }
    if failed > 0 {
        return Err(CliError::VerifyFailed(failed));
    }
    if mismatched > 0 {
        return Err(CliError::GoldenMismatch(mismatched));
    }
    Ok(())
}
