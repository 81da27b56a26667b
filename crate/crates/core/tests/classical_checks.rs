use std::f64::consts::PI;

use ptcubic::classical::{
    classical_hamiltonian, e_star, implicit_orbit, integrate_orbit, integrate_orbit_with, second_order_level_set,
    turning_point, ClassicalError, MassConvention, DEFAULT_DRIFT_BOUND,
};
use ptcubic::params::ModelParams;

fn steps_for(period: f64, dt: f64) -> usize {
    (1.05 * period / dt) as usize
}

#[test]
fn harmonic_circle_closes_after_two_pi() {
    let t = integrate_orbit(&ModelParams::unit(0.0), 0.5, 0.0, 1e-3, steps_for(2.0 * PI, 1e-3)).unwrap();
    assert!((t.p0 - 1.0).abs() < 1e-14);
    assert!((t.period.unwrap() - 2.0 * PI).abs() < 1e-9);
    assert!(t.closes_within(1e-6), "closure {:?}", t.closure);
    for s in &t.samples {
        assert!((s.x * s.x + s.p * s.p - 1.0).abs() < 1e-12);
    }
}

#[test]
fn orbits_below_the_escape_barrier_close_and_conserve_energy() {
    let params = ModelParams::unit(0.1);
    for energy in [1.0, 5.0] {
        let t = integrate_orbit(&params, energy, 0.0, 1e-3, 8000).unwrap();
        assert!(t.closes_within(1e-6), "E={energy}: closure {:?}", t.closure);
        assert!(t.max_rel_drift < 1e-6, "E={energy}: drift {:e}", t.max_rel_drift);
        assert!(!t.drift_exceeded);
    }
}

#[test]
fn periods_shrink_with_energy() {
    let params = ModelParams::unit(0.1);
    let p1 = integrate_orbit(&params, 1.0, 0.0, 1e-3, 8000).unwrap().period.unwrap();
    let p5 = integrate_orbit(&params, 5.0, 0.0, 1e-3, 8000).unwrap().period.unwrap();
    assert!(p5 < p1 && p1 < 2.0 * PI);
}

#[test]
fn orbit_above_the_barrier_escapes_and_is_flagged() {
    let t = integrate_orbit(&ModelParams::unit(0.1), 10.0, 0.0, 1e-3, 8000).unwrap();
    assert!(t.drift_exceeded);
    assert!(t.period.is_none() || !t.closes_within(1e-6));
}

#[test]
fn truncated_flow_tracks_exact_second_order_level_set() {
    let params = ModelParams::unit(0.1);
    let h = classical_hamiltonian(4).unwrap().truncate(2).numeric(&params);
    let t = integrate_orbit_with(&h, 1.0, 0.0, 1e-3, 6500, DEFAULT_DRIFT_BOUND).unwrap();
    assert!(t.closes_within(1e-6));
    let mut worst: f64 = 0.0;
    for s in &t.samples {
        // |p| is ill-conditioned at the turning points, so compare p²
        let q = second_order_level_set(&params, 1.0, s.x).unwrap_or(0.0);
        worst = worst.max((s.p * s.p - q * q).abs());
    }
    assert!(worst < 1e-8, "max |p² − p_set²| = {worst:e}");
}

#[test]
fn approximate_orbit_differs_from_level_set_at_fourth_order() {
    let gap = |eps: f64| {
        let params = ModelParams::unit(eps);
        (0..=100)
            .map(|k| 1.2 * k as f64 / 100.0)
            .map(|x| {
                let a = implicit_orbit(&params, 1.0, x)[0];
                let b = second_order_level_set(&params, 1.0, x).unwrap();
                (a * a - b * b).abs()
            })
            .fold(0.0, f64::max)
    };
    let ratio = gap(0.1) / gap(0.05);
    assert!((14.0..18.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn step_halving_is_fourth_order() {
    let params = ModelParams::unit(0.1);
    let drift = |dt: f64| integrate_orbit(&params, 5.0, 0.0, dt, steps_for(5.7, dt)).unwrap().max_rel_drift;
    let ratio = drift(0.04) / drift(0.02);
    assert!((12.0..20.0).contains(&ratio), "ratio {ratio}");
}

#[test]
fn half_period_point_is_the_reflected_start() {
    let t = integrate_orbit(&ModelParams::unit(0.1), 5.0, 0.0, 1e-3, 8000).unwrap();
    let half = t.period.unwrap() / 2.0;
    let s = t.samples.iter().min_by(|a, b| (a.t - half).abs().total_cmp(&(b.t - half).abs())).unwrap();
    assert!(s.x.abs() < 1e-2 && (s.p + t.p0).abs() < 1e-2);
    let hc = classical_hamiltonian(4).unwrap();
    assert!(hc.is_reflection_symmetric());
    let h = hc.numeric(&ModelParams::unit(0.1));
    for s in &t.samples {
        assert_eq!(h.value(s.x, s.p), h.value(-s.x, -s.p));
    }
}

#[test]
fn start_outside_orbit_is_rejected() {
    let err = integrate_orbit(&ModelParams::unit(0.1), 1.0, 3.0, 1e-3, 10).unwrap_err();
    assert!(matches!(err, ClassicalError::StartOutsideOrbit { .. }));
    assert!(matches!(integrate_orbit(&ModelParams::unit(0.1), -1.0, 0.0, 1e-3, 10), Err(ClassicalError::Energy(_))));
    assert!(matches!(integrate_orbit(&ModelParams::unit(0.1), 1.0, 0.0, 0.0, 10), Err(ClassicalError::Step(_))));
}

#[test]
fn energy_bound_and_turning_point() {
    let p = ModelParams::unit(0.1);
    assert!((e_star(&p, MassConvention::Corrected) - 25.0 / 3.0).abs() < 1e-12);
    assert!((e_star(&p, MassConvention::PreErratum) - 50.0 / 3.0).abs() < 1e-12);
    let xt = turning_point(&p, 1.0).unwrap();
    assert!((0.56 * xt * xt - 0.015 * xt.powi(4) - 1.0).abs() < 1e-12);
    assert_eq!(implicit_orbit(&p, 1.0, xt + 1e-6), Vec::<f64>::new());
}
