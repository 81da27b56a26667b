use std::f64::consts::PI;

use num_complex::Complex64;
use ptcubic::density::quadrature::{adaptive_simpson, trapezoid};
use ptcubic::density::{
    physical_wavefunction, probability_density, q1_hat, q3_hat, uniform_grid, wavefunction_terms, DiffOperator,
    GaussianState,
};
use ptcubic::metric::{solve_metric, unit_m};
use ptcubic::params::ModelParams;

/// Fornberg weights for derivatives `0..=max_d` at `z` from `nodes`.
fn fornberg(z: f64, nodes: &[f64], max_d: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; max_d + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_d);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c
}

const H: f64 = 0.16;
const HALF: usize = 15;

/// Applies `op` to grid samples with a centered stencil; the result is shorter by `HALF` on each side.
fn fd_apply(op: &DiffOperator, x: &[f64], f: &[Complex64]) -> (Vec<f64>, Vec<Complex64>) {
    let offsets: Vec<f64> = (0..=2 * HALF).map(|k| (k as f64 - HALF as f64) * H).collect();
    let w = fornberg(0.0, &offsets, 5);
    let mut xs = Vec::new();
    let mut out = Vec::new();
    for i in HALF..x.len() - HALF {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &op.terms {
            let d: Complex64 = (0..=2 * HALF).map(|k| f[i + k - HALF] * w[k][t.d as usize]).sum();
            acc += t.coef * x[i].powi(t.x as i32) * d;
        }
        xs.push(x[i]);
        out.push(acc);
    }
    (xs, out)
}

fn max_dev(x: &[f64], f: &[Complex64], g: &GaussianState, window: f64) -> f64 {
    x.iter().zip(f).filter(|(x, _)| x.abs() <= window).map(|(&x, v)| (v - g.eval(x)).norm()).fold(0.0, f64::max)
}

fn sample(g: &GaussianState) -> (Vec<f64>, Vec<Complex64>) {
    let n = (2.0 * 14.0 / H) as usize + 1;
    let x: Vec<f64> = (0..n).map(|k| -14.0 + k as f64 * H).collect();
    let f = x.iter().map(|&x| g.eval(x)).collect();
    (x, f)
}

#[test]
fn finite_difference_oracle_for_q_operators() {
    let params = ModelParams::unit(0.2);
    let (q1, q3) = (q1_hat(&params), q3_hat(&params));
    for state in [GaussianState::ground(), GaussianState::first_excited()] {
        let (x, f) = sample(&state);
        let (x1, f1) = fd_apply(&q1, &x, &f);
        let dev1 = max_dev(&x1, &f1, &q1.apply(&state), 4.0);
        assert!(dev1 < 1e-8, "Q̂₁ deviation {dev1:e}");
        let (x3, f3) = fd_apply(&q3, &x, &f);
        let dev3 = max_dev(&x3, &f3, &q3.apply(&state), 4.0);
        assert!(dev3 < 1e-8, "Q̂₃ deviation {dev3:e}");
        // powers: one stencil application on samples of the previous symbolic stage
        for n in 1..3 {
            let prev = q1.apply_n(&state, n);
            let (xs, fs) = sample(&prev);
            let (xn, fnext) = fd_apply(&q1, &xs, &fs);
            let scale = max_dev(&xn, &vec![Complex64::default(); xn.len()], &q1.apply(&prev), 4.0);
            let dev = max_dev(&xn, &fnext, &q1.apply(&prev), 4.0);
            assert!(dev < 1e-8 * scale.max(1.0), "Q̂₁^{} deviation {dev:e} (scale {scale:e})", n + 1);
        }
    }
}

#[test]
fn finite_difference_oracle_for_full_wavefunction() {
    let params = ModelParams::unit(0.2);
    let q1 = q1_hat(&params);
    let q3 = q3_hat(&params);
    let state = GaussianState::ground();
    let (x, f) = sample(&state);
    let (xa, a) = fd_apply(&q1, &x, &f);
    let (xb, b) = fd_apply(&q1, &xa, &a);
    let (xc, c) = fd_apply(&q1, &xb, &b);
    let (_, d) = fd_apply(&q3, &x, &f);
    let eps = params.epsilon;
    let psi = physical_wavefunction(&state, &params, 3).unwrap();
    let mut worst: f64 = 0.0;
    for (k, &xv) in xc.iter().enumerate() {
        if xv.abs() > 4.0 {
            continue;
        }
        let i = k + 3 * HALF;
        let ia = k + 2 * HALF;
        let ib = k + HALF;
        let fd = f[i] - 0.5 * eps * a[ia] + 0.125 * eps * eps * b[ib]
            + eps.powi(3) * (-0.5 * d[ia] - c[k] / 48.0);
        worst = worst.max((fd - psi.eval(xv)).norm());
    }
    assert!(worst < 1e-8, "max deviation {worst:e}");
}

#[test]
fn operators_match_the_metric_generators() {
    let sol = solve_metric(3, &unit_m()).unwrap();
    let params = ModelParams::unit(0.1);
    let from_q1 = DiffOperator::from_operator(sol.q(1).unwrap(), 1.0);
    let from_q3 = DiffOperator::from_operator(sol.q(3).unwrap(), 1.0);
    for state in [GaussianState::ground(), GaussianState::first_excited()] {
        for (a, b) in [(&from_q1, q1_hat(&params)), (&from_q3, q3_hat(&params))] {
            let (u, v) = (a.apply(&state), b.apply(&state));
            let n = u.poly().len().max(v.poly().len());
            for k in 0..n {
                let cu = u.poly().get(k).copied().unwrap_or_default();
                let cv = v.poly().get(k).copied().unwrap_or_default();
                assert!((cu - cv).norm() < 1e-12, "x^{k}: {cu} vs {cv}");
            }
        }
    }
}

#[test]
fn unperturbed_densities_are_analytic() {
    let grid = uniform_grid(-4.0, 4.0, 400).unwrap();
    let p = ModelParams::unit(0.0);
    let g = probability_density(&GaussianState::ground(), &p, 3, &grid).unwrap();
    let e = probability_density(&GaussianState::first_excited(), &p, 3, &grid).unwrap();
    for (k, &x) in grid.iter().enumerate() {
        let a = (-x * x).exp() / PI.sqrt();
        assert!((g.rho[k] - a).abs() < 1e-12);
        assert!((e.rho[k] - 2.0 * x * x * a).abs() < 1e-12);
    }
    assert_eq!(g.peaks().len(), 1);
    assert_eq!(e.peaks().len(), 2);
}

#[test]
fn densities_are_normalized_and_nonnegative() {
    let grid = uniform_grid(-4.0, 4.0, 400).unwrap();
    for eps in [0.1, 0.2] {
        for state in [GaussianState::ground(), GaussianState::first_excited()] {
            let curve = probability_density(&state, &ModelParams::unit(eps), 3, &grid).unwrap();
            assert!(curve.rho.iter().all(|r| *r >= 0.0));
            let rho = |x: f64| curve.rho_at(x);
            let s = adaptive_simpson(rho, -15.0, 15.0, 1e-12).unwrap();
            let t = trapezoid(rho, -15.0, 15.0, 600).unwrap();
            assert!((s - 1.0).abs() < 1e-6 && (t - 1.0).abs() < 1e-6, "ε={eps}: {s} {t}");
            // analytic norm against quadrature of |Ψ|²
            let raw = adaptive_simpson(|x| curve.psi.eval(x).norm_sqr(), -15.0, 15.0, 1e-13).unwrap();
            assert!((raw - curve.norm).abs() < 1e-8 * curve.norm);
        }
    }
}

#[test]
fn perturbation_adds_odd_imaginary_then_even_real_parts() {
    let params = ModelParams::unit(0.2);
    let [_, l1, l2, l3] = wavefunction_terms(&GaussianState::ground(), &params);
    for (k, c) in l1.poly().iter().enumerate() {
        assert!(c.re == 0.0 && (k % 2 == 1 || c.im == 0.0));
    }
    for (k, c) in l2.poly().iter().enumerate() {
        assert!(c.im == 0.0 && (k % 2 == 0 || c.re == 0.0));
    }
    for (k, c) in l3.poly().iter().enumerate() {
        assert!(c.re == 0.0 && (k % 2 == 1 || c.im == 0.0));
    }
}

#[test]
fn density_is_reflection_symmetric_for_pt_symmetric_states() {
    // Ψ(−x) = Ψ(x)* when ψ is even and real, so ϱ is even at every order
    for eps in [0.1, 0.2, 0.25] {
        let curve = probability_density(&GaussianState::ground(), &ModelParams::unit(eps), 3, &[-1.0, 1.0]).unwrap();
        assert!((curve.rho[0] - curve.rho[1]).abs() < 1e-15);
    }
}

#[test]
fn ground_density_is_asymmetric_at_strong_coupling() {
    let curve = probability_density(&GaussianState::ground(), &ModelParams::unit(0.2), 3, &[-1.0, 1.0]).unwrap();
    let gap = (curve.rho[1] - curve.rho[0]).abs();
    assert!(gap > 1e-6, "ϱ(1) − ϱ(−1) = {gap:e}");
}

#[test]
fn wavefunction_is_linear() {
    let params = ModelParams::unit(0.15);
    let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(2.0, 0.5));
    let g = GaussianState::ground();
    let e = GaussianState::first_excited();
    let mixed = g.scale(a).add(&e.scale(b)).unwrap();
    let lhs = physical_wavefunction(&mixed, &params, 3).unwrap();
    let rhs = physical_wavefunction(&g, &params, 3)
        .unwrap()
        .scale(a)
        .add(&physical_wavefunction(&e, &params, 3).unwrap().scale(b))
        .unwrap();
    for x in [-2.0, -0.5, 0.0, 1.3, 3.0] {
        assert!((lhs.eval(x) - rhs.eval(x)).norm() < 1e-12);
    }
}
