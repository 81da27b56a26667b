use alloc::vec::Vec;

use super::{classical_hamiltonian, ClassicalError, NumericHamiltonian};
use crate::params::ModelParams;

/// Relative energy drift tolerated before a trace is flagged.
pub const DEFAULT_DRIFT_BOUND: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitSample {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    /// `H_c(x, p)`.
    pub h: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTrace {
    pub samples: Vec<OrbitSample>,
    pub energy: f64,
    pub dt: f64,
    pub x0: f64,
    pub p0: f64,
    /// `max |H_c − E| / E` over the samples.
    pub max_rel_drift: f64,
    pub drift_bound: f64,
    pub drift_exceeded: bool,
    /// Time of the first return to `x = x0` moving in the starting direction.
    pub period: Option<f64>,
    /// Phase-space distance from the start at that return.
    pub closure: Option<f64>,
}

impl OrbitTrace {
    pub fn closes_within(&self, tol: f64) -> bool {
        self.closure.is_some_and(|c| c < tol)
    }
}

/// Smallest `p > 0` with `H(x0, p) = E`.
fn initial_momentum(h: &NumericHamiltonian, x0: f64, energy: f64) -> Option<f64> {
    let f = |p: f64| h.value(x0, p) - energy;
    if f(0.0) > 0.0 {
        return None;
    }
    let mut hi = 1.0;
    let mut tries = 0;
    while f(hi) < 0.0 {
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return None;
        }
    }
    // first sign change on a fine scan, then bisection
    let n = 4096;
    let mut lo = 0.0;
    for k in 1..=n {
        let p = hi * k as f64 / n as f64;
        if f(p) >= 0.0 {
            hi = p;
            break;
        }
        lo = p;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn rhs(h: &NumericHamiltonian, x: f64, p: f64) -> (f64, f64) {
    (h.d_dp(x, p), -h.d_dx(x, p))
}

fn rk4(h: &NumericHamiltonian, x: f64, p: f64, dt: f64) -> (f64, f64) {
    let (k1x, k1p) = rhs(h, x, p);
    let (k2x, k2p) = rhs(h, x + 0.5 * dt * k1x, p + 0.5 * dt * k1p);
    let (k3x, k3p) = rhs(h, x + 0.5 * dt * k2x, p + 0.5 * dt * k2p);
    let (k4x, k4p) = rhs(h, x + dt * k3x, p + dt * k3p);
    (
        x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

/// Integrates the full `H_c` (through `ϵ⁴`) from `(x0, p0 > 0)` on the shell `H_c = E`.
pub fn integrate_orbit(params: &ModelParams, energy: f64, x0: f64, dt: f64, steps: usize) -> Result<OrbitTrace, ClassicalError> {
    let h = classical_hamiltonian(4)?.numeric(params);
    integrate_orbit_with(&h, energy, x0, dt, steps, DEFAULT_DRIFT_BOUND)
}

/// Fixed-step RK4 for `ẋ = ∂H/∂p`, `ṗ = −∂H/∂x`.
pub fn integrate_orbit_with(
    h: &NumericHamiltonian,
    energy: f64,
    x0: f64,
    dt: f64,
    steps: usize,
    drift_bound: f64,
) -> Result<OrbitTrace, ClassicalError> {
    if !(energy > 0.0 && energy.is_finite()) {
        return Err(ClassicalError::Energy(energy));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ClassicalError::Step(dt));
    }
    let p0 = initial_momentum(h, x0, energy).ok_or(ClassicalError::StartOutsideOrbit { x0, energy })?;
    let forward = h.d_dp(x0, p0) >= 0.0;
    let mut samples = Vec::with_capacity(steps + 1);
    let (mut x, mut p) = (x0, p0);
    samples.push(OrbitSample { t: 0.0, x, p, h: h.value(x, p) });
    let mut period = None;
    let mut closure = None;
    let mut left = false;
    for k in 1..=steps {
        let (nx, np) = rk4(h, x, p, dt);
        let before = (x - x0) * if forward { 1.0 } else { -1.0 };
        let after = (nx - x0) * if forward { 1.0 } else { -1.0 };
        if before < 0.0 {
            left = true;
        }
        if period.is_none() && left && before < 0.0 && after >= 0.0 {
            // Newton on the partial step τ so that x(τ) = x0
            let mut tau = dt * (x0 - x) / (nx - x);
            for _ in 0..8 {
                let (tx, tp) = rk4(h, x, p, tau);
                let (vx, _) = rhs(h, tx, tp);
                if vx == 0.0 {
                    break;
                }
                let delta = (tx - x0) / vx;
                tau -= delta;
                if delta.abs() < 1e-16 * dt {
                    break;
                }
            }
            let (cx, cp) = rk4(h, x, p, tau);
            period = Some((k - 1) as f64 * dt + tau);
            closure = Some(libm::hypot(cx - x0, cp - p0));
        }
        x = nx;
        p = np;
        samples.push(OrbitSample { t: k as f64 * dt, x, p, h: h.value(x, p) });
    }
    let max_rel_drift = samples.iter().map(|s| (s.h - energy).abs() / energy).fold(0.0, f64::max);
    Ok(OrbitTrace {
        samples,
        energy,
        dt,
        x0,
        p0,
        max_rel_drift,
        drift_bound,
        drift_exceeded: max_rel_drift > drift_bound,
        period,
        closure,
    })
}
