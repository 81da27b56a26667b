//! The classical Hamiltonian `H_c = lim_{ħ→0} h`, the position-dependent mass
//! picture, and phase-space orbits.

mod orbit;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use orbit::{integrate_orbit, integrate_orbit_with, OrbitSample, OrbitTrace, DEFAULT_DRIFT_BOUND};

use crate::hermitian::{hermitian_equivalent, unscale, DimExponents, DimensionfulOperator, HermitianError, OperatorKind, UnscaleError};
use crate::metric::{solve_metric, unit_m, MetricError};
use crate::params::ModelParams;
use crate::weyl::{ratio_to_f64, GaussianRational};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassicalError {
    #[error("term x^{x} p^{p} at ϵ^{eps} carries ħ^{hbar}; the ħ → 0 limit does not exist")]
    NegativeHbar { eps: i32, x: u32, p: u32, hbar: i32 },
    #[error("ħ-free term x^{x} p^{p} at ϵ^{eps} has non-real coefficient {coef}")]
    ComplexCoefficient { eps: i32, x: u32, p: u32, coef: Box<GaussianRational> },
    #[error("start point outside orbit: no real p with H_c(x0 = {x0}, p) = {energy}")]
    StartOutsideOrbit { x0: f64, energy: f64 },
    #[error("energy must be positive and finite, got {0}")]
    Energy(f64),
    #[error("time step must be positive and finite, got {0}")]
    Step(f64),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Unscale(#[from] UnscaleError),
}

/// One term `coef · m^m μ^mu ϵ^eps · x_c^x p_c^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalTerm {
    pub m: i32,
    pub mu: i32,
    pub eps: i32,
    pub x: u32,
    pub p: u32,
    pub coef: BigRational,
}

/// A real commuting polynomial in `(x_c, p_c)` with coefficients symbolic in `m, μ, ϵ`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClassicalHamiltonian {
    terms: BTreeMap<(i32, u32, u32), (i32, i32, BigRational)>,
    /// Highest `ϵ` power kept.
    pub truncation: i32,
}

impl ClassicalHamiltonian {
    pub fn terms(&self) -> impl Iterator<Item = ClassicalTerm> + '_ {
        self.terms.iter().map(|(&(eps, x, p), (m, mu, c))| ClassicalTerm {
            m: *m,
            mu: *mu,
            eps,
            x,
            p,
            coef: c.clone(),
        })
    }

    /// Coefficient of `x^a p^b ϵ^j` with its `(m, μ)` exponents.
    pub fn coeff(&self, eps: i32, x: u32, p: u32) -> Option<(i32, i32, &BigRational)> {
        self.terms.get(&(eps, x, p)).map(|(m, mu, c)| (*m, *mu, c))
    }

    /// Keeps terms up to `ϵ^order`.
    pub fn truncate(&self, order: i32) -> Self {
        ClassicalHamiltonian {
            terms: self.terms.iter().filter(|((e, _, _), _)| *e <= order).map(|(k, v)| (*k, v.clone())).collect(),
            truncation: order.min(self.truncation),
        }
    }

    /// Every power of `p_c` is even.
    pub fn is_even_in_p(&self) -> bool {
        self.terms.keys().all(|&(_, _, p)| p % 2 == 0)
    }

    /// `H_c(−x, −p) = H_c(x, p)` as a polynomial identity.
    pub fn is_reflection_symmetric(&self) -> bool {
        self.terms.keys().all(|&(_, x, p)| (x + p) % 2 == 0)
    }

    pub fn as_dimensionful(&self) -> DimensionfulOperator {
        let mut out = DimensionfulOperator::new();
        for t in self.terms() {
            out.add_term(DimExponents::new(t.m, t.mu, t.eps, 0), t.x, t.p, &GaussianRational::real(t.coef.clone()))
                .expect("keys are unique");
        }
        out
    }

    /// Coefficients evaluated at the given physical parameters.
    pub fn numeric(&self, params: &ModelParams) -> NumericHamiltonian {
        let mut terms = Vec::new();
        for t in self.terms() {
            let e = DimExponents::new(t.m, t.mu, t.eps, 0).evaluate(params);
            terms.push((t.x, t.p, ratio_to_f64(&t.coef) * e));
        }
        NumericHamiltonian { terms }
    }
}

/// `lim_{ħ→0}` of an operator in physical units: `ħ`-carrying terms are dropped and
/// the normal-ordered monomials become commuting products.
pub fn classical_limit(h: &DimensionfulOperator) -> Result<ClassicalHamiltonian, ClassicalError> {
    let mut out = ClassicalHamiltonian::default();
    for t in h.terms() {
        if t.exps.hbar < 0 {
            return Err(ClassicalError::NegativeHbar {
                eps: t.exps.eps,
                x: t.x,
                p: t.p,
                hbar: t.exps.hbar,
            });
        }
    }
    for t in h.terms() {
        out.truncation = out.truncation.max(t.exps.eps);
        if t.exps.hbar > 0 {
            continue;
        }
        if !t.coef.is_real() {
            return Err(ClassicalError::ComplexCoefficient {
                eps: t.exps.eps,
                x: t.x,
                p: t.p,
                coef: Box::new(t.coef),
            });
        }
        out.terms.insert((t.exps.eps, t.x, t.p), (t.exps.m, t.exps.mu, t.coef.re().clone()));
    }
    Ok(out)
}

/// `H_c` through `ϵ^order` (at most 4) via metric, `h`, unscaling and the `ħ → 0` limit.
pub fn classical_hamiltonian(order: i32) -> Result<ClassicalHamiltonian, ClassicalError> {
    let sol = solve_metric(3, &unit_m())?;
    let h = hermitian_equivalent(&sol)?;
    let dim = unscale(&h.series.truncate(4), &unit_m(), OperatorKind::Energy)?;
    Ok(classical_limit(&dim)?.truncate(order.min(4)))
}

/// A classical Hamiltonian with numeric coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericHamiltonian {
    /// `(x power, p power, coefficient)`.
    pub terms: Vec<(u32, u32, f64)>,
}

fn ipow(v: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..n {
        acc *= v;
    }
    acc
}

impl NumericHamiltonian {
    pub fn value(&self, x: f64, p: f64) -> f64 {
        self.terms.iter().map(|&(a, b, c)| c * ipow(x, a) * ipow(p, b)).sum()
    }

    pub fn d_dx(&self, x: f64, p: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.0 > 0)
            .map(|&(a, b, c)| c * a as f64 * ipow(x, a - 1) * ipow(p, b))
            .sum()
    }

    pub fn d_dp(&self, x: f64, p: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.1 > 0)
            .map(|&(a, b, c)| c * b as f64 * ipow(x, a) * ipow(p, b - 1))
            .sum()
    }
}

/// Which printing of the position-dependent mass to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MassConvention {
    /// `M = m/(1 + 6μ⁻⁴ϵ²x²)`, `E⋆ = μ⁶/(12ϵ²)`.
    #[default]
    Corrected,
    /// `M = m/(1 + 3μ⁻⁴ϵ²x²)`, `E⋆ = μ⁶/(6ϵ²)`, kept only to document the discrepancy.
    PreErratum,
}

impl MassConvention {
    /// `k` in `M = m/(1 + kμ⁻⁴ϵ²x²)`.
    pub fn factor(self) -> i64 {
        match self {
            MassConvention::Corrected => 6,
            MassConvention::PreErratum => 3,
        }
    }

    /// `c` in `E⋆ = μ⁶/(cϵ²)`.
    fn bound_denominator(self) -> f64 {
        (2 * self.factor()) as f64
    }
}

/// `M(x_c)`.
pub fn mass_profile(params: &ModelParams, x: f64, convention: MassConvention) -> f64 {
    let mu2 = params.mu * params.mu;
    params.m / (1.0 + convention.factor() as f64 * params.epsilon * params.epsilon * x * x / (mu2 * mu2))
}

/// First-order term of `p²/2M(x)`: `(k/2)·m⁻¹μ⁻⁴ϵ² x²p²`, as `(exponents, coefficient)`.
pub fn mass_profile_x2p2(convention: MassConvention) -> (DimExponents, BigRational) {
    (
        DimExponents::new(-1, -4, 2, 0),
        BigRational::new(BigInt::from(convention.factor()), BigInt::from(2)),
    )
}

/// Energy scale below which the `O(ϵ²)` picture holds. Infinite when `ϵ = 0`.
pub fn e_star(params: &ModelParams, convention: MassConvention) -> f64 {
    if params.epsilon == 0.0 {
        return f64::INFINITY;
    }
    let mu6 = ipow(params.mu, 6);
    mu6 / (convention.bound_denominator() * params.epsilon * params.epsilon)
}

/// `p_c²/2m + (μ²/2 + 6ϵ²E/μ⁴)x_c² − (3ϵ²/2μ²)x_c⁴ − E`.
pub fn implicit_orbit_residual(params: &ModelParams, energy: f64, x: f64, p: f64) -> f64 {
    let (m, mu2, e2) = (params.m, params.mu * params.mu, params.epsilon * params.epsilon);
    p * p / (2.0 * m) + (mu2 / 2.0 + 6.0 * e2 * energy / (mu2 * mu2)) * x * x - 1.5 * e2 / mu2 * ipow(x, 4) - energy
}

/// The `p_c ≥ 0` branch of the approximate `O(ϵ²)` orbit at `x_c`, if real.
pub fn implicit_orbit_momentum(params: &ModelParams, energy: f64, x: f64) -> Option<f64> {
    let p2 = -2.0 * params.m * implicit_orbit_residual(params, energy, x, 0.0);
    (p2 >= 0.0).then(|| libm::sqrt(p2))
}

/// `{±p_c}` on the approximate `O(ϵ²)` orbit of energy `E`; empty outside the turning points.
pub fn implicit_orbit(params: &ModelParams, energy: f64, x: f64) -> Vec<f64> {
    match implicit_orbit_momentum(params, energy, x) {
        None => Vec::new(),
        Some(0.0) => alloc::vec![0.0],
        Some(p) => alloc::vec![p, -p],
    }
}

/// Smallest positive turning point `x_c > 0` of [`implicit_orbit`].
pub fn turning_point(params: &ModelParams, energy: f64) -> Option<f64> {
    let (mu2, e2) = (params.mu * params.mu, params.epsilon * params.epsilon);
    let a = 1.5 * e2 / mu2;
    let b = mu2 / 2.0 + 6.0 * e2 * energy / (mu2 * mu2);
    // a y² − b y + E = 0 with y = x², smaller root
    let y = if a == 0.0 {
        energy / b
    } else {
        let disc = b * b - 4.0 * a * energy;
        if disc < 0.0 {
            return None;
        }
        2.0 * energy / (b + libm::sqrt(disc))
    };
    Some(libm::sqrt(y))
}

/// The `p_c ≥ 0` branch of the exact level set `H_c = E` of the `O(ϵ²)` Hamiltonian
/// `p²/2M(x) + μ²x²/2 + (3ϵ²/2μ²)x⁴` (corrected mass, expanded to first order).
pub fn second_order_level_set(params: &ModelParams, energy: f64, x: f64) -> Option<f64> {
    let (m, mu2, e2) = (params.m, params.mu * params.mu, params.epsilon * params.epsilon);
    let num = energy - mu2 * x * x / 2.0 - 1.5 * e2 / mu2 * ipow(x, 4);
    let den = 1.0 + 6.0 * e2 * x * x / (mu2 * mu2);
    let p2 = 2.0 * m * num / den;
    (p2 >= 0.0).then(|| libm::sqrt(p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goldens;

    #[test]
    fn limit_reproduces_closed_form() {
        let hc = classical_hamiltonian(4).unwrap();
        assert_eq!(hc.as_dimensionful(), goldens::classical_hamiltonian());
        assert!(hc.is_even_in_p());
        assert!(hc.is_reflection_symmetric());
    }

    #[test]
    fn unperturbed_limit_is_oscillator() {
        let hc = classical_hamiltonian(4).unwrap().truncate(0);
        let v = hc.numeric(&ModelParams::unit(0.0));
        assert_eq!(v.value(1.0, 0.0), 0.5);
        assert_eq!(v.value(0.0, 2.0), 2.0);
        let full = classical_hamiltonian(4).unwrap().numeric(&ModelParams::unit(0.0));
        assert_eq!(full.value(0.3, 0.7), 0.5 * (0.09 + 0.49));
    }

    #[test]
    fn hbar_terms_dropped_and_negative_powers_rejected() {
        let mut d = DimensionfulOperator::new();
        d.add_term(DimExponents::new(-1, 0, 0, 0), 0, 2, &GaussianRational::ratio(1, 2)).unwrap();
        d.add_term(DimExponents::new(-1, 0, 0, 2), 0, 0, &GaussianRational::ratio(7, 1)).unwrap();
        let hc = classical_limit(&d).unwrap();
        assert_eq!(hc.terms().count(), 1);
        d.add_term(DimExponents::new(0, 0, 1, -1), 1, 0, &GaussianRational::one()).unwrap();
        assert!(matches!(classical_limit(&d), Err(ClassicalError::NegativeHbar { hbar: -1, .. })));
        let mut c = DimensionfulOperator::new();
        c.add_term(DimExponents::new(0, 0, 1, 0), 3, 0, &GaussianRational::i()).unwrap();
        assert!(matches!(classical_limit(&c), Err(ClassicalError::ComplexCoefficient { .. })));
    }

    #[test]
    fn mass_profile_values() {
        let p = ModelParams::unit(0.1);
        assert_eq!(mass_profile(&p, 0.0, MassConvention::Corrected), 1.0);
        assert!((mass_profile(&p, 1.0, MassConvention::Corrected) - 1.0 / 1.06).abs() < 1e-15);
        assert!((mass_profile(&p, 1.0, MassConvention::PreErratum) - 1.0 / 1.03).abs() < 1e-15);
        let free = ModelParams::unit(0.0);
        assert_eq!(mass_profile(&free, 3.0, MassConvention::Corrected), 1.0);
    }

    #[test]
    fn mass_profile_matches_x2p2_coefficient() {
        let hc = classical_hamiltonian(2).unwrap();
        let (m, mu, c) = hc.coeff(2, 2, 2).unwrap();
        let (e, k) = mass_profile_x2p2(MassConvention::Corrected);
        assert_eq!((m, mu), (e.m, e.mu));
        assert_eq!(c, &k);
        let (_, k_old) = mass_profile_x2p2(MassConvention::PreErratum);
        assert_ne!(c, &k_old);
    }

    #[test]
    fn energy_bound() {
        let p = ModelParams::unit(0.1);
        assert!((e_star(&p, MassConvention::Corrected) - 25.0 / 3.0).abs() < 1e-12);
        assert!((e_star(&p, MassConvention::PreErratum) - 50.0 / 3.0).abs() < 1e-12);
        let q = ModelParams::new(1.0, 2.0, 1.0, 1.0, 1.0).unwrap();
        assert!((e_star(&q, MassConvention::Corrected) - 16.0 / 3.0).abs() < 1e-12);
        assert_eq!(e_star(&ModelParams::unit(0.0), MassConvention::Corrected), f64::INFINITY);
    }

    #[test]
    fn implicit_orbit_examples() {
        let free = ModelParams::unit(0.0);
        let ps = implicit_orbit(&free, 0.5, 0.0);
        assert_eq!(ps.len(), 2);
        assert!((ps[0] - 1.0).abs() < 1e-15 && (ps[1] + 1.0).abs() < 1e-15);
        let p = ModelParams::unit(0.1);
        let xt = turning_point(&p, 1.0).unwrap();
        // bisection on 0.56x² − 0.015x⁴ = 1
        let f = |x: f64| 0.56 * x * x - 0.015 * x.powi(4) - 1.0;
        let (mut lo, mut hi) = (1.0, 2.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((xt - lo).abs() < 1e-12);
        assert!((xt - 1.37125).abs() < 1e-4);
        assert!(implicit_orbit(&p, 1.0, xt + 1e-6).is_empty());
        assert!(implicit_orbit(&p, 1.0, 1.6).is_empty());
        assert_eq!(implicit_orbit(&p, 1.0, 0.5).len(), 2);
    }
}
