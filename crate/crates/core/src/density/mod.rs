//! The physical wave function `Ψ = e^{−Q/2}ψ` in the position representation and
//! the conserved probability density `ϱ = |Ψ|²/N`.
//!
//! States are restricted to `q(x)·e^{−αx²}` with `q` a complex polynomial, a
//! class closed under `d/dx` and multiplication by `x`, so every operator here
//! acts exactly.

pub mod quadrature;

use alloc::vec::Vec;
use core::fmt;

use libm::{exp, sqrt};
use num_complex::Complex64;

use crate::params::ModelParams;
use crate::weyl::OperatorPoly;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DensityError {
    #[error("Gaussian width must be positive and finite, got {0}")]
    Alpha(f64),
    #[error("expansion order must be at most 3, got {0}")]
    Order(u32),
    #[error("states have different widths ({0} vs {1})")]
    AlphaMismatch(f64, f64),
    #[error("grid must have at least two finite, strictly increasing points")]
    Grid,
    #[error("state has zero norm")]
    ZeroNorm,
}

/// `ψ(x) = q(x)·e^{−αx²}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    poly: Vec<Complex64>,
    alpha: f64,
}

impl GaussianState {
    /// `poly[n]` is the coefficient of `xⁿ`.
    pub fn new(poly: Vec<Complex64>, alpha: f64) -> Result<Self, DensityError> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(DensityError::Alpha(alpha));
        }
        let mut s = Self { poly, alpha };
        s.trim();
        Ok(s)
    }

    /// `e^{−x²/2}`.
    pub fn ground() -> Self {
        Self { poly: alloc::vec![Complex64::new(1.0, 0.0)], alpha: 0.5 }
    }

    /// `x·e^{−x²/2}`.
    pub fn first_excited() -> Self {
        Self {
            poly: alloc::vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            alpha: 0.5,
        }
    }

    fn trim(&mut self) {
        while self.poly.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            self.poly.pop();
        }
    }

    pub fn poly(&self) -> &[Complex64] {
        &self.poly
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_empty()
    }

    pub fn poly_at(&self, x: f64) -> Complex64 {
        self.poly.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.poly_at(x) * exp(-self.alpha * x * x)
    }

    /// `(q' − 2αxq)·e^{−αx²}`.
    pub fn derivative(&self) -> Self {
        let n = self.poly.len() + 1;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.poly.iter().enumerate() {
            if k > 0 {
                out[k - 1] += c * k as f64;
            }
            out[k + 1] -= c * (2.0 * self.alpha);
        }
        let mut s = Self { poly: out, alpha: self.alpha };
        s.trim();
        s
    }

    /// Multiplies by `c·x^k`.
    pub fn mul_monomial(&self, c: Complex64, k: u32) -> Self {
        if c == Complex64::new(0.0, 0.0) || self.is_zero() {
            return Self { poly: Vec::new(), alpha: self.alpha };
        }
        let mut poly = alloc::vec![Complex64::new(0.0, 0.0); k as usize];
        poly.extend(self.poly.iter().map(|a| a * c));
        Self { poly, alpha: self.alpha }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.mul_monomial(c, 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, DensityError> {
        if self.alpha != other.alpha {
            return Err(DensityError::AlphaMismatch(self.alpha, other.alpha));
        }
        let n = self.poly.len().max(other.poly.len());
        let zero = Complex64::new(0.0, 0.0);
        let poly = (0..n)
            .map(|k| self.poly.get(k).copied().unwrap_or(zero) + other.poly.get(k).copied().unwrap_or(zero))
            .collect();
        let mut s = Self { poly, alpha: self.alpha };
        s.trim();
        Ok(s)
    }

    /// `∫|ψ|² dx`, from Gaussian moments.
    pub fn norm_sq(&self) -> f64 {
        let beta = 2.0 * self.alpha;
        let mut total = 0.0;
        for (j, a) in self.poly.iter().enumerate() {
            for (k, b) in self.poly.iter().enumerate() {
                if (j + k) % 2 == 0 {
                    total += (a.conj() * b).re * gaussian_moment(((j + k) / 2) as u32, beta);
                }
            }
        }
        total
    }
}

impl fmt::Display for GaussianState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "(")?;
        let mut first = true;
        for (k, c) in self.poly.iter().enumerate() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({} + {}i)x^{k}", c.re, c.im)?;
        }
        write!(f, ")·exp(-{}x²)", self.alpha)
    }
}

/// `∫ x^{2n} e^{−βx²} dx = (2n−1)!!/(2β)ⁿ · √(π/β)`.
pub fn gaussian_moment(n: u32, beta: f64) -> f64 {
    let mut v = sqrt(core::f64::consts::PI / beta);
    for k in 1..=n {
        v *= (2 * k - 1) as f64 / (2.0 * beta);
    }
    v
}

/// `coef · x^x · dᵈ/dxᵈ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiffTerm {
    pub coef: Complex64,
    pub x: u32,
    pub d: u32,
}

/// A linear differential operator with polynomial coefficients, each term acting as `x^a ∘ dᵏ`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct DiffOperator {
    pub terms: Vec<DiffTerm>,
}

impl DiffOperator {
    pub fn apply(&self, psi: &GaussianState) -> GaussianState {
        let max_d = self.terms.iter().map(|t| t.d).max().unwrap_or(0) as usize;
        let mut derivs = Vec::with_capacity(max_d + 1);
        derivs.push(psi.clone());
        for k in 1..=max_d {
            let next = derivs[k - 1].derivative();
            derivs.push(next);
        }
        let mut out = GaussianState { poly: Vec::new(), alpha: psi.alpha };
        for t in &self.terms {
            let piece = derivs[t.d as usize].mul_monomial(t.coef, t.x);
            out = out.add(&piece).expect("same width");
        }
        out
    }

    /// `c·x^j p^k ↦ c(−iħ)^k x^j dᵏ` for a normal-ordered operator.
    pub fn from_operator(a: &OperatorPoly, hbar: f64) -> Self {
        let terms = a
            .terms()
            .map(|((j, k), c)| {
                let mut coef = c.to_complex64();
                for _ in 0..k {
                    coef *= Complex64::new(0.0, -hbar);
                }
                term(coef, j, k)
            })
            .collect();
        Self { terms }
    }

    /// Applies the operator `n` times.
    pub fn apply_n(&self, psi: &GaussianState, n: u32) -> GaussianState {
        (0..n).fold(psi.clone(), |acc, _| self.apply(&acc))
    }
}

fn term(coef: Complex64, x: u32, d: u32) -> DiffTerm {
    DiffTerm { coef, x, d }
}

/// `Q̂₁ = (2i/μ⁴)[−(2ħ²/3m) d³ + μ²(x² d + x)]`.
pub fn q1_hat(params: &ModelParams) -> DiffOperator {
    let (m, mu2, h2) = (params.m, params.mu * params.mu, params.hbar * params.hbar);
    let pre = Complex64::new(0.0, 2.0 / (mu2 * mu2));
    DiffOperator {
        terms: alloc::vec![
            term(pre * (-2.0 * h2 / (3.0 * m)), 0, 3),
            term(pre * mu2, 2, 1),
            term(pre * mu2, 1, 0),
        ],
    }
}

/// `Q̂₃ = (4i/μ¹⁰)[−(32ħ⁴/15m²) d⁵ + (10ħ²μ²/3m)(x² d³ + 3x d²) − 2μ⁴(x⁴ d + 2x³) + (8ħ²μ²/m) d]`.
pub fn q3_hat(params: &ModelParams) -> DiffOperator {
    let (m, mu2, h2) = (params.m, params.mu * params.mu, params.hbar * params.hbar);
    let mu4 = mu2 * mu2;
    let pre = Complex64::new(0.0, 4.0 / (mu4 * mu4 * mu2));
    let c3 = 10.0 * h2 * mu2 / (3.0 * m);
    DiffOperator {
        terms: alloc::vec![
            term(pre * (-32.0 * h2 * h2 / (15.0 * m * m)), 0, 5),
            term(pre * c3, 2, 3),
            term(pre * (3.0 * c3), 1, 2),
            term(pre * (-2.0 * mu4), 4, 1),
            term(pre * (-4.0 * mu4), 3, 0),
            term(pre * (8.0 * h2 * mu2 / m), 0, 1),
        ],
    }
}

/// The pieces `L̂ₖψ`, `k = 0..=3`, of `Ψ = Σ ϵᵏ L̂ₖ ψ`.
pub fn wavefunction_terms(state: &GaussianState, params: &ModelParams) -> [GaussianState; 4] {
    let q1 = q1_hat(params);
    let q1psi = q1.apply(state);
    let q1sq = q1.apply(&q1psi);
    let q1cube = q1.apply(&q1sq);
    let q3psi = q3_hat(params).apply(state);
    let l3 = q3psi
        .scale(Complex64::new(-0.5, 0.0))
        .add(&q1cube.scale(Complex64::new(-1.0 / 48.0, 0.0)))
        .expect("same width");
    [state.clone(), q1psi.scale(Complex64::new(-0.5, 0.0)), q1sq.scale(Complex64::new(0.125, 0.0)), l3]
}

/// `Ψ = (1 + ϵL̂₁ + ϵ²L̂₂ + ϵ³L̂₃)ψ`, truncated after `ϵ^order`.
pub fn physical_wavefunction(state: &GaussianState, params: &ModelParams, order: u32) -> Result<GaussianState, DensityError> {
    if order > 3 {
        return Err(DensityError::Order(order));
    }
    let terms = wavefunction_terms(state, params);
    let mut out = state.clone();
    let mut power = 1.0;
    for piece in terms.iter().take(order as usize + 1).skip(1) {
        power *= params.epsilon;
        out = out.add(&piece.scale(Complex64::new(power, 0.0)))?;
    }
    Ok(out)
}

/// `ϱ` sampled on a grid together with `Ψ` and the normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub psi_re: Vec<f64>,
    pub psi_im: Vec<f64>,
    pub rho: Vec<f64>,
    /// `N = ∫|Ψ|² dx` over the whole line.
    pub norm: f64,
    pub psi: GaussianState,
}

impl DensityCurve {
    /// `ϱ(x)` anywhere, not only on the grid.
    pub fn rho_at(&self, x: f64) -> f64 {
        self.psi.eval(x).norm_sqr() / self.norm
    }

    /// Grid indices of local maxima of `ϱ`; a flat top counts once, at its right end.
    pub fn peaks(&self) -> Vec<usize> {
        (1..self.rho.len().saturating_sub(1))
            .filter(|&k| self.rho[k] >= self.rho[k - 1] && self.rho[k] > self.rho[k + 1])
            .collect()
    }
}

pub fn uniform_grid(xmin: f64, xmax: f64, points: usize) -> Result<Vec<f64>, DensityError> {
    if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) || points < 2 {
        return Err(DensityError::Grid);
    }
    let h = (xmax - xmin) / (points - 1) as f64;
    Ok((0..points).map(|k| if k + 1 == points { xmax } else { xmin + k as f64 * h }).collect())
}

pub fn probability_density(state: &GaussianState, params: &ModelParams, order: u32, grid: &[f64]) -> Result<DensityCurve, DensityError> {
    if grid.len() < 2 || grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DensityError::Grid);
    }
    let psi = physical_wavefunction(state, params, order)?;
    let norm = psi.norm_sq();
    if norm.is_nan() || norm <= 0.0 {
        return Err(DensityError::ZeroNorm);
    }
    let values: Vec<Complex64> = grid.iter().map(|&x| psi.eval(x)).collect();
    Ok(DensityCurve {
        grid: grid.to_vec(),
        psi_re: values.iter().map(|v| v.re).collect(),
        psi_im: values.iter().map(|v| v.im).collect(),
        rho: values.iter().map(|v| v.norm_sqr() / norm).collect(),
        norm,
        psi,
    })
}
