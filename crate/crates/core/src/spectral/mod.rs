//! Truncated oscillator-basis matrices and dense eigenvalues.

mod eigen;
mod matrix;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;

pub use eigen::{balance, eigenvalues, hessenberg, hessenberg_eigenvalues, sort_spectrum};
pub use matrix::{assemble, momentum_matrix, position_matrix, CMatrix};

use crate::hermitian::{hermitian_equivalent, m_power_doubled, HermitianError, OperatorKind};
use crate::metric::{solve_metric, unit_m, MetricError};
use crate::params::ModelParams;
use crate::weyl::{ratio_to_f64, EpsilonSeries, OperatorPoly};

pub const DEFAULT_BASIS: usize = 80;
pub const DEFAULT_PAD: usize = 8;
/// Largest `|Im E|` accepted as a real eigenvalue.
pub const IMAG_GATE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("basis size {0} is below 2")]
    BasisTooSmall(usize),
    #[error("padding {pad} is smaller than the operator degree {degree}")]
    PaddingTooSmall { pad: usize, degree: u32 },
    #[error("QR iteration did not converge after {iterations} sweeps ({unresolved} eigenvalues unresolved)")]
    NoConvergence { iterations: usize, unresolved: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("requested {levels} levels from a basis of {basis}")]
    TooManyLevels { levels: usize, basis: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

/// An operator in the first `dim` eigenstates of `H₀` at frequency `basis_m`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRep {
    pub dim: usize,
    pub entries: CMatrix,
    pub basis_m: f64,
    pub pad: usize,
}

impl MatrixRep {
    pub fn eigenvalues(&self) -> Result<Vec<Complex64>, SpectralError> {
        eigenvalues(&self.entries)
    }
}

fn build(terms: &BTreeMap<(u32, u32), Complex64>, n: usize, m: f64, pad: usize) -> Result<MatrixRep, SpectralError> {
    if n < 2 {
        return Err(SpectralError::BasisTooSmall(n));
    }
    let degree = terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0);
    if pad < degree as usize {
        return Err(SpectralError::PaddingTooSmall { pad, degree });
    }
    let full = assemble(terms, n + pad, m);
    Ok(MatrixRep {
        dim: n,
        entries: full.truncate(n),
        basis_m: m,
        pad,
    })
}

/// Numeric coefficients of a polynomial.
pub fn numeric_terms(a: &OperatorPoly) -> BTreeMap<(u32, u32), Complex64> {
    a.terms().map(|(k, c)| (k, c.to_complex64())).collect()
}

/// `Σⱼ εʲ a⁽ʲ⁾` as numeric coefficients.
pub fn numeric_series(a: &EpsilonSeries, eps: f64) -> BTreeMap<(u32, u32), Complex64> {
    let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    let mut w = 1.0;
    for c in a.coeffs() {
        for (k, v) in c.terms() {
            *out.entry(k).or_default() += v.to_complex64() * w;
        }
        w *= eps;
    }
    out.retain(|_, v| *v != Complex64::new(0.0, 0.0));
    out
}

/// Re-evaluates a series derived at `𝓜 = 1` at any real `𝓜` and `ε`, using the
/// scaling `c ∝ 𝓜^P` of each coefficient.
pub fn rescaled_series(unit: &EpsilonSeries, kind: OperatorKind, m: f64, eps: f64) -> BTreeMap<(u32, u32), Complex64> {
    let mut out: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
    for (j, c) in unit.coeffs().iter().enumerate() {
        for ((a, b), v) in c.terms() {
            let p = m_power_doubled(kind, j, a, b) as f64 / 2.0;
            *out.entry((a, b)).or_default() += v.to_complex64() * libm::pow(m, p) * libm::pow(eps, j as f64);
        }
    }
    out
}

/// Matrix of a single polynomial at `𝓜 = m`.
pub fn matrix_of(a: &OperatorPoly, n: usize, m: f64, pad: usize) -> Result<MatrixRep, SpectralError> {
    build(&numeric_terms(a), n, m, pad)
}

/// Matrix of a series evaluated at `ε`.
pub fn matrix_of_series(a: &EpsilonSeries, eps: f64, n: usize, m: f64, pad: usize) -> Result<MatrixRep, SpectralError> {
    build(&numeric_series(a, eps), n, m, pad)
}

/// `H = p²/2 + 𝓜²x²/2 + iεx³` at the dimensionless parameters of `params`.
pub fn hamiltonian_matrix(params: &ModelParams, n: usize, pad: usize) -> Result<MatrixRep, SpectralError> {
    let m = params.scaled_frequency();
    let eps = params.scaled_coupling();
    let mut terms = BTreeMap::new();
    terms.insert((0, 2), Complex64::new(0.5, 0.0));
    terms.insert((2, 0), Complex64::new(0.5 * m * m, 0.0));
    terms.insert((3, 0), Complex64::new(0.0, eps));
    build(&terms, n, m, pad)
}

/// `h` through `ε⁴` (solved once at `𝓜 = 1`, rescaled) at the parameters of `params`.
pub fn hermitian_matrix(params: &ModelParams, n: usize, pad: usize) -> Result<MatrixRep, SpectralError> {
    let sol = solve_metric(3, &unit_m())?;
    let h = hermitian_equivalent(&sol)?.series.truncate(4);
    let m = params.scaled_frequency();
    build(&rescaled_series(&h, OperatorKind::Energy, m, params.scaled_coupling()), n, m, pad)
}

/// `⟨n|h⁽²⁾|n⟩` read from the diagonal of the matrix of `h⁽²⁾` at `𝓜 = m_value`.
pub fn h2_diagonal(m_value: &BigRational, levels: usize) -> Result<Vec<f64>, SpectralError> {
    let sol = solve_metric(1, m_value)?;
    let h = hermitian_equivalent(&sol)?;
    let basis = levels.max(2);
    let rep = matrix_of(&h.coeff(2), basis, ratio_to_f64(m_value), DEFAULT_PAD)?;
    Ok(rep.entries.diagonal().into_iter().take(levels).map(|z| z.re).collect())
}

/// `𝓜(n+½) + ε²⟨n|h⁽²⁾|n⟩` for the first `levels` states.
pub fn first_order_energies(m_value: &BigRational, eps: f64, levels: usize) -> Result<Vec<f64>, SpectralError> {
    let m = ratio_to_f64(m_value);
    Ok(h2_diagonal(m_value, levels)?
        .into_iter()
        .enumerate()
        .map(|(n, d)| m * (n as f64 + 0.5) + eps * eps * d)
        .collect())
}

/// Spectrum of `H` compared with the second-order formula and with `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub basis: usize,
    pub pad: usize,
    pub m: f64,
    pub eps: f64,
    /// All eigenvalues of the truncated `H`, sorted by real part.
    pub eigenvalues: Vec<Complex64>,
    /// Largest `|Im|` among the requested levels.
    pub max_imag: f64,
    /// `𝓜(n+½) + ε²(30n²+30n+11)/(8𝓜⁴)` per level.
    pub formula: Vec<f64>,
    /// `|E_n − formula_n|` per level.
    pub deviations: Vec<f64>,
    /// Eigenvalue of `h` truncated at `ε⁴` nearest to each level of `H`.
    pub hermitian_eigenvalues: Vec<f64>,
    /// Largest `|E_n(H) − E_n(h)|` over the requested levels.
    pub isospectral_gap: f64,
    pub imag_gate: f64,
}

impl SpectrumReport {
    pub fn levels(&self) -> &[Complex64] {
        &self.eigenvalues[..self.formula.len()]
    }

    pub fn all_real(&self) -> bool {
        self.max_imag < self.imag_gate
    }
}

pub fn spectrum_report(params: &ModelParams, n: usize, levels: usize) -> Result<SpectrumReport, SpectralError> {
    spectrum_report_padded(params, n, levels, DEFAULT_PAD)
}

pub fn spectrum_report_padded(params: &ModelParams, n: usize, levels: usize, pad: usize) -> Result<SpectrumReport, SpectralError> {
    if levels > n {
        return Err(SpectralError::TooManyLevels { levels, basis: n });
    }
    let eigs = hamiltonian_matrix(params, n, pad)?.eigenvalues()?;
    let herm = hermitian_matrix(params, n, pad)?.eigenvalues()?;
    let formula: Vec<f64> = (0..levels as u64).map(|k| crate::hermitian::perturbative_energy(k, params)).collect();
    let deviations = eigs.iter().zip(&formula).map(|(e, f)| (e - f).norm()).collect();
    let max_imag = eigs[..levels].iter().map(|e| e.im.abs()).fold(0.0, f64::max);
    // The truncated h is unbounded below (its ε⁴ part ends in −x⁶), so a large
    // basis also carries spurious deep levels; pair each level of H with the
    // nearest eigenvalue of h instead of by index.
    let hermitian_eigenvalues: Vec<f64> = eigs[..levels]
        .iter()
        .map(|e| {
            herm.iter()
                .min_by(|a, b| (*a - e).norm().total_cmp(&(*b - e).norm()))
                .map_or(f64::NAN, |h| h.re)
        })
        .collect();
    let isospectral_gap = eigs
        .iter()
        .zip(&hermitian_eigenvalues)
        .map(|(e, h)| (e - h).norm())
        .fold(0.0, f64::max);
    Ok(SpectrumReport {
        basis: n,
        pad,
        m: params.scaled_frequency(),
        eps: params.scaled_coupling(),
        eigenvalues: eigs,
        max_imag,
        formula,
        deviations,
        hermitian_eigenvalues,
        isospectral_gap,
        imag_gate: IMAG_GATE,
    })
}
