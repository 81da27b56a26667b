//! Physical constants and the dimensionless combinations derived from them.

use libm::{pow, sqrt};

/// Physical parameters of `H = p²/2m + μ²x²/2 + iϵx³`.
///
/// `ell` is an arbitrary length scale; physical outputs do not depend on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams {
    pub m: f64,
    pub mu: f64,
    pub epsilon: f64,
    pub hbar: f64,
    pub ell: f64,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParamsError {
    #[error("m must be positive and finite, got {0}")]
    Mass(f64),
    #[error("mu must be nonzero and finite, got {0}")]
    Mu(f64),
    #[error("hbar must be positive and finite, got {0}")]
    Hbar(f64),
    #[error("ell must be positive and finite, got {0}")]
    Ell(f64),
    #[error("epsilon must be finite, got {0}")]
    Epsilon(f64),
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            mu: 1.0,
            epsilon: 0.1,
            hbar: 1.0,
            ell: 1.0,
        }
    }
}

impl ModelParams {
    pub fn new(m: f64, mu: f64, epsilon: f64, hbar: f64, ell: f64) -> Result<Self, ParamsError> {
        let p = Self { m, mu, epsilon, hbar, ell };
        p.validate()?;
        Ok(p)
    }

    /// Unit constants with the given coupling.
    pub fn unit(epsilon: f64) -> Self {
        Self {
            epsilon,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamsError> {
        if !(self.m.is_finite() && self.m > 0.0) {
            return Err(ParamsError::Mass(self.m));
        }
        if !self.mu.is_finite() || self.mu == 0.0 {
            return Err(ParamsError::Mu(self.mu));
        }
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(ParamsError::Hbar(self.hbar));
        }
        if !(self.ell.is_finite() && self.ell > 0.0) {
            return Err(ParamsError::Ell(self.ell));
        }
        if !self.epsilon.is_finite() {
            return Err(ParamsError::Epsilon(self.epsilon));
        }
        Ok(())
    }

    /// Dimensionless frequency `𝓜 = ℓ² √m μ / ħ`.
    pub fn scaled_frequency(&self) -> f64 {
        self.ell * self.ell * sqrt(self.m) * self.mu / self.hbar
    }

    /// Dimensionless coupling `ε = ℓ⁵ m ϵ / ħ²`.
    pub fn scaled_coupling(&self) -> f64 {
        pow(self.ell, 5.0) * self.m * self.epsilon / (self.hbar * self.hbar)
    }
}
