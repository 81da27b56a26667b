use std::path::{Path, PathBuf};

use ptcubic::classical::ClassicalError;
use ptcubic::density::DensityError;
use ptcubic::hermitian::{HermitianError, UnscaleError};
use ptcubic::metric::MetricError;
use ptcubic::spectral::SpectralError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Unscale(#[from] UnscaleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("{0} verification check(s) failed")]
    VerifyFailed(usize),
    #[error("{0} golden file(s) differ")]
    GoldenMismatch(usize),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Metric(_) => 5,
            CliError::Hermitian(_) | CliError::Unscale(_) => 6,
            CliError::Spectral(_) => 7,
            CliError::Classical(_) => 8,
            CliError::Density(_) => 9,
            CliError::VerifyFailed(_) => 10,
            CliError::GoldenMismatch(_) => 11,
        }
    }
}
