//! On-disk cache of metric solutions, keyed by `(order, 𝓜)`. Entries are
//! re-verified before use; a stale or corrupt entry is recomputed and replaced.

use std::path::{Path, PathBuf};

use num_rational::BigRational;
use ptcubic::metric::{solve_metric, verify_metric, MetricSolution};

use crate::error::CliError;
use crate::formats::{to_json, MetricJson};
use crate::output::write_atomic;

pub const CACHE_ENV: &str = "PTCUBIC_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    Hit,
    Miss,
    /// The entry failed to parse or verify and was rebuilt.
    Rejected,
}

#[derive(Debug, Clone, Default)]
pub struct MetricCache {
    dir: Option<PathBuf>,
}

impl MetricCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self { dir }
    }

    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
    }

    pub fn path_for(&self, order: u32, m: &BigRational) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("metric-q{order}-M{}_{}.json", m.numer(), m.denom())))
    }

    fn load(path: &Path, order: u32, m: &BigRational) -> Option<MetricSolution> {
        let text = std::fs::read_to_string(path).ok()?;
        let json: MetricJson = serde_json::from_str(&text).ok()?;
        let sol = json.to_solution().ok()?;
        let complete = sol.m_value() == m && sol.max_order() == order && (1..=order).step_by(2).all(|k| sol.q(k).is_some());
        (complete && verify_metric(&sol).is_ok()).then_some(sol)
    }

    pub fn solve(&self, order: u32, m: &BigRational) -> Result<(MetricSolution, CacheStatus), CliError> {
        let Some(path) = self.path_for(order, m) else {
            return Ok((solve_metric(order, m)?, CacheStatus::Disabled));
        };
        let existed = path.exists();
        if existed {
            if let Some(sol) = Self::load(&path, order, m) {
                return Ok((sol, CacheStatus::Hit));
            }
        }
        let sol = solve_metric(order, m)?;
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        write_atomic(&path, to_json(&MetricJson::from_solution(&sol)).as_bytes())?;
        Ok((sol, if existed { CacheStatus::Rejected } else { CacheStatus::Miss }))
    }
}
