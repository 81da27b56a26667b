//! A directory of reference artifacts keyed by `(command, parameter hash)`.
//! Operator JSON is compared byte for byte, numeric CSV within a tolerance.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::formats::parse_csv;
use crate::output::write_atomic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtifactKind {
    OperatorJson,
    NumericJson,
    Csv,
}

impl ArtifactKind {
    fn extension(self) -> &'static str {
        match self {
            ArtifactKind::OperatorJson | ArtifactKind::NumericJson => "json",
            ArtifactKind::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GoldenOutcome {
    Match,
    Mismatch(String),
    /// No golden existed; the artifact was stored.
    Created,
    Missing,
}

/// Relative tolerance for numeric goldens, with an absolute floor.
pub const CSV_RTOL: f64 = 1e-10;
pub const CSV_ATOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct GoldenStore {
    dir: PathBuf,
    bless: bool,
}

impl GoldenStore {
    /// With `bless`, missing goldens are written instead of reported.
    pub fn new(dir: impl Into<PathBuf>, bless: bool) -> Self {
        Self { dir: dir.into(), bless }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, command: &str, fingerprint: &str, kind: ArtifactKind) -> PathBuf {
        let digest = Sha256::digest(fingerprint.as_bytes());
        let hash: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{command}-{hash}.{}", kind.extension()))
    }

    pub fn check(&self, command: &str, fingerprint: &str, kind: ArtifactKind, actual: &str) -> Result<GoldenOutcome, CliError> {
        let path = self.path_for(command, fingerprint, kind);
        if !path.exists() {
            if !self.bless {
                return Ok(GoldenOutcome::Missing);
            }
            std::fs::create_dir_all(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
            write_atomic(&path, actual.as_bytes())?;
            return Ok(GoldenOutcome::Created);
        }
        let expected = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        Ok(compare(kind, &expected, actual))
    }
}

pub fn compare(kind: ArtifactKind, expected: &str, actual: &str) -> GoldenOutcome {
    match kind {
        ArtifactKind::OperatorJson => {
            if expected == actual {
                GoldenOutcome::Match
            } else {
                let line = expected.lines().zip(actual.lines()).position(|(a, b)| a != b).map_or(0, |k| k + 1);
                GoldenOutcome::Mismatch(format!("bytes differ (first differing line {line})"))
            }
        }
        ArtifactKind::NumericJson => match (serde_json::from_str(expected), serde_json::from_str(actual)) {
            (Ok(a), Ok(b)) => match numbers_close(&a, &b) {
                Ok(()) => GoldenOutcome::Match,
                Err(e) => GoldenOutcome::Mismatch(e),
            },
            _ => GoldenOutcome::Mismatch("unparsable JSON".into()),
        },
        ArtifactKind::Csv => match (parse_csv(expected), parse_csv(actual)) {
            (Ok((ha, ra)), Ok((hb, rb))) => {
                if ha != hb {
                    return GoldenOutcome::Mismatch(format!("header {hb:?} vs {ha:?}"));
                }
                if ra.len() != rb.len() {
                    return GoldenOutcome::Mismatch(format!("{} rows vs {}", rb.len(), ra.len()));
                }
                for (k, (a, b)) in ra.iter().zip(&rb).enumerate() {
                    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| !close(*x, *y)) {
                        return GoldenOutcome::Mismatch(format!("row {} differs", k + 1));
                    }
                }
                GoldenOutcome::Match
            }
            (Err(e), _) | (_, Err(e)) => GoldenOutcome::Mismatch(e),
        },
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= CSV_ATOL + CSV_RTOL * a.abs().max(b.abs())
}

fn numbers_close(a: &serde_json::Value, b: &serde_json::Value) -> Result<(), String> {
    use serde_json::Value;
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            if close(x, y) {
                Ok(())
            } else {
                Err(format!("{y} vs {x}"))
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => x.iter().zip(y).try_for_each(|(u, v)| numbers_close(u, v)),
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => x.iter().try_for_each(|(k, u)| match y.get(k) {
            Some(v) => numbers_close(u, v).map_err(|e| format!("{k}: {e}")),
            None => Err(format!("missing key {k}")),
        }),
        _ if a == b => Ok(()),
        _ => Err("structure differs".into()),
    }
}
