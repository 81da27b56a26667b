//! Atomic file output. Each file is written to a temporary sibling and renamed
//! into place; a [`Outputs`] batch deletes what it wrote unless committed.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[derive(Debug, Default)]
pub struct Outputs {
    written: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    pub fn new() -> Self {
        Self::default()
    }

    /// Writes to `path`, or to stdout when `path` is `None`.
    pub fn emit(&mut self, path: Option<&Path>, contents: &str) -> Result<(), CliError> {
        match path {
            Some(p) => {
                write_atomic(p, contents.as_bytes())?;
                self.written.push(p.to_path_buf());
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(contents.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            }
        }
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn commit(mut self) {
        self.committed = true;
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = std::fs::remove_file(p);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uncommitted_outputs_are_removed() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.txt");
        {
            let mut out = Outputs::new();
            out.emit(Some(&a), "one").unwrap();
            assert!(a.exists());
        }
        assert!(!a.exists());
        let mut out = Outputs::new();
        out.emit(Some(&a), "two").unwrap();
        out.commit();
        assert_eq!(std::fs::read_to_string(&a).unwrap(), "two");
    }

    #[test]
    fn replaces_existing_file() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.txt");
        write_atomic(&a, b"old").unwrap();
        write_atomic(&a, b"new").unwrap();
        assert_eq!(std::fs::read_to_string(&a).unwrap(), "new");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
