use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, Result};

/// Files produced by one run; nothing touches the destination paths until
/// every artifact has been rendered.
#[derive(Default)]
pub struct Artifacts {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Artifacts {
    pub fn csv<T: Serialize>(&mut self, path: &Path, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| CliError::Config(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Config(format!("csv: {e}")))?;
        self.files.push((path.to_path_buf(), bytes));
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Config(format!("json: {e}")))?;
        bytes.push(b'\n');
        self.files.push((path.to_path_buf(), bytes));
        Ok(())
    }

    /// Writes every file to a sibling temporary and renames it into place.
    pub fn commit(self) -> Result<Vec<PathBuf>> {
        let mut staged = Vec::with_capacity(self.files.len());
        for (path, bytes) in &self.files {
            let tmp = temp_name(path);
            let res = fs::File::create(&tmp).and_then(|mut f| {
                f.write_all(bytes)?;
                f.sync_all()
            });
            if let Err(source) = res {
                for t in &staged {
                    let _ = fs::remove_file(t);
                }
                let _ = fs::remove_file(&tmp);
                return Err(CliError::Io {
                    path: path.display().to_string(),
                    source,
                });
            }
            staged.push(tmp);
        }
        let mut written = Vec::with_capacity(staged.len());
        for (tmp, (path, _)) in staged.iter().zip(&self.files) {
            fs::rename(tmp, path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            written.push(path.clone());
        }
        Ok(written)
    }
}

fn temp_name(path: &Path) -> PathBuf {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!(".{name}.tmp{}", std::process::id()))
}
