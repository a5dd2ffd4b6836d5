//! Deterministic output helpers: floats at 17 significant digits, CSV rows
//! with a fixed column count, and output-path resolution.

use spca::error::{Error, Result};
use std::io::Write;
use std::path::{Path, PathBuf};

/// 17 significant digits; parsing this representation recovers the exact
/// bit pattern, which the byte-identical rerun guarantee relies on.
pub fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Resolves an output path against `SPCA_OUT_DIR` when the given path is
/// relative and the variable is set.
pub fn resolve_out_path(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("SPCA_OUT_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Buffered CSV table with a constant column count.
pub struct CsvTable {
    columns: usize,
    lines: Vec<String>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable {
            columns: header.len(),
            lines: vec![header.join(",")],
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns, "constant column count");
        self.lines.push(cells.join(","));
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// Writes `content` to `--out` (resolved against `SPCA_OUT_DIR`) when a
/// path was given, and always echoes it to stdout otherwise.
pub fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            let resolved = resolve_out_path(path);
            if let Some(parent) = resolved.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            let mut f = std::fs::File::create(&resolved)?;
            f.write_all(content.as_bytes())?;
            Ok(())
        }
        None => {
            print!("{content}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let vals: std::result::Result<Vec<usize>, _> =
        s.split(',').map(|t| t.trim().parse::<usize>()).collect();
    let vals = vals.map_err(|e| Error::InvalidParameter(format!("bad integer list {s:?}: {e}")))?;
    if vals.is_empty() {
        return Err(Error::InvalidParameter("empty list".into()));
    }
    Ok(vals)
}

pub fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|e| Error::InvalidParameter(format!("bad number list {s:?}: {e}")))?;
    if vals.is_empty() {
        return Err(Error::InvalidParameter("empty list".into()));
    }
    Ok(vals)
}
