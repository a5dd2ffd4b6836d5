//! Shared matrix text format: a header line `rows cols` followed by `rows`
//! lines of `cols` whitespace-separated values, serialized with 17
//! significant digits so parsing round-trips bit-exactly.

use crate::error::{Error, Result};
use std::io::{BufRead, Write};

pub fn write_matrix_text(
    mut w: impl Write,
    rows: usize,
    cols: usize,
    entries: &[f64],
) -> Result<()> {
    assert_eq!(entries.len(), rows * cols);
    writeln!(w, "{rows} {cols}")?;
    for row in entries.chunks_exact(cols) {
        let mut first = true;
        for v in row {
            if !first {
                write!(w, " ")?;
            }
            write!(w, "{v:.16e}")?;
            first = false;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Returns `(rows, cols, entries)`.
pub fn read_matrix_text(r: impl BufRead) -> Result<(usize, usize, Vec<f64>)> {
    let mut lines = r.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))??;
    let mut dims = header.split_whitespace();
    let rows: usize = dims
        .next()
        .ok_or_else(|| Error::Parse("missing row count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad row count: {e}")))?;
    let cols: usize = dims
        .next()
        .ok_or_else(|| Error::Parse("missing column count".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad column count: {e}")))?;
    if dims.next().is_some() {
        return Err(Error::Parse("header must be exactly `rows cols`".into()));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for line in lines {
        let line = line?;
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|e| Error::Parse(format!("bad value {tok:?}: {e}")))?;
            entries.push(v);
        }
    }
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} values, found {}",
            rows * cols,
            entries.len()
        )));
    }
    Ok((rows, cols, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let entries = vec![1.0 / 3.0, -2.5e-17, 4.0, std::f64::consts::PI];
        let mut buf = Vec::new();
        write_matrix_text(&mut buf, 2, 2, &entries).unwrap();
        let (r, c, back) = read_matrix_text(buf.as_slice()).unwrap();
        assert_eq!((r, c), (2, 2));
        assert_eq!(back, entries);
    }

    #[test]
    fn rejects_wrong_count() {
        let text = "2 2\n1.0 2.0\n3.0\n";
        assert!(read_matrix_text(text.as_bytes()).is_err());
    }
}
