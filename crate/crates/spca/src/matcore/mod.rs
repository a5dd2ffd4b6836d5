//! Dense symmetric linear algebra and the projection primitives used by the
//! saddle-point solver.

mod eig;
mod project;
mod text;

pub use eig::{eig_sym, leading_eigenvector, EigWorkspace, Spectrum};
pub use project::{project_simplex, project_spectahedron, project_spectahedron_with, WeightVector};
pub use text::{read_matrix_text, write_matrix_text};

use crate::error::{Error, Result};

/// Dense real symmetric matrix with both triangles stored, row-major.
///
/// Construction enforces exact symmetry (`a[i][j] == a[j][i]` bitwise) and
/// finiteness; all in-crate arithmetic preserves both.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    /// Validates squareness, exact symmetry and finiteness of `entries`
    /// (row-major, length `dim * dim`).
    pub fn from_flat(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "matrix dimension must be positive".into(),
            ));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for i in 0..dim {
            for j in 0..dim {
                let v = entries[i * dim + j];
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                if j > i && entries[j * dim + i] != v {
                    return Err(Error::NotSymmetric {
                        row: j,
                        col: i,
                        upper: v,
                        lower: entries[j * dim + i],
                    });
                }
            }
        }
        Ok(SymMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        SymMatrix::from_flat(dim, rows.iter().flatten().copied().collect())
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle and mirrored,
    /// so the result is symmetric by construction.
    pub fn from_fn_symmetric(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                entries[i * dim + j] = v;
                entries[j * dim + i] = v;
            }
        }
        Ok(SymMatrix { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, c: f64) -> Self {
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = c;
        }
        m
    }

    /// Rank-one matrix `v vᵀ`.
    pub fn outer(v: &[f64]) -> Self {
        let dim = v.len();
        let mut m = SymMatrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let x = v[i] * v[j];
                m.entries[i * dim + j] = x;
                m.entries[j * dim + i] = x;
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// `tr(self · other)`; for symmetric arguments this is the entrywise
    /// inner product.
    pub fn inner(&self, other: &SymMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "inner product of {}x{0} and {}x{1} matrices",
                self.dim, other.dim
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn quadratic_form(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {}x{1} matrix",
                u.len(),
                self.dim
            )));
        }
        let mut total = 0.0;
        for (i, row) in self.entries.chunks_exact(self.dim).enumerate() {
            let mut s = 0.0;
            for (a, x) in row.iter().zip(u) {
                s += a * x;
            }
            total += u[i] * s;
        }
        Ok(total)
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &SymMatrix, c: f64) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(
                "add_scaled on mismatched dims".into(),
            ));
        }
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, c: f64) {
        for a in &mut self.entries {
            *a *= c;
        }
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.entries
    }

    /// Shared matrix text format with header `p p`.
    pub fn write_text(&self, w: impl std::io::Write) -> Result<()> {
        write_matrix_text(w, self.dim, self.dim, &self.entries)
    }

    pub fn read_text(r: impl std::io::BufRead) -> Result<Self> {
        let (rows, cols, entries) = read_matrix_text(r)?;
        if rows != cols {
            return Err(Error::Parse(format!(
                "symmetric matrix file must be square, got {rows}x{cols}"
            )));
        }
        SymMatrix::from_flat(rows, entries)
    }

    /// Entrywise clip to `[-lambda, lambda]`: each entry becomes
    /// `sign(a) * min(|a|, lambda)`.
    pub fn clip_entrywise(&self, lambda: f64) -> Result<SymMatrix> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "clip level must be positive and finite, got {lambda}"
            )));
        }
        let mut out = self.clone();
        out.clip_entrywise_in_place(lambda);
        Ok(out)
    }

    pub(crate) fn clip_entrywise_in_place(&mut self, lambda: f64) {
        for a in &mut self.entries {
            *a = a.signum() * a.abs().min(lambda);
        }
    }

    /// Entrywise norm: `L1` sums `|a_ij|`, `L2` is the Frobenius norm,
    /// `LInf` is the maximal `|a_ij|`.
    pub fn entrywise_norm(&self, q: MatrixNorm) -> f64 {
        match q {
            MatrixNorm::L1 => self.entries.iter().map(|a| a.abs()).sum(),
            MatrixNorm::L2 => self.entries.iter().map(|a| a * a).sum::<f64>().sqrt(),
            MatrixNorm::LInf => self.entries.iter().fold(0.0, |m, a| m.max(a.abs())),
        }
    }

    /// Principal submatrix on the (strictly increasing) index set `support`.
    pub fn submatrix(&self, support: &[usize]) -> Result<SymMatrix> {
        if support.iter().any(|&i| i >= self.dim) {
            return Err(Error::InvalidParameter(
                "submatrix index out of range".into(),
            ));
        }
        let k = support.len();
        let mut entries = vec![0.0; k * k];
        for (a, &i) in support.iter().enumerate() {
            for (b, &j) in support.iter().enumerate() {
                entries[a * k + b] = self.get(i, j);
            }
        }
        SymMatrix::from_flat(k, entries)
    }
}

/// Entrywise matrix norms; `q` outside {1, 2, inf} is unrepresentable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixNorm {
    L1,
    L2,
    LInf,
}

impl std::str::FromStr for MatrixNorm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(MatrixNorm::L1),
            "2" => Ok(MatrixNorm::L2),
            "inf" | "max" => Ok(MatrixNorm::LInf),
            other => Err(Error::InvalidParameter(format!(
                "unsupported entrywise norm {other:?}; expected 1, 2 or inf"
            ))),
        }
    }
}
