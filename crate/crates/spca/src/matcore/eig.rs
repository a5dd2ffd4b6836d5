//! Symmetric eigendecomposition: Householder reduction to tridiagonal form
//! followed by the implicit-shift QL iteration, with accumulation of the
//! orthogonal transform. This is the classic EISPACK tred2/tql2 pair; it is
//! dependency-free, robust for dense symmetric matrices at the dimensions
//! used here, and a large constant factor faster than cyclic Jacobi, which
//! matters because the saddle-point solver performs two eigendecompositions
//! per iteration.

use super::SymMatrix;
use crate::error::{Error, Result};

/// Eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are sorted non-increasing; column `j` of [`Self::vectors`]
/// (row-major) is the unit eigenvector paired with eigenvalue `j`. Each
/// column carries the deterministic sign convention: its entry of largest
/// absolute value is positive, ties resolved by making the lowest-index
/// tied entry positive.
#[derive(Debug, Clone)]
pub struct Spectrum {
    dim: usize,
    eigenvalues: Vec<f64>,
    vectors: Vec<f64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Row-major `p x p` matrix whose column `j` is eigenvector `j`.
    pub fn vectors(&self) -> &[f64] {
        &self.vectors
    }

    pub fn eigenvector(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|k| self.vectors[k * self.dim + j])
            .collect()
    }

    /// `P diag(d) Pᵀ`, symmetric by construction.
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.dim;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for (k, &lam) in self.eigenvalues.iter().enumerate() {
                    s += lam * self.vectors[i * n + k] * self.vectors[j * n + k];
                }
                entries[i * n + j] = s;
                entries[j * n + i] = s;
            }
        }
        SymMatrix { dim: n, entries }
    }
}

/// Reusable buffers for repeated eigendecompositions of matrices of one
/// dimension; the saddle-point solver owns one of these.
#[derive(Debug)]
pub struct EigWorkspace {
    pub(crate) dim: usize,
    /// On input a copy of the matrix; after [`Self::decompose`] its columns
    /// are the (unsorted) eigenvectors.
    pub(crate) z: Vec<f64>,
    /// Unsorted eigenvalues after [`Self::decompose`].
    pub(crate) d: Vec<f64>,
    e: Vec<f64>,
    pub(crate) col: Vec<f64>,
}

impl EigWorkspace {
    pub fn new(dim: usize) -> Self {
        EigWorkspace {
            dim,
            z: vec![0.0; dim * dim],
            d: vec![0.0; dim],
            e: vec![0.0; dim],
            col: vec![0.0; dim],
        }
    }

    /// Decomposes `a`, leaving unsorted eigenvalues in `self.d` and the
    /// matching eigenvectors in the columns of `self.z`.
    pub(crate) fn decompose(&mut self, a: &SymMatrix) -> Result<()> {
        assert_eq!(a.dim(), self.dim, "workspace dimension mismatch");
        self.z.copy_from_slice(a.as_slice());
        tred2(&mut self.z, self.dim, &mut self.d, &mut self.e);
        tql2(&mut self.d, &mut self.e, &mut self.z, self.dim)
    }

    pub(crate) fn max_eigenvalue(&mut self, a: &SymMatrix) -> Result<f64> {
        self.decompose(a)?;
        Ok(self.d.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// Householder reduction of the symmetric matrix in `z` (row-major, full
/// storage) to tridiagonal form, accumulating the orthogonal transform in
/// `z`. Diagonal lands in `d`, subdiagonal in `e[1..]`.
fn tred2(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += z[i * n + k].abs();
            }
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..=l {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f_acc = 0.0;
                for j in 0..=l {
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += z[j * n + k] * z[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g_acc += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * z[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = z[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j * n + k] -= f * e[k] + g * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i * n + k] * z[k * n + j];
                }
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on the tridiagonal form, rotating the
/// accumulated transform columns in `z` into eigenvectors.
fn tql2(d: &mut [f64], e: &mut [f64], z: &mut [f64], n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 64 {
                return Err(Error::NumericalFailure {
                    iteration: iter,
                    message: "tridiagonal QL iteration failed to converge".into(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Flips the column sign so the entry of largest absolute value is positive,
/// ties resolved toward the lowest index.
fn canonical_sign(col: &mut [f64]) {
    let mut best = 0usize;
    let mut best_abs = col[0].abs();
    for (j, &v) in col.iter().enumerate().skip(1) {
        if v.abs() > best_abs {
            best_abs = v.abs();
            best = j;
        }
    }
    if col[best] < 0.0 {
        for v in col {
            *v = -*v;
        }
    }
}

/// Full eigendecomposition with sorted eigenvalues and sign-canonical
/// eigenvectors.
pub fn eig_sym(a: &SymMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let mut ws = EigWorkspace::new(n);
    ws.decompose(a)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        ws.d[j]
            .partial_cmp(&ws.d[i])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut vectors = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(ws.d[src]);
        for (k, c) in col.iter_mut().enumerate() {
            *c = ws.z[k * n + src];
        }
        canonical_sign(&mut col);
        for (k, &c) in col.iter().enumerate() {
            vectors[k * n + dst] = c;
        }
    }
    Ok(Spectrum {
        dim: n,
        eigenvalues,
        vectors,
    })
}

/// Unit eigenvector of the largest eigenvalue.
///
/// When the top eigenvalue is numerically multiple (gap below
/// `1e-10 * max(1, |lambda_1|)`), the returned representative is the
/// sign-canonical candidate with lexicographically greatest coordinate
/// sequence; negating that vector gives the lexicographically smallest
/// element of the two-signed candidate set, so the choice is a canonical,
/// deterministic resolution of the degenerate maximiser.
pub fn leading_eigenvector(a: &SymMatrix) -> Result<Vec<f64>> {
    let spectrum = eig_sym(a)?;
    let lam1 = spectrum.eigenvalues[0];
    let tol = 1e-10 * lam1.abs().max(1.0);
    let mut best = spectrum.eigenvector(0);
    for j in 1..spectrum.dim {
        if lam1 - spectrum.eigenvalues[j] >= tol {
            break;
        }
        let cand = spectrum.eigenvector(j);
        if lex_greater(&cand, &best) {
            best = cand;
        }
    }
    Ok(best)
}

fn lex_greater(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return true;
        }
        if x < y {
            return false;
        }
    }
    false
}
