//! Euclidean projections onto the probability simplex and the spectahedron
//! (trace-one positive semidefinite matrices).

use super::eig::EigWorkspace;
use super::SymMatrix;
use crate::error::{Error, Result};

/// Point of the unit simplex: non-negative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter("empty weight vector".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidParameter(
                "weights must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        Ok(WeightVector { weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Euclidean projection of `d` onto the unit simplex by sort-and-threshold:
/// sort descending, find the largest `m` with
/// `d_(m) - (sum_{i<=m} d_(i) - 1)/m > 0`, subtract that threshold and clip
/// at zero.
pub fn project_simplex(d: &[f64]) -> Result<WeightVector> {
    let w = simplex_weights(d)?;
    WeightVector::new(w)
}

pub(crate) fn simplex_weights(d: &[f64]) -> Result<Vec<f64>> {
    if d.is_empty() {
        return Err(Error::InvalidParameter("empty input vector".into()));
    }
    if let Some(pos) = d.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { row: 0, col: pos });
    }
    let mut sorted = d.to_vec();
    sorted.sort_unstable_by(|a, b| b.partial_cmp(a).expect("finite entries"));
    let mut cumulative = 0.0;
    let mut threshold = 0.0;
    for (m, &value) in sorted.iter().enumerate() {
        cumulative += value;
        let candidate = (cumulative - 1.0) / (m + 1) as f64;
        if value - candidate > 0.0 {
            threshold = candidate;
        }
    }
    Ok(d.iter().map(|&x| (x - threshold).max(0.0)).collect())
}

/// Euclidean projection of a symmetric matrix onto the spectahedron:
/// eigendecompose, project the eigenvalue vector onto the unit simplex,
/// recompose. Output is positive semidefinite with unit trace (to numerical
/// tolerance) and exactly symmetric.
pub fn project_spectahedron(a: &SymMatrix) -> Result<SymMatrix> {
    let mut ws = EigWorkspace::new(a.dim());
    let mut out = SymMatrix::zeros(a.dim());
    project_spectahedron_with(&mut ws, a, &mut out)?;
    Ok(out)
}

/// Workspace-reusing form of [`project_spectahedron`] for hot loops.
pub fn project_spectahedron_with(
    ws: &mut EigWorkspace,
    a: &SymMatrix,
    out: &mut SymMatrix,
) -> Result<()> {
    let n = a.dim();
    assert_eq!(out.dim(), n, "output dimension mismatch");
    ws.decompose(a)?;
    let weights = simplex_weights(&ws.d)?;
    let entries = out.entries_mut();
    entries.fill(0.0);
    for (j, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for (k, c) in ws.col.iter_mut().enumerate() {
            *c = ws.z[k * n + j];
        }
        for i in 0..n {
            let wv = w * ws.col[i];
            let row = &mut entries[i * n..i * n + n];
            for (r, c) in row[i..].iter_mut().zip(&ws.col[i..]) {
                *r += wv * c;
            }
        }
    }
    for i in 0..n {
        for l in (i + 1)..n {
            entries[l * n + i] = entries[i * n + l];
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_examples() {
        let w = project_simplex(&[0.5, 0.5]).unwrap();
        assert_eq!(w.weights(), &[0.5, 0.5]);

        let w = project_simplex(&[2.0, 0.0]).unwrap();
        assert_eq!(w.weights(), &[1.0, 0.0]);
    }

    #[test]
    fn simplex_rejects_non_finite() {
        assert!(project_simplex(&[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn spectahedron_fixed_point() {
        let m = SymMatrix::outer(&[1.0, 0.0, 0.0]);
        let p = project_spectahedron(&m).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((p.get(i, j) - m.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectahedron_scaled_rank_one() {
        let mut m = SymMatrix::outer(&[1.0, 0.0, 0.0]);
        m.scale(2.0);
        let p = project_spectahedron(&m).unwrap();
        let expected = SymMatrix::outer(&[1.0, 0.0, 0.0]);
        for i in 0..3 {
            for j in 0..3 {
                assert!((p.get(i, j) - expected.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectahedron_diagonal_matches_simplex() {
        let d = [0.8, 0.4, 0.2];
        let m = SymMatrix::from_fn_symmetric(3, |i, j| if i == j { d[i] } else { 0.0 }).unwrap();
        let p = project_spectahedron(&m).unwrap();
        let w = project_simplex(&d).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { w.weights()[i] } else { 0.0 };
                assert!((p.get(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spectahedron_output_feasible() {
        let a = SymMatrix::from_rows(&[
            vec![0.3, -1.2, 0.7],
            vec![-1.2, 2.0, 0.1],
            vec![0.7, 0.1, -0.9],
        ])
        .unwrap();
        let p = project_spectahedron(&a).unwrap();
        assert!((p.trace() - 1.0).abs() <= 1e-10);
        let s = super::super::eig::eig_sym(&p).unwrap();
        assert!(*s.eigenvalues().last().unwrap() >= -1e-10);
    }
}
