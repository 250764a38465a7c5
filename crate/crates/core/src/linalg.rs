//! Dense Hermitian forms and their spectral decomposition.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest dimension accepted by [`HermitianForm::decompose`].
pub const MAX_DENSE_DIMENSION: usize = 2000;

/// Relative residual `‖Gv − λv‖ / ‖G‖` every eigenpair must meet.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

const HERMITIAN_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct HermitianForm {
    entries: DMatrix<Complex64>,
    pub provenance: String,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns match `eigenvalues`.
    pub eigenvectors: DMatrix<Complex64>,
    /// Largest relative residual over all eigenpairs.
    pub residual: f64,
}

impl Decomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn min_vector(&self) -> DVector<Complex64> {
        self.eigenvectors.column(0).into_owned()
    }
}

impl HermitianForm {
    /// Wraps a matrix, rejecting it unless `|G_ij − conj(G_ji)| ≤ 1e-12`.
    pub fn new(entries: DMatrix<Complex64>, provenance: impl Into<String>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Domain(format!(
                "form must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in i..n {
                let gap = (entries[(i, j)] - entries[(j, i)].conj()).norm();
                if gap > HERMITIAN_TOLERANCE {
                    return Err(Error::Domain(format!(
                        "form is not Hermitian at ({i}, {j}): gap {gap:e}"
                    )));
                }
            }
        }
        Ok(HermitianForm {
            entries,
            provenance: provenance.into(),
        })
    }

    /// Builds the form from its upper triangle; the lower triangle is the
    /// conjugate and the diagonal is taken real.
    pub fn from_upper(
        dimension: usize,
        provenance: impl Into<String>,
        entry: impl Fn(usize, usize) -> Complex64,
    ) -> Self {
        let mut m = DMatrix::zeros(dimension, dimension);
        for i in 0..dimension {
            m[(i, i)] = Complex64::new(entry(i, i).re, 0.0);
            for j in (i + 1)..dimension {
                let v = entry(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v.conj();
            }
        }
        HermitianForm {
            entries: m,
            provenance: provenance.into(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Frobenius norm, used as the scale for residuals.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Full decomposition, checked against [`RESIDUAL_TOLERANCE`].
    pub fn decompose(&self) -> Result<Decomposition> {
        let n = self.dimension();
        if n == 0 {
            return Err(Error::Domain("empty form".into()));
        }
        if n > MAX_DENSE_DIMENSION {
            return Err(Error::Domain(format!(
                "dimension {n} exceeds the dense limit {MAX_DENSE_DIMENSION}"
            )));
        }
        let eig = SymmetricEigen::try_new(self.entries.clone(), f64::EPSILON, 0)
            .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);

        let scale = self.norm().max(f64::MIN_POSITIVE);
        let product = &self.entries * &eigenvectors;
        let residual = (0..n)
            .map(|c| {
                let lambda = Complex64::new(eigenvalues[c], 0.0);
                (0..n)
                    .map(|r| (product[(r, c)] - eigenvectors[(r, c)] * lambda).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
            / scale;
        if !(residual <= RESIDUAL_TOLERANCE) {
            return Err(Error::Eigensolver {
                residual,
                tolerance: RESIDUAL_TOLERANCE,
            });
        }
        Ok(Decomposition {
            eigenvalues,
            eigenvectors,
            residual,
        })
    }

    /// `v* G v`.
    pub fn quadratic(&self, v: &[Complex64]) -> f64 {
        let v = DVector::from_column_slice(v);
        (v.adjoint() * &self.entries * &v)[(0, 0)].re
    }

    /// Text export: a dimension line, then one row per line as
    /// whitespace-separated `re im` pairs.
    pub fn to_text(&self) -> String {
        let n = self.dimension();
        let mut out = format!("{n}\n");
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = self.entries[(i, j)];
                    format!("{:e} {:e}", z.re, z.im)
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn parse_text(text: &str, provenance: impl Into<String>) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("missing dimension".into()))?
            .parse()
            .map_err(|e| Error::Parse(format!("bad dimension: {e}")))?;
        let values = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() != 2 * n * n {
            return Err(Error::Parse(format!(
                "expected {} numbers for dimension {n}, found {}",
                2 * n * n,
                values.len()
            )));
        }
        let m = DMatrix::from_fn(n, n, |i, j| {
            let k = 2 * (i * n + j);
            Complex64::new(values[k], values[k + 1])
        });
        Self::new(m, provenance)
    }
}
