//! Brute-force spectra from a dense cyclic Jacobi eigensolver. Nothing here depends on the
//! character formulas, so it serves as the independent check for them.

use crate::cayley::{adjacency_matrix, CayleySubset};
use crate::error::{Error, Result};
use crate::spectra::{Spectrum, SpectrumSource};

pub const ORACLE_SIZE_LIMIT: usize = 2000;
pub const MAX_SWEEPS: usize = 50;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Row-major symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseSymmetricMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.n + i] = d;
        }
        m
    }

    /// Build from full row-major data; rejects asymmetric input.
    pub fn from_rows(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(DenseSymmetricMatrix { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    s += self.data[i * self.n + j].powi(2);
                }
            }
        }
        s.sqrt()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.n.max(1))
    }
}

/// All eigenvalues of `a`, sorted descending, by cyclic-by-row Jacobi rotations.
///
/// Terminates once the off-diagonal Frobenius norm drops below `tol · ‖A‖_F`.
pub fn eigenvalues_jacobi(a: &DenseSymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = a.size();
    if n > ORACLE_SIZE_LIMIT {
        return Err(Error::Guard {
            what: "oracle matrix size",
            value: n as u128,
            limit: ORACLE_SIZE_LIMIT as u128,
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut m = a.clone();
    let threshold = tol * a.frobenius_norm();
    let mut sweeps = 0;
    loop {
        let off = m.off_diagonal_norm();
        if off <= threshold {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NonConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, p, q, threshold / n as f64);
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    eig.sort_by(|x, y| y.total_cmp(x));
    Ok(eig)
}

/// Annihilate `m[p][q]` with `Jᵀ M J`, `J = [[c, s], [-s, c]]` in the `(p, q)` plane.
fn rotate(m: &mut DenseSymmetricMatrix, p: usize, q: usize, skip_below: f64) {
    let n = m.n;
    let apq = m.data[p * n + q];
    if apq.abs() <= skip_below * 1e-3 {
        return;
    }
    let app = m.data[p * n + p];
    let aqq = m.data[q * n + q];
    let theta = (aqq - app) / (2.0 * apq);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = m.data[k * n + p];
        let akq = m.data[k * n + q];
        m.data[k * n + p] = c * akp - s * akq;
        m.data[k * n + q] = s * akp + c * akq;
    }
    for k in 0..n {
        let apk = m.data[p * n + k];
        let aqk = m.data[q * n + k];
        m.data[p * n + k] = c * apk - s * aqk;
        m.data[q * n + k] = s * apk + c * aqk;
    }
    m.data[p * n + q] = 0.0;
    m.data[q * n + p] = 0.0;
}

/// Spectrum of the Cayley graph from its adjacency matrix.
pub fn oracle_spectrum(s: &CayleySubset) -> Result<Spectrum> {
    let n = s.group().order();
    if n > ORACLE_SIZE_LIMIT {
        return Err(Error::Guard {
            what: "oracle group order",
            value: n as u128,
            limit: ORACLE_SIZE_LIMIT as u128,
        });
    }
    let eig = eigenvalues_jacobi(&adjacency_matrix(s), DEFAULT_TOLERANCE)?;
    Ok(Spectrum::new(
        eig.into_iter().map(|v| (v, 1)).collect(),
        s.size(),
        SpectrumSource::Oracle,
    ))
}
