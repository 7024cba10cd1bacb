use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity and trace tolerance of a valid state.
const STRICT_TOL: f64 = 1e-12;
/// Eigenvalues in (−PSD_FLOOR, 0) are treated as rounding and floored.
const PSD_FLOOR: f64 = 1e-8;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates `rho` without modifying it.
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
            return Err(Error::InvalidState("matrix must be square and non-empty".into()));
        }
        let herm = (&rho - rho.adjoint()).norm();
        if herm > STRICT_TOL {
            return Err(Error::InvalidState(format!("hermiticity error {herm:.3e}")));
        }
        let tr = rho.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STRICT_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = min_eigenvalue(&rho);
        if min < -PSD_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { rho })
    }

    /// Cleans up a numerically computed state: Hermitian part, unit trace, and an eigenvalue
    /// floor when the most negative eigenvalue lies in (−1e-8, 0). Larger violations fail.
    pub fn from_numeric(mut m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::InvalidState("matrix must be square and non-empty".into()));
        }
        m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        let tr = m.trace().re;
        if !(tr.abs() > 0.0 && tr.is_finite()) {
            return Err(Error::InvalidState(format!("cannot normalize trace {tr}")));
        }
        m /= Complex64::new(tr, 0.0);
        let eig = SymmetricEigen::new(m.clone());
        let min = eig.eigenvalues.min();
        if min < -PSD_FLOOR {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        if min < 0.0 {
            let floored = eig.eigenvalues.map(|v| v.max(0.0));
            let total: f64 = floored.sum();
            let q = &eig.eigenvectors;
            let diag = DMatrix::from_diagonal(&floored.map(|v| Complex64::new(v / total, 0.0)));
            m = q * diag * q.adjoint();
            m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        }
        Ok(Self { rho: m })
    }

    /// |k⟩⟨k| in a `dim`-dimensional space.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut rho = DMatrix::zeros(dim, dim);
        rho[(k, k)] = Complex64::new(1.0, 0.0);
        Self { rho }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { rho: DMatrix::identity(dim, dim) / Complex64::new(dim as f64, 0.0) }
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.rho
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.rho)
    }

    /// ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        let d = &self.rho - &other.rho;
        let d = (&d + d.adjoint()) * Complex64::new(0.5, 0.0);
        0.5 * SymmetricEigen::new(d).eigenvalues.iter().map(|v| v.abs()).sum::<f64>()
    }
}

fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.min()
}
