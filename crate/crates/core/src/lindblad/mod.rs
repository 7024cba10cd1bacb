//! Finite-dimensional Lindblad machinery.
//!
//! Density matrices are vectorized by column stacking, `vec(ρ)[i + D·j] = ρ_ij`, which is
//! also nalgebra's storage order. Under this convention `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`, so
//!
//! ```text
//! L = −i(I ⊗ H − Hᵀ ⊗ I) + Σ_k γ_k (C̄_k ⊗ C_k − ½ I ⊗ C_k†C_k − ½ (C_k†C_k)ᵀ ⊗ I)
//! ```
//!
//! with the left Kronecker factor acting on the column index j.

mod banded;
mod correlator;
mod density;
mod evolve;
mod steady;

pub use banded::BandLu;
pub use correlator::two_time_correlator;
pub use density::DensityMatrix;
pub use evolve::{evolve_raw, time_evolve, RkOptions};
pub use steady::{steady_state, SolveMethod, SteadyStateOptions, SteadyStateSolveReport};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone)]
pub struct Liouvillian {
    dim: usize,
    superop: CsrMatrix,
    hamiltonian: OperatorMatrix,
    collapse: Vec<(f64, OperatorMatrix)>,
}

/// Assembles the sparse superoperator for dρ/dt = −i[H, ρ] + Σ γ_k D[C_k]ρ.
pub fn build_liouvillian(
    hamiltonian: &OperatorMatrix,
    collapse: &[(f64, OperatorMatrix)],
) -> Result<Liouvillian> {
    let dim = hamiltonian.dim();
    for (rate, op) in collapse {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: op.dim() });
        }
        if !(*rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter(format!("collapse rate must be non-negative, got {rate}")));
        }
    }
    let id = CsrMatrix::identity(dim);
    let h = hamiltonian.to_csr();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut superop = id
        .kron(&h)
        .add(&h.transpose().kron(&id).scale(Complex64::new(-1.0, 0.0)))
        .scale(minus_i);
    for (rate, op) in collapse {
        if *rate == 0.0 {
            continue;
        }
        let c = op.to_csr();
        let cdc = c.adjoint().matmul(&c);
        let half = Complex64::new(-0.5, 0.0);
        let term = c
            .conj()
            .kron(&c)
            .add(&id.kron(&cdc).scale(half))
            .add(&cdc.transpose().kron(&id).scale(half));
        superop = superop.add(&term.scale(Complex64::new(*rate, 0.0)));
    }
    Ok(Liouvillian {
        dim,
        superop,
        hamiltonian: hamiltonian.clone(),
        collapse: collapse.to_vec(),
    })
}

impl Liouvillian {
    /// Hilbert-space dimension D (the superoperator is D² × D²).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn superoperator(&self) -> &CsrMatrix {
        &self.superop
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.hamiltonian
    }

    pub fn collapse_ops(&self) -> &[(f64, OperatorMatrix)] {
        &self.collapse
    }

    pub fn norm_inf(&self) -> f64 {
        self.superop.norm_inf()
    }

    /// L acting on a column-stacked vector.
    pub fn apply_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.superop.mul_vec(x)
    }

    pub fn apply(&self, rho: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
        if rho.nrows() != self.dim || rho.ncols() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.nrows() });
        }
        let out = self.superop.mul_vec(rho.as_slice());
        Ok(DMatrix::from_vec(self.dim, self.dim, out))
    }

    /// ‖L vec(ρ)‖₂.
    pub fn residual(&self, rho: &DensityMatrix) -> f64 {
        let r = self.superop.mul_vec(rho.matrix().as_slice());
        r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Tr(Aρ).
pub fn expect(rho: &DensityMatrix, op: &OperatorMatrix) -> Result<Complex64> {
    if op.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: op.dim() });
    }
    Ok(trace_product(op, rho.matrix().as_slice(), rho.dim()))
}

/// Tr(A X) for X given column-stacked.
pub(crate) fn trace_product(op: &OperatorMatrix, x: &[Complex64], dim: usize) -> Complex64 {
    op.entries()
        .into_iter()
        .map(|(i, j, a)| a * x[j + dim * i])
        .sum()
}
