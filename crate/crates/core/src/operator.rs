//! Square complex operators with dense or sparse storage.
//!
//! Operators of dimension above [`DENSE_MAX_DIM`] are kept in CSR form, smaller ones dense.
//! Arithmetic between mixed storages converts to whichever the result dimension prefers,
//! so the representation of an operator never changes its value.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::sparse::CsrMatrix;

/// Largest dimension stored densely.
pub const DENSE_MAX_DIM: usize = 64;

/// Which Hilbert space an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// Symmetric Dicke manifold, |j,m⟩ with m = -j … +j.
    Dicke,
    /// Truncated Fock space |0⟩ … |n_max⟩.
    Fock,
    /// Spin ⊗ Fock, spin index slow.
    Product,
    Generic,
}

impl Basis {
    fn combine(self, other: Basis) -> Basis {
        if self == other {
            self
        } else {
            Basis::Generic
        }
    }
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(DMatrix<Complex64>),
    Sparse(CsrMatrix),
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    storage: Storage,
    basis: Basis,
}

impl OperatorMatrix {
    pub fn from_dense(m: DMatrix<Complex64>, basis: Basis) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operators must be square");
        let storage = if m.nrows() > DENSE_MAX_DIM {
            Storage::Sparse(CsrMatrix::from_dense(&m))
        } else {
            Storage::Dense(m)
        };
        Self { storage, basis }
    }

    pub fn from_csr(m: CsrMatrix, basis: Basis) -> Self {
        assert_eq!(m.nrows(), m.ncols(), "operators must be square");
        let storage = if m.nrows() > DENSE_MAX_DIM {
            Storage::Sparse(m)
        } else {
            Storage::Dense(m.to_dense())
        };
        Self { storage, basis }
    }

    pub fn from_triplets(dim: usize, triplets: Vec<(usize, usize, Complex64)>, basis: Basis) -> Self {
        Self::from_csr(CsrMatrix::from_triplets(dim, dim, triplets), basis)
    }

    pub fn from_diagonal(diag: &[Complex64], basis: Basis) -> Self {
        let trip = diag.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(diag.len(), trip, basis)
    }

    pub fn identity(dim: usize, basis: Basis) -> Self {
        Self::from_csr(CsrMatrix::identity(dim), basis)
    }

    pub fn zeros(dim: usize, basis: Basis) -> Self {
        Self::from_csr(CsrMatrix::zeros(dim, dim), basis)
    }

    pub fn dim(&self) -> usize {
        match &self.storage {
            Storage::Dense(m) => m.nrows(),
            Storage::Sparse(m) => m.nrows(),
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match &self.storage {
            Storage::Dense(m) => m.clone(),
            Storage::Sparse(m) => m.to_dense(),
        }
    }

    pub fn to_csr(&self) -> CsrMatrix {
        match &self.storage {
            Storage::Dense(m) => CsrMatrix::from_dense(m),
            Storage::Sparse(m) => m.clone(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match &self.storage {
            Storage::Dense(m) => m[(i, j)],
            Storage::Sparse(m) => m.get(i, j),
        }
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> Vec<(usize, usize, Complex64)> {
        match &self.storage {
            Storage::Dense(m) => {
                let mut out = Vec::new();
                for c in 0..m.ncols() {
                    for r in 0..m.nrows() {
                        let v = m[(r, c)];
                        if v != Complex64::new(0.0, 0.0) {
                            out.push((r, c, v));
                        }
                    }
                }
                out
            }
            Storage::Sparse(m) => m.iter().collect(),
        }
    }

    fn map_storage(
        &self,
        dense: impl FnOnce(&DMatrix<Complex64>) -> DMatrix<Complex64>,
        sparse: impl FnOnce(&CsrMatrix) -> CsrMatrix,
    ) -> Self {
        let storage = match &self.storage {
            Storage::Dense(m) => Storage::Dense(dense(m)),
            Storage::Sparse(m) => Storage::Sparse(sparse(m)),
        };
        Self { storage, basis: self.basis }
    }

    pub fn adjoint(&self) -> Self {
        self.map_storage(|m| m.adjoint(), |m| m.adjoint())
    }

    pub fn transpose(&self) -> Self {
        self.map_storage(|m| m.transpose(), |m| m.transpose())
    }

    pub fn conj(&self) -> Self {
        self.map_storage(|m| m.map(|z| z.conj()), |m| m.conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map_storage(|m| m * s, |m| m.scale(s))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        let basis = self.basis.combine(other.basis);
        match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => Self::from_dense(a * b, basis),
            _ => Self::from_csr(self.to_csr().matmul(&other.to_csr()), basis),
        }
    }

    fn add_scaled(&self, other: &Self, s: f64) -> Self {
        assert_eq!(self.dim(), other.dim(), "operator dimension mismatch");
        let basis = self.basis.combine(other.basis);
        match (&self.storage, &other.storage) {
            (Storage::Dense(a), Storage::Dense(b)) => {
                Self::from_dense(a + b * Complex64::new(s, 0.0), basis)
            }
            _ => Self::from_csr(
                self.to_csr().add(&other.to_csr().scale(Complex64::new(s, 0.0))),
                basis,
            ),
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn trace(&self) -> Complex64 {
        match &self.storage {
            Storage::Dense(m) => m.trace(),
            Storage::Sparse(m) => m.trace(),
        }
    }

    pub fn norm_frobenius(&self) -> f64 {
        match &self.storage {
            Storage::Dense(m) => m.norm(),
            Storage::Sparse(m) => m.norm_frobenius(),
        }
    }

    /// ‖A − A†‖_F.
    pub fn hermiticity_error(&self) -> f64 {
        (self - &self.adjoint()).norm_frobenius()
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        match &self.storage {
            Storage::Dense(m) => {
                let v = m * nalgebra::DVector::from_column_slice(x);
                v.as_slice().to_vec()
            }
            Storage::Sparse(m) => m.mul_vec(x),
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.add_scaled(rhs, 1.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.add_scaled(rhs, -1.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs)
    }
}

impl Mul<Complex64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Complex64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}
