//! Collective-spin and single-mode bosonic operators in explicit matrix form.
//!
//! Dicke states |j,m⟩ are indexed by `m + j`, so index 0 is the all-ground state m = -j.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{Basis, OperatorMatrix};
use crate::sparse::CsrMatrix;

/// Default cap on the dimension of a tensor product.
pub const DEFAULT_TENSOR_CAP: usize = 10_000;

/// Spin-j representation of SU(2), stored as the integer 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinRep {
    two_j: u32,
}

impl SpinRep {
    pub fn from_two_j(two_j: u32) -> Self {
        Self { two_j }
    }

    /// Symmetric manifold of `n_atoms` two-level atoms, j = N/2.
    pub fn from_atoms(n_atoms: u32) -> Self {
        Self { two_j: n_atoms }
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    pub fn two_j(&self) -> u32 {
        self.two_j
    }

    pub fn atoms(&self) -> u32 {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Magnetic quantum number of basis index `k`.
    pub fn m(&self, k: usize) -> f64 {
        k as f64 - self.j()
    }
}

/// Truncated Fock space with photon numbers 0 … cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockRep {
    cutoff: usize,
}

impl FockRep {
    pub fn new(cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidParameter("Fock cutoff must be at least 1".into()));
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }
}

#[derive(Debug, Clone)]
pub struct SpinOperators {
    pub rep: SpinRep,
    pub j_minus: OperatorMatrix,
    pub j_plus: OperatorMatrix,
    pub j_x: OperatorMatrix,
    pub j_y: OperatorMatrix,
    pub j_z: OperatorMatrix,
}

impl SpinOperators {
    pub fn identity(&self) -> OperatorMatrix {
        OperatorMatrix::identity(self.rep.dim(), Basis::Dicke)
    }

    /// J_x² + J_y² + J_z².
    pub fn casimir(&self) -> OperatorMatrix {
        let xx = &self.j_x * &self.j_x;
        let yy = &self.j_y * &self.j_y;
        let zz = &self.j_z * &self.j_z;
        &(&xx + &yy) + &zz
    }
}

pub fn build_spin_operators(rep: SpinRep) -> SpinOperators {
    let dim = rep.dim();
    let j = rep.j();
    // ⟨m-1|J_-|m⟩ = √(j(j+1) − m(m−1)), column k → row k−1
    let lowering: Vec<_> = (1..dim)
        .map(|k| {
            let m = rep.m(k);
            (k - 1, k, Complex64::new((j * (j + 1.0) - m * (m - 1.0)).sqrt(), 0.0))
        })
        .collect();
    let j_minus_csr = CsrMatrix::from_triplets(dim, dim, lowering);
    let j_plus_csr = j_minus_csr.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let j_x = j_plus_csr.add(&j_minus_csr).scale(half);
    // (J_+ − J_-)/(2i) = −(i/2)(J_+ − J_-)
    let j_y = j_plus_csr
        .add(&j_minus_csr.scale(Complex64::new(-1.0, 0.0)))
        .scale(Complex64::new(0.0, -0.5));
    let diag: Vec<_> = (0..dim).map(|k| Complex64::new(rep.m(k), 0.0)).collect();
    SpinOperators {
        rep,
        j_minus: OperatorMatrix::from_csr(j_minus_csr, Basis::Dicke),
        j_plus: OperatorMatrix::from_csr(j_plus_csr, Basis::Dicke),
        j_x: OperatorMatrix::from_csr(j_x, Basis::Dicke),
        j_y: OperatorMatrix::from_csr(j_y, Basis::Dicke),
        j_z: OperatorMatrix::from_diagonal(&diag, Basis::Dicke),
    }
}

#[derive(Debug, Clone)]
pub struct FockOperators {
    pub rep: FockRep,
    pub c: OperatorMatrix,
    pub c_dagger: OperatorMatrix,
}

impl FockOperators {
    pub fn number(&self) -> OperatorMatrix {
        &self.c_dagger * &self.c
    }
}

pub fn build_fock_operators(rep: FockRep) -> FockOperators {
    let trip = (1..rep.dim())
        .map(|n| (n - 1, n, Complex64::new((n as f64).sqrt(), 0.0)))
        .collect();
    let c = OperatorMatrix::from_triplets(rep.dim(), trip, Basis::Fock);
    let c_dagger = c.adjoint();
    FockOperators { rep, c, c_dagger }
}

/// Kronecker product `a ⊗ b` with the index of `a` varying slowest.
pub fn tensor(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    tensor_with_cap(a, b, DEFAULT_TENSOR_CAP)
}

pub fn tensor_with_cap(a: &OperatorMatrix, b: &OperatorMatrix, cap: usize) -> Result<OperatorMatrix> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::DimensionCap { dim: usize::MAX, cap })?;
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let basis = match (a.basis(), b.basis()) {
        (Basis::Dicke, Basis::Fock) => Basis::Product,
        _ => Basis::Generic,
    };
    Ok(OperatorMatrix::from_csr(a.to_csr().kron(&b.to_csr()), basis))
}

/// Outcome of a Fock-cutoff convergence check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffCheck {
    pub cutoff: usize,
    pub value: f64,
    pub value_extended: f64,
    pub drift: f64,
    pub converged: bool,
}

/// Evaluates `observable` at `cutoff` and `cutoff + 5` and reports whether it drifted by
/// less than `tol`.
pub fn check_fock_convergence<F>(cutoff: usize, tol: f64, mut observable: F) -> Result<CutoffCheck>
where
    F: FnMut(FockRep) -> Result<f64>,
{
    let value = observable(FockRep::new(cutoff)?)?;
    let value_extended = observable(FockRep::new(cutoff + 5)?)?;
    let drift = (value_extended - value).abs();
    Ok(CutoffCheck { cutoff, value, value_extended, drift, converged: drift < tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn rel_err(a: &OperatorMatrix, b: &OperatorMatrix) -> f64 {
        (a - b).norm_frobenius() / b.norm_frobenius().max(1e-300)
    }

    #[test]
    fn spin_half_is_pauli() {
        let ops = build_spin_operators(SpinRep::from_atoms(1));
        let jz = ops.j_z.to_dense();
        assert_eq!(jz, DMatrix::from_row_slice(2, 2, &[c(-0.5), c(0.0), c(0.0), c(0.5)]));
        let jm = ops.j_minus.to_dense();
        // lowering |↑⟩ (index 1) to |↓⟩ (index 0)
        assert_eq!(jm, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]));
    }

    #[test]
    fn casimir_j25() {
        let rep = SpinRep::from_atoms(50);
        let ops = build_spin_operators(rep);
        let expected = &ops.identity() * (rep.j() * (rep.j() + 1.0));
        assert!(rel_err(&ops.casimir(), &expected) < 1e-14);
    }

    #[test]
    fn su2_commutators_up_to_j250() {
        for two_j in [1u32, 2, 7, 50, 129, 500] {
            let ops = build_spin_operators(SpinRep::from_two_j(two_j));
            let pm = ops.j_plus.commutator(&ops.j_minus);
            assert!(rel_err(&pm, &(&ops.j_z * 2.0)) <= 1e-12, "2j={two_j}");
            assert!(rel_err(&ops.j_z.commutator(&ops.j_plus), &ops.j_plus) <= 1e-12);
            assert!(rel_err(&ops.j_z.commutator(&ops.j_minus), &(-&ops.j_minus)) <= 1e-12);
            assert_eq!(ops.j_x.hermiticity_error(), 0.0);
            assert!(ops.j_y.hermiticity_error() == 0.0);
            assert_eq!(ops.j_z.hermiticity_error(), 0.0);
            assert!((&ops.j_plus - &ops.j_minus.adjoint()).norm_frobenius() == 0.0);
        }
    }

    #[test]
    fn fock_operators() {
        let f = build_fock_operators(FockRep::new(1).unwrap());
        assert_eq!(f.c.to_dense(), DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]));

        let f = build_fock_operators(FockRep::new(10).unwrap());
        let n = f.number().to_dense();
        for k in 0..11 {
            assert!((n[(k, k)] - c(k as f64)).norm() < 1e-13);
        }
        let comm = f.c.commutator(&f.c_dagger).to_dense();
        for r in 0..11 {
            for col in 0..11 {
                let expected = if r == col && r < 10 { c(1.0) } else { c(0.0) };
                if r == 10 && col == 10 {
                    // truncation corner: −n_max
                    assert!((comm[(r, col)] - c(-10.0)).norm() < 1e-12);
                } else {
                    assert!((comm[(r, col)] - expected).norm() < 1e-12);
                }
            }
        }
        assert!(FockRep::new(0).is_err());
    }

    #[test]
    fn tensor_identities() {
        let i2 = OperatorMatrix::identity(2, Basis::Generic);
        let i3 = OperatorMatrix::identity(3, Basis::Generic);
        let i6 = OperatorMatrix::identity(6, Basis::Generic);
        assert_eq!((&tensor(&i2, &i3).unwrap() - &i6).norm_frobenius(), 0.0);

        let a = OperatorMatrix::from_dense(
            DMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 + 0.3 * j as f64, j as f64 - 1.0)),
            Basis::Generic,
        );
        let b = OperatorMatrix::from_dense(
            DMatrix::from_fn(3, 3, |i, j| Complex64::new((i * j) as f64 - 0.7, 0.5 * i as f64)),
            Basis::Generic,
        );
        let t = tensor(&a, &b).unwrap();
        assert!((t.trace() - a.trace() * b.trace()).norm() < 1e-12);
        let mixed = &tensor(&a, &i3).unwrap() * &tensor(&i3, &b).unwrap();
        assert!((&mixed - &t).norm_frobenius() < 1e-12);
        // first factor slow: (a⊗b)[(i1*3+i2),(j1*3+j2)] = a[i1,j1] b[i2,j2]
        assert!((t.get(4, 7) - a.get(1, 2) * b.get(1, 1)).norm() < 1e-14);
    }

    #[test]
    fn tensor_cap() {
        let a = OperatorMatrix::identity(100, Basis::Generic);
        let err = tensor_with_cap(&a, &a, 5000).unwrap_err();
        assert_eq!(err, Error::DimensionCap { dim: 10_000, cap: 5000 });
    }

    #[test]
    fn fock_convergence_helper() {
        // observable saturating in the cutoff
        let check = check_fock_convergence(20, 1e-6, |r| Ok(1.0 - 0.5f64.powi(r.cutoff() as i32))).unwrap();
        assert!(check.converged);
        let check = check_fock_convergence(2, 1e-6, |r| Ok(1.0 - 0.5f64.powi(r.cutoff() as i32))).unwrap();
        assert!(!check.converged);
    }
}
