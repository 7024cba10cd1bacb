use num_complex::Complex64;

use super::evolve::{evolve_raw, RkOptions};
use super::{trace_product, DensityMatrix, Liouvillian};
use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;

/// Stationary two-time correlation ⟨A(0) B(τ)⟩ = Tr(B e^{Lτ}[ρ_ss A]) on `tau_grid`
/// (quantum regression).
pub fn two_time_correlator(
    l: &Liouvillian,
    rho_ss: &DensityMatrix,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    tau_grid: &[f64],
    opts: RkOptions,
) -> Result<Vec<Complex64>> {
    let d = l.dim();
    for dim in [rho_ss.dim(), a.dim(), b.dim()] {
        if dim != d {
            return Err(Error::DimensionMismatch { expected: d, found: dim });
        }
    }
    let x0 = rho_ss.matrix() * a.to_dense();
    let states = evolve_raw(l, x0.as_slice(), tau_grid, opts)?;
    Ok(states.iter().map(|x| trace_product(b, x, d)).collect())
}
