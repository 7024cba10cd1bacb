//! Stationary states of a Liouvillian.
//!
//! Three routes are available:
//!
//! * dense null space: SVD of the full D² × D² superoperator, for small D;
//! * sparse direct: the trace-normalized null vector from one banded LU solve. One
//!   diagonal equation of L is redundant (Tr L[ρ] = 0), so it is replaced by the
//!   normalization ρ_pp = 1; the result is rescaled to unit trace afterwards. Column
//!   stacking keeps the Dicke Liouvillian banded with half-width D + 1;
//! * long-time integration of dρ/dt = L[ρ] until the residual drops below tolerance.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::banded::BandLu;
use super::evolve::{Integrator, RkOptions};
use super::{DensityMatrix, Liouvillian};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    DenseNullspace,
    SparseDirect,
    LongTimeIntegration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateOptions {
    /// Forces a method; `None` selects by dimension.
    pub method: Option<SolveMethod>,
    /// Accept when ‖L vec ρ‖₂ ≤ `rel_tol` · ‖L‖_∞.
    pub rel_tol: f64,
    pub dense_max_dim: usize,
    pub direct_max_dim: usize,
    /// Upper bound on the banded factor's memory in bytes.
    pub direct_memory_limit: usize,
    /// Relative smallest singular value below which the stationary state counts as non-unique.
    pub uniqueness_tol: f64,
    pub check_uniqueness: bool,
    pub integration: RkOptions,
    /// Initial state for long-time integration; maximally mixed by default.
    pub initial: Option<DensityMatrix>,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            method: None,
            rel_tol: 1e-10,
            dense_max_dim: 16,
            direct_max_dim: 400,
            direct_memory_limit: 2 << 30,
            uniqueness_tol: 1e-6,
            check_uniqueness: true,
            integration: RkOptions::default(),
            initial: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyStateSolveReport {
    pub method: SolveMethod,
    /// ‖L vec ρ_ss‖₂.
    pub residual: f64,
    /// `residual / ‖L‖_∞`.
    pub relative_residual: f64,
    /// LU solves, SVDs, or RK steps, depending on the method.
    pub iterations: usize,
    pub wall_time: Duration,
    /// Estimated smallest relative singular value of the bordered system (or second-smallest
    /// of L on the dense route); `None` if not probed.
    pub uniqueness_margin: Option<f64>,
}

impl SteadyStateOptions {
    fn select(&self, l: &Liouvillian) -> SolveMethod {
        if let Some(m) = self.method {
            return m;
        }
        let d = l.dim();
        if d <= self.dense_max_dim {
            return SolveMethod::DenseNullspace;
        }
        let (kl, ku) = l.superoperator().bandwidth();
        if d <= self.direct_max_dim && BandLu::memory_estimate(d * d, kl, ku) <= self.direct_memory_limit {
            SolveMethod::SparseDirect
        } else {
            SolveMethod::LongTimeIntegration
        }
    }
}

pub fn steady_state(l: &Liouvillian, opts: &SteadyStateOptions) -> Result<(DensityMatrix, SteadyStateSolveReport)> {
    let start = Instant::now();
    let method = opts.select(l);
    let (vec, iterations, margin) = match method {
        SolveMethod::DenseNullspace => dense_nullspace(l, opts)?,
        SolveMethod::SparseDirect => sparse_direct(l, opts)?,
        SolveMethod::LongTimeIntegration => long_time(l, opts)?,
    };
    let d = l.dim();
    let rho = DensityMatrix::from_numeric(DMatrix::from_vec(d, d, vec))?;
    let residual = l.residual(&rho);
    let norm = l.norm_inf();
    let relative_residual = if norm > 0.0 { residual / norm } else { residual };
    if relative_residual > opts.rel_tol {
        return Err(Error::NoConvergence(format!(
            "{method:?} residual {relative_residual:.3e} above tolerance {:.1e}",
            opts.rel_tol
        )));
    }
    let report = SteadyStateSolveReport {
        method,
        residual,
        relative_residual,
        iterations,
        wall_time: start.elapsed(),
        uniqueness_margin: margin,
    };
    Ok((rho, report))
}

type Solution = (Vec<Complex64>, usize, Option<f64>);

fn dense_nullspace(l: &Liouvillian, opts: &SteadyStateOptions) -> Result<Solution> {
    let a = l.superoperator().to_dense();
    let svd = a.svd(false, true);
    let v_t = svd.v_t.as_ref().expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return Err(Error::NonUnique { sigma: 0.0 });
    }
    let margin = order.get(1).map(|&k| svd.singular_values[k] / smax);
    if let Some(m) = margin {
        if opts.check_uniqueness && m < opts.uniqueness_tol {
            return Err(Error::NonUnique { sigma: m });
        }
    }
    let row = v_t.row(order[0]);
    let v: Vec<Complex64> = row.iter().map(|z| z.conj()).collect();
    Ok((v, 1, margin))
}

fn sparse_direct(l: &Liouvillian, opts: &SteadyStateOptions) -> Result<Solution> {
    let d = l.dim();
    let n = d * d;
    let csr = l.superoperator();
    let (kl, ku) = csr.bandwidth();
    let scale = l.norm_inf();
    if scale == 0.0 {
        return Err(Error::NonUnique { sigma: 0.0 });
    }
    let mut pin = 0usize;
    let mut solves = 0;
    loop {
        let row = pin * (d + 1);
        let entries = csr
            .iter()
            .filter(|&(r, _, _)| r != row)
            .chain(std::iter::once((row, row, Complex64::new(scale, 0.0))));
        let lu = BandLu::factor(n, kl, ku, entries)?;
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        x[row] = Complex64::new(scale, 0.0);
        lu.solve(&mut x);
        solves += 1;
        let trace: Complex64 = (0..d).map(|k| x[k * (d + 1)]).sum();
        let pinned_weight = 1.0 / trace.norm();
        let best = (0..d)
            .max_by(|&a, &b| x[a * (d + 1)].re.total_cmp(&x[b * (d + 1)].re))
            .unwrap_or(0);
        // a tiny pinned population makes the normalization ill-conditioned
        if pinned_weight < 1e-6 && best != pin && solves < 2 {
            pin = best;
            continue;
        }
        let margin = if opts.check_uniqueness {
            let sigma = bordered_sigma_min(&lu, d, row, scale, 12) / scale;
            if sigma < opts.uniqueness_tol {
                return Err(Error::NonUnique { sigma });
            }
            Some(sigma)
        } else {
            None
        };
        for v in x.iter_mut() {
            *v /= trace;
        }
        return Ok((x, solves, margin));
    }
}

/// Smallest singular value of L with row `row` replaced by `scale`·(trace functional)/√D,
/// by inverse iteration. The pinned factorization `lu` differs from that matrix in one row,
/// so its inverse is applied through the Sherman–Morrison formula.
fn bordered_sigma_min(lu: &BandLu, d: usize, row: usize, scale: f64, iterations: usize) -> f64 {
    let n = lu.dim();
    let zero = Complex64::new(0.0, 0.0);
    // bordered row minus pinned row: w = scale·(t/√D − e_row)
    let mut w = vec![zero; n];
    for k in 0..d {
        w[k * (d + 1)] = Complex64::new(scale / (d as f64).sqrt(), 0.0);
    }
    w[row] -= scale;
    let dot = |a: &[Complex64], b: &[Complex64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<Complex64>();
    let mut q = vec![zero; n];
    q[row] = Complex64::new(1.0, 0.0);
    lu.solve(&mut q);
    let denom = 1.0 + dot(&w, &q);
    let mut q_adj: Vec<Complex64> = w.iter().map(|z| z.conj()).collect();
    lu.solve_adjoint(&mut q_adj);
    let denom_adj = denom.conj();
    if denom.norm() < f64::EPSILON {
        return 0.0;
    }

    let norm = |x: &[Complex64]| x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, 0.7 * k as f64 + 0.1 * (k % 7) as f64))
        .collect();
    let nv = norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut lambda = 0.0;
    for _ in 0..iterations {
        lu.solve_adjoint(&mut v);
        let f = v[row] / denom_adj;
        v.iter_mut().zip(&q_adj).for_each(|(x, y)| *x -= y * f);
        lu.solve(&mut v);
        let f = dot(&w, &v) / denom;
        v.iter_mut().zip(&q).for_each(|(x, y)| *x -= y * f);
        lambda = norm(&v);
        if !(lambda.is_finite() && lambda > 0.0) {
            return 0.0;
        }
        v.iter_mut().for_each(|z| *z /= lambda);
    }
    1.0 / lambda.sqrt()
}

fn long_time(l: &Liouvillian, opts: &SteadyStateOptions) -> Result<Solution> {
    let d = l.dim();
    let rho0 = opts.initial.clone().unwrap_or_else(|| DensityMatrix::maximally_mixed(d));
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho0.dim() });
    }
    let norm = l.norm_inf();
    if norm == 0.0 {
        return Ok((rho0.matrix().as_slice().to_vec(), 0, None));
    }
    let mut y = rho0.matrix().as_slice().to_vec();
    // near the fixed point the residual settles at roughly rtol·‖L‖
    let mut rk = opts.integration;
    rk.rtol = rk.rtol.min(0.01 * opts.rel_tol);
    let mut integ = Integrator::new(l, &y, rk);
    let mut t = 0.0;
    let mut window = 10.0 / norm;
    let mut best = f64::INFINITY;
    let mut stalled = 0;
    loop {
        let t_end = t + window;
        integ.advance(&mut y, &mut t, t_end)?;
        let tr: Complex64 = (0..d).map(|k| y[k * (d + 1)]).sum();
        let r = l.apply_vec(&y);
        let res = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / tr.norm();
        // leave headroom for the cleanup in DensityMatrix::from_numeric
        if res <= 0.1 * opts.rel_tol * norm {
            return Ok((y, integ.steps, None));
        }
        if res < 0.5 * best {
            best = res;
            stalled = 0;
        } else {
            stalled += 1;
        }
        if stalled >= 3 && best <= 0.5 * opts.rel_tol * norm {
            return Ok((y, integ.steps, None));
        }
        window *= 1.5;
    }
}
