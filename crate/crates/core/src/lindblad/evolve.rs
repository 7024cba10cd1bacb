//! Adaptive Dormand–Prince 5(4) integration of dx/dt = L x.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DensityMatrix, Liouvillian};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

/// Evolved states must stay within this of unit trace and Hermiticity before cleanup.
const EVOLUTION_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RkOptions {
    pub rtol: f64,
    /// Absolute tolerance relative to the largest entry of the initial vector.
    pub atol: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
}

impl Default for RkOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-13, max_steps: 20_000_000, initial_step: None }
    }
}

// Dormand–Prince tableau (nodes unused: L is time-independent)
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b − b̂ (error weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Stateful integrator for a fixed generator; keeps the step size between calls.
pub(crate) struct Integrator<'a> {
    op: &'a CsrMatrix,
    opts: RkOptions,
    atol: f64,
    h: f64,
    pub steps: usize,
    k: [Vec<Complex64>; 7],
    tmp: Vec<Complex64>,
    fsal_valid: bool,
}

impl<'a> Integrator<'a> {
    pub fn new(l: &'a Liouvillian, y0: &[Complex64], opts: RkOptions) -> Self {
        let n = y0.len();
        let ymax = y0.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let h = opts.initial_step.unwrap_or(0.01 / l.norm_inf().max(1e-300));
        let zero = || vec![Complex64::new(0.0, 0.0); n];
        Self {
            op: l.superoperator(),
            opts,
            atol: opts.atol * ymax,
            h,
            steps: 0,
            k: [zero(), zero(), zero(), zero(), zero(), zero(), zero()],
            tmp: zero(),
            fsal_valid: false,
        }
    }

    fn stage(&mut self, y: &[Complex64], h: f64, coeffs: &[(usize, f64)], out: usize) {
        for (i, t) in self.tmp.iter_mut().enumerate() {
            let mut acc = y[i];
            for &(s, a) in coeffs {
                acc += self.k[s][i] * (h * a);
            }
            *t = acc;
        }
        let (tmp, k) = (&self.tmp, &mut self.k);
        self.op.mul_vec_into(tmp, &mut k[out]);
    }

    /// Advances `y` from `*t` to exactly `t_end`.
    pub fn advance(&mut self, y: &mut [Complex64], t: &mut f64, t_end: f64) -> Result<()> {
        while *t < t_end {
            if self.steps >= self.opts.max_steps {
                return Err(Error::NoConvergence(format!("step budget {} exhausted", self.opts.max_steps)));
            }
            let mut h = self.h.min(t_end - *t);
            let last = h >= t_end - *t;
            if h < 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { t: *t });
            }
            if !self.fsal_valid {
                let (k, _) = self.k.split_at_mut(1);
                self.op.mul_vec_into(y, &mut k[0]);
                self.fsal_valid = true;
            }
            self.stage(y, h, &[(0, A21)], 1);
            self.stage(y, h, &[(0, A31), (1, A32)], 2);
            self.stage(y, h, &[(0, A41), (1, A42), (2, A43)], 3);
            self.stage(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)], 4);
            self.stage(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], 5);
            // 5th-order solution into tmp, then k7 = f(y_new)
            for i in 0..y.len() {
                self.tmp[i] = y[i]
                    + (self.k[0][i] * B1 + self.k[2][i] * B3 + self.k[3][i] * B4 + self.k[4][i] * B5 + self.k[5][i] * B6) * h;
            }
            {
                let (tmp, k) = (&self.tmp, &mut self.k);
                self.op.mul_vec_into(tmp, &mut k[6]);
            }
            let mut err_sq = 0.0;
            for i in 0..y.len() {
                let e = (self.k[0][i] * E1
                    + self.k[2][i] * E3
                    + self.k[3][i] * E4
                    + self.k[4][i] * E5
                    + self.k[5][i] * E6
                    + self.k[6][i] * E7)
                    * h;
                let sc = self.atol + self.opts.rtol * y[i].norm().max(self.tmp[i].norm());
                err_sq += (e.norm() / sc).powi(2);
            }
            let err = (err_sq / y.len().max(1) as f64).sqrt();
            if !err.is_finite() {
                self.h = h * 0.2;
                self.steps += 1;
                continue;
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            self.steps += 1;
            if err <= 1.0 {
                *t = if last { t_end } else { *t + h };
                y.copy_from_slice(&self.tmp);
                self.k.swap(0, 6);
                // keep the controller's proposal when the step was clipped to the output time
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                h *= factor.min(1.0);
                self.h = h;
            }
        }
        Ok(())
    }
}

/// Integrates a column-stacked vector and returns it at each time in `t_grid`
/// (measured from 0; `t_grid` must be non-decreasing and non-negative).
pub fn evolve_raw(
    l: &Liouvillian,
    x0: &[Complex64],
    t_grid: &[f64],
    opts: RkOptions,
) -> Result<Vec<Vec<Complex64>>> {
    let n = l.dim() * l.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) || t_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("time grid must be finite, non-negative and sorted".into()));
    }
    let mut y = x0.to_vec();
    let mut t = 0.0;
    let mut integ = Integrator::new(l, x0, opts);
    let mut out = Vec::with_capacity(t_grid.len());
    for &t_out in t_grid {
        integ.advance(&mut y, &mut t, t_out)?;
        out.push(y.clone());
    }
    Ok(out)
}

/// ρ(t) = e^{Lt} ρ₀ on `t_grid`.
pub fn time_evolve(
    l: &Liouvillian,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    opts: RkOptions,
) -> Result<Vec<DensityMatrix>> {
    let d = l.dim();
    if rho0.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho0.dim() });
    }
    evolve_raw(l, rho0.matrix().as_slice(), t_grid, opts)?
        .into_iter()
        .map(|v| {
            let m = DMatrix::from_vec(d, d, v);
            let tr_err = (m.trace() - Complex64::new(1.0, 0.0)).norm();
            let herm_err = (&m - m.adjoint()).norm();
            if tr_err > EVOLUTION_DRIFT_TOL || herm_err > EVOLUTION_DRIFT_TOL {
                return Err(Error::InvalidState(format!(
                    "evolution drift: trace error {tr_err:.3e}, hermiticity error {herm_err:.3e}"
                )));
            }
            DensityMatrix::from_numeric(m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{build_liouvillian, expect};
    use crate::operator::{Basis, OperatorMatrix};
    use crate::spin::{build_spin_operators, SpinRep};

    #[test]
    fn zero_generator_keeps_state() {
        let zero = OperatorMatrix::zeros(3, Basis::Generic);
        let l = build_liouvillian(&zero, &[]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(3);
        for rho in time_evolve(&l, &rho0, &[0.0, 1.0, 10.0], RkOptions::default()).unwrap() {
            assert_eq!(rho, rho0);
        }
    }

    #[test]
    fn single_atom_decay_is_exponential() {
        let ops = build_spin_operators(SpinRep::from_atoms(1));
        let gamma = 1.7;
        let l = build_liouvillian(&OperatorMatrix::zeros(2, Basis::Dicke), &[(gamma, ops.j_minus.clone())]).unwrap();
        let excited = DensityMatrix::basis_state(2, 1);
        let proj = OperatorMatrix::from_diagonal(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], Basis::Dicke);
        let times = [0.5 / gamma, 1.0 / gamma, 2.0 / gamma];
        let states = time_evolve(&l, &excited, &times, RkOptions::default()).unwrap();
        for (t, rho) in times.iter().zip(&states) {
            let pe = expect(rho, &proj).unwrap().re;
            assert!((pe - (-gamma * t).exp()).abs() < 1e-8, "t={t}: {pe}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let zero = OperatorMatrix::zeros(2, Basis::Generic);
        let l = build_liouvillian(&zero, &[]).unwrap();
        let rho0 = DensityMatrix::basis_state(2, 0);
        assert!(time_evolve(&l, &rho0, &[1.0, 0.5], RkOptions::default()).is_err());
        assert!(time_evolve(&l, &rho0, &[-1.0], RkOptions::default()).is_err());
        let rho3 = DensityMatrix::basis_state(3, 0);
        assert!(time_evolve(&l, &rho3, &[1.0], RkOptions::default()).is_err());
    }

    #[test]
    fn step_budget() {
        let ops = build_spin_operators(SpinRep::from_atoms(4));
        let l = build_liouvillian(&ops.j_x, &[(1.0, ops.j_minus.clone())]).unwrap();
        let opts = RkOptions { max_steps: 10, ..RkOptions::default() };
        let r = time_evolve(&l, &DensityMatrix::basis_state(5, 0), &[100.0], opts);
        assert!(matches!(r, Err(Error::NoConvergence(_))));
    }
}
