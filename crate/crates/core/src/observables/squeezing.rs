use nalgebra::{Matrix3, Vector3};

use super::{guard_ratio, hp::hp_moments};
use crate::error::{Error, Result};
use crate::lindblad::{expect, DensityMatrix};
use crate::params::{bloch_angles, rotation_matrix, BlochAngles, EffectiveParams, RotationMatrix};
use crate::spin::{build_spin_operators, SpinRep};

/// First and second moments of the spin in the frame of its numeric mean direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseMoments {
    pub mean: Vector3<f64>,
    pub angles: BlochAngles,
    /// J = R J′ with the mean spin along −z′.
    pub frame: RotationMatrix,
    /// Var J′_x, Var J′_y and the symmetrized covariance ½⟨{J′_x, J′_y}⟩ − ⟨J′_x⟩⟨J′_y⟩.
    pub var_x: f64,
    pub var_y: f64,
    pub cov_xy: f64,
}

impl TransverseMoments {
    /// Smallest variance over transverse directions.
    pub fn min_variance(&self) -> f64 {
        let mid = 0.5 * (self.var_x + self.var_y);
        let half = 0.5 * (self.var_x - self.var_y);
        mid - (half * half + self.cov_xy * self.cov_xy).sqrt()
    }
}

pub fn transverse_moments(rho: &DensityMatrix, rep: SpinRep) -> Result<TransverseMoments> {
    if rho.dim() != rep.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: rho.dim() });
    }
    let ops = build_spin_operators(rep);
    let j = [&ops.j_x, &ops.j_y, &ops.j_z];
    let mut mean = Vector3::zeros();
    for k in 0..3 {
        mean[k] = expect(rho, j[k])?.re;
    }
    let norm = mean.norm();
    if norm <= 1e-9 * rep.j().max(1.0) {
        return Err(Error::VanishingMeanSpin { norm });
    }
    let mut second = Matrix3::zeros();
    for k in 0..3 {
        for l in k..3 {
            let v = expect(rho, &(j[k] * j[l]))?.re;
            let v = if k == l { v } else { 0.5 * (v + expect(rho, &(j[l] * j[k]))?.re) };
            second[(k, l)] = v;
            second[(l, k)] = v;
        }
    }
    let cov = second - mean * mean.transpose();
    let angles = BlochAngles::from_mean_spin(&mean).expect("nonzero mean spin");
    let frame = rotation_matrix(&angles);
    let ex = frame.matrix().column(0).into_owned();
    let ey = frame.matrix().column(1).into_owned();
    Ok(TransverseMoments {
        mean,
        angles,
        frame,
        var_x: (ex.transpose() * cov * ex)[0],
        var_y: (ey.transpose() * cov * ey)[0],
        cov_xy: (ex.transpose() * cov * ey)[0],
    })
}

/// ξ² = N min_⊥ Var(J_⊥)/|⟨J⟩|², minimized over directions orthogonal to the mean spin.
pub fn spin_squeezing_numeric(rho: &DensityMatrix, rep: SpinRep) -> Result<f64> {
    let t = transverse_moments(rho, rep)?;
    Ok(rep.atoms() as f64 * t.min_variance() / t.mean.norm_squared())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingAnalytic {
    /// cos θ = √(1 − |Ω|²/Ω_c²).
    pub xi2: f64,
    /// 1 + 2⟨a†a⟩ − 2|⟨a²⟩| from the linearized moments; equals `xi2`.
    pub reconstructed: f64,
}

pub fn spin_squeezing_analytic(e: &EffectiveParams) -> Result<SqueezingAnalytic> {
    guard_ratio(e.drive_ratio())?;
    let angles = bloch_angles(e)?;
    let hp = hp_moments(&angles)?;
    Ok(SqueezingAnalytic {
        xi2: angles.theta.cos(),
        reconstructed: 1.0 + 2.0 * hp.occupation - 2.0 * hp.anomalous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::{steady_state, SteadyStateOptions};
    use crate::models::build_dicke_model;
    use num_complex::Complex64;

    #[test]
    fn coherent_state_is_unsqueezed() {
        for n in [1, 6, 31] {
            let rep = SpinRep::from_atoms(n);
            let rho = DensityMatrix::basis_state(rep.dim(), 0);
            assert!((spin_squeezing_numeric(&rho, rep).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_has_no_direction() {
        let rep = SpinRep::from_atoms(4);
        let rho = DensityMatrix::maximally_mixed(5);
        assert!(matches!(spin_squeezing_numeric(&rho, rep), Err(Error::VanishingMeanSpin { .. })));
    }

    #[test]
    fn analytic_values() {
        let e = EffectiveParams::at_drive_ratio(1.0, 0.3, 0.8, 0.4, 10).unwrap();
        let s = spin_squeezing_analytic(&e).unwrap();
        assert!((s.xi2 - 0.6).abs() < 1e-14);
        assert!((s.reconstructed - 0.6).abs() < 1e-14);
        let zero = EffectiveParams::new(1.0, 0.0, Complex64::new(0.0, 0.0), 10).unwrap();
        assert_eq!(spin_squeezing_analytic(&zero).unwrap().xi2, 1.0);
        let crit = EffectiveParams::at_drive_ratio(1.0, 0.0, 0.9995, 0.0, 10).unwrap();
        assert!(matches!(spin_squeezing_analytic(&crit), Err(Error::CriticalRegion { .. })));
        let above = EffectiveParams::at_drive_ratio(1.0, 0.0, 1.2, 0.0, 10).unwrap();
        assert!(matches!(spin_squeezing_analytic(&above), Err(Error::AboveThreshold { .. })));
    }

    #[test]
    fn driven_state_is_squeezed() {
        let e = EffectiveParams::at_drive_ratio(1.0, 0.0, 0.5, 0.0, 20).unwrap();
        let m = build_dicke_model(&e).unwrap();
        let (rho, _) = steady_state(&m.liouvillian, &SteadyStateOptions::default()).unwrap();
        let xi2 = spin_squeezing_numeric(&rho, m.rep).unwrap();
        assert!(xi2 < 1.0 && xi2 > 0.5, "{xi2}");
    }
}
