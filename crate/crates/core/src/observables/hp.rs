use num_complex::Complex64;

use super::{guard_angles, squeezing::transverse_moments};
use crate::error::Result;
use crate::lindblad::DensityMatrix;
use crate::params::{bloch_angles, BlochAngles, EffectiveParams};
use crate::spin::SpinRep;

/// Decay rate N cosθ γ/2 and frequency N cosθ Δ of the noise kernel in B(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRates {
    pub relaxation: f64,
    pub frequency: f64,
}

/// Linearized spin fluctuations a = √N[(1+cosθ)/2 e^{iφ} B + (1−cosθ)/2 e^{−iφ} B†].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpFluctuationSolution {
    pub angles: BlochAngles,
    pub bogoliubov_plus: f64,
    pub bogoliubov_minus: f64,
    /// ⟨a†a⟩ = (1 − cosθ)²/(4 cosθ).
    pub occupation: f64,
    /// |⟨a²⟩| = (1 − cos²θ)/(4 cosθ).
    pub anomalous: f64,
    pub kernel: Option<KernelRates>,
}

pub fn hp_moments(a: &BlochAngles) -> Result<HpFluctuationSolution> {
    let c = guard_angles(a)?;
    Ok(HpFluctuationSolution {
        angles: *a,
        bogoliubov_plus: (1.0 + c) / 2.0,
        bogoliubov_minus: (1.0 - c) / 2.0,
        occupation: (1.0 - c).powi(2) / (4.0 * c),
        anomalous: (1.0 - c * c) / (4.0 * c),
        kernel: None,
    })
}

/// [`hp_moments`] at the mean-field angles of `e`, with kernel rates filled in.
pub fn hp_solution(e: &EffectiveParams) -> Result<HpFluctuationSolution> {
    let mut s = hp_moments(&bloch_angles(e)?)?;
    let nc = e.atoms as f64 * s.angles.theta.cos();
    s.kernel = Some(KernelRates { relaxation: nc * e.gamma / 2.0, frequency: nc * e.shift });
    Ok(s)
}

/// Fluctuation moments read off an exact state through a = J′₋/√N, with the rotated frame
/// aligned to the numeric mean spin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpNumericMoments {
    pub occupation: f64,
    pub anomalous: Complex64,
    pub angles: BlochAngles,
}

/// ⟨a†a⟩ = (V_x + V_y)/N − ½ and ⟨a²⟩ = (V_x − V_y − 2iC_xy)/N from rotated-frame
/// transverse covariances.
pub fn hp_moments_numeric(rho: &DensityMatrix, rep: SpinRep) -> Result<HpNumericMoments> {
    let t = transverse_moments(rho, rep)?;
    let n = rep.atoms() as f64;
    Ok(HpNumericMoments {
        occupation: (t.var_x + t.var_y) / n - 0.5,
        anomalous: Complex64::new(t.var_x - t.var_y, -2.0 * t.cov_xy) / n,
        angles: t.angles,
    })
}
