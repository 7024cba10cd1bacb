//! Physical cavity parameters, the effective Dicke parameters they map to, and the
//! mean-field steady state below the critical drive.
//!
//! All rates are angular frequencies in a common unit (ħ = 1). The effective model is
//! usually normalized so that γ = 1.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atom-cavity parameters in the frame rotating at the laser frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    /// Atom-cavity coupling g.
    pub g: Complex64,
    /// Cavity field damping rate κ.
    pub kappa: f64,
    /// Laser-cavity detuning δ_c = ω_L − ω_c.
    pub delta_c: f64,
    /// Laser-atom detuning δ = ω_L − ω_a.
    pub detuning: f64,
    /// Cavity drive amplitude Ω_L.
    pub omega_l: Complex64,
    pub atoms: u32,
}

impl CavityParams {
    pub fn new(
        g: Complex64,
        kappa: f64,
        delta_c: f64,
        detuning: f64,
        omega_l: Complex64,
        atoms: u32,
    ) -> Result<Self> {
        let p = Self { g, kappa, delta_c, detuning, omega_l, atoms };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa > 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.atoms < 1 {
            return Err(Error::InvalidParameter("atom count must be at least 1".into()));
        }
        Ok(())
    }

    /// Cavity response χ = κ/(iδ_c − κ/2).
    pub fn chi(&self) -> Complex64 {
        Complex64::new(self.kappa, 0.0) / Complex64::new(-self.kappa / 2.0, self.delta_c)
    }

    /// κ/(√N |g|); large values mean the cavity follows the atoms adiabatically.
    pub fn adiabaticity(&self) -> f64 {
        self.kappa / ((self.atoms as f64).sqrt() * self.g.norm())
    }

    /// Cavity drive Ω_L that produces the effective Rabi drive `omega`
    /// (inverse of Ω = −2gΩ_L/(2δ_c + iκ)).
    pub fn drive_for_effective(&self, omega: Complex64) -> Result<Complex64> {
        if self.g.norm() == 0.0 {
            return Err(Error::VanishingDenominator("drive_for_effective (g = 0)"));
        }
        Ok(-omega * Complex64::new(2.0 * self.delta_c, self.kappa) / (2.0 * self.g))
    }
}

/// Parameters of the effective driven Dicke master equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveParams {
    /// Single-atom collective emission rate γ.
    pub gamma: f64,
    /// Collective dipole-dipole shift Δ.
    pub shift: f64,
    /// Effective Rabi drive Ω.
    pub drive: Complex64,
    pub atoms: u32,
    /// Laser-atom detuning δ; zero for all steady-state analytics.
    pub detuning: f64,
}

impl EffectiveParams {
    pub fn new(gamma: f64, shift: f64, drive: Complex64, atoms: u32) -> Result<Self> {
        let e = Self { gamma, shift, drive, atoms, detuning: 0.0 };
        e.validate()?;
        Ok(e)
    }

    /// Drive `ratio · Ω_c(Δ)` with phase `phase`.
    pub fn at_drive_ratio(gamma: f64, shift: f64, ratio: f64, phase: f64, atoms: u32) -> Result<Self> {
        let mut e = Self::new(gamma, shift, Complex64::new(0.0, 0.0), atoms)?;
        e.drive = Complex64::from_polar(ratio * critical_drive(&e), phase);
        Ok(e)
    }

    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.detuning = detuning;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {}", self.gamma)));
        }
        if self.atoms < 1 {
            return Err(Error::InvalidParameter("atom count must be at least 1".into()));
        }
        if !(self.shift.is_finite() && self.drive.re.is_finite() && self.drive.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite shift or drive".into()));
        }
        Ok(())
    }

    /// |Ω|/Ω_c(Δ).
    pub fn drive_ratio(&self) -> f64 {
        self.drive.norm() / critical_drive(self)
    }
}

/// Maps cavity parameters to the effective Dicke parameters after eliminating the cavity:
/// γ = |g|²κ/(δ_c² + κ²/4), Δ = −|g|²δ_c/(δ_c² + κ²/4), Ω = −2gΩ_L/(2δ_c + iκ).
///
/// The drive denominator uses the laser-cavity detuning δ_c.
pub fn map_cavity_to_effective(p: &CavityParams) -> Result<EffectiveParams> {
    p.validate()?;
    let g2 = p.g.norm_sqr();
    let lorentz = p.delta_c * p.delta_c + p.kappa * p.kappa / 4.0;
    let e = EffectiveParams {
        gamma: g2 * p.kappa / lorentz,
        shift: -g2 * p.delta_c / lorentz,
        drive: -2.0 * p.g * p.omega_l / Complex64::new(2.0 * p.delta_c, p.kappa),
        atoms: p.atoms,
        detuning: p.detuning,
    };
    if !(e.gamma > 0.0) {
        return Err(Error::InvalidParameter("coupling g must be nonzero".into()));
    }
    Ok(e)
}

/// Ω_c(Δ) = (N/4)√(γ² + 4Δ²).
pub fn critical_drive(e: &EffectiveParams) -> f64 {
    e.atoms as f64 / 4.0 * (e.gamma * e.gamma + 4.0 * e.shift * e.shift).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanField {
    pub jz: f64,
    pub j_minus: Complex64,
}

fn require_below_threshold(e: &EffectiveParams) -> Result<f64> {
    e.validate()?;
    if e.detuning != 0.0 {
        return Err(Error::InvalidParameter("mean-field analytics require δ = 0".into()));
    }
    let ratio = e.drive_ratio();
    if ratio >= 1.0 {
        return Err(Error::AboveThreshold { ratio });
    }
    Ok(ratio)
}

/// Stable below-threshold mean-field solution:
/// ⟨J_z⟩ = −(N/2)√(1 − |Ω|²/Ω_c²), ⟨J_-⟩ = −Ω/(Δ + iγ/2).
pub fn mean_field_steady_state(e: &EffectiveParams) -> Result<MeanField> {
    let ratio = require_below_threshold(e)?;
    let n = e.atoms as f64;
    Ok(MeanField {
        jz: -n / 2.0 * (1.0 - ratio * ratio).sqrt(),
        j_minus: -e.drive / Complex64::new(e.shift, e.gamma / 2.0),
    })
}

/// Orientation of the mean spin, ⟨J⟩ = −(N/2)(sinθ cosφ, sinθ sinφ, cosθ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

impl BlochAngles {
    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi: wrap_phase(phi) }
    }

    /// Mean spin vector for `atoms` atoms.
    pub fn mean_spin(&self, atoms: u32) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        -(atoms as f64) / 2.0 * Vector3::new(st * cp, st * sp, ct)
    }

    /// Angles of an arbitrary nonzero vector `v` read as −|v|(sinθ cosφ, sinθ sinφ, cosθ).
    pub fn from_mean_spin(v: &Vector3<f64>) -> Option<Self> {
        let norm = v.norm();
        if norm == 0.0 {
            return None;
        }
        let u = -v / norm;
        let theta = u.z.clamp(-1.0, 1.0).acos();
        let phi = u.y.atan2(u.x);
        Some(Self::new(theta, phi))
    }
}

/// Wraps an angle into (−π, π].
fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi % (2.0 * PI);
    if p <= -PI {
        p += 2.0 * PI;
    } else if p > PI {
        p -= 2.0 * PI;
    }
    p
}

/// sinθ = |Ω|/Ω_c with θ ∈ [0, π/2); φ = arg(Δ + iγ/2) − arg Ω.
pub fn bloch_angles(e: &EffectiveParams) -> Result<BlochAngles> {
    let ratio = require_below_threshold(e)?;
    let phi = Complex64::new(e.shift, e.gamma / 2.0).arg() - e.drive.arg();
    Ok(BlochAngles::new(ratio.asin(), phi))
}

/// Rotation taking the south-pole frame to the mean-spin frame: J = R J′.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(pub Matrix3<f64>);

impl RotationMatrix {
    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    /// R⁻¹ v = Rᵀ v.
    pub fn apply_inverse(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0.transpose() * v
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }
}

pub fn rotation_matrix(a: &BlochAngles) -> RotationMatrix {
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    #[rustfmt::skip]
    let r = Matrix3::new(
        ct * cp, -sp, st * cp,
        ct * sp,  cp, st * sp,
        -st,     0.0, ct,
    );
    RotationMatrix(r)
}
