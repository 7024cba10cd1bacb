//! Steady-state observables, computed exactly from ρ_ss and in closed form from the
//! linearized fluctuation theory around the mean field.

mod field;
mod hp;
mod spectrum;
mod squeezing;

pub use field::{cavity_for_effective, field_composition, field_squeezing_analytic, FieldComposition, FieldSqueezing};
pub use hp::{hp_moments, hp_moments_numeric, hp_solution, HpFluctuationSolution, HpNumericMoments, KernelRates};
pub use spectrum::{
    dipole_fluctuation_moments, g2_zero, output_spectrum, DipoleMoments, SpectrumOptions, SpectrumResult,
};
pub use squeezing::{
    spin_squeezing_analytic, spin_squeezing_numeric, transverse_moments, SqueezingAnalytic, TransverseMoments,
};

use crate::error::{Error, Result};
use crate::params::BlochAngles;

/// Analytic results are refused beyond this |Ω|/Ω_c, where the linearized moments diverge.
pub const CRITICAL_RATIO_LIMIT: f64 = 0.999;

fn guard_ratio(ratio: f64) -> Result<()> {
    if ratio >= 1.0 {
        return Err(Error::AboveThreshold { ratio });
    }
    if ratio > CRITICAL_RATIO_LIMIT {
        return Err(Error::CriticalRegion { ratio, limit: CRITICAL_RATIO_LIMIT });
    }
    Ok(())
}

fn guard_angles(a: &BlochAngles) -> Result<f64> {
    let c = a.theta.cos();
    if !(c > 0.0) {
        return Err(Error::AboveThreshold { ratio: a.theta.sin().abs() });
    }
    guard_ratio(a.theta.sin())?;
    Ok(c)
}
