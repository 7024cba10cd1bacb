use num_complex::Complex64;
use serde::Serialize;

use super::guard_angles;
use crate::error::{Error, Result};
use crate::params::{BlochAngles, CavityParams, EffectiveParams};

/// Output field of the driven cavity, E = (1 + χ)(E₀ − iΩ_L) + G J₋, split into its parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldComposition {
    /// χ = κ/(iδ_c − κ/2).
    pub chi: Complex64,
    /// G = −i g* χ.
    pub g_scatter: Complex64,
    /// −iΩ_L(1 + χ).
    pub free_mean: Complex64,
    /// G⟨J₋⟩.
    pub scattered_mean: Complex64,
    pub mean_field_out: Complex64,
    /// Coefficient (1 + χ) of the input vacuum E₀.
    pub vacuum_coefficient: Complex64,
    /// Coefficient of the integrated noise B in the fluctuating field; G N cosθ.
    /// `None` without linearization angles.
    pub b_coefficient: Option<Complex64>,
    /// Coefficient of B†; cancels identically.
    pub b_dagger_coefficient: Option<Complex64>,
    pub atoms: u32,
}

/// Builds the field decomposition for a given mean dipole ⟨J₋⟩ (numeric or mean-field).
/// The fluctuation coefficients need the linearization angles `a`; without them only the
/// mean parts are filled in.
pub fn field_composition(
    p: &CavityParams,
    j_minus_mean: Complex64,
    a: Option<&BlochAngles>,
) -> Result<FieldComposition> {
    p.validate()?;
    let chi = p.chi();
    let g_scatter = -Complex64::i() * p.g.conj() * chi;
    let free_mean = -Complex64::i() * p.omega_l * (1.0 + chi);
    let scattered_mean = g_scatter * j_minus_mean;
    let coefficients = match a {
        Some(a) => {
            let (on_b, on_b_dagger) = noise_coefficients(p.atoms, a)?;
            (Some(g_scatter * on_b), Some(g_scatter * on_b_dagger))
        }
        None => (None, None),
    };
    Ok(FieldComposition {
        chi,
        g_scatter,
        free_mean,
        scattered_mean,
        mean_field_out: free_mean + scattered_mean,
        vacuum_coefficient: 1.0 + chi,
        b_coefficient: coefficients.0,
        b_dagger_coefficient: coefficients.1,
        atoms: p.atoms,
    })
}

/// Coefficients of B and B† in the linearized δJ₋.
fn noise_coefficients(atoms: u32, a: &BlochAngles) -> Result<(Complex64, Complex64)> {
    let cos_t = guard_angles(a)?;
    // δJ₋ = e^{−iφ}√N (u a + v a†) with u = (cosθ+1)/2, v = (cosθ−1)/2, and
    // a = √N (p e^{iφ} B + q e^{−iφ} B†) with p = (1+cosθ)/2, q = (1−cosθ)/2
    let n = atoms as f64;
    let (u, v) = ((cos_t + 1.0) / 2.0, (cos_t - 1.0) / 2.0);
    let (bp, bq) = ((1.0 + cos_t) / 2.0, (1.0 - cos_t) / 2.0);
    let e_m = Complex64::from_polar(1.0, -a.phi);
    let e_p = e_m.conj();
    let on_b = e_m * n * (u * bp * e_p + v * bq * e_p);
    let on_b_dagger = e_m * n * (u * bq * e_m + v * bp * e_m);
    Ok((on_b, on_b_dagger))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSqueezing {
    pub xi2: f64,
    pub b_dagger_coefficient: Complex64,
    pub derivation: Vec<String>,
}

/// Field squeezing parameter at linear order in the fluctuations.
///
/// With the B† coefficient cancelled, the fluctuating field (1+χ)E₀ + G N cosθ B contains
/// only annihilation-type noise operators, so ⟨𝓔†𝓔⟩ and ⟨𝓔²⟩ vanish in the input vacuum
/// and ξ_E² = 1.
pub fn field_squeezing_analytic(fc: &FieldComposition) -> Result<FieldSqueezing> {
    let (Some(v), Some(w)) = (fc.b_coefficient, fc.b_dagger_coefficient) else {
        return Err(Error::InvalidParameter("field squeezing needs the fluctuation coefficients".into()));
    };
    let derivation = vec![
        format!("fluctuation = ({:.6e}) E0 + ({v:.6e}) B + ({w:.3e}) B†", fc.vacuum_coefficient),
        "E0 and B annihilate the input vacuum".to_string(),
        format!("normal-ordered <E†E> ∝ |B† coefficient|² = {:.3e}", w.norm_sqr()),
        format!("anomalous <E²> ∝ B† coefficient, |.| = {:.3e}", w.norm()),
        "xi_E^2 = 1 + 2(<E†E> - |<E²>|)/V0 = 1".to_string(),
    ];
    Ok(FieldSqueezing { xi2: 1.0, b_dagger_coefficient: w, derivation })
}

/// Cavity parameters realizing `e` after elimination, for a chosen κ: δ_c = −Δκ/γ,
/// g = √(γ(δ_c² + κ²/4)/κ) real, and the matching cavity drive Ω_L.
pub fn cavity_for_effective(e: &EffectiveParams, kappa: f64) -> Result<CavityParams> {
    e.validate()?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::InvalidParameter(format!("kappa must be positive, got {kappa}")));
    }
    let delta_c = -e.shift * kappa / e.gamma;
    let g = (e.gamma * (delta_c * delta_c + kappa * kappa / 4.0) / kappa).sqrt();
    let mut p = CavityParams::new(Complex64::new(g, 0.0), kappa, delta_c, e.detuning, Complex64::new(0.0, 0.0), e.atoms)?;
    p.omega_l = p.drive_for_effective(e.drive)?;
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{bloch_angles, map_cavity_to_effective, mean_field_steady_state};

    #[test]
    fn resonant_cavity_reflects_with_sign_flip() {
        let p = CavityParams::new(Complex64::new(0.3, 0.1), 2.0, 0.0, 0.0, Complex64::new(0.5, 0.2), 4).unwrap();
        let fc = field_composition(&p, Complex64::new(0.0, 0.0), Some(&BlochAngles::new(0.0, 0.0))).unwrap();
        assert!((fc.chi + 2.0).norm() < 1e-15);
        assert!((fc.vacuum_coefficient + 1.0).norm() < 1e-15);
        assert!((fc.free_mean - Complex64::i() * p.omega_l).norm() < 1e-15);
    }

    #[test]
    fn effective_round_trip() {
        let e = EffectiveParams::at_drive_ratio(0.7, -0.4, 0.5, 1.2, 9).unwrap();
        let p = cavity_for_effective(&e, 30.0).unwrap();
        let back = map_cavity_to_effective(&p).unwrap();
        assert!((back.gamma - e.gamma).abs() < 1e-13);
        assert!((back.shift - e.shift).abs() < 1e-13);
        assert!((back.drive - e.drive).norm() < 1e-13);
    }

    #[test]
    fn mean_field_output_equals_input() {
        let e = EffectiveParams::at_drive_ratio(1.0, 0.5, 0.6, -0.7, 12).unwrap();
        let p = cavity_for_effective(&e, 8.0).unwrap();
        let mf = mean_field_steady_state(&e).unwrap();
        let fc = field_composition(&p, mf.j_minus, Some(&bloch_angles(&e).unwrap())).unwrap();
        assert!((fc.mean_field_out + Complex64::i() * p.omega_l).norm() < 1e-13);
        assert_eq!(fc.b_dagger_coefficient, Some(Complex64::new(0.0, 0.0)));
        assert!((fc.b_coefficient.unwrap() - fc.g_scatter * 12.0 * 0.8).norm() < 1e-12);
        let fs = field_squeezing_analytic(&fc).unwrap();
        assert_eq!(fs.xi2, 1.0);
        assert_eq!(fs.derivation.len(), 5);
    }
}
