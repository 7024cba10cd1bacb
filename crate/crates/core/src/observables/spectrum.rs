use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use super::field::FieldComposition;
use crate::error::{Error, Result};
use crate::lindblad::{expect, two_time_correlator, DensityMatrix, RkOptions};
use crate::models::DickeModel;
use crate::params::bloch_angles;
use crate::spin::{build_spin_operators, SpinRep};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleMoments {
    pub j_minus: Complex64,
    /// ⟨J₊J₋⟩.
    pub intensity: f64,
    /// ⟨J₊J₋⟩ − |⟨J₋⟩|².
    pub var_jm: f64,
    /// ⟨J₋J₋⟩ − ⟨J₋⟩².
    pub anom_jm: Complex64,
    /// |⟨J₋⟩|²/⟨J₊J₋⟩; zero when the dipole is dark.
    pub coherence_ratio: f64,
}

pub fn dipole_fluctuation_moments(rho: &DensityMatrix, rep: SpinRep) -> Result<DipoleMoments> {
    let ops = build_spin_operators(rep);
    let jm = expect(rho, &ops.j_minus)?;
    let intensity = expect(rho, &(&ops.j_plus * &ops.j_minus))?.re;
    let jmjm = expect(rho, &(&ops.j_minus * &ops.j_minus))?;
    Ok(DipoleMoments {
        j_minus: jm,
        intensity,
        var_jm: intensity - jm.norm_sqr(),
        anom_jm: jmjm - jm * jm,
        coherence_ratio: if intensity > 0.0 { jm.norm_sqr() / intensity } else { 0.0 },
    })
}

/// g⁽²⁾(0) = ⟨J₊J₊J₋J₋⟩/⟨J₊J₋⟩² of the scattered dipole field.
pub fn g2_zero(rho: &DensityMatrix, rep: SpinRep) -> Result<f64> {
    let ops = build_spin_operators(rep);
    let jpjm = &ops.j_plus * &ops.j_minus;
    let n1 = expect(rho, &jpjm)?.re;
    if n1 <= 1e-14 * rep.j().max(1.0).powi(2) {
        return Err(Error::VanishingDenominator("g2_zero (<J+J-> = 0)"));
    }
    let jpjp = &ops.j_plus * &ops.j_plus;
    let jmjm = &ops.j_minus * &ops.j_minus;
    let n2 = expect(rho, &(&jpjp * &jmjm))?.re;
    Ok(n2 / (n1 * n1))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Longest lag; defaults to 10/(Nγ cosθ/2) below threshold.
    pub tau_max: Option<f64>,
    pub n_tau: usize,
    pub rk: RkOptions,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { tau_max: None, n_tau: 1024, rk: RkOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    /// |⟨E⟩|², weight of the delta peak at the laser frequency.
    pub coherent_weight: f64,
    /// Frequencies relative to the laser, ascending.
    pub omega: Vec<f64>,
    /// Fourier transform of |G|²⟨δJ₊(0)δJ₋(τ)⟩, real part.
    pub incoherent_spectrum: Vec<f64>,
    /// ∫ S(ω) dω = |G|²(⟨J₊J₋⟩ − |⟨J₋⟩|²).
    pub incoherent_weight: f64,
    pub coherence_ratio: f64,
    pub tau: Vec<f64>,
    /// ⟨δJ₊(0)δJ₋(τ)⟩.
    pub correlator: Vec<Complex64>,
    /// The correlator had not decayed below 10⁻³ of its τ = 0 value at τ_max.
    pub truncated: bool,
}

/// Output spectrum of the driven system: coherent peak |⟨E⟩|² plus the incoherent part
/// from the dipole fluctuations, with ⟨E⟩ = free_mean + G⟨J₋⟩ using the exact ⟨J₋⟩.
pub fn output_spectrum(
    model: &DickeModel,
    rho_ss: &DensityMatrix,
    fc: &FieldComposition,
    opts: &SpectrumOptions,
) -> Result<SpectrumResult> {
    if opts.n_tau < 2 {
        return Err(Error::InvalidParameter("n_tau must be at least 2".into()));
    }
    let e = &model.effective;
    let tau_max = match opts.tau_max {
        Some(t) => t,
        None => match bloch_angles(e) {
            Ok(a) if a.theta.cos() > 1e-3 => 10.0 / (e.atoms as f64 * e.gamma * a.theta.cos() / 2.0),
            _ => 20.0 / (e.gamma * (e.atoms as f64).sqrt()),
        },
    };
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("tau_max must be positive, got {tau_max}")));
    }
    let moments = dipole_fluctuation_moments(rho_ss, model.rep)?;
    let n = opts.n_tau;
    let dt = tau_max / (n - 1) as f64;
    let tau: Vec<f64> = (0..n).map(|k| k as f64 * dt).collect();
    let ops = &model.ops;
    let raw = two_time_correlator(&model.liouvillian, rho_ss, &ops.j_plus, &ops.j_minus, &tau, opts.rk)?;
    let mean_sq = moments.j_minus.norm_sqr();
    let correlator: Vec<Complex64> = raw.iter().map(|c| c - mean_sq).collect();
    let c0 = correlator[0].norm();
    let truncated = correlator[n - 1].norm() > 1e-3 * c0;

    // two-sided sequence c(−τ) = c(τ)*, inverse transform ∝ Σ c(τ) e^{iωτ}
    let m = 2 * n;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    buf[0] = correlator[0];
    for k in 1..n {
        buf[k] = correlator[k];
        buf[m - k] = correlator[k].conj();
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    let g2 = fc.g_scatter.norm_sqr();
    let dw = 2.0 * PI / (m as f64 * dt);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|k| {
            let idx = if k < m / 2 { k as f64 } else { k as f64 - m as f64 };
            (idx * dw, g2 * dt / (2.0 * PI) * buf[k].re)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let incoherent_weight = pairs.iter().map(|p| p.1).sum::<f64>() * dw;
    let mean_out = fc.free_mean + fc.g_scatter * moments.j_minus;

    Ok(SpectrumResult {
        coherent_weight: mean_out.norm_sqr(),
        omega: pairs.iter().map(|p| p.0).collect(),
        incoherent_spectrum: pairs.iter().map(|p| p.1).collect(),
        incoherent_weight,
        coherence_ratio: moments.coherence_ratio,
        tau,
        correlator,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lindblad::SteadyStateOptions;
    use crate::models::build_dicke_model;
    use crate::observables::{cavity_for_effective, field_composition};
    use crate::params::EffectiveParams;

    #[test]
    fn single_atom_antibunched() {
        let e = EffectiveParams::at_drive_ratio(1.0, 0.0, 0.7, 0.0, 1).unwrap();
        let m = build_dicke_model(&e).unwrap();
        let (rho, _) = m.steady_state(&SteadyStateOptions::default()).unwrap();
        assert_eq!(g2_zero(&rho, m.rep).unwrap(), 0.0);
        assert!(g2_zero(&DensityMatrix::basis_state(2, 0), m.rep).is_err());
    }

    #[test]
    fn undriven_spectrum_is_purely_coherent() {
        let e = EffectiveParams::new(1.0, 0.0, Complex64::new(0.0, 0.0), 3).unwrap();
        let m = build_dicke_model(&e).unwrap();
        let (rho, _) = m.steady_state(&SteadyStateOptions::default()).unwrap();
        let mut p = cavity_for_effective(&e, 10.0).unwrap();
        p.omega_l = Complex64::new(0.2, -0.1);
        let fc = field_composition(&p, Complex64::new(0.0, 0.0), None).unwrap();
        let s = output_spectrum(&m, &rho, &fc, &SpectrumOptions::default()).unwrap();
        assert!((s.coherent_weight - p.omega_l.norm_sqr()).abs() < 1e-12);
        assert!(s.incoherent_weight.abs() < 1e-12);
    }

    #[test]
    fn weight_matches_equal_time_variance() {
        let e = EffectiveParams::at_drive_ratio(1.0, 0.3, 0.5, 0.0, 6).unwrap();
        let m = build_dicke_model(&e).unwrap();
        let (rho, _) = m.steady_state(&SteadyStateOptions::default()).unwrap();
        let p = cavity_for_effective(&e, 20.0).unwrap();
        let a = bloch_angles(&e).unwrap();
        let moments = dipole_fluctuation_moments(&rho, m.rep).unwrap();
        let fc = field_composition(&p, moments.j_minus, Some(&a)).unwrap();
        let s = output_spectrum(&m, &rho, &fc, &SpectrumOptions::default()).unwrap();
        let expected = fc.g_scatter.norm_sqr() * moments.var_jm;
        assert!((s.incoherent_weight - expected).abs() < 1e-10 * expected.max(1e-12));
        let peak = s.incoherent_spectrum.iter().cloned().fold(0.0, f64::max);
        assert!(s.incoherent_spectrum.iter().all(|&v| v > -1e-3 * peak));
        assert!(!s.truncated);
    }
}
