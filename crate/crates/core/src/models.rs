//! The effective driven Dicke model and the full atom-cavity model it approximates.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lindblad::{
    build_liouvillian, expect, steady_state, DensityMatrix, Liouvillian, SteadyStateOptions, SteadyStateSolveReport,
};
use crate::operator::{Basis, OperatorMatrix};
use crate::params::{map_cavity_to_effective, mean_field_steady_state, CavityParams, EffectiveParams};
use crate::spin::{build_fock_operators, build_spin_operators, tensor, FockRep, SpinOperators, SpinRep};

pub const DICKE_MAX_ATOMS: u32 = 400;
pub const CAVITY_MAX_DIM: usize = 600;

#[derive(Debug, Clone)]
pub struct DickeModel {
    pub effective: EffectiveParams,
    pub rep: SpinRep,
    pub ops: SpinOperators,
    pub liouvillian: Liouvillian,
}

/// H = −Δ J₊J₋ − (Ω J₊ + Ω* J₋) − δ J_z with collective decay J₋ at rate γ.
pub fn build_dicke_model(e: &EffectiveParams) -> Result<DickeModel> {
    build_dicke_model_with_cap(e, DICKE_MAX_ATOMS)
}

pub fn build_dicke_model_with_cap(e: &EffectiveParams, max_atoms: u32) -> Result<DickeModel> {
    e.validate()?;
    if e.atoms > max_atoms {
        return Err(Error::DimensionCap { dim: e.atoms as usize + 1, cap: max_atoms as usize + 1 });
    }
    let rep = SpinRep::from_atoms(e.atoms);
    let ops = build_spin_operators(rep);
    let jpjm = &ops.j_plus * &ops.j_minus;
    let mut h = &(&jpjm * -e.shift) - &(&(&ops.j_plus * e.drive) + &(&ops.j_minus * e.drive.conj()));
    if e.detuning != 0.0 {
        h = &h - &(&ops.j_z * e.detuning);
    }
    let liouvillian = build_liouvillian(&h, &[(e.gamma, ops.j_minus.clone())])?;
    Ok(DickeModel { effective: *e, rep, ops, liouvillian })
}

impl DickeModel {
    pub fn steady_state(&self, opts: &SteadyStateOptions) -> Result<(DensityMatrix, SteadyStateSolveReport)> {
        steady_state(&self.liouvillian, opts)
    }
}

#[derive(Debug, Clone)]
pub struct CavityModel {
    pub cavity: CavityParams,
    pub spin: SpinRep,
    pub fock: FockRep,
    /// J₋ ⊗ 1, J_z ⊗ 1 and 1 ⊗ c on the product space (spin index major).
    pub j_minus: OperatorMatrix,
    pub j_z: OperatorMatrix,
    pub c: OperatorMatrix,
    pub liouvillian: Liouvillian,
}

/// Rotating-frame atom-cavity model
/// H = −δ J_z − δ_c c†c + [c†(g* J₋ + Ω_L) + h.c.], cavity decay c at rate κ.
pub fn build_cavity_model(p: &CavityParams, fock: FockRep) -> Result<CavityModel> {
    p.validate()?;
    let spin = SpinRep::from_atoms(p.atoms);
    let dim = spin.dim() * fock.dim();
    if dim > CAVITY_MAX_DIM {
        return Err(Error::DimensionCap { dim, cap: CAVITY_MAX_DIM });
    }
    let s = build_spin_operators(spin);
    let f = build_fock_operators(fock);
    let id_s = s.identity();
    let id_f = OperatorMatrix::identity(fock.dim(), Basis::Fock);
    let j_minus = tensor(&s.j_minus, &id_f)?;
    let j_z = tensor(&s.j_z, &id_f)?;
    let c = tensor(&id_s, &f.c)?;
    let c_dag = c.adjoint();
    let id = OperatorMatrix::identity(dim, Basis::Product);
    let source = &(&j_minus * p.g.conj()) + &(&id * p.omega_l);
    let coupling = &c_dag * &source;
    let h = &(&(&j_z * -p.detuning) - &(&(&c_dag * &c) * p.delta_c)) + &(&coupling + &coupling.adjoint());
    let liouvillian = build_liouvillian(&h, &[(p.kappa, c.clone())])?;
    Ok(CavityModel { cavity: *p, spin, fock, j_minus, j_z, c, liouvillian })
}

impl CavityModel {
    pub fn steady_state(&self, opts: &SteadyStateOptions) -> Result<(DensityMatrix, SteadyStateSolveReport)> {
        steady_state(&self.liouvillian, opts)
    }
}

/// Stationary cavity amplitude estimate i(g*⟨J₋⟩ + Ω_L)/(iδ_c − κ/2), using the mean-field
/// ⟨J₋⟩ below threshold and the empty-cavity response otherwise.
pub fn cavity_amplitude_estimate(p: &CavityParams) -> Complex64 {
    let jm = map_cavity_to_effective(p)
        .and_then(|e| mean_field_steady_state(&e))
        .map(|mf| mf.j_minus)
        .unwrap_or(Complex64::new(0.0, 0.0));
    Complex64::i() * (p.g.conj() * jm + p.omega_l) / Complex64::new(-p.kappa / 2.0, p.delta_c)
}

/// n_max = ⌈4(|c_est|² + 1)⌉ + 6.
pub fn default_fock_cutoff(p: &CavityParams) -> usize {
    let c = cavity_amplitude_estimate(p).norm_sqr();
    (4.0 * (c + 1.0)).ceil() as usize + 6
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EliminationOptions {
    /// Fixed cutoff; `None` starts from [`default_fock_cutoff`] and grows until converged.
    pub cutoff: Option<usize>,
    /// Below this κ/(√N|g|) the report is marked non-adiabatic (not an error).
    pub min_adiabaticity: f64,
    /// PASS threshold on |Δ⟨J_z⟩| in units of N/2.
    pub tolerance: f64,
}

impl Default for EliminationOptions {
    fn default() -> Self {
        Self { cutoff: None, min_adiabaticity: 5.0, tolerance: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableComparison {
    pub full: Complex64,
    pub effective: Complex64,
    pub absolute: f64,
    /// Absolute deviation over max(|effective|, N/2).
    pub relative: f64,
}

impl ObservableComparison {
    fn new(full: Complex64, effective: Complex64, scale: f64) -> Self {
        let absolute = (full - effective).norm();
        Self { full, effective, absolute, relative: absolute / effective.norm().max(scale) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationReport {
    pub jz: ObservableComparison,
    pub j_minus: ObservableComparison,
    pub jp_jm: ObservableComparison,
    pub cutoff: usize,
    /// Change of ⟨J_z⟩ when the cutoff is raised by 5.
    pub cutoff_drift: f64,
    pub adiabaticity: f64,
    pub adiabatic: bool,
    pub passed: bool,
    /// Solver report of the full model at the accepted cutoff.
    pub solve: SteadyStateSolveReport,
}

/// Compares the full cavity model against the effective Dicke model obtained by eliminating
/// the cavity.
pub fn validate_elimination(p: &CavityParams, opts: &EliminationOptions) -> Result<EliminationReport> {
    let e = map_cavity_to_effective(p)?;
    let dicke = build_dicke_model(&e)?;
    let ss = SteadyStateOptions::default();
    let (rho_e, _) = dicke.steady_state(&ss)?;
    let jz_e = expect(&rho_e, &dicke.ops.j_z)?;
    let jm_e = expect(&rho_e, &dicke.ops.j_minus)?;
    let jpjm_e = expect(&rho_e, &(&dicke.ops.j_plus * &dicke.ops.j_minus))?;

    let full = |cutoff: usize| -> Result<([Complex64; 3], SteadyStateSolveReport)> {
        let m = build_cavity_model(p, FockRep::new(cutoff)?)?;
        let (rho, report) = m.steady_state(&ss)?;
        let jp = m.j_minus.adjoint();
        Ok(([expect(&rho, &m.j_z)?, expect(&rho, &m.j_minus)?, expect(&rho, &(&jp * &m.j_minus))?], report))
    };

    let half_n = p.atoms as f64 / 2.0;
    let converged = |a: &[Complex64; 3], b: &[Complex64; 3]| {
        let drift = (a[0] - b[0]).norm();
        let dev = (a[0] - jz_e).norm();
        (drift, drift < 0.1 * dev + 1e-9 * half_n)
    };

    let mut cutoff = opts.cutoff.unwrap_or_else(|| default_fock_cutoff(p));
    let (mut current, mut solve) = full(cutoff)?;
    loop {
        let (extended, extended_solve) = full(cutoff + 5)?;
        let (drift, ok) = converged(&current, &extended);
        if ok {
            let scale = half_n;
            let adiabaticity = p.adiabaticity();
            let jz = ObservableComparison::new(current[0], jz_e, scale);
            return Ok(EliminationReport {
                jz,
                j_minus: ObservableComparison::new(current[1], jm_e, scale),
                jp_jm: ObservableComparison::new(current[2], jpjm_e, scale),
                cutoff,
                cutoff_drift: drift,
                adiabaticity,
                adiabatic: adiabaticity >= opts.min_adiabaticity,
                passed: jz.absolute <= opts.tolerance * half_n,
                solve,
            });
        }
        if opts.cutoff.is_some() {
            return Err(Error::CutoffNotConverged { cutoff, drift });
        }
        cutoff += 5;
        current = extended;
        solve = extended_solve;
        if SpinRep::from_atoms(p.atoms).dim() * (cutoff + 6) > CAVITY_MAX_DIM {
            return Err(Error::CutoffNotConverged { cutoff, drift });
        }
    }
}
