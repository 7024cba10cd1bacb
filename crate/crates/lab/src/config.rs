use std::path::{Path, PathBuf};

use dicke_core::lindblad::SolveMethod;
use serde::{Deserialize, Serialize};

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    SweepJz,
    SweepSqueezing,
    Spectrum,
    ValidateElimination,
    MeanField,
    Moments,
    G2,
    ReproduceFigures,
}

impl Mode {
    pub fn needs_cavity(self) -> bool {
        matches!(self, Mode::ValidateElimination)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub effective: Option<EffectiveBlock>,
    pub cavity: Option<CavityBlock>,
    pub grid: GridBlock,
    pub solver: SolverBlock,
    pub output: OutputBlock,
}

/// Effective-model parameters; all rates in units of γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EffectiveBlock {
    pub gamma: f64,
    /// Laser-atom detuning δ (adds −δJ_z).
    pub detuning: f64,
    /// Phase of Ω in radians.
    pub drive_phase: f64,
    /// Cavity damping κ used to reconstruct the output field (spectrum mode).
    pub kappa: f64,
}

impl Default for EffectiveBlock {
    fn default() -> Self {
        Self { gamma: 1.0, detuning: 0.0, drive_phase: 0.0, kappa: 20.0 }
    }
}

/// Atom-cavity parameters. Exactly one of `g` and `adiabaticity` (a list of κ/(√N g)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CavityBlock {
    pub kappa: f64,
    pub delta_c: f64,
    pub detuning: f64,
    pub g: Option<f64>,
    pub adiabaticity: Option<Vec<f64>>,
    /// Fixed Fock cutoff; automatic when absent.
    pub cutoff: Option<usize>,
    pub min_adiabaticity: f64,
    pub tolerance: f64,
}

impl Default for CavityBlock {
    fn default() -> Self {
        Self {
            kappa: 1.0,
            delta_c: 0.0,
            detuning: 0.0,
            g: None,
            adiabaticity: None,
            cutoff: None,
            min_adiabaticity: 5.0,
            tolerance: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => vec![],
            1 => vec![self.start],
            n => (0..n)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBlock {
    pub atoms: Vec<u32>,
    /// Δ/γ values.
    pub shifts: Vec<f64>,
    /// Explicit drive values, appended after `drive_range`.
    pub drive: Vec<f64>,
    pub drive_range: Option<Range>,
    /// Drives are |Ω|/γ (effective) or |Ω_L|/κ (cavity) instead of |Ω|/Ω_c.
    pub absolute: bool,
}

impl Default for GridBlock {
    fn default() -> Self {
        Self { atoms: vec![], shifts: vec![0.0], drive: vec![], drive_range: None, absolute: false }
    }
}

impl GridBlock {
    pub fn drives(&self) -> Vec<f64> {
        let mut v = self.drive_range.map(|r| r.values()).unwrap_or_default();
        v.extend_from_slice(&self.drive);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverBlock {
    pub rel_tol: f64,
    pub uniqueness_tol: f64,
    pub method: Option<SolveMethod>,
    pub threads: Option<usize>,
    pub n_tau: usize,
    /// Longest correlation lag in units of 1/γ.
    pub tau_max: Option<f64>,
}

impl Default for SolverBlock {
    fn default() -> Self {
        Self { rel_tol: 1e-10, uniqueness_tol: 1e-6, method: None, threads: None, n_tau: 1024, tau_max: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    /// CSV file, or directory for `reproduce-figures`; stdout when absent.
    pub path: Option<PathBuf>,
    pub json: bool,
    pub timestamp: bool,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { path: None, json: false, timestamp: true }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub no_timestamp: bool,
    pub absolute_drive: bool,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, LabError> {
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.mode.is_some() {
            self.mode = o.mode;
        }
        if o.out.is_some() {
            self.output.path = o.out.clone();
        }
        if o.threads.is_some() {
            self.solver.threads = o.threads;
        }
        if o.no_timestamp {
            self.output.timestamp = false;
        }
        if o.absolute_drive {
            self.grid.absolute = true;
        }
    }

    pub fn mode(&self) -> Result<Mode, LabError> {
        self.mode.ok_or_else(|| LabError::Config("no mode given".into()))
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let mode = self.mode()?;
        let bad = |m: &str| Err(LabError::Config(m.to_string()));
        if mode == Mode::ReproduceFigures {
            return Ok(());
        }
        match (&self.effective, &self.cavity) {
            (Some(_), Some(_)) => return bad("give either an effective or a cavity block, not both"),
            (None, None) => return bad("missing parameter block (effective or cavity)"),
            (None, Some(_)) if !mode.needs_cavity() => return bad("this mode needs an effective block"),
            (Some(_), None) if mode.needs_cavity() => return bad("validate-elimination needs a cavity block"),
            _ => {}
        }
        if let Some(e) = &self.effective {
            if !(e.gamma > 0.0 && e.kappa > 0.0) {
                return bad("gamma and kappa must be positive");
            }
        }
        if let Some(c) = &self.cavity {
            if !(c.kappa > 0.0) {
                return bad("kappa must be positive");
            }
            match (&c.g, &c.adiabaticity) {
                (Some(g), None) if *g > 0.0 => {}
                (None, Some(a)) if !a.is_empty() && a.iter().all(|x| *x > 0.0) => {}
                _ => return bad("cavity block needs exactly one of a positive g or a non-empty positive adiabaticity list"),
            }
        }
        if self.grid.atoms.is_empty() || self.grid.atoms.contains(&0) {
            return bad("grid.atoms must be a non-empty list of positive atom numbers");
        }
        if self.grid.shifts.is_empty() {
            return bad("grid.shifts must not be empty");
        }
        let drives = self.grid.drives();
        if drives.is_empty() || drives.iter().any(|d| !(d.is_finite() && *d >= 0.0)) {
            return bad("drive grid must be non-empty and non-negative");
        }
        if !(self.solver.rel_tol > 0.0) || self.solver.n_tau < 2 || self.solver.threads == Some(0) {
            return bad("invalid solver options");
        }
        Ok(())
    }
}
