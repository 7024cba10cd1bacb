use std::path::{Path, PathBuf};
use std::time::Instant;

use dicke_core::lindblad::{expect, DensityMatrix, SteadyStateOptions, SteadyStateSolveReport};
use dicke_core::models::{build_dicke_model, validate_elimination, DickeModel, EliminationOptions};
use dicke_core::observables::{
    cavity_for_effective, dipole_fluctuation_moments, field_composition, field_squeezing_analytic, g2_zero,
    hp_moments_numeric, hp_solution, CRITICAL_RATIO_LIMIT, output_spectrum, spin_squeezing_analytic, spin_squeezing_numeric,
    SpectrumOptions, SpectrumResult,
};
use dicke_core::params::{
    bloch_angles, critical_drive, map_cavity_to_effective, mean_field_steady_state, CavityParams, EffectiveParams,
};
use dicke_core::Error as CoreError;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::{EffectiveBlock, Mode, RunConfig};
use crate::table::{Cell, Table};
use crate::LabError;

/// Outcome of a run: the table (possibly with failed rows) and the process exit code.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub table: Table,
    /// Incoherent spectra per grid point (spectrum mode only).
    pub spectra: Option<Table>,
    pub exit_code: i32,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_ABOVE_THRESHOLD: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Point {
    atoms: u32,
    shift: f64,
    drive: f64,
}

fn grid_points(cfg: &RunConfig) -> Vec<Point> {
    let drives = cfg.grid.drives();
    let mut points = Vec::new();
    for &atoms in &cfg.grid.atoms {
        for &shift in &cfg.grid.shifts {
            for &drive in &drives {
                points.push(Point { atoms, shift, drive });
            }
        }
    }
    points
}

fn effective_params(b: &EffectiveBlock, p: Point, absolute: bool) -> Result<EffectiveParams, CoreError> {
    let e = if absolute {
        EffectiveParams::new(b.gamma, p.shift * b.gamma, Complex64::from_polar(p.drive * b.gamma, b.drive_phase), p.atoms)?
    } else {
        EffectiveParams::at_drive_ratio(b.gamma, p.shift * b.gamma, p.drive, b.drive_phase, p.atoms)?
    };
    Ok(e.with_detuning(b.detuning * b.gamma))
}

fn solver_options(cfg: &RunConfig) -> SteadyStateOptions {
    SteadyStateOptions {
        method: cfg.solver.method,
        rel_tol: cfg.solver.rel_tol,
        uniqueness_tol: cfg.solver.uniqueness_tol,
        ..SteadyStateOptions::default()
    }
}

/// Leading columns shared by all effective-model modes.
const POINT_COLUMNS: [&str; 4] = ["N", "delta_over_gamma", "omega_over_omega_c", "omega_over_gamma"];
/// Trailing bookkeeping columns; `wall_time_s` only with timestamps enabled.
const STATUS_COLUMNS: [&str; 3] = ["solver_residual", "method", "status"];

fn mode_columns(mode: Mode) -> &'static [&'static str] {
    match mode {
        Mode::SweepJz => &["jz_over_half_n_numeric", "jz_over_half_n_analytic", "residual"],
        Mode::SweepSqueezing => &["xi2_numeric", "xi2_analytic", "residual"],
        Mode::MeanField => &[
            "jz",
            "jz_over_half_n",
            "j_minus_re",
            "j_minus_im",
            "theta",
            "phi",
            "xi2",
            "hp_occupation",
            "hp_anomalous",
        ],
        Mode::Moments => &[
            "jz_over_half_n_numeric",
            "j_minus_re",
            "j_minus_im",
            "j_minus_analytic_re",
            "j_minus_analytic_im",
            "jp_jm",
            "var_jm",
            "anom_jm_re",
            "anom_jm_im",
            "coherence_ratio",
            "hp_occupation_numeric",
            "hp_anomalous_numeric",
            "hp_occupation_analytic",
            "hp_anomalous_analytic",
        ],
        Mode::G2 => &["g2_zero", "jp_jm", "coherence_ratio"],
        Mode::Spectrum => &[
            "coherent_weight",
            "incoherent_weight",
            "incoherent_fraction",
            "coherence_ratio",
            "field_out_re",
            "field_out_im",
            "field_deviation",
            "field_xi2_analytic",
            "tau_max",
            "truncated",
        ],
        Mode::ValidateElimination => &[
            "adiabaticity",
            "g_over_kappa",
            "cutoff",
            "cutoff_drift",
            "jz_full",
            "jz_effective",
            "jz_deviation_over_half_n",
            "j_minus_full_re",
            "j_minus_full_im",
            "j_minus_effective_re",
            "j_minus_effective_im",
            "jp_jm_full",
            "jp_jm_effective",
            "adiabatic",
            "passed",
        ],
        Mode::ReproduceFigures => &[],
    }
}

fn header(mode: Mode, timing: bool) -> Vec<&'static str> {
    let mut cols: Vec<&str> = POINT_COLUMNS.to_vec();
    cols.extend_from_slice(mode_columns(mode));
    cols.extend_from_slice(&STATUS_COLUMNS);
    if timing {
        cols.push("wall_time_s");
    }
    cols.push("failure");
    cols
}

/// Result of one grid point before assembly into a row.
struct PointResult {
    lead: [Cell; 4],
    values: Vec<Cell>,
    report: Option<SteadyStateSolveReport>,
    /// Above/critical analytic request in mean-field mode.
    above: bool,
    failure: Option<String>,
    spectrum: Option<SpectrumResult>,
    seconds: f64,
}

fn lead_cells(e: &EffectiveParams, shift_over_gamma: f64) -> [Cell; 4] {
    [
        e.atoms.into(),
        shift_over_gamma.into(),
        (e.drive.norm() / critical_drive(e)).into(),
        (e.drive.norm() / e.gamma).into(),
    ]
}

fn empty(n: usize) -> Vec<Cell> {
    vec![Cell::Empty; n]
}

fn solve(e: &EffectiveParams, opts: &SteadyStateOptions) -> Result<(DickeModel, DensityMatrix, SteadyStateSolveReport), CoreError> {
    let m = build_dicke_model(e)?;
    let (rho, report) = m.steady_state(opts)?;
    Ok((m, rho, report))
}

fn analytic_ok<T>(r: Result<T, CoreError>) -> Result<Option<T>, CoreError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(CoreError::AboveThreshold { .. } | CoreError::CriticalRegion { .. } | CoreError::InvalidParameter(_)) => {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn run_effective_point(cfg: &RunConfig, mode: Mode, p: Point) -> PointResult {
    let start = Instant::now();
    let b = cfg.effective.as_ref().expect("validated");
    let width = mode_columns(mode).len();
    let mut out = PointResult {
        lead: [p.atoms.into(), p.shift.into(), Cell::Empty, Cell::Empty],
        values: empty(width),
        report: None,
        above: false,
        failure: None,
        spectrum: None,
        seconds: 0.0,
    };
    let e = match effective_params(b, p, cfg.grid.absolute) {
        Ok(e) => e,
        Err(err) => {
            out.failure = Some(err.to_string());
            return out;
        }
    };
    out.lead = lead_cells(&e, p.shift);
    let result = match mode {
        Mode::MeanField => mean_field_row(&e).map(|v| (v, None, None)),
        _ => solve(&e, &solver_options(cfg)).and_then(|(m, rho, report)| {
            let (values, spectrum) = numeric_row(cfg, mode, &e, &m, &rho)?;
            Ok((values, Some(report), spectrum))
        }),
    };
    match result {
        Ok((values, report, spectrum)) => {
            out.values = values;
            out.report = report;
            out.spectrum = spectrum;
        }
        Err(err) => {
            out.above = matches!(err, CoreError::AboveThreshold { .. } | CoreError::CriticalRegion { .. });
            out.failure = Some(err.to_string());
        }
    }
    out.seconds = start.elapsed().as_secs_f64();
    out
}

fn mean_field_row(e: &EffectiveParams) -> Result<Vec<Cell>, CoreError> {
    let mf = mean_field_steady_state(e)?;
    let a = bloch_angles(e)?;
    let xi = spin_squeezing_analytic(e)?;
    let hp = hp_solution(e)?;
    Ok(vec![
        mf.jz.into(),
        (mf.jz / (e.atoms as f64 / 2.0)).into(),
        mf.j_minus.re.into(),
        mf.j_minus.im.into(),
        a.theta.into(),
        a.phi.into(),
        xi.xi2.into(),
        hp.occupation.into(),
        hp.anomalous.into(),
    ])
}

fn numeric_row(
    cfg: &RunConfig,
    mode: Mode,
    e: &EffectiveParams,
    m: &DickeModel,
    rho: &DensityMatrix,
) -> Result<(Vec<Cell>, Option<SpectrumResult>), CoreError> {
    let half_n = e.atoms as f64 / 2.0;
    let row = match mode {
        Mode::SweepJz => {
            let num = expect(rho, &m.ops.j_z)?.re / half_n;
            let ana = analytic_ok(mean_field_steady_state(e))?.map(|mf| mf.jz / half_n);
            vec![num.into(), Cell::opt(ana), Cell::opt(ana.map(|a| num - a))]
        }
        Mode::SweepSqueezing => {
            let num = spin_squeezing_numeric(rho, m.rep)?;
            let ana = analytic_ok(spin_squeezing_analytic(e))?.map(|s| s.xi2);
            vec![num.into(), Cell::opt(ana), Cell::opt(ana.map(|a| num - a))]
        }
        Mode::Moments => {
            let jz = expect(rho, &m.ops.j_z)?.re / half_n;
            let d = dipole_fluctuation_moments(rho, m.rep)?;
            let mf = analytic_ok(mean_field_steady_state(e))?;
            let hp_num = hp_moments_numeric(rho, m.rep)?;
            let hp = analytic_ok(hp_solution(e))?;
            vec![
                jz.into(),
                d.j_minus.re.into(),
                d.j_minus.im.into(),
                Cell::opt(mf.map(|v| v.j_minus.re)),
                Cell::opt(mf.map(|v| v.j_minus.im)),
                d.intensity.into(),
                d.var_jm.into(),
                d.anom_jm.re.into(),
                d.anom_jm.im.into(),
                d.coherence_ratio.into(),
                hp_num.occupation.into(),
                hp_num.anomalous.norm().into(),
                Cell::opt(hp.map(|h| h.occupation)),
                Cell::opt(hp.map(|h| h.anomalous)),
            ]
        }
        Mode::G2 => {
            let d = dipole_fluctuation_moments(rho, m.rep)?;
            vec![g2_zero(rho, m.rep)?.into(), d.intensity.into(), d.coherence_ratio.into()]
        }
        Mode::Spectrum => {
            let b = cfg.effective.as_ref().expect("validated");
            let pc = cavity_for_effective(e, b.kappa * e.gamma)?;
            let jm = expect(rho, &m.ops.j_minus)?;
            let angles = analytic_ok(bloch_angles(e))?.filter(|_| e.drive_ratio() <= CRITICAL_RATIO_LIMIT);
            let fc = field_composition(&pc, jm, angles.as_ref())?;
            let opts = SpectrumOptions {
                tau_max: cfg.solver.tau_max.map(|t| t / e.gamma),
                n_tau: cfg.solver.n_tau,
                ..SpectrumOptions::default()
            };
            let s = output_spectrum(m, rho, &fc, &opts)?;
            let out = fc.free_mean + fc.g_scatter * jm;
            let deviation = if pc.omega_l.norm() > 0.0 {
                Some((out + Complex64::i() * pc.omega_l).norm() / pc.omega_l.norm())
            } else {
                None
            };
            let field_xi2 = if fc.b_coefficient.is_some() { Some(field_squeezing_analytic(&fc)?.xi2) } else { None };
            let fraction = if s.coherent_weight > 0.0 { Some(s.incoherent_weight / s.coherent_weight) } else { None };
            let row = vec![
                s.coherent_weight.into(),
                s.incoherent_weight.into(),
                Cell::opt(fraction),
                s.coherence_ratio.into(),
                out.re.into(),
                out.im.into(),
                Cell::opt(deviation),
                Cell::opt(field_xi2),
                (s.tau.last().copied().unwrap_or(0.0) * e.gamma).into(),
                s.truncated.into(),
            ];
            return Ok((row, Some(s)));
        }
        Mode::MeanField | Mode::ValidateElimination | Mode::ReproduceFigures => unreachable!("not a numeric sweep mode"),
    };
    Ok((row, None))
}

fn cavity_points(cfg: &RunConfig) -> Vec<(Point, Option<f64>)> {
    let c = cfg.cavity.as_ref().expect("validated");
    let mut v = Vec::new();
    for p in grid_points(cfg) {
        match &c.adiabaticity {
            Some(list) => v.extend(list.iter().map(|&a| (p, Some(a)))),
            None => v.push((p, None)),
        }
    }
    v
}

fn cavity_params(cfg: &RunConfig, p: Point, adiabaticity: Option<f64>) -> Result<CavityParams, CoreError> {
    let c = cfg.cavity.as_ref().expect("validated");
    let n = p.atoms as f64;
    let g = match adiabaticity {
        Some(a) => c.kappa / (a * n.sqrt()),
        None => c.g.expect("validated"),
    };
    let zero = Complex64::new(0.0, 0.0);
    let mut pc = CavityParams::new(Complex64::new(g, 0.0), c.kappa, c.delta_c, c.detuning, zero, p.atoms)?;
    pc.omega_l = if cfg.grid.absolute {
        Complex64::new(p.drive * c.kappa, 0.0)
    } else {
        let e = map_cavity_to_effective(&pc)?;
        pc.drive_for_effective(Complex64::new(p.drive * critical_drive(&e), 0.0))?
    };
    Ok(pc)
}

fn run_cavity_point(cfg: &RunConfig, p: Point, adiabaticity: Option<f64>) -> PointResult {
    let start = Instant::now();
    let c = cfg.cavity.as_ref().expect("validated");
    let width = mode_columns(Mode::ValidateElimination).len();
    let mut out = PointResult {
        lead: [p.atoms.into(), Cell::Empty, Cell::Empty, Cell::Empty],
        values: empty(width),
        report: None,
        above: false,
        failure: None,
        spectrum: None,
        seconds: 0.0,
    };
    let result = cavity_params(cfg, p, adiabaticity).and_then(|pc| {
        let e = map_cavity_to_effective(&pc)?;
        out.lead = lead_cells(&e, e.shift / e.gamma);
        let opts = EliminationOptions { cutoff: c.cutoff, min_adiabaticity: c.min_adiabaticity, tolerance: c.tolerance };
        let r = validate_elimination(&pc, &opts)?;
        let half_n = p.atoms as f64 / 2.0;
        out.report = Some(r.solve.clone());
        Ok(vec![
            pc.adiabaticity().into(),
            (pc.g.norm() / pc.kappa).into(),
            r.cutoff.into(),
            r.cutoff_drift.into(),
            r.jz.full.re.into(),
            r.jz.effective.re.into(),
            (r.jz.absolute / half_n).into(),
            r.j_minus.full.re.into(),
            r.j_minus.full.im.into(),
            r.j_minus.effective.re.into(),
            r.j_minus.effective.im.into(),
            r.jp_jm.full.re.into(),
            r.jp_jm.effective.re.into(),
            r.adiabatic.into(),
            r.passed.into(),
        ])
    });
    match result {
        Ok(v) => out.values = v,
        Err(err) => out.failure = Some(err.to_string()),
    }
    out.seconds = start.elapsed().as_secs_f64();
    out
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, LabError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// Runs a sweep mode over its grid and assembles the table in grid order.
pub fn run(cfg: &RunConfig) -> Result<RunOutput, LabError> {
    cfg.validate()?;
    let mode = cfg.mode()?;
    if mode == Mode::ReproduceFigures {
        return Err(LabError::Config("reproduce-figures writes several files; use reproduce_figures".into()));
    }
    let results: Vec<PointResult> = if mode == Mode::ValidateElimination {
        let points = cavity_points(cfg);
        with_pool(cfg.solver.threads, || points.par_iter().map(|&(p, a)| run_cavity_point(cfg, p, a)).collect())?
    } else {
        let points = grid_points(cfg);
        with_pool(cfg.solver.threads, || points.par_iter().map(|&p| run_effective_point(cfg, mode, p)).collect())?
    };
    Ok(assemble(mode, results, cfg.output.timestamp))
}

fn assemble(mode: Mode, results: Vec<PointResult>, timing: bool) -> RunOutput {
    let mut table = Table::new(&header(mode, timing));
    let mut spectra = (mode == Mode::Spectrum).then(|| Table::new(&["N", "delta_over_gamma", "omega_over_omega_c", "omega", "spectrum"]));
    let mut exit_code = EXIT_OK;
    for r in results {
        if let (Some(t), Some(s)) = (spectra.as_mut(), r.spectrum.as_ref()) {
            for (w, v) in s.omega.iter().zip(&s.incoherent_spectrum) {
                t.push(vec![r.lead[0].clone(), r.lead[1].clone(), r.lead[2].clone(), (*w).into(), (*v).into()]);
            }
        }
        let status = match (&r.failure, r.above) {
            (None, _) => "ok",
            (Some(_), true) => "above-threshold",
            (Some(_), false) => "failed",
        };
        let code = match (&r.failure, r.above) {
            (None, _) => EXIT_OK,
            (Some(_), true) => EXIT_ABOVE_THRESHOLD,
            (Some(_), false) => EXIT_SOLVER,
        };
        // solver failures dominate above-threshold requests
        if code == EXIT_SOLVER || (code == EXIT_ABOVE_THRESHOLD && exit_code == EXIT_OK) {
            exit_code = code;
        }
        let mut row: Vec<Cell> = r.lead.into_iter().collect();
        row.extend(r.values);
        row.push(Cell::opt(r.report.as_ref().map(|x| x.relative_residual)));
        row.push(r.report.as_ref().map_or(Cell::Empty, |x| method_name(x).into()));
        row.push(status.into());
        if timing {
            row.push(r.seconds.into());
        }
        row.push(r.failure.map_or(Cell::Empty, Cell::Text));
        table.push(row);
    }
    RunOutput { table, spectra, exit_code }
}

fn method_name(r: &SteadyStateSolveReport) -> String {
    serde_json::to_value(r.method).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

/// Writes the main table (and spectra, if any) to `path`, or CSV to stdout without a path.
pub fn write_output(out: &RunOutput, cfg: &RunConfig, generated: Option<u64>) -> Result<(), LabError> {
    match &cfg.output.path {
        Some(path) => {
            out.table.save(path, cfg.output.json, generated)?;
            if let Some(s) = &out.spectra {
                s.save(&sibling(path, "spectrum"), cfg.output.json, generated)?;
            }
        }
        None => out.table.write_csv(std::io::stdout().lock(), generated)?,
    }
    Ok(())
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

/// Figure-data tables: population inversion and spin squeezing for N = 50 over
/// Δ/γ ∈ {0, 0.5, 1} and 30 drives |Ω|/Ω_c ∈ [0.05, 1.2], one solve per point.
pub fn reproduce_figures(cfg: &RunConfig) -> Result<(Table, Table, i32), LabError> {
    let mut fig = cfg.clone();
    fig.mode = Some(Mode::SweepJz);
    fig.effective = Some(cfg.effective.clone().unwrap_or_default());
    fig.cavity = None;
    fig.grid = crate::config::GridBlock {
        atoms: vec![50],
        shifts: vec![0.0, 0.5, 1.0],
        drive: vec![],
        drive_range: Some(crate::config::Range { start: 0.05, stop: 1.2, points: 30 }),
        absolute: false,
    };
    fig.validate()?;
    let points = grid_points(&fig);
    let opts = solver_options(&fig);
    let b = fig.effective.clone().expect("set above");
    let rows: Vec<Result<[f64; 6], String>> = with_pool(fig.solver.threads, || {
        points
            .par_iter()
            .map(|&p| {
                let e = effective_params(&b, p, false).map_err(|e| e.to_string())?;
                let (m, rho, report) = solve(&e, &opts).map_err(|e| e.to_string())?;
                let jz = expect(&rho, &m.ops.j_z).map_err(|e| e.to_string())?.re / (e.atoms as f64 / 2.0);
                let xi2 = spin_squeezing_numeric(&rho, m.rep).map_err(|e| e.to_string())?;
                Ok([p.atoms as f64, p.shift, p.drive, jz, xi2, report.relative_residual])
            })
            .collect()
    })?;
    let cols = |obs: &str| {
        vec![
            "N".to_string(),
            "delta_over_gamma".into(),
            "omega_over_omega_c".into(),
            format!("{obs}_numeric"),
            format!("{obs}_analytic"),
            "residual".into(),
            "solver_residual".into(),
            "failure".into(),
        ]
    };
    let mut fig2 = Table { columns: cols("jz_over_half_n"), rows: vec![] };
    let mut fig3 = Table { columns: cols("xi2"), rows: vec![] };
    let mut code = EXIT_OK;
    for (p, r) in points.iter().zip(rows) {
        let lead = [Cell::from(p.atoms), p.shift.into(), p.drive.into()];
        let below = p.drive < 1.0;
        let jz_ana = below.then(|| -(1.0 - p.drive * p.drive).sqrt());
        let xi_ana = (p.drive <= CRITICAL_RATIO_LIMIT).then(|| (1.0 - p.drive * p.drive).sqrt());
        for (t, ana, k) in [(&mut fig2, jz_ana, 3), (&mut fig3, xi_ana, 4)] {
            let mut row: Vec<Cell> = lead.to_vec();
            match &r {
                Ok(v) => {
                    row.extend([v[k].into(), Cell::opt(ana), Cell::opt(ana.map(|a| v[k] - a)), v[5].into(), Cell::Empty]);
                }
                Err(msg) => {
                    code = EXIT_SOLVER;
                    row.extend([Cell::Empty, Cell::opt(ana), Cell::Empty, Cell::Empty, msg.clone().into()]);
                }
            }
            t.push(row);
        }
    }
    Ok((fig2, fig3, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> RunConfig {
        RunConfig::from_json(json).unwrap()
    }

    #[test]
    fn mean_field_zero_drive() {
        let c = cfg(r#"{"mode": "mean-field", "effective": {}, "grid": {"atoms": [8], "drive": [0]}, "output": {"timestamp": false}}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.table.rows.len(), 1);
        assert_eq!(out.table.values("jz").unwrap(), vec![Some(-4.0)]);
    }

    #[test]
    fn mean_field_above_threshold_exit_code() {
        let c = cfg(r#"{"mode": "mean-field", "effective": {}, "grid": {"atoms": [8], "drive": [0.5, 1.1]}}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_ABOVE_THRESHOLD);
        let status = out.table.column("status").unwrap();
        assert_eq!(out.table.rows[1][status], Cell::from("above-threshold"));
        assert!(out.table.column("wall_time_s").is_some());
    }

    #[test]
    fn sweep_leaves_analytic_empty_above_threshold() {
        let c = cfg(r#"{"mode": "sweep-jz", "effective": {}, "grid": {"atoms": [6], "drive": [0.5, 1.2]}}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_OK);
        let ana = out.table.values("jz_over_half_n_analytic").unwrap();
        assert!(ana[0].is_some() && ana[1].is_none());
        assert!(out.table.values("jz_over_half_n_numeric").unwrap().iter().all(Option::is_some));
    }

    #[test]
    fn solver_failure_is_flagged() {
        // g2 of the undriven ground state has a vanishing denominator
        let c = cfg(r#"{"mode": "g2", "effective": {}, "grid": {"atoms": [3], "drive": [0.3, 0.0]}}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.exit_code, EXIT_SOLVER);
        let f = out.table.column("failure").unwrap();
        assert_eq!(out.table.rows[0][f], Cell::Empty);
        assert!(matches!(out.table.rows[1][f], Cell::Text(_)));
    }

    #[test]
    fn absolute_drive_units() {
        let c = cfg(r#"{"mode": "g2", "effective": {}, "grid": {"atoms": [1], "drive": [0.25], "absolute": true}}"#);
        let out = run(&c).unwrap();
        assert_eq!(out.table.values("omega_over_gamma").unwrap(), vec![Some(0.25)]);
        assert_eq!(out.table.values("omega_over_omega_c").unwrap(), vec![Some(1.0)]);
        assert_eq!(out.table.values("g2_zero").unwrap(), vec![Some(0.0)]);
    }
}
