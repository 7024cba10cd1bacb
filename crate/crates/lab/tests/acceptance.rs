//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::io::Write;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use dicke_core::lindblad::{
    expect, steady_state, time_evolve, two_time_correlator, DensityMatrix, RkOptions, SolveMethod, SteadyStateOptions,
};
use dicke_core::models::build_dicke_model;
use dicke_core::observables::{
    cavity_for_effective, dipole_fluctuation_moments, field_composition, hp_moments, hp_moments_numeric, hp_solution,
    output_spectrum, spin_squeezing_numeric, SpectrumOptions,
};
use dicke_core::params::{critical_drive, map_cavity_to_effective, mean_field_steady_state, BlochAngles, CavityParams, EffectiveParams};
use dicke_core::spin::{build_spin_operators, SpinRep};
use dicke_lab::{reproduce_figures, run, RunConfig, Table};
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn col(t: &Table, name: &str) -> Vec<f64> {
    t.values(name).unwrap_or_else(|| panic!("missing column {name}")).into_iter().map(|v| v.unwrap_or(f64::NAN)).collect()
}

fn opts() -> SteadyStateOptions {
    SteadyStateOptions::default()
}

fn solve(e: &EffectiveParams) -> Result<(dicke_core::models::DickeModel, DensityMatrix), String> {
    let m = build_dicke_model(e).map_err(|e| e.to_string())?;
    let (rho, _) = m.steady_state(&opts()).map_err(|e| e.to_string())?;
    Ok((m, rho))
}

/// Curves of the figure tables split by Δ/γ, each as (drive ratio, value) pairs.
fn curves(t: &Table, obs: &str) -> Vec<(f64, Vec<(f64, f64)>)> {
    let shift = col(t, "delta_over_gamma");
    let r = col(t, "omega_over_omega_c");
    let v = col(t, obs);
    let mut out: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for k in 0..r.len() {
        match out.iter_mut().find(|c| c.0 == shift[k]) {
            Some(c) => c.1.push((r[k], v[k])),
            None => out.push((shift[k], vec![(r[k], v[k])])),
        }
    }
    out
}

fn figures() -> Result<(Table, Table, Duration), String> {
    let start = Instant::now();
    let mut cfg = RunConfig::default();
    cfg.output.timestamp = false;
    let (fig2, fig3, code) = reproduce_figures(&cfg).map_err(|e| e.to_string())?;
    ensure(code == 0, format!("figure run exit code {code}"))?;
    Ok((fig2, fig3, start.elapsed()))
}

fn criterion_1(fig2: &Table, elapsed: Duration) -> Check {
    let mut worst_a: f64 = 0.0;
    let cs = curves(fig2, "jz_over_half_n_numeric");
    ensure(cs.len() == 3 && cs.iter().all(|c| c.1.len() == 30), "grid is not 3 × 30")?;
    for (_, c) in &cs {
        for &(r, v) in c.iter().filter(|p| p.0 <= 0.8 + 1e-12) {
            worst_a = worst_a.max((v + (1.0 - r * r).sqrt()).abs());
        }
    }
    let mut worst_b: f64 = 0.0;
    for k in 0..30 {
        for i in 0..3 {
            for j in i + 1..3 {
                worst_b = worst_b.max((cs[i].1[k].1 - cs[j].1[k].1).abs());
            }
        }
    }
    let msg = format!("max |num - mf| = {worst_a:.4} (Ω ≤ 0.8Ω_c), max Δ-spread = {worst_b:.2e}, {:.1} s", elapsed.as_secs_f64());
    ensure(worst_a <= 0.03 && worst_b <= 0.01 && elapsed <= Duration::from_secs(60), msg.clone())?;
    Ok(msg)
}

fn criterion_2(fig3: &Table) -> Check {
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for (shift, c) in curves(fig3, "xi2_numeric") {
        for &(r, v) in c.iter().filter(|p| p.0 <= 0.7 + 1e-12) {
            worst = worst.max((v - (1.0 - r * r).sqrt()).abs());
        }
        let below: Vec<(f64, f64)> = c.iter().copied().filter(|p| p.0 < 1.0).collect();
        let (k_min, &(r_min, v_min)) =
            below.iter().enumerate().min_by(|a, b| a.1 .1.total_cmp(&b.1 .1)).ok_or("empty curve")?;
        let tail = &below[k_min..];
        let grows = tail.windows(2).all(|w| w[1].1 >= w[0].1) && tail.last().unwrap().1 > v_min + 0.05;
        ensure(
            k_min > 0 && k_min + 1 < below.len() && grows,
            format!("Δ/γ={shift}: no interior minimum followed by growth (min at {r_min:.3})"),
        )?;
        notes.push(format!("Δ/γ={shift}: min {v_min:.3} at {r_min:.3}"));
    }
    let msg = format!("max |num - √(1-r²)| = {worst:.4} (Ω ≤ 0.7Ω_c); {}", notes.join(", "));
    ensure(worst <= 0.05, msg.clone())?;
    Ok(msg)
}

fn xi2_at(n: u32, r: f64) -> Result<f64, String> {
    let e = EffectiveParams::at_drive_ratio(1.0, 0.0, r, 0.0, n).map_err(|e| e.to_string())?;
    let (m, rho) = solve(&e)?;
    spin_squeezing_numeric(&rho, m.rep).map_err(|e| e.to_string())
}

/// Coarse scan then golden-section refinement of min_r ξ²(r).
fn min_xi2(n: u32) -> Result<(f64, f64), String> {
    let grid: Vec<f64> = (0..=10).map(|k| 0.5 + 0.049 * k as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&r| xi2_at(n, r)).collect::<Result<_, _>>()?;
    let k = (0..vals.len()).min_by(|&a, &b| vals[a].total_cmp(&vals[b])).unwrap();
    let (mut a, mut b) = (grid[k.saturating_sub(1)], grid[(k + 1).min(grid.len() - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let (mut f1, mut f2) = (xi2_at(n, x1)?, xi2_at(n, x2)?);
    while b - a > 2e-3 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = xi2_at(n, x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = xi2_at(n, x2)?;
        }
    }
    let (r, v) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    Ok((r, v.min(vals[k])))
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let ns = [20u32, 40, 80, 160];
    let mut pts = Vec::new();
    for &n in &ns {
        let (r, v) = min_xi2(n)?;
        pts.push(((n as f64).ln(), v.ln(), r, v));
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / 4.0;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / 4.0;
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    let elapsed = start.elapsed();
    let detail: Vec<String> = ns.iter().zip(&pts).map(|(n, p)| format!("N={n}: {:.3}@{:.3}", p.3, p.2)).collect();
    let msg = format!("slope {slope:.3} [{}], {:.0} s", detail.join(" "), elapsed.as_secs_f64());
    ensure((-0.45..=-0.20).contains(&slope) && elapsed <= Duration::from_secs(600), msg.clone())?;
    Ok(msg)
}

fn criterion_4() -> Check {
    let mut notes = Vec::new();
    for shift in [0.0, 0.5] {
        let e = EffectiveParams::at_drive_ratio(1.0, shift, 0.5, 0.0, 50).map_err(|e| e.to_string())?;
        let (m, rho) = solve(&e)?;
        let jm = expect(&rho, &m.ops.j_minus).map_err(|e| e.to_string())?;
        let target = -e.drive / Complex64::new(e.shift, e.gamma / 2.0);
        let rel = (jm.norm() - target.norm()).abs() / target.norm();
        let dphase = (jm / target).arg().abs();
        notes.push(format!("Δ/γ={shift}: |rel| {rel:.1e}, phase {dphase:.1e}"));
        ensure(rel <= 0.05 && dphase <= 0.05, notes.join("; "))?;
    }
    Ok(notes.join("; "))
}

fn criterion_5() -> Check {
    let cfg = RunConfig::from_json(
        r#"{"mode": "validate-elimination",
            "cavity": {"kappa": 1.0, "delta_c": 0.0, "adiabaticity": [2, 5, 10, 20]},
            "grid": {"atoms": [2], "drive": [0.5]},
            "output": {"timestamp": false}}"#,
    )
    .map_err(|e| e.to_string())?;
    let out = run(&cfg).map_err(|e| e.to_string())?;
    ensure(out.exit_code == 0, format!("exit code {}", out.exit_code))?;
    let dev = col(&out.table, "jz_deviation_over_half_n");
    let drift = col(&out.table, "cutoff_drift");
    let msg = format!("deviations/(N/2) at κ/(√N g) = 2,5,10,20: [{}], cutoff drift ≤ {:.1e}", dev.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", "), drift.iter().cloned().fold(0.0, f64::max));
    ensure(dev[3] <= 0.05 && dev.windows(2).all(|w| w[1] < w[0]), msg.clone())?;
    Ok(msg)
}

/// Exact incoherent fraction ⟨(J₊−ḡ)(J₋−g)⟩-based value for the closed-form steady state
/// ρ ∝ A A†, A = (1 − J₋/g)⁻¹, at Δ = 0: var/|⟨J₋⟩|² = q/(1 − q) with q = (N+1)/Tr(AA†).
fn exact_incoherent_fraction(n: u32, ratio: f64) -> f64 {
    let j = n as f64 / 2.0;
    let g2 = (2.0 * ratio * critical_drive(&EffectiveParams::new(1.0, 0.0, Complex64::new(0.0, 0.0), n).unwrap())).powi(2);
    let c2: Vec<f64> = (0..n as usize).map(|k| {
        let m = k as f64 - j;
        j * (j + 1.0) - m * (m + 1.0)
    }).collect();
    // Tr(J₋^m J₊^m) = Σ_k Π_{i=k}^{k+m-1} c2[i]; sum the series term by term in log space
    let mut log_terms = Vec::new();
    for m in 0..=n as usize {
        for k in 0..=(n as usize - m) {
            let log_p: f64 = c2[k..k + m].iter().map(|x| x.ln()).sum();
            log_terms.push(log_p - m as f64 * g2.ln());
        }
    }
    let top = log_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_z = top + log_terms.iter().map(|l| (l - top).exp()).sum::<f64>().ln();
    let q = ((n as f64 + 1.0).ln() - log_z).exp();
    q / (1.0 - q)
}

fn criterion_6() -> Check {
    let ns = [10u32, 20, 40, 80];
    let mut ratio = Vec::new();
    let mut frac = Vec::new();
    let mut spectral = Vec::new();
    let mut unc = Vec::new();
    let mut exact = Vec::new();
    for &n in &ns {
        let e = EffectiveParams::at_drive_ratio(1.0, 0.0, 0.5, 0.0, n).map_err(|e| e.to_string())?;
        let m = build_dicke_model(&e).map_err(|e| e.to_string())?;
        let (rho, _) = m.steady_state(&opts()).map_err(|e| e.to_string())?;
        let lt = SteadyStateOptions { method: Some(SolveMethod::LongTimeIntegration), ..opts() };
        let (rho_lt, _) = steady_state(&m.liouvillian, &lt).map_err(|e| e.to_string())?;
        let d = dipole_fluctuation_moments(&rho, m.rep).map_err(|e| e.to_string())?;
        let p = cavity_for_effective(&e, 20.0).map_err(|e| e.to_string())?;
        let fc = field_composition(&p, d.j_minus, None).map_err(|e| e.to_string())?;
        let s = output_spectrum(&m, &rho, &fc, &SpectrumOptions::default()).map_err(|e| e.to_string())?;
        // error bar: |δ var| ≤ ‖J₋ − ⟨J₋⟩‖² ‖δρ‖₁, with δρ estimated from two independent solvers
        let k_norm = n as f64 / 2.0 + 0.5 + d.j_minus.norm();
        let td = rho.trace_distance(&rho_lt);
        let u = k_norm.powi(2) * (2.0 * td + (n as f64 + 1.0) * f64::EPSILON) / d.j_minus.norm_sqr();
        ratio.push(d.coherence_ratio);
        frac.push(d.var_jm / d.j_minus.norm_sqr());
        spectral.push(s.incoherent_weight / s.coherent_weight);
        unc.push(u);
        exact.push(exact_incoherent_fraction(n, 0.5));
    }
    let mut problems = Vec::new();
    if ratio[3] <= 0.95 {
        problems.push(format!("coherence ratio at N=80 is {:.4}", ratio[3]));
    }
    for i in 0..3 {
        let slack = unc[i] + unc[i + 1];
        // 1 − ratio equals the fraction to first order; compare both with the same error bar
        if !(ratio[i + 1] >= ratio[i] - slack) {
            problems.push(format!("coherence ratio drops N={}→{}", ns[i], ns[i + 1]));
        }
        if !(frac[i + 1] <= frac[i] + slack) {
            problems.push(format!("incoherent fraction rises N={}→{}", ns[i], ns[i + 1]));
        }
        let spec_slack = slack * (spectral[i].max(1e-300) / frac[i].max(1e-300)).max(1.0);
        if !(spectral[i + 1] <= spectral[i] + spec_slack) {
            problems.push(format!("spectral incoherent/coherent rises N={}→{}", ns[i], ns[i + 1]));
        }
        if !(exact[i + 1] < exact[i]) {
            problems.push(format!("exact fraction not decreasing N={}→{}", ns[i], ns[i + 1]));
        }
    }
    for i in 0..4 {
        if (frac[i] - exact[i]).abs() > unc[i] + 1e-6 * exact[i] {
            problems.push(format!("N={}: numeric fraction {:.3e} vs exact {:.3e} (±{:.1e})", ns[i], frac[i], exact[i], unc[i]));
        }
    }
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(", ");
    let msg = format!(
        "ratio(80) = {:.6}; 1-ratio = [{}]; incoh/coh spectral = [{}]; exact = [{}]; resolution = [{}]",
        ratio[3],
        fmt(&ratio.iter().map(|r| 1.0 - r).collect::<Vec<_>>()),
        fmt(&spectral),
        fmt(&exact),
        fmt(&unc)
    );
    if problems.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{}; {msg}", problems.join("; ")))
    }
}

fn criterion_7() -> Check {
    let mut rng = StdRng::seed_from_u64(7);
    let mut worst_mean: f64 = 0.0;
    for _ in 0..100 {
        let g = Complex64::from_polar(rng.random_range(0.01..3.0), rng.random_range(-3.1..3.1));
        let zero = Complex64::new(0.0, 0.0);
        let n = rng.random_range(1..400);
        let mut p = CavityParams::new(g, rng.random_range(0.05..50.0), rng.random_range(-20.0..20.0), 0.0, zero, n)
            .map_err(|e| e.to_string())?;
        let e0 = map_cavity_to_effective(&p).map_err(|e| e.to_string())?;
        let omega = Complex64::from_polar(rng.random_range(0.0..0.99) * critical_drive(&e0), rng.random_range(-3.1..3.1));
        p.omega_l = p.drive_for_effective(omega).map_err(|e| e.to_string())?;
        let e = map_cavity_to_effective(&p).map_err(|e| e.to_string())?;
        let mf = mean_field_steady_state(&e).map_err(|e| e.to_string())?;
        let fc = field_composition(&p, mf.j_minus, None).map_err(|e| e.to_string())?;
        let scale = fc.free_mean.norm() + fc.scattered_mean.norm() + p.omega_l.norm();
        worst_mean = worst_mean.max((fc.mean_field_out + Complex64::i() * p.omega_l).norm() / scale);
    }
    let mut worst_bd: f64 = 0.0;
    let mut worst_xi: f64 = 0.0;
    let p = CavityParams::new(Complex64::new(0.3, 0.1), 4.0, -1.0, 0.0, Complex64::new(0.5, 0.0), 30).map_err(|e| e.to_string())?;
    for _ in 0..50 {
        let theta = rng.random_range(0.0..1.45);
        let a = BlochAngles::new(theta, rng.random_range(-3.1..3.1));
        let fc = field_composition(&p, Complex64::new(0.0, 0.0), Some(&a)).map_err(|e| e.to_string())?;
        let b = fc.b_coefficient.ok_or("missing B coefficient")?;
        worst_bd = worst_bd.max(fc.b_dagger_coefficient.ok_or("missing B† coefficient")?.norm() / b.norm());
        let s = hp_moments(&a).map_err(|e| e.to_string())?;
        worst_xi = worst_xi.max((1.0 + 2.0 * s.occupation - 2.0 * s.anomalous - theta.cos()).abs() / (1.0 + s.occupation));
    }
    let tol = 16.0 * f64::EPSILON;
    let msg = format!("mean identity {worst_mean:.1e}, B† coefficient {worst_bd:.1e}, ξ² reconstruction {worst_xi:.1e} (relative)");
    ensure(worst_mean <= tol && worst_bd <= tol && worst_xi <= tol, msg.clone())?;
    Ok(msg)
}

fn criterion_8() -> Check {
    let mut worst_alg: f64 = 0.0;
    for n in [1u32, 2, 7, 50, 160, 500] {
        let ops = build_spin_operators(SpinRep::from_atoms(n));
        let j = n as f64 / 2.0;
        let two_jz = &ops.j_z * 2.0;
        let c1 = &ops.j_plus.commutator(&ops.j_minus) - &two_jz;
        let c2 = &ops.j_z.commutator(&ops.j_minus) + &ops.j_minus;
        let c3 = &ops.j_z.commutator(&ops.j_plus) - &ops.j_plus;
        let target = &ops.identity() * (j * (j + 1.0));
        let cas = &ops.casimir() - &target;
        worst_alg = worst_alg
            .max(c1.norm_frobenius() / two_jz.norm_frobenius().max(1.0))
            .max(c2.norm_frobenius() / ops.j_minus.norm_frobenius())
            .max(c3.norm_frobenius() / ops.j_plus.norm_frobenius())
            .max(cas.norm_frobenius() / target.norm_frobenius());
    }
    ensure(worst_alg <= 1e-12, format!("relative algebra error {worst_alg:.1e}"))?;

    let mut worst_state: f64 = 0.0;
    let mut worst_methods: f64 = 0.0;
    let mut worst_tau0: f64 = 0.0;
    for n in [2u32, 6, 12, 20] {
        for (shift, r) in [(0.0, 0.5), (1.0, 0.9), (0.5, 1.2)] {
            let e = EffectiveParams::at_drive_ratio(1.0, shift, r, 0.0, n).map_err(|e| e.to_string())?;
            let m = build_dicke_model(&e).map_err(|e| e.to_string())?;
            let mut states = Vec::new();
            for method in [SolveMethod::DenseNullspace, SolveMethod::SparseDirect, SolveMethod::LongTimeIntegration] {
                let o = SteadyStateOptions { method: Some(method), ..opts() };
                states.push(steady_state(&m.liouvillian, &o).map_err(|e| e.to_string())?.0);
            }
            for s in &states {
                let raw = s.matrix();
                worst_state = worst_state
                    .max((raw.trace() - Complex64::new(1.0, 0.0)).norm())
                    .max((raw - raw.adjoint()).norm());
            }
            worst_methods = worst_methods.max(states[0].trace_distance(&states[1])).max(states[0].trace_distance(&states[2]));
            let traj = time_evolve(&m.liouvillian, &DensityMatrix::basis_state(n as usize + 1, 0), &[0.5, 2.0], RkOptions::default())
                .map_err(|e| e.to_string())?;
            for s in &traj {
                let raw = s.matrix();
                worst_state = worst_state
                    .max((raw.trace() - Complex64::new(1.0, 0.0)).norm())
                    .max((raw - raw.adjoint()).norm());
            }
            let ops = &m.ops;
            let c = two_time_correlator(&m.liouvillian, &states[1], &ops.j_plus, &ops.j_minus, &[0.0], RkOptions::default())
                .map_err(|e| e.to_string())?;
            let moment = expect(&states[1], &(&ops.j_plus * &ops.j_minus)).map_err(|e| e.to_string())?;
            worst_tau0 = worst_tau0.max((c[0] - moment).norm());
        }
    }
    let deterministic = determinism()?;
    let msg = format!(
        "algebra {worst_alg:.1e}, trace/hermiticity {worst_state:.1e}, methods {worst_methods:.1e}, τ=0 {worst_tau0:.1e}, serial/parallel CSV identical: {deterministic}"
    );
    ensure(worst_state <= 1e-9 && worst_methods <= 1e-7 && worst_tau0 <= 1e-10 && deterministic, msg.clone())?;
    Ok(msg)
}

/// Runs the CLI over one sweep with 1 and 3 threads and compares the files byte by byte.
fn determinism() -> Result<bool, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cfg = dir.path().join("sweep.json");
    std::fs::write(
        &cfg,
        r#"{"effective": {}, "grid": {"atoms": [6, 12, 25], "shifts": [0, 0.5],
            "drive_range": {"start": 0.1, "stop": 1.1, "points": 6}}}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for threads in ["1", "3", "1"] {
        let path = dir.path().join(format!("out{}.csv", outputs.len()));
        let status = Command::new(env!("CARGO_BIN_EXE_dicke-lab"))
            .args(["sweep-squeezing", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&path)
            .args(["--threads", threads, "--no-timestamp"])
            .status()
            .map_err(|e| e.to_string())?;
        ensure(status.success(), format!("cli exit {status}"))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    Ok(outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].is_empty())
}

fn criterion_9() -> Check {
    let e = EffectiveParams::at_drive_ratio(1.0, 0.0, 0.5, 0.0, 100).map_err(|e| e.to_string())?;
    let (m, rho) = solve(&e)?;
    let num = hp_moments_numeric(&rho, m.rep).map_err(|e| e.to_string())?;
    let ana = hp_solution(&e).map_err(|e| e.to_string())?;
    let r_occ = (num.occupation - ana.occupation).abs() / ana.occupation;
    let r_anom = (num.anomalous.norm() - ana.anomalous).abs() / ana.anomalous;
    let msg = format!(
        "<a†a> {:.5} vs {:.5} ({:.1}%), |<a²>| {:.5} vs {:.5} ({:.1}%)",
        num.occupation,
        ana.occupation,
        100.0 * r_occ,
        num.anomalous.norm(),
        ana.anomalous,
        100.0 * r_anom
    );
    ensure(r_occ <= 0.10 && r_anom <= 0.10, msg.clone())?;
    Ok(msg)
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Check)> = Vec::new();
    match figures() {
        Ok((fig2, fig3, elapsed)) => {
            results.push(("1 population inversion and collapse", criterion_1(&fig2, elapsed)));
            results.push(("2 spin squeezing", criterion_2(&fig3)));
        }
        Err(e) => {
            results.push(("1 population inversion and collapse", Err(e.clone())));
            results.push(("2 spin squeezing", Err(e)));
        }
    }
    results.push(("3 finite-size squeezing scaling", criterion_3()));
    results.push(("4 mean dipole", criterion_4()));
    results.push(("5 adiabatic elimination", criterion_5()));
    results.push(("6 coherent light at finite N", criterion_6()));
    results.push(("7 field-theory identities", criterion_7()));
    results.push(("8 engine properties", criterion_8()));
    results.push(("9 fluctuation moment bridge", criterion_9()));

    let mut out = std::io::stdout().lock();
    let mut failed = 0;
    for (name, r) in &results {
        let line = match r {
            Ok(m) => format!("PASS  {name}: {m}"),
            Err(m) => {
                failed += 1;
                format!("FAIL  {name}: {m}")
            }
        };
        let _ = writeln!(out, "{line}");
    }
    let _ = writeln!(out, "acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
