//! Implementations behind the `nbody-majorants` binary.
//!
//! Each command resolves its options, writes CSV outputs plus a JSON run
//! manifest into the output directory, and echoes the main table to stdout.
//! All outputs are plain CSV with round-trip float formatting, so reruns
//! with the same configuration are byte-identical.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::{
    error_probe, gauss_tableau, integrate, ErrorTable, IntegrationConfig, ProbeMode,
    ReferenceScheme, Trajectory,
};
use crate::majorants::{
    lambda_series, midpoint_radius_hat, midpoint_xi_zeta_hat, radius_flow, radius_r, radius_r_hat,
    rho_series, rk_local_error_bound, xi_zeta_series, BoundScalings, RenormMajorant,
};
use crate::nbody::presets;
use crate::nbody::{RenormKind, RenormSpec, SystemState, G_AU_DAY_MSUN};
use crate::series::TruncatedSeries;
use crate::validate::{dominance_sweep, inequality_sweep, SweepReport};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "NBODY_MAJORANTS_OUT";

/// Options shared by every command.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalOpts {
    pub out_dir: PathBuf,
    /// quadrature/consistency tolerance where a command needs one
    pub tol: f64,
    /// truncation degree for series constructions
    pub order: usize,
    /// seed for randomized sweeps
    pub seed: u64,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            out_dir: std::env::var_os(OUT_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("out")),
            tol: 1e-12,
            order: crate::series::DEFAULT_ORDER,
            seed: 1,
        }
    }
}

/// Written next to every command's outputs; reruns with an identical
/// configuration produce byte-identical output files (the manifest itself
/// carries the wall-clock duration).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub library_version: String,
    pub unit_constants: serde_json::Value,
    pub outputs: Vec<String>,
    pub duration_ms: u128,
}

impl RunManifest {
    fn new(command: &str, config: serde_json::Value) -> Self {
        RunManifest {
            command: command.to_string(),
            config,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
            unit_constants: serde_json::json!({ "g_au_day_msun": G_AU_DAY_MSUN }),
            outputs: Vec::new(),
            duration_ms: 0,
        }
    }

    fn finish(mut self, out_dir: &Path, started: Instant) -> Result<Self> {
        self.duration_ms = started.elapsed().as_millis();
        let path = out_dir.join(format!("manifest_{}.json", self.command));
        std::fs::write(&path, serde_json::to_string_pretty(&self)?)?;
        Ok(self)
    }
}

fn write_output(
    manifest: &mut RunManifest,
    out_dir: &Path,
    name: &str,
    content: &str,
) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join(name);
    std::fs::write(&path, content)?;
    manifest.outputs.push(name.to_string());
    Ok(())
}

// ---------------------------------------------------------------------------
// radii
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadiiOptions {
    /// η₀ grid for r(η₀) and r̂(η₀)
    pub eta0: Vec<f64>,
}

impl Default for RadiiOptions {
    fn default() -> Self {
        RadiiOptions { eta0: vec![0.5] }
    }
}

/// `radii`: certified radii table (name, value, tolerance, description).
pub fn cmd_radii(opts: &GlobalOpts, radii_opts: &RadiiOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("radii", serde_json::to_value(radii_opts)?);
    let mut csv = String::from("name,value,tolerance,description\n");
    for &eta0 in &radii_opts.eta0 {
        let r = radius_r(eta0)?;
        csv.push_str(&format!(
            "r({eta0}),{r},1e-10,physical-time profile radius at eta0\n"
        ));
    }
    for &eta0 in &radii_opts.eta0 {
        let rh = radius_r_hat(eta0)?;
        csv.push_str(&format!(
            "rhat({eta0}),{rh},1e-10,supremum-form radius estimate at eta0\n"
        ));
    }
    let fr = radius_flow(opts.tol)?;
    csv.push_str(&format!(
        "v_plus,{},1e-12,first positive zero of the flow-radius integrand\n",
        fr.v_plus
    ));
    csv.push_str(&format!(
        "R,{},{:e},renormalized-flow strip half-width\n",
        fr.value,
        fr.quad_error.max(opts.tol)
    ));
    let mr = midpoint_radius_hat(opts.tol)?;
    csv.push_str(&format!(
        "R_hat,{},1e-4,midpoint stage-majorant radius (fold estimate)\n",
        mr.value
    ));
    csv.push_str(&format!(
        "R_hat_ratio,{},1e-3,midpoint radius by coefficient-ratio extrapolation\n",
        mr.ratio_estimate
    ));
    if mr.relative_spread() > 1e-3 {
        eprintln!(
            "warning: midpoint radius estimates disagree by {:.3e} relative",
            mr.relative_spread()
        );
    }
    print!("{csv}");
    write_output(&mut manifest, &opts.out_dir, "radii.csv", &csv)?;
    manifest.finish(&opts.out_dir, started)
}

// ---------------------------------------------------------------------------
// series
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesFamily {
    Rho,
    Lambda,
    XiZeta,
    Midpoint,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesOptions {
    pub which: SeriesFamily,
    pub mu0: f64,
    pub nu0: f64,
    pub eta0: f64,
}

fn one_column_csv(name: &str, s: &TruncatedSeries) -> String {
    let mut out = format!("degree,{name}\n");
    for k in 0..=s.order() {
        out.push_str(&format!("{k},{}\n", s.coeff(k)));
    }
    out
}

/// `series`: degree-indexed majorant coefficients, with identity residuals
/// as trailing metadata rows.
pub fn cmd_series(opts: &GlobalOpts, series_opts: &SeriesOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("series", serde_json::to_value(series_opts)?);
    let csv = match series_opts.which {
        SeriesFamily::Rho => {
            let p = rho_series(series_opts.mu0, series_opts.nu0, opts.order)?;
            let mut csv = one_column_csv("rho", &p.rho);
            let rec = crate::majorants::rho_series_recurrence(
                series_opts.mu0,
                series_opts.nu0,
                opts.order,
            )?;
            csv.push_str(&format!(
                "residual:recurrence_agreement,{}\n",
                crate::majorants::coeff_disagreement(&p.rho, &rec)
            ));
            csv.push_str(&format!("meta:radius_physical_time,{}\n", p.radius));
            csv
        }
        SeriesFamily::Lambda => {
            let lam = lambda_series(series_opts.eta0, opts.order)?;
            let mut csv = one_column_csv("lambda", &lam);
            let rec = crate::majorants::lambda_series_recurrence(series_opts.eta0, opts.order)?;
            csv.push_str(&format!(
                "residual:recurrence_agreement,{}\n",
                crate::majorants::coeff_disagreement(&lam, &rec)
            ));
            csv
        }
        SeriesFamily::XiZeta => {
            let prof = xi_zeta_series(opts.order)?;
            let mut csv = String::from("degree,xi,zeta\n");
            for k in 0..=opts.order {
                csv.push_str(&format!(
                    "{k},{},{}\n",
                    prof.xi.coeff(k),
                    prof.zeta.coeff(k)
                ));
            }
            csv.push_str(&format!(
                "residual:sqrt_identity,{}\n",
                xi_aux_residual(&prof)?
            ));
            csv.push_str(&format!("meta:radius,{}\n", prof.radius));
            let json = serde_json::to_string_pretty(&prof)?;
            write_output(&mut manifest, &opts.out_dir, "profile.json", &json)?;
            csv
        }
        SeriesFamily::Midpoint => {
            let prof = midpoint_xi_zeta_hat(opts.order)?;
            let mut csv = String::from("degree,xi_hat,zeta_hat\n");
            for k in 0..=opts.order {
                csv.push_str(&format!(
                    "{k},{},{}\n",
                    prof.xi.coeff(k),
                    prof.zeta.coeff(k)
                ));
            }
            let rel = crate::majorants::midpoint_zeta_from_xi(&prof.xi)?;
            csv.push_str(&format!(
                "residual:zeta_relation,{}\n",
                crate::majorants::coeff_disagreement(&rel, &prof.zeta)
            ));
            csv.push_str(&format!("meta:radius,{}\n", prof.radius));
            let json = serde_json::to_string_pretty(&prof)?;
            write_output(&mut manifest, &opts.out_dir, "profile.json", &json)?;
            csv
        }
    };
    print!("{csv}");
    write_output(&mut manifest, &opts.out_dir, "series.csv", &csv)?;
    manifest.finish(&opts.out_dir, started)
}

/// Residual of ξ(1+γ) = √(1+4γ+2γ²), γ = ζ + ζ²/2.
fn xi_aux_residual(prof: &RenormMajorant) -> Result<f64> {
    let gamma = prof.zeta.add(&prof.zeta.mul(&prof.zeta)?.scale(0.5))?;
    let lhs = prof.xi.mul(&gamma.add_constant(1.0))?;
    let inner = gamma
        .scale(4.0)
        .add(&gamma.mul(&gamma)?.scale(2.0))?
        .add_constant(1.0);
    let rhs = inner.powf(0.5)?;
    Ok(crate::majorants::coeff_disagreement(&lhs, &rhs))
}

// ---------------------------------------------------------------------------
// integrate
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrateOptions {
    /// preset name, unless a system file is given
    pub preset: Option<String>,
    pub system: Option<PathBuf>,
    pub renorm: RenormKind,
    pub p: u32,
    pub alpha: f64,
    pub stages: usize,
    pub step: f64,
    pub nsteps: usize,
    pub fp_tol: f64,
    pub fp_maxiter: usize,
    /// label for the output files
    pub tag: String,
}

pub fn resolve_state(preset: &Option<String>, system: &Option<PathBuf>) -> Result<SystemState> {
    match (preset, system) {
        (Some(name), None) => presets::by_name(name),
        (None, Some(path)) => {
            let (state, _) = presets::SystemFile::load(path)?.to_state()?;
            Ok(state)
        }
        _ => Err(Error::InvalidParameters(
            "give exactly one of --preset or --system".into(),
        )),
    }
}

pub fn resolve_spec(
    kind: RenormKind,
    p: u32,
    alpha: f64,
    state: &SystemState,
) -> Result<RenormSpec> {
    match kind {
        RenormKind::Original => Ok(RenormSpec::original()),
        RenormKind::Cheap => Ok(RenormSpec::cheap()),
        RenormKind::PNorm => RenormSpec::pnorm(p, alpha),
        RenormKind::Energy => RenormSpec::energy(p, alpha, state),
        RenormKind::Physical => Ok(RenormSpec::physical()),
    }
}

fn trajectory_csv(traj: &Trajectory) -> String {
    let mut csv =
        String::from("step,tau,t_phys,body,qx,qy,qz,vx,vy,vz,fp_iters,local_err,cert_bound\n");
    for rec in &traj.records {
        for body in 0..rec.state.n() {
            let q = rec.state.q[body];
            let v = rec.state.v[body];
            let le = rec
                .local_error
                .as_ref()
                .map(|e| e[body].to_string())
                .unwrap_or_default();
            let cb = rec
                .certified_bound
                .as_ref()
                .map(|e| e[body].to_string())
                .unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                rec.index,
                rec.tau,
                rec.t_phys,
                body,
                q[0],
                q[1],
                q[2],
                v[0],
                v[1],
                v[2],
                rec.fp_iters,
                le,
                cb
            ));
        }
    }
    csv
}

/// `integrate`: fixed-step trajectory to CSV.
pub fn cmd_integrate(opts: &GlobalOpts, io: &IntegrateOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("integrate", serde_json::to_value(io)?);
    let state = resolve_state(&io.preset, &io.system)?;
    let spec = resolve_spec(io.renorm, io.p, io.alpha, &state)?;
    let mut cfg = IntegrationConfig::new(gauss_tableau(io.stages)?, io.step, io.nsteps, spec);
    cfg.fp_tol = io.fp_tol;
    cfg.fp_maxiter = io.fp_maxiter;
    let traj = integrate(&state, &cfg);
    let csv = trajectory_csv(&traj);
    let name = format!("trajectory_{}.csv", io.tag);
    write_output(&mut manifest, &opts.out_dir, &name, &csv)?;
    let last = traj.records.last().unwrap();
    println!(
        "integrated {} steps (tau = {}, t_phys = {}), wrote {name}",
        traj.records.len() - 1,
        last.tau,
        last.t_phys
    );
    if let Some(f) = &traj.failure {
        let m = manifest.finish(&opts.out_dir, started)?;
        let _ = m;
        return Err(Error::InvalidParameters(format!(
            "integration aborted: {f} (partial trajectory written to {name})"
        )));
    }
    manifest.finish(&opts.out_dir, started)
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareOptions {
    pub preset: Option<String>,
    pub system: Option<PathBuf>,
    /// renormalization for the fictitious-time run
    pub renorm: RenormKind,
    pub p: u32,
    pub alpha: f64,
    pub stages: usize,
    /// equal step count for both runs
    pub nsteps: usize,
    /// physical-time step
    pub dt: f64,
    /// fictitious-time step
    pub dtau: f64,
    pub fp_maxiter: usize,
    /// also attach certified bounds to the renormalized local table
    pub certify: bool,
}

fn error_csv(table: &ErrorTable) -> String {
    let mut csv = String::from("step,tau,t_phys,body,position_error,velocity_error\n");
    for r in &table.rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.step, r.tau, r.t_phys, r.body, r.position_error, r.velocity_error
        ));
    }
    csv
}

/// Per-run summary statistics for the comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompareSummary {
    pub run: String,
    pub max_local_position_error: f64,
    pub median_state_error: f64,
    pub max_state_error: f64,
    pub spike_ratio: f64,
    /// steps whose state error exceeds 10× the median
    pub spike_count: usize,
}

pub fn summarize(run: &str, table: &ErrorTable) -> CompareSummary {
    let per_step = table.per_step_state_error();
    let mut sorted = per_step.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if sorted.is_empty() {
        0.0
    } else {
        sorted[sorted.len() / 2]
    };
    let max = per_step.iter().copied().fold(0.0f64, f64::max);
    CompareSummary {
        run: run.to_string(),
        max_local_position_error: table.max_position_error(),
        median_state_error: median,
        max_state_error: max,
        spike_ratio: if median > 0.0 {
            max / median
        } else {
            f64::INFINITY
        },
        spike_count: per_step.iter().filter(|e| **e > 10.0 * median).count(),
    }
}

/// `compare`: physical vs renormalized integration with equal step counts;
/// local and global error tables plus a summary.
pub fn cmd_compare(opts: &GlobalOpts, co: &CompareOptions) -> Result<RunManifest> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("compare", serde_json::to_value(co)?);
    let state = resolve_state(&co.preset, &co.system)?;
    let tableau = gauss_tableau(co.stages)?;

    let mut phys_cfg =
        IntegrationConfig::new(tableau.clone(), co.dt, co.nsteps, RenormSpec::physical());
    phys_cfg.fp_maxiter = co.fp_maxiter;
    let renorm_spec = resolve_spec(co.renorm, co.p, co.alpha, &state)?;
    let mut renorm_cfg = IntegrationConfig::new(tableau.clone(), co.dtau, co.nsteps, renorm_spec);
    renorm_cfg.fp_maxiter = co.fp_maxiter;

    let reference = ReferenceScheme::default();
    let phys_local = error_probe(&state, &phys_cfg, ProbeMode::Local, reference)?;
    let renorm_local = error_probe(&state, &renorm_cfg, ProbeMode::Local, reference)?;
    let phys_global = error_probe(&state, &phys_cfg, ProbeMode::Global, reference)?;
    let renorm_global = error_probe(&state, &renorm_cfg, ProbeMode::Global, reference)?;

    write_output(
        &mut manifest,
        &opts.out_dir,
        "physical_local.csv",
        &error_csv(&phys_local),
    )?;
    write_output(
        &mut manifest,
        &opts.out_dir,
        "renorm_local.csv",
        &error_csv(&renorm_local),
    )?;
    write_output(
        &mut manifest,
        &opts.out_dir,
        "physical_global.csv",
        &error_csv(&phys_global),
    )?;
    write_output(
        &mut manifest,
        &opts.out_dir,
        "renorm_global.csv",
        &error_csv(&renorm_global),
    )?;

    let phys_traj = integrate(&state, &phys_cfg);
    let renorm_traj = integrate(&state, &renorm_cfg);
    write_output(
        &mut manifest,
        &opts.out_dir,
        "physical_traj.csv",
        &trajectory_csv(&phys_traj),
    )?;
    write_output(
        &mut manifest,
        &opts.out_dir,
        "renorm_traj.csv",
        &trajectory_csv(&renorm_traj),
    )?;

    if co.certify {
        let csv = certify_csv(&state, &renorm_cfg, &renorm_local, opts.order)?;
        write_output(
            &mut manifest,
            &opts.out_dir,
            "renorm_certificates.csv",
            &csv,
        )?;
    }

    let mut summary = String::from(
        "run,max_local_position_error,median_state_error,max_state_error,spike_ratio,spike_count\n",
    );
    for s in [
        summarize("physical", &phys_local),
        summarize("renormalized", &renorm_local),
    ] {
        summary.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.run,
            s.max_local_position_error,
            s.median_state_error,
            s.max_state_error,
            s.spike_ratio,
            s.spike_count
        ));
    }
    print!("{summary}");
    write_output(&mut manifest, &opts.out_dir, "summary.csv", &summary)?;
    manifest.finish(&opts.out_dir, started)
}

/// Certified bound vs measured local error along a renormalized trajectory.
fn certify_csv(
    state: &SystemState,
    cfg: &IntegrationConfig,
    local: &ErrorTable,
    order: usize,
) -> Result<String> {
    let flow = xi_zeta_series(order)?;
    let disc = midpoint_xi_zeta_hat(order)?;
    let mut csv =
        String::from("step,body,position_error,position_bound,velocity_error,velocity_bound\n");
    let mut current = state.clone();
    let mut rows_by_step: std::collections::BTreeMap<usize, Vec<&crate::integrator::ErrorRow>> =
        Default::default();
    for r in &local.rows {
        rows_by_step.entry(r.step).or_default().push(r);
    }
    for k in 1..=cfg.nsteps {
        let scalings = BoundScalings::from_state(&current, &cfg.renorm)?;
        if let Some(rows) = rows_by_step.get(&k) {
            for r in rows {
                let b =
                    rk_local_error_bound(&scalings, &flow, &disc, &cfg.tableau, r.body, cfg.step)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    k,
                    r.body,
                    r.position_error,
                    b.position.safeguarded,
                    r.velocity_error,
                    b.velocity.safeguarded
                ));
            }
        }
        let (next, _) = crate::integrator::irk_step(&current, cfg)?;
        current = next;
    }
    Ok(csv)
}

// ---------------------------------------------------------------------------
// validate-bounds
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidateOptions {
    pub trials: usize,
    /// expansion order for the dominance checks
    pub taylor_order: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            trials: 100,
            taylor_order: 10,
        }
    }
}

fn sweep_csv(reports: &[SweepReport]) -> String {
    let mut csv = String::from("check,samples,max_ratio,violations\n");
    for r in reports {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.label, r.samples, r.max_ratio, r.violations
        ));
    }
    csv
}

/// `validate-bounds`: randomized dominance and inequality sweeps; the
/// returned flag is false when any violation was found (nonzero exit).
pub fn cmd_validate_bounds(opts: &GlobalOpts, vo: &ValidateOptions) -> Result<(RunManifest, bool)> {
    let started = Instant::now();
    let mut manifest = RunManifest::new("validate-bounds", serde_json::to_value(vo)?);
    let flow = xi_zeta_series(vo.taylor_order)?;
    let disc = midpoint_xi_zeta_hat(vo.taylor_order)?;
    let mut reports = dominance_sweep(opts.seed, vo.trials, vo.taylor_order, 1e-12, &flow, &disc)?;
    reports.extend(inequality_sweep(opts.seed.wrapping_add(1), 1000, 1e-12)?);
    let csv = sweep_csv(&reports);
    print!("{csv}");
    write_output(&mut manifest, &opts.out_dir, "validate_bounds.csv", &csv)?;
    let clean = reports.iter().all(|r| r.violations == 0);
    Ok((manifest.finish(&opts.out_dir, started)?, clean))
}
