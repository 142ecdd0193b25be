//! Local and global error measurement against reference solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::{accelerations, norm3, sub3, RenormKind, SystemState};

use super::kepler::kepler_propagate;
use super::step::{integrate, irk_step, IntegrationConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeMode {
    /// one step against a reference over the same interval, per step
    Local,
    /// whole trajectory against a reference at matching physical times
    Global,
}

/// Where reference solutions come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceScheme {
    /// same tableau with `factor` substeps per probe step and fp_tol 1e−15
    Substep { factor: usize },
    /// closed-form two-body propagation (physical-time runs only)
    Kepler,
}

impl Default for ReferenceScheme {
    fn default() -> Self {
        ReferenceScheme::Substep { factor: 16 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorRow {
    pub step: usize,
    pub tau: f64,
    pub t_phys: f64,
    pub body: usize,
    pub position_error: f64,
    pub velocity_error: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorTable {
    pub mode: ProbeMode,
    pub rows: Vec<ErrorRow>,
    pub nbodies: usize,
}

impl ErrorTable {
    pub fn max_position_error(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.position_error)
            .fold(0.0, f64::max)
    }

    /// Per-step error: max over bodies of √(‖Δq‖² + ‖Δv‖²).
    pub fn per_step_state_error(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        let mut current = usize::MAX;
        for r in &self.rows {
            if r.step != current {
                out.push(0.0);
                current = r.step;
            }
            let e = r.position_error.hypot(r.velocity_error);
            let last = out.last_mut().unwrap();
            *last = last.max(e);
        }
        out
    }

    /// max/median of the per-step state errors; the spike indicator.
    pub fn spike_ratio(&self) -> f64 {
        let mut errs = self.per_step_state_error();
        if errs.is_empty() {
            return 0.0;
        }
        let mut sorted = errs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = sorted[sorted.len() / 2];
        let max = errs.drain(..).fold(0.0f64, f64::max);
        if median == 0.0 {
            f64::INFINITY
        } else {
            max / median
        }
    }
}

fn reference_step(
    state: &SystemState,
    cfg: &IntegrationConfig,
    scheme: ReferenceScheme,
) -> Result<SystemState> {
    match scheme {
        ReferenceScheme::Substep { factor } => {
            let mut sub = cfg.clone();
            sub.step = cfg.step / factor as f64;
            sub.nsteps = factor;
            sub.fp_tol = 1e-15;
            let mut current = state.clone();
            for _ in 0..factor {
                let (next, _) = irk_step(&current, &sub)?;
                current = next;
            }
            Ok(current)
        }
        ReferenceScheme::Kepler => {
            if cfg.renorm.kind != RenormKind::Physical {
                return Err(Error::InvalidParameters(
                    "the analytic reference integrates physical time; use substepping for renormalized runs"
                        .into(),
                ));
            }
            kepler_propagate(state, cfg.step)
        }
    }
}

/// Per-body, per-step error table.
///
/// Local mode re-solves every step from the trajectory's own starting
/// point, so rows measure pure one-step (truncation) error. Global mode
/// compares the trajectory against an independently integrated reference at
/// matching physical times, interpolating the reference with cubic Hermite
/// polynomials in t.
pub fn error_probe(
    state: &SystemState,
    cfg: &IntegrationConfig,
    mode: ProbeMode,
    scheme: ReferenceScheme,
) -> Result<ErrorTable> {
    match mode {
        ProbeMode::Local => local_probe(state, cfg, scheme),
        ProbeMode::Global => global_probe(state, cfg, scheme),
    }
}

fn local_probe(
    state: &SystemState,
    cfg: &IntegrationConfig,
    scheme: ReferenceScheme,
) -> Result<ErrorTable> {
    let n = state.n();
    let mut rows = Vec::with_capacity(cfg.nsteps * n);
    let mut current = state.clone();
    for k in 1..=cfg.nsteps {
        let (next, _) = irk_step(&current, cfg)?;
        let reference = reference_step(&current, cfg, scheme)?;
        for body in 0..n {
            rows.push(ErrorRow {
                step: k,
                tau: k as f64 * cfg.step,
                t_phys: next.t_phys,
                body,
                position_error: norm3(&sub3(&next.q[body], &reference.q[body])),
                velocity_error: norm3(&sub3(&next.v[body], &reference.v[body])),
            });
        }
        current = next;
    }
    Ok(ErrorTable {
        mode: ProbeMode::Local,
        rows,
        nbodies: n,
    })
}

/// Cubic Hermite value at t for nodes (t0, y0, d0), (t1, y1, d1).
fn hermite(t: f64, t0: f64, t1: f64, y0: f64, y1: f64, d0: f64, d1: f64) -> f64 {
    let h = t1 - t0;
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * d0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * d1
}

struct ReferenceCurve {
    t: Vec<f64>,
    q: Vec<Vec<[f64; 3]>>,
    v: Vec<Vec<[f64; 3]>>,
    /// dv/dt = g(q) at the nodes
    a: Vec<Vec<[f64; 3]>>,
}

impl ReferenceCurve {
    fn from_trajectory(traj: &Trajectory) -> Result<Self> {
        let mut t = Vec::new();
        let mut q = Vec::new();
        let mut v = Vec::new();
        let mut a = Vec::new();
        for rec in &traj.records {
            t.push(rec.t_phys);
            q.push(rec.state.q.clone());
            v.push(rec.state.v.clone());
            a.push(accelerations(&rec.state)?);
        }
        Ok(ReferenceCurve { t, q, v, a })
    }

    /// Interpolated positions and velocities at physical time t; clamps to
    /// the last interval beyond the final node.
    fn sample(&self, t: f64, nbodies: usize) -> (Vec<[f64; 3]>, Vec<[f64; 3]>) {
        let m = self.t.len();
        let mut j = match self.t.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => i.saturating_sub(1),
            Err(i) => i.saturating_sub(1),
        };
        if j + 1 >= m {
            j = m - 2;
        }
        let (t0, t1) = (self.t[j], self.t[j + 1]);
        let mut qs = vec![[0.0; 3]; nbodies];
        let mut vs = vec![[0.0; 3]; nbodies];
        for body in 0..nbodies {
            for c in 0..3 {
                qs[body][c] = hermite(
                    t,
                    t0,
                    t1,
                    self.q[j][body][c],
                    self.q[j + 1][body][c],
                    self.v[j][body][c],
                    self.v[j + 1][body][c],
                );
                vs[body][c] = hermite(
                    t,
                    t0,
                    t1,
                    self.v[j][body][c],
                    self.v[j + 1][body][c],
                    self.a[j][body][c],
                    self.a[j + 1][body][c],
                );
            }
        }
        (qs, vs)
    }
}

fn global_probe(
    state: &SystemState,
    cfg: &IntegrationConfig,
    scheme: ReferenceScheme,
) -> Result<ErrorTable> {
    let n = state.n();
    let probe = integrate(state, cfg);
    if let Some(f) = &probe.failure {
        return Err(Error::InvalidParameters(format!(
            "probe trajectory failed: {f}"
        )));
    }
    let factor = match scheme {
        ReferenceScheme::Substep { factor } => factor,
        ReferenceScheme::Kepler => {
            // exact flow: evaluate directly at the probe's physical times
            if cfg.renorm.kind != RenormKind::Physical {
                return Err(Error::InvalidParameters(
                    "the analytic reference integrates physical time; use substepping for renormalized runs"
                        .into(),
                ));
            }
            let mut rows = Vec::new();
            for rec in probe.records.iter().skip(1) {
                let reference = kepler_propagate(state, rec.t_phys - state.t_phys)?;
                for body in 0..n {
                    rows.push(ErrorRow {
                        step: rec.index,
                        tau: rec.tau,
                        t_phys: rec.t_phys,
                        body,
                        position_error: norm3(&sub3(&rec.state.q[body], &reference.q[body])),
                        velocity_error: norm3(&sub3(&rec.state.v[body], &reference.v[body])),
                    });
                }
            }
            return Ok(ErrorTable {
                mode: ProbeMode::Global,
                rows,
                nbodies: n,
            });
        }
    };
    let mut ref_cfg = cfg.clone();
    ref_cfg.step = cfg.step / factor as f64;
    ref_cfg.nsteps = cfg.nsteps * factor;
    ref_cfg.fp_tol = 1e-15;
    let reference = integrate(state, &ref_cfg);
    if let Some(f) = &reference.failure {
        return Err(Error::InvalidParameters(format!(
            "reference trajectory failed: {f}"
        )));
    }
    let curve = ReferenceCurve::from_trajectory(&reference)?;
    let mut rows = Vec::new();
    for rec in probe.records.iter().skip(1) {
        let (qs, vs) = curve.sample(rec.t_phys, n);
        for body in 0..n {
            rows.push(ErrorRow {
                step: rec.index,
                tau: rec.tau,
                t_phys: rec.t_phys,
                body,
                position_error: norm3(&sub3(&rec.state.q[body], &qs[body])),
                velocity_error: norm3(&sub3(&rec.state.v[body], &vs[body])),
            });
        }
    }
    Ok(ErrorTable {
        mode: ProbeMode::Global,
        rows,
        nbodies: n,
    })
}
