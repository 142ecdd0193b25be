//! Fixed-step implicit Runge-Kutta integration with fixed-point iteration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::{rhs, RenormSpec, StateDerivative, SystemState, Vec3};

use super::tableau::RKTableau;

/// How the stage values are seeded before fixed-point sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Predictor {
    /// every stage starts at the current state
    CurrentState,
    /// one explicit Euler step to c_i·h per stage
    Euler,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrationConfig {
    pub tableau: RKTableau,
    /// step in the integration variable (physical or fictitious time)
    pub step: f64,
    pub nsteps: usize,
    /// fixed-point convergence threshold, relative per component
    pub fp_tol: f64,
    pub fp_maxiter: usize,
    pub renorm: RenormSpec,
    pub predictor: Predictor,
}

impl IntegrationConfig {
    pub fn new(tableau: RKTableau, step: f64, nsteps: usize, renorm: RenormSpec) -> Self {
        IntegrationConfig {
            tableau,
            step,
            nsteps,
            fp_tol: 1e-14,
            fp_maxiter: 100,
            renorm,
            predictor: Predictor::CurrentState,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.step == 0.0 || !self.step.is_finite() {
            return Err(Error::InvalidParameters(format!(
                "step must be nonzero and finite, got {}",
                self.step
            )));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "fp_tol must be positive, got {}",
                self.fp_tol
            )));
        }
        Ok(())
    }
}

/// One row of a trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepRecord {
    pub index: usize,
    /// integration variable at this record
    pub tau: f64,
    pub t_phys: f64,
    pub state: SystemState,
    pub fp_iters: usize,
    /// per-body local-error estimates, when a probe filled them in
    pub local_error: Option<Vec<f64>>,
    /// per-body certified bounds, when filled in
    pub certified_bound: Option<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub records: Vec<StepRecord>,
    /// message of the first failing step, if integration aborted
    pub failure: Option<String>,
}

impl Trajectory {
    pub fn is_complete(&self) -> bool {
        self.failure.is_none()
    }

    pub fn last_state(&self) -> &SystemState {
        &self
            .records
            .last()
            .expect("at least the initial record")
            .state
    }
}

struct Stage {
    q: Vec<Vec3>,
    v: Vec<Vec3>,
}

fn stage_state(template: &SystemState, stage: &Stage) -> SystemState {
    let mut s = template.clone();
    s.q = stage.q.clone();
    s.v = stage.v.clone();
    s
}

/// One implicit RK step. Returns the advanced state (with t_phys
/// accumulated through dt/dτ = s) and the number of fixed-point sweeps.
pub fn irk_step(state: &SystemState, cfg: &IntegrationConfig) -> Result<(SystemState, usize)> {
    cfg.validate()?;
    let ns = cfg.tableau.stages();
    let n = state.n();
    let h = cfg.step;

    let mut stages: Vec<Stage> = match cfg.predictor {
        Predictor::CurrentState => (0..ns)
            .map(|_| Stage {
                q: state.q.clone(),
                v: state.v.clone(),
            })
            .collect(),
        Predictor::Euler => {
            let d0 = rhs(state, &cfg.renorm)?;
            (0..ns)
                .map(|a| {
                    let hc = h * cfg.tableau.c[a];
                    let mut q = state.q.clone();
                    let mut v = state.v.clone();
                    for i in 0..n {
                        crate::nbody::axpy3(&mut q[i], hc, &d0.dq[i]);
                        crate::nbody::axpy3(&mut v[i], hc, &d0.dv[i]);
                    }
                    Stage { q, v }
                })
                .collect()
        }
    };

    let mut derivs: Vec<StateDerivative> = Vec::with_capacity(ns);
    let mut best_residual = f64::INFINITY;
    let mut stalled = 0usize;
    let mut iters = 0usize;
    let accept_floor = 1e3 * f64::EPSILON;

    loop {
        iters += 1;
        derivs.clear();
        for stage in &stages {
            derivs.push(rhs(&stage_state(state, stage), &cfg.renorm)?);
        }
        let mut new_residual = 0.0f64;
        let mut next: Vec<Stage> = Vec::with_capacity(ns);
        for a in 0..ns {
            let mut q = state.q.clone();
            let mut v = state.v.clone();
            for (b, d) in derivs.iter().enumerate() {
                let w = h * cfg.tableau.a[a][b];
                for i in 0..n {
                    crate::nbody::axpy3(&mut q[i], w, &d.dq[i]);
                    crate::nbody::axpy3(&mut v[i], w, &d.dv[i]);
                }
            }
            for i in 0..n {
                for c in 0..3 {
                    let dq = (q[i][c] - stages[a].q[i][c]).abs() / (1.0 + stages[a].q[i][c].abs());
                    let dv = (v[i][c] - stages[a].v[i][c]).abs() / (1.0 + stages[a].v[i][c].abs());
                    new_residual = new_residual.max(dq).max(dv);
                }
            }
            next.push(Stage { q, v });
        }
        stages = next;
        let residual = new_residual;
        if residual < cfg.fp_tol {
            break;
        }
        if residual >= best_residual {
            stalled += 1;
            if stalled >= 3 {
                if residual < accept_floor {
                    break;
                }
                return Err(Error::NonConvergence {
                    iterations: iters,
                    residual,
                });
            }
        } else {
            best_residual = residual;
            stalled = 0;
        }
        if iters >= cfg.fp_maxiter {
            return Err(Error::NonConvergence {
                iterations: iters,
                residual,
            });
        }
    }

    // update from the converged stages
    derivs.clear();
    for stage in &stages {
        derivs.push(rhs(&stage_state(state, stage), &cfg.renorm)?);
    }
    let mut out = state.clone();
    let mut dt = 0.0;
    for (b_w, d) in cfg.tableau.b.iter().zip(&derivs) {
        let w = h * b_w;
        for i in 0..n {
            crate::nbody::axpy3(&mut out.q[i], w, &d.dq[i]);
            crate::nbody::axpy3(&mut out.v[i], w, &d.dv[i]);
        }
        dt += w * d.dt_phys;
    }
    out.t_phys += dt;
    Ok((out, iters))
}

/// Fixed-step trajectory; on a failing step the partial trajectory is
/// returned with the failure message attached.
pub fn integrate(state: &SystemState, cfg: &IntegrationConfig) -> Trajectory {
    let mut records = Vec::with_capacity(cfg.nsteps + 1);
    records.push(StepRecord {
        index: 0,
        tau: 0.0,
        t_phys: state.t_phys,
        state: state.clone(),
        fp_iters: 0,
        local_error: None,
        certified_bound: None,
    });
    let mut current = state.clone();
    for k in 1..=cfg.nsteps {
        match irk_step(&current, cfg) {
            Ok((next, fp_iters)) => {
                records.push(StepRecord {
                    index: k,
                    tau: k as f64 * cfg.step,
                    t_phys: next.t_phys,
                    state: next.clone(),
                    fp_iters,
                    local_error: None,
                    certified_bound: None,
                });
                current = next;
            }
            Err(e) => {
                return Trajectory {
                    records,
                    failure: Some(format!("step {k}: {e}")),
                };
            }
        }
    }
    Trajectory {
        records,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::tableau::gauss_tableau;
    use crate::nbody::presets::{two_body_circular, two_body_e99};
    use crate::nbody::{norm3, sub3};

    fn midpoint_cfg(step: f64, nsteps: usize, renorm: RenormSpec) -> IntegrationConfig {
        IntegrationConfig::new(gauss_tableau(1).unwrap(), step, nsteps, renorm)
    }

    /// midpoint on the scalar linear test y' = λy has the closed one-step
    /// map y·(1+λh/2)/(1−λh/2); emulate a linear field with a two-body
    /// state is impossible, so check against the gravitational analogue:
    /// reversibility and the circular orbit instead. The scalar map check
    /// lives here through a tiny hand-rolled iteration.
    #[test]
    fn midpoint_scalar_linear_map() {
        let lambda = -0.7;
        let h = 0.05;
        let y0 = 1.3;
        // fixed-point iteration exactly as irk_step does it
        let mut stage: f64 = y0;
        for _ in 0..200 {
            let next = y0 + h * 0.5 * lambda * stage;
            if (next - stage).abs() < 1e-16 {
                stage = next;
                break;
            }
            stage = next;
        }
        let y1 = y0 + h * lambda * stage;
        let exact = y0 * (1.0 + lambda * h / 2.0) / (1.0 - lambda * h / 2.0);
        assert!((y1 - exact).abs() < 1e-14);
    }

    #[test]
    fn midpoint_step_reversibility() {
        let state = two_body_e99();
        let cfg = midpoint_cfg(0.01, 1, RenormSpec::original());
        let (fwd, _) = irk_step(&state, &cfg).unwrap();
        let mut back_cfg = cfg.clone();
        back_cfg.step = -cfg.step;
        let (back, _) = irk_step(&fwd, &back_cfg).unwrap();
        for i in 0..2 {
            assert!(norm3(&sub3(&back.q[i], &state.q[i])) < 10.0 * cfg.fp_tol);
            assert!(norm3(&sub3(&back.v[i], &state.v[i])) < 10.0 * cfg.fp_tol);
        }
        assert!(back.t_phys.abs() < 10.0 * cfg.fp_tol);
    }

    #[test]
    fn circular_orbit_one_period() {
        let state = two_body_circular();
        let period = 2.0 * std::f64::consts::PI / 2.0f64.sqrt();
        let cfg = midpoint_cfg(period / 1000.0, 1000, RenormSpec::physical());
        let traj = integrate(&state, &cfg);
        assert!(traj.is_complete());
        let last = traj.last_state();
        for i in 0..2 {
            let err = norm3(&sub3(&last.q[i], &state.q[i]));
            assert!(err < 1e-4, "return error {err}");
        }
        assert!((last.t_phys - period).abs() < 1e-12);
    }

    #[test]
    fn zero_steps_returns_initial_record() {
        let state = two_body_circular();
        let cfg = midpoint_cfg(0.1, 0, RenormSpec::physical());
        let traj = integrate(&state, &cfg);
        assert!(traj.is_complete());
        assert_eq!(traj.records.len(), 1);
        assert_eq!(traj.records[0].index, 0);
    }

    #[test]
    fn renormalized_steps_shrink_at_pericenter() {
        let state = two_body_e99();
        let spec = RenormSpec::original();
        let cfg = midpoint_cfg(0.02, 700, spec);
        let traj = integrate(&state, &cfg);
        assert!(traj.is_complete(), "{:?}", traj.failure);
        // per-step physical-time increments against separations
        let mut min_dt = (f64::INFINITY, 0.0);
        let mut max_dt = (0.0f64, 0.0);
        for w in traj.records.windows(2) {
            let dt = w[1].t_phys - w[0].t_phys;
            assert!(dt > 0.0, "physical time must increase");
            let sep = norm3(&sub3(&w[0].state.q[0], &w[0].state.q[1]));
            if dt < min_dt.0 {
                min_dt = (dt, sep);
            }
            if dt > max_dt.0 {
                max_dt = (dt, sep);
            }
        }
        // smallest time step where the bodies are closest
        assert!(min_dt.1 < 0.1, "min dt at separation {}", min_dt.1);
        assert!(max_dt.1 > 1.0, "max dt at separation {}", max_dt.1);
    }

    #[test]
    fn euler_predictor_agrees_with_default() {
        let state = two_body_e99();
        let mut cfg = midpoint_cfg(0.01, 1, RenormSpec::original());
        let (a, _) = irk_step(&state, &cfg).unwrap();
        cfg.predictor = Predictor::Euler;
        let (b, iters_euler) = irk_step(&state, &cfg).unwrap();
        for i in 0..2 {
            assert!(norm3(&sub3(&a.q[i], &b.q[i])) < 1e-12);
        }
        assert!(iters_euler >= 1);
    }

    #[test]
    fn nonconvergence_reports_partial_trajectory() {
        // absurdly large step: fixed point diverges
        let state = two_body_circular();
        let mut cfg = midpoint_cfg(50.0, 5, RenormSpec::physical());
        cfg.fp_maxiter = 10;
        let traj = integrate(&state, &cfg);
        assert!(!traj.is_complete());
        assert_eq!(traj.records.len(), 1);
        assert!(traj.failure.as_ref().unwrap().contains("step 1"));
    }
}
