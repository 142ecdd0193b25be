//! Randomized property sweeps: majorant dominance of actual Taylor
//! expansions, and the pointwise inequalities the renormalization functions
//! are built on.
//!
//! These back the `validate-bounds` command and the acceptance suite. The
//! left-hand sides come from the [`crate::taylor`] expansions (never from
//! the majorant constructions themselves).

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::majorants::{rho_series, MajorantKind, RenormMajorant};
use crate::nbody::{
    norm3, pairwise_quantities, renorm_s, sub3, RenormKind, RenormSpec, SystemState, Vec3,
};
use crate::series::norm;
use crate::taylor::{flow_taylor, midpoint_stage_taylor};

/// Outcome of one family of checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub label: String,
    pub samples: usize,
    /// worst lhs/rhs over all samples (≤ 1 means the bound held everywhere)
    pub max_ratio: f64,
    pub violations: usize,
}

impl SweepReport {
    fn new(label: impl Into<String>) -> Self {
        SweepReport {
            label: label.into(),
            samples: 0,
            max_ratio: 0.0,
            violations: 0,
        }
    }

    fn record(&mut self, lhs: f64, rhs: f64, slack: f64) {
        self.samples += 1;
        let tol = slack * rhs.abs().max(1.0);
        if lhs > rhs + tol {
            self.violations += 1;
        }
        let ratio = if rhs > 0.0 {
            lhs / rhs
        } else if lhs <= tol {
            0.0
        } else {
            f64::INFINITY
        };
        self.max_ratio = self.max_ratio.max(ratio);
    }
}

/// Uniformly random state with all pairwise separations above 0.25:
/// positions in [−1.5, 1.5]³, velocities in [−1, 1]³, gm in [0.2, 2].
pub fn random_regular_state(rng: &mut ChaCha8Rng, n: usize) -> SystemState {
    let q: Vec<Vec3> = loop {
        let candidate: Vec<Vec3> = (0..n)
            .map(|_| {
                [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ]
            })
            .collect();
        let ok =
            (0..n).all(|i| (i + 1..n).all(|j| norm3(&sub3(&candidate[i], &candidate[j])) > 0.25));
        if ok {
            break candidate;
        }
    };
    let v: Vec<Vec3> = (0..n)
        .map(|_| {
            [
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-1.0..1.0),
            ]
        })
        .collect();
    let gm: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
    SystemState::new(gm, q, v).expect("generator produces valid states")
}

/// The renormalization kinds exercised by the sweeps.
pub fn sweep_kinds(state: &SystemState) -> Result<Vec<(String, RenormSpec)>> {
    Ok(vec![
        ("original".into(), RenormSpec::original()),
        ("cheap".into(), RenormSpec::cheap()),
        ("pnorm-p2-a3".into(), RenormSpec::pnorm(2, 3.0)?),
        ("pnorm-p1-a3".into(), RenormSpec::pnorm(1, 3.0)?),
        ("energy-p2-a3".into(), RenormSpec::energy(2, 3.0, state)?),
    ])
}

/// Majorant dominance of actual Taylor coefficients, for `trials` random
/// 2- and 3-body states, to the given expansion order.
///
/// Checks, per body pair and degree:
/// * physical flow against ‖Δq⁰‖·ρ,
/// * renormalized flow Q, V against ξ, ζ with the s₀/M_ij scalings,
/// * midpoint stage series against ξ̂, ζ̂ with the same scalings,
///
/// the last two for every renormalization kind.
pub fn dominance_sweep(
    seed: u64,
    trials: usize,
    order: usize,
    slack: f64,
    flow_profile: &RenormMajorant,
    midpoint_profile: &RenormMajorant,
) -> Result<Vec<SweepReport>> {
    use rand::SeedableRng;
    assert_eq!(flow_profile.kind, MajorantKind::ExactFlow);
    assert_eq!(midpoint_profile.kind, MajorantKind::Midpoint);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut physical = SweepReport::new("physical-flow-vs-rho");
    let mut reports: Vec<SweepReport> = Vec::new();

    for trial in 0..trials {
        let n = 2 + trial % 2;
        let state = random_regular_state(&mut rng, n);
        let pw = pairwise_quantities(&state)?;

        // physical flow vs rho
        let rho = rho_series(pw.mu, pw.nu, order)?;
        let phys = flow_taylor(&state, &RenormSpec::physical(), order)?;
        for i in 0..n {
            for j in i + 1..n {
                let gap = norm3(&sub3(&state.q[i], &state.q[j]));
                let dq = phys.pair_q(i, j);
                for k in 0..=order {
                    physical.record(norm(dq.coeff(k)), gap * rho.rho.coeff(k), slack);
                }
            }
        }

        for (label, spec) in sweep_kinds(&state)? {
            let s0 = renorm_s(&state, &spec)?;
            let flow = flow_taylor(&state, &spec, order)?;
            let stage = midpoint_stage_taylor(&state, &spec, order)?;
            for (tag, expansion, xi, zeta) in [
                ("flow", &flow, &flow_profile.xi, &flow_profile.zeta),
                (
                    "midpoint-stage",
                    &stage,
                    &midpoint_profile.xi,
                    &midpoint_profile.zeta,
                ),
            ] {
                let q_label = format!("{label}-{tag}-Q");
                let v_label = format!("{label}-{tag}-V");
                let (qi, vi) = ensure_reports(&mut reports, &q_label, &v_label);
                for i in 0..n {
                    for j in i + 1..n {
                        let gap = norm3(&sub3(&state.q[i], &state.q[j]));
                        let dv0 = norm3(&sub3(&state.v[i], &state.v[j]));
                        let m_ij = pw.m_ij[i][j];
                        let dq = expansion.pair_q(i, j);
                        let dv = expansion.pair_v(i, j);
                        for k in 0..=order {
                            reports[qi].record(norm(dq.coeff(k)), gap * xi.coeff(k), slack);
                            let v_bound = if k == 0 {
                                dv0
                            } else {
                                s0 * m_ij * zeta.coeff(k)
                            };
                            reports[vi].record(norm(dv.coeff(k)), v_bound, slack);
                        }
                    }
                }
            }
        }
    }
    let mut out = vec![physical];
    out.extend(reports);
    Ok(out)
}

fn ensure_reports(reports: &mut Vec<SweepReport>, a: &str, b: &str) -> (usize, usize) {
    let find_or_push = |reports: &mut Vec<SweepReport>, label: &str| -> usize {
        if let Some(i) = reports.iter().position(|r| r.label == label) {
            i
        } else {
            reports.push(SweepReport::new(label));
            reports.len() - 1
        }
    };
    let ia = find_or_push(reports, a);
    let ib = find_or_push(reports, b);
    (ia, ib)
}

/// The pointwise inequalities behind the majorant proofs:
/// s ≤ ‖Δq‖/‖Δv‖ for every pair, and s² ≤ α·‖Δq‖/M_ij with α = 1 for the
/// original/cheap kinds and the configured α for pnorm/energy. Also the
/// energy-form velocity bound ‖Δv‖ ≤ √2 (m_i^{−1/2}+m_j^{−1/2}) √(E₀+U).
pub fn inequality_sweep(seed: u64, trials: usize, slack: f64) -> Result<Vec<SweepReport>> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports: Vec<SweepReport> = Vec::new();
    for trial in 0..trials {
        let n = 2 + trial % 3;
        let state = random_regular_state(&mut rng, n);
        let pw = pairwise_quantities(&state)?;
        for (label, spec) in sweep_kinds(&state)? {
            let s = renorm_s(&state, &spec)?;
            let alpha_eff = match spec.kind {
                RenormKind::PNorm | RenormKind::Energy => spec.alpha,
                _ => 1.0,
            };
            let l1 = format!("{label}-s-velocity-inequality");
            let l2 = format!("{label}-s2-curvature-inequality");
            let (i1, i2) = ensure_reports(&mut reports, &l1, &l2);
            for i in 0..n {
                for j in i + 1..n {
                    let dq = norm3(&sub3(&state.q[i], &state.q[j]));
                    let dv = norm3(&sub3(&state.v[i], &state.v[j]));
                    if dv > 0.0 {
                        reports[i1].record(s, dq / dv, slack);
                    }
                    reports[i2].record(s * s, alpha_eff * dq / pw.m_ij[i][j], slack);
                }
            }
        }
        // energy-form velocity bound, with E0 computed from the state
        let eu = pw.energy + pw.potential; // = kinetic energy
        let masses = state.masses();
        let idx = {
            let label = "energy-velocity-bound";
            if let Some(i) = reports.iter().position(|r| r.label == label) {
                i
            } else {
                reports.push(SweepReport::new(label));
                reports.len() - 1
            }
        };
        for i in 0..n {
            for j in i + 1..n {
                let dv = norm3(&sub3(&state.v[i], &state.v[j]));
                let bound =
                    2.0f64.sqrt() * (masses[i].powf(-0.5) + masses[j].powf(-0.5)) * eu.sqrt();
                reports[idx].record(dv, bound, slack);
            }
        }
        let _ = trial;
    }
    Ok(reports)
}
