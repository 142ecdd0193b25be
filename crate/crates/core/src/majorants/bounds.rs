//! Certified local bounds: evaluation of the majorant series with the
//! problem-dependent scalings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::RKTableau;
use crate::nbody::{norm3, pairwise_quantities, renorm_s, sub3, RenormSpec, SystemState};
use crate::series::TruncatedSeries;

use super::flow::{MajorantKind, PhysicalMajorant, RenormMajorant};

/// Problem-dependent scale factors entering every bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundScalings {
    /// s(q⁰, v⁰) for the chosen renormalization (time)
    pub s0: f64,
    /// K_i(q⁰) per body (length/time²)
    pub k_i: Vec<f64>,
    /// M_ij(q⁰) = K_i + K_j
    pub m_ij: Vec<Vec<f64>>,
    /// min_{j≠i} ‖q_i⁰ − q_j⁰‖ per body (length)
    pub min_gap: Vec<f64>,
    /// ‖v_i⁰‖ per body
    pub v_norm: Vec<f64>,
}

impl BoundScalings {
    pub fn from_state(state: &SystemState, spec: &RenormSpec) -> Result<Self> {
        state.check_regular()?;
        let pw = pairwise_quantities(state)?;
        let n = state.n();
        let mut min_gap = vec![f64::INFINITY; n];
        for i in 0..n {
            for j in 0..n {
                if j != i {
                    let d = norm3(&sub3(&state.q[i], &state.q[j]));
                    min_gap[i] = min_gap[i].min(d);
                }
            }
        }
        Ok(BoundScalings {
            s0: renorm_s(state, spec)?,
            k_i: pw.k_i,
            m_ij: pw.m_ij,
            min_gap,
            v_norm: state.v.iter().map(norm3).collect(),
        })
    }

    /// max(s₀‖v_i⁰‖, s₀²K_i): the position-bound scale.
    pub fn position_scale(&self, i: usize) -> f64 {
        (self.s0 * self.v_norm[i]).max(self.s0 * self.s0 * self.k_i[i])
    }

    fn check_body(&self, i: usize) -> Result<()> {
        if i >= self.k_i.len() {
            return Err(Error::InvalidParameters(format!(
                "body index {i} out of range ({} bodies)",
                self.k_i.len()
            )));
        }
        Ok(())
    }
}

/// A truncated-tail bound value. `raw` is the plain partial sum; since all
/// coefficients are nonnegative it under-reports the full series, so
/// `safeguarded` adds a geometric estimate of the dropped tail (the last
/// retained term continued with the worst recent coefficient ratio).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundValue {
    pub raw: f64,
    pub safeguarded: f64,
}

/// Position and velocity bounds for one body.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RenormBounds {
    pub position: BoundValue,
    pub velocity: BoundValue,
}

const TAIL_WINDOW: usize = 5;

/// Evaluate scale·Σ_{k≥from} c_k x^k with the geometric tail safeguard.
fn eval_tail_bound(series: &TruncatedSeries, x: f64, from: usize, scale: f64) -> BoundValue {
    let raw = scale * series.eval_tail(x, from);
    let last = scale * series.coeff(series.order()) * x.powi(series.order() as i32);
    let safeguarded = match series.tail_growth_ratio(TAIL_WINDOW) {
        Some(ratio) => {
            let q = x.abs() * ratio;
            if q < 1.0 {
                raw + last.abs() * q / (1.0 - q)
            } else {
                f64::INFINITY
            }
        }
        None => raw,
    };
    BoundValue { raw, safeguarded }
}

/// Bound on ‖q_i(t) − q_i⁰ − t v_i⁰‖ along the physical-time flow:
/// min-gap_i · Σ_{k≥2} ρ_k t^k, valid for 0 ≤ t inside the certified disk.
pub fn local_bound_physical(
    scalings: &BoundScalings,
    prof: &PhysicalMajorant,
    i: usize,
    t: f64,
) -> Result<BoundValue> {
    scalings.check_body(i)?;
    if t < 0.0 || t >= prof.radius {
        return Err(Error::OutOfDomain {
            what: "physical time".into(),
            value: t,
            limit: prof.radius,
        });
    }
    Ok(eval_tail_bound(&prof.rho, t, 2, scalings.min_gap[i]))
}

/// Bounds on ‖Q_i(τ) − q_i⁰‖ and ‖V_i(τ) − v_i⁰‖ along the renormalized
/// flow: max(s₀‖v_i⁰‖, s₀²K_i)(ξ(τ)−1) and s₀K_i ζ(τ).
pub fn local_bound_renorm(
    scalings: &BoundScalings,
    prof: &RenormMajorant,
    i: usize,
    tau: f64,
) -> Result<RenormBounds> {
    scalings.check_body(i)?;
    if tau.abs() >= prof.radius {
        return Err(Error::OutOfDomain {
            what: "fictitious time".into(),
            value: tau,
            limit: prof.radius,
        });
    }
    let x = tau.abs();
    Ok(RenormBounds {
        position: eval_tail_bound(&prof.xi, x, 1, scalings.position_scale(i)),
        velocity: eval_tail_bound(&prof.zeta, x, 1, scalings.s0 * scalings.k_i[i]),
    })
}

/// Certified bound on the one-step (local) error of an order-p Runge-Kutta
/// discretization of the renormalized equations:
///
/// velocity: s₀ K_i ‖b‖∞ Σ_{k≥p+1} |ζ̂_k − ζ_k| (2‖A‖∞ τ)^k,
/// position: max(s₀‖v_i⁰‖, s₀²K_i) ‖b‖∞ Σ_{k≥p+1} |ξ̂_k − ξ_k| (2‖A‖∞ τ)^k.
///
/// The flow pair dominates the discretization pair coefficient by
/// coefficient (the midpoint pair converges on a strictly larger disk), so
/// the absolute differences are ζ_k − ζ̂_k and ξ_k − ξ̂_k; that ordering is
/// checked and its failure reported as an internal-consistency error.
pub fn rk_local_error_bound(
    scalings: &BoundScalings,
    flow: &RenormMajorant,
    disc: &RenormMajorant,
    tableau: &RKTableau,
    i: usize,
    tau: f64,
) -> Result<RenormBounds> {
    scalings.check_body(i)?;
    if flow.kind != MajorantKind::ExactFlow || disc.kind != MajorantKind::Midpoint {
        return Err(Error::InvalidParameters(
            "rk_local_error_bound takes the exact-flow pair and the midpoint pair, in that order"
                .into(),
        ));
    }
    let x = 2.0 * tableau.norm_a_inf() * tau.abs();
    if x >= disc.radius {
        return Err(Error::OutOfDomain {
            what: "2·‖A‖∞·τ".into(),
            value: x,
            limit: disc.radius,
        });
    }
    let order = flow.xi.order().min(disc.xi.order());
    let mut dxi = Vec::with_capacity(order + 1);
    let mut dzeta = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let dx = flow.xi.coeff(k) - disc.xi.coeff(k);
        let dz = flow.zeta.coeff(k) - disc.zeta.coeff(k);
        if dx < 0.0 || dz < 0.0 {
            return Err(Error::InternalConsistency(format!(
                "flow majorant fails to dominate the discretization majorant at degree {k}"
            )));
        }
        dxi.push(dx);
        dzeta.push(dz);
    }
    let dxi = TruncatedSeries::new(dxi);
    let dzeta = TruncatedSeries::new(dzeta);
    let p = tableau.order;
    let nb = tableau.norm_b_inf();
    Ok(RenormBounds {
        position: eval_tail_bound(&dxi, x, p + 1, scalings.position_scale(i) * nb),
        velocity: eval_tail_bound(&dzeta, x, p + 1, scalings.s0 * scalings.k_i[i] * nb),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::gauss_tableau;
    use crate::majorants::flow::{midpoint_xi_zeta_hat, rho_series, xi_zeta_series};
    use crate::nbody::presets::two_body_circular;

    fn scalings() -> BoundScalings {
        BoundScalings::from_state(&two_body_circular(), &RenormSpec::original()).unwrap()
    }

    #[test]
    fn physical_bound_zero_at_zero_and_monotone() {
        let state = two_body_circular();
        let pw = pairwise_quantities(&state).unwrap();
        let prof = rho_series(pw.mu, pw.nu, 60).unwrap();
        let sc = scalings();
        let b0 = local_bound_physical(&sc, &prof, 0, 0.0).unwrap();
        assert_eq!(b0.raw, 0.0);
        let mut prev = 0.0;
        for k in 1..=9 {
            let t = 0.09 * prof.radius * k as f64;
            let b = local_bound_physical(&sc, &prof, 0, t).unwrap();
            assert!(b.raw >= prev);
            assert!(b.safeguarded >= b.raw);
            prev = b.raw;
        }
        assert!(local_bound_physical(&sc, &prof, 0, prof.radius * 1.01).is_err());
        assert!(local_bound_physical(&sc, &prof, 0, -0.1).is_err());
    }

    #[test]
    fn renorm_bound_velocity_scaling_is_exact() {
        let prof = xi_zeta_series(60).unwrap();
        let sc = scalings();
        let tau = 0.04;
        let b = local_bound_renorm(&sc, &prof, 0, tau).unwrap();
        let zeta_val = prof.zeta.eval_tail(tau, 1);
        assert!((b.velocity.raw - sc.s0 * sc.k_i[0] * zeta_val).abs() < 1e-15);
        assert_eq!(
            local_bound_renorm(&sc, &prof, 0, 0.0).unwrap().position.raw,
            0.0
        );
        assert!(local_bound_renorm(&sc, &prof, 0, prof.radius).is_err());
    }

    #[test]
    fn rk_bound_scales_with_cube_of_small_steps() {
        // midpoint has order 2: the tail starts at τ³
        let flow = xi_zeta_series(60).unwrap();
        let disc = midpoint_xi_zeta_hat(60).unwrap();
        let tab = gauss_tableau(1).unwrap();
        let sc = scalings();
        let taus = [1e-3, 2e-3, 4e-3, 8e-3, 1e-2];
        let vals: Vec<f64> = taus
            .iter()
            .map(|&t| {
                rk_local_error_bound(&sc, &flow, &disc, &tab, 0, t)
                    .unwrap()
                    .velocity
                    .raw
            })
            .collect();
        let slope = (vals[4] / vals[0]).ln() / (taus[4] / taus[0]).ln();
        assert!((slope - 3.0).abs() < 0.1, "slope {slope}");
        let b0 = rk_local_error_bound(&sc, &flow, &disc, &tab, 0, 0.0).unwrap();
        assert_eq!(b0.velocity.raw, 0.0);
        assert_eq!(b0.position.raw, 0.0);
    }

    #[test]
    fn rk_bound_rejects_swapped_profiles_and_large_steps() {
        let flow = xi_zeta_series(40).unwrap();
        let disc = midpoint_xi_zeta_hat(40).unwrap();
        let tab = gauss_tableau(1).unwrap();
        let sc = scalings();
        assert!(rk_local_error_bound(&sc, &disc, &flow, &tab, 0, 1e-3).is_err());
        assert!(rk_local_error_bound(&sc, &flow, &disc, &tab, 0, disc.radius * 1.5).is_err());
    }
}
