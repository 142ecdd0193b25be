//! Closed-form propagation of the two-body problem (elliptic case), used as
//! an analytic reference for error probes.
//!
//! The relative orbit is advanced with Lagrange f–g functions; the
//! eccentric-anomaly increment solves the incremental Kepler equation
//! ΔM = ΔE − A sin ΔE − B (cos ΔE − 1), A = 1 − r₀/a, B = (r₀·v₀)/(n a²),
//! which is monotone in ΔE and safe for every eccentricity including 0.

use crate::error::{Error, Result};
use crate::nbody::{axpy3, dot3, norm3, sub3, SystemState};

/// Propagate a two-body state by physical time dt along the exact flow.
pub fn kepler_propagate(state: &SystemState, dt: f64) -> Result<SystemState> {
    if state.n() != 2 {
        return Err(Error::InvalidParameters(format!(
            "analytic propagation needs exactly 2 bodies, got {}",
            state.n()
        )));
    }
    state.check_regular()?;
    let gm = state.gm[0] + state.gm[1];
    let r0v = sub3(&state.q[0], &state.q[1]);
    let v0v = sub3(&state.v[0], &state.v[1]);
    let r0 = norm3(&r0v);
    let v0sq = dot3(&v0v, &v0v);
    let energy = v0sq / 2.0 - gm / r0;
    if energy >= 0.0 {
        return Err(Error::InvalidParameters(format!(
            "analytic propagation covers elliptic orbits only (specific energy {energy:.3e} >= 0)"
        )));
    }
    let a = -gm / (2.0 * energy);
    let n_mean = (gm / (a * a * a)).sqrt();
    let big_a = 1.0 - r0 / a;
    let big_b = dot3(&r0v, &v0v) / (n_mean * a * a);
    let dm = n_mean * dt;

    // Newton with bisection fallback on the monotone incremental equation
    let f = |de: f64| de - big_a * de.sin() - big_b * (de.cos() - 1.0) - dm;
    let fp = |de: f64| 1.0 - big_a * de.cos() + big_b * de.sin();
    let mut de = dm;
    let mut converged = false;
    for _ in 0..60 {
        let step = f(de) / fp(de);
        de -= step;
        if step.abs() < 1e-15 * (1.0 + de.abs()) {
            converged = true;
            break;
        }
    }
    if !converged || !de.is_finite() {
        // bracket and bisect; f is increasing with slope r/a ∈ (0, 2]
        let mut lo = dm - 2.0 * (big_a.abs() + big_b.abs()) - 1.0;
        let mut hi = dm + 2.0 * (big_a.abs() + big_b.abs()) + 1.0;
        for _ in 0..200 {
            de = 0.5 * (lo + hi);
            if f(de) > 0.0 {
                hi = de;
            } else {
                lo = de;
            }
        }
    }

    let (s, c) = de.sin_cos();
    let fval = 1.0 - (a / r0) * (1.0 - c);
    let gval = dt + (s - de) / n_mean;
    let mut r1v = [0.0; 3];
    axpy3(&mut r1v, fval, &r0v);
    axpy3(&mut r1v, gval, &v0v);
    let r1 = norm3(&r1v);
    let fdot = -(a / (r1 * r0)) * n_mean * a * s;
    let gdot = 1.0 - (a / r1) * (1.0 - c);
    let mut v1v = [0.0; 3];
    axpy3(&mut v1v, fdot, &r0v);
    axpy3(&mut v1v, gdot, &v0v);

    // center of mass drifts uniformly; weights are gm-proportional
    let w0 = state.gm[0] / gm;
    let w1 = state.gm[1] / gm;
    let mut qc = [0.0; 3];
    let mut vc = [0.0; 3];
    for c3 in 0..3 {
        qc[c3] = w0 * state.q[0][c3] + w1 * state.q[1][c3];
        vc[c3] = w0 * state.v[0][c3] + w1 * state.v[1][c3];
        qc[c3] += vc[c3] * dt;
    }
    let mut out = state.clone();
    for c3 in 0..3 {
        out.q[0][c3] = qc[c3] + w1 * r1v[c3];
        out.q[1][c3] = qc[c3] - w0 * r1v[c3];
        out.v[0][c3] = vc[c3] + w1 * v1v[c3];
        out.v[1][c3] = vc[c3] - w0 * v1v[c3];
    }
    out.t_phys = state.t_phys + dt;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbody::presets::{two_body_circular, two_body_e99};

    #[test]
    fn circular_orbit_returns_after_a_period() {
        let s0 = two_body_circular();
        let period = 2.0 * std::f64::consts::PI / 2.0f64.sqrt();
        let s1 = kepler_propagate(&s0, period).unwrap();
        for i in 0..2 {
            assert!(norm3(&sub3(&s1.q[i], &s0.q[i])) < 1e-12);
            assert!(norm3(&sub3(&s1.v[i], &s0.v[i])) < 1e-12);
        }
    }

    #[test]
    fn quarter_circle_lands_on_the_perpendicular() {
        let s0 = two_body_circular();
        let period = 2.0 * std::f64::consts::PI / 2.0f64.sqrt();
        let s1 = kepler_propagate(&s0, period / 4.0).unwrap();
        let rel = sub3(&s1.q[0], &s1.q[1]);
        assert!(rel[0].abs() < 1e-13);
        assert!((rel[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn energy_and_momentum_conserved_on_e99() {
        let s0 = two_body_e99();
        let e0 = s0.total_energy().unwrap();
        let l0 = s0.angular_momentum();
        // pericenter passage included
        let period = 2.0 * std::f64::consts::PI / 2.0f64.sqrt();
        for frac in [0.1, 0.45, 0.5, 0.55, 0.9, 2.3] {
            let s1 = kepler_propagate(&s0, frac * period).unwrap();
            let e1 = s1.total_energy().unwrap();
            assert!(
                (e1 - e0).abs() < 1e-10 * e0.abs(),
                "frac {frac}: {e1} vs {e0}"
            );
            let l1 = s1.angular_momentum();
            assert!(norm3(&sub3(&l1, &l0)) < 1e-11);
        }
    }

    #[test]
    fn time_symmetry() {
        let s0 = two_body_e99();
        let s1 = kepler_propagate(&s0, 0.37).unwrap();
        let back = kepler_propagate(&s1, -0.37).unwrap();
        for i in 0..2 {
            assert!(norm3(&sub3(&back.q[i], &s0.q[i])) < 1e-12);
        }
    }

    #[test]
    fn rejects_hyperbolic_and_many_body() {
        let mut s = two_body_circular();
        s.v[0] = [0.0, 5.0, 0.0];
        assert!(kepler_propagate(&s, 1.0).is_err());
        let three = crate::nbody::presets::figure_eight();
        assert!(kepler_propagate(&three, 1.0).is_err());
    }
}
