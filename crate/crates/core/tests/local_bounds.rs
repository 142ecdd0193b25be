//! Certified bounds against independent references: the analytic two-body
//! flow for physical time, and a high-accuracy collocation reference for the
//! renormalized flow.

use nbody_majorants::integrator::{gauss_tableau, irk_step, kepler_propagate, IntegrationConfig};
use nbody_majorants::majorants::{
    local_bound_physical, local_bound_renorm, midpoint_xi_zeta_hat, rho_series,
    rk_local_error_bound, xi_zeta_series, BoundScalings,
};
use nbody_majorants::nbody::presets::{two_body_circular, two_body_e99};
use nbody_majorants::nbody::{norm3, pairwise_quantities, sub3, RenormSpec, SystemState};

/// high-accuracy renormalized flow evaluation: 3-stage collocation with many
/// substeps at fp_tol 1e-15 (local truncation far below 1e-13)
fn renorm_reference(state: &SystemState, spec: RenormSpec, tau: f64) -> SystemState {
    let substeps = 200;
    let mut cfg = IntegrationConfig::new(gauss_tableau(3).unwrap(), tau / substeps as f64, 1, spec);
    cfg.fp_tol = 1e-15;
    let mut current = state.clone();
    for _ in 0..substeps {
        let (next, _) = irk_step(&current, &cfg).unwrap();
        current = next;
    }
    current
}

#[test]
fn physical_bound_dominates_kepler_deviation() {
    for state in [two_body_circular(), two_body_e99()] {
        let pw = pairwise_quantities(&state).unwrap();
        let prof = rho_series(pw.mu, pw.nu, 60).unwrap();
        let scalings = BoundScalings::from_state(&state, &RenormSpec::physical()).unwrap();
        let mut min_ratio = f64::INFINITY;
        for frac in [0.05, 0.2, 0.5, 0.8] {
            let t = frac * prof.radius;
            let exact = kepler_propagate(&state, t).unwrap();
            for body in 0..2 {
                let mut free = state.q[body];
                nbody_majorants::nbody::axpy3(&mut free, t, &state.v[body]);
                let actual = norm3(&sub3(&exact.q[body], &free));
                let bound = local_bound_physical(&scalings, &prof, body, t).unwrap();
                assert!(
                    actual <= bound.safeguarded,
                    "t = {t}: actual {actual:.3e} > bound {:.3e}",
                    bound.safeguarded
                );
                if actual > 0.0 {
                    min_ratio = min_ratio.min(bound.safeguarded / actual);
                }
            }
        }
        assert!(min_ratio >= 1.0);
    }
}

#[test]
fn renorm_bounds_dominate_reference_deviations() {
    let flow = xi_zeta_series(60).unwrap();
    for state in [two_body_circular(), two_body_e99()] {
        for spec in [RenormSpec::original(), RenormSpec::cheap()] {
            let scalings = BoundScalings::from_state(&state, &spec).unwrap();
            for frac in [0.1, 0.4, 0.8] {
                let tau = frac * flow.radius;
                let reference = renorm_reference(&state, spec, tau);
                for body in 0..2 {
                    let bounds = local_bound_renorm(&scalings, &flow, body, tau).unwrap();
                    let dq = norm3(&sub3(&reference.q[body], &state.q[body]));
                    let dv = norm3(&sub3(&reference.v[body], &state.v[body]));
                    assert!(
                        dq <= bounds.position.safeguarded,
                        "tau {tau:.3}: position deviation {dq:.3e} > bound {:.3e}",
                        bounds.position.safeguarded
                    );
                    assert!(
                        dv <= bounds.velocity.safeguarded,
                        "tau {tau:.3}: velocity deviation {dv:.3e} > bound {:.3e}",
                        bounds.velocity.safeguarded
                    );
                }
            }
        }
    }
}

#[test]
fn midpoint_local_error_within_certificate_at_sample_steps() {
    let flow = xi_zeta_series(60).unwrap();
    let disc = midpoint_xi_zeta_hat(60).unwrap();
    let tableau = gauss_tableau(1).unwrap();
    let spec = RenormSpec::original();
    let state = two_body_e99();
    let scalings = BoundScalings::from_state(&state, &spec).unwrap();
    for tau in [1e-3, 1e-2] {
        let mut cfg = IntegrationConfig::new(tableau.clone(), tau, 1, spec);
        cfg.fp_tol = 1e-15;
        let (one, _) = irk_step(&state, &cfg).unwrap();
        let reference = renorm_reference(&state, spec, tau);
        for body in 0..2 {
            let bound = rk_local_error_bound(&scalings, &flow, &disc, &tableau, body, tau).unwrap();
            let pos_err = norm3(&sub3(&one.q[body], &reference.q[body]));
            assert!(pos_err <= bound.position.safeguarded);
        }
    }
}

#[test]
fn renormalized_field_is_nearly_uniform_along_eccentric_orbit() {
    // per-body state-derivative norms over one e = 0.99 orbit: renormalized
    // max/min stays below 10 while the physical field varies by > 100
    let state = two_body_e99();
    let period = 2.0 * std::f64::consts::PI / 2.0f64.sqrt();
    let spec = RenormSpec::original();
    let cfg = IntegrationConfig::new(gauss_tableau(1).unwrap(), 0.02, 1, spec);
    let mut walk = state;
    let mut phys = (f64::INFINITY, 0.0f64);
    let mut renorm = (f64::INFINITY, 0.0f64);
    while walk.t_phys < period {
        for (sp, acc) in [(RenormSpec::physical(), &mut phys), (spec, &mut renorm)] {
            let d = nbody_majorants::nbody::rhs(&walk, &sp).unwrap();
            for i in 0..2 {
                let n = norm3(&d.dq[i]).hypot(norm3(&d.dv[i]));
                acc.0 = acc.0.min(n);
                acc.1 = acc.1.max(n);
            }
        }
        walk = irk_step(&walk, &cfg).unwrap().0;
    }
    assert!(
        renorm.1 / renorm.0 < 10.0,
        "renormalized ratio {}",
        renorm.1 / renorm.0
    );
    assert!(
        phys.1 / phys.0 > 100.0,
        "physical ratio {}",
        phys.1 / phys.0
    );
}

#[test]
fn physical_bound_is_monotone_in_truncation_order() {
    // nonnegative coefficients: raw bounds only grow with K
    let state = two_body_circular();
    let pw = pairwise_quantities(&state).unwrap();
    let scalings = BoundScalings::from_state(&state, &RenormSpec::physical()).unwrap();
    let mut last = 0.0;
    for order in [10, 20, 40, 60] {
        let prof = rho_series(pw.mu, pw.nu, order).unwrap();
        let t = 0.5 * prof.radius;
        let b = local_bound_physical(&scalings, &prof, 0, t).unwrap();
        assert!(b.raw >= last);
        last = b.raw;
    }
}
