//! Fixed steps on a highly eccentric orbit: physical time versus
//! renormalized time with equal step counts.
//!
//! The physical-time run needs a step small enough for the pericenter
//! passage (both for accuracy and for the fixed-point iteration to contract
//! there at all); the renormalized run spends its steps evenly along the
//! orbit and its local errors stay flat.
//!
//! ```text
//! cargo run --release --example renormalized_kepler
//! ```

use nbody_majorants::integrator::{
    error_probe, gauss_tableau, irk_step, IntegrationConfig, ProbeMode, ReferenceScheme,
};
use nbody_majorants::nbody::presets::two_body_e99;
use nbody_majorants::nbody::{norm3, rhs, sub3, RenormSpec};

fn main() -> nbody_majorants::Result<()> {
    let state = two_body_e99();
    let period = 2.0 * std::f64::consts::PI / 2.0f64.sqrt();
    let nsteps = 20_000;
    let tableau = gauss_tableau(1)?;

    // how uneven is the motion? compare state-derivative norms along the orbit
    let spec = RenormSpec::pnorm(2, 3.0)?;
    let mut walk = state.clone();
    let walk_cfg = IntegrationConfig::new(tableau.clone(), 0.02, 1, spec);
    let mut phys_speed = (f64::INFINITY, 0.0f64);
    let mut renorm_speed = (f64::INFINITY, 0.0f64);
    let mut tau_total = 0.0;
    while walk.t_phys < period {
        let d_phys = rhs(&walk, &RenormSpec::physical())?;
        let d_ren = rhs(&walk, &spec)?;
        for i in 0..2 {
            let p = norm3(&d_phys.dq[i]).hypot(norm3(&d_phys.dv[i]));
            let r = norm3(&d_ren.dq[i]).hypot(norm3(&d_ren.dv[i]));
            phys_speed = (phys_speed.0.min(p), phys_speed.1.max(p));
            renorm_speed = (renorm_speed.0.min(r), renorm_speed.1.max(r));
        }
        walk = irk_step(&walk, &walk_cfg)?.0;
        tau_total += walk_cfg.step;
    }
    println!("state-derivative norm over one orbit (max/min):");
    println!("  physical time   : {:.1}", phys_speed.1 / phys_speed.0);
    println!("  renormalized    : {:.1}", renorm_speed.1 / renorm_speed.0);

    println!("\nrunning both integrations with {nsteps} steps per period...");
    let phys_cfg = IntegrationConfig::new(
        tableau.clone(),
        period / nsteps as f64,
        nsteps,
        RenormSpec::physical(),
    );
    let phys = error_probe(
        &state,
        &phys_cfg,
        ProbeMode::Local,
        ReferenceScheme::default(),
    )?;
    let renorm_cfg = IntegrationConfig::new(tableau, tau_total / nsteps as f64, nsteps, spec);
    let renorm = error_probe(
        &state,
        &renorm_cfg,
        ProbeMode::Local,
        ReferenceScheme::default(),
    )?;

    for (name, table) in [("physical", &phys), ("renormalized", &renorm)] {
        let per_step = table.per_step_state_error();
        let mut sorted = per_step.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        println!(
            "\n{name}: max position error {:.3e}, median step error {:.3e}, spike ratio {:.1}",
            table.max_position_error(),
            sorted[sorted.len() / 2],
            table.spike_ratio()
        );
    }
    println!(
        "\nmax local position error improvement: {:.0}x",
        phys.max_position_error() / renorm.max_position_error()
    );

    // where the renormalized run spends its physical time
    let traj = nbody_majorants::integrator::integrate(&state, &renorm_cfg);
    let mut min_dt = (f64::INFINITY, 0.0f64);
    let mut max_dt = (0.0f64, 0.0f64);
    for w in traj.records.windows(2) {
        let dt = w[1].t_phys - w[0].t_phys;
        let sep = norm3(&sub3(&w[0].state.q[0], &w[0].state.q[1]));
        if dt < min_dt.0 {
            min_dt = (dt, sep);
        }
        if dt > max_dt.0 {
            max_dt = (dt, sep);
        }
    }
    println!(
        "renormalized step sizes in physical time: {:.2e} (separation {:.3}) to {:.2e} (separation {:.3})",
        min_dt.0, min_dt.1, max_dt.0, max_dt.1
    );
    Ok(())
}
