//! The JSON system format: write a small system, load it back, reduce to
//! the barycenter and integrate a few steps.
//!
//! ```text
//! cargo run --example system_files
//! ```

use nbody_majorants::integrator::{gauss_tableau, integrate, IntegrationConfig};
use nbody_majorants::nbody::presets::{BodyEntry, SystemFile, UnitSystem};
use nbody_majorants::nbody::{norm3, reduce_to_barycenter, RenormSpec, G_AU_DAY_MSUN};

fn main() -> nbody_majorants::Result<()> {
    // a sun + two planets in AU/day/Msun units, deliberately not barycentric
    let file = SystemFile {
        unit_system: UnitSystem::au_day_msun(),
        bodies: vec![
            BodyEntry {
                name: "star".into(),
                gm: G_AU_DAY_MSUN,
                q: [0.1, 0.0, 0.0],
                v: [0.0, 1e-6, 0.0],
            },
            BodyEntry {
                name: "inner".into(),
                gm: G_AU_DAY_MSUN * 3e-6,
                q: [1.1, 0.0, 0.0],
                v: [0.0, G_AU_DAY_MSUN.sqrt(), 0.0],
            },
            BodyEntry {
                name: "outer".into(),
                gm: G_AU_DAY_MSUN * 9.5e-4,
                q: [-5.1, 0.0, 0.0],
                v: [0.0, -(G_AU_DAY_MSUN / 5.2).sqrt(), 0.0],
            },
        ],
    };

    let dir = std::env::temp_dir().join("nbody-majorants-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("demo_system.json");
    file.save(&path)?;
    println!("wrote {}", path.display());

    let (state, names) = SystemFile::load(&path)?.to_state()?;
    println!("loaded {} bodies: {names:?}", state.n());

    let reduced = reduce_to_barycenter(&state)?;
    let mut momentum = [0.0; 3];
    for i in 0..reduced.n() {
        nbody_majorants::nbody::axpy3(&mut momentum, reduced.gm[i], &reduced.v[i]);
    }
    println!(
        "after barycenter reduction, total momentum norm: {:.3e}",
        norm3(&momentum)
    );

    // a month of renormalized integration
    let cfg = IntegrationConfig::new(gauss_tableau(2)?, 0.05, 200, RenormSpec::cheap());
    let traj = integrate(&reduced, &cfg);
    assert!(traj.is_complete(), "{:?}", traj.failure);
    println!(
        "integrated 200 renormalized steps: t_phys = {:.3} days, fp sweeps per step ~ {}",
        traj.last_state().t_phys,
        traj.records.iter().map(|r| r.fp_iters).sum::<usize>() / 200
    );
    Ok(())
}
