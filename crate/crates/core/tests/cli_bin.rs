//! End-to-end tests of the `nbody-majorants` binary.

use std::path::Path;
use std::process::Command;

use nbody_majorants::nbody::presets::{BodyEntry, SystemFile, UnitSystem};
use nbody_majorants::nbody::G_AU_DAY_MSUN;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nbody-majorants"))
}

/// A 15-body stand-in for the solar system: one solar-mass primary plus
/// fourteen minor bodies on near-circular orbits between 0.39 and 39 AU,
/// in AU/day/Msun units. Deterministic, no ephemeris data involved.
fn synthetic_solar_system() -> SystemFile {
    let gm_sun = G_AU_DAY_MSUN;
    let orbits: [(f64, f64); 14] = [
        (0.52, 1.7e-7),
        (0.72, 2.4e-6),
        (1.0, 3.0e-6),
        (1.52, 3.2e-7),
        (2.2, 4.7e-10),
        (2.4, 1.0e-10),
        (2.6, 1.3e-10),
        (2.9, 4.0e-11),
        (3.2, 5.0e-11),
        (5.2, 9.5e-4),
        (9.5, 2.9e-4),
        (19.2, 4.4e-5),
        (30.1, 5.2e-5),
        (39.5, 6.6e-9),
    ];
    let mut bodies = vec![BodyEntry {
        name: "primary".into(),
        gm: gm_sun,
        q: [0.0; 3],
        v: [0.0; 3],
    }];
    for (i, (r, mass)) in orbits.iter().enumerate() {
        let phase = 0.7 * (i as f64 + 1.0);
        let incl = 0.02 * (i as f64);
        let speed = (gm_sun / r).sqrt();
        bodies.push(BodyEntry {
            name: format!("minor{i}"),
            gm: gm_sun * mass,
            q: [
                r * phase.cos(),
                r * phase.sin() * incl.cos(),
                r * phase.sin() * incl.sin(),
            ],
            v: [
                -speed * phase.sin(),
                speed * phase.cos() * incl.cos(),
                speed * phase.cos() * incl.sin(),
            ],
        });
    }
    SystemFile {
        unit_system: UnitSystem::au_day_msun(),
        bodies,
    }
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn radii_subcommand_reports_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "radii",
            "--eta0",
            "0.5,0.9",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = read(dir.path(), "radii.csv");
    assert!(csv.contains("R,0.08399681039393789,"));
    assert!(csv.contains("v_plus,0.14990257556730371,"));
    assert!(csv.contains("r(0.9),"));
    assert!(dir.path().join("manifest_radii.json").exists());
}

#[test]
fn series_subcommand_rejects_invalid_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "series",
            "--which",
            "rho",
            "--mu0",
            "0",
            "--nu0",
            "0",
        ])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nu0"), "stderr: {err}");
}

#[test]
fn series_subcommand_emits_coefficients_and_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "--order",
            "5",
            "series",
            "--which",
            "xi-zeta",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = read(dir.path(), "series.csv");
    assert!(csv.starts_with("degree,xi,zeta\n0,1,0\n1,1,1\n2,1.75,3.25\n"));
    assert!(csv.contains("residual:sqrt_identity,"));
}

#[test]
fn compare_subcommand_on_the_circular_preset() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "compare",
            "--preset",
            "two-body-circular",
            "--nsteps",
            "50",
            "--dt",
            "0.08",
            "--dtau",
            "0.05",
            "--certify",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for name in [
        "physical_local.csv",
        "renorm_local.csv",
        "physical_global.csv",
        "renorm_global.csv",
        "physical_traj.csv",
        "renorm_traj.csv",
        "renorm_certificates.csv",
        "summary.csv",
        "manifest_compare.json",
    ] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }
    let summary = read(dir.path(), "summary.csv");
    assert!(summary.lines().count() == 3);
    // certified bounds hold along the run
    let cert = read(dir.path(), "renorm_certificates.csv");
    for line in cert.lines().skip(1) {
        let f: Vec<f64> = line
            .split(',')
            .skip(2)
            .map(|x| x.parse().unwrap())
            .collect();
        assert!(f[0] <= f[1], "position error above bound: {line}");
        assert!(f[2] <= f[3], "velocity error above bound: {line}");
    }
}

#[test]
fn physical_comparison_column_matches_plain_integrate() {
    // a physical-only integrate reproduces compare's physical trajectory
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--out",
            d1.path().to_str().unwrap(),
            "compare",
            "--preset",
            "two-body-circular",
            "--nsteps",
            "20",
            "--dt",
            "0.1",
            "--dtau",
            "0.05",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let out = bin()
        .args([
            "--out",
            d2.path().to_str().unwrap(),
            "integrate",
            "--preset",
            "two-body-circular",
            "--renorm",
            "physical",
            "--step",
            "0.1",
            "--nsteps",
            "20",
            "--tag",
            "solo",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let a = read(d1.path(), "physical_traj.csv");
    let b = read(d2.path(), "trajectory_solo.csv");
    assert_eq!(a, b);
}

#[test]
fn integrate_accepts_json_config() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    let config = serde_json::json!({
        "preset": "two-body-e99",
        "system": null,
        "renorm": "original",
        "p": 2,
        "alpha": 3.0,
        "stages": 2,
        "step": 0.02,
        "nsteps": 30,
        "fp_tol": 1e-14,
        "fp_maxiter": 100,
        "tag": "cfg"
    });
    let cfg_path = d1.path().join("run.json");
    std::fs::write(&cfg_path, config.to_string()).unwrap();
    let out = bin()
        .args([
            "--out",
            d1.path().to_str().unwrap(),
            "integrate",
            "--config",
            cfg_path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = bin()
        .args([
            "--out",
            d2.path().to_str().unwrap(),
            "integrate",
            "--preset",
            "two-body-e99",
            "--stages",
            "2",
            "--step",
            "0.02",
            "--nsteps",
            "30",
            "--tag",
            "cfg",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        read(d1.path(), "trajectory_cfg.csv"),
        read(d2.path(), "trajectory_cfg.csv")
    );
}

#[test]
fn series_profile_export_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "--order",
            "8",
            "series",
            "--which",
            "midpoint",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let profile: serde_json::Value =
        serde_json::from_str(&read(dir.path(), "profile.json")).unwrap();
    assert_eq!(profile["kind"], "midpoint");
    assert_eq!(profile["coefficients_xi"][0], 1.0);
    assert_eq!(profile["coefficients_xi"][1], 0.5);
    assert_eq!(profile["coefficients_zeta"][1], 0.5);
    assert!(profile["radius"].as_f64().unwrap() > 0.09);
}

#[test]
fn reruns_are_byte_identical() {
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = bin()
            .args([
                "--out",
                d.path().to_str().unwrap(),
                "--seed",
                "11",
                "validate-bounds",
                "--trials",
                "6",
            ])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(
        std::fs::read(d1.path().join("validate_bounds.csv")).unwrap(),
        std::fs::read(d2.path().join("validate_bounds.csv")).unwrap()
    );
    let csv = read(d1.path(), "validate_bounds.csv");
    for line in csv.lines().skip(1) {
        assert!(line.ends_with(",0"), "violations in: {line}");
    }
}

#[test]
fn fifteen_body_file_smoke_run() {
    let dir = tempfile::tempdir().unwrap();
    let system_path = dir.path().join("system15.json");
    synthetic_solar_system().save(&system_path).unwrap();

    // renormalized leg at the full step size, 1000 steps
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "integrate",
            "--system",
            system_path.to_str().unwrap(),
            "--renorm",
            "pnorm",
            "--step",
            "0.7196076352409821",
            "--nsteps",
            "1000",
            "--fp-maxiter",
            "200",
            "--tag",
            "renorm15",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let traj = read(dir.path(), "trajectory_renorm15.csv");
    assert_eq!(traj.lines().count(), 1 + 1001 * 15);
    // physical time advanced by a plausible amount (a handful of days/step)
    let last = traj.lines().last().unwrap();
    let t_phys: f64 = last.split(',').nth(2).unwrap().parse().unwrap();
    assert!(t_phys > 1000.0, "t_phys = {t_phys}");

    // short two-leg comparison with dt = 8 days and the same dtau
    let out = bin()
        .args([
            "--out",
            dir.path().to_str().unwrap(),
            "compare",
            "--system",
            system_path.to_str().unwrap(),
            "--nsteps",
            "100",
            "--dt",
            "8.0",
            "--dtau",
            "0.7196076352409821",
            "--fp-maxiter",
            "200",
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = read(dir.path(), "summary.csv");
    assert!(summary.contains("physical,"));
    assert!(summary.contains("renormalized,"));
}
