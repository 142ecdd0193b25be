//! Bundled initial states and the JSON system-file format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbody::{SystemState, Vec3, DEFAULT_MIN_SEPARATION};

/// Unit declarations stored alongside a system: the value of G ties the
/// per-body gm to masses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitSystem {
    pub length: String,
    pub time: String,
    pub mass: String,
    /// gravitational constant in the declared units
    pub g: f64,
}

impl UnitSystem {
    pub fn dimensionless() -> Self {
        UnitSystem {
            length: "L".into(),
            time: "T".into(),
            mass: "M".into(),
            g: 1.0,
        }
    }

    pub fn au_day_msun() -> Self {
        UnitSystem {
            length: "AU".into(),
            time: "day".into(),
            mass: "Msun".into(),
            g: crate::nbody::G_AU_DAY_MSUN,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyEntry {
    pub name: String,
    /// gravitational parameter G·m (length³/time²)
    pub gm: f64,
    pub q: Vec3,
    pub v: Vec3,
}

/// On-disk system description:
/// `{"unit_system": {...}, "bodies": [{"name", "gm", "q", "v"}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub unit_system: UnitSystem,
    pub bodies: Vec<BodyEntry>,
}

impl SystemFile {
    pub fn to_state(&self) -> Result<(SystemState, Vec<String>)> {
        if self.bodies.len() < 2 {
            return Err(Error::InvalidSystem(format!(
                "system file needs at least 2 bodies, found {}",
                self.bodies.len()
            )));
        }
        if !(self.unit_system.g > 0.0) || !self.unit_system.g.is_finite() {
            return Err(Error::InvalidSystem(format!(
                "unit_system.g must be a positive finite number, got {}",
                self.unit_system.g
            )));
        }
        let state = SystemState {
            gm: self.bodies.iter().map(|b| b.gm).collect(),
            q: self.bodies.iter().map(|b| b.q).collect(),
            v: self.bodies.iter().map(|b| b.v).collect(),
            t_phys: 0.0,
            g_const: self.unit_system.g,
            min_separation: DEFAULT_MIN_SEPARATION,
        };
        state.validate()?;
        Ok((state, self.bodies.iter().map(|b| b.name.clone()).collect()))
    }

    pub fn from_state(state: &SystemState, names: &[String], units: UnitSystem) -> Self {
        SystemFile {
            unit_system: units,
            bodies: (0..state.n())
                .map(|i| BodyEntry {
                    name: names.get(i).cloned().unwrap_or_else(|| format!("body{i}")),
                    gm: state.gm[i],
                    q: state.q[i],
                    v: state.v[i],
                })
                .collect(),
        }
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

/// Equal-mass pair on a circular orbit: gm = (1,1), separation 1,
/// period 2π/√2.
pub fn two_body_circular() -> SystemState {
    // relative speed sqrt(GM/d) = sqrt(2), split evenly between the bodies
    let v_half = 2.0f64.sqrt() / 2.0;
    SystemState::new(
        vec![1.0, 1.0],
        vec![[0.5, 0.0, 0.0], [-0.5, 0.0, 0.0]],
        vec![[0.0, v_half, 0.0], [0.0, -v_half, 0.0]],
    )
    .unwrap()
}

/// Equal-mass pair on an e = 0.99 ellipse with semi-major axis 1, started
/// at apocenter; pericenter separation is 0.01. Period 2π/√2.
pub fn two_body_e99() -> SystemState {
    two_body_ellipse(0.99)
}

/// Equal-mass pair (gm = 1 each) on an ellipse with semi-major axis 1 and
/// the given eccentricity, started at apocenter, barycentric.
pub fn two_body_ellipse(e: f64) -> SystemState {
    assert!((0.0..1.0).contains(&e));
    let gm_total = 2.0;
    let r_apo = 1.0 + e;
    let v_apo = (gm_total * (2.0 / r_apo - 1.0)).sqrt();
    SystemState::new(
        vec![1.0, 1.0],
        vec![[r_apo / 2.0, 0.0, 0.0], [-r_apo / 2.0, 0.0, 0.0]],
        vec![[0.0, v_apo / 2.0, 0.0], [0.0, -v_apo / 2.0, 0.0]],
    )
    .unwrap()
}

/// Three equal unit masses on the planar figure-eight choreography
/// (period ≈ 6.3259).
pub fn figure_eight() -> SystemState {
    let q1 = [-0.97000436, 0.24308753, 0.0];
    let v3 = [-0.93240737, -0.86473146, 0.0];
    let v1 = [-v3[0] / 2.0, -v3[1] / 2.0, 0.0];
    SystemState::new(
        vec![1.0, 1.0, 1.0],
        vec![q1, [-q1[0], -q1[1], 0.0], [0.0, 0.0, 0.0]],
        vec![v1, v1, v3],
    )
    .unwrap()
}

/// Preset lookup by CLI name.
pub fn by_name(name: &str) -> Result<SystemState> {
    match name {
        "two-body-circular" => Ok(two_body_circular()),
        "two-body-e99" => Ok(two_body_e99()),
        "figure-eight" => Ok(figure_eight()),
        other => Err(Error::InvalidParameters(format!(
            "unknown preset '{other}' (available: two-body-circular, two-body-e99, figure-eight)"
        ))),
    }
}

pub const PRESET_NAMES: &[&str] = &["two-body-circular", "two-body-e99", "figure-eight"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nbody::{accelerations, norm3, pairwise_quantities, sub3};

    #[test]
    fn circular_preset_is_circular() {
        let s = two_body_circular();
        // relative speed equals sqrt(GM/d) = sqrt(2)
        let dv = norm3(&sub3(&s.v[0], &s.v[1]));
        assert!((dv - 2.0f64.sqrt()).abs() < 1e-14, "{dv}");
        // centripetal balance: |g_rel| = v_rel²/d
        let acc = accelerations(&s).unwrap();
        let g_rel = norm3(&sub3(&acc[0], &acc[1]));
        assert!((g_rel - dv * dv).abs() < 1e-13);
    }

    #[test]
    fn e99_preset_energy() {
        let s = two_body_e99();
        // specific orbital energy of the relative orbit: -GM/(2a) = -1
        let r = norm3(&sub3(&s.q[0], &s.q[1]));
        let v = norm3(&sub3(&s.v[0], &s.v[1]));
        let eps = v * v / 2.0 - 2.0 / r;
        assert!((eps + 1.0).abs() < 1e-13);
    }

    #[test]
    fn figure_eight_is_barycentric() {
        let s = figure_eight();
        let pw = pairwise_quantities(&s).unwrap();
        assert!(pw.energy < 0.0);
        let mut pm = [0.0; 3];
        for i in 0..3 {
            crate::nbody::axpy3(&mut pm, s.gm[i], &s.v[i]);
        }
        assert!(norm3(&pm) < 1e-12);
    }

    #[test]
    fn system_file_round_trip() {
        let s = two_body_e99();
        let f = SystemFile::from_state(&s, &["a".into(), "b".into()], UnitSystem::dimensionless());
        let text = serde_json::to_string(&f).unwrap();
        let back: SystemFile = serde_json::from_str(&text).unwrap();
        let (s2, names) = back.to_state().unwrap();
        assert_eq!(names, vec!["a", "b"]);
        assert_eq!(s2.q, s.q);
        assert_eq!(s2.gm, s.gm);
    }

    #[test]
    fn system_file_rejects_bad_input() {
        let f = SystemFile {
            unit_system: UnitSystem::dimensionless(),
            bodies: vec![BodyEntry {
                name: "solo".into(),
                gm: 1.0,
                q: [0.0; 3],
                v: [0.0; 3],
            }],
        };
        assert!(f.to_state().is_err());
    }
}
