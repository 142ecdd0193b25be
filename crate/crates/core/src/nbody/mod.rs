//! The gravitational N-body vector field, pairwise scale quantities, and the
//! time-renormalization functions.
//!
//! Positions and velocities are plain `[f64; 3]`. Gravitational parameters
//! gm_i = G·m_i are the stored per-body quantities (ephemeris sources publish
//! GM and every force formula uses the product); individual masses are
//! recovered through the system's `g_const` where a formula genuinely needs
//! them (energy-based renormalization, barycenter reduction).

pub mod presets;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

#[inline]
pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

#[inline]
pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn axpy3(y: &mut Vec3, a: f64, x: &Vec3) {
    y[0] += a * x[0];
    y[1] += a * x[1];
    y[2] += a * x[2];
}

/// Newtonian gravitational constant in AU³/day²/M_sun (from the Gaussian
/// gravitational constant k = 0.01720209895, G = k²).
pub const G_AU_DAY_MSUN: f64 = 2.9591220828559115e-4;

/// Default minimum pairwise separation before a configuration is reported
/// as singular.
pub const DEFAULT_MIN_SEPARATION: f64 = 1e-30;

/// Masses, positions and velocities of N ≥ 2 bodies, plus the physical time
/// accumulated along a renormalized trajectory.
///
/// Bodies with gm = 0 are test particles: they feel gravity but exert none;
/// the energy-based renormalization rejects them since its weights carry
/// m^{-1/2}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemState {
    /// gravitational parameters G·m_i (length³/time²)
    pub gm: Vec<f64>,
    /// positions (length)
    pub q: Vec<Vec3>,
    /// velocities (length/time)
    pub v: Vec<Vec3>,
    /// accumulated physical time; meaningful along renormalized trajectories
    #[serde(default)]
    pub t_phys: f64,
    /// gravitational constant linking gm to mass
    #[serde(default = "default_g")]
    pub g_const: f64,
    /// singular-configuration guard on pairwise separations
    #[serde(default = "default_min_sep")]
    pub min_separation: f64,
}

fn default_g() -> f64 {
    G_AU_DAY_MSUN
}

fn default_min_sep() -> f64 {
    DEFAULT_MIN_SEPARATION
}

impl SystemState {
    /// New state with G = 1 units.
    pub fn new(gm: Vec<f64>, q: Vec<Vec3>, v: Vec<Vec3>) -> Result<Self> {
        let state = SystemState {
            gm,
            q,
            v,
            t_phys: 0.0,
            g_const: 1.0,
            min_separation: DEFAULT_MIN_SEPARATION,
        };
        state.validate()?;
        Ok(state)
    }

    pub fn n(&self) -> usize {
        self.gm.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.gm.len();
        if n < 2 {
            return Err(Error::InvalidSystem(format!(
                "need at least 2 bodies, got {n}"
            )));
        }
        if self.q.len() != n || self.v.len() != n {
            return Err(Error::InvalidSystem(format!(
                "lengths disagree: {} gm, {} q, {} v",
                n,
                self.q.len(),
                self.v.len()
            )));
        }
        if self.gm.iter().any(|g| !g.is_finite() || *g < 0.0) {
            return Err(Error::InvalidSystem("gm must be finite and >= 0".into()));
        }
        if self.gm.iter().all(|g| *g == 0.0) {
            return Err(Error::InvalidSystem(
                "at least one body needs gm > 0".into(),
            ));
        }
        if !(self.g_const > 0.0) {
            return Err(Error::InvalidSystem("g_const must be positive".into()));
        }
        Ok(())
    }

    /// Individual masses gm_i / G.
    pub fn masses(&self) -> Vec<f64> {
        self.gm.iter().map(|g| g / self.g_const).collect()
    }

    /// Errors out when any pair sits below the minimum-separation guard.
    pub fn check_regular(&self) -> Result<()> {
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                let d = norm3(&sub3(&self.q[i], &self.q[j]));
                if !(d > self.min_separation) {
                    return Err(Error::SingularConfiguration {
                        i,
                        j,
                        separation: d,
                    });
                }
            }
        }
        Ok(())
    }

    /// Total angular momentum Σ m_i q_i × v_i (units with G folded out).
    pub fn angular_momentum(&self) -> Vec3 {
        let mut l = [0.0; 3];
        for i in 0..self.n() {
            let c = cross3(&self.q[i], &self.v[i]);
            axpy3(&mut l, self.gm[i] / self.g_const, &c);
        }
        l
    }

    /// Kinetic + potential energy.
    pub fn total_energy(&self) -> Result<f64> {
        let pw = pairwise_quantities(self)?;
        Ok(pw.energy)
    }
}

/// Pairwise accelerations g_i = Σ_{j≠i} gm_j (q_j − q_i)/‖q_i − q_j‖³.
///
/// The inner sum runs in a fixed body order so results are bit-reproducible.
pub fn accelerations(state: &SystemState) -> Result<Vec<Vec3>> {
    state.check_regular()?;
    let n = state.n();
    let mut acc = vec![[0.0; 3]; n];
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = sub3(&state.q[j], &state.q[i]);
            let r2 = dot3(&d, &d);
            let w = state.gm[j] / (r2 * r2.sqrt());
            axpy3(&mut acc[i], w, &d);
        }
    }
    Ok(acc)
}

/// The scale quantities entering the majorant bounds and renormalizations.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairwiseQuantities {
    /// K_i = Σ_{j≠i} gm_j/‖q_i−q_j‖² (length/time²)
    pub k_i: Vec<f64>,
    /// M_ij = K_i + K_j (symmetric, zero diagonal)
    pub m_ij: Vec<Vec<f64>>,
    /// A = Σ_{i<j} (gm_i+gm_j)/‖q_i−q_j‖²; M_ij ≤ A for every pair
    pub a_total: f64,
    /// potential U = G Σ_{i<j} m_i m_j/‖q_i−q_j‖
    pub potential: f64,
    /// total energy E = ½ Σ m_i ‖v_i‖² − U
    pub energy: f64,
    /// μ = max ‖v_i−v_j‖/‖q_i−q_j‖
    pub mu: f64,
    /// ν = max M_ij/‖q_i−q_j‖
    pub nu: f64,
    /// η₀ = μ²/(μ²+ν)
    pub eta0: f64,
}

pub fn pairwise_quantities(state: &SystemState) -> Result<PairwiseQuantities> {
    state.check_regular()?;
    let n = state.n();
    let masses = state.masses();
    let mut k_i = vec![0.0; n];
    let mut a_total = 0.0;
    let mut potential = 0.0;
    let mut mu = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let r = norm3(&sub3(&state.q[i], &state.q[j]));
            k_i[i] += state.gm[j] / (r * r);
            if j > i {
                a_total += (state.gm[i] + state.gm[j]) / (r * r);
                potential += state.g_const * masses[i] * masses[j] / r;
                let dv = norm3(&sub3(&state.v[i], &state.v[j]));
                mu = mu.max(dv / r);
            }
        }
    }
    let mut m_ij = vec![vec![0.0; n]; n];
    let mut nu = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if j != i {
                m_ij[i][j] = k_i[i] + k_i[j];
            }
        }
        for j in i + 1..n {
            let r = norm3(&sub3(&state.q[i], &state.q[j]));
            nu = nu.max(m_ij[i][j] / r);
        }
    }
    let kinetic: f64 = (0..n)
        .map(|i| 0.5 * masses[i] * dot3(&state.v[i], &state.v[i]))
        .sum();
    Ok(PairwiseQuantities {
        k_i,
        m_ij,
        a_total,
        potential,
        energy: kinetic - potential,
        mu,
        nu,
        eta0: mu * mu / (mu * mu + nu),
    })
}

/// Which time-renormalization function drives dτ/dt.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenormKind {
    /// pairwise velocity/curvature sums, the reference choice
    Original,
    /// same with M_ij replaced by its uniform bound A(q)
    Cheap,
    /// 2p-norm variant with slack factor α
    PNorm,
    /// velocity-free variant driven by E₀ + U(q)
    Energy,
    /// s ≡ 1: integrate in physical time
    Physical,
}

/// Renormalization choice plus its parameters. For the energy kind, E₀ is
/// frozen at trajectory start and never recomputed.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RenormSpec {
    pub kind: RenormKind,
    /// half the norm exponent (pnorm/energy)
    pub p: u32,
    /// slack factor in s² ≤ α‖Δq‖/M_ij (pnorm/energy)
    pub alpha: f64,
    /// frozen total energy (energy kind)
    pub e0: Option<f64>,
}

impl RenormSpec {
    pub fn original() -> Self {
        RenormSpec {
            kind: RenormKind::Original,
            p: 2,
            alpha: 3.0,
            e0: None,
        }
    }

    pub fn cheap() -> Self {
        RenormSpec {
            kind: RenormKind::Cheap,
            ..Self::original()
        }
    }

    /// Suggested defaults are p = 2, α = 3.
    pub fn pnorm(p: u32, alpha: f64) -> Result<Self> {
        if p < 1 || !(alpha > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "pnorm needs p >= 1 and alpha > 0, got p = {p}, alpha = {alpha}"
            )));
        }
        Ok(RenormSpec {
            kind: RenormKind::PNorm,
            p,
            alpha,
            e0: None,
        })
    }

    /// Energy-based kind with E₀ frozen from the given state.
    pub fn energy(p: u32, alpha: f64, state: &SystemState) -> Result<Self> {
        if p < 1 || !(alpha > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "energy kind needs p >= 1 and alpha > 0, got p = {p}, alpha = {alpha}"
            )));
        }
        if state.gm.contains(&0.0) {
            return Err(Error::InvalidParameters(
                "energy kind is undefined for massless bodies".into(),
            ));
        }
        let pw = pairwise_quantities(state)?;
        if pw.energy + pw.potential <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "energy kind needs E0 + U(q0) > 0, got {}",
                pw.energy + pw.potential
            )));
        }
        Ok(RenormSpec {
            kind: RenormKind::Energy,
            p,
            alpha,
            e0: Some(pw.energy),
        })
    }

    pub fn physical() -> Self {
        RenormSpec {
            kind: RenormKind::Physical,
            ..Self::original()
        }
    }
}

/// Value of the time-renormalization function s at a state.
pub fn renorm_s(state: &SystemState, spec: &RenormSpec) -> Result<f64> {
    if spec.kind == RenormKind::Physical {
        return Ok(1.0);
    }
    state.check_regular()?;
    let n = state.n();
    let pw = pairwise_quantities(state)?;
    let p = spec.p as i32;
    let mut sum = 0.0;
    match spec.kind {
        RenormKind::Original => {
            for i in 0..n {
                for j in i + 1..n {
                    let r = norm3(&sub3(&state.q[i], &state.q[j]));
                    let dv = norm3(&sub3(&state.v[i], &state.v[j]));
                    sum += (dv / r).powi(2) + pw.m_ij[i][j] / r;
                }
            }
            Ok(sum.powf(-0.5))
        }
        RenormKind::Cheap => {
            for i in 0..n {
                for j in i + 1..n {
                    let r = norm3(&sub3(&state.q[i], &state.q[j]));
                    let dv = norm3(&sub3(&state.v[i], &state.v[j]));
                    sum += (dv / r).powi(2) + pw.a_total / r;
                }
            }
            Ok(sum.powf(-0.5))
        }
        RenormKind::PNorm => {
            for i in 0..n {
                for j in i + 1..n {
                    let r = norm3(&sub3(&state.q[i], &state.q[j]));
                    let dv = norm3(&sub3(&state.v[i], &state.v[j]));
                    sum += (dv / r).powi(2 * p) + (pw.a_total / (spec.alpha * r)).powi(p);
                }
            }
            Ok(sum.powf(-0.5 / p as f64))
        }
        RenormKind::Energy => {
            let e0 = spec
                .e0
                .ok_or_else(|| Error::InvalidParameters("energy kind without frozen E0".into()))?;
            if state.gm.contains(&0.0) {
                return Err(Error::InvalidParameters(
                    "energy kind is undefined for massless bodies".into(),
                ));
            }
            let eu = e0 + pw.potential;
            if eu <= 0.0 {
                return Err(Error::InvalidParameters(format!(
                    "energy kind needs E0 + U(q) > 0, got {eu}"
                )));
            }
            let masses = state.masses();
            let mut first = 0.0;
            let mut second = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    let r = norm3(&sub3(&state.q[i], &state.q[j]));
                    let w = masses[i].powf(-0.5) + masses[j].powf(-0.5);
                    first += 4.0 * w.powi(2 * p) / r.powi(2 * p);
                    second += 1.0 / r.powi(p);
                }
            }
            sum = eu.powi(p) * first + pw.a_total.powi(p) / spec.alpha.powi(p) * second;
            Ok(sum.powf(-0.5 / p as f64))
        }
        RenormKind::Physical => unreachable!(),
    }
}

/// Derivative of the augmented state (Q, V, t_phys) with respect to the
/// integration variable: (s·V, s·g(Q), s). With the physical kind this is
/// the plain vector field and dt_phys/dτ = 1.
#[derive(Debug, Clone)]
pub struct StateDerivative {
    pub dq: Vec<Vec3>,
    pub dv: Vec<Vec3>,
    pub dt_phys: f64,
}

pub fn rhs(state: &SystemState, spec: &RenormSpec) -> Result<StateDerivative> {
    let s = renorm_s(state, spec)?;
    let acc = accelerations(state)?;
    let dq = state
        .v
        .iter()
        .map(|vi| [s * vi[0], s * vi[1], s * vi[2]])
        .collect();
    let dv = acc
        .iter()
        .map(|gi| [s * gi[0], s * gi[1], s * gi[2]])
        .collect();
    Ok(StateDerivative { dq, dv, dt_phys: s })
}

/// Shift positions and velocities so the center of mass sits at the origin
/// at rest. Mass weights are gm-proportional, so G cancels.
pub fn reduce_to_barycenter(state: &SystemState) -> Result<SystemState> {
    let total: f64 = state.gm.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidSystem("total mass must be positive".into()));
    }
    let mut qc = [0.0; 3];
    let mut vc = [0.0; 3];
    for i in 0..state.n() {
        axpy3(&mut qc, state.gm[i] / total, &state.q[i]);
        axpy3(&mut vc, state.gm[i] / total, &state.v[i]);
    }
    let mut out = state.clone();
    for i in 0..out.n() {
        out.q[i] = sub3(&out.q[i], &qc);
        out.v[i] = sub3(&out.v[i], &vc);
    }
    Ok(out)
}
