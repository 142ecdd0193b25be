//! Taylor expansions of the (renormalized) flow and of the implicit-midpoint
//! stage map, computed directly from the equations of motion by series
//! arithmetic.
//!
//! This is the independent route against which the majorant constructions
//! are checked: it never touches the `majorants` module. The flow expansion
//! advances degree by degree (coefficient k+1 of the state needs the
//! right-hand side only through degree k); the stage expansion iterates the
//! defining fixed point, which gains one settled degree per sweep.

use crate::error::{Error, Result};
use crate::nbody::{RenormKind, RenormSpec, SystemState};
use crate::series::{TruncatedSeries, VectorSeries};

/// Per-body series of positions and velocities in powers of the integration
/// variable (physical or fictitious time, or the step size for stage maps).
#[derive(Debug, Clone)]
pub struct FlowExpansion {
    pub q: Vec<VectorSeries>,
    pub v: Vec<VectorSeries>,
}

impl FlowExpansion {
    pub fn order(&self) -> usize {
        self.q[0].order()
    }

    pub fn pair_q(&self, i: usize, j: usize) -> VectorSeries {
        self.q[i].sub(&self.q[j]).expect("same shape")
    }

    pub fn pair_v(&self, i: usize, j: usize) -> VectorSeries {
        self.v[i].sub(&self.v[j]).expect("same shape")
    }

    /// q_i − q_i⁰ − t v_i⁰: the deviation from free flight.
    pub fn free_flight_deviation(&self, i: usize) -> VectorSeries {
        let mut d = self.q[i].clone();
        d.coeff_mut(0).fill(0.0);
        if d.order() >= 1 {
            let v0: Vec<f64> = self.v[i].coeff(0).to_vec();
            for (c, v0c) in d.coeff_mut(1).iter_mut().zip(&v0) {
                *c -= v0c;
            }
        }
        d
    }
}

fn pair_r2(q: &[VectorSeries], i: usize, j: usize) -> Result<TruncatedSeries> {
    let d = q[i].sub(&q[j])?;
    d.dot_series(&d)
}

/// Acceleration series g_i(Q) = Σ_{j≠i} gm_j (Q_j−Q_i) ‖Q_i−Q_j‖^{−3}.
fn accel_series(q: &[VectorSeries], gm: &[f64], order: usize) -> Result<Vec<VectorSeries>> {
    let n = q.len();
    let mut out = vec![VectorSeries::zero(3, order); n];
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = q[j].sub(&q[i])?;
            let r2 = d.dot_series(&d)?;
            let w = r2.powf_general(-1.5)?;
            out[i] = out[i].add(&d.mul_scalar(&w)?.scale(gm[j]))?;
        }
    }
    Ok(out)
}

fn int_pow(f: &TruncatedSeries, p: u32) -> Result<TruncatedSeries> {
    let mut out = f.clone();
    for _ in 1..p {
        out = out.mul(f)?;
    }
    Ok(out)
}

/// Series of the renormalization value s(Q, V) along the expanded state.
fn s_series(
    q: &[VectorSeries],
    v: &[VectorSeries],
    state: &SystemState,
    spec: &RenormSpec,
    order: usize,
) -> Result<TruncatedSeries> {
    if spec.kind == RenormKind::Physical {
        return Ok(TruncatedSeries::one(order));
    }
    let n = q.len();
    let p = spec.p;
    let mut total = TruncatedSeries::zero(order);

    let velocity_term = |i: usize, j: usize| -> Result<TruncatedSeries> {
        let dv = v[i].sub(&v[j])?;
        let dv2 = dv.dot_series(&dv)?;
        let inv_r2 = pair_r2(q, i, j)?.powf_general(-1.0)?;
        dv2.mul(&inv_r2)
    };
    let a_series = || -> Result<TruncatedSeries> {
        let mut a = TruncatedSeries::zero(order);
        for i in 0..n {
            for j in i + 1..n {
                let inv_r2 = pair_r2(q, i, j)?.powf_general(-1.0)?;
                a = a.add(&inv_r2.scale(state.gm[i] + state.gm[j]))?;
            }
        }
        Ok(a)
    };

    match spec.kind {
        RenormKind::Original => {
            let mut k_series = vec![TruncatedSeries::zero(order); n];
            for i in 0..n {
                for j in 0..n {
                    if j != i {
                        let inv_r2 = pair_r2(q, i.min(j), i.max(j))?.powf_general(-1.0)?;
                        k_series[i] = k_series[i].add(&inv_r2.scale(state.gm[j]))?;
                    }
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    let m_ij = k_series[i].add(&k_series[j])?;
                    let inv_r = pair_r2(q, i, j)?.powf_general(-0.5)?;
                    total = total.add(&velocity_term(i, j)?)?.add(&m_ij.mul(&inv_r)?)?;
                }
            }
            total.powf_general(-0.5)
        }
        RenormKind::Cheap => {
            let a = a_series()?;
            for i in 0..n {
                for j in i + 1..n {
                    let inv_r = pair_r2(q, i, j)?.powf_general(-0.5)?;
                    total = total.add(&velocity_term(i, j)?)?.add(&a.mul(&inv_r)?)?;
                }
            }
            total.powf_general(-0.5)
        }
        RenormKind::PNorm => {
            let ap = int_pow(&a_series()?, p)?;
            for i in 0..n {
                for j in i + 1..n {
                    let vel_p = int_pow(&velocity_term(i, j)?, p)?;
                    let inv_rp = pair_r2(q, i, j)?
                        .powf_general(-0.5 * p as f64)?
                        .scale(spec.alpha.powi(-(p as i32)));
                    total = total.add(&vel_p)?.add(&ap.mul(&inv_rp)?)?;
                }
            }
            total.powf_general(-0.5 / p as f64)
        }
        RenormKind::Energy => {
            let e0 = spec
                .e0
                .ok_or_else(|| Error::InvalidParameters("energy kind without frozen E0".into()))?;
            let masses = state.masses();
            let mut u = TruncatedSeries::zero(order);
            for i in 0..n {
                for j in i + 1..n {
                    let inv_r = pair_r2(q, i, j)?.powf_general(-0.5)?;
                    u = u.add(&inv_r.scale(state.g_const * masses[i] * masses[j]))?;
                }
            }
            let eu_p = int_pow(&u.add_constant(e0), p)?;
            let mut first = TruncatedSeries::zero(order);
            let mut second = TruncatedSeries::zero(order);
            for i in 0..n {
                for j in i + 1..n {
                    let w = masses[i].powf(-0.5) + masses[j].powf(-0.5);
                    let inv_r2p = pair_r2(q, i, j)?.powf_general(-(p as f64))?;
                    first = first.add(&inv_r2p.scale(4.0 * w.powi(2 * p as i32)))?;
                    second = second.add(&pair_r2(q, i, j)?.powf_general(-0.5 * p as f64)?)?;
                }
            }
            let ap = int_pow(&a_series()?, p)?;
            total = eu_p
                .mul(&first)?
                .add(&ap.mul(&second.scale(spec.alpha.powi(-(p as i32))))?)?;
            total.powf_general(-0.5 / p as f64)
        }
        RenormKind::Physical => unreachable!(),
    }
}

fn initial_expansion(state: &SystemState, order: usize) -> FlowExpansion {
    let q = state
        .q
        .iter()
        .map(|qi| VectorSeries::constant(qi.to_vec(), order))
        .collect();
    let v = state
        .v
        .iter()
        .map(|vi| VectorSeries::constant(vi.to_vec(), order))
        .collect();
    FlowExpansion { q, v }
}

/// Taylor expansion of the flow of dQ/dτ = s·V, dV/dτ = s·g(Q) around the
/// given state (physical time when the renormalization is the physical kind).
pub fn flow_taylor(state: &SystemState, spec: &RenormSpec, order: usize) -> Result<FlowExpansion> {
    state.check_regular()?;
    let n = state.n();
    let mut exp = initial_expansion(state, order);
    for k in 0..order {
        let s = s_series(&exp.q, &exp.v, state, spec, order)?;
        let g = accel_series(&exp.q, &state.gm, order)?;
        for i in 0..n {
            let dq = exp.v[i].mul_scalar(&s)?;
            let dv = g[i].mul_scalar(&s)?;
            let div = (k + 1) as f64;
            for c in 0..3 {
                exp.q[i].coeff_mut(k + 1)[c] = dq.coeff(k)[c] / div;
                exp.v[i].coeff_mut(k + 1)[c] = dv.coeff(k)[c] / div;
            }
        }
    }
    Ok(exp)
}

/// Series, in powers of the step size, of the implicit-midpoint stage values
/// (Q̂, V̂) = ((q⁰+Q̃)/2, (v⁰+Ṽ)/2): the fixed point of
/// Q̂ = q⁰ + (τ/2) s(Q̂,V̂) V̂, V̂ = v⁰ + (τ/2) s(Q̂,V̂) g(Q̂).
pub fn midpoint_stage_taylor(
    state: &SystemState,
    spec: &RenormSpec,
    order: usize,
) -> Result<FlowExpansion> {
    state.check_regular()?;
    let n = state.n();
    let mut exp = initial_expansion(state, order);
    for _ in 0..=order {
        let s = s_series(&exp.q, &exp.v, state, spec, order)?;
        let g = accel_series(&exp.q, &state.gm, order)?;
        let mut next = initial_expansion(state, order);
        for i in 0..n {
            let sq = exp.v[i].mul_scalar(&s)?;
            let sg = g[i].mul_scalar(&s)?;
            for k in 0..order {
                for c in 0..3 {
                    next.q[i].coeff_mut(k + 1)[c] = 0.5 * sq.coeff(k)[c];
                    next.v[i].coeff_mut(k + 1)[c] = 0.5 * sg.coeff(k)[c];
                }
            }
            // constant terms stay at the initial state
            for c in 0..3 {
                next.q[i].coeff_mut(0)[c] = state.q[i][c];
                next.v[i].coeff_mut(0)[c] = state.v[i][c];
            }
        }
        exp = next;
    }
    Ok(exp)
}
