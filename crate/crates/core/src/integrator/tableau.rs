//! Butcher tableaus for Gauss–Legendre collocation.
//!
//! Nodes are Legendre roots found by Newton iteration and the collocation
//! matrix comes from the order conditions, both in double-double arithmetic;
//! nothing beyond the one-stage midpoint tableau is hardcoded.

use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RKTableau {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    /// classical order (2s for Gauss collocation)
    pub order: usize,
}

impl RKTableau {
    pub fn stages(&self) -> usize {
        self.b.len()
    }

    /// ‖A‖∞: max absolute row sum.
    pub fn norm_a_inf(&self) -> f64 {
        self.a
            .iter()
            .map(|row| row.iter().map(|x| x.abs()).sum())
            .fold(0.0, f64::max)
    }

    pub fn norm_b_inf(&self) -> f64 {
        self.b.iter().map(|x| x.abs()).fold(0.0, f64::max)
    }

    /// max_i |c_i − Σ_j a_ij|.
    pub fn row_sum_defect(&self) -> f64 {
        self.a
            .iter()
            .zip(&self.c)
            .map(|(row, c)| (row.iter().sum::<f64>() - c).abs())
            .fold(0.0, f64::max)
    }

    /// max_ij |b_i a_ij + b_j a_ji − b_i b_j|; zero for methods preserving
    /// quadratic invariants.
    pub fn symplecticity_defect(&self) -> f64 {
        let s = self.stages();
        let mut worst = 0.0f64;
        for i in 0..s {
            for j in 0..s {
                worst = worst.max(
                    (self.b[i] * self.a[i][j] + self.b[j] * self.a[j][i] - self.b[i] * self.b[j])
                        .abs(),
                );
            }
        }
        worst
    }

    /// The implicit midpoint rule: one-stage Gauss collocation.
    pub fn midpoint() -> Self {
        RKTableau {
            a: vec![vec![0.5]],
            b: vec![1.0],
            c: vec![0.5],
            order: 2,
        }
    }
}

/// Legendre polynomial value and derivative at x, degree n, in
/// double-double arithmetic.
fn legendre(n: usize, x: TwoFloat) -> (TwoFloat, TwoFloat) {
    let mut p0 = TwoFloat::from(1.0);
    let mut p1 = x;
    if n == 0 {
        return (p0, TwoFloat::from(0.0));
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // P'_n = n (x P_n − P_{n−1}) / (x² − 1)
    let dp = (x * p1 - p0) * (n as f64) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss–Legendre collocation tableau with the given stage count
/// (order 2s). Stage 1 is the implicit midpoint rule exactly.
pub fn gauss_tableau(stages: usize) -> Result<RKTableau> {
    if stages == 0 || stages > 8 {
        return Err(Error::UnsupportedStages(stages));
    }
    if stages == 1 {
        return Ok(RKTableau::midpoint());
    }
    let n = stages;
    // roots of P_n on (−1,1), Newton from the Chebyshev-like initial guess
    let mut roots = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 1..=n {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = TwoFloat::from(guess);
        for _ in 0..30 {
            let (p, dp) = legendre(n, x);
            let step = p / dp;
            x -= step;
            if step.abs() < TwoFloat::from(1e-31) {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = TwoFloat::from(2.0) / ((TwoFloat::from(1.0) - x * x) * dp * dp);
        roots.push(x);
        weights.push(w);
    }
    // shift to [0,1], ascending nodes
    let mut cw: Vec<(TwoFloat, TwoFloat)> = roots
        .into_iter()
        .zip(weights)
        .map(|(x, w)| ((x + 1.0) / 2.0, w / 2.0))
        .collect();
    cw.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let c: Vec<TwoFloat> = cw.iter().map(|p| p.0).collect();
    let b: Vec<TwoFloat> = cw.iter().map(|p| p.1).collect();

    // collocation conditions: Σ_j a_ij c_j^{k-1} = c_i^k / k, k = 1..s
    let mut a = vec![vec![TwoFloat::from(0.0); n]; n];
    for i in 0..n {
        let mut m = vec![vec![TwoFloat::from(0.0); n]; n];
        let mut rhs = vec![TwoFloat::from(0.0); n];
        for k in 0..n {
            for (j, cj) in c.iter().enumerate() {
                m[k][j] = powi_dd(*cj, k);
            }
            rhs[k] = powi_dd(c[i], k + 1) / (k as f64 + 1.0);
        }
        let sol = solve_dd(m, rhs)?;
        a[i] = sol;
    }

    let tab = RKTableau {
        a: a.iter()
            .map(|row| row.iter().map(|x| x.hi() + x.lo()).collect())
            .collect(),
        b: b.iter().map(|x| x.hi() + x.lo()).collect(),
        c: c.iter().map(|x| x.hi() + x.lo()).collect(),
        order: 2 * stages,
    };
    if tab.row_sum_defect() > 1e-14 || (tab.b.iter().sum::<f64>() - 1.0).abs() > 1e-14 {
        return Err(Error::InternalConsistency(format!(
            "gauss tableau with {stages} stages fails collocation consistency"
        )));
    }
    if tab.symplecticity_defect() > 1e-14 {
        return Err(Error::InternalConsistency(format!(
            "gauss tableau with {stages} stages fails the quadratic-invariant identity"
        )));
    }
    Ok(tab)
}

fn powi_dd(x: TwoFloat, k: usize) -> TwoFloat {
    let mut out = TwoFloat::from(1.0);
    for _ in 0..k {
        out *= x;
    }
    out
}

/// Gaussian elimination with partial pivoting in double-double arithmetic.
fn solve_dd(mut m: Vec<Vec<TwoFloat>>, mut b: Vec<TwoFloat>) -> Result<Vec<TwoFloat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                m[i][col]
                    .abs()
                    .partial_cmp(&m[j][col].abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap();
        if m[piv][col].abs() == TwoFloat::from(0.0) {
            return Err(Error::InternalConsistency(
                "singular collocation matrix".into(),
            ));
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let sub = f * m[col][k];
                m[row][k] -= sub;
            }
            let sub = f * b[col];
            b[row] -= sub;
        }
    }
    let mut x = vec![TwoFloat::from(0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            let sub = m[row][k] * x[k];
            acc -= sub;
        }
        x[row] = acc / m[row][row];
    }
    Ok(x)
}
