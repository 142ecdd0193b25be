//! Truncated formal power series with the coefficientwise majorant order.
//!
//! A [`TruncatedSeries`] holds real coefficients c_0..c_K of a series in one
//! variable, truncated at degree K (inclusive). A [`VectorSeries`] holds
//! coefficients in R^d. Both are immutable: every operation is a pure
//! function returning a fresh value, so series can be shared freely across
//! threads.
//!
//! A series f is *majored* by a scalar series g when ‖f_k‖ ≤ g_k for every
//! degree k; [`TruncatedSeries::dominated_by`] and
//! [`VectorSeries::dominated_by`] test that order with a configurable
//! floating-point slack.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default truncation degree used by the majorant constructions.
pub const DEFAULT_ORDER: usize = 60;

/// Comparison slack for the majorant order: coefficient k of the candidate
/// may exceed the bound by `rel * max(1, bound_k)`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DominanceSlack {
    pub rel: f64,
}

impl Default for DominanceSlack {
    fn default() -> Self {
        DominanceSlack { rel: 1e-12 }
    }
}

impl DominanceSlack {
    pub fn new(rel: f64) -> Self {
        DominanceSlack { rel }
    }

    #[inline]
    fn tol(&self, bound_k: f64) -> f64 {
        self.rel * bound_k.abs().max(1.0)
    }
}

/// Scalar formal power series truncated at a fixed degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Build from coefficients c_0..c_K. Must be non-empty.
    pub fn new(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the constant term"
        );
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![0.0; order + 1],
        }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = c;
        TruncatedSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(1.0, order)
    }

    /// Truncation degree K (inclusive).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut f64 {
        &mut self.coeffs[k]
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Cauchy product truncated at the common degree.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        for (l, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..=l {
                acc += rhs.coeffs[j] * self.coeffs[l - j];
            }
            *slot = acc;
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Real power f^nu via the triangular recurrence
    /// p_k = (1/k) Σ_{j<k} ((k−j)ν − j) f_{k−j} p_j, valid when f_0 = 1.
    pub fn powf(&self, nu: f64) -> Result<Self> {
        if self.coeffs[0] != 1.0 {
            return Err(Error::Normalization {
                got: self.coeffs[0],
            });
        }
        let k_ord = self.order();
        let mut p = vec![0.0; k_ord + 1];
        p[0] = 1.0;
        for k in 1..=k_ord {
            let mut acc = 0.0;
            for j in 0..k {
                let kj = (k - j) as f64;
                acc += (kj * nu - j as f64) * self.coeffs[k - j] * p[j];
            }
            p[k] = acc / k as f64;
        }
        Ok(TruncatedSeries { coeffs: p })
    }

    /// f^nu for an arbitrary positive constant term: factors out f_0.
    pub fn powf_general(&self, nu: f64) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0 <= 0.0 {
            return Err(Error::InvalidParameters(format!(
                "powf_general needs a positive constant term, got {c0}"
            )));
        }
        let normalized = TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| c / c0).collect(),
        };
        let mut out = normalized.powf(nu)?;
        let scale = c0.powf(nu);
        for c in &mut out.coeffs {
            *c *= scale;
        }
        Ok(out)
    }

    /// Termwise derivative; the result keeps the same truncation degree with
    /// a zero top coefficient.
    pub fn derivative(&self) -> Self {
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        for j in 0..k {
            out[j] = (j + 1) as f64 * self.coeffs[j + 1];
        }
        TruncatedSeries { coeffs: out }
    }

    /// Termwise antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        for j in 1..=k {
            out[j] = self.coeffs[j - 1] / j as f64;
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: f64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| c * x).collect(),
        }
    }

    /// Adds a constant to the constant term.
    pub fn add_constant(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[0] += c;
        out
    }

    /// 2 − f: negate every coefficient, add 2 to the constant term. With
    /// f_0 = 1 the result has unit constant term, as `powf` requires.
    pub fn two_minus(&self) -> Self {
        let mut out = self.scale(-1.0);
        out.coeffs[0] += 2.0;
        out
    }

    /// Multiply by the series variable (shift degrees up by one, dropping
    /// the top coefficient).
    pub fn shift_up(&self) -> Self {
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        out[1..=k].copy_from_slice(&self.coeffs[0..k]);
        TruncatedSeries { coeffs: out }
    }

    /// True iff ‖f_k‖ ≤ g_k + slack for every degree.
    pub fn dominated_by(&self, bound: &Self, slack: DominanceSlack) -> Result<bool> {
        self.check_order(bound)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&bound.coeffs)
            .all(|(f, g)| f.abs() <= g + slack.tol(*g)))
    }

    /// True iff every coefficient is ≥ −slack.
    pub fn is_nonnegative(&self, slack: DominanceSlack) -> bool {
        self.coeffs.iter().all(|c| *c >= -slack.tol(*c))
    }

    /// Horner evaluation at t.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    /// Σ_{k=from}^{K} c_k t^k, evaluated by Horner on the tail.
    pub fn eval_tail(&self, t: f64, from: usize) -> f64 {
        if from > self.order() {
            return 0.0;
        }
        let tail = self.coeffs[from..]
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + c);
        tail * t.powi(from as i32)
    }

    /// Copy truncated (or zero-padded) to a new degree.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        TruncatedSeries { coeffs }
    }

    /// Largest ratio c_{k+1}/c_k over the top `window` coefficient pairs
    /// with nonzero denominators. Used for geometric tail safeguards.
    pub fn tail_growth_ratio(&self, window: usize) -> Option<f64> {
        let k = self.order();
        let lo = k.saturating_sub(window);
        let mut best: Option<f64> = None;
        for j in lo..k {
            if self.coeffs[j] != 0.0 {
                let r = (self.coeffs[j + 1] / self.coeffs[j]).abs();
                best = Some(best.map_or(r, |b: f64| b.max(r)));
            }
        }
        best
    }
}

/// Power series with coefficients in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorSeries {
    coeffs: Vec<Vec<f64>>,
    dim: usize,
}

impl VectorSeries {
    pub fn new(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameters(
                "a vector series needs at least the constant term".into(),
            ));
        }
        let dim = coeffs[0].len();
        if let Some(bad) = coeffs.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        Ok(VectorSeries { coeffs, dim })
    }

    pub fn zero(dim: usize, order: usize) -> Self {
        VectorSeries {
            coeffs: vec![vec![0.0; dim]; order + 1],
            dim,
        }
    }

    pub fn constant(c: Vec<f64>, order: usize) -> Self {
        let dim = c.len();
        let mut coeffs = vec![vec![0.0; dim]; order + 1];
        coeffs[0] = c;
        VectorSeries { coeffs, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &[f64] {
        &self.coeffs[k]
    }

    pub fn coeff_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.coeffs[k]
    }

    fn check_order(&self, other_order: usize) -> Result<()> {
        if self.order() != other_order {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other_order,
            });
        }
        Ok(())
    }

    /// Product with a scalar series (Cauchy product in each component).
    pub fn mul_scalar(&self, rhs: &TruncatedSeries) -> Result<Self> {
        self.check_order(rhs.order())?;
        let k = self.order();
        let mut out = vec![vec![0.0; self.dim]; k + 1];
        for (l, slot) in out.iter_mut().enumerate() {
            for j in 0..=l {
                let b = rhs.coeff(j);
                for (s, a) in slot.iter_mut().zip(&self.coeffs[l - j]) {
                    *s += b * a;
                }
            }
        }
        Ok(VectorSeries {
            coeffs: out,
            dim: self.dim,
        })
    }

    /// Series of the inner product ⟨f, g⟩; with g = f this is the series
    /// of ‖f‖².
    pub fn dot_series(&self, rhs: &Self) -> Result<TruncatedSeries> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        self.check_order(rhs.order())?;
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        for (l, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..=l {
                acc += dot(&self.coeffs[j], &rhs.coeffs[l - j]);
            }
            *slot = acc;
        }
        Ok(TruncatedSeries::new(out))
    }

    pub fn norm_sq_series(&self) -> TruncatedSeries {
        self.dot_series(self).expect("same series")
    }

    pub fn derivative(&self) -> Self {
        let k = self.order();
        let mut out = vec![vec![0.0; self.dim]; k + 1];
        for j in 0..k {
            for (o, c) in out[j].iter_mut().zip(&self.coeffs[j + 1]) {
                *o = (j + 1) as f64 * c;
            }
        }
        VectorSeries {
            coeffs: out,
            dim: self.dim,
        }
    }

    pub fn antiderivative(&self) -> Self {
        let k = self.order();
        let mut out = vec![vec![0.0; self.dim]; k + 1];
        for j in 1..=k {
            for (o, c) in out[j].iter_mut().zip(&self.coeffs[j - 1]) {
                *o = c / j as f64;
            }
        }
        VectorSeries {
            coeffs: out,
            dim: self.dim,
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        self.check_order(rhs.order())?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        Ok(VectorSeries {
            coeffs,
            dim: self.dim,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.scale(-1.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        VectorSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|v| v.iter().map(|x| c * x).collect())
                .collect(),
            dim: self.dim,
        }
    }

    /// Euclidean norms of the coefficients, as a plain vector.
    pub fn coeff_norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| norm(c)).collect()
    }

    /// True iff ‖f_k‖ ≤ g_k + slack for every degree (Euclidean norm).
    pub fn dominated_by(&self, bound: &TruncatedSeries, slack: DominanceSlack) -> Result<bool> {
        self.check_order(bound.order())?;
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .all(|(k, c)| norm(c) <= bound.coeff(k) + slack.tol(bound.coeff(k))))
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut acc = vec![0.0; self.dim];
        for c in self.coeffs.iter().rev() {
            for (a, x) in acc.iter_mut().zip(c) {
                *a = *a * t + x;
            }
        }
        acc
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(v: &[f64]) -> TruncatedSeries {
        TruncatedSeries::new(v.to_vec())
    }

    #[test]
    fn mul_binomial() {
        let a = ts(&[1.0, 1.0, 0.0]);
        let p = a.mul(&a).unwrap();
        assert_eq!(p.coeffs(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn mul_identity() {
        let a = ts(&[3.0, -1.0, 2.5, 0.25]);
        let one = TruncatedSeries::one(3);
        assert_eq!(a.mul(&one).unwrap(), a);
    }

    #[test]
    fn mul_vector_by_scalar() {
        let f = VectorSeries::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = ts(&[0.0, 2.0, 0.0]);
        let p = f.mul_scalar(&b).unwrap();
        assert_eq!(p.coeff(0), &[0.0, 0.0]);
        assert_eq!(p.coeff(1), &[2.0, 0.0]);
        assert_eq!(p.coeff(2), &[0.0, 2.0]);
    }

    #[test]
    fn mul_order_mismatch() {
        let a = ts(&[1.0, 1.0]);
        let b = ts(&[1.0, 1.0, 1.0]);
        assert!(matches!(
            a.mul(&b),
            Err(Error::OrderMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn pow_square_and_geometric() {
        let f = ts(&[1.0, 1.0, 0.0, 0.0]);
        let sq = f.powf(2.0).unwrap();
        assert_eq!(sq.coeffs(), &[1.0, 2.0, 1.0, 0.0]);
        let inv = f.powf(-1.0).unwrap();
        assert_eq!(inv.coeffs(), &[1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn pow_binomial_minus_three_halves() {
        // (1+t)^(-3/2): generalized binomial coefficients
        // C(-3/2,1) = -3/2, C(-3/2,2) = (-3/2)(-5/2)/2 = 15/8
        let f = ts(&[1.0, 1.0, 0.0]);
        let p = f.powf(-1.5).unwrap();
        assert!((p.coeff(1) + 1.5).abs() < 1e-15);
        assert!((p.coeff(2) - 15.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn pow_rejects_nonunit_constant() {
        let f = ts(&[2.0, 1.0]);
        assert!(matches!(f.powf(0.5), Err(Error::Normalization { .. })));
    }

    #[test]
    fn calculus_examples() {
        let f = ts(&[1.0, 1.0, 1.0]);
        assert_eq!(f.derivative().coeffs(), &[1.0, 2.0, 0.0]);
        let one = TruncatedSeries::one(2);
        assert_eq!(one.antiderivative().coeffs(), &[0.0, 1.0, 0.0]);
        // derivative then antiderivative recovers a zero-constant polynomial
        let g = ts(&[0.0, 2.0, -3.0, 0.5]);
        let back = g.derivative().antiderivative();
        // derivative loses the top coefficient to padding, so compare below it
        assert_eq!(&back.coeffs()[..3], &g.coeffs()[..3]);
    }

    #[test]
    fn dominates_examples() {
        let slack = DominanceSlack::default();
        let f = ts(&[1.0, 1.0]);
        assert!(f.dominated_by(&f, slack).unwrap());
        let g = ts(&[1.0, 2.0]);
        assert!(!g.dominated_by(&f, slack).unwrap());
        // ‖(3,4)‖ = 5
        let v = VectorSeries::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let bound = ts(&[0.0, 5.0]);
        assert!(v.dominated_by(&bound, slack).unwrap());
    }

    #[test]
    fn dot_series_orthogonal_coefficients() {
        let f = VectorSeries::new(vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let n = f.norm_sq_series();
        assert_eq!(n.coeffs(), &[1.0, 0.0, 1.0]);
        let c = VectorSeries::constant(vec![0.6, 0.8], 2);
        assert!((c.norm_sq_series().coeff(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dot_series_dimension_mismatch() {
        let f = VectorSeries::zero(2, 1);
        let g = VectorSeries::zero(3, 1);
        assert!(matches!(
            f.dot_series(&g),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eval_tail_matches_direct_sum() {
        let f = ts(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        let t: f64 = 0.3;
        let direct: f64 = (2..=4).map(|k| f.coeff(k) * t.powi(k as i32)).sum();
        assert!((f.eval_tail(t, 2) - direct).abs() < 1e-15);
        assert_eq!(f.eval_tail(t, 9), 0.0);
    }

    #[test]
    fn serde_round_trip_is_plain_array() {
        let f = ts(&[1.0, 0.5]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, "[1.0,0.5]");
        let back: TruncatedSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
