//! Certified convergence radii.
//!
//! * `radius_r(eta0)` — radius of the physical-time profile λ, as the
//!   integral of an explicit function over (0, √2−1).
//! * `radius_r_hat(eta0)` — the earlier supremum-form estimate; always
//!   below `radius_r`.
//! * `radius_flow(tol)` — the universal strip half-width R of the
//!   renormalized flow, as an integral up to v₊.
//! * `midpoint_radius_hat(tol)` — radius of the midpoint stage majorant,
//!   estimated two independent ways (algebraic fold point, coefficient
//!   ratios).
//! * `conformal_sigma` — the strip-to-disk map.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::quad::tanh_sinh;

use super::flow::{xi_zeta_recurrence, MajorantKind};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Default quadrature tolerance for the radius integrals.
pub const DEFAULT_RADIUS_TOL: f64 = 1e-10;

fn check_eta0(eta0: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta0) {
        return Err(Error::InvalidParameters(format!(
            "eta0 must lie in [0,1], got {eta0}"
        )));
    }
    Ok(())
}

/// Convergence radius r(η₀) of the normalized physical-time profile:
/// ∫₀^{√2−1} (η₀ + 2(1−η₀)((1−2σ−σ²)^{−1/2} − 1))^{−1/2} dσ.
///
/// η₀ = 0 is the continuous extension (the integrand is ~σ^{−1/2} at the
/// left endpoint, still integrable); η₀ = 1 gives √2−1 exactly.
pub fn radius_r(eta0: f64) -> Result<f64> {
    radius_r_with_tolerance(eta0, DEFAULT_RADIUS_TOL)
}

pub fn radius_r_with_tolerance(eta0: f64, tol: f64) -> Result<f64> {
    check_eta0(eta0)?;
    // 1−2σ−σ² = (√2−1−σ)(σ+1+√2); near σ=0 use log1p on 2σ+σ² instead.
    let f = move |x: f64, da: f64, db: f64| {
        let ln_u = if x <= 0.2 {
            (-(da * (2.0 + da))).ln_1p()
        } else {
            (db * (x + 1.0 + SQRT2)).ln()
        };
        // (1−2σ−σ²)^{−1/2} − 1, exact near both endpoints
        let inner_m1 = (-0.5 * ln_u).exp_m1();
        (eta0 + 2.0 * (1.0 - eta0) * inner_m1).powf(-0.5)
    };
    Ok(tanh_sinh(f, 0.0, SQRT2 - 1.0, tol, "radius_r")?.value)
}

/// κ(σ) = 2σ(1+σ)(1−2σ−σ²)^{−3/2}.
fn kappa(sigma: f64) -> f64 {
    let u = (SQRT2 - 1.0 - sigma) * (sigma + 1.0 + SQRT2);
    2.0 * sigma * (1.0 + sigma) * u.powf(-1.5)
}

/// The supremum-form radius estimate
/// r̂(η₀) = sup_{0<σ<√2−1} 2σ (√η₀ + √(η₀ + κ(σ)(1−η₀)))^{−1}.
///
/// The objective is unimodal on the interval (verified by the coarse grid
/// scan that brackets the maximizer before golden-section refinement). At
/// η₀ = 1 it degenerates to σ and the supremum √2−1 is attained in the
/// limit at the right endpoint.
pub fn radius_r_hat(eta0: f64) -> Result<f64> {
    check_eta0(eta0)?;
    let end = SQRT2 - 1.0;
    if eta0 == 1.0 {
        return Ok(end);
    }
    let obj = move |sigma: f64| -> f64 {
        if sigma <= 0.0 || sigma >= end {
            return 0.0;
        }
        2.0 * sigma / (eta0.sqrt() + (eta0 + kappa(sigma) * (1.0 - eta0)).sqrt())
    };
    // bracket the maximizer on a coarse grid, then refine
    let n = 2048;
    let mut best_i = 1;
    let mut best = f64::NEG_INFINITY;
    for i in 1..n {
        let v = obj(end * i as f64 / n as f64);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let mut a = end * (best_i - 1) as f64 / n as f64;
    let mut b = end * (best_i + 1) as f64 / n as f64;
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    while b - a > 1e-12 {
        if obj(c) > obj(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    Ok(obj(0.5 * (a + b)))
}

/// Strip half-width of the renormalized-flow majorant.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FlowRadius {
    /// R = ∫₀^{v₊} g(σ) dσ
    pub value: f64,
    /// authoritative v₊ (polynomial root, polished in extended precision)
    pub v_plus: f64,
    /// v₊ from the closed radical form, for cross-checking
    pub v_plus_radical: f64,
    /// quadrature error estimate for R
    pub quad_error: f64,
}

/// Numerator polynomial under the square root of g (sign-flipped): v₊ is
/// its smallest-modulus root, where the auxiliary series 2−χ hits zero.
const G_NUM: [f64; 7] = [3.0, 18.0, 50.0, 80.0, 76.0, 40.0, -8.0];
/// Denominator polynomial of g.
const G_DEN: [f64; 5] = [1.0, 4.0, 8.0, 8.0, 2.0];

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

fn horner_dd(coeffs: &[f64], x: TwoFloat) -> TwoFloat {
    coeffs
        .iter()
        .fold(TwoFloat::from(0.0), |acc, c| acc * x + *c)
}

/// v₊ from the closed radical form, evaluated in double-double arithmetic
/// to keep all sixteen published digits.
fn v_plus_radical() -> f64 {
    let s777 = TwoFloat::from(777.0).sqrt();
    let c = (TwoFloat::from(251.0) + 9.0 * s777).cbrt();
    let arg = TwoFloat::from(502.0) + 18.0 * s777 - 5.0 * c * c + 8.0 * c;
    let v = -1.0 + arg.sqrt() / (3.0 * c);
    v.hi() + v.lo()
}

/// All roots of a real polynomial via the companion-matrix eigenvalues.
fn polynomial_roots(coeffs: &[f64]) -> Vec<(f64, f64)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -coeffs[n - i] / lead;
    }
    m.complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect()
}

/// Smallest-modulus root of the numerator sextic: root-finder route.
fn v_plus_root() -> Result<f64> {
    let roots = polynomial_roots(&G_NUM);
    let (re, im) = roots
        .iter()
        .copied()
        .min_by(|a, b| {
            let ma = a.0.hypot(a.1);
            let mb = b.0.hypot(b.1);
            ma.partial_cmp(&mb).unwrap()
        })
        .expect("sextic has roots");
    if im.abs() > 1e-8 {
        return Err(Error::InternalConsistency(format!(
            "smallest-modulus root of the g numerator is not real: {re} + {im}i"
        )));
    }
    // Newton polish in double-double
    let dnum: Vec<f64> = G_NUM[..6]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (6 - i) as f64)
        .collect();
    let mut x = TwoFloat::from(re);
    for _ in 0..8 {
        let fx = horner_dd(&G_NUM, x);
        let dx = horner_dd(&dnum, x);
        x -= fx / dx;
    }
    Ok(x.hi() + x.lo())
}

/// g(σ) = 2 (σ²+2σ+2)^{−2} √(−num(σ)/den(σ)); vanishes like √(v₊−σ) at the
/// right endpoint.
fn g_integrand(x: f64, _da: f64, _db: f64) -> f64 {
    let num = -horner(&G_NUM, x);
    let num = num.max(0.0);
    let den = horner(&G_DEN, x);
    let w = x * x + 2.0 * x + 2.0;
    2.0 / (w * w) * (num / den).sqrt()
}

/// R and v₊ with both v₊ routes cross-checked to 1e−10 (the root-finder is
/// authoritative).
pub fn radius_flow(tol: f64) -> Result<FlowRadius> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let radical = v_plus_radical();
    let root = v_plus_root()?;
    if (radical - root).abs() > 1e-10 {
        return Err(Error::InternalConsistency(format!(
            "v_plus radical {radical:.17} and root-finder {root:.17} disagree"
        )));
    }
    let quad = tanh_sinh(g_integrand, 0.0, root, tol, "radius_flow")?;
    Ok(FlowRadius {
        value: quad.value,
        v_plus: root,
        v_plus_radical: radical,
        quad_error: quad.error_estimate,
    })
}

/// Two independent estimates of the midpoint majorant radius.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MidpointRadius {
    /// fold-point estimate (authoritative)
    pub value: f64,
    /// coefficient-ratio (Domb–Sykes) extrapolation
    pub ratio_estimate: f64,
    /// ξ̂ value at the fold
    pub fold_xi: f64,
}

impl MidpointRadius {
    /// |fold − ratio| / fold; above ~1e−3 the two estimates should be
    /// treated with suspicion.
    pub fn relative_spread(&self) -> f64 {
        (self.value - self.ratio_estimate).abs() / self.value
    }
}

/// χ as a point function of (ξ, ζ).
fn chi_value(x: f64, z: f64) -> f64 {
    (2.0 * z + z * z + (2.0 - x * x).powf(-0.5)) / (2.0 - x * x)
}

/// ζ̂ as a function of the ξ̂ value along the midpoint fixed point.
fn zeta_hat_of_xi(x: f64) -> f64 {
    ((1.0 - 4.0 * x * (1.0 - x) * (2.0 - x * x).powf(-1.5)).sqrt() - 1.0) / 2.0
}

/// Step size at which the midpoint fixed point attains ξ̂ = x.
fn tau_of_xi(x: f64) -> f64 {
    if x >= SQRT2 {
        return -1.0;
    }
    let z = zeta_hat_of_xi(x);
    let c = chi_value(x, z);
    if c >= 2.0 {
        return -1.0;
    }
    2.0 * (x - 1.0) * (2.0 - c).sqrt() / (1.0 + z)
}

/// Radius of convergence R̂ of the midpoint majorant pair.
///
/// Route (a): substitute ζ̂(ξ̂) into the ξ̂ fixed-point equation to get
/// τ = T(ξ̂) and locate the fold dT/dξ̂ = 0: since the series has
/// nonnegative coefficients its first singularity sits on the positive real
/// axis, at the fold.
///
/// Route (b): extrapolate the coefficient ratios ξ̂_k/ξ̂_{k+1} in 1/k
/// (computed at an internally higher truncation order). The fold value is
/// returned; the caller may compare the two via `relative_spread`.
pub fn midpoint_radius_hat(_tol: f64) -> Result<MidpointRadius> {
    // (a) fold of T on (1, √2)
    let n = 4096;
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 1..n {
        let x = 1.0 + (SQRT2 - 1.0) * i as f64 / n as f64;
        let v = tau_of_xi(x);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best <= 0.0 || best_i == 0 || best_i == n - 1 {
        return Err(Error::NumericFailure {
            what: "midpoint_radius_hat fold search".into(),
            achieved: best,
        });
    }
    let mut a = 1.0 + (SQRT2 - 1.0) * (best_i - 1) as f64 / n as f64;
    let mut b = 1.0 + (SQRT2 - 1.0) * (best_i + 1) as f64 / n as f64;
    let gr = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - gr * (b - a);
    let mut d = a + gr * (b - a);
    while b - a > 1e-13 {
        if tau_of_xi(c) > tau_of_xi(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    let fold_xi = 0.5 * (a + b);
    let value = tau_of_xi(fold_xi);

    // (b) Domb–Sykes on the coefficient ratios of ξ̂
    let order = 120;
    let (xi_hat, _) = xi_zeta_recurrence(order, MajorantKind::Midpoint)?;
    let lo = 60;
    let hi = 100;
    // quadratic least-squares fit of r_k = ξ̂_k/ξ̂_{k+1} against 1/k
    let mut sums = [0.0f64; 5]; // Σ x^0..x^4
    let mut rhs = [0.0f64; 3]; // Σ y x^0..x^2
    for k in lo..=hi {
        let x = 1.0 / k as f64;
        let y = xi_hat.coeff(k) / xi_hat.coeff(k + 1);
        let mut xp = 1.0;
        for (i, s) in sums.iter_mut().enumerate() {
            *s += xp;
            if i < 3 {
                rhs[i] += y * xp;
            }
            xp *= x;
        }
    }
    let ratio_estimate = solve3(
        [
            [sums[0], sums[1], sums[2]],
            [sums[1], sums[2], sums[3]],
            [sums[2], sums[3], sums[4]],
        ],
        rhs,
    )[0];

    Ok(MidpointRadius {
        value,
        ratio_estimate,
        fold_xi,
    })
}

/// Solve a 3×3 linear system by Gaussian elimination with partial pivoting.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = b[row];
        for k in row + 1..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Conformal map of the strip {|Im τ| < R} onto the unit disk:
/// σ = (e^{πτ/(2R)} − 1)/(e^{πτ/(2R)} + 1) = tanh(πτ/(4R)).
pub fn conformal_sigma(tau: f64, radius: f64) -> f64 {
    assert!(radius > 0.0, "strip half-width must be positive");
    (std::f64::consts::PI * tau / (4.0 * radius)).tanh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r_reference_values() {
        // frozen from a 40-digit quadrature of the defining integral
        let r_half = radius_r(0.5).unwrap();
        assert!((r_half - 0.42812818996249196).abs() < 1e-12, "{r_half}");
        // consistency with the numeric-fit bracket at mu0 = nu0 = 1
        let fit_low = (SQRT2 - 1.0) / (1.0 + (1.0f64 / 3.0).sqrt()) * SQRT2;
        assert!(r_half > fit_low);
        let r_near_one = radius_r(1.0 - 1e-8).unwrap();
        assert!((r_near_one - (SQRT2 - 1.0)).abs() < 1e-6);
        let r_zero = radius_r(0.0).unwrap();
        assert!((r_zero - 0.749_851_839_699_182_6).abs() < 1e-10, "{r_zero}");
        assert!(radius_r(1.5).is_err());
    }

    #[test]
    fn r_hat_reference_values() {
        let v = radius_r_hat(0.5).unwrap();
        assert!((v - 0.25796551705405397).abs() < 1e-10, "{v}");
        // objective degenerates to σ at η₀ = 1; supremum is the endpoint
        assert!((radius_r_hat(1.0).unwrap() - (SQRT2 - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn r_hat_below_r_on_grid() {
        for i in 0..=20 {
            let eta0 = 0.02 + 0.96 * i as f64 / 20.0;
            let r = radius_r(eta0).unwrap();
            let rh = radius_r_hat(eta0).unwrap();
            assert!(rh <= r + 1e-10, "eta0={eta0}: rhat={rh} > r={r}");
        }
    }

    #[test]
    fn flow_radius_published_digits() {
        let fr = radius_flow(1e-12).unwrap();
        assert!((fr.v_plus - 0.149902575567304).abs() < 1e-12);
        assert!((fr.v_plus_radical - fr.v_plus).abs() < 1e-12);
        assert!(
            (fr.value - 0.0839968103939379).abs() < 1e-12,
            "{}",
            fr.value
        );
    }

    #[test]
    fn g_at_zero_is_one() {
        assert!((g_integrand(0.0, 0.0, 0.149) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn v_plus_is_smallest_modulus_root() {
        let fr = radius_flow(1e-12).unwrap();
        let roots = polynomial_roots(&G_NUM);
        for (re, im) in roots {
            let modulus = re.hypot(im);
            assert!(modulus + 1e-9 >= fr.v_plus);
        }
        assert!(horner(&G_NUM, fr.v_plus).abs() < 1e-12);
    }

    #[test]
    fn midpoint_radius_two_routes_agree() {
        let mr = midpoint_radius_hat(1e-10).unwrap();
        assert!(
            (mr.value - 0.094790093).abs() / 0.094790093 < 1e-4,
            "{}",
            mr.value
        );
        assert!(
            mr.relative_spread() < 1e-3,
            "spread {}",
            mr.relative_spread()
        );
        // midpoint disk is larger than the flow disk
        let fr = radius_flow(1e-12).unwrap();
        assert!(mr.value > fr.value);
    }

    #[test]
    fn conformal_map_basics() {
        let r = 0.084;
        assert_eq!(conformal_sigma(0.0, r), 0.0);
        assert!(conformal_sigma(1e6, r) > 1.0 - 1e-12);
        for tau in [0.01, 0.3, 2.5] {
            assert_eq!(conformal_sigma(-tau, r), -conformal_sigma(tau, r));
        }
    }
}
