//! Majorant power series for the gravitational N-body problem.
//!
//! The library builds explicit scalar series that dominate, coefficient by
//! coefficient, the Taylor expansions of the N-body flow — in physical time,
//! in globally renormalized (fictitious) time, and for implicit Runge-Kutta
//! discretizations of the renormalized equations. From those series it
//! derives certified convergence radii and evaluable local-error bounds, and
//! it ships the fixed-step implicit integrator that the bounds certify.
//!
//! Entry points:
//!
//! * [`series`] — truncated power-series arithmetic and the majorant order.
//! * [`majorants`] — the profiles ρ, λ, (ξ, ζ), (ξ̂, ζ̂); radii r(η₀), r̂(η₀),
//!   R, v₊, R̂; bound evaluation with problem scalings.
//! * [`nbody`] — the vector field, pairwise scale quantities, the four
//!   time-renormalization functions, presets and the JSON system format.
//! * [`taylor`] — direct Taylor expansion of the (renormalized) flow and of
//!   the midpoint stage map; the independent check on everything above.
//! * [`integrator`] — Gauss collocation tableaus, the fixed-point stepper,
//!   analytic Kepler references and error probes.
//! * [`cli`] — the command implementations behind the `nbody-majorants`
//!   binary.
//!
//! The `examples/` directory demonstrates each capability end to end; start
//! with `cargo run --example radii`.

// index-based loops mirror the coefficient formulas; negated comparisons
// (`!(x > 0.0)`) reject NaN parameters where `x <= 0.0` would accept them
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod integrator;
pub mod majorants;
pub mod nbody;
pub mod quad;
pub mod series;
pub mod taylor;
pub mod validate;

pub use error::{Error, Result};
