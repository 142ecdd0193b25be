//! Majorant constructions for the N-body flow in physical and renormalized
//! time, their certified convergence radii, and evaluated error bounds.

pub mod bounds;
pub mod flow;
pub mod radii;

pub use bounds::{
    local_bound_physical, local_bound_renorm, rk_local_error_bound, BoundScalings, BoundValue,
    RenormBounds,
};
pub use flow::{
    apply_operator, chi_series, coeff_disagreement, lambda_series, lambda_series_recurrence,
    midpoint_xi_zeta_hat, midpoint_zeta_from_xi, rho_series, rho_series_recurrence,
    xi_zeta_recurrence, xi_zeta_series, MajorantKind, PhysicalMajorant, RenormMajorant,
};
pub use radii::{
    conformal_sigma, midpoint_radius_hat, radius_flow, radius_r, radius_r_hat,
    radius_r_with_tolerance, FlowRadius, MidpointRadius, DEFAULT_RADIUS_TOL,
};
