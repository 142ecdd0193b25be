//! Compute every certified convergence radius and cross-check each one two
//! independent ways where a second route exists.
//!
//! ```text
//! cargo run --example radii
//! ```

use nbody_majorants::majorants::{midpoint_radius_hat, radius_flow, radius_r, radius_r_hat};

fn main() -> nbody_majorants::Result<()> {
    println!("physical-time profile radius r(eta0):");
    for eta0 in [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0 - 1e-8] {
        println!("  r({eta0:<10}) = {:.12}", radius_r(eta0)?);
    }

    println!("\nsupremum-form estimate rhat(eta0) (always below r):");
    for eta0 in [0.1, 0.5, 0.9] {
        let r = radius_r(eta0)?;
        let rh = radius_r_hat(eta0)?;
        println!(
            "  rhat({eta0}) = {rh:.12}   (r = {r:.12}, ratio {:.3})",
            rh / r
        );
    }

    let fr = radius_flow(1e-12)?;
    println!("\nrenormalized flow strip half-width:");
    println!("  v+ (root finder)   = {:.15}", fr.v_plus);
    println!("  v+ (closed radical) = {:.15}", fr.v_plus_radical);
    println!("  R = integral of g over (0, v+) = {:.15}", fr.value);
    println!("  quadrature error estimate {:.2e}", fr.quad_error);

    let mr = midpoint_radius_hat(1e-10)?;
    println!("\nimplicit-midpoint stage majorant radius:");
    println!("  R_hat (fold of the algebraic relation) = {:.9}", mr.value);
    println!(
        "  R_hat (coefficient-ratio extrapolation) = {:.9}",
        mr.ratio_estimate
    );
    println!("  relative spread {:.2e}", mr.relative_spread());
    println!(
        "  R_hat/R = {:.4} (the discrete map converges on a larger disk)",
        mr.value / fr.value
    );
    Ok(())
}
