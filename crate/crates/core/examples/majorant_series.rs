//! Build the four majorant series families and show their structure:
//! leading coefficients, nonnegativity, growth rate against the certified
//! radius, and the agreement of the two independent construction routes.
//!
//! ```text
//! cargo run --example majorant_series
//! ```

use nbody_majorants::majorants::{
    coeff_disagreement, lambda_series, lambda_series_recurrence, midpoint_xi_zeta_hat, rho_series,
    rho_series_recurrence, xi_zeta_recurrence, xi_zeta_series, MajorantKind,
};

fn main() -> nbody_majorants::Result<()> {
    let order = 30;

    let (mu0, nu0) = (0.5, 1.5);
    let rho = rho_series(mu0, nu0, order)?;
    let rho_rec = rho_series_recurrence(mu0, nu0, order)?;
    println!(
        "rho (mu0 = {mu0}, nu0 = {nu0}), certified |t| < {:.6}:",
        rho.radius
    );
    print!("  coefficients:");
    for k in 0..=6 {
        print!(" {:.6}", rho.rho.coeff(k));
    }
    println!(
        "\n  operator vs recurrence disagreement: {:.2e}",
        coeff_disagreement(&rho.rho, &rho_rec)
    );

    let eta0 = 0.5;
    let lam = lambda_series(eta0, order)?;
    println!(
        "\nlambda (eta0 = {eta0}): lambda1 = {:.12} (= sqrt(eta0)), lambda2 = {:.12}",
        lam.coeff(1),
        lam.coeff(2)
    );
    println!(
        "  recurrence disagreement: {:.2e}",
        coeff_disagreement(&lam, &lambda_series_recurrence(eta0, order)?)
    );

    let flow = xi_zeta_series(order)?;
    println!(
        "\nrenormalized-flow pair (xi, zeta), radius R = {:.12}:",
        flow.radius
    );
    println!(
        "  xi  : 1, 1, 7/4, 28/3, ...  -> {:?}",
        (0..5).map(|k| flow.xi.coeff(k)).collect::<Vec<_>>()
    );
    println!(
        "  zeta: 0, 1, 13/4, 205/12, ... -> {:?}",
        (0..5).map(|k| flow.zeta.coeff(k)).collect::<Vec<_>>()
    );
    let (xr, zr) = xi_zeta_recurrence(order, MajorantKind::ExactFlow)?;
    println!(
        "  recurrence disagreement: xi {:.2e}, zeta {:.2e}",
        coeff_disagreement(&flow.xi, &xr),
        coeff_disagreement(&flow.zeta, &zr)
    );

    let hat = midpoint_xi_zeta_hat(order)?;
    println!(
        "\nmidpoint stage pair (xi^, zeta^), radius R^ = {:.9}:",
        hat.radius
    );
    println!(
        "  xi^  : 1, 1/2, 7/8, 297/64, ... -> {:?}",
        (0..5).map(|k| hat.xi.coeff(k)).collect::<Vec<_>>()
    );
    println!(
        "  zeta^: 0, 1/2, 13/8, 513/64, ... -> {:?}",
        (0..5).map(|k| hat.zeta.coeff(k)).collect::<Vec<_>>()
    );

    println!("\ncoefficient growth vs radius (ratio c_k/c_(k+1) approaches the radius):");
    for k in [10, 20, 29] {
        println!(
            "  k = {k}: zeta ratio {:.6} (R = {:.6}), zeta^ ratio {:.6} (R^ = {:.6})",
            flow.zeta.coeff(k - 1) / flow.zeta.coeff(k),
            flow.radius,
            hat.zeta.coeff(k - 1) / hat.zeta.coeff(k),
            hat.radius
        );
    }
    println!("\nevery zeta^_k <= zeta_k and xi^_k <= xi_k: the discrete-map majorant");
    println!("is dominated by the flow majorant, which is what the local-error");
    println!("certificates are built from.");
    Ok(())
}
