//! Fixed-step implicit Runge-Kutta integration of the physical and
//! renormalized equations: Gauss collocation tableaus, the fixed-point
//! stepper, analytic two-body references and error probes.
//!
//! There is deliberately no step-size control anywhere: the premise is that
//! time renormalization makes fixed steps adequate, and the error machinery
//! measures exactly that.

pub mod kepler;
pub mod probe;
pub mod step;
pub mod tableau;

pub use kepler::kepler_propagate;
pub use probe::{error_probe, ErrorRow, ErrorTable, ProbeMode, ReferenceScheme};
pub use step::{integrate, irk_step, IntegrationConfig, Predictor, StepRecord, Trajectory};
pub use tableau::{gauss_tableau, RKTableau};
