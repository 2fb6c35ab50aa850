//! Subspace angles, stable sampling rates and reconstruction from Walsh
//! measurements.

mod angle;
mod linalg;
mod reconstruct;
mod ssr;

pub use angle::{sigma_min, subspace_angle, subspace_angle_with, AngleMethod, AngleReport};
pub use linalg::{cgnr, dense_least_squares, normal_residual, CgnrOutcome};
pub use reconstruct::{
    gs_reconstruct, gs_reconstruct_with, pbdw_reconstruct, truncated_walsh, walsh_measurements,
    LsqSolver, ReconMethod, Reconstruction,
};
pub use ssr::{
    stable_sampling_rate, stable_sampling_rate_with_basis, theoretical_s_theta, SearchOptions,
    SsrResult,
};

/// Largest admissible stability threshold θ.
pub const MAX_THETA: f64 = 100.0;

pub(crate) fn check_theta(theta: f64) -> crate::Result<()> {
    if theta > 1.0 && theta <= MAX_THETA {
        Ok(())
    } else {
        Err(crate::Error::InvalidTheta(theta))
    }
}
