//! Simulation of two-mode squeezed (continuous-variable EPR) light and of two
//! amplifiers that leave its EPR correlations untouched while the photon number
//! of each mode grows.
//!
//! Conventions used throughout the crate:
//!
//! * `a = x + i p` with `[x, p] = i/2`, so the vacuum has `Var(x) = Var(p) = 1/4`
//!   and every quadrature `X(θ) = 2(x cos θ + p sin θ)` has unit vacuum variance.
//! * Phase-space vectors are ordered `(x1, p1, x2, p2, ...)`.
//! * `ħ = 1`; couplings are rates and times are dimensionless products with them.
//! * The EPR pair of operators is `Q = x1 − ε x2`, `P = p1 + p2 / ε`.
//!
//! Two independent engines are provided: [`gaussian`] propagates means and
//! covariances exactly (or with a fixed-step RK4 for the dissipative case) and
//! [`fock`] brute-forces the same dynamics on a truncated number basis. The
//! latter is the reference against which every Gaussian-engine claim is tested.

pub mod error;
pub mod fock;
pub mod gaussian;
pub mod metrology;
pub mod ode;
pub mod pq;
pub mod raman;
pub mod scenario;

pub use error::{Error, Result};
pub use gaussian::{EprMoments, GaussianState, SymplecticTransform};
pub use metrology::{NoiseReport, Observable};
pub use pq::PqAmpParams;
pub use raman::RamanParams;

/// Checks that `epsilon` is exactly `+1` or `-1`.
pub(crate) fn check_unit_epsilon(epsilon: f64, what: &str) -> Result<()> {
    if epsilon == 1.0 || epsilon == -1.0 {
        Ok(())
    } else {
        Err(error::invalid(format!(
            "{what}: epsilon must be +1 or -1, got {epsilon}"
        )))
    }
}
