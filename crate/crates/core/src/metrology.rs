//! Shot-noise-normalized squeezing and EPR diagnostics.
//!
//! Every level is reported relative to the vacuum (shot noise = 1). For a
//! single quadrature this is simply `Var(X(θ))`; for the joint observables `Q`
//! and `P` it is their variance divided by the vacuum value `1/4 + ε²/4` and
//! `1/4 + 1/(4ε²)` respectively. Only the zero-frequency limit of the
//! photocurrent spectrum is modelled, where the normally ordered variance plus
//! the shot-noise unit reduces to the plain variance.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::gaussian::{GaussianState, VACUUM_VARIANCE};

/// Which observable a [`NoiseReport`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Single-mode quadrature `X(θ)` of `mode` (zero-based).
    Quadrature { mode: usize, theta: f64 },
    /// Relative position `Q = x1 − ε x2`.
    Q { epsilon: f64 },
    /// Total momentum `P = p1 + p2 / ε`.
    P { epsilon: f64 },
    /// `Var(Q) + Var(P)` at `ε = ±1`.
    EprSum { epsilon: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseReport {
    pub level: f64,
    pub is_below_shot: bool,
    pub observable: Observable,
}

impl NoiseReport {
    fn new(level: f64, observable: Observable) -> Self {
        Self {
            level,
            is_below_shot: level < 1.0,
            observable,
        }
    }
}

/// Variance of `X(θ)` with the squeezed flag `Var < 1`.
pub fn squeezing_level(state: &GaussianState, mode: usize, theta: f64) -> Result<NoiseReport> {
    let level = state.quadrature_variance(mode, theta)?;
    Ok(NoiseReport::new(level, Observable::Quadrature { mode, theta }))
}

/// Low-frequency photocurrent noise of `observable`, in shot-noise units.
pub fn zero_frequency_spectrum(
    state: &GaussianState,
    observable: Observable,
) -> Result<NoiseReport> {
    let level = match observable {
        Observable::Quadrature { mode, theta } => state.quadrature_variance(mode, theta)?,
        Observable::Q { epsilon } => {
            let m = state.epr_moments(epsilon)?;
            m.var_q / (VACUUM_VARIANCE * (1.0 + epsilon * epsilon))
        }
        Observable::P { epsilon } => {
            let m = state.epr_moments(epsilon)?;
            m.var_p / (VACUUM_VARIANCE * (1.0 + 1.0 / (epsilon * epsilon)))
        }
        Observable::EprSum { epsilon } => return epr_suppression(state, epsilon),
    };
    Ok(NoiseReport::new(level, observable))
}

/// `Var(Q) + Var(P)` normalized to its vacuum value of 1; only defined for
/// `ε = ±1`.
pub fn epr_suppression(state: &GaussianState, epsilon: f64) -> Result<NoiseReport> {
    if epsilon.abs() != 1.0 {
        return Err(invalid(format!(
            "EPR suppression is defined for epsilon = ±1 only, got {epsilon}"
        )));
    }
    let m = state.epr_moments(epsilon)?;
    Ok(NoiseReport::new(
        m.var_q + m.var_p,
        Observable::EprSum { epsilon },
    ))
}
