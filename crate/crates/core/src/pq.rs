//! Two-mode amplifier driven by `H = k P Q`.
//!
//! With `[x, p] = i/2` and `dO/dt = i [H, O]` the Heisenberg equations are
//!
//! ```text
//! dx1/dt = (k/2) Q        dp1/dt = -(k/2) P
//! dx2/dt = (k/2ε) Q       dp2/dt =  (k ε/2) P
//! ```
//!
//! so `Q` and `P` are constants of motion and the generator `A` squares to
//! zero. The propagator is therefore exactly `I + A t`; no integrator is used.
//!
//! Writing `μ = k t / 2`, the photon numbers evolve as
//!
//! ```text
//! n1(t) = n1(0) + μ² (Q² + P²) + 2μ (Q x1(0) − P p1(0))
//! n2(t) = n2(0) + μ² (Q² + P²) + 2μ ε (Q x2(0) + P p2(0))
//! ```
//!
//! The products are unambiguous because `Q` commutes with `x1`, `x2` and `P`
//! with `p1`, `p2`. Note the minus sign in front of `P p1(0)`: a version of
//! this law printed with `+` does not follow from `H = k P Q` under any sign
//! convention for the Heisenberg equations (flipping the convention flips
//! both cross terms together). The truncated-Fock propagation in
//! [`crate::fock`] agrees with the form above, e.g. `n1 = 0.25` for vacuum
//! input at `μ = 0.5`, where the `+` form would give `0.75`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Result};
use crate::gaussian::{epr_p_weights, epr_q_weights, symplectic_defect, GaussianState};

/// Coupling `k`, duration `t` and `ε = ±1` of the parametric amplifier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PqAmpParams {
    k: f64,
    t: f64,
    epsilon: f64,
}

impl PqAmpParams {
    pub fn new(k: f64, t: f64, epsilon: f64) -> Result<Self> {
        if !k.is_finite() || !t.is_finite() {
            return Err(invalid(format!("k and t must be finite, got k={k}, t={t}")));
        }
        crate::check_unit_epsilon(epsilon, "pq amplifier")?;
        Ok(Self { k, t, epsilon })
    }

    /// Parameters with `k = 2` so that `μ = t`.
    pub fn from_mu(mu: f64, epsilon: f64) -> Result<Self> {
        Self::new(2.0, mu, epsilon)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `μ = k t / 2`
    pub fn mu(&self) -> f64 {
        self.k * self.t / 2.0
    }

    pub fn with_time(&self, t: f64) -> Result<Self> {
        Self::new(self.k, t, self.epsilon)
    }
}

/// Generator `A` of `d r/dt = A r` on `(x1, p1, x2, p2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorMatrix(DMatrix<f64>);

impl GeneratorMatrix {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `I + A t`, exact because `A² = 0`.
    pub fn propagator(&self, t: f64) -> DMatrix<f64> {
        DMatrix::identity(4, 4) + &self.0 * t
    }
}

pub fn generator(params: &PqAmpParams) -> GeneratorMatrix {
    let h = params.k / 2.0;
    let e = params.epsilon;
    let q = epr_q_weights(2, e);
    let p = epr_p_weights(2, e);
    // Row i of A is (coefficient of Q or P in dr_i/dt) times the weights of Q or P.
    let mut a = DMatrix::zeros(4, 4);
    a.row_mut(0).copy_from(&(q.transpose() * h));
    a.row_mut(1).copy_from(&(p.transpose() * -h));
    a.row_mut(2).copy_from(&(q.transpose() * (h / e)));
    a.row_mut(3).copy_from(&(p.transpose() * (h * e)));
    GeneratorMatrix(a)
}

fn require_two_mode(state: &GaussianState) -> Result<()> {
    if state.n_modes() != 2 {
        return Err(invalid(format!(
            "pq amplifier acts on 2-mode states, got {} modes",
            state.n_modes()
        )));
    }
    Ok(())
}

/// Propagates the state through the amplifier for `params.t()`.
pub fn evolve(state: &GaussianState, params: &PqAmpParams) -> Result<GaussianState> {
    require_two_mode(state)?;
    let s = generator(params).propagator(params.t);
    debug_assert!(symplectic_defect(&s) < 1e-9);
    Ok(state.transformed(&s, &DVector::zeros(4)))
}

/// Photon numbers after the amplifier, from the closed-form law in the module
/// docs evaluated on the input moments.
pub fn predicted_photon_numbers(
    input: &GaussianState,
    params: &PqAmpParams,
) -> Result<(f64, f64)> {
    require_two_mode(input)?;
    let e = params.epsilon;
    let mu = params.mu();
    let m = |i, j| input.second_moment(i, j);
    let qq = m(0, 0) - 2.0 * e * m(0, 2) + e * e * m(2, 2);
    let pp = m(1, 1) + 2.0 / e * m(1, 3) + m(3, 3) / (e * e);
    let q_x1 = m(0, 0) - e * m(2, 0);
    let q_x2 = m(0, 2) - e * m(2, 2);
    let p_p1 = m(1, 1) + m(3, 1) / e;
    let p_p2 = m(1, 3) + m(3, 3) / e;
    let n10 = input.mean_photon_number(0)?;
    let n20 = input.mean_photon_number(1)?;
    let n1 = n10 + mu * mu * (qq + pp) + 2.0 * mu * (q_x1 - p_p1);
    let n2 = n20 + mu * mu * (qq / (e * e) + pp * e * e) + 2.0 * mu * (q_x2 / e + p_p2 * e);
    Ok((n1, n2))
}
