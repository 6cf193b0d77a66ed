//! Field-reduced dynamics of the Raman atomic-ensemble amplifier.
//!
//! The atoms couple to the field through `B = g (a1 − ε a2†) = g (Q + i P)`.
//! After eliminating the atoms the field obeys a master equation with a loss
//! channel `B` at rate `N0/γ⊥` and a gain channel `B†` at rate `N1/γ⊥`:
//!
//! ```text
//! dρ/dt = (N0/γ⊥) (2 B ρ B† − B†B ρ − ρ B†B) + (N1/γ⊥) (2 B† ρ B − B B† ρ − ρ B B†)
//! ```
//!
//! Written with every term carrying an overall minus sign, as in
//!
//! ```text
//! dρ/dt = −(N0/γ⊥) (B†B ρ + B ρ B† + h.c.) − (N1/γ⊥) (B B† ρ + B† ρ B + h.c.)
//! ```
//!
//! the generator would not preserve the trace. The dissipator form above
//! reproduces the single-mode photon-number equations
//!
//! ```text
//! d⟨n1⟩/dt = (g²/γ⊥) (N1 − N0) (⟨n1⟩ − ⟨n2⟩ + ⟨BB†⟩/g²) + (g²/γ⊥) (N0 + N1)
//! d(⟨n1⟩ − ⟨n2⟩)/dt = (2/γ⊥) (N1 − N0) ⟨BB†⟩
//! ```
//!
//! where `⟨BB†⟩ = g² (⟨n1⟩ + ⟨n2⟩ + 1 − ε W)`, `W = ⟨a1 a2 + a1† a2†⟩`. Both
//! jump operators commute with `Q` and `P`, so every moment of `Q` and `P` is
//! a constant of motion.
//!
//! For jump operators linear in the quadratures, `L = lᵀ r` with rate `κ`, the
//! moments obey `dm/dt = A m` and `dV/dt = A V + V Aᵀ + D` with
//! `A = −κ Ω Im(l l†)` and `D = (κ/2) Ω Re(l l†) Ωᵀ`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::gaussian::{symplectic_form, GaussianState};
use crate::ode;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanParams {
    g: f64,
    gamma_perp: f64,
    n0_atoms: f64,
    n1_atoms: f64,
    epsilon: f64,
}

impl RamanParams {
    pub fn new(g: f64, gamma_perp: f64, n0_atoms: f64, n1_atoms: f64, epsilon: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(invalid(format!("g must be finite, got {g}")));
        }
        if !(gamma_perp > 0.0) || !gamma_perp.is_finite() {
            return Err(invalid(format!("gamma_perp > 0 required, got {gamma_perp}")));
        }
        if !(n0_atoms >= 0.0) || !n0_atoms.is_finite() {
            return Err(invalid(format!("n0_atoms >= 0 required, got {n0_atoms}")));
        }
        if !(n1_atoms >= 0.0) || !n1_atoms.is_finite() {
            return Err(invalid(format!("n1_atoms >= 0 required, got {n1_atoms}")));
        }
        crate::check_unit_epsilon(epsilon, "raman amplifier")?;
        Ok(Self {
            g,
            gamma_perp,
            n0_atoms,
            n1_atoms,
            epsilon,
        })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn gamma_perp(&self) -> f64 {
        self.gamma_perp
    }

    pub fn n0_atoms(&self) -> f64 {
        self.n0_atoms
    }

    pub fn n1_atoms(&self) -> f64 {
        self.n1_atoms
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Loss-channel rate `N0/γ⊥`.
    pub fn loss_rate(&self) -> f64 {
        self.n0_atoms / self.gamma_perp
    }

    /// Gain-channel rate `N1/γ⊥`.
    pub fn gain_rate(&self) -> f64 {
        self.n1_atoms / self.gamma_perp
    }

    /// `g² N t / γ⊥`, the expansion parameter of the first-order treatment.
    /// Reported, not enforced.
    pub fn smallness(&self, t: f64) -> f64 {
        self.g * self.g * (self.n0_atoms + self.n1_atoms) * t / self.gamma_perp
    }

    /// Coefficients of `B = lᵀ r` on `(x1, p1, x2, p2)`.
    pub fn b_weights(&self) -> [Complex64; 4] {
        let g = self.g;
        let e = self.epsilon;
        [
            Complex64::new(g, 0.0),
            Complex64::new(0.0, g),
            Complex64::new(-e * g, 0.0),
            Complex64::new(0.0, e * g),
        ]
    }
}

/// Generators of the first and second moments.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentOde {
    pub drift: DMatrix<f64>,
    pub diffusion: DMatrix<f64>,
    pub mean_drift: DMatrix<f64>,
}

impl MomentOde {
    fn rhs(&self, y: &(DVector<f64>, DMatrix<f64>)) -> (DVector<f64>, DMatrix<f64>) {
        let (mean, cov) = y;
        let a_cov = &self.drift * cov;
        (&self.mean_drift * mean, &a_cov + a_cov.transpose() + &self.diffusion)
    }
}

// Adds the contribution of one jump operator with weights `l` and rate `kappa`.
fn add_channel(ode: &mut MomentOde, l: &[Complex64; 4], kappa: f64) {
    let omega = symplectic_form(2);
    let outer = DMatrix::from_fn(4, 4, |i, j| l[i] * l[j].conj());
    let re = outer.map(|c| c.re);
    let im = outer.map(|c| c.im);
    let drift = &omega * im * -kappa;
    ode.drift += &drift;
    ode.mean_drift += drift;
    ode.diffusion += &omega * re * omega.transpose() * (kappa / 2.0);
}

pub fn drift_diffusion(params: &RamanParams) -> MomentOde {
    let mut ode = MomentOde {
        drift: DMatrix::zeros(4, 4),
        diffusion: DMatrix::zeros(4, 4),
        mean_drift: DMatrix::zeros(4, 4),
    };
    let b = params.b_weights();
    let b_dag = b.map(|c| c.conj());
    add_channel(&mut ode, &b, params.loss_rate());
    add_channel(&mut ode, &b_dag, params.gain_rate());
    ode.diffusion = (&ode.diffusion + ode.diffusion.transpose()) * 0.5;
    ode
}

fn require_two_mode(state: &GaussianState) -> Result<()> {
    if state.n_modes() != 2 {
        return Err(invalid(format!(
            "raman amplifier acts on 2-mode states, got {} modes",
            state.n_modes()
        )));
    }
    Ok(())
}

/// Integrates the moment equations over `[0, t]` with `steps` RK4 steps.
pub fn evolve_moments(
    state: &GaussianState,
    params: &RamanParams,
    t: f64,
    steps: usize,
) -> Result<GaussianState> {
    require_two_mode(state)?;
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!("t must be finite and >= 0, got {t}")));
    }
    if steps == 0 {
        return Err(invalid("steps must be at least 1"));
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let ode = drift_diffusion(params);
    let y0 = (state.mean().clone(), state.cov().clone());
    let (mean, cov) = ode::integrate(&y0, t, steps, |y| ode.rhs(y)).map_err(|step| {
        Error::NumericOverflow(format!(
            "moment integration produced non-finite values at step {step} of {steps}"
        ))
    })?;
    GaussianState::new(mean, cov)
}

/// Instantaneous photon-number rates and `⟨BB†⟩` from the current moments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonRates {
    pub dn1_dt: f64,
    pub dn2_dt: f64,
    /// `⟨BB†⟩`, including the `g²` carried by `B`.
    pub bbdag: f64,
}

pub fn photon_rates(state: &GaussianState, params: &RamanParams) -> Result<PhotonRates> {
    require_two_mode(state)?;
    let n1 = state.mean_photon_number(0)?;
    let n2 = state.mean_photon_number(1)?;
    let w = state.pair_coherence()?;
    let e = params.epsilon;
    let g2 = params.g * params.g;
    let (gain, loss) = (params.gain_rate(), params.loss_rate());
    Ok(PhotonRates {
        dn1_dt: 2.0 * g2 * ((gain - loss) * (n1 - e * w / 2.0) + gain),
        dn2_dt: 2.0 * g2 * ((loss - gain) * (n2 - e * w / 2.0) + loss),
        bbdag: g2 * (n1 + n2 + 1.0 - e * w),
    })
}

/// Closed-form photon numbers for an input with `⟨BB†⟩ = 0`:
/// `n_m(t) = n_m0 + (g² t/γ⊥) ((N1 − N0)(n10 − n20) + N1 + N0)`.
pub fn analytic_photon_number(n10: f64, n20: f64, params: &RamanParams, t: f64) -> Result<(f64, f64)> {
    if !(t >= 0.0) {
        return Err(invalid(format!("t must be >= 0, got {t}")));
    }
    let (n0, n1) = (params.n0_atoms, params.n1_atoms);
    let growth =
        params.g * params.g * t / params.gamma_perp * ((n1 - n0) * (n10 - n20) + n1 + n0);
    Ok((n10 + growth, n20 + growth))
}
