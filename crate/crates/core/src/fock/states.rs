use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{c, FockSpace, OperatorMatrix};
use crate::error::{invalid, Result};

/// Largest truncation weight accepted without a convergence warning.
pub const TRUNCATION_WARN: f64 = 1e-6;

/// Two-mode squeezed vacuum on a truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct TmsvState {
    /// Normalized amplitudes.
    pub vector: DVector<Complex64>,
    /// `1 − Σ |c_n|²` before renormalization.
    pub truncation_weight: f64,
}

impl TmsvState {
    /// `Some(message)` when the discarded weight exceeds `1e−6`.
    pub fn warning(&self) -> Option<String> {
        (self.truncation_weight > TRUNCATION_WARN).then(|| {
            format!(
                "TMSV truncation discards weight {:e} (> {TRUNCATION_WARN:e}); increase the truncation",
                self.truncation_weight
            )
        })
    }
}

/// `Σ_n c_n |n, n⟩` with `c_n = tanh(r)^n / cosh(r)`, cut at `n < D` and
/// renormalized. Built from the Schmidt series, not from a squeezing operator.
pub fn tmsv_state(space: &FockSpace, r: f64) -> Result<TmsvState> {
    if space.n_modes() != 2 {
        return Err(invalid("TMSV needs a 2-mode space"));
    }
    if !r.is_finite() {
        return Err(invalid(format!("squeezing parameter must be finite, got {r}")));
    }
    let lambda = r.tanh();
    let norm = 1.0 / r.cosh();
    let mut vector = DVector::zeros(space.total_dim());
    let mut kept = 0.0;
    for n in 0..space.dim() {
        let amp = norm * lambda.powi(n as i32);
        kept += amp * amp;
        vector[space.index(&[n, n])] = c(amp);
    }
    vector /= c(kept.sqrt());
    Ok(TmsvState {
        vector,
        truncation_weight: (1.0 - kept).max(0.0),
    })
}

/// Basis state `|occ⟩`.
pub fn number_state(space: &FockSpace, occ: &[usize]) -> Result<DVector<Complex64>> {
    if occ.len() != space.n_modes() || occ.iter().any(|&n| n >= space.dim()) {
        return Err(invalid(format!("occupations {occ:?} do not fit the space")));
    }
    let mut v = DVector::zeros(space.total_dim());
    v[space.index(occ)] = c(1.0);
    Ok(v)
}

/// Product of coherent states `|α_1⟩ ⊗ |α_2⟩ ⊗ ...`, truncated and
/// renormalized. Returns the vector and the discarded weight.
pub fn coherent_state(
    space: &FockSpace,
    alphas: &[Complex64],
) -> Result<(DVector<Complex64>, f64)> {
    if alphas.len() != space.n_modes() {
        return Err(invalid("one amplitude per mode required"));
    }
    let per_mode: Vec<Vec<Complex64>> = alphas
        .iter()
        .map(|&alpha| {
            let mut amps = Vec::with_capacity(space.dim());
            let mut amp = c((-alpha.norm_sqr() / 2.0).exp());
            for n in 0..space.dim() {
                amps.push(amp);
                amp = amp * alpha / c(((n + 1) as f64).sqrt());
            }
            amps
        })
        .collect();
    let mut v = DVector::from_fn(space.total_dim(), |idx, _| {
        space
            .occupations(idx)
            .iter()
            .zip(&per_mode)
            .map(|(&n, amps)| amps[n])
            .product::<Complex64>()
    });
    let kept: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    v /= c(kept.sqrt());
    Ok((v, (1.0 - kept).max(0.0)))
}

/// `|ψ⟩⟨ψ|`, subject to the density-matrix cap.
pub fn pure_density(space: &FockSpace, psi: &DVector<Complex64>) -> Result<OperatorMatrix> {
    space.require_density()?;
    if psi.len() != space.total_dim() {
        return Err(invalid("state vector does not match the space"));
    }
    let rho: DMatrix<Complex64> = psi * psi.adjoint();
    OperatorMatrix::hermitian(rho)
}
