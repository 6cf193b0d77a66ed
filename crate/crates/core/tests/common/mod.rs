#![allow(dead_code)]

use epr_amp::fock::{self, FockInput, FockSpace};
use epr_amp::gaussian::{symplectic_form, GaussianState, SymplecticTransform};
use nalgebra::{DMatrix, DVector};

pub fn tmsv(r: f64) -> GaussianState {
    GaussianState::vacuum(2).unwrap().two_mode_squeeze(r, 1.0).unwrap()
}

/// Phase rotation of one mode.
pub fn rotation(n_modes: usize, mode: usize, phi: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let (sn, cs) = phi.sin_cos();
    let (x, p) = (2 * mode, 2 * mode + 1);
    s[(x, x)] = cs;
    s[(x, p)] = -sn;
    s[(p, x)] = sn;
    s[(p, p)] = cs;
    s
}

/// Single-mode squeezer `x → e^{-r} x`, `p → e^{r} p`.
pub fn squeezer(n_modes: usize, mode: usize, r: f64) -> DMatrix<f64> {
    let mut s = DMatrix::identity(2 * n_modes, 2 * n_modes);
    s[(2 * mode, 2 * mode)] = (-r).exp();
    s[(2 * mode + 1, 2 * mode + 1)] = r.exp();
    s
}

/// Beam splitter between modes 1 and 2.
pub fn beam_splitter(theta: f64) -> DMatrix<f64> {
    let (sn, cs) = theta.sin_cos();
    let mut s = DMatrix::zeros(4, 4);
    for q in 0..2 {
        s[(q, q)] = cs;
        s[(q, 2 + q)] = sn;
        s[(2 + q, q)] = -sn;
        s[(2 + q, 2 + q)] = cs;
    }
    s
}

/// A valid 2-mode Gaussian state from a thermal seed dressed with passive
/// and active symplectic maps and a displacement. `p` holds 12 parameters.
pub fn random_state(p: &[f64]) -> GaussianState {
    let thermal = DMatrix::from_diagonal(&DVector::from_vec(vec![
        0.25 + p[0],
        0.25 + p[0],
        0.25 + p[1],
        0.25 + p[1],
    ]));
    let s = rotation(2, 0, p[2])
        * beam_splitter(p[3])
        * squeezer(2, 0, p[4])
        * squeezer(2, 1, p[5])
        * rotation(2, 1, p[6])
        * beam_splitter(p[7]);
    let omega = symplectic_form(2);
    assert!((&s * &omega * s.transpose() - omega).amax() < 1e-10);
    let d = DVector::from_vec(vec![p[8], p[9], p[10], p[11]]);
    let t = SymplecticTransform::new(s, d).unwrap();
    GaussianState::new(DVector::zeros(4), thermal)
        .unwrap()
        .apply_symplectic(&t)
        .unwrap()
}

/// Oracle `[n1, n2, var_q, var_p, mean_q, mean_p, bbdag, w]` of a TMSV at
/// truncation `dim`, with the D / D+5 convergence check.
pub fn oracle_tmsv(r: f64, dim: usize, cap: usize) -> fock::Converged<Vec<f64>> {
    let space = FockSpace::with_caps(2, dim, cap, 256).unwrap();
    fock::with_convergence(&space, |s| {
        let t = fock::tmsv_state(s, r)?;
        Ok(fock::expectations(FockInput::Pure(&t.vector), s, 1.0, 1.0)?.to_vec())
    })
    .unwrap()
}
