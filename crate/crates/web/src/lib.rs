//! Browser bindings for three interactive views: the parametric-amplifier
//! gain curve, a Raman amplifier trajectory, and quadrature noise against the
//! homodyne phase.

use epr_amp::metrology::{self, Observable};
use epr_amp::{pq, raman, GaussianState, PqAmpParams, RamanParams, SymplecticTransform};
use nalgebra::{DMatrix, DVector};
use wasm_bindgen::prelude::*;

/// Sampled curves sharing one abscissa.
#[wasm_bindgen]
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    x: Vec<f64>,
    n1: Vec<f64>,
    n2: Vec<f64>,
    suppression: Vec<f64>,
}

#[wasm_bindgen]
impl Curve {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn n1(&self) -> Vec<f64> {
        self.n1.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn n2(&self) -> Vec<f64> {
        self.n2.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn suppression(&self) -> Vec<f64> {
        self.suppression.clone()
    }
}

fn grid(max: f64, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least 2 points".into());
    }
    if !(max > 0.0) || !max.is_finite() {
        return Err(format!("range must be finite and > 0, got {max}"));
    }
    Ok((0..points).map(|i| max * i as f64 / (points - 1) as f64).collect())
}

fn opo(r: f64, epsilon: f64) -> Result<GaussianState, String> {
    GaussianState::vacuum(2)
        .and_then(|v| v.two_mode_squeeze(r, epsilon))
        .map_err(|e| e.to_string())
}

fn push(c: &mut Curve, x: f64, s: &GaussianState, eps: f64) -> Result<(), String> {
    let err = |e: epr_amp::Error| e.to_string();
    c.x.push(x);
    c.n1.push(s.mean_photon_number(0).map_err(err)?);
    c.n2.push(s.mean_photon_number(1).map_err(err)?);
    c.suppression.push(metrology::epr_suppression(s, eps).map_err(err)?.level);
    Ok(())
}

fn empty() -> Curve {
    Curve {
        x: Vec::new(),
        n1: Vec::new(),
        n2: Vec::new(),
        suppression: Vec::new(),
    }
}

/// Photon numbers and EPR suppression of an OPO pair (squeezing `r`) after
/// the `kPQ` amplifier, against `μ = kt/2` in `[0, mu_max]`.
#[wasm_bindgen]
pub fn pq_gain_curve(r: f64, epsilon: f64, mu_max: f64, points: usize) -> Result<Curve, String> {
    let input = opo(r, epsilon)?;
    let mut c = empty();
    for mu in grid(mu_max, points)? {
        let p = PqAmpParams::from_mu(mu, epsilon).map_err(|e| e.to_string())?;
        let s = pq::evolve(&input, &p).map_err(|e| e.to_string())?;
        push(&mut c, mu, &s, epsilon)?;
    }
    Ok(c)
}

/// Photon numbers and EPR suppression along a Raman amplifier run over
/// `[0, t_max]`.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn raman_trajectory(
    r: f64,
    g: f64,
    gamma_perp: f64,
    n0: f64,
    n1: f64,
    t_max: f64,
    points: usize,
) -> Result<Curve, String> {
    let p = RamanParams::new(g, gamma_perp, n0, n1, 1.0).map_err(|e| e.to_string())?;
    let times = grid(t_max, points)?;
    let mut s = opo(r, 1.0)?;
    let mut c = empty();
    for (i, &t) in times.iter().enumerate() {
        if i > 0 {
            s = raman::evolve_moments(&s, &p, t - times[i - 1], 20).map_err(|e| e.to_string())?;
        }
        push(&mut c, t, &s, 1.0)?;
    }
    Ok(c)
}

/// Noise relative to shot noise against a phase `φ` in `[0, 2π]`, as three
/// consecutive blocks of `points` values: `X(φ)` on mode 1, then Q and P
/// measured with the second mode's local oscillator rotated by `φ`.
#[wasm_bindgen]
pub fn quadrature_noise(r: f64, points: usize) -> Result<Vec<f64>, String> {
    let s = opo(r, 1.0)?;
    let phases = grid(std::f64::consts::TAU, points)?;
    let err = |e: epr_amp::Error| e.to_string();
    let mut single = Vec::with_capacity(points);
    let mut q = Vec::with_capacity(points);
    let mut p = Vec::with_capacity(points);
    for &phi in &phases {
        single.push(metrology::squeezing_level(&s, 0, phi).map_err(err)?.level);
        let rotated = s.apply_symplectic(&rotate_mode2(phi)).map_err(err)?;
        q.push(
            metrology::zero_frequency_spectrum(&rotated, Observable::Q { epsilon: 1.0 })
                .map_err(err)?
                .level,
        );
        p.push(
            metrology::zero_frequency_spectrum(&rotated, Observable::P { epsilon: 1.0 })
                .map_err(err)?
                .level,
        );
    }
    single.extend(q);
    single.extend(p);
    Ok(single)
}

fn rotate_mode2(phi: f64) -> SymplecticTransform {
    let (sn, cs) = phi.sin_cos();
    let mut m = DMatrix::identity(4, 4);
    m[(2, 2)] = cs;
    m[(2, 3)] = sn;
    m[(3, 2)] = -sn;
    m[(3, 3)] = cs;
    SymplecticTransform::new(m, DVector::zeros(4)).expect("rotations are symplectic")
}
