use nalgebra::DVector;
use num_complex::Complex64;

use super::hamiltonian::epr_operators;
use super::sparse::SparseOp;
use super::{c, norm_sqr, FockSpace, OperatorMatrix};
use crate::error::{invalid, Result};

/// Largest accepted deviation of the norm (pure) or trace (mixed) from 1.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// A pure or mixed state on a [`FockSpace`].
#[derive(Clone, Copy, Debug)]
pub enum FockInput<'a> {
    Pure(&'a DVector<Complex64>),
    Mixed(&'a OperatorMatrix),
}

impl FockInput<'_> {
    fn dim(&self) -> usize {
        match self {
            FockInput::Pure(v) => v.len(),
            FockInput::Mixed(rho) => rho.dim(),
        }
    }

    fn normalization(&self) -> f64 {
        match self {
            FockInput::Pure(v) => norm_sqr(v),
            FockInput::Mixed(rho) => rho.trace().re,
        }
    }

    fn expect(&self, op: &SparseOp) -> Complex64 {
        match self {
            FockInput::Pure(v) => v.dotc(&op.mul_vec(v)),
            FockInput::Mixed(rho) => op.trace_with(rho.matrix()),
        }
    }

    /// `⟨A B⟩`
    fn expect2(&self, a: &SparseOp, b: &SparseOp) -> Complex64 {
        match self {
            FockInput::Pure(v) => v.dotc(&a.mul_vec(&b.mul_vec(v))),
            FockInput::Mixed(rho) => b.trace_with(&a.right_mul(rho.matrix())),
        }
    }
}

/// Oracle expectation values on a 2-mode space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Expectations {
    pub n1: f64,
    pub n2: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
    /// `⟨B B†⟩` with `B = g (a1 − ε a2†)`.
    pub bbdag: f64,
    /// `⟨a1 a2 + a1† a2†⟩`
    pub w: f64,
    /// Largest imaginary part among the (nominally real) values above.
    pub imag_residue: f64,
}

impl Expectations {
    /// `[n1, n2, var_q, var_p, mean_q, mean_p, bbdag, w]`
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.n1,
            self.n2,
            self.var_q,
            self.var_p,
            self.mean_q,
            self.mean_p,
            self.bbdag,
            self.w,
        ]
    }
}

pub fn expectations(
    input: FockInput<'_>,
    space: &FockSpace,
    epsilon: f64,
    g: f64,
) -> Result<Expectations> {
    if space.n_modes() != 2 {
        return Err(invalid("expectations are defined on 2-mode spaces"));
    }
    if input.dim() != space.total_dim() {
        return Err(invalid(format!(
            "state has dimension {}, space has {}",
            input.dim(),
            space.total_dim()
        )));
    }
    let norm = input.normalization();
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(invalid(format!("state is not normalized: {norm}")));
    }
    crate::check_unit_epsilon(epsilon, "expectations")?;

    let ops = space.mode_ops();
    let (a1, a1d, a2, a2d) = (&ops[0].a, &ops[0].ad, &ops[1].a, &ops[1].ad);
    let (q, p) = epr_operators(space, epsilon);
    let b = a1.add(&a2d.scale(c(-epsilon)));
    let bd = b.adjoint();

    let values = [
        input.expect2(a1d, a1),
        input.expect2(a2d, a2),
        input.expect(&q),
        input.expect(&p),
        input.expect2(&q, &q),
        input.expect2(&p, &p),
        input.expect2(&b, &bd) * c(g * g),
        input.expect2(a1, a2) + input.expect2(a1d, a2d),
    ];
    let imag_residue = values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let [n1, n2, mq, mp, qq, pp, bbdag, w] = values.map(|z| z.re);
    Ok(Expectations {
        n1,
        n2,
        mean_q: mq,
        mean_p: mp,
        var_q: qq - mq * mq,
        var_p: pp - mp * mp,
        bbdag,
        w,
        imag_residue,
    })
}

/// `Var(X(θ))` of `mode` with `X(θ) = a† e^{iθ} + a e^{−iθ}`.
pub fn quadrature_variance(
    input: FockInput<'_>,
    space: &FockSpace,
    mode: usize,
    theta: f64,
) -> Result<f64> {
    if mode >= space.n_modes() || input.dim() != space.total_dim() {
        return Err(invalid("mode or state does not match the space"));
    }
    let ops = space.mode_ops();
    let phase = Complex64::from_polar(1.0, theta);
    let x = ops[mode].ad.scale(phase).add(&ops[mode].a.scale(phase.conj()));
    let mean = input.expect(&x).re;
    Ok(input.expect2(&x, &x).re - mean * mean)
}
