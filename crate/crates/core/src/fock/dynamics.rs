use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::sparse::SparseOp;
use super::{c, norm_sqr, FockSpace, OperatorMatrix, HERMITIAN_TOL};
use crate::error::{invalid, Error, Result};
use crate::ode;
use crate::raman::RamanParams;

/// Largest `‖H‖·dt` per Taylor step.
const TAYLOR_STEP_NORM: f64 = 0.5;
/// Terms of the Taylor series below this norm are dropped.
const TAYLOR_TOL: f64 = 1e-18;
const TAYLOR_MAX_TERMS: usize = 64;

/// `exp(−i H t) ψ`, by repeated Taylor steps with `‖H‖ dt ≤ 0.5` summed to
/// machine precision.
pub fn evolve_unitary(
    state: &DVector<Complex64>,
    h: &OperatorMatrix,
    t: f64,
) -> Result<DVector<Complex64>> {
    if state.len() != h.dim() {
        return Err(invalid(format!(
            "state has dimension {}, Hamiltonian {}",
            state.len(),
            h.dim()
        )));
    }
    if !t.is_finite() {
        return Err(invalid(format!("t must be finite, got {t}")));
    }
    if !h.is_hermitian() && h.hermiticity_defect() > HERMITIAN_TOL {
        return Err(invalid("Hamiltonian is not Hermitian"));
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let hs = SparseOp::from_dense(h.matrix());
    let steps = ((hs.inf_norm() * t.abs() / TAYLOR_STEP_NORM).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let factor = Complex64::new(0.0, -dt);
    let mut psi = state.clone();
    for _ in 0..steps {
        let mut term = psi.clone();
        let mut sum = psi.clone();
        for j in 1..=TAYLOR_MAX_TERMS {
            term = hs.mul_vec(&term) * (factor / c(j as f64));
            sum += &term;
            if norm_sqr(&term).sqrt() < TAYLOR_TOL {
                break;
            }
        }
        psi = sum;
    }
    if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericOverflow("unitary propagation diverged".into()));
    }
    Ok(psi)
}

// Jump operators and their rates for the Raman master equation.
struct Channels {
    ops: Vec<(f64, SparseOp, SparseOp, SparseOp)>, // (rate, L, L†, L†L)
}

impl Channels {
    fn new(params: &RamanParams, space: &FockSpace) -> Result<Self> {
        if space.n_modes() != 2 {
            return Err(invalid("Raman master equation needs a 2-mode space"));
        }
        let modes = space.mode_ops();
        let b = modes[0]
            .a
            .add(&modes[1].ad.scale(c(-params.epsilon())))
            .scale(c(params.g()));
        let bd = b.adjoint();
        let mut ops = Vec::new();
        for (rate, l, ld) in [
            (params.loss_rate(), b.clone(), bd.clone()),
            (params.gain_rate(), bd, b),
        ] {
            if rate != 0.0 {
                let ldl = ld.mul(&l);
                ops.push((rate, l, ld, ldl));
            }
        }
        Ok(Self { ops })
    }

    fn rhs(&self, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
        for (rate, l, ld, ldl) in &self.ops {
            let jump = ld.right_mul(&l.left_mul(rho)) * c(2.0);
            let anti = ldl.left_mul(rho) + ldl.right_mul(rho);
            out += (jump - anti) * c(*rate);
        }
        out
    }

    fn bound(&self) -> f64 {
        self.ops
            .iter()
            .map(|(rate, l, ld, ldl)| rate * (2.0 * l.inf_norm() * ld.inf_norm() + 2.0 * ldl.inf_norm()))
            .sum()
    }
}

/// Upper bound on the norm of the Raman Lindblad generator on `space`, for
/// choosing RK4 step counts (`t · bound / steps` of order 1 or below).
pub fn lindblad_rate_bound(params: &RamanParams, space: &FockSpace) -> Result<f64> {
    Ok(Channels::new(params, space)?.bound())
}

const DENSITY_TOL: f64 = 1e-9;

/// Integrates the Raman master equation
/// `dρ/dt = Σ κ (2 L ρ L† − L†L ρ − ρ L†L)` with `L = B` at rate `N0/γ⊥` and
/// `L = B†` at rate `N1/γ⊥`, using `steps` RK4 steps.
pub fn evolve_lindblad(
    rho: &OperatorMatrix,
    params: &RamanParams,
    space: &FockSpace,
    t: f64,
    steps: usize,
) -> Result<OperatorMatrix> {
    space.require_density()?;
    if rho.dim() != space.total_dim() {
        return Err(invalid(format!(
            "density matrix has dimension {}, space has {}",
            rho.dim(),
            space.total_dim()
        )));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!("t must be finite and >= 0, got {t}")));
    }
    if steps == 0 {
        return Err(invalid("steps must be at least 1"));
    }
    let defect = rho.hermiticity_defect();
    if defect > DENSITY_TOL {
        return Err(invalid(format!("density matrix is not Hermitian ({defect:e})")));
    }
    let trace = rho.trace();
    if (trace - c(1.0)).norm() > DENSITY_TOL {
        return Err(invalid(format!("density matrix has trace {trace}")));
    }
    let min_ev = rho.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
    if min_ev < -DENSITY_TOL {
        return Err(invalid(format!(
            "density matrix is not positive semidefinite (eigenvalue {min_ev:e})"
        )));
    }
    if t == 0.0 {
        return Ok(rho.clone());
    }
    let channels = Channels::new(params, space)?;
    let out = ode::integrate(rho.matrix(), t, steps, |r| channels.rhs(r)).map_err(|step| {
        Error::NumericOverflow(format!(
            "Lindblad integration produced non-finite values at step {step} of {steps}"
        ))
    })?;
    let mut result = OperatorMatrix::new(out)?;
    result.hermitian = result.hermiticity_defect() <= HERMITIAN_TOL;
    Ok(result)
}
