use num_complex::Complex64;

use super::sparse::SparseOp;
use super::{c, FockSpace, OperatorMatrix};
use crate::error::{invalid, Result};

/// How `H = k P Q` is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HamiltonianForm {
    /// `(k/2)(P Q + Q P)` with `Q = x1 − ε x2`, `P = p1 + p2/ε` built from
    /// the truncated `x = (a + a†)/2`, `p = (a − a†)/(2i)`. The symmetrization
    /// only matters at the truncation edge, where `P` and `Q` stop commuting.
    Pq,
    /// Expansion in ladder operators:
    /// `i(k/4)[a1†² − a1² − a2†² + a2² + (1/ε)(a1†a2† − a1a2)(1 − ε²)
    ///  + (1/ε)(a1a2† − a1†a2)(1 + ε²)]`.
    Photonic,
}

pub(crate) fn epr_operators(space: &FockSpace, epsilon: f64) -> (SparseOp, SparseOp) {
    let ops = space.mode_ops();
    let q = ops[0].x.add(&ops[1].x.scale(c(-epsilon)));
    let p = ops[0].p.add(&ops[1].p.scale(c(1.0 / epsilon)));
    (q, p)
}

pub(crate) fn pq_hamiltonian_sparse(
    space: &FockSpace,
    k: f64,
    epsilon: f64,
    form: HamiltonianForm,
) -> Result<SparseOp> {
    if space.n_modes() != 2 {
        return Err(invalid("pq Hamiltonian needs a 2-mode space"));
    }
    crate::check_unit_epsilon(epsilon, "pq Hamiltonian")?;
    Ok(match form {
        HamiltonianForm::Pq => {
            let (q, p) = epr_operators(space, epsilon);
            p.mul(&q).add(&q.mul(&p)).scale(c(k / 2.0))
        }
        HamiltonianForm::Photonic => {
            let ops = space.mode_ops();
            let (a1, a1d, a2, a2d) = (&ops[0].a, &ops[0].ad, &ops[1].a, &ops[1].ad);
            let e = epsilon;
            let terms = [
                (a1d.mul(a1d), 1.0),
                (a1.mul(a1), -1.0),
                (a2d.mul(a2d), -1.0),
                (a2.mul(a2), 1.0),
                (a1d.mul(a2d), (1.0 - e * e) / e),
                (a1.mul(a2), -(1.0 - e * e) / e),
                (a1.mul(a2d), (1.0 + e * e) / e),
                (a1d.mul(a2), -(1.0 + e * e) / e),
            ];
            let zero = SparseOp::identity(space.total_dim()).scale(c(0.0));
            terms
                .iter()
                .fold(zero, |acc, (op, w)| acc.add(&op.scale(c(*w))))
                .scale(Complex64::new(0.0, k / 4.0))
        }
    })
}

/// `H = k P Q` on a 2-mode space in the requested form.
pub fn pq_hamiltonian(
    space: &FockSpace,
    k: f64,
    epsilon: f64,
    form: HamiltonianForm,
) -> Result<OperatorMatrix> {
    let h = pq_hamiltonian_sparse(space, k, epsilon, form)?;
    OperatorMatrix::hermitian(h.to_dense())
}
