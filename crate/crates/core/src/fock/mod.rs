//! Brute-force truncated number-basis simulator.
//!
//! This is the reference the Gaussian engine is tested against, so it assumes
//! nothing beyond operator matrices: ladder operators are built from
//! `a|n⟩ = √n |n−1⟩`, Hamiltonians and jump operators are polynomials in
//! them, and states are propagated numerically.
//!
//! Basis ordering: the multi-index `(n1, n2, ...)` maps to
//! `n1·D^(M−1) + n2·D^(M−2) + ...`, mode 1 varying slowest.

mod dynamics;
mod expect;
mod hamiltonian;
pub(crate) mod sparse;
mod states;

pub use dynamics::{evolve_lindblad, evolve_unitary, lindblad_rate_bound};
pub use expect::{expectations, quadrature_variance, Expectations, FockInput};
pub use hamiltonian::{pq_hamiltonian, HamiltonianForm};
pub use states::{coherent_state, number_state, pure_density, tmsv_state, TmsvState};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use sparse::SparseOp;

/// Default cap on the number of amplitudes of a state vector.
pub const DEFAULT_VECTOR_CAP: usize = 4096;
/// Default cap on the side of a density matrix.
pub const DEFAULT_DENSITY_CAP: usize = 256;

/// Tolerance used when verifying that an operator is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Truncation increment of the convergence protocol.
pub const CONVERGENCE_STEP: usize = 5;
/// Largest accepted change of an oracle value between `D` and `D + 5`.
pub const CONVERGENCE_TOL: f64 = 1e-5;

/// Truncated Fock space of `n_modes` modes with `dim` levels each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FockSpace {
    n_modes: usize,
    dim: usize,
    vector_cap: usize,
    density_cap: usize,
}

impl FockSpace {
    pub fn new(n_modes: usize, dim: usize) -> Result<Self> {
        Self::with_caps(n_modes, dim, DEFAULT_VECTOR_CAP, DEFAULT_DENSITY_CAP)
    }

    pub fn with_caps(
        n_modes: usize,
        dim: usize,
        vector_cap: usize,
        density_cap: usize,
    ) -> Result<Self> {
        if n_modes == 0 {
            return Err(invalid("Fock space needs at least one mode"));
        }
        if dim < 2 {
            return Err(invalid(format!("truncation must be >= 2, got {dim}")));
        }
        let total = u32::try_from(n_modes)
            .ok()
            .and_then(|m| dim.checked_pow(m))
            .unwrap_or(usize::MAX);
        if total > vector_cap {
            return Err(Error::Capacity {
                what: "state vector",
                requested: total,
                cap: vector_cap,
            });
        }
        Ok(Self {
            n_modes,
            dim,
            vector_cap,
            density_cap,
        })
    }

    /// Same caps, different truncation.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::with_caps(self.n_modes, dim, self.vector_cap, self.density_cap)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn total_dim(&self) -> usize {
        self.dim.pow(self.n_modes as u32)
    }

    pub fn density_cap(&self) -> usize {
        self.density_cap
    }

    /// Fails unless density matrices on this space fit under the cap.
    pub fn require_density(&self) -> Result<()> {
        if self.total_dim() > self.density_cap {
            return Err(Error::Capacity {
                what: "density matrix",
                requested: self.total_dim(),
                cap: self.density_cap,
            });
        }
        Ok(())
    }

    /// Basis index of the occupation numbers `occ` (one per mode).
    pub fn index(&self, occ: &[usize]) -> usize {
        occ.iter().fold(0, |acc, &n| acc * self.dim + n)
    }

    /// Occupation numbers of basis index `idx`.
    pub fn occupations(&self, mut idx: usize) -> Vec<usize> {
        let mut occ = vec![0; self.n_modes];
        for m in (0..self.n_modes).rev() {
            occ[m] = idx % self.dim;
            idx /= self.dim;
        }
        occ
    }

    /// Whether every mode of basis state `idx` has at most `max_level` photons.
    pub fn is_below(&self, idx: usize, max_level: usize) -> bool {
        self.occupations(idx).iter().all(|&n| n <= max_level)
    }

    fn ladder(&self, mode: usize) -> SparseOp {
        let total = self.total_dim();
        let stride = self.dim.pow((self.n_modes - 1 - mode) as u32);
        let entries: Vec<_> = (0..total)
            .filter_map(|idx| {
                let n = (idx / stride) % self.dim;
                (n > 0).then(|| (idx - stride, idx, c((n as f64).sqrt())))
            })
            .collect();
        SparseOp::from_triplets(total, &entries)
    }

    pub(crate) fn mode_ops(&self) -> Vec<ModeOps> {
        (0..self.n_modes)
            .map(|m| {
                let a = self.ladder(m);
                let ad = a.adjoint();
                let x = a.add(&ad).scale(Complex64::new(0.5, 0.0));
                let p = a.add(&ad.scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(0.0, -0.5));
                ModeOps { a, ad, x, p }
            })
            .collect()
    }
}

/// Sparse ladder, position and momentum operators of one mode.
pub(crate) struct ModeOps {
    pub a: SparseOp,
    pub ad: SparseOp,
    pub x: SparseOp,
    pub p: SparseOp,
}

/// Dense complex operator on a Fock space, optionally certified Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    matrix: DMatrix<Complex64>,
    hermitian: bool,
}

impl OperatorMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(invalid("operator matrix must be square"));
        }
        Ok(Self {
            matrix,
            hermitian: false,
        })
    }

    /// Wraps `matrix` after checking `max |M − M†| ≤ 1e−12`.
    pub fn hermitian(matrix: DMatrix<Complex64>) -> Result<Self> {
        let op = Self::new(matrix)?;
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(invalid(format!(
                "operator is not Hermitian: max |M - M†| = {defect:e}"
            )));
        }
        Ok(Self {
            hermitian: true,
            ..op
        })
    }

    pub(crate) fn from_sparse(op: &SparseOp, hermitian: bool) -> Self {
        Self {
            matrix: op.to_dense(),
            hermitian,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.matrix;
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..=i {
                worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = nalgebra::SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Largest entrywise difference restricted to basis states whose modes all
    /// have at most `max_level` photons.
    pub fn interior_deviation(&self, other: &Self, space: &FockSpace, max_level: usize) -> f64 {
        let keep: Vec<usize> = (0..space.total_dim())
            .filter(|&i| space.is_below(i, max_level))
            .collect();
        let mut worst = 0.0f64;
        for &i in &keep {
            for &j in &keep {
                worst = worst.max((self.matrix[(i, j)] - other.matrix[(i, j)]).norm());
            }
        }
        worst
    }
}

/// Annihilation operators `a_m`, one per mode.
pub fn build_operators(space: &FockSpace) -> Vec<OperatorMatrix> {
    (0..space.n_modes)
        .map(|m| OperatorMatrix::from_sparse(&space.ladder(m), false))
        .collect()
}

/// An oracle value together with its truncation-convergence check.
#[derive(Clone, Debug, PartialEq)]
pub struct Converged<T> {
    /// Values at the requested truncation `D`.
    pub value: T,
    /// Values at `D + 5`.
    pub refined: T,
    /// Largest absolute change between the two.
    pub delta: f64,
}

impl<T> Converged<T> {
    pub fn is_converged(&self) -> bool {
        self.delta <= CONVERGENCE_TOL
    }
}

/// Evaluates `f` at `space` and at `space` with `D + 5` levels.
pub fn with_convergence<F>(space: &FockSpace, f: F) -> Result<Converged<Vec<f64>>>
where
    F: Fn(&FockSpace) -> Result<Vec<f64>>,
{
    let value = f(space)?;
    let refined = f(&space.with_dim(space.dim() + CONVERGENCE_STEP)?)?;
    let delta = value
        .iter()
        .zip(&refined)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Converged {
        value,
        refined,
        delta,
    })
}

pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub(crate) fn norm_sqr(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_ladder() {
        let space = FockSpace::new(1, 2).unwrap();
        let a = &build_operators(&space)[0];
        let expect = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.0), c(0.0)]);
        assert_eq!(a.matrix(), &expect);
    }

    #[test]
    fn interior_commutator_is_exact() {
        let space = FockSpace::new(1, 10).unwrap();
        let a = build_operators(&space)[0].matrix().clone();
        let comm = &a * a.adjoint() - a.adjoint() * &a - DMatrix::identity(10, 10);
        // Only rounding of √n·√n survives on the interior.
        for i in 0..9 {
            for j in 0..9 {
                assert!(comm[(i, j)].norm() <= 4.0 * f64::EPSILON * 10.0);
            }
        }
        assert!((comm[(9, 9)] + c(10.0)).norm() < 1e-12);
    }

    #[test]
    fn modes_commute() {
        let space = FockSpace::new(2, 10).unwrap();
        let ops = build_operators(&space);
        let (a1, a2) = (ops[0].matrix(), ops[1].matrix());
        assert_eq!((a1 * a2 - a2 * a1).camax(), 0.0);
        assert_eq!((a1 * a2.adjoint() - a2.adjoint() * a1).camax(), 0.0);
    }

    #[test]
    fn index_round_trip_and_ordering() {
        let space = FockSpace::new(2, 7).unwrap();
        assert_eq!(space.index(&[1, 0]), 7);
        assert_eq!(space.index(&[0, 1]), 1);
        for i in 0..space.total_dim() {
            assert_eq!(space.index(&space.occupations(i)), i);
        }
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(FockSpace::new(2, 65), Err(Error::Capacity { .. })));
        assert!(FockSpace::new(2, 64).is_ok());
        assert!(FockSpace::new(1, 1).is_err());
        let s = FockSpace::new(2, 17).unwrap();
        assert!(matches!(s.require_density(), Err(Error::Capacity { .. })));
        assert!(FockSpace::new(2, 16).unwrap().require_density().is_ok());
    }

    #[test]
    fn hermitian_flag_is_verified() {
        let space = FockSpace::new(1, 4).unwrap();
        let a = build_operators(&space)[0].matrix().clone();
        assert!(OperatorMatrix::hermitian(a.clone()).is_err());
        let x = (&a + a.adjoint()) * c(0.5);
        assert!(OperatorMatrix::hermitian(x).unwrap().is_hermitian());
    }
}
