//! Multimode Gaussian states: first and second moments of the quadratures,
//! symplectic (Heisenberg-picture) transformations and the EPR statistics of
//! modes 1 and 2.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{invalid, Error, Result};

/// Variance of `x` and of `p` in the vacuum.
pub const VACUUM_VARIANCE: f64 = 0.25;

/// Tolerance on the uncertainty relation (smallest symplectic eigenvalue).
pub const UNCERTAINTY_TOL: f64 = 1e-9;

/// Tolerance on `S Ω Sᵀ = Ω` when accepting a transform.
pub const SYMPLECTIC_TOL: f64 = 1e-9;

/// Block-diagonal symplectic form with 2×2 blocks `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Mean vector and covariance matrix of an `n`-mode Gaussian state.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Builds a state from its moments. The covariance is symmetrized and the
    /// uncertainty relation is checked.
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || dim % 2 != 0 {
            return Err(invalid(format!(
                "mean must have even nonzero length, got {dim}"
            )));
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(invalid(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                cov.nrows(),
                cov.ncols()
            )));
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("state moments must be finite"));
        }
        let state = Self {
            mean,
            cov: symmetrize(&cov),
        };
        let nu = state.min_symplectic_eigenvalue();
        if nu < VACUUM_VARIANCE - UNCERTAINTY_TOL {
            return Err(invalid(format!(
                "covariance violates the uncertainty relation: smallest symplectic eigenvalue {nu}"
            )));
        }
        Ok(state)
    }

    // Internal constructor for results of operations that preserve validity.
    fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self {
            mean,
            cov: symmetrize(&cov),
        }
    }

    /// The `n`-mode vacuum.
    pub fn vacuum(n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(invalid("n_modes must be at least 1"));
        }
        let dim = 2 * n_modes;
        Ok(Self {
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * VACUUM_VARIANCE,
        })
    }

    /// Product of coherent states with complex amplitudes `(re, im)` per mode.
    pub fn coherent(amplitudes: &[(f64, f64)]) -> Result<Self> {
        let mut state = Self::vacuum(amplitudes.len())?;
        for (m, &(re, im)) in amplitudes.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(invalid("coherent amplitudes must be finite"));
            }
            state.mean[2 * m] = re;
            state.mean[2 * m + 1] = im;
        }
        Ok(state)
    }

    pub fn n_modes(&self) -> usize {
        self.mean.len() / 2
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes() {
            Err(invalid(format!(
                "mode index {mode} out of range for {} modes",
                self.n_modes()
            )))
        } else {
            Ok(())
        }
    }

    fn require_two_modes(&self) -> Result<()> {
        if self.n_modes() < 2 {
            Err(invalid(format!(
                "operation needs at least 2 modes, state has {}",
                self.n_modes()
            )))
        } else {
            Ok(())
        }
    }

    /// Symmetrized second moment `⟨{r_i, r_j}⟩ / 2` (not centred).
    pub fn second_moment(&self, i: usize, j: usize) -> f64 {
        self.cov[(i, j)] + self.mean[i] * self.mean[j]
    }

    /// Symplectic eigenvalues in ascending order.
    ///
    /// They are the square roots of the eigenvalues of the positive matrix
    /// `V^{1/2} Ωᵀ V Ω V^{1/2}`, each of which appears twice.
    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        let n = self.n_modes();
        let eig = SymmetricEigen::new(self.cov.clone());
        let sqrt_diag = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        let root = &eig.eigenvectors
            * DMatrix::from_diagonal(&sqrt_diag)
            * eig.eigenvectors.transpose();
        let omega = symplectic_form(n);
        let inner = &root * omega.transpose() * &self.cov * &omega * &root;
        let mut values: Vec<f64> = SymmetricEigen::new(symmetrize(&inner))
            .eigenvalues
            .iter()
            .map(|v| v.max(0.0).sqrt())
            .collect();
        values.sort_by(f64::total_cmp);
        values.into_iter().step_by(2).collect()
    }

    pub fn min_symplectic_eigenvalue(&self) -> f64 {
        self.symplectic_eigenvalues()
            .first()
            .copied()
            .unwrap_or(f64::NAN)
    }

    /// `Var(X(θ))` of mode `mode`, with `X(θ) = 2(x cos θ + p sin θ)`.
    pub fn quadrature_variance(&self, mode: usize, theta: f64) -> Result<f64> {
        self.check_mode(mode)?;
        let (xx, pp, xp) = (
            self.cov[(2 * mode, 2 * mode)],
            self.cov[(2 * mode + 1, 2 * mode + 1)],
            self.cov[(2 * mode, 2 * mode + 1)],
        );
        let (s, c) = theta.sin_cos();
        Ok(4.0 * (xx * c * c + pp * s * s + 2.0 * xp * s * c))
    }

    /// `⟨a†a⟩ = ⟨x²⟩ + ⟨p²⟩ − 1/2` for mode `mode`.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let (x, p) = (2 * mode, 2 * mode + 1);
        Ok(self.second_moment(x, x) + self.second_moment(p, p) - 0.5)
    }

    /// `W = ⟨a1 a2 + a1† a2†⟩`
    pub fn pair_coherence(&self) -> Result<f64> {
        self.require_two_modes()?;
        Ok(2.0 * (self.second_moment(0, 2) - self.second_moment(1, 3)))
    }

    /// Means and variances of `Q = x1 − ε x2` and `P = p1 + p2/ε`.
    pub fn epr_moments(&self, epsilon: f64) -> Result<EprMoments> {
        self.require_two_modes()?;
        if epsilon == 0.0 || !epsilon.is_finite() {
            return Err(invalid(format!(
                "epsilon must be finite and nonzero, got {epsilon}"
            )));
        }
        let q = epr_q_weights(self.n_modes(), epsilon);
        let p = epr_p_weights(self.n_modes(), epsilon);
        Ok(EprMoments {
            epsilon,
            mean_q: q.dot(&self.mean),
            mean_p: p.dot(&self.mean),
            var_q: (q.transpose() * &self.cov * &q)[(0, 0)].max(0.0),
            var_p: (p.transpose() * &self.cov * &p)[(0, 0)].max(0.0),
        })
    }

    /// Applies `mean → S mean + d`, `cov → S cov Sᵀ`.
    pub fn apply_symplectic(&self, t: &SymplecticTransform) -> Result<Self> {
        if t.s.nrows() != self.mean.len() {
            return Err(invalid(format!(
                "transform acts on dimension {}, state has dimension {}",
                t.s.nrows(),
                self.mean.len()
            )));
        }
        Ok(self.transformed(&t.s, &t.d))
    }

    pub(crate) fn transformed(&self, s: &DMatrix<f64>, d: &DVector<f64>) -> Self {
        Self::from_parts(s * &self.mean + d, s * &self.cov * s.transpose())
    }

    /// Two-mode squeezer on modes 1 and 2 that multiplies `Q` and `P` by
    /// `exp(−ε r)` and their conjugates by `exp(ε r)`.
    pub fn two_mode_squeeze(&self, r: f64, epsilon: f64) -> Result<Self> {
        self.require_two_modes()?;
        let t = SymplecticTransform::two_mode_squeezer(self.n_modes(), r, epsilon)?;
        self.apply_symplectic(&t)
    }
}

pub(crate) fn epr_q_weights(n_modes: usize, epsilon: f64) -> DVector<f64> {
    let mut w = DVector::zeros(2 * n_modes);
    w[0] = 1.0;
    w[2] = -epsilon;
    w
}

pub(crate) fn epr_p_weights(n_modes: usize, epsilon: f64) -> DVector<f64> {
    let mut w = DVector::zeros(2 * n_modes);
    w[1] = 1.0;
    w[3] = 1.0 / epsilon;
    w
}

/// Means and variances of the EPR operators `Q` and `P` at a given `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EprMoments {
    pub epsilon: f64,
    pub mean_q: f64,
    pub mean_p: f64,
    pub var_q: f64,
    pub var_p: f64,
}

impl EprMoments {
    /// `⟨Q² + P²⟩`, including the means.
    pub fn second_moment_sum(&self) -> f64 {
        self.var_q + self.var_p + self.mean_q * self.mean_q + self.mean_p * self.mean_p
    }
}

/// Affine symplectic map `r → S r + d` on the quadrature vector.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticTransform {
    s: DMatrix<f64>,
    d: DVector<f64>,
}

impl SymplecticTransform {
    pub fn new(s: DMatrix<f64>, d: DVector<f64>) -> Result<Self> {
        let dim = s.nrows();
        if dim == 0 || dim % 2 != 0 || s.ncols() != dim || d.len() != dim {
            return Err(invalid(format!(
                "transform shapes {}x{} and {} are inconsistent",
                s.nrows(),
                s.ncols(),
                d.len()
            )));
        }
        let defect = symplectic_defect(&s);
        if !(defect <= SYMPLECTIC_TOL) || d.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTransform(format!(
                "S Ω Sᵀ deviates from Ω by {defect:e}"
            )));
        }
        Ok(Self { s, d })
    }

    pub fn identity(n_modes: usize) -> Self {
        let dim = 2 * n_modes;
        Self {
            s: DMatrix::identity(dim, dim),
            d: DVector::zeros(dim),
        }
    }

    pub fn displacement(d: DVector<f64>) -> Result<Self> {
        let dim = d.len();
        Self::new(DMatrix::identity(dim, dim), d)
    }

    /// Two-mode squeezer acting on modes 1 and 2, constructed as a diagonal
    /// scaling in the basis `(Q, Q', P, P')` with `Q' = x1 + ε x2` and
    /// `P' = p1 − ε p2`.
    pub fn two_mode_squeezer(n_modes: usize, r: f64, epsilon: f64) -> Result<Self> {
        if n_modes < 2 {
            return Err(invalid("two-mode squeezer needs at least 2 modes"));
        }
        if !r.is_finite() {
            return Err(invalid(format!("squeezing parameter must be finite, got {r}")));
        }
        crate::check_unit_epsilon(epsilon, "two_mode_squeeze")?;
        let e = epsilon;
        // Rows are Q, Q', P, P' in the (x1, p1, x2, p2) basis; T Tᵀ = 2 I.
        #[rustfmt::skip]
        let basis = DMatrix::from_row_slice(4, 4, &[
            1.0, 0.0, -e, 0.0,
            1.0, 0.0, e, 0.0,
            0.0, 1.0, 0.0, e,
            0.0, 1.0, 0.0, -e,
        ]);
        let shrink = (-e * r).exp();
        let grow = (e * r).exp();
        let scale = DMatrix::from_diagonal(&DVector::from_vec(vec![shrink, grow, shrink, grow]));
        let block = basis.transpose() * scale * &basis * 0.5;

        let dim = 2 * n_modes;
        let mut s = DMatrix::identity(dim, dim);
        s.view_mut((0, 0), (4, 4)).copy_from(&block);
        Self::new(s, DVector::zeros(dim))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn displacement_vector(&self) -> &DVector<f64> {
        &self.d
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &SymplecticTransform) -> Result<Self> {
        if self.s.nrows() != first.s.nrows() {
            return Err(invalid("cannot compose transforms of different dimension"));
        }
        Self::new(&self.s * &first.s, &self.s * &first.d + &self.d)
    }
}

/// Largest entrywise deviation of `S Ω Sᵀ` from `Ω`.
pub fn symplectic_defect(s: &DMatrix<f64>) -> f64 {
    let omega = symplectic_form(s.nrows() / 2);
    (s * &omega * s.transpose() - omega).amax()
}
