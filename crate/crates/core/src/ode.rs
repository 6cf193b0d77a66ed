//! Classical fixed-step fourth-order Runge–Kutta for autonomous linear systems.
//!
//! The step count is chosen by the caller, so a given input always performs the
//! same floating-point operations in the same order.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A state that can be combined linearly by the integrator.
pub trait OdeState: Clone {
    /// `self + h * other`
    fn add_scaled(&self, other: &Self, h: f64) -> Self;

    fn is_finite(&self) -> bool;
}

impl OdeState for DVector<f64> {
    fn add_scaled(&self, other: &Self, h: f64) -> Self {
        self + other * h
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl OdeState for DMatrix<f64> {
    fn add_scaled(&self, other: &Self, h: f64) -> Self {
        self + other * h
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

impl OdeState for DMatrix<Complex64> {
    fn add_scaled(&self, other: &Self, h: f64) -> Self {
        self + other * Complex64::new(h, 0.0)
    }

    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl<A: OdeState, B: OdeState> OdeState for (A, B) {
    fn add_scaled(&self, other: &Self, h: f64) -> Self {
        (self.0.add_scaled(&other.0, h), self.1.add_scaled(&other.1, h))
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite() && self.1.is_finite()
    }
}

/// One RK4 step of `dy/dt = f(y)`.
pub fn rk4_step<S, F>(y: &S, h: f64, f: &F) -> S
where
    S: OdeState,
    F: Fn(&S) -> S,
{
    let k1 = f(y);
    let k2 = f(&y.add_scaled(&k1, h / 2.0));
    let k3 = f(&y.add_scaled(&k2, h / 2.0));
    let k4 = f(&y.add_scaled(&k3, h));
    y.add_scaled(&k1, h / 6.0)
        .add_scaled(&k2, h / 3.0)
        .add_scaled(&k3, h / 3.0)
        .add_scaled(&k4, h / 6.0)
}

/// Integrates over `[0, t]` in `steps` equal steps. Fails as soon as
/// a non-finite value appears, reporting the index of the offending step.
pub fn integrate<S, F>(y0: &S, t: f64, steps: usize, f: F) -> Result<S, usize>
where
    S: OdeState,
    F: Fn(&S) -> S,
{
    let h = t / steps as f64;
    let mut y = y0.clone();
    for step in 0..steps {
        let next = rk4_step(&y, h, &f);
        if !next.is_finite() {
            return Err(step);
        }
        y = next;
    }
    Ok(y)
}
