//! Concrete matrix realizations of compact homogeneous spaces `G/K`, deformed
//! invariant metrics of the form `λ₁ B|_{m₁} + ⋯ + λ_s B|_{m_s}`, and closed-form
//! two-step geodesics `t ↦ π(exp(tX)·exp(tY))` together with the numerical
//! machinery to certify them: structural checks on the reductive decomposition,
//! Koszul-term identities, a Nomizu-operator geodesic defect, and an independent
//! Runge–Kutta oracle compared at the coset level.

pub mod catalog;
pub mod geodesic;
pub mod lie;
pub mod ode;
pub mod preset;
pub mod report;
pub mod root;
pub mod schema;
pub mod space;
pub mod subspace;

pub use geodesic::{coset_distance, verify_two_step, BodyVelocity, TwoStepCurve, VerifyConfig};
pub use lie::{AlgebraVector, FormKind, GroupElement, LieError, MatrixLieAlgebra};
pub use ode::{integrate_geodesic, OdeSample};
pub use report::{CheckEntry, VerificationReport};
pub use space::{HomogeneousSpace, SpaceError};
pub use subspace::Subspace;

use serde::Serialize;

/// Numerical tolerances shared across checks and verification runs.
///
/// `tol_alg` guards algebraic identities (closure, invariance, orthogonality),
/// `tol_ode` the coset-level comparison against the integrated oracle, and
/// `tol_defect` the pointwise geodesic defect of the closed form.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Tolerances {
    pub tol_alg: f64,
    pub tol_ode: f64,
    pub tol_defect: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            tol_alg: 1e-9,
            tol_ode: 1e-6,
            tol_defect: 1e-8,
        }
    }
}

impl Tolerances {
    /// Tolerances with the coset tolerance replaced; the defect tolerance
    /// keeps its default ratio of 1/100 of the coset tolerance.
    pub fn with_tol_ode(mut self, tol_ode: f64) -> Self {
        self.tol_ode = tol_ode;
        self.tol_defect = tol_ode / 100.0;
        self
    }

    pub fn with_tol_alg(mut self, tol_alg: f64) -> Self {
        self.tol_alg = tol_alg;
        self
    }
}

/// Default fixed step for the Runge–Kutta oracle.
pub const DEFAULT_RK_STEP: f64 = 1e-3;

/// Relative tolerance for the Koszul-term cancellation identities.
pub const KOSZUL_REL_TOL: f64 = 1e-12;

/// `count` evenly spaced samples from `start` to `end` inclusive.
pub fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![start];
    }
    let h = (end - start) / (count - 1) as f64;
    (0..count).map(|i| start + h * i as f64).collect()
}
