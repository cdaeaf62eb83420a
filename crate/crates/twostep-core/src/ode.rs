//! Independent geodesic oracle: classical fixed-step RK4 on the horizontal
//! lift `ġ = g·x`, `ẋ = −U(x, x)` with `x(0) = v0`, `g(0) = I`. Any lift
//! projects to the same geodesic of `G/K`; the horizontal gauge (κ = 0) gives
//! the simplest well-posed system. Deformed-metric speed is a first integral
//! and is monitored as a step-size guard.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::geodesic::GeodesicError;
use crate::lie::{AlgebraVector, CMat, GroupElement};
use crate::space::HomogeneousSpace;

/// One trajectory sample.
#[derive(Clone, Debug)]
pub struct OdeSample {
    pub t: f64,
    pub g: GroupElement,
    /// Body velocity as an m-vector in algebra coefficients.
    pub velocity: AlgebraVector,
}

fn rhs(space: &HomogeneousSpace, g: &CMat, x: &DVector<f64>) -> (CMat, DVector<f64>) {
    let x_mat = space.algebra.matrix_of(&space.from_m_coeffs(x));
    let dg = g * x_mat;
    let dx = -space.nomizu_quadratic_mcoeffs(x);
    (dg, dx)
}

/// Integrates the geodesic with initial velocity `v0 ∈ m` up to `t_end`,
/// sampling every `out_stride` steps (the initial point and the endpoint are
/// always included). The step is adjusted to divide `t_end` evenly.
///
/// Fails with `StepTooLarge` when the deformed-metric speed drifts by more
/// than `100·tol_ode` per unit time.
pub fn integrate_geodesic(
    space: &HomogeneousSpace,
    v0: &AlgebraVector,
    t_end: f64,
    step: f64,
    out_stride: usize,
    tol_ode: f64,
) -> Result<Vec<OdeSample>, GeodesicError> {
    assert!(step > 0.0 && t_end > 0.0, "step and t_end must be positive");
    space.require_in_m(v0, 1e-6)?;
    let n_steps = (t_end / step).round().max(1.0) as usize;
    let h = t_end / n_steps as f64;
    let stride = out_stride.max(1);

    let n = space.algebra.ambient_dim();
    let mut g = CMat::identity(n, n);
    let mut x = space.m_coeffs(v0);
    let energy0 = space.deformed_dot(&x, &x);

    let mut samples = Vec::with_capacity(n_steps / stride + 2);
    samples.push(OdeSample {
        t: 0.0,
        g: GroupElement::from_matrix(g.clone()),
        velocity: space.from_m_coeffs(&x),
    });

    let half = Complex64::new(0.5 * h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for k in 0..n_steps {
        let (kg1, kx1) = rhs(space, &g, &x);
        let (kg2, kx2) = rhs(space, &(&g + &kg1 * half), &(&x + &kx1 * (0.5 * h)));
        let (kg3, kx3) = rhs(space, &(&g + &kg2 * half), &(&x + &kx2 * (0.5 * h)));
        let (kg4, kx4) = rhs(
            space,
            &(&g + &kg3 * Complex64::new(h, 0.0)),
            &(&x + &kx3 * h),
        );
        g += (kg1 + kg2 * two + kg3 * two + kg4) * sixth;
        x += (kx1 + kx2 * 2.0 + kx3 * 2.0 + kx4) * (h / 6.0);

        let t = (k + 1) as f64 * h;
        let drift = (space.deformed_dot(&x, &x) - energy0).abs();
        if drift > 100.0 * tol_ode * t.max(1.0) {
            return Err(GeodesicError::StepTooLarge { t, drift });
        }
        if (k + 1) % stride == 0 || k + 1 == n_steps {
            samples.push(OdeSample {
                t,
                g: GroupElement::from_matrix(g.clone()),
                velocity: space.from_m_coeffs(&x),
            });
        }
    }
    Ok(samples)
}
