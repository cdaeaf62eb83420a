//! Closed-form two-step curves `t ↦ π(exp(tX)·exp(tY))` with
//! `X = X_a + λX_b`, `Y = (1−λ)X_b`, `λ = λ_b/λ_a`, and the numerical
//! machinery that certifies they are geodesics of the deformed metric:
//! Koszul-term cancellation, the Nomizu-operator geodesic defect, and a
//! coset-level comparison against an independently integrated trajectory.

use nalgebra::DVector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::lie::{AlgebraVector, GroupElement, LieError};
use crate::ode::integrate_geodesic;
use crate::report::{CheckEntry, ReportConfig, VerificationReport};
use crate::space::{HomogeneousSpace, SpaceError};
use crate::{Tolerances, DEFAULT_RK_STEP, KOSZUL_REL_TOL};

#[derive(Debug, Error)]
pub enum GeodesicError {
    #[error("initial vector is not in split member m_{index} (residual {residual:.3e})")]
    NotInSplitMember { index: usize, residual: f64 },
    #[error("bracket condition [m_a, m_b] ⊆ m_a violated (residual {residual:.3e})")]
    ConditionViolated { residual: f64 },
    #[error("space has no deformation axis (fewer than two split members)")]
    DegenerateSplit,
    #[error("energy drift {drift:.3e} at t = {t:.3} exceeds the step-size guard")]
    StepTooLarge { t: f64, drift: f64 },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A two-step curve determined by initial data `X_a ∈ m_a`, `X_b ∈ m_b` on a
/// split pair with `[m_a, m_b] ⊆ m_a`.
#[derive(Clone, Debug)]
pub struct TwoStepCurve<'a> {
    pub space: &'a HomogeneousSpace,
    pub a_index: usize,
    pub b_index: usize,
    pub x_a: AlgebraVector,
    pub x_b: AlgebraVector,
    /// `λ_b / λ_a`.
    pub lambda: f64,
    /// First exponent `X = X_a + λ X_b`.
    pub x: AlgebraVector,
    /// Second exponent `Y = (1−λ) X_b`.
    pub y: AlgebraVector,
}

/// Left-trivialized velocity data of the curve at one time.
#[derive(Clone, Debug)]
pub struct BodyVelocity {
    pub t: f64,
    /// `w = Ad(α(t)⁻¹)X + Y`.
    pub w: AlgebraVector,
    /// `Y_a(t) = Ad(exp(−tY)) X_a`.
    pub ya: AlgebraVector,
    /// `Y_a(t) + X_b`; equals `proj_m w` when the bracket condition holds.
    pub x_m: AlgebraVector,
    /// `proj_k w`.
    pub kappa: AlgebraVector,
}

/// Shared per-time data used by the Koszul and defect evaluations.
struct Frame {
    ya: AlgebraVector,
    w: AlgebraVector,
    /// m-coefficients of `proj_m w`.
    v_mc: DVector<f64>,
    kappa: AlgebraVector,
    /// `ẇ = [Ad(exp(−tY))X, Y]`.
    w_dot: AlgebraVector,
}

impl<'a> TwoStepCurve<'a> {
    /// Validates membership of the initial data and the bracket condition on
    /// the chosen pair, then assembles the exponents.
    pub fn new(
        space: &'a HomogeneousSpace,
        a_index: usize,
        b_index: usize,
        x_a: AlgebraVector,
        x_b: AlgebraVector,
        tol: f64,
    ) -> Result<Self, GeodesicError> {
        for (index, v) in [(a_index, &x_a), (b_index, &x_b)] {
            let residual = space.split[index].distance_from(&space.algebra, v);
            if residual > tol * space.algebra.b_norm(v).max(1.0) {
                return Err(GeodesicError::NotInSplitMember { index, residual });
            }
        }
        let residual = space.bracket_inclusion(a_index, b_index);
        if residual > tol {
            return Err(GeodesicError::ConditionViolated { residual });
        }
        Ok(Self::new_unchecked(space, a_index, b_index, x_a, x_b))
    }

    /// Assembles the curve without certifying the bracket condition. Used to
    /// demonstrate that the closed form stops being a geodesic when the
    /// hypothesis fails.
    pub fn new_unchecked(
        space: &'a HomogeneousSpace,
        a_index: usize,
        b_index: usize,
        x_a: AlgebraVector,
        x_b: AlgebraVector,
    ) -> Self {
        let lambda = space.lambdas[b_index] / space.lambdas[a_index];
        let x = &x_a + &x_b.scale(lambda);
        let y = x_b.scale(1.0 - lambda);
        Self {
            space,
            a_index,
            b_index,
            x_a,
            x_b,
            lambda,
            x,
            y,
        }
    }

    /// Initial velocity `X_a + X_b`.
    pub fn initial_velocity(&self) -> AlgebraVector {
        &self.x_a + &self.x_b
    }

    /// `exp(tX) · exp(tY)`.
    pub fn point(&self, t: f64) -> GroupElement {
        let a = self.space.algebra.group_exp(&self.x, t);
        let b = self.space.algebra.group_exp(&self.y, t);
        a.compose(&b)
    }

    /// The one-parameter orbit `exp(t(X_a + X_b))` the curve degenerates to
    /// when `λ = 1` or the exponents commute.
    pub fn one_step_point(&self, t: f64) -> GroupElement {
        self.space.algebra.group_exp(&self.initial_velocity(), t)
    }

    fn frame(&self, t: f64) -> Frame {
        let alg = &self.space.algebra;
        let g_y = alg.group_exp(&self.y, -t);
        let (tx, _) = alg.ad_action_lsq(&g_y, &self.x);
        let (ya, _) = alg.ad_action_lsq(&g_y, &self.x_a);
        let w = &tx + &self.y;
        let v_mc = self.space.m_coeffs(&w);
        let kappa = self.space.proj_k(&w);
        let w_dot = alg.bracket(&tx, &self.y);
        Frame {
            ya,
            w,
            v_mc,
            kappa,
            w_dot,
        }
    }

    /// Body velocity `w(t) = Ad(α(t)⁻¹)X + Y` and its decomposition, using
    /// the simplification `Ad(α(t)⁻¹)X = Ad(exp(−tY))X`.
    pub fn body_velocity(&self, t: f64) -> BodyVelocity {
        let f = self.frame(t);
        BodyVelocity {
            t,
            x_m: &f.ya + &self.x_b,
            w: f.w,
            ya: f.ya,
            kappa: f.kappa,
        }
    }

    /// Analytic derivative `ẇ(t) = [Ad(exp(−tY))X, Y]`.
    pub fn body_velocity_derivative(&self, t: f64) -> AlgebraVector {
        self.frame(t).w_dot
    }

    /// The three Koszul terms evaluated at `(t, Z)`:
    /// `T1 = (1−λ)λ_a B(Z, [Y_a, X_b]_m)`, `T2 = (λ−1)λ_a B(Z, [Y_a, X_b]_m)`,
    /// `T3 = 2 B(Z, [Y_a, X_b]_m)(λλ_a − λ_b)`. Their sum vanishes in exact
    /// arithmetic, and `T3 = 0` because `λ = λ_b/λ_a`.
    pub fn koszul_terms(
        &self,
        t: f64,
        z: &AlgebraVector,
        tol: f64,
    ) -> Result<(f64, f64, f64), GeodesicError> {
        self.space.require_in_m(z, tol)?;
        let f = self.frame(t);
        Ok(self.koszul_terms_in_frame(&f, z))
    }

    fn koszul_terms_in_frame(&self, f: &Frame, z: &AlgebraVector) -> (f64, f64, f64) {
        let alg = &self.space.algebra;
        let br_m = self.space.proj_m(&alg.bracket(&f.ya, &self.x_b));
        let s = alg.b_inner(z, &br_m);
        let lam_a = self.space.lambdas[self.a_index];
        let lam_b = self.space.lambdas[self.b_index];
        let t1 = (1.0 - self.lambda) * lam_a * s;
        let t2 = (self.lambda - 1.0) * lam_a * s;
        let t3 = 2.0 * s * (self.lambda * lam_a - lam_b);
        (t1, t2, t3)
    }

    /// Geodesic defect `D(t) = proj_m ẇ + [κ, v]_m + U(v, v)` with
    /// `v = proj_m w`; the curve is a geodesic of the deformed metric iff
    /// `D ≡ 0`.
    pub fn geodesic_defect(&self, t: f64) -> AlgebraVector {
        let f = self.frame(t);
        self.defect_in_frame(&f)
    }

    fn defect_in_frame(&self, f: &Frame) -> AlgebraVector {
        let alg = &self.space.algebra;
        let v = self.space.from_m_coeffs(&f.v_mc);
        let mut d = self.space.m_coeffs(&f.w_dot);
        d += self.space.m_coeffs(&alg.bracket(&f.kappa, &v));
        d += self.space.nomizu_quadratic_mcoeffs(&f.v_mc);
        self.space.from_m_coeffs(&d)
    }
}

/// Local coset comparison: `‖proj_m log(g1⁻¹ g2)‖_B`, defined when
/// `g1⁻¹ g2` is inside the log window. Zero iff the two elements project to
/// the same point of `G/K` near the identity.
pub fn coset_distance(
    space: &HomogeneousSpace,
    g1: &GroupElement,
    g2: &GroupElement,
    tol: f64,
) -> Result<f64, GeodesicError> {
    let inv = g1
        .matrix
        .clone()
        .try_inverse()
        .expect("group element is invertible");
    let q = GroupElement::from_matrix(inv * &g2.matrix);
    let xi = space.algebra.group_log(&q, tol)?;
    Ok(space.algebra.b_norm(&space.proj_m(&xi)))
}

/// Configuration of a verification run.
#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub trials: u32,
    pub t_samples: u32,
    pub seed: u64,
    /// Split pair playing (m_a, m_b).
    pub pair: (usize, usize),
    pub rk_step: f64,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            trials: 20,
            t_samples: 50,
            seed: 0,
            pair: (0, 1),
            rk_step: DEFAULT_RK_STEP,
            tol: Tolerances::default(),
        }
    }
}

/// Per-trial random stream, derived from (seed, trial index) so results are
/// independent of scheduling.
fn trial_rng(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..12].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

fn gaussian_in(space: &HomogeneousSpace, member: usize, rng: &mut ChaCha8Rng) -> AlgebraVector {
    let sub = &space.split[member];
    let mut v = AlgebraVector::zeros(space.algebra.dim());
    for i in 0..sub.dim() {
        let g: f64 = rng.sample(StandardNormal);
        v = &v + &sub.basis_vector(i).scale(g);
    }
    v
}

fn gaussian_in_m(space: &HomogeneousSpace, rng: &mut ChaCha8Rng) -> AlgebraVector {
    let mut v = AlgebraVector::zeros(space.algebra.dim());
    for i in 0..space.dim_m() {
        let g: f64 = rng.sample(StandardNormal);
        v = &v + &space.m.basis_vector(i).scale(g);
    }
    v
}

#[derive(Clone, Copy, Default)]
struct TrialOutcome {
    koszul_sum: f64,
    koszul_t3: f64,
    defect: f64,
    speed_drift: f64,
    coset: f64,
    one_step: f64,
}

fn run_trial(
    space: &HomogeneousSpace,
    cfg: &VerifyConfig,
    trial: u32,
    n_z: usize,
) -> Result<TrialOutcome, GeodesicError> {
    let (a, b) = cfg.pair;
    let mut rng = trial_rng(cfg.seed, trial);

    // Unit initial velocity in the deformed metric, Gaussian over m_a ⊕ m_b.
    let va = gaussian_in(space, a, &mut rng);
    let vb = gaussian_in(space, b, &mut rng);
    let v0 = &va + &vb;
    let norm = space
        .deformed_inner(&v0, &v0, cfg.tol.tol_alg)?
        .sqrt()
        .max(1e-12);
    let x_a = va.scale(1.0 / norm);
    let x_b = vb.scale(1.0 / norm);
    let curve = TwoStepCurve::new(space, a, b, x_a, x_b, cfg.tol.tol_alg)?;

    let zs: Vec<AlgebraVector> = (0..n_z).map(|_| gaussian_in_m(space, &mut rng)).collect();

    let ts = crate::linspace(0.0, 2.0 * std::f64::consts::PI, cfg.t_samples as usize);
    let mut out = TrialOutcome::default();
    let speed0 = space.deformed_norm(&space.m_coeffs(&curve.initial_velocity()));
    for &t in &ts {
        let f = curve.frame(t);
        for z in &zs {
            let (t1, t2, t3) = curve.koszul_terms_in_frame(&f, z);
            let scale = t1.abs().max(t2.abs()).max(t3.abs());
            if scale > 0.0 {
                out.koszul_sum = out.koszul_sum.max((t1 + t2 + t3).abs() / scale);
                out.koszul_t3 = out.koszul_t3.max(t3.abs() / scale);
            }
        }
        let d = curve.defect_in_frame(&f);
        out.defect = out.defect.max(space.algebra.b_norm(&d));
        let speed = space.deformed_norm(&f.v_mc);
        out.speed_drift = out.speed_drift.max((speed - speed0).abs() / speed0.max(1e-12));
        if curve.lambda == 1.0 {
            let diff = (&curve.point(t).matrix - &curve.one_step_point(t).matrix).norm();
            out.one_step = out.one_step.max(diff);
        }
    }

    // Independent oracle: integrate the geodesic ODE in the horizontal gauge
    // and compare at the coset level.
    let stride = (0.5 / cfg.rk_step).round().max(1.0) as usize;
    let samples = integrate_geodesic(
        space,
        &curve.initial_velocity(),
        2.0,
        cfg.rk_step,
        stride,
        cfg.tol.tol_ode,
    )?;
    for target in [0.5, 1.0, 2.0] {
        let nearest = samples
            .iter()
            .min_by(|p, q| {
                (p.t - target)
                    .abs()
                    .partial_cmp(&(q.t - target).abs())
                    .unwrap()
            })
            .expect("oracle returned samples");
        let dist = coset_distance(space, &curve.point(nearest.t), &nearest.g, cfg.tol.tol_alg)?;
        out.coset = out.coset.max(dist);
    }
    Ok(out)
}

/// Runs the full verification battery on a space: random unit two-step
/// curves, Koszul cancellation, geodesic defect, constant speed, and the
/// coset-level oracle comparison. The report aggregates worst-case residuals
/// over all trials.
pub fn verify_two_step(
    space: &HomogeneousSpace,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, GeodesicError> {
    if space.is_degenerate() {
        return Err(GeodesicError::DegenerateSplit);
    }
    let (a, b) = cfg.pair;
    assert!(a < space.split.len() && b < space.split.len() && a != b);
    let inclusion = space.bracket_inclusion(a, b);
    if inclusion > cfg.tol.tol_alg {
        return Err(GeodesicError::ConditionViolated {
            residual: inclusion,
        });
    }

    let n_z = 10;
    let outcomes: Vec<Result<TrialOutcome, GeodesicError>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(space, cfg, trial, n_z))
        .collect();

    let mut agg = TrialOutcome::default();
    let mut lambda_one = false;
    for outcome in outcomes {
        let o = outcome?;
        agg.koszul_sum = agg.koszul_sum.max(o.koszul_sum);
        agg.koszul_t3 = agg.koszul_t3.max(o.koszul_t3);
        agg.defect = agg.defect.max(o.defect);
        agg.speed_drift = agg.speed_drift.max(o.speed_drift);
        agg.coset = agg.coset.max(o.coset);
        agg.one_step = agg.one_step.max(o.one_step);
    }
    if space.lambdas[b] == space.lambdas[a] {
        lambda_one = true;
    }

    let mut checks = vec![
        CheckEntry::new(
            &format!("bracket_inclusion_m{}_m{}", a + 1, b + 1),
            inclusion,
            cfg.tol.tol_alg,
        ),
        CheckEntry::new("koszul_cancellation", agg.koszul_sum, KOSZUL_REL_TOL),
        CheckEntry::new("koszul_t3_vanishes", agg.koszul_t3, KOSZUL_REL_TOL),
        CheckEntry::new("geodesic_defect", agg.defect, cfg.tol.tol_defect),
        CheckEntry::new("constant_speed", agg.speed_drift, 1e-10),
        CheckEntry::new("coset_agreement", agg.coset, cfg.tol.tol_ode),
    ];
    if lambda_one {
        checks.push(CheckEntry::new(
            "one_step_degeneration",
            agg.one_step,
            cfg.tol.tol_alg,
        ));
    }

    Ok(VerificationReport {
        space: space.name.clone(),
        seed: cfg.seed,
        trials: cfg.trials,
        assumed_connected: true,
        config: ReportConfig {
            lambdas: space.lambdas.clone(),
            pair: [a, b],
            t_samples: cfg.t_samples,
            rk_step: cfg.rk_step,
            tol_alg: cfg.tol.tol_alg,
            tol_ode: cfg.tol.tol_ode,
            tol_defect: cfg.tol.tol_defect,
        },
        checks,
    })
}
