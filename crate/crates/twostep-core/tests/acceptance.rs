//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its runtime. Tolerances are pinned in the assertions.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use twostep_core::catalog::{self, k_symmetric_su};
use twostep_core::geodesic::TwoStepCurve;
use twostep_core::lie::AlgebraVector;
use twostep_core::preset;
use twostep_core::space::HomogeneousSpace;
use twostep_core::subspace::Subspace;
use twostep_core::{coset_distance, integrate_geodesic, linspace, verify_two_step, VerifyConfig};

/// The full catalog battery at λ = 2 (the parameter is irrelevant to the
/// structural checks and overridden where a criterion fixes it).
fn catalog_presets() -> Vec<&'static str> {
    vec![
        "hopf:n=1,lambda=2",
        "hopf:n=2,lambda=2",
        "su2-berger:lambda=2",
        "flag-su:partition=1-1-1,i0=1,lambda=2",
        "flag-su:partition=1-1-1,i0=2,lambda=2",
        "flag-su:partition=1-1-1-1,i0=1,lambda=2",
        "flag-su:partition=1-1-1-1,i0=2,lambda=2",
        "flag-su:partition=1-1-1-1,i0=3,lambda=2",
        "wallach-su3:l=1,lambda=2",
        "wallach-su3:l=2,lambda=2",
        "wallach-su3:l=3,lambda=2",
        "ksym-su:n=3,exp=0-1-2,k=4,lambda=2",
    ]
}

fn build(preset_text: &str) -> HomogeneousSpace {
    preset::parse(preset_text)
        .unwrap_or_else(|e| panic!("{preset_text}: {e}"))
        .build()
        .unwrap_or_else(|e| panic!("{preset_text}: {e}"))
}

fn rng_for(seed: u64, trial: u32) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..12].copy_from_slice(&trial.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

fn gaussian_in(space: &HomogeneousSpace, member: &Subspace, rng: &mut ChaCha8Rng) -> AlgebraVector {
    let mut v = AlgebraVector::zeros(space.algebra.dim());
    for i in 0..member.dim() {
        let g: f64 = rng.sample(StandardNormal);
        v = &v + &member.basis_vector(i).scale(g);
    }
    v
}

/// Unit-speed random curve on the pair (m_1, m_2).
fn random_unit_curve<'s>(space: &'s HomogeneousSpace, seed: u64, trial: u32) -> TwoStepCurve<'s> {
    let mut rng = rng_for(seed, trial);
    let va = gaussian_in(space, &space.split[0], &mut rng);
    let vb = gaussian_in(space, &space.split[1], &mut rng);
    let v = &va + &vb;
    let norm = space.deformed_inner(&v, &v, 1e-9).unwrap().sqrt();
    TwoStepCurve::new(
        space,
        0,
        1,
        va.scale(1.0 / norm),
        vb.scale(1.0 / norm),
        1e-9,
    )
    .unwrap()
}

#[test]
fn criterion_1_structural_certification() {
    let start = Instant::now();
    for text in catalog_presets() {
        let space = build(text);
        let orth = space.check_k_m_orthogonality(1e-9);
        let inv = space.check_ad_k_invariance(1e-9);
        let nr = space.check_natural_reductivity(1e-9);
        let split_orth = space.check_split_orthogonality(1e-9);
        for c in [&orth, &inv, &nr, &split_orth] {
            assert!(c.pass, "{text}: {} residual {}", c.name, c.max_residual);
        }
        let incl = space.bracket_inclusion(0, 1);
        assert!(incl <= 1e-9, "{text}: inclusion residual {incl}");
    }
    println!(
        "criterion 1 (structural certification, 12 presets): PASS ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_2_koszul_identity() {
    let start = Instant::now();
    let ts = linspace(0.0, 2.0 * std::f64::consts::PI, 50);
    for text in catalog_presets() {
        let space = build(text);
        for trial in 0..20u32 {
            let curve = random_unit_curve(&space, 2, trial);
            let mut rng = rng_for(1000 + trial as u64, trial);
            let zs: Vec<AlgebraVector> = (0..10)
                .map(|_| {
                    let raw = gaussian_in(&space, &space.m, &mut rng);
                    space.proj_m(&raw)
                })
                .collect();
            for &t in &ts {
                for z in &zs {
                    let (t1, t2, t3) = curve.koszul_terms(t, z, 1e-9).unwrap();
                    let scale = t1.abs().max(t2.abs()).max(t3.abs());
                    assert!(
                        (t1 + t2 + t3).abs() <= 1e-12 * scale,
                        "{text}: sum {} vs scale {scale}",
                        (t1 + t2 + t3).abs()
                    );
                    assert!(t3.abs() <= 1e-12 * scale, "{text}: T3 {} vs scale {scale}", t3);
                }
            }
        }
    }
    println!("criterion 2 (Koszul identity): PASS ({:.2?})", start.elapsed());
}

#[test]
fn criterion_3_geodesic_defect() {
    let start = Instant::now();
    let ts = linspace(0.0, 2.0 * std::f64::consts::PI, 100);
    for text in catalog_presets() {
        for lambda in [0.5, 2.0, 5.0] {
            let space = preset::parse(text)
                .unwrap()
                .with_lambda(lambda)
                .build()
                .unwrap();
            for trial in 0..20u32 {
                let curve = random_unit_curve(&space, 3, trial);
                let mut worst = 0.0_f64;
                for &t in &ts {
                    let d = curve.geodesic_defect(t);
                    worst = worst.max(space.algebra.b_norm(&d));
                }
                assert!(
                    worst <= 1e-8,
                    "{text} λ={lambda} trial {trial}: max defect {worst}"
                );
            }
        }
    }
    println!("criterion 3 (geodesic defect): PASS ({:.2?})", start.elapsed());
}

#[test]
fn criterion_4_oracle_equivalence() {
    let start = Instant::now();
    for text in [
        "hopf:n=1,lambda=2",
        "su2-berger:lambda=4",
        "wallach-su3:l=3,lambda=2",
    ] {
        let space = build(text);
        for trial in 0..3u32 {
            let curve = random_unit_curve(&space, 4, trial);
            let samples = integrate_geodesic(&space, &curve.initial_velocity(), 2.0, 1e-3, 500, 1e-6)
                .unwrap();
            for s in samples.iter().filter(|s| [0.5, 1.0, 2.0].contains(&s.t)) {
                let dist = coset_distance(&space, &curve.point(s.t), &s.g, 1e-9).unwrap();
                assert!(dist <= 1e-6, "{text} t={}: coset error {dist}", s.t);
            }
        }
    }

    // Fourth-order convergence on su(2): halving the step shrinks the
    // terminal coset error by a factor in [12, 20].
    let space = build("su2-berger:lambda=4");
    let curve = random_unit_curve(&space, 44, 0);
    let reference = curve.point(2.0);
    let mut errors = Vec::new();
    for step in [0.05, 0.025] {
        let samples =
            integrate_geodesic(&space, &curve.initial_velocity(), 2.0, step, usize::MAX, 1e-3)
                .unwrap();
        let last = samples.last().unwrap();
        errors.push(coset_distance(&space, &reference, &last.g, 1e-9).unwrap());
    }
    let ratio = errors[0] / errors[1];
    assert!(
        (12.0..=20.0).contains(&ratio),
        "errors {errors:?}, ratio {ratio}"
    );
    println!(
        "criterion 4 (oracle equivalence, RK4 order ratio {ratio:.1}): PASS ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_5_degenerations() {
    let start = Instant::now();
    // Condition 1: λ_a = λ_b ⟹ the two-step form is the one-parameter orbit,
    // entrywise to 1e-12.
    let space = build("hopf:n=1,lambda=1");
    for trial in 0..5u32 {
        let curve = random_unit_curve(&space, 5, trial);
        for t in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let diff = (&curve.point(t).matrix - &curve.one_step_point(t).matrix).norm();
            assert!(diff <= 1e-12, "λ=1 trial {trial} t={t}: diff {diff}");
        }
    }

    // Condition 2: commuting pair. Two diagonal u(2) directions commute, so
    // the exponents merge to 1e-9 even though λ ≠ 1.
    let algebra = catalog::u_algebra(2);
    let d = algebra.dim();
    let m1 = Subspace::from_basis_indices(&algebra, &[2], "iE11");
    let m2 = Subspace::from_basis_indices(&algebra, &[3], "iE22");
    let rest = Subspace::from_basis_indices(&algebra, &[0, 1], "offdiag");
    let space = HomogeneousSpace::new(
        algebra,
        Subspace::empty("k"),
        vec![m1, m2, rest],
        vec![1.0, 3.0, 1.0],
        "u2-commuting-pair",
    )
    .unwrap();
    assert!(space.bracket_inclusion(0, 1) <= 1e-12);
    let curve = TwoStepCurve::new(
        &space,
        0,
        1,
        AlgebraVector::basis(d, 2).scale(0.8),
        AlgebraVector::basis(d, 3).scale(-0.6),
        1e-9,
    )
    .unwrap();
    for t in [0.0, 0.5, 1.0, 2.0] {
        let diff = (&curve.point(t).matrix - &curve.one_step_point(t).matrix).norm();
        assert!(diff <= 1e-9, "commuting pair t={t}: diff {diff}");
    }
    println!("criterion 5 (degenerations): PASS ({:.2?})", start.elapsed());
}

#[test]
fn criterion_6_ad_exp_mb_preserves_ma() {
    let start = Instant::now();
    for text in catalog_presets() {
        let space = build(text);
        let (ma, mb) = (&space.split[0], &space.split[1]);
        for trial in 0..100u32 {
            let mut rng = rng_for(6, trial);
            let mut u = gaussian_in(&space, mb, &mut rng);
            let mut v = gaussian_in(&space, ma, &mut rng);
            // Clamp B-norms to 2.
            for w in [&mut u, &mut v] {
                let n = space.algebra.b_norm(w);
                if n > 2.0 {
                    *w = w.scale(2.0 / n);
                }
            }
            let g = space.algebra.group_exp(&u, 1.0);
            let moved = space.algebra.ad_action(&g, &v, 1e-9).unwrap();
            let escape = ma.distance_from(&space.algebra, &moved);
            assert!(escape <= 1e-9, "{text} trial {trial}: escape {escape}");
        }
    }
    println!(
        "criterion 6 (Ad(exp m_b) preserves m_a): PASS ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_7_negative_control() {
    let start = Instant::now();
    // Swap the split roles on the full flag of SU(3): [m_2, m_1] ⊄ m_2, and
    // the two-step formula stops solving the geodesic equation.
    let good = build("flag-su:partition=1-1-1,i0=1,lambda=2");
    let swapped = HomogeneousSpace::new(
        good.algebra.clone(),
        good.k.clone(),
        vec![good.split[1].clone(), good.split[0].clone()],
        vec![1.0, 2.0],
        "flag-su3-swapped",
    )
    .unwrap();
    assert!(swapped.bracket_inclusion(0, 1) > 1e-3, "swap should violate the inclusion");
    // The label-symmetric checks still pass: only the inclusion is broken.
    assert!(swapped.check_ad_k_invariance(1e-9).pass);
    assert!(swapped.check_split_orthogonality(1e-9).pass);

    let ts = linspace(0.0, 2.0 * std::f64::consts::PI, 50);
    let mut failures = 0u32;
    for trial in 0..20u32 {
        let mut rng = rng_for(7, trial);
        let va = gaussian_in(&swapped, &swapped.split[0], &mut rng);
        let vb = gaussian_in(&swapped, &swapped.split[1], &mut rng);
        let v = &va + &vb;
        let norm = swapped.deformed_inner(&v, &v, 1e-9).unwrap().sqrt();
        let curve = TwoStepCurve::new_unchecked(
            &swapped,
            0,
            1,
            va.scale(1.0 / norm),
            vb.scale(1.0 / norm),
        );
        let worst = ts
            .iter()
            .map(|&t| swapped.algebra.b_norm(&curve.geodesic_defect(t)))
            .fold(0.0, f64::max);
        if worst > 1e-3 {
            failures += 1;
        }
    }
    assert!(failures >= 1, "no defect detected on the violated split");
    println!(
        "criterion 7 (negative control, {failures}/20 curves defective): PASS ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_8_grading_and_parity_split() {
    let start = Instant::now();
    let (space, grading) = k_symmetric_su(3, &[0, 1, 2], 4, 2.0).unwrap();
    for entry in grading.check_relations(&space.algebra, 1e-9) {
        assert!(
            entry.pass,
            "{} residual {}",
            entry.name, entry.max_residual
        );
    }
    // The parity split passes structural checks, Koszul, defect and oracle.
    for c in space.structural_checks(1e-9) {
        assert!(c.pass, "{} residual {}", c.name, c.max_residual);
    }
    let report = verify_two_step(
        &space,
        &VerifyConfig {
            trials: 10,
            t_samples: 50,
            seed: 8,
            ..Default::default()
        },
    )
    .unwrap();
    assert!(report.passed(), "{}", report.to_json());
    println!(
        "criterion 8 (k-symmetric grading + parity split): PASS ({:.2?})",
        start.elapsed()
    );
}

#[test]
fn criterion_9_determinism() {
    let start = Instant::now();
    let space = build("hopf:n=1,lambda=2");
    let cfg = VerifyConfig {
        trials: 5,
        t_samples: 20,
        seed: 12345,
        ..Default::default()
    };
    let a = verify_two_step(&space, &cfg).unwrap().to_json();
    let b = verify_two_step(&space, &cfg).unwrap().to_json();
    assert_eq!(a.as_bytes(), b.as_bytes(), "reports differ between runs");
    println!("criterion 9 (determinism): PASS ({:.2?})", start.elapsed());
}
