//! Constructors for the example families: Hopf spheres `U(n+1)/U(n)`, compact
//! groups with a deformed left-invariant metric, SU(n) flag manifolds with the
//! root-parity split, the SU(3)/T generalized Wallach space, and k-symmetric
//! gradings of su(n) by inner diagonal automorphisms.
//!
//! Every constructor re-verifies its structural hypotheses numerically before
//! returning the space.

use num_complex::Complex64;
use thiserror::Error;

use crate::lie::{CMat, FormKind, LieError, MatrixLieAlgebra, DEFAULT_TOL_ALG};
use crate::report::CheckEntry;
use crate::root::{realize_parity_split, RootDatum, RootError};
use crate::space::{HomogeneousSpace, SpaceError};
use crate::subspace::{bracket_inclusion_residual, Subspace};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("structural check '{check}' failed at construction (residual {residual:.3e})")]
    ConditionViolated { check: String, residual: f64 },
    #[error("unknown preset '{name}'")]
    UnknownPreset { name: String },
    #[error("bad preset syntax: {0}")]
    BadPreset(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Root(#[from] RootError),
}

fn require_positive_lambda(lambda: f64) -> Result<(), CatalogError> {
    if !(lambda > 0.0) {
        return Err(CatalogError::InvalidParameter(format!(
            "lambda must be positive, got {lambda}"
        )));
    }
    Ok(())
}

fn certify(space: &HomogeneousSpace, tol: f64) -> Result<(), CatalogError> {
    for c in space.structural_checks(tol) {
        if !c.pass {
            return Err(CatalogError::ConditionViolated {
                check: c.name,
                residual: c.max_residual,
            });
        }
    }
    Ok(())
}

// ---- algebra builders -----------------------------------------------------

fn e_matrix(n: usize, p: usize, q: usize) -> CMat {
    let mut m = CMat::zeros(n, n);
    m[(p, q)] = Complex64::new(1.0, 0.0);
    m
}

/// Position of the off-diagonal pair (p, q), p < q, in lexicographic order.
fn pair_index(n: usize, p: usize, q: usize) -> usize {
    p * n - p * (p + 1) / 2 + (q - p - 1)
}

/// Basis indices of the plane `{A_pq, B_pq}` in the su/u bases below.
pub fn plane_indices(n: usize, p: usize, q: usize) -> (usize, usize) {
    let pi = pair_index(n, p, q);
    (2 * pi, 2 * pi + 1)
}

fn offdiag_pairs(n: usize) -> Vec<CMat> {
    let mut basis = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            // A_pq = E_pq − E_qp and B_pq = i(E_pq + E_qp).
            let a = e_matrix(n, p, q) - e_matrix(n, q, p);
            let b = (e_matrix(n, p, q) + e_matrix(n, q, p)) * Complex64::new(0.0, 1.0);
            basis.push(a);
            basis.push(b);
        }
    }
    basis
}

/// su(n): off-diagonal planes first (lexicographic pairs, `A` before `B`),
/// then the torus directions `i(E_pp − E_{p+1,p+1})`, p = 0..n−2. Form is the
/// negative Killing form.
pub fn su_algebra(n: usize) -> MatrixLieAlgebra {
    assert!(n >= 2);
    let mut basis = offdiag_pairs(n);
    for p in 0..(n - 1) {
        basis.push((e_matrix(n, p, p) - e_matrix(n, p + 1, p + 1)) * Complex64::new(0.0, 1.0));
    }
    MatrixLieAlgebra::new(basis, FormKind::NegKilling).expect("su(n) closes under brackets")
}

/// First torus index in the su(n) basis.
pub fn su_torus_offset(n: usize) -> usize {
    n * (n - 1)
}

/// u(n): off-diagonal planes first, then `iE_pp`, p = 0..n−1. Form is
/// `-tr(XY)` (the Killing form is degenerate on the center).
pub fn u_algebra(n: usize) -> MatrixLieAlgebra {
    assert!(n >= 1);
    let mut basis = offdiag_pairs(n);
    for p in 0..n {
        basis.push(e_matrix(n, p, p) * Complex64::new(0.0, 1.0));
    }
    MatrixLieAlgebra::new(basis, FormKind::NegTrace).expect("u(n) closes under brackets")
}

pub fn u_diag_offset(n: usize) -> usize {
    n * (n - 1)
}

// ---- Hopf spheres ----------------------------------------------------------

/// The Hopf sphere `S^{2n+1} = U(n+1)/U(n)` with the fiber deformation
/// metric: `m_1 ≅ T(CP^n)` (off-diagonal last row/column), `m_2 ≅ T(S^1)`
/// (the last diagonal direction), `⟨,⟩ = B|_{m_1} + λ B|_{m_2}`.
pub fn hopf_sphere(n: usize, lambda: f64) -> Result<HomogeneousSpace, CatalogError> {
    if n < 1 {
        return Err(CatalogError::InvalidParameter(
            "hopf sphere needs n ≥ 1".into(),
        ));
    }
    require_positive_lambda(lambda)?;
    let nn = n + 1;
    let algebra = u_algebra(nn);
    let diag = u_diag_offset(nn);

    let mut k_idx = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            let (a, b) = plane_indices(nn, p, q);
            k_idx.push(a);
            k_idx.push(b);
        }
        k_idx.push(diag + p);
    }
    let mut m1_idx = Vec::new();
    for p in 0..n {
        let (a, b) = plane_indices(nn, p, n);
        m1_idx.push(a);
        m1_idx.push(b);
    }
    let m2_idx = vec![diag + n];

    let k = Subspace::from_basis_indices(&algebra, &k_idx, "k");
    let m1 = Subspace::from_basis_indices(&algebra, &m1_idx, "m1");
    let m2 = Subspace::from_basis_indices(&algebra, &m2_idx, "m2");
    let space = HomogeneousSpace::new(
        algebra,
        k,
        vec![m1, m2],
        vec![1.0, lambda],
        &format!("hopf:n={n},lambda={lambda}"),
    )?;
    certify(&space, DEFAULT_TOL_ALG)?;
    Ok(space)
}

// ---- Lie groups as homogeneous spaces ---------------------------------------

/// A compact group `G = G/{e}` with the left-invariant metric
/// `B|_{m} + λ B|_{k₀}` attached to a subalgebra `k₀`: `m_1` is the
/// B-orthocomplement of `k₀` and `m_2 = k₀`.
pub fn group_as_space(
    algebra: MatrixLieAlgebra,
    k_sub: Subspace,
    lambda: f64,
    name: &str,
) -> Result<HomogeneousSpace, CatalogError> {
    require_positive_lambda(lambda)?;
    if k_sub.is_empty() {
        return Err(CatalogError::InvalidParameter(
            "subalgebra is trivial: the split has no deformation axis".into(),
        ));
    }
    let closure = bracket_inclusion_residual(&algebra, &k_sub, &k_sub, &k_sub);
    if closure > DEFAULT_TOL_ALG {
        return Err(CatalogError::ConditionViolated {
            check: "k_sub_subalgebra".into(),
            residual: closure,
        });
    }
    let m1 = k_sub.orthocomplement(&algebra, "m1");
    if m1.is_empty() {
        return Err(CatalogError::InvalidParameter(
            "subalgebra is all of g: the split has no complement".into(),
        ));
    }
    let space = HomogeneousSpace::new(
        algebra,
        Subspace::empty("k"),
        vec![m1, k_sub],
        vec![1.0, lambda],
        name,
    )?;
    certify(&space, DEFAULT_TOL_ALG)?;
    Ok(space)
}

/// SU(2) with the Berger-type left-invariant metric deformed along `e3`.
pub fn su2_berger(lambda: f64) -> Result<HomogeneousSpace, CatalogError> {
    let algebra = su_algebra(2);
    let k_sub = Subspace::from_basis_indices(&algebra, &[2], "k0");
    group_as_space(
        algebra,
        k_sub,
        lambda,
        &format!("su2-berger:lambda={lambda}"),
    )
}

// ---- SU(n) flag manifolds ----------------------------------------------------

/// Root datum of the flag manifold `SU(n)/S(U(n_1)×⋯×U(n_k))`: the
/// complementary positive roots `e_p − e_q` (p, q in different blocks) with
/// their integer coefficients over the simple roots, plus the corresponding
/// matrix index pairs.
pub fn flag_root_system(
    partition: &[usize],
) -> Result<(RootDatum, Vec<(usize, usize)>), CatalogError> {
    if partition.is_empty() || partition.contains(&0) {
        return Err(CatalogError::InvalidParameter(
            "partition blocks must be positive".into(),
        ));
    }
    let n: usize = partition.iter().sum();
    if n < 2 {
        return Err(CatalogError::InvalidParameter(
            "partition must sum to n ≥ 2".into(),
        ));
    }
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in partition.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, size));
    }
    // Block boundaries as 1-based simple-root labels.
    let mut boundaries = Vec::new();
    let mut acc = 0;
    for &size in &partition[..partition.len() - 1] {
        acc += size;
        boundaries.push(acc);
    }
    let mut roots = Vec::new();
    let mut pairs = Vec::new();
    for p in 0..n {
        for q in (p + 1)..n {
            if block_of[p] != block_of[q] {
                // e_p − e_q = α_{p+1} + ⋯ + α_q.
                let mut c = vec![0u32; n - 1];
                for i in (p + 1)..=q {
                    c[i - 1] = 1;
                }
                roots.push(c);
                pairs.push((p, q));
            }
        }
    }
    let datum = RootDatum::new(n - 1, roots, boundaries)?;
    Ok((datum, pairs))
}

/// Flag manifold `SU(n)/S(U(n_1)×⋯×U(n_k))` with the odd/even root-parity
/// split at the block boundary `i0` and metric `B|_{m_1} + λ B|_{m_2}`.
///
/// When every complementary root is odd at `i0` the even part is empty; the
/// space is still returned, with a single split member, and is flagged
/// degenerate.
pub fn flag_su(
    partition: &[usize],
    i0: usize,
    lambda: f64,
) -> Result<HomogeneousSpace, CatalogError> {
    require_positive_lambda(lambda)?;
    let (datum, pairs) = flag_root_system(partition)?;
    if !datum.complementary.contains(&i0) {
        return Err(CatalogError::InvalidParameter(format!(
            "i0 = {i0} does not index a block boundary (valid: {:?})",
            datum.complementary
        )));
    }
    let n: usize = partition.iter().sum();
    let algebra = su_algebra(n);

    let mut k_idx: Vec<usize> = (su_torus_offset(n)..algebra.dim()).collect();
    let mut block_of = Vec::with_capacity(n);
    for (b, &size) in partition.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(b, size));
    }
    for p in 0..n {
        for q in (p + 1)..n {
            if block_of[p] == block_of[q] {
                let (a, b) = plane_indices(n, p, q);
                k_idx.push(a);
                k_idx.push(b);
            }
        }
    }
    let k = Subspace::from_basis_indices(&algebra, &k_idx, "k");

    let realization: Vec<Subspace> = pairs
        .iter()
        .map(|&(p, q)| {
            let (a, b) = plane_indices(n, p, q);
            Subspace::from_basis_indices(&algebra, &[a, b], &format!("m_alpha({},{})", p + 1, q + 1))
        })
        .collect();
    let (m1, m2) = realize_parity_split(&algebra, &datum, i0, &realization, DEFAULT_TOL_ALG)?;

    let partition_str = partition
        .iter()
        .map(|b| b.to_string())
        .collect::<Vec<_>>()
        .join("-");
    let name = format!("flag-su:partition={partition_str},i0={i0},lambda={lambda}");
    let space = if m2.is_empty() {
        HomogeneousSpace::new(algebra, k, vec![m1], vec![1.0], &name)?
    } else {
        HomogeneousSpace::new(algebra, k, vec![m1, m2], vec![1.0, lambda], &name)?
    };
    certify(&space, DEFAULT_TOL_ALG)?;
    Ok(space)
}

// ---- generalized Wallach space SU(3)/T ---------------------------------------

/// SU(3)/T with its three 2-dimensional root modules `n_1, n_2, n_3`
/// (lexicographic pairs (1,2), (1,3), (2,3)), each satisfying
/// `[n_i, n_i] ⊆ k`. The metric deforms the module `n_l`:
/// `⟨,⟩ = B|_{n_i ⊕ n_j} + λ B|_{n_l}`.
pub fn wallach_su3(l: usize, lambda: f64) -> Result<HomogeneousSpace, CatalogError> {
    require_positive_lambda(lambda)?;
    if !(1..=3).contains(&l) {
        return Err(CatalogError::InvalidParameter(format!(
            "l must be 1, 2 or 3, got {l}"
        )));
    }
    let algebra = su_algebra(3);
    let k = Subspace::from_basis_indices(&algebra, &[6, 7], "k");
    let module_pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let modules: Vec<Subspace> = module_pairs
        .iter()
        .enumerate()
        .map(|(i, &(p, q))| {
            let (a, b) = plane_indices(3, p, q);
            Subspace::from_basis_indices(&algebra, &[a, b], &format!("n{}", i + 1))
        })
        .collect();
    for (i, module) in modules.iter().enumerate() {
        let r = bracket_inclusion_residual(&algebra, module, module, &k);
        if r > DEFAULT_TOL_ALG {
            return Err(CatalogError::ConditionViolated {
                check: format!("wallach_n{}_squares_into_k", i + 1),
                residual: r,
            });
        }
    }
    let others: Vec<&Subspace> = (0..3).filter(|&i| i != l - 1).map(|i| &modules[i]).collect();
    let m1 = Subspace::concat(&others, "m1");
    let m2 = modules[l - 1].clone();
    let space = HomogeneousSpace::new(
        algebra,
        k,
        vec![m1, m2],
        vec![1.0, lambda],
        &format!("wallach-su3:l={l},lambda={lambda}"),
    )?;
    certify(&space, DEFAULT_TOL_ALG)?;
    Ok(space)
}

// ---- k-symmetric gradings ------------------------------------------------------

/// Grading `g = n_0 ⊕ n_1 ⊕ ⋯ ⊕ n_t` induced by an order-`order` inner
/// automorphism, with `n_0 = k` and `t = order/2`. Components may be empty.
#[derive(Clone, Debug)]
pub struct GradedDecomposition {
    pub order: u32,
    pub components: Vec<Subspace>,
}

impl GradedDecomposition {
    /// Residuals of the grading relations
    /// `[n_i, n_j] ⊆ n_{i+j} ⊕ n_{i−j}` (i+j ≤ t) and
    /// `[n_i, n_j] ⊆ n_{order−(i+j)} ⊕ n_{i−j}` (i+j > t), for 0 ≤ j ≤ i ≤ t.
    pub fn check_relations(&self, algebra: &MatrixLieAlgebra, tol: f64) -> Vec<CheckEntry> {
        let t = self.components.len() - 1;
        let mut out = Vec::new();
        for i in 0..=t {
            for j in 0..=i {
                let c1 = if i + j <= t {
                    i + j
                } else {
                    self.order as usize - (i + j)
                };
                let c2 = i - j;
                let target = if c1 == c2 {
                    self.components[c1].clone()
                } else {
                    Subspace::concat(&[&self.components[c1], &self.components[c2]], "target")
                };
                let r = bracket_inclusion_residual(
                    algebra,
                    &self.components[i],
                    &self.components[j],
                    &target,
                );
                out.push(CheckEntry::new(&format!("grading[{i},{j}]"), r, tol));
            }
        }
        out
    }
}

/// k-symmetric space of su(n) under the inner automorphism
/// `φ = Ad(diag(ζ^{a_1}, …, ζ^{a_n}))`, `ζ = e^{2πi/order}` with `order`
/// even. The plane of the pair (p, q) rotates with frequency
/// `a_p − a_q mod order`, which assigns it to the eigenvalue-pair class
/// `min(j, order−j)`; class 0 is the fixed-point subalgebra `k`. The parity
/// split is `m_1 = Σ n_odd`, `m_2 = Σ n_{even ≥ 2}`.
pub fn k_symmetric_su(
    n: usize,
    exponents: &[i64],
    order: u32,
    lambda: f64,
) -> Result<(HomogeneousSpace, GradedDecomposition), CatalogError> {
    require_positive_lambda(lambda)?;
    if n < 2 {
        return Err(CatalogError::InvalidParameter("need n ≥ 2".into()));
    }
    if exponents.len() != n {
        return Err(CatalogError::InvalidParameter(format!(
            "{} exponents for n = {n}",
            exponents.len()
        )));
    }
    if order < 2 || !order.is_multiple_of(2) {
        return Err(CatalogError::InvalidParameter(format!(
            "order must be even and ≥ 2, got {order}"
        )));
    }
    let algebra = su_algebra(n);
    let t = (order / 2) as usize;
    let mut class_indices: Vec<Vec<usize>> = vec![Vec::new(); t + 1];
    // The diagonal torus is fixed by any diagonal automorphism.
    class_indices[0].extend(su_torus_offset(n)..algebra.dim());
    let mut nontrivial = false;
    for p in 0..n {
        for q in (p + 1)..n {
            let j = (exponents[p] - exponents[q]).rem_euclid(order as i64) as usize;
            let class = j.min(order as usize - j);
            if class != 0 {
                nontrivial = true;
            }
            let (a, b) = plane_indices(n, p, q);
            class_indices[class].push(a);
            class_indices[class].push(b);
        }
    }
    if !nontrivial {
        return Err(CatalogError::InvalidParameter(
            "automorphism acts trivially: every exponent difference is 0 mod order".into(),
        ));
    }
    let components: Vec<Subspace> = class_indices
        .iter()
        .enumerate()
        .map(|(c, idx)| {
            let label = if c == 0 { "n0 (= k)".to_string() } else { format!("n{c}") };
            Subspace::from_basis_indices(&algebra, idx, &label)
        })
        .collect();
    let grading = GradedDecomposition {
        order,
        components: components.clone(),
    };
    for entry in grading.check_relations(&algebra, DEFAULT_TOL_ALG) {
        if !entry.pass {
            return Err(CatalogError::ConditionViolated {
                check: entry.name,
                residual: entry.max_residual,
            });
        }
    }

    let odd: Vec<&Subspace> = (1..=t).filter(|c| c % 2 == 1).map(|c| &components[c]).collect();
    let even: Vec<&Subspace> = (2..=t).filter(|c| c % 2 == 0).map(|c| &components[c]).collect();
    let m1 = Subspace::concat(&odd, "m1");
    let m2 = Subspace::concat(&even, "m2");
    if m1.is_empty() {
        return Err(CatalogError::InvalidParameter(
            "no odd grading component: the parity split has no m_1".into(),
        ));
    }
    let exp_str = exponents
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join("-");
    let name = format!("ksym-su:n={n},exp={exp_str},k={order},lambda={lambda}");
    let k = components[0].clone();
    let space = if m2.is_empty() {
        HomogeneousSpace::new(algebra, k, vec![m1], vec![1.0], &name)?
    } else {
        HomogeneousSpace::new(algebra, k, vec![m1, m2], vec![1.0, lambda], &name)?
    };
    certify(&space, DEFAULT_TOL_ALG)?;
    Ok((space, grading))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesic::{verify_two_step, VerifyConfig};
    use crate::lie::AlgebraVector;
    use nalgebra::DMatrix;

    #[test]
    fn hopf_dimensions() {
        let s1 = hopf_sphere(1, 2.0).unwrap();
        assert_eq!(s1.dim_m(), 3);
        assert_eq!(s1.split[0].dim(), 2);
        assert_eq!(s1.split[1].dim(), 1);

        let s2 = hopf_sphere(2, 2.0).unwrap();
        assert_eq!(s2.dim_m(), 5);
        assert_eq!(s2.split[0].dim(), 4);
        assert_eq!(s2.split[1].dim(), 1);
    }

    #[test]
    fn hopf_nomizu_cross_term_matches_brute_force() {
        // For x ∈ m_1, y ∈ m_2 the defining pairings of U carry the (λ−1)
        // weighting; compare against a dense solve of the defining system.
        let s = hopf_sphere(1, 2.0).unwrap();
        let x = s.split[0].basis_vector(0);
        let y = s.split[1].basis_vector(0);
        let u = s.nomizu_u(&x, &y, 1e-9).unwrap();
        let dim = s.dim_m();
        let mut gram = DMatrix::<f64>::zeros(dim, dim);
        let mut rhs = nalgebra::DVector::<f64>::zeros(dim);
        for i in 0..dim {
            let zi = s.m.basis_vector(i);
            for j in 0..dim {
                let zj = s.m.basis_vector(j);
                gram[(i, j)] = 2.0 * s.deformed_inner(&zi, &zj, 1e-9).unwrap();
            }
            let zx = s.proj_m(&s.algebra.bracket(&zi, &x));
            let zy = s.proj_m(&s.algebra.bracket(&zi, &y));
            rhs[i] = s.deformed_inner(&zx, &y, 1e-9).unwrap()
                + s.deformed_inner(&x, &zy, 1e-9).unwrap();
        }
        let u_ref = s.from_m_coeffs(&gram.lu().solve(&rhs).unwrap());
        assert!((&u - &u_ref).coeffs.norm() < 1e-11);
        assert!(s.algebra.b_norm(&u) > 1e-3, "cross term should be nonzero for λ = 2");
    }

    #[test]
    fn hopf_lambda_one_is_one_step(){
        let s = hopf_sphere(1, 1.0).unwrap();
        let report = verify_two_step(
            &s,
            &VerifyConfig {
                trials: 3,
                t_samples: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.passed(), "{}", report.to_json());
        assert!(report.checks.iter().any(|c| c.name == "one_step_degeneration"));
    }

    #[test]
    fn berger_group_space() {
        let s = su2_berger(4.0).unwrap();
        assert_eq!(s.dim_k(), 0);
        assert_eq!(s.dim_m(), 3);
        assert_eq!(s.split[1].dim(), 1);

        let trivial = Subspace::empty("k0");
        assert!(matches!(
            group_as_space(su_algebra(2), trivial, 4.0, "bad"),
            Err(CatalogError::InvalidParameter(_))
        ));
        let full = Subspace::from_basis_indices(&su_algebra(2), &[0, 1, 2], "k0");
        assert!(matches!(
            group_as_space(su_algebra(2), full, 4.0, "bad"),
            Err(CatalogError::InvalidParameter(_))
        ));
        // A non-subalgebra is rejected: [A_12, B_12] leaves span{A_12, B_12}.
        let plane = Subspace::from_basis_indices(&su_algebra(3), &[0, 1], "k0");
        assert!(matches!(
            group_as_space(su_algebra(3), plane, 2.0, "bad"),
            Err(CatalogError::ConditionViolated { .. })
        ));
    }

    #[test]
    fn flag_su3_full_flag_dimensions() {
        let s = flag_su(&[1, 1, 1], 1, 2.0).unwrap();
        assert_eq!(s.dim_k(), 2);
        assert_eq!(s.split[0].dim(), 4); // roots (1,2), (1,3)
        assert_eq!(s.split[1].dim(), 2); // root (2,3)
        // m_1 consists of the planes crossing boundary 1, m_2 of the rest.
        for (p, q) in [(0usize, 1usize), (0, 2)] {
            let (a, b) = plane_indices(3, p, q);
            for idx in [a, b] {
                let v = AlgebraVector::basis(s.algebra.dim(), idx);
                assert!(s.split[0].distance_from(&s.algebra, &v) < 1e-9);
            }
        }
        let (a23, b23) = plane_indices(3, 1, 2);
        for idx in [a23, b23] {
            let v = AlgebraVector::basis(s.algebra.dim(), idx);
            assert!(s.split[1].distance_from(&s.algebra, &v) < 1e-9);
        }

        let s2 = flag_su(&[1, 1, 1], 2, 2.0).unwrap();
        assert_eq!(s2.split[0].dim(), 4); // roots (1,3), (2,3)
        assert_eq!(s2.split[1].dim(), 2); // root (1,2)
    }

    #[test]
    fn flag_su4_boundary_two() {
        let s = flag_su(&[1, 1, 1, 1], 2, 2.0).unwrap();
        assert_eq!(s.split[0].dim(), 8);
        assert_eq!(s.split[1].dim(), 4);
    }

    #[test]
    fn flag_degenerate_when_all_roots_cross() {
        let s = flag_su(&[2, 1], 2, 2.0).unwrap();
        assert!(s.is_degenerate());
        assert_eq!(s.split.len(), 1);
        assert_eq!(s.split[0].dim(), 4);
    }

    #[test]
    fn flag_rejects_non_boundary_i0() {
        assert!(matches!(
            flag_su(&[2, 1], 1, 2.0),
            Err(CatalogError::InvalidParameter(_))
        ));
        assert!(matches!(
            flag_su(&[2, 2], 3, 2.0),
            Err(CatalogError::InvalidParameter(_))
        ));
    }

    #[test]
    fn flag_family_count_matches_boundaries() {
        // Partition (2,2) of SU(4) has exactly one boundary; partition
        // (1,1,1,1) has three.
        let valid: Vec<usize> = (1..4).filter(|&i0| flag_su(&[2, 2], i0, 2.0).is_ok()).collect();
        assert_eq!(valid, vec![2]);
        let valid: Vec<usize> = (1..4)
            .filter(|&i0| flag_su(&[1, 1, 1, 1], i0, 2.0).is_ok())
            .collect();
        assert_eq!(valid, vec![1, 2, 3]);
    }

    #[test]
    fn flag_parity_matches_numerical_frequency_classification() {
        // Independent route to the split: the boundary coweight
        // z = i·diag(1,…,1,0,…,0) − (i0/n)·i·I acts on the plane of (p, q)
        // with frequency c_{i0} ∈ {0, 1}; classify planes by ‖[z, A_pq]‖ and
        // compare with the integer bookkeeping.
        let partition = [1usize, 1, 1];
        let n = 3;
        let i0 = 1;
        let (datum, pairs) = flag_root_system(&partition).unwrap();
        let algebra = su_algebra(n);
        let mut z_mat = CMat::zeros(n, n);
        for p in 0..n {
            let val = if p < i0 { 1.0 - i0 as f64 / n as f64 } else { -(i0 as f64) / n as f64 };
            z_mat[(p, p)] = Complex64::new(0.0, val);
        }
        let z = algebra.to_coeffs(&z_mat, 1e-9).unwrap();
        let (odd, even) = datum.parity_split(i0).unwrap();
        for (idx, &(p, q)) in pairs.iter().enumerate() {
            let (a, _) = plane_indices(n, p, q);
            let a_vec = AlgebraVector::basis(algebra.dim(), a);
            let freq = algebra.b_norm(&algebra.bracket(&z, &a_vec)) / algebra.b_norm(&a_vec);
            let numerically_odd = freq > 0.5;
            assert_eq!(
                numerically_odd,
                odd.contains(&idx),
                "plane ({p},{q}) classified inconsistently"
            );
            if !numerically_odd {
                assert!(even.contains(&idx));
                assert!(freq < 1e-9);
            }
        }
    }

    #[test]
    fn wallach_modules_square_into_k() {
        for l in 1..=3 {
            let s = wallach_su3(l, 2.0).unwrap();
            assert_eq!(s.split[0].dim(), 4);
            assert_eq!(s.split[1].dim(), 2);
            assert!(!s.is_degenerate());
        }
        assert!(matches!(
            wallach_su3(4, 2.0),
            Err(CatalogError::InvalidParameter(_))
        ));
    }

    #[test]
    fn wallach_l3_deforms_the_23_plane() {
        let s = wallach_su3(3, 2.0).unwrap();
        let (a23, b23) = plane_indices(3, 1, 2);
        for idx in [a23, b23] {
            let v = AlgebraVector::basis(s.algebra.dim(), idx);
            assert!(s.split[1].distance_from(&s.algebra, &v) < 1e-9);
        }
    }

    #[test]
    fn ksym_su3_order4_grading() {
        let (s, grading) = k_symmetric_su(3, &[0, 1, 2], 4, 2.0).unwrap();
        assert_eq!(grading.components.len(), 3);
        assert_eq!(grading.components[0].dim(), 2); // torus
        assert_eq!(grading.components[1].dim(), 4); // planes (1,2), (2,3)
        assert_eq!(grading.components[2].dim(), 2); // plane (1,3)
        assert_eq!(s.split[0].dim(), 4);
        assert_eq!(s.split[1].dim(), 2);
        for entry in grading.check_relations(&s.algebra, 1e-9) {
            assert!(entry.pass, "{} residual {}", entry.name, entry.max_residual);
        }
    }

    #[test]
    fn ksym_order2_is_degenerate_symmetric_case() {
        let (s, _) = k_symmetric_su(2, &[0, 1], 2, 2.0).unwrap();
        assert!(s.is_degenerate());
        assert_eq!(s.split.len(), 1);
    }

    #[test]
    fn ksym_rejects_trivial_and_odd_orders() {
        assert!(matches!(
            k_symmetric_su(3, &[1, 1, 1], 4, 2.0),
            Err(CatalogError::InvalidParameter(_))
        ));
        assert!(matches!(
            k_symmetric_su(3, &[0, 1, 2], 3, 2.0),
            Err(CatalogError::InvalidParameter(_))
        ));
        assert!(matches!(
            k_symmetric_su(3, &[0, 1], 4, 2.0),
            Err(CatalogError::InvalidParameter(_))
        ));
    }

    #[test]
    fn constructors_certify_structural_checks() {
        let spaces = vec![
            hopf_sphere(1, 2.0).unwrap(),
            hopf_sphere(2, 2.0).unwrap(),
            su2_berger(4.0).unwrap(),
            flag_su(&[1, 1, 1], 1, 2.0).unwrap(),
            wallach_su3(2, 2.0).unwrap(),
            k_symmetric_su(3, &[0, 1, 2], 4, 2.0).unwrap().0,
        ];
        for s in &spaces {
            for c in s.structural_checks(1e-9) {
                assert!(c.pass, "{}: {} residual {}", s.name, c.name, c.max_residual);
            }
        }
    }
}
