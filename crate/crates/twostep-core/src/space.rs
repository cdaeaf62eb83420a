//! Reductive homogeneous spaces `G/K` with an ordered B-orthogonal split
//! `m = m_1 ⊕ ⋯ ⊕ m_s` and the deformed invariant metric
//! `⟨,⟩ = λ_1 B|_{m_1} + ⋯ + λ_s B|_{m_s}`, together with the structural
//! checks that certify the construction and the Nomizu connection operator.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::lie::{AlgebraVector, MatrixLieAlgebra};
use crate::report::CheckEntry;
use crate::subspace::{bracket_inclusion_residual, Subspace};

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("vector is not in m (component off m has norm {residual:.3e})")]
    NotInM { residual: f64 },
    #[error("split member {index} is zero-dimensional")]
    DegenerateSplit { index: usize },
    #[error("split dimensions sum to {found}, expected dim m = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("metric coefficient λ_{index} = {value} must be positive")]
    InvalidLambda { index: usize, value: f64 },
    #[error("{found} metric coefficients for {expected} split members")]
    LambdaCount { expected: usize, found: usize },
}

/// Gram matrix of the deformed inner product on the ordered m-basis.
///
/// Because the basis is B-orthonormal block by block, the matrix is diagonal
/// with `λ_i` repeated along each block.
#[derive(Clone, Debug)]
pub struct MetricOnM {
    pub gram: DMatrix<f64>,
    pub lambdas: Vec<f64>,
}

/// A homogeneous space: algebra, isotropy subalgebra `k`, the reductive
/// complement `m` (ordered as the concatenation of the split members), the
/// split itself and its metric coefficients.
///
/// Construction validates shape only (dimensions, positivity); the geometric
/// hypotheses (orthogonality, ad(k)-invariance, natural reductivity, bracket
/// inclusion) are certified separately by the `check_*` methods so that
/// deliberately broken spaces can be built and diagnosed.
#[derive(Clone, Debug)]
pub struct HomogeneousSpace {
    pub algebra: MatrixLieAlgebra,
    pub k: Subspace,
    pub m: Subspace,
    pub split: Vec<Subspace>,
    pub lambdas: Vec<f64>,
    pub name: String,
    /// Metric coefficient of each m-basis index.
    lambda_of: Vec<f64>,
    /// Split member owning each m-basis index.
    block_of: Vec<usize>,
    /// d × dim(m) matrix of the m-basis in algebra coefficients.
    m_mat: DMatrix<f64>,
    /// dim(m) × d projector onto m-coefficients: `m_matᵀ · gram_B`.
    m_proj: DMatrix<f64>,
    /// ad-matrices of the m-basis vectors.
    m_ad: Vec<DMatrix<f64>>,
}

impl HomogeneousSpace {
    pub fn new(
        algebra: MatrixLieAlgebra,
        k: Subspace,
        split: Vec<Subspace>,
        lambdas: Vec<f64>,
        name: &str,
    ) -> Result<Self, SpaceError> {
        if lambdas.len() != split.len() {
            return Err(SpaceError::LambdaCount {
                expected: split.len(),
                found: lambdas.len(),
            });
        }
        for (index, &value) in lambdas.iter().enumerate() {
            if !(value > 0.0) {
                return Err(SpaceError::InvalidLambda { index, value });
            }
        }
        for (index, s) in split.iter().enumerate() {
            if s.is_empty() {
                return Err(SpaceError::DegenerateSplit { index });
            }
        }
        let d = algebra.dim();
        let dim_m_expected = d - k.dim();
        let dim_m: usize = split.iter().map(|s| s.dim()).sum();
        if dim_m != dim_m_expected {
            return Err(SpaceError::DimensionMismatch {
                expected: dim_m_expected,
                found: dim_m,
            });
        }

        let parts: Vec<&Subspace> = split.iter().collect();
        let m = Subspace::concat(&parts, "m");

        let mut lambda_of = Vec::with_capacity(dim_m);
        let mut block_of = Vec::with_capacity(dim_m);
        for (b, s) in split.iter().enumerate() {
            for _ in 0..s.dim() {
                lambda_of.push(lambdas[b]);
                block_of.push(b);
            }
        }

        let mut m_mat = DMatrix::zeros(d, dim_m);
        for (j, u) in m.basis().iter().enumerate() {
            m_mat.set_column(j, u);
        }
        let m_proj = m_mat.transpose() * algebra.gram();
        let m_ad: Vec<DMatrix<f64>> = (0..dim_m)
            .map(|j| algebra.ad_matrix(&m.basis_vector(j)))
            .collect();

        Ok(Self {
            algebra,
            k,
            m,
            split,
            lambdas,
            name: name.to_string(),
            lambda_of,
            block_of,
            m_mat,
            m_proj,
            m_ad,
        })
    }

    pub fn dim_m(&self) -> usize {
        self.m.dim()
    }

    pub fn dim_k(&self) -> usize {
        self.k.dim()
    }

    /// A space with fewer than two split members has no deformation axis and
    /// is excluded from two-step verification.
    pub fn is_degenerate(&self) -> bool {
        self.split.len() < 2
    }

    /// Split member owning m-basis index `i`.
    pub fn block_of_index(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn metric(&self) -> MetricOnM {
        MetricOnM {
            gram: DMatrix::from_diagonal(&DVector::from_vec(self.lambda_of.clone())),
            lambdas: self.lambdas.clone(),
        }
    }

    /// Coefficients of `v` in the ordered m-basis.
    pub fn m_coeffs(&self, v: &AlgebraVector) -> DVector<f64> {
        &self.m_proj * &v.coeffs
    }

    pub fn from_m_coeffs(&self, c: &DVector<f64>) -> AlgebraVector {
        AlgebraVector {
            coeffs: &self.m_mat * c,
        }
    }

    pub fn proj_m(&self, v: &AlgebraVector) -> AlgebraVector {
        self.from_m_coeffs(&self.m_coeffs(v))
    }

    pub fn proj_k(&self, v: &AlgebraVector) -> AlgebraVector {
        self.k.project(&self.algebra, v)
    }

    /// `‖v − proj_m v‖_B`.
    pub fn off_m_residual(&self, v: &AlgebraVector) -> f64 {
        self.m.distance_from(&self.algebra, v)
    }

    /// Errors unless `v` lies in m up to a relative residual of `tol`.
    pub fn require_in_m(&self, v: &AlgebraVector, tol: f64) -> Result<(), SpaceError> {
        let residual = self.off_m_residual(v);
        if residual > tol * self.algebra.b_norm(v).max(1.0) {
            return Err(SpaceError::NotInM { residual });
        }
        Ok(())
    }

    /// Deformed inner product `Σ_i λ_i B(proj_{m_i} x, proj_{m_i} y)`.
    pub fn deformed_inner(
        &self,
        x: &AlgebraVector,
        y: &AlgebraVector,
        tol: f64,
    ) -> Result<f64, SpaceError> {
        self.require_in_m(x, tol)?;
        self.require_in_m(y, tol)?;
        Ok(self.deformed_dot(&self.m_coeffs(x), &self.m_coeffs(y)))
    }

    /// Deformed inner product on m-coefficient vectors.
    pub fn deformed_dot(&self, xc: &DVector<f64>, yc: &DVector<f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..xc.len() {
            acc += self.lambda_of[i] * xc[i] * yc[i];
        }
        acc
    }

    pub fn deformed_norm(&self, xc: &DVector<f64>) -> f64 {
        self.deformed_dot(xc, xc).max(0.0).sqrt()
    }

    /// m-coefficients of `[u_j, X]_m` for the j-th m-basis vector and `X`
    /// given in algebra coefficients.
    fn bracket_with_basis_mcoeffs(&self, j: usize, x_alg: &DVector<f64>) -> DVector<f64> {
        &self.m_proj * (&self.m_ad[j] * x_alg)
    }

    /// The Nomizu connection operator `U(x, y)`: the unique element of m with
    /// `2⟨U(x,y), z⟩ = ⟨[z,x]_m, y⟩ + ⟨x, [z,y]_m⟩` for all z ∈ m.
    pub fn nomizu_u(
        &self,
        x: &AlgebraVector,
        y: &AlgebraVector,
        tol: f64,
    ) -> Result<AlgebraVector, SpaceError> {
        self.require_in_m(x, tol)?;
        self.require_in_m(y, tol)?;
        let uc = self.nomizu_u_mcoeffs(&self.m_coeffs(x), &self.m_coeffs(y));
        Ok(self.from_m_coeffs(&uc))
    }

    /// `U(x, y)` on m-coefficients; the metric Gram matrix is diagonal on the
    /// ordered m-basis, so the defining system solves componentwise.
    pub fn nomizu_u_mcoeffs(&self, xc: &DVector<f64>, yc: &DVector<f64>) -> DVector<f64> {
        let x_alg = &self.m_mat * xc;
        let y_alg = &self.m_mat * yc;
        let dim = self.dim_m();
        let mut u = DVector::zeros(dim);
        for j in 0..dim {
            let zx = self.bracket_with_basis_mcoeffs(j, &x_alg);
            let zy = self.bracket_with_basis_mcoeffs(j, &y_alg);
            let rhs = self.deformed_dot(&zx, yc) + self.deformed_dot(xc, &zy);
            u[j] = rhs / (2.0 * self.lambda_of[j]);
        }
        u
    }

    /// Quadratic Nomizu term `U(x, x)` on m-coefficients.
    pub fn nomizu_quadratic_mcoeffs(&self, xc: &DVector<f64>) -> DVector<f64> {
        let x_alg = &self.m_mat * xc;
        let dim = self.dim_m();
        let mut u = DVector::zeros(dim);
        for j in 0..dim {
            let zx = self.bracket_with_basis_mcoeffs(j, &x_alg);
            u[j] = self.deformed_dot(&zx, xc) / self.lambda_of[j];
        }
        u
    }

    // ---- structural checks ----------------------------------------------

    pub fn check_k_subalgebra(&self, tol: f64) -> CheckEntry {
        let r = bracket_inclusion_residual(&self.algebra, &self.k, &self.k, &self.k);
        CheckEntry::new("k_subalgebra", r, tol)
    }

    pub fn check_k_m_orthogonality(&self, tol: f64) -> CheckEntry {
        let r = self.k.orthogonality_residual(&self.algebra, &self.m);
        CheckEntry::new("k_m_orthogonality", r, tol)
    }

    /// ad(k)-invariance of every split member: `[k, m_i] ⊆ m_i`.
    pub fn check_ad_k_invariance(&self, tol: f64) -> CheckEntry {
        let r = self
            .split
            .iter()
            .map(|mi| bracket_inclusion_residual(&self.algebra, &self.k, mi, mi))
            .fold(0.0, f64::max);
        CheckEntry::new("ad_k_invariance", r, tol)
    }

    pub fn check_split_orthogonality(&self, tol: f64) -> CheckEntry {
        let mut r = 0.0_f64;
        for i in 0..self.split.len() {
            for j in (i + 1)..self.split.len() {
                r = r.max(self.split[i].orthogonality_residual(&self.algebra, &self.split[j]));
            }
        }
        CheckEntry::new("split_orthogonality", r, tol)
    }

    /// Natural reductivity of B on m: `B([x,y]_m, z) + B(y, [x,z]_m) = 0`
    /// over all m-basis triples.
    pub fn check_natural_reductivity(&self, tol: f64) -> CheckEntry {
        CheckEntry::new(
            "natural_reductivity_B",
            self.natural_reductivity_residual(false),
            tol,
        )
    }

    /// Same cyclic residual evaluated with the deformed metric instead of B;
    /// nonzero for λ ≠ 1, which is exactly why the Nomizu term appears.
    pub fn deformed_natural_reductivity_residual(&self) -> f64 {
        self.natural_reductivity_residual(true)
    }

    fn natural_reductivity_residual(&self, deformed: bool) -> f64 {
        let dim = self.dim_m();
        // w[i][j] = m-coefficients of [u_i, u_j]_m.
        let mut w = vec![vec![DVector::zeros(dim); dim]; dim];
        for i in 0..dim {
            let ui_alg = self.m_mat.column(i).into_owned();
            for j in 0..dim {
                w[i][j] = self.bracket_with_basis_mcoeffs(j, &ui_alg);
                // bracket_with_basis_mcoeffs gives [u_j, u_i]_m; flip sign.
                w[i][j] = -w[i][j].clone();
            }
        }
        let weight = |idx: usize| if deformed { self.lambda_of[idx] } else { 1.0 };
        let mut max = 0.0_f64;
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let r = weight(k) * w[i][j][k] + weight(j) * w[i][k][j];
                    max = max.max(r.abs());
                }
            }
        }
        max
    }

    /// Residual of `[m_a, m_b] ⊆ m_a` for a split pair.
    pub fn bracket_inclusion(&self, a: usize, b: usize) -> f64 {
        bracket_inclusion_residual(&self.algebra, &self.split[a], &self.split[b], &self.split[a])
    }

    pub fn check_bracket_inclusion(&self, a: usize, b: usize, tol: f64) -> CheckEntry {
        CheckEntry::new(
            &format!("bracket_inclusion_m{}_m{}", a + 1, b + 1),
            self.bracket_inclusion(a, b),
            tol,
        )
    }

    /// The structural check battery run by `check` commands and by the
    /// catalog constructors.
    pub fn structural_checks(&self, tol: f64) -> Vec<CheckEntry> {
        let mut checks = vec![
            self.check_k_subalgebra(tol),
            self.check_k_m_orthogonality(tol),
            self.check_ad_k_invariance(tol),
            self.check_split_orthogonality(tol),
            self.check_natural_reductivity(tol),
        ];
        if self.split.len() >= 2 {
            checks.push(self.check_bracket_inclusion(0, 1, tol));
        }
        checks
    }
}
