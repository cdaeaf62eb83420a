//! Matrix realizations of compact Lie algebras: anti-Hermitian bases, structure
//! constants, Ad-invariant inner products, matrix exponential/logarithm and the
//! adjoint action, with conversion between matrix space and basis coefficients.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex square matrix used for ambient realizations.
pub type CMat = DMatrix<Complex64>;

/// Default tolerance for algebraic identities at construction time.
pub const DEFAULT_TOL_ALG: f64 = 1e-9;

/// Operator-norm radius around the identity inside which the principal
/// matrix logarithm is taken.
pub const LOG_WINDOW: f64 = 0.5;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("basis matrix {index} is not anti-Hermitian (residual {residual:.3e})")]
    NotAntiHermitian { index: usize, residual: f64 },
    #[error("basis matrices are not linearly independent")]
    DependentBasis,
    #[error("bracket [b_{i}, b_{j}] escapes the basis span (residual {residual:.3e})")]
    NotClosed { i: usize, j: usize, residual: f64 },
    #[error("invariant form is not positive definite on this algebra")]
    DegenerateForm,
    #[error("matrix is not in the algebra span (residual {residual:.3e})")]
    NotInAlgebra { residual: f64 },
    #[error("group element outside the log window (‖g − I‖ = {norm:.3e} > {LOG_WINDOW})")]
    OutOfLogWindow { norm: f64 },
    #[error("ambient dimensions disagree: {expected} vs {found}")]
    AmbientMismatch { expected: usize, found: usize },
}

/// Choice of Ad-invariant positive definite form on the algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormKind {
    /// Negative of the Killing form; positive definite on compact semisimple
    /// algebras such as su(n).
    NegKilling,
    /// `-tr(XY)`; positive definite on all of u(n), including the center.
    NegTrace,
}

/// Element of the algebra in basis coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraVector {
    pub coeffs: DVector<f64>,
}

impl AlgebraVector {
    pub fn zeros(dim: usize) -> Self {
        Self {
            coeffs: DVector::zeros(dim),
        }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut coeffs = DVector::zeros(dim);
        coeffs[index] = 1.0;
        Self { coeffs }
    }

    pub fn from_slice(coeffs: &[f64]) -> Self {
        Self {
            coeffs: DVector::from_column_slice(coeffs),
        }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: &self.coeffs * s,
        }
    }
}

impl std::ops::Add for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector {
            coeffs: &self.coeffs + &rhs.coeffs,
        }
    }
}

impl std::ops::Sub for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector {
            coeffs: &self.coeffs - &rhs.coeffs,
        }
    }
}

impl std::ops::Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        AlgebraVector {
            coeffs: -&self.coeffs,
        }
    }
}

/// Element of the realized matrix group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub matrix: CMat,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self {
            matrix: CMat::identity(n, n),
        }
    }

    pub fn from_matrix(matrix: CMat) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Conjugate transpose; equals the inverse for unitary elements.
    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, rhs: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &rhs.matrix,
        }
    }

    /// Frobenius residual of `g·g* − I`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.matrix.nrows();
        (&self.matrix * self.matrix.adjoint() - CMat::identity(n, n)).norm()
    }
}

impl std::ops::Mul for &GroupElement {
    type Output = GroupElement;
    fn mul(self, rhs: &GroupElement) -> GroupElement {
        self.compose(rhs)
    }
}

/// A compact matrix Lie algebra: ordered anti-Hermitian basis, structure
/// constants, and the Gram matrix of a chosen Ad-invariant form.
///
/// Basis vectors are not required to be orthonormal in the form; the Gram
/// matrix carries the geometry.
#[derive(Clone, Debug)]
pub struct MatrixLieAlgebra {
    ambient_dim: usize,
    basis: Vec<CMat>,
    /// `ad_basis[i][(k, j)] = c_{ij}^k` with `[b_i, b_j] = Σ_k c_{ij}^k b_k`.
    ad_basis: Vec<DMatrix<f64>>,
    form: FormKind,
    gram: DMatrix<f64>,
    /// Flattened basis (2n² × d) for coefficient extraction.
    flat_basis: DMatrix<f64>,
    coeff_chol: Cholesky<f64, Dyn>,
}

fn flatten(m: &CMat) -> DVector<f64> {
    let mut v = DVector::zeros(2 * m.len());
    for (i, z) in m.iter().enumerate() {
        v[2 * i] = z.re;
        v[2 * i + 1] = z.im;
    }
    v
}

impl MatrixLieAlgebra {
    /// Builds the algebra from a list of anti-Hermitian matrices, computing
    /// structure constants (solving the bracket-expansion systems) and the
    /// Gram matrix of the requested form.
    pub fn new(basis: Vec<CMat>, form: FormKind) -> Result<Self, LieError> {
        Self::with_tol(basis, form, DEFAULT_TOL_ALG)
    }

    pub fn with_tol(basis: Vec<CMat>, form: FormKind, tol: f64) -> Result<Self, LieError> {
        assert!(!basis.is_empty(), "empty basis");
        let n = basis[0].nrows();
        let d = basis.len();
        for (index, b) in basis.iter().enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(LieError::AmbientMismatch {
                    expected: n,
                    found: b.nrows(),
                });
            }
            let residual = (b + b.adjoint()).norm();
            if residual > tol * b.norm().max(1.0) {
                return Err(LieError::NotAntiHermitian { index, residual });
            }
        }

        // Least-squares apparatus for expressing matrices in the basis.
        let mut flat_basis = DMatrix::zeros(2 * n * n, d);
        for (j, b) in basis.iter().enumerate() {
            flat_basis.set_column(j, &flatten(b));
        }
        let gram0 = flat_basis.transpose() * &flat_basis;
        let eig = SymmetricEigen::new(gram0.clone());
        let max_eig = eig.eigenvalues.max();
        if eig.eigenvalues.min() < 1e-12 * max_eig {
            return Err(LieError::DependentBasis);
        }
        let coeff_chol = Cholesky::new(gram0).ok_or(LieError::DependentBasis)?;

        let to_coeffs = |m: &CMat| -> (DVector<f64>, f64) {
            let rhs = flatten(m);
            let c = coeff_chol.solve(&(flat_basis.transpose() * &rhs));
            let residual = (&flat_basis * &c - &rhs).norm() / rhs.norm().max(1.0);
            (c, residual)
        };

        // Structure constants from commutators of basis pairs; antisymmetry
        // holds by construction (only i < j is solved for).
        let mut ad_basis = vec![DMatrix::<f64>::zeros(d, d); d];
        for i in 0..d {
            for j in (i + 1)..d {
                let comm = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                let (c, residual) = to_coeffs(&comm);
                if residual > tol {
                    return Err(LieError::NotClosed { i, j, residual });
                }
                for k in 0..d {
                    ad_basis[i][(k, j)] = c[k];
                    ad_basis[j][(k, i)] = -c[k];
                }
            }
        }

        let mut gram = DMatrix::zeros(d, d);
        match form {
            FormKind::NegKilling => {
                for i in 0..d {
                    for j in i..d {
                        let killing = (&ad_basis[i] * &ad_basis[j]).trace();
                        gram[(i, j)] = -killing;
                        gram[(j, i)] = -killing;
                    }
                }
            }
            FormKind::NegTrace => {
                for i in 0..d {
                    for j in i..d {
                        let t = -(&basis[i] * &basis[j]).trace().re;
                        gram[(i, j)] = t;
                        gram[(j, i)] = t;
                    }
                }
            }
        }
        if Cholesky::new(gram.clone()).is_none() {
            return Err(LieError::DegenerateForm);
        }

        Ok(Self {
            ambient_dim: n,
            basis,
            ad_basis,
            form,
            gram,
            flat_basis,
            coeff_chol,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn form(&self) -> FormKind {
        self.form
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.ad_basis[i][(k, j)]
    }

    /// Matrix realization of a coefficient vector.
    pub fn matrix_of(&self, v: &AlgebraVector) -> CMat {
        assert_eq!(v.dim(), self.dim());
        let n = self.ambient_dim;
        let mut m = CMat::zeros(n, n);
        for (i, b) in self.basis.iter().enumerate() {
            let c = v.coeffs[i];
            if c != 0.0 {
                m += b * Complex64::new(c, 0.0);
            }
        }
        m
    }

    /// Least-squares coefficients of a matrix over the basis, with the
    /// relative Frobenius residual of the fit.
    pub fn coeffs_lsq(&self, m: &CMat) -> (AlgebraVector, f64) {
        let rhs = flatten(m);
        let c = self.coeff_chol.solve(&(self.flat_basis.transpose() * &rhs));
        let residual = (&self.flat_basis * &c - &rhs).norm() / rhs.norm().max(1.0);
        (AlgebraVector { coeffs: c }, residual)
    }

    /// Coefficients of a matrix known to lie in the algebra span.
    pub fn to_coeffs(&self, m: &CMat, tol: f64) -> Result<AlgebraVector, LieError> {
        let (v, residual) = self.coeffs_lsq(m);
        if residual > tol {
            return Err(LieError::NotInAlgebra { residual });
        }
        Ok(v)
    }

    /// `[a, b]` via structure constants.
    pub fn bracket(&self, a: &AlgebraVector, b: &AlgebraVector) -> AlgebraVector {
        AlgebraVector {
            coeffs: self.ad_matrix(a) * &b.coeffs,
        }
    }

    /// The d×d matrix of `ad(a) = [a, ·]` on basis coefficients.
    pub fn ad_matrix(&self, a: &AlgebraVector) -> DMatrix<f64> {
        assert_eq!(a.dim(), self.dim());
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (i, ad) in self.ad_basis.iter().enumerate() {
            let c = a.coeffs[i];
            if c != 0.0 {
                m += ad * c;
            }
        }
        m
    }

    /// The invariant form `B(a, b)`.
    pub fn b_inner(&self, a: &AlgebraVector, b: &AlgebraVector) -> f64 {
        self.b_inner_raw(&a.coeffs, &b.coeffs)
    }

    pub(crate) fn b_inner_raw(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        a.dot(&(&self.gram * b))
    }

    pub fn b_norm(&self, a: &AlgebraVector) -> f64 {
        self.b_inner(a, a).max(0.0).sqrt()
    }

    /// `exp(t · a)` as a group element.
    pub fn group_exp(&self, a: &AlgebraVector, t: f64) -> GroupElement {
        let m = self.matrix_of(a) * Complex64::new(t, 0.0);
        GroupElement {
            matrix: expm(&m),
        }
    }

    /// Principal logarithm of a group element near the identity, returned in
    /// basis coefficients.
    pub fn group_log(&self, g: &GroupElement, tol: f64) -> Result<AlgebraVector, LieError> {
        let n = self.ambient_dim;
        if g.dim() != n {
            return Err(LieError::AmbientMismatch {
                expected: n,
                found: g.dim(),
            });
        }
        let dev = &g.matrix - CMat::identity(n, n);
        let norm = op_norm(&dev);
        if norm > LOG_WINDOW {
            return Err(LieError::OutOfLogWindow { norm });
        }
        let raw = logm_in_window(&g.matrix);
        // The log of a unitary element is anti-Hermitian; remove rounding fuzz.
        let xi = (&raw - raw.adjoint()) * Complex64::new(0.5, 0.0);
        self.to_coeffs(&xi, tol)
    }

    /// Adjoint action `Ad(g)a = g a g⁻¹` in coefficients. Group elements are
    /// unitary by construction, so the inverse is the conjugate transpose.
    pub fn ad_action(
        &self,
        g: &GroupElement,
        a: &AlgebraVector,
        tol: f64,
    ) -> Result<AlgebraVector, LieError> {
        let conj = &g.matrix * self.matrix_of(a) * g.matrix.adjoint();
        self.to_coeffs(&conj, tol)
    }

    /// Adjoint action without the span check, for inner loops where `g` is
    /// known to lie in the realized group. Returns the fit residual.
    pub(crate) fn ad_action_lsq(&self, g: &GroupElement, a: &AlgebraVector) -> (AlgebraVector, f64) {
        let conj = &g.matrix * self.matrix_of(a) * g.matrix.adjoint();
        self.coeffs_lsq(&conj)
    }
}

/// Spectral norm via the largest eigenvalue of `mᴴm`.
pub fn op_norm(m: &CMat) -> f64 {
    let h = m.adjoint() * m;
    let eig = SymmetricEigen::new(h);
    eig.eigenvalues.max().max(0.0).sqrt()
}

fn one_norm(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
/// Accurate to ~1e-13 relative error for the small matrices used here.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    let norm = one_norm(a);
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let b = a * Complex64::new(0.5_f64.powi(s as i32), 0.0);
    let mut term = CMat::identity(n, n);
    let mut sum = CMat::identity(n, n);
    for k in 1..=30 {
        term = (&term * &b) * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if term.norm() < 1e-20 * sum.norm() {
            break;
        }
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Principal square root by the Denman–Beavers iteration.
fn sqrtm_db(a: &CMat) -> CMat {
    let n = a.nrows();
    let mut y = a.clone();
    let mut z = CMat::identity(n, n);
    for _ in 0..50 {
        let y_inv = y.clone().try_inverse().expect("singular iterate in sqrtm");
        let z_inv = z.clone().try_inverse().expect("singular iterate in sqrtm");
        let y_next = (&y + z_inv) * Complex64::new(0.5, 0.0);
        let z_next = (&z + y_inv) * Complex64::new(0.5, 0.0);
        let delta = (&y_next - &y).norm();
        y = y_next;
        z = z_next;
        if delta < 1e-16 * y.norm().max(1.0) {
            break;
        }
    }
    y
}

/// Principal logarithm for matrices inside the log window: inverse scaling by
/// square roots, then the alternating series on `I + E` with small `E`.
fn logm_in_window(g: &CMat) -> CMat {
    let n = g.nrows();
    let id = CMat::identity(n, n);
    let mut x = g.clone();
    let mut halvings = 0u32;
    while op_norm(&(&x - &id)) > 0.25 && halvings < 40 {
        x = sqrtm_db(&x);
        halvings += 1;
    }
    let e = &x - &id;
    let mut power = e.clone();
    let mut sum = e.clone();
    let mut sign = -1.0;
    for j in 2..=60 {
        power = &power * &e;
        sum += &power * Complex64::new(sign / j as f64, 0.0);
        sign = -sign;
        if power.norm() / (j as f64) < 1e-19 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum * Complex64::new(2.0_f64.powi(halvings as i32), 0.0)
}

/// The standard su(2) basis used throughout the tests:
/// `e1 = [[0,1],[-1,0]]`, `e2 = [[0,i],[i,0]]`, `e3 = [[i,0],[0,-i]]`,
/// with `[e1,e2] = 2e3`, `[e2,e3] = 2e1`, `[e3,e1] = 2e2`.
pub fn su2_basis() -> Vec<CMat> {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    vec![
        CMat::from_row_slice(2, 2, &[z, one, -one, z]),
        CMat::from_row_slice(2, 2, &[z, i, i, z]),
        CMat::from_row_slice(2, 2, &[i, z, z, -i]),
    ]
}
