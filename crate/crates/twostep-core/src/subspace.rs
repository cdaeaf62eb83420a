//! Linear subspaces of the algebra with B-orthonormal bases, orthogonal
//! complements, projections, and bracket-inclusion residuals.

use nalgebra::DVector;

use crate::lie::{AlgebraVector, MatrixLieAlgebra};

/// Vectors whose B-norm drops below this fraction of their input norm during
/// orthogonalization are treated as dependent and dropped.
const DROP_TOL: f64 = 1e-8;

/// A subspace of the algebra, stored as a B-orthonormal basis of coefficient
/// vectors.
#[derive(Clone, Debug)]
pub struct Subspace {
    label: String,
    basis: Vec<DVector<f64>>,
}

impl Subspace {
    /// The span of the given vectors, B-orthonormalized by modified
    /// Gram–Schmidt with one re-orthogonalization pass. Dependent inputs
    /// reduce the dimension.
    pub fn span(algebra: &MatrixLieAlgebra, vectors: &[AlgebraVector], label: &str) -> Self {
        let mut basis: Vec<DVector<f64>> = Vec::new();
        for v in vectors {
            let input_norm = algebra.b_inner_raw(&v.coeffs, &v.coeffs).max(0.0).sqrt();
            let mut w = v.coeffs.clone();
            for _ in 0..2 {
                for u in &basis {
                    let c = algebra.b_inner_raw(u, &w);
                    w -= u * c;
                }
            }
            let norm = algebra.b_inner_raw(&w, &w).max(0.0).sqrt();
            if norm > DROP_TOL * input_norm.max(1.0) {
                basis.push(w / norm);
            }
        }
        Self {
            label: label.to_string(),
            basis,
        }
    }

    /// The trivial subspace.
    pub fn empty(label: &str) -> Self {
        Self {
            label: label.to_string(),
            basis: Vec::new(),
        }
    }

    /// Span of a set of algebra basis directions (coefficient unit vectors).
    pub fn from_basis_indices(
        algebra: &MatrixLieAlgebra,
        indices: &[usize],
        label: &str,
    ) -> Self {
        let d = algebra.dim();
        let vectors: Vec<AlgebraVector> =
            indices.iter().map(|&i| AlgebraVector::basis(d, i)).collect();
        Self::span(algebra, &vectors, label)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[DVector<f64>] {
        &self.basis
    }

    pub fn basis_vector(&self, i: usize) -> AlgebraVector {
        AlgebraVector {
            coeffs: self.basis[i].clone(),
        }
    }

    /// Coefficients of `v` in this subspace's orthonormal basis.
    pub fn coeffs_in(&self, algebra: &MatrixLieAlgebra, v: &AlgebraVector) -> DVector<f64> {
        DVector::from_fn(self.basis.len(), |i, _| {
            algebra.b_inner_raw(&self.basis[i], &v.coeffs)
        })
    }

    /// B-orthogonal projection onto the subspace.
    pub fn project(&self, algebra: &MatrixLieAlgebra, v: &AlgebraVector) -> AlgebraVector {
        let mut out = DVector::zeros(v.dim());
        for u in &self.basis {
            let c = algebra.b_inner_raw(u, &v.coeffs);
            out += u * c;
        }
        AlgebraVector { coeffs: out }
    }

    /// `‖v − proj(v)‖_B`.
    pub fn distance_from(&self, algebra: &MatrixLieAlgebra, v: &AlgebraVector) -> f64 {
        let p = self.project(algebra, v);
        algebra.b_norm(&(v - &p))
    }

    /// The B-orthocomplement, completed deterministically from the algebra
    /// basis directions.
    pub fn orthocomplement(&self, algebra: &MatrixLieAlgebra, label: &str) -> Subspace {
        let d = algebra.dim();
        let mut found: Vec<DVector<f64>> = Vec::new();
        for i in 0..d {
            let mut w = DVector::zeros(d);
            w[i] = 1.0;
            for _ in 0..2 {
                for u in self.basis.iter().chain(found.iter()) {
                    let c = algebra.b_inner_raw(u, &w);
                    w -= u * c;
                }
            }
            let norm = algebra.b_inner_raw(&w, &w).max(0.0).sqrt();
            if norm > DROP_TOL {
                found.push(w / norm);
            }
        }
        Subspace {
            label: label.to_string(),
            basis: found,
        }
    }

    /// Concatenation of subspaces assumed mutually B-orthogonal (union of
    /// orthonormal bases, in order).
    pub fn concat(parts: &[&Subspace], label: &str) -> Subspace {
        let mut basis = Vec::new();
        for p in parts {
            basis.extend(p.basis.iter().cloned());
        }
        Subspace {
            label: label.to_string(),
            basis,
        }
    }

    /// Max |B(u, v)| over basis pairs of two subspaces.
    pub fn orthogonality_residual(&self, algebra: &MatrixLieAlgebra, other: &Subspace) -> f64 {
        let mut max = 0.0_f64;
        for u in &self.basis {
            for v in &other.basis {
                max = max.max(algebra.b_inner_raw(u, v).abs());
            }
        }
        max
    }
}

/// Worst relative escape of `[a_i, c_j]` from `target` over basis pairs:
/// `max ‖[a,c] − proj_target [a,c]‖_B / max(1, ‖[a,c]‖_B)`.
///
/// A value at rounding level certifies the inclusion `[A, C] ⊆ target`.
pub fn bracket_inclusion_residual(
    algebra: &MatrixLieAlgebra,
    a: &Subspace,
    c: &Subspace,
    target: &Subspace,
) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..a.dim() {
        for j in 0..c.dim() {
            let br = algebra.bracket(&a.basis_vector(i), &c.basis_vector(j));
            let norm = algebra.b_norm(&br);
            let escape = target.distance_from(algebra, &br);
            max = max.max(escape / norm.max(1.0));
        }
    }
    max
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{su2_basis, FormKind};

    fn su2() -> MatrixLieAlgebra {
        MatrixLieAlgebra::new(su2_basis(), FormKind::NegKilling).unwrap()
    }

    fn e(i: usize) -> AlgebraVector {
        AlgebraVector::basis(3, i)
    }

    #[test]
    fn orthonormalization() {
        let g = su2();
        let s = Subspace::span(
            &g,
            &[
                AlgebraVector::from_slice(&[1.0, 1.0, 0.0]),
                AlgebraVector::from_slice(&[1.0, 0.0, 0.0]),
                AlgebraVector::from_slice(&[2.0, 1.0, 0.0]), // dependent
            ],
            "s",
        );
        assert_eq!(s.dim(), 2);
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { 1.0 } else { 0.0 };
                let b = g.b_inner(&s.basis_vector(i), &s.basis_vector(j));
                assert!((b - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn orthocomplement_examples() {
        let g = su2();
        let k = Subspace::span(&g, &[e(2)], "k");
        let m = k.orthocomplement(&g, "m");
        assert_eq!(m.dim(), 2);
        assert!(m.distance_from(&g, &e(0)) < 1e-12);
        assert!(m.distance_from(&g, &e(1)) < 1e-12);
        assert!(m.orthogonality_residual(&g, &k) < 1e-12);

        let zero = Subspace::empty("0");
        assert_eq!(zero.orthocomplement(&g, "m").dim(), 3);
        let full = Subspace::span(&g, &[e(0), e(1), e(2)], "g");
        assert_eq!(full.orthocomplement(&g, "m").dim(), 0);
    }

    #[test]
    fn inclusion_residuals() {
        let g = su2();
        let a = Subspace::span(&g, &[e(0), e(1)], "a");
        let c = Subspace::span(&g, &[e(2)], "c");
        // [e1,e3], [e2,e3] stay in span{e1,e2}.
        assert!(bracket_inclusion_residual(&g, &a, &c, &a) < 1e-12);

        let k = Subspace::span(&g, &[e(2)], "k");
        assert!(bracket_inclusion_residual(&g, &k, &k, &k) < 1e-12);

        // [e1,e2] = 2e3 is B-orthogonal to span{e1}, so the inclusion fails
        // outright. On B-unit basis vectors the bracket has B-norm
        // ‖[e1,e2]‖/8 = 1/√2, which is the whole escape.
        let a1 = Subspace::span(&g, &[e(0)], "a1");
        let c1 = Subspace::span(&g, &[e(1)], "c1");
        let r = bracket_inclusion_residual(&g, &a1, &c1, &a1);
        assert!((r - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "r = {r}");
        assert!(r > 1e3 * 1e-9);
    }

    #[test]
    fn projection_into_empty_subspace_is_zero() {
        let g = su2();
        let zero = Subspace::empty("0");
        let v = AlgebraVector::from_slice(&[1.0, 2.0, 3.0]);
        assert!(zero.project(&g, &v).coeffs.norm() < 1e-15);
        assert!((zero.distance_from(&g, &v) - g.b_norm(&v)).abs() < 1e-12);
    }
}
