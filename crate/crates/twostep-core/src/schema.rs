//! JSON file formats for algebras and spaces.
//!
//! Algebra files: `{ "ambient_dim": n, "basis": [ [[re,im],...], ... ],
//! "form": "neg_killing"|"neg_trace" }` where each basis entry is an n×n
//! matrix given as rows of `[re, im]` pairs.
//!
//! Space files: `{ "algebra": <algebra spec or named preset>, "k_basis":
//! [coeff vectors], "split": [[coeff vectors], ...], "lambdas": [...],
//! "name": "..." }` with coefficient vectors over the algebra basis.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;
use thiserror::Error;

use crate::catalog;
use crate::lie::{AlgebraVector, CMat, FormKind, LieError, MatrixLieAlgebra};
use crate::space::{HomogeneousSpace, SpaceError};
use crate::subspace::Subspace;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("bad spec file{}: {detail}", path.as_ref().map(|p| format!(" '{p}'")).unwrap_or_default())]
    BadSpecFile { path: Option<String>, detail: String },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

fn bad(detail: impl Into<String>) -> SchemaError {
    SchemaError::BadSpecFile {
        path: None,
        detail: detail.into(),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<Vec<[f64; 2]>>>,
    pub form: FormKind,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    /// A named algebra: "su2", "su(3)", "u2", "u(3)", ...
    Named(String),
    Inline(AlgebraSpec),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub algebra: AlgebraRef,
    pub k_basis: Vec<Vec<f64>>,
    pub split: Vec<Vec<Vec<f64>>>,
    pub lambdas: Vec<f64>,
    pub name: String,
}

/// Builds a named algebra: `su<n>` / `su(<n>)` with the negative Killing
/// form, `u<n>` / `u(<n>)` with the negative trace form.
pub fn named_algebra(name: &str) -> Result<MatrixLieAlgebra, SchemaError> {
    let cleaned = name.replace(['(', ')'], "");
    let (family, digits) = cleaned.split_at(
        cleaned
            .find(|c: char| c.is_ascii_digit())
            .ok_or_else(|| bad(format!("algebra name '{name}' has no rank")))?,
    );
    let n: usize = digits
        .parse()
        .map_err(|_| bad(format!("algebra name '{name}' has a malformed rank")))?;
    if !(1..=8).contains(&n) {
        return Err(bad(format!("algebra rank {n} out of the supported range 1..=8")));
    }
    match family {
        "su" if n >= 2 => Ok(catalog::su_algebra(n)),
        "u" => Ok(catalog::u_algebra(n)),
        _ => Err(bad(format!("unknown algebra family '{family}' in '{name}'"))),
    }
}

pub fn algebra_from_spec(spec: &AlgebraSpec) -> Result<MatrixLieAlgebra, SchemaError> {
    let n = spec.ambient_dim;
    let mut basis = Vec::with_capacity(spec.basis.len());
    for (idx, rows) in spec.basis.iter().enumerate() {
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(bad(format!("basis matrix {idx} is not {n}×{n}")));
        }
        let mut m = CMat::zeros(n, n);
        for (r, row) in rows.iter().enumerate() {
            for (c, &[re, im]) in row.iter().enumerate() {
                m[(r, c)] = Complex64::new(re, im);
            }
        }
        basis.push(m);
    }
    Ok(MatrixLieAlgebra::new(basis, spec.form)?)
}

pub fn algebra_from_ref(r: &AlgebraRef) -> Result<MatrixLieAlgebra, SchemaError> {
    match r {
        AlgebraRef::Named(name) => named_algebra(name),
        AlgebraRef::Inline(spec) => algebra_from_spec(spec),
    }
}

fn coeff_vectors(
    raw: &[Vec<f64>],
    dim: usize,
    what: &str,
) -> Result<Vec<AlgebraVector>, SchemaError> {
    raw.iter()
        .enumerate()
        .map(|(i, v)| {
            if v.len() != dim {
                Err(bad(format!(
                    "{what} vector {i} has {} coefficients, algebra dimension is {dim}",
                    v.len()
                )))
            } else {
                Ok(AlgebraVector::from_slice(v))
            }
        })
        .collect()
}

pub fn space_from_spec(spec: &SpaceSpec) -> Result<HomogeneousSpace, SchemaError> {
    let algebra = algebra_from_ref(&spec.algebra)?;
    let d = algebra.dim();
    let k_vectors = coeff_vectors(&spec.k_basis, d, "k_basis")?;
    let k = Subspace::span(&algebra, &k_vectors, "k");
    let mut split = Vec::with_capacity(spec.split.len());
    for (i, member) in spec.split.iter().enumerate() {
        let vectors = coeff_vectors(member, d, &format!("split[{i}]"))?;
        split.push(Subspace::span(&algebra, &vectors, &format!("m{}", i + 1)));
    }
    Ok(HomogeneousSpace::new(
        algebra,
        k,
        split,
        spec.lambdas.clone(),
        &spec.name,
    )?)
}

/// Loads a space spec file, attaching the path and the parser's line/column
/// diagnostics to any failure.
pub fn load_space(path: &Path) -> Result<HomogeneousSpace, SchemaError> {
    let attach = |detail: String| SchemaError::BadSpecFile {
        path: Some(path.display().to_string()),
        detail,
    };
    let text = std::fs::read_to_string(path).map_err(|e| attach(e.to_string()))?;
    let spec: SpaceSpec = serde_json::from_str(&text).map_err(|e| attach(e.to_string()))?;
    space_from_spec(&spec).map_err(|e| match e {
        SchemaError::BadSpecFile { detail, .. } => attach(detail),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_algebra_round_trip() {
        let text = r#"{
            "ambient_dim": 2,
            "basis": [
                [[[0,0],[1,0]], [[-1,0],[0,0]]],
                [[[0,0],[0,1]], [[0,1],[0,0]]],
                [[[0,1],[0,0]], [[0,0],[0,-1]]]
            ],
            "form": "neg_killing"
        }"#;
        let spec: AlgebraSpec = serde_json::from_str(text).unwrap();
        let algebra = algebra_from_spec(&spec).unwrap();
        assert_eq!(algebra.dim(), 3);
        assert!((algebra.gram()[(0, 0)] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn named_algebras() {
        assert_eq!(named_algebra("su2").unwrap().dim(), 3);
        assert_eq!(named_algebra("su(3)").unwrap().dim(), 8);
        assert_eq!(named_algebra("u(2)").unwrap().dim(), 4);
        assert!(named_algebra("sp4").is_err());
        assert!(named_algebra("su").is_err());
    }

    #[test]
    fn space_spec_builds_berger_split() {
        let text = r#"{
            "algebra": "su2",
            "k_basis": [],
            "split": [[[1,0,0],[0,1,0]], [[0,0,1]]],
            "lambdas": [1.0, 4.0],
            "name": "berger-from-file"
        }"#;
        let spec: SpaceSpec = serde_json::from_str(text).unwrap();
        let space = space_from_spec(&spec).unwrap();
        assert_eq!(space.dim_m(), 3);
        assert_eq!(space.lambdas, vec![1.0, 4.0]);
        for c in space.structural_checks(1e-9) {
            assert!(c.pass, "{}", c.name);
        }
    }

    #[test]
    fn dimension_mismatches_are_diagnosed() {
        let text = r#"{
            "algebra": "su2",
            "k_basis": [[1,0]],
            "split": [[[1,0,0]]],
            "lambdas": [1.0],
            "name": "broken"
        }"#;
        let spec: SpaceSpec = serde_json::from_str(text).unwrap();
        match space_from_spec(&spec) {
            Err(SchemaError::BadSpecFile { detail, .. }) => {
                assert!(detail.contains("k_basis"), "{detail}");
            }
            other => panic!("expected BadSpecFile, got {other:?}"),
        }
    }
}
