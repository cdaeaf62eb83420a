//! Root data for flag-manifold constructions: integer coefficient vectors of
//! the complementary positive roots over the simple roots, and the odd/even
//! parity split with respect to a chosen complementary simple root.
//!
//! Parity bookkeeping is purely integer; a realization (one 2-dimensional
//! subspace per positive root) turns the split into concrete subspaces, and
//! the bracket inclusion is then re-certified numerically on the matrices.

use thiserror::Error;

use crate::lie::MatrixLieAlgebra;
use crate::subspace::{bracket_inclusion_residual, Subspace};

#[derive(Debug, Error)]
pub enum RootError {
    #[error("root {index} has coefficient vector of length {found}, expected rank {rank}")]
    BadCoefficientLength { index: usize, found: usize, rank: usize },
    #[error("root {index} has no nonzero coefficient on a complementary simple root")]
    NotComplementary { index: usize },
    #[error("complementary simple-root index {i0} out of range 1..={rank}")]
    IndexOutOfRange { i0: usize, rank: usize },
    #[error("simple root {i0} is not in the complementary set")]
    NotInComplementarySet { i0: usize },
    #[error("realization provides {found} subspaces for {expected} roots")]
    RealizationLength { expected: usize, found: usize },
    #[error("numerical certification failed: [m_1, m_2] escapes m_1 (residual {residual:.3e})")]
    InconsistentRealization { residual: f64 },
}

/// Integer data of the complementary positive roots `R_M⁺`.
///
/// Simple roots are labeled 1..=rank; coefficient vectors are indexed 0-based.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub rank: usize,
    pub positive_roots: Vec<Vec<u32>>,
    /// 1-based labels of the complementary simple roots Π_M.
    pub complementary: Vec<usize>,
}

impl RootDatum {
    pub fn new(
        rank: usize,
        positive_roots: Vec<Vec<u32>>,
        complementary: Vec<usize>,
    ) -> Result<Self, RootError> {
        for (index, c) in positive_roots.iter().enumerate() {
            if c.len() != rank {
                return Err(RootError::BadCoefficientLength {
                    index,
                    found: c.len(),
                    rank,
                });
            }
            if !complementary.iter().any(|&i| c[i - 1] != 0) {
                return Err(RootError::NotComplementary { index });
            }
        }
        Ok(Self {
            rank,
            positive_roots,
            complementary,
        })
    }

    /// Indices of the roots whose `i0`-th coefficient is odd / even.
    ///
    /// An empty even class is legal but leaves no deformation axis; callers
    /// flag such splits as degenerate.
    pub fn parity_split(&self, i0: usize) -> Result<(Vec<usize>, Vec<usize>), RootError> {
        if i0 == 0 || i0 > self.rank {
            return Err(RootError::IndexOutOfRange { i0, rank: self.rank });
        }
        if !self.complementary.contains(&i0) {
            return Err(RootError::NotInComplementarySet { i0 });
        }
        let mut odd = Vec::new();
        let mut even = Vec::new();
        for (idx, c) in self.positive_roots.iter().enumerate() {
            if c[i0 - 1] % 2 == 1 {
                odd.push(idx);
            } else {
                even.push(idx);
            }
        }
        Ok((odd, even))
    }
}

/// Realizes the parity split as concrete subspaces `m_1 = ⊕ odd`,
/// `m_2 = ⊕ even` and re-certifies `[m_1, m_2] ⊆ m_1` numerically.
pub fn realize_parity_split(
    algebra: &MatrixLieAlgebra,
    datum: &RootDatum,
    i0: usize,
    realization: &[Subspace],
    tol: f64,
) -> Result<(Subspace, Subspace), RootError> {
    if realization.len() != datum.positive_roots.len() {
        return Err(RootError::RealizationLength {
            expected: datum.positive_roots.len(),
            found: realization.len(),
        });
    }
    let (odd, even) = datum.parity_split(i0)?;
    let odd_parts: Vec<&Subspace> = odd.iter().map(|&i| &realization[i]).collect();
    let even_parts: Vec<&Subspace> = even.iter().map(|&i| &realization[i]).collect();
    let m1 = Subspace::concat(&odd_parts, "m1");
    let m2 = Subspace::concat(&even_parts, "m2");
    if !m2.is_empty() {
        let residual = bracket_inclusion_residual(algebra, &m1, &m2, &m1);
        if residual > tol {
            return Err(RootError::InconsistentRealization { residual });
        }
    }
    Ok((m1, m2))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A_2: three positive roots with coefficients (1,0), (0,1), (1,1) over
    /// two simple roots, both complementary.
    fn a2_datum() -> RootDatum {
        RootDatum::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], vec![1, 2]).unwrap()
    }

    #[test]
    fn a2_parity_classes() {
        let datum = a2_datum();
        let (odd, even) = datum.parity_split(1).unwrap();
        assert_eq!(odd, vec![0, 2]); // (1,0) and (1,1)
        assert_eq!(even, vec![1]); // (0,1)
    }

    #[test]
    fn all_odd_gives_empty_even_class() {
        let datum = RootDatum::new(1, vec![vec![1], vec![3]], vec![1]).unwrap();
        let (odd, even) = datum.parity_split(1).unwrap();
        assert_eq!(odd.len(), 2);
        assert!(even.is_empty());
    }

    #[test]
    fn mark_three_pattern_groups_odd_heights() {
        // Abstract datum with i0-coefficients 1, 2, 3 on a single
        // complementary root: odd classes {1, 3}, even class {2}.
        let datum = RootDatum::new(1, vec![vec![1], vec![2], vec![3]], vec![1]).unwrap();
        let (odd, even) = datum.parity_split(1).unwrap();
        assert_eq!(odd, vec![0, 2]);
        assert_eq!(even, vec![1]);
    }

    #[test]
    fn parity_split_validates_i0() {
        let datum = RootDatum::new(2, vec![vec![1, 0]], vec![1]).unwrap();
        assert!(matches!(
            datum.parity_split(2),
            Err(RootError::NotInComplementarySet { i0: 2 })
        ));
        assert!(matches!(
            datum.parity_split(5),
            Err(RootError::IndexOutOfRange { i0: 5, .. })
        ));
    }

    #[test]
    fn datum_requires_complementary_coefficients() {
        assert!(matches!(
            RootDatum::new(2, vec![vec![0, 1]], vec![1]),
            Err(RootError::NotComplementary { index: 0 })
        ));
    }
}
