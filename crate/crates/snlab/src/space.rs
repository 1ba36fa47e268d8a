//! Finite-dimensional sequence spaces `l_p^n` and their subspaces.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// A finite-dimensional sequence space: a dimension together with an exponent.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Space {
    pub dim: usize,
    pub exponent: Exponent,
}

impl Space {
    pub fn new(dim: usize, exponent: Exponent) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Space { dim, exponent })
    }

    /// The dual space: same dimension, conjugate exponent.
    pub fn dual(self) -> Self {
        Space {
            dim: self.dim,
            exponent: self.exponent.conjugate(),
        }
    }
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "l_{}^{}", self.exponent, self.dim)
    }
}

/// A linear subspace of an ambient space, given by a basis matrix whose
/// columns are linearly independent. Zero columns encode the subspace {0}.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub ambient: Space,
    basis: DMatrix<f64>,
}

pub const RANK_TOL: f64 = 1e-10;

impl Subspace {
    pub fn new(ambient: Space, basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != ambient.dim {
            return Err(Error::ShapeMismatch {
                rows: basis.nrows(),
                cols: basis.ncols(),
                expected_rows: ambient.dim,
                expected_cols: basis.ncols(),
            });
        }
        if basis.ncols() > ambient.dim {
            return Err(Error::RankDeficientBasis);
        }
        if basis.ncols() > 0 {
            let svals = basis.clone().svd(false, false).singular_values;
            let largest = svals.max().max(1.0);
            if svals.iter().any(|s| *s <= RANK_TOL * largest) || svals.len() < basis.ncols() {
                return Err(Error::RankDeficientBasis);
            }
        }
        Ok(Subspace { ambient, basis })
    }

    /// The zero subspace of `ambient`.
    pub fn zero(ambient: Space) -> Self {
        Subspace {
            ambient,
            basis: DMatrix::zeros(ambient.dim, 0),
        }
    }

    /// The span of a set of standard basis vectors.
    pub fn coordinate_span(ambient: Space, support: &[usize]) -> Result<Self> {
        let mut basis = DMatrix::zeros(ambient.dim, support.len());
        for (j, &i) in support.iter().enumerate() {
            if i >= ambient.dim {
                return Err(Error::SpaceMismatch(format!(
                    "coordinate {i} out of range for dimension {}",
                    ambient.dim
                )));
            }
            basis[(i, j)] = 1.0;
        }
        Subspace::new(ambient, basis)
    }

    pub fn full(ambient: Space) -> Self {
        Subspace {
            ambient,
            basis: DMatrix::identity(ambient.dim, ambient.dim),
        }
    }

    pub fn k(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Orthonormal basis of the same span (thin QR).
    pub fn orthonormal_basis(&self) -> DMatrix<f64> {
        if self.k() == 0 {
            return self.basis.clone();
        }
        self.basis.clone().qr().q()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn dual_space_swaps_exponent() {
        let x = Space::new(3, Exponent::one()).unwrap();
        assert_eq!(x.dual().exponent, Exponent::infinity());
        assert_eq!(x.dual().dual(), x);
    }

    #[test]
    fn rejects_rank_deficient_basis() {
        let ambient = Space::new(2, Exponent::two()).unwrap();
        let b = dmatrix![1.0, 2.0; 1.0, 2.0];
        assert!(matches!(
            Subspace::new(ambient, b),
            Err(Error::RankDeficientBasis)
        ));
    }

    #[test]
    fn zero_subspace_has_no_columns() {
        let ambient = Space::new(4, Exponent::two()).unwrap();
        assert_eq!(Subspace::zero(ambient).k(), 0);
    }
}
