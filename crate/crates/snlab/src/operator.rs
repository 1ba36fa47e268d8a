//! Dense operators between finite-dimensional sequence spaces.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::space::Space;

/// A dense matrix together with its domain and codomain spaces. The matrix
/// has shape `(codomain.dim, domain.dim)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    pub matrix: DMatrix<f64>,
    pub domain: Space,
    pub codomain: Space,
}

impl Operator {
    pub fn new(matrix: DMatrix<f64>, domain: Space, codomain: Space) -> Result<Self> {
        if matrix.nrows() != codomain.dim || matrix.ncols() != domain.dim {
            return Err(Error::ShapeMismatch {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                expected_rows: codomain.dim,
                expected_cols: domain.dim,
            });
        }
        Ok(Operator {
            matrix,
            domain,
            codomain,
        })
    }

    pub fn zero(domain: Space, codomain: Space) -> Self {
        Operator {
            matrix: DMatrix::zeros(codomain.dim, domain.dim),
            domain,
            codomain,
        }
    }

    pub fn identity(space: Space) -> Self {
        Operator {
            matrix: DMatrix::identity(space.dim, space.dim),
            domain: space,
            codomain: space,
        }
    }

    /// The formal identity matrix viewed as a map between two spaces of the
    /// same dimension (e.g. the injection of `l_1^N` into `l_inf^N`).
    pub fn identity_between(domain: Space, codomain: Space) -> Result<Self> {
        if domain.dim != codomain.dim {
            return Err(Error::SpaceMismatch(format!(
                "identity needs equal dimensions, got {} and {}",
                domain.dim, codomain.dim
            )));
        }
        Ok(Operator {
            matrix: DMatrix::identity(codomain.dim, domain.dim),
            domain,
            codomain,
        })
    }

    /// The adjoint: the transpose acting between the dual spaces.
    pub fn adjoint(&self) -> Operator {
        Operator {
            matrix: self.matrix.transpose(),
            domain: self.codomain.dual(),
            codomain: self.domain.dual(),
        }
    }

    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.matrix * x
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.iter().all(|v| *v == 0.0)
    }

    pub fn scaled(&self, lambda: f64) -> Operator {
        Operator {
            matrix: &self.matrix * lambda,
            domain: self.domain,
            codomain: self.codomain,
        }
    }

    /// Numerical rank with threshold `tol * max(1, sigma_max)`.
    pub fn numerical_rank(&self, tol: f64) -> usize {
        let svals = self.matrix.clone().svd(false, false).singular_values;
        let scale = svals.max().max(1.0);
        svals.iter().filter(|s| **s > tol * scale).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::Exponent;
    use nalgebra::dmatrix;

    fn space(dim: usize, p: Exponent) -> Space {
        Space::new(dim, p).unwrap()
    }

    #[test]
    fn adjoint_swaps_and_conjugates() {
        let t = Operator::new(
            dmatrix![1.0, 2.0, 3.0; 4.0, 5.0, 6.0],
            space(3, Exponent::two()),
            space(2, Exponent::two()),
        )
        .unwrap();
        let a = t.adjoint();
        assert_eq!(a.matrix.nrows(), 3);
        assert_eq!(a.matrix.ncols(), 2);
        assert_eq!(a.domain, space(2, Exponent::two()));
        // Double adjoint restores everything (finite-dimensional reflexivity).
        let aa = a.adjoint();
        assert_eq!(aa.matrix, t.matrix);
        assert_eq!(aa.domain, t.domain);
        assert_eq!(aa.codomain, t.codomain);
    }

    #[test]
    fn adjoint_of_l1_linf_injection_is_l1_linf_injection() {
        let t = Operator::identity(space(2, Exponent::one()));
        let t = Operator::new(t.matrix, space(2, Exponent::one()), space(2, Exponent::infinity())).unwrap();
        let a = t.adjoint();
        assert_eq!(a.domain, space(2, Exponent::one()));
        assert_eq!(a.codomain, space(2, Exponent::infinity()));
        assert_eq!(a.matrix, DMatrix::identity(2, 2));
    }

    #[test]
    fn rejects_bad_shapes() {
        let r = Operator::new(
            dmatrix![1.0, 2.0; 3.0, 4.0],
            space(3, Exponent::two()),
            space(2, Exponent::two()),
        );
        assert!(r.is_err());
    }
}
