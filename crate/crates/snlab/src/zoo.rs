//! Canonical operator constructors and truncation families: the diagonal
//! compact model, weighted backward shifts, the l_1 -> l_inf injection, and
//! deterministic Gaussian matrices for property corpora.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::operator::Operator;
use crate::solvers::{derive_rng, normal};
use crate::space::Space;

/// Weight sequences usable in JSON configs as either an explicit list or a
/// closed form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightSeq {
    List(Vec<f64>),
    Const(f64),
    /// w_i = 1/(i+1), the standard compact-diagonal model.
    Harmonic,
    /// w_i = ratio^i.
    Geometric(f64),
}

impl WeightSeq {
    /// The first `n` weights; errors when an explicit list is too short.
    pub fn take(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            WeightSeq::List(w) => {
                if w.len() < n {
                    Err(Error::ShortWeightList {
                        needed: n,
                        got: w.len(),
                    })
                } else {
                    Ok(w[..n].to_vec())
                }
            }
            WeightSeq::Const(c) => Ok(vec![*c; n]),
            WeightSeq::Harmonic => Ok((0..n).map(|i| 1.0 / (i + 1) as f64).collect()),
            WeightSeq::Geometric(r) => Ok((0..n).map(|i| r.powi(i as i32)).collect()),
        }
    }
}

/// diag(weights[0..N]) on Space(N, p).
pub fn make_diagonal(weights: &WeightSeq, n: usize, p: Exponent) -> Result<Operator> {
    let w = weights.take(n)?;
    let s = Space::new(n, p)?;
    let m = DMatrix::from_fn(n, n, |i, j| if i == j { w[i] } else { 0.0 });
    Operator::new(m, s, s)
}

/// Weighted backward shift `(B_w x)_i = w_i x_{i+1}` on Space(N, inf),
/// the finite section of the shift on c_0.
pub fn make_backward_shift(weights: &WeightSeq, n: usize) -> Result<Operator> {
    make_backward_shift_on(weights, n, Exponent::infinity())
}

/// The same shift section placed on Space(N, p); p = 2 makes the singular
/// values available as an exact oracle for profile studies.
pub fn make_backward_shift_on(weights: &WeightSeq, n: usize, p: Exponent) -> Result<Operator> {
    let w = weights.take(n)?;
    let s = Space::new(n, p)?;
    let m = DMatrix::from_fn(n, n, |i, j| if j == i + 1 { w[i] } else { 0.0 });
    Operator::new(m, s, s)
}

/// The natural injection `I : l_1^N -> l_inf^N`.
pub fn make_injection_l1_linf(n: usize) -> Result<Operator> {
    Operator::identity_between(
        Space::new(n, Exponent::one())?,
        Space::new(n, Exponent::infinity())?,
    )
}

/// Deterministic Gaussian-entry operator (column-major fill from a ChaCha
/// stream keyed by `seed`).
pub fn make_random(
    m: usize,
    n: usize,
    p: Exponent,
    q: Exponent,
    seed: u64,
    scale: f64,
) -> Result<Operator> {
    let mut rng = derive_rng(seed, 0);
    let mut matrix = DMatrix::zeros(m, n);
    // explicit column-major fill so the determinism contract is unambiguous
    for j in 0..n {
        for i in 0..m {
            matrix[(i, j)] = normal(&mut rng) * scale;
        }
    }
    Operator::new(matrix, Space::new(n, p)?, Space::new(m, q)?)
}

/// JSON-facing construction schema for operators.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OperatorSpec {
    Diagonal {
        weights: WeightSeq,
        n: usize,
        #[serde(default = "Exponent::two")]
        p: Exponent,
    },
    BackwardShift {
        weights: WeightSeq,
        n: usize,
        /// Exponent of the section space; defaults to the c_0 model (inf).
        #[serde(default = "Exponent::infinity")]
        p: Exponent,
    },
    InjectionL1Linf {
        n: usize,
    },
    RandomGaussian {
        rows: usize,
        cols: usize,
        p: Exponent,
        q: Exponent,
        seed: u64,
        #[serde(default = "default_scale")]
        scale: f64,
    },
    Explicit {
        entries: Vec<Vec<f64>>,
        p: Exponent,
        q: Exponent,
    },
}

fn default_scale() -> f64 {
    1.0
}

pub fn build_operator(spec: &OperatorSpec) -> Result<Operator> {
    match spec {
        OperatorSpec::Diagonal { weights, n, p } => make_diagonal(weights, *n, *p),
        OperatorSpec::BackwardShift { weights, n, p } => make_backward_shift_on(weights, *n, *p),
        OperatorSpec::InjectionL1Linf { n } => make_injection_l1_linf(*n),
        OperatorSpec::RandomGaussian {
            rows,
            cols,
            p,
            q,
            seed,
            scale,
        } => make_random(*rows, *cols, *p, *q, *seed, *scale),
        OperatorSpec::Explicit { entries, p, q } => {
            let rows = entries.len();
            if rows == 0 {
                return Err(Error::ZeroDimension);
            }
            let cols = entries[0].len();
            if cols == 0 || entries.iter().any(|r| r.len() != cols) {
                return Err(Error::InvalidConfig("ragged explicit matrix".into()));
            }
            let m = DMatrix::from_fn(rows, cols, |i, j| entries[i][j]);
            Operator::new(m, Space::new(cols, *p)?, Space::new(rows, *q)?)
        }
    }
}

/// A family of finite sections `generator(N)` of one sequence-space
/// operator, used to probe infinite-dimensional limits.
pub struct TruncationFamily {
    pub description: String,
    pub n_range: Vec<usize>,
    generator: Box<dyn Fn(usize) -> Result<Operator> + Send + Sync>,
}

impl TruncationFamily {
    pub fn generator(&self, n: usize) -> Result<Operator> {
        (self.generator)(n)
    }
}

/// Wraps an `OperatorSpec` that scales with N into a truncation family.
/// Explicit matrices have a fixed size and are rejected.
pub fn make_truncation_family(spec: &OperatorSpec, n_range: &[usize]) -> Result<TruncationFamily> {
    if n_range.is_empty() || n_range.iter().any(|&n| n == 0) {
        return Err(Error::ZeroDimension);
    }
    let description = match spec {
        OperatorSpec::Diagonal { .. } => "diagonal",
        OperatorSpec::BackwardShift { .. } => "backward_shift",
        OperatorSpec::InjectionL1Linf { .. } => "injection_l1_linf",
        OperatorSpec::RandomGaussian { .. } => {
            return Err(Error::InvalidConfig(
                "random matrices are not nested sections; use a fixed operator".into(),
            ))
        }
        OperatorSpec::Explicit { .. } => return Err(Error::FixedSizeOperator),
    }
    .to_string();
    let spec = spec.clone();
    let generator = Box::new(move |n: usize| -> Result<Operator> {
        match &spec {
            OperatorSpec::Diagonal { weights, p, .. } => make_diagonal(weights, n, *p),
            OperatorSpec::BackwardShift { weights, p, .. } => {
                make_backward_shift_on(weights, n, *p)
            }
            OperatorSpec::InjectionL1Linf { .. } => make_injection_l1_linf(n),
            _ => unreachable!(),
        }
    });
    Ok(TruncationFamily {
        description,
        n_range: n_range.to_vec(),
        generator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{operator_norm, Budget};
    use crate::snumbers::{approx_number, svd_oracle};
    use nalgebra::dmatrix;

    #[test]
    fn diagonal_matches_example() {
        let t = make_diagonal(&WeightSeq::List(vec![3.0, 1.0]), 2, Exponent::two()).unwrap();
        assert_eq!(t.matrix, dmatrix![3.0, 0.0; 0.0, 1.0]);
        assert!(make_diagonal(&WeightSeq::List(vec![1.0]), 2, Exponent::two()).is_err());
    }

    #[test]
    fn geometric_diagonal_alpha_three() {
        let t = make_diagonal(&WeightSeq::Geometric(0.5), 8, Exponent::two()).unwrap();
        let a3 = approx_number(&t, 3, &Budget::default(), 0);
        assert!((a3.value - 0.125).abs() < 1e-12);
    }

    #[test]
    fn shift_is_superdiagonal_with_unit_norm() {
        let t = make_backward_shift(&WeightSeq::Const(1.0), 3).unwrap();
        assert_eq!(t.matrix, dmatrix![0.0, 1.0, 0.0; 0.0, 0.0, 1.0; 0.0, 0.0, 0.0]);
        assert_eq!(t.domain.exponent, Exponent::infinity());
        let e = operator_norm(&t, &Budget::default(), 0);
        assert!(e.is_exact());
        assert!((e.value - 1.0).abs() < 1e-12);
        let z = make_backward_shift(&WeightSeq::Const(0.0), 3).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn injection_has_unit_norm() {
        for n in 1..=8 {
            let t = make_injection_l1_linf(n).unwrap();
            let e = operator_norm(&t, &Budget::default(), 0);
            assert!(e.is_exact());
            assert_eq!(e.value, 1.0);
        }
    }

    #[test]
    fn injection_half_certificate_is_exact() {
        // I - A with A the all-1/2 rank-1 matrix has entries +-1/2
        for n in 2..=8 {
            let t = make_injection_l1_linf(n).unwrap();
            let a = DMatrix::from_element(n, n, 0.5);
            let residual = Operator::new(&t.matrix - a, t.domain, t.codomain).unwrap();
            let e = operator_norm(&residual, &Budget::default(), 0);
            assert!(e.is_exact());
            assert_eq!(e.value, 0.5);
        }
    }

    #[test]
    fn random_is_deterministic_and_oracle_consistent() {
        let a = make_random(3, 3, Exponent::two(), Exponent::two(), 42, 1.0).unwrap();
        let b = make_random(3, 3, Exponent::two(), Exponent::two(), 42, 1.0).unwrap();
        assert_eq!(a.matrix, b.matrix);
        let z = make_random(3, 3, Exponent::two(), Exponent::two(), 42, 0.0).unwrap();
        assert!(z.is_zero());
        let oracle = svd_oracle(&a);
        for n in 0..3 {
            let e = approx_number(&a, n, &Budget::default(), 1);
            assert!((e.value - oracle[n]).abs() < 1e-9);
        }
    }

    #[test]
    fn truncation_families_nest() {
        let spec = OperatorSpec::Diagonal {
            weights: WeightSeq::Harmonic,
            n: 0,
            p: Exponent::two(),
        };
        let fam = make_truncation_family(&spec, &[3, 4]).unwrap();
        let t3 = fam.generator(3).unwrap();
        let t4 = fam.generator(4).unwrap();
        assert_eq!(t3.matrix, t4.matrix.view((0, 0), (3, 3)).into_owned());
        assert!((t3.matrix[(2, 2)] - 1.0 / 3.0).abs() < 1e-15);
        let fixed = OperatorSpec::Explicit {
            entries: vec![vec![1.0]],
            p: Exponent::two(),
            q: Exponent::two(),
        };
        assert!(make_truncation_family(&fixed, &[2]).is_err());
    }

    #[test]
    fn explicit_spec_round_trips_through_json() {
        let spec = OperatorSpec::Explicit {
            entries: vec![vec![1.0, 2.0], vec![3.0, 4.0]],
            p: Exponent::one(),
            q: Exponent::infinity(),
        };
        let s = serde_json::to_string(&spec).unwrap();
        let back: OperatorSpec = serde_json::from_str(&s).unwrap();
        let t = build_operator(&back).unwrap();
        assert_eq!(t.matrix, dmatrix![1.0, 2.0; 3.0, 4.0]);
    }
}
