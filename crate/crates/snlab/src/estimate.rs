//! Computed scalars with an explicit bound-direction tag.
//!
//! Sup-type searches report lower bounds tagged `Heuristic`; inf-type
//! searches report upper bounds tagged `Upper`; closed-form paths (singular
//! values, vertex enumeration, degenerate cases) are tagged `Exact`. Tests
//! use the tag to pick inequality-aware assertions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Exact,
    Upper,
    Heuristic,
}

/// Optional payload that lets a caller re-evaluate the objective.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// A maximizing input vector of a sup-type search.
    Witness(DVector<f64>),
    /// A minimizing finite-rank approximant.
    Approximant(DMatrix<f64>),
    /// A basis of a minimizing subspace.
    SubspaceBasis(DMatrix<f64>),
    /// Rows are the functionals cutting out a minimizing kernel subspace.
    Functionals(DMatrix<f64>),
}

#[derive(Clone, Debug)]
pub struct Estimate {
    pub value: f64,
    pub direction: Direction,
    pub certificate: Option<Certificate>,
    pub restarts_used: u32,
    pub seed: u64,
}

// Serialized as the scalar summary plus a digest of the certificate; the
// full payload stays in memory only.
impl Serialize for Estimate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Estimate", 5)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field("direction", &self.direction)?;
        s.serialize_field("restarts_used", &self.restarts_used)?;
        s.serialize_field("seed", &self.seed)?;
        s.serialize_field("certificate_digest", &self.certificate_digest())?;
        s.end()
    }
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Estimate {
            value,
            direction: Direction::Exact,
            certificate: None,
            restarts_used: 0,
            seed: 0,
        }
    }

    pub fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = Some(certificate);
        self
    }

    pub fn searched(value: f64, direction: Direction, restarts: u32, seed: u64) -> Self {
        Estimate {
            value,
            direction,
            certificate: None,
            restarts_used: restarts,
            seed,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.direction == Direction::Exact
    }

    /// FNV-1a digest of the certificate payload, for reports.
    pub fn certificate_digest(&self) -> Option<String> {
        let bytes: Vec<u8> = match &self.certificate {
            None => return None,
            Some(Certificate::Witness(v)) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
            Some(Certificate::Approximant(m))
            | Some(Certificate::SubspaceBasis(m))
            | Some(Certificate::Functionals(m)) => m.iter().flat_map(|x| x.to_le_bytes()).collect(),
        };
        let mut h: u64 = 0xcbf29ce484222325;
        for b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        Some(format!("{h:016x}"))
    }
}
