//! Numerical laboratory for s-numbers of finite-dimensional operators
//! between l_p spaces: approximation, Kolmogorov and Gelfand numbers, their
//! symmetrized variant over finite nets, generalized approximation schemes,
//! and an operator zoo with reporting suites.

pub mod cli;
pub mod config;
pub mod error;
pub mod estimate;
pub mod exponent;
pub mod norms;
pub mod operator;
pub mod report;
pub mod schemes;
pub mod snumbers;
pub mod suites;
pub mod solvers;
pub mod space;
pub mod symmetrized;
pub mod zoo;

pub use error::{Error, Result};
pub use estimate::{Certificate, Direction, Estimate};
pub use exponent::Exponent;
pub use norms::{operator_norm, vector_norm, Budget};
pub use operator::Operator;
pub use snumbers::{
    approx_number, gelfand_number, kolmogorov_number, snumber_sequence, SNumberKind,
    SNumberSequence,
};
pub use space::{Space, Subspace};
