//! Exact symbolic engine for the Heisenberg vertex operator algebra M(1), the vertex operator
//! coalgebra obtained from it through its diagonal bilinear form, and a harness that checks the
//! axioms of both structures on weight-truncated domains.

pub mod combinatorics;
pub mod error;
pub mod expr;
pub mod faults;
pub mod fock;
pub mod heisenberg;
pub mod series;
pub mod verify;
pub mod voa;
pub mod voc;

pub use error::{Error, Result};
pub use faults::Faults;
pub use fock::{
    basis_of_weight, basis_up_to, ratio, scalar, tensor, Factor, FockVector, Mode, Monomial,
    Rank, Scalar, TensorVector,
};
pub use heisenberg::{bilinear_form, p_value, tensor_form, ModeWord};
pub use verify::{Suite, VerificationConfig, VerificationReport};
pub use voa::VoaContext;
pub use voc::VocContext;

/// Version string recorded in verification reports.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
