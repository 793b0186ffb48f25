//! Certification of informational completeness for finite-outcome quantum
//! measurements.
//!
//! A POVM `A` with effects `A(x)` determines a state `rho` from its statistics
//! `tr(rho A(x))` exactly when the real span `R(A)` of the effects is all of the
//! Hermitian matrices. Weaker notions ask only that pure states be singled out,
//! among pure states (PSIC) or among all states (VPSIC). Both reduce to rank
//! conditions on the orthogonal complement `R(A)^perp`, which this crate
//! computes, searches and certifies, together with the tensor-product
//! behaviour of these properties.

pub mod certify;
pub mod error;
pub mod harness;
pub mod json;
mod linalg;
pub mod operator;
pub mod povm;
pub mod span;
pub mod states;
pub mod tomography;

pub use certify::{certify_povm, CertifyConfig, CertifyReport, Property, Strength, Verdict};
pub use error::{Error, Result};
pub use operator::{eigh, hs_inner, inertia, rank_eps, rank_pm, tensor, HermitianMatrix, Inertia};
pub use povm::{Povm, StatisticsVector};
pub use span::{complement, operator_span, OperatorSubspace};
