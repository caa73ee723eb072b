//! Elementary operators `X ↦ Σ AᵢXBᵢ`, their Kraus-difference form, the
//! built-in positive map families and tests for complete positivity.
//!
//! Positivity of an arbitrary operator is not decided here. It can only be
//! refuted by sampling ([`sampled_min_eigenvalue`], [`grid_min_eigenvalue`]);
//! the built-in families carry certificates in [`crate::certify`].

mod families;
mod operator;
mod probe;

pub use families::{build_map, MapDescriptor, MapFamily};
pub use operator::{
    ncp_quick_check, ChoiMatrix, CpCheck, ElementaryOperator, KrausDifferenceForm, NcpCheck, NcpVerdict, Term,
    SPAN_RESIDUAL, UNITARY_SLACK,
};
pub use probe::{grid_min_eigenvalue, sampled_min_eigenvalue};
