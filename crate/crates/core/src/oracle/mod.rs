//! Dense multiplicative-basis simulator used to check the block method.
//!
//! Everything here works with full 2^N × 2^N complex matrices built from
//! single-spin operators, so it shares no code path with [`crate::sector`]
//! or [`crate::dynamics`] beyond the output types.

mod bj;
mod dense;
mod phase;
mod simulate;

pub use bj::{bj_sequence, bj_state, transverse_zeeman_state, BJOutcome, BJParams, BJWorkspace};
pub use dense::{
    coupled_basis, hermitian_function, CollectiveOperators, CoupledState, DenseOperator, HermitianEigen, OperatorLabel,
};
pub use phase::coherences_via_phase;
pub use simulate::{dense_simulate, DenseSimulation};

/// Largest spin count the dense paths accept.
pub const MAX_DENSE_SPINS: usize = 10;
