//! Truncated two-atom basis and the effective interaction Hamiltonian.

mod basis;
mod channel;
mod hamiltonian;

pub use basis::{build_basis, BasisWindow, ManifoldMode, PairBasis, PairState};
pub use channel::{classify_channel, coupling_kind, Channel, ChannelFilter, Coupling};
pub use hamiltonian::{
    assemble, InteractionMatrix, PairCouplings, SparseCouplings, SparseHermitian, SplitElement, DEFAULT_MAX_BASIS,
};
