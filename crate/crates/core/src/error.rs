use thiserror::Error;

use crate::atomic::AtomState;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid atomic state: {0}")]
    InvalidState(String),
    #[error("no quantum-defect series for L={l}, J={j2}/2")]
    MissingSeries { l: u32, j2: u32 },
    #[error("quantum-defect table: {0}")]
    DefectTable(String),
    #[error("radial integration did not converge: {0}")]
    RadialNonConvergence(String),
    #[error("transition {from} -> {to} is forbidden: {reason}")]
    ForbiddenTransition {
        from: AtomState,
        to: AtomState,
        reason: &'static str,
    },
    #[error("invalid geometry: {0}")]
    Geometry(String),
    #[error("invalid medium: static permittivity {0} must exceed 1")]
    Medium(f64),
    #[error("cylinder quadrature did not converge (residual {residual:.3e}, tolerance {tol:.1e})")]
    QuadratureNonConvergence { residual: f64, tol: f64 },
    #[error("pair basis is empty: {0}")]
    EmptyBasis(String),
    #[error("basis size {size} exceeds the configured maximum {max}")]
    BasisTooLarge { size: usize, max: usize },
    #[error("coupled pair {pair} is quasi-resonant (|detuning| = {detuning_ghz:.4} GHz below {floor_ghz} GHz)")]
    QuasiResonance {
        pair: String,
        detuning_ghz: f64,
        floor_ghz: f64,
    },
    #[error("state tracking ill-defined: maximal overlap {overlap:.3} < 0.5")]
    TrackingFailed { overlap: f64 },
    #[error("pair state is not reachable in a single dipole step per atom")]
    NotSingleStep,
    #[error("no r^-6 asymptote found in the supplied samples")]
    NoAsymptote,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("eigendecomposition failed")]
    Eigen,
}

pub type Result<T> = std::result::Result<T, Error>;
