//! Rydberg-atom pair interactions near dielectric nanofibres.

pub mod angular;
pub mod atomic;
pub mod error;
pub mod models;
pub mod pair;
pub mod propagators;
pub mod solver;
pub mod units;

pub use atomic::{Atom, AtomState, QuantizationAxis, QuantumDefectTable};
pub use error::{Error, Result};
