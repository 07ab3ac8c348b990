//! Parameter scans over the pair-interaction solvers: configuration, parallel
//! evaluation and CSV/JSON/SVG output.

pub mod config;
pub mod output;
pub mod scan;

use std::path::Path;

use rydfibre::atomic::RadialParams;
use rydfibre::{Atom, QuantumDefectTable};
use sha2::{Digest, Sha256};

use scan::{DataFile, Provenance};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// The atom built from `defects` (or the bundled 87Rb table) plus the
/// provenance record of the data it was built from.
pub fn load_atom(defects: Option<&Path>) -> Result<(Atom, Provenance), CliError> {
    let (name, text) = match defects {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            (p.display().to_string(), text)
        }
        None => ("bundled:rb87_quantum_defects.txt".to_string(), rydfibre::atomic::RB87_TABLE.to_string()),
    };
    let table = QuantumDefectTable::parse(&text).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
    let timestamp_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let provenance = Provenance {
        version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp_unix,
        data_files: vec![DataFile { name, sha256: sha256_hex(text.as_bytes()) }],
    };
    Ok((Atom::new(table, RadialParams::default()), provenance))
}
