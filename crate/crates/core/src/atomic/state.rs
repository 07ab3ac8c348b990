use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-atom fine-structure level `|n L J M_J>`.
///
/// `J` and `M_J` are stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomState {
    pub n: u32,
    pub l: u32,
    pub j2: u32,
    pub mj2: i32,
}

impl AtomState {
    pub fn new(n: u32, l: u32, j2: u32, mj2: i32) -> Result<Self> {
        let s = Self { n, l, j2, mj2 };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { n, l, j2, mj2 } = *self;
        if n == 0 {
            return Err(Error::InvalidState("n must be positive".into()));
        }
        if l >= n {
            return Err(Error::InvalidState(format!("L={l} not below n={n}")));
        }
        let allowed = if l == 0 { j2 == 1 } else { j2 == 2 * l - 1 || j2 == 2 * l + 1 };
        if !allowed {
            return Err(Error::InvalidState(format!("J={j2}/2 incompatible with L={l}")));
        }
        if mj2.unsigned_abs() > j2 || (mj2 - j2 as i32) % 2 != 0 {
            return Err(Error::InvalidState(format!("M_J={mj2}/2 incompatible with J={j2}/2")));
        }
        Ok(())
    }

    /// Same level, different magnetic sublevel.
    pub fn with_mj2(self, mj2: i32) -> Self {
        Self { mj2, ..self }
    }

    /// `(n, L, 2J)` label of the fine-structure level.
    pub fn level(&self) -> (u32, u32, u32) {
        (self.n, self.l, self.j2)
    }

    pub fn j(&self) -> f64 {
        self.j2 as f64 / 2.0
    }

    pub fn mj(&self) -> f64 {
        self.mj2 as f64 / 2.0
    }
}

const L_LABELS: [char; 7] = ['S', 'P', 'D', 'F', 'G', 'H', 'I'];

impl fmt::Display for AtomState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = L_LABELS.get(self.l as usize).copied().unwrap_or('?');
        write!(f, "{}{}{}/2,m={}/2", self.n, l, self.j2, self.mj2)
    }
}
