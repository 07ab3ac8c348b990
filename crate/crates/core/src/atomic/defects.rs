use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

/// Source text of the bundled 87Rb quantum-defect table.
pub const RB87_TABLE: &str = include_str!("../../data/rb87_quantum_defects.txt");

/// Rydberg-Ritz parameters for one `(L, J)` series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSeries {
    pub delta0: f64,
    pub delta2: f64,
}

/// Quantum-defect table for one species.
///
/// Levels with `L >= 5` that are not listed are treated as hydrogenic.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumDefectTable {
    pub species: String,
    pub rydberg_ghz: f64,
    series: BTreeMap<(u32, u32), DefectSeries>,
}

impl QuantumDefectTable {
    /// The bundled 87Rb table.
    pub fn rubidium87() -> Self {
        Self::parse(RB87_TABLE).expect("embedded quantum-defect table is valid")
    }

    /// Table with every defect set to zero (hydrogenic levels, infinite-mass Rydberg).
    pub fn hydrogenic(rydberg_ghz: f64, l_max: u32) -> Self {
        let mut series = BTreeMap::new();
        for l in 0..=l_max {
            for j2 in [2 * l + 1, (2 * l).saturating_sub(1)] {
                if j2 > 0 {
                    series.insert((l, j2), DefectSeries { delta0: 0.0, delta2: 0.0 });
                }
            }
        }
        Self { species: "H".into(), rydberg_ghz, series }
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::DefectTable(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses `species, L, 2J, delta0, delta2` rows plus a `rydberg_ghz, value` line.
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rydberg = None;
        let mut species = None;
        let mut series = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = |what: &str| Error::DefectTable(format!("line {}: {what}: {raw:?}", lineno + 1));
            if fields[0].eq_ignore_ascii_case("rydberg_ghz") {
                let v: f64 = fields.get(1).ok_or_else(|| bad("missing value"))?.parse().map_err(|_| bad("bad number"))?;
                rydberg = Some(v);
                continue;
            }
            if fields.len() != 5 {
                return Err(bad("expected 5 columns"));
            }
            let l: u32 = fields[1].parse().map_err(|_| bad("bad L"))?;
            let j2: u32 = fields[2].parse().map_err(|_| bad("bad 2J"))?;
            let delta0: f64 = fields[3].parse().map_err(|_| bad("bad delta0"))?;
            let delta2: f64 = fields[4].parse().map_err(|_| bad("bad delta2"))?;
            if delta0 < 0.0 {
                return Err(bad("delta0 must be non-negative"));
            }
            match &species {
                None => species = Some(fields[0].to_string()),
                Some(s) if s != fields[0] => return Err(bad("mixed species")),
                _ => {}
            }
            series.insert((l, j2), DefectSeries { delta0, delta2 });
        }
        let rydberg_ghz = rydberg.ok_or_else(|| Error::DefectTable("missing rydberg_ghz line".into()))?;
        if !(rydberg_ghz > 0.0) {
            return Err(Error::DefectTable("Rydberg constant must be positive".into()));
        }
        Ok(Self { species: species.unwrap_or_default(), rydberg_ghz, series })
    }

    pub fn series(&self, l: u32, j2: u32) -> Result<DefectSeries> {
        match self.series.get(&(l, j2)) {
            Some(s) => Ok(*s),
            None if l >= 5 => Ok(DefectSeries { delta0: 0.0, delta2: 0.0 }),
            None => Err(Error::MissingSeries { l, j2 }),
        }
    }

    pub fn max_l(&self) -> u32 {
        self.series.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Effective principal quantum number `n - delta(n)`.
    pub fn effective_n(&self, n: u32, l: u32, j2: u32) -> Result<f64> {
        let s = self.series(l, j2)?;
        let n = n as f64;
        let delta = s.delta0 + s.delta2 / (n - s.delta0).powi(2);
        Ok(n - delta)
    }

    /// Level energy in GHz relative to the ionization threshold.
    pub fn energy_ghz(&self, n: u32, l: u32, j2: u32) -> Result<f64> {
        let nstar = self.effective_n(n, l, j2)?;
        Ok(-self.rydberg_ghz / (nstar * nstar))
    }
}
