use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::atomic::{Atom, AtomState};
use crate::error::{Error, Result};

/// Two-atom product state `|k>_A |l>_B`.
///
/// `detuning` is `Delta_kl = omega_nk^A + omega_nl^B`, i.e. the initial pair
/// energy minus this pair's energy (GHz). It is exactly zero for the initial pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairState {
    pub a: AtomState,
    pub b: AtomState,
    pub detuning: f64,
}

impl PairState {
    pub fn label(&self) -> String {
        format!("|{}>|{}>", self.a, self.b)
    }
}

/// Truncation of the two-atom basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisWindow {
    pub n_min: u32,
    pub n_max: u32,
    pub l_max: u32,
    /// Largest retained `|Delta_kl|` (GHz).
    pub cutoff_ghz: f64,
}

impl BasisWindow {
    pub const DEFAULT_L_MAX: u32 = 4;
    pub const DEFAULT_CUTOFF_GHZ: f64 = 500.0;

    /// `n - half_width ..= n + half_width` with the default `L_max` and cutoff.
    pub fn around(n: u32, half_width: u32) -> Self {
        Self {
            n_min: n.saturating_sub(half_width).max(1),
            n_max: n + half_width,
            l_max: Self::DEFAULT_L_MAX,
            cutoff_ghz: Self::DEFAULT_CUTOFF_GHZ,
        }
    }

    pub fn widened(&self, by: u32) -> Self {
        Self { n_min: self.n_min.saturating_sub(by).max(1), n_max: self.n_max + by, ..*self }
    }

    fn contains(&self, s: &AtomState) -> bool {
        s.n >= self.n_min && s.n <= self.n_max && s.l <= self.l_max
    }
}

/// How the initial level pair is represented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifoldMode {
    /// Only the requested magnetic sublevels; the other degenerate sublevels
    /// of the same level pair are left out of the basis.
    Single,
    /// Every `M_J` combination of the two initial levels.
    Degenerate,
}

impl ManifoldMode {
    /// Degenerate for S-state pairs, single otherwise.
    pub fn default_for(a: &AtomState, b: &AtomState) -> Self {
        if a.l == 0 && b.l == 0 {
            Self::Degenerate
        } else {
            Self::Single
        }
    }
}

/// Ordered pair basis: the initial manifold first (the requested initial pair
/// at index 0), then the coupled states by increasing `|Delta_kl|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairBasis {
    pub states: Vec<PairState>,
    /// Number of leading states forming the initial manifold.
    pub manifold_len: usize,
    pub window: BasisWindow,
    pub quadrupole: bool,
}

impl PairBasis {
    pub fn initial(&self) -> &PairState {
        &self.states[0]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn manifold(&self) -> std::ops::Range<usize> {
        0..self.manifold_len
    }

    /// Writes the CSV dump `idx,nA,LA,2JA,2MJA,nB,LB,2JB,2MJB,delta_GHz`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "idx,nA,LA,2JA,2MJA,nB,LB,2JB,2MJB,delta_GHz")?;
        for (i, s) in self.states.iter().enumerate() {
            writeln!(
                out,
                "{i},{},{},{},{},{},{},{},{},{:.9}",
                s.a.n, s.a.l, s.a.j2, s.a.mj2, s.b.n, s.b.l, s.b.j2, s.b.mj2, s.detuning
            )?;
        }
        Ok(())
    }
}

fn sublevels(s: &AtomState) -> impl Iterator<Item = AtomState> + '_ {
    (-(s.j2 as i32)..=s.j2 as i32).step_by(2).map(move |m| s.with_mj2(m))
}

/// Every state of the window reachable from `from` by one dipole (or, when
/// enabled, quadrupole) transition. Includes `from` itself when it carries a
/// permanent quadrupole moment.
fn partners(from: &AtomState, window: &BasisWindow, quadrupole: bool) -> Vec<AtomState> {
    let mut out = Vec::new();
    let l_lo = from.l.saturating_sub(2);
    let l_hi = (from.l + 2).min(window.l_max);
    for n in window.n_min..=window.n_max {
        for l in l_lo..=l_hi.min(n.saturating_sub(1)) {
            let j2s: &[u32] = if l == 0 { &[1] } else { &[2 * l - 1, 2 * l + 1] };
            for &j2 in j2s {
                for mj2 in (-(j2 as i32)..=j2 as i32).step_by(2) {
                    let to = AtomState { n, l, j2, mj2 };
                    if Atom::dipole_coupled(from, &to) || (quadrupole && Atom::quadrupole_coupled(from, &to)) {
                        out.push(to);
                    }
                }
            }
        }
    }
    out
}

/// Enumerates the pair states directly coupled to the initial manifold.
pub fn build_basis(
    atom: &Atom,
    initial: (AtomState, AtomState),
    window: &BasisWindow,
    quadrupole: bool,
    mode: ManifoldMode,
) -> Result<PairBasis> {
    let (ia, ib) = initial;
    ia.validate()?;
    ib.validate()?;
    if window.n_min > window.n_max {
        return Err(Error::EmptyBasis(format!("n window {}..{} is empty", window.n_min, window.n_max)));
    }
    if !window.contains(&ia) || !window.contains(&ib) {
        return Err(Error::EmptyBasis("initial pair lies outside the basis window".into()));
    }
    let e0 = atom.energy(&ia)? + atom.energy(&ib)?;

    let mut manifold = vec![(ia, ib)];
    if mode == ManifoldMode::Degenerate {
        for a in sublevels(&ia) {
            for b in sublevels(&ib) {
                if (a, b) != (ia, ib) {
                    manifold.push((a, b));
                }
            }
        }
    }
    let members: BTreeSet<(AtomState, AtomState)> = manifold.iter().copied().collect();
    let initial_levels = (ia.level(), ib.level());

    let mut seen = BTreeSet::new();
    let mut coupled = Vec::new();
    for (ma, mb) in &manifold {
        let pa = partners(ma, window, quadrupole);
        let pb = partners(mb, window, quadrupole);
        for a in &pa {
            for b in &pb {
                let key = (*a, *b);
                if members.contains(&key) || (a.level(), b.level()) == initial_levels || !seen.insert(key) {
                    continue;
                }
                let detuning = e0 - atom.energy(a)? - atom.energy(b)?;
                if detuning.abs() <= window.cutoff_ghz {
                    coupled.push(PairState { a: *a, b: *b, detuning });
                }
            }
        }
    }
    coupled.sort_by(|x, y| x.detuning.abs().total_cmp(&y.detuning.abs()).then((x.a, x.b).cmp(&(y.a, y.b))));

    let mut states: Vec<PairState> = manifold.iter().map(|&(a, b)| PairState { a, b, detuning: 0.0 }).collect();
    let manifold_len = states.len();
    states.extend(coupled);
    Ok(PairBasis { states, manifold_len, window: *window, quadrupole })
}
