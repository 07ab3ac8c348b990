//! Energy shift of the initial pair: perturbative and exact, plus the C6 fit
//! and per-channel bookkeeping.

mod diag;
mod fit;
mod pt2;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use diag::{diagonalize_track, track_sparse, TrackedShift};
pub use fit::{fit_c6, C6Fit, ASYMPTOTE_TOL, SLOPE_TOL};
pub use pt2::{pt2, PairContribution, PotentialBreakdown, Pt2Options};

use crate::atomic::{Atom, QuantizationAxis};
use crate::error::{Error, Result};
use crate::pair::{BasisWindow, Channel, ChannelFilter, PairBasis, PairCouplings};
use crate::propagators::PropagatorTensor;

/// Relative change of `U` below which widening the basis window is deemed converged.
pub const WIDEN_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Pt2,
    Diag,
}

/// Energy shift of the initial pair (GHz) with the given method.
pub fn energy_shift(
    atom: &Atom,
    basis: &PairBasis,
    axis: &QuantizationAxis,
    propagator: &PropagatorTensor,
    filter: &ChannelFilter,
    method: Method,
    opts: &Pt2Options,
    max_basis: usize,
) -> Result<f64> {
    match method {
        Method::Pt2 => Ok(pt2(atom, basis, axis, propagator, filter, opts)?.u_total),
        Method::Diag => Ok(diag_shift(atom, basis, axis, propagator, filter, max_basis)?.shift),
    }
}

/// Exact tracked shift of the initial manifold.
pub fn diag_shift(
    atom: &Atom,
    basis: &PairBasis,
    axis: &QuantizationAxis,
    propagator: &PropagatorTensor,
    filter: &ChannelFilter,
    max_basis: usize,
) -> Result<TrackedShift> {
    if basis.len() > max_basis {
        return Err(Error::BasisTooLarge { size: basis.len(), max: max_basis });
    }
    let c = PairCouplings::new(atom, basis, axis, propagator, filter)?;
    track_sparse(&c.sparse(&c.pattern()).hamiltonian(1.0), basis.manifold())
}

/// Couplings that survive in vacuum (`pi-pi`, `sigma+-sigma-+`) against those
/// only the surface enables (`pi-sigma`, `sigma+-sigma+`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub u_total: f64,
    pub u0: f64,
    pub vacuum_allowed: f64,
    pub fibre_enabled: f64,
    pub vacuum_allowed_over_u0: f64,
    pub fibre_enabled_over_u0: f64,
    pub channels: BTreeMap<Channel, f64>,
    pub top: Vec<PairContribution>,
}

/// Dipole-dipole PT2 split into the four polarization channels.
pub fn channel_contributions(
    atom: &Atom,
    basis: &PairBasis,
    axis: &QuantizationAxis,
    propagator: &PropagatorTensor,
    opts: &Pt2Options,
) -> Result<ChannelReport> {
    let b = pt2(atom, basis, axis, propagator, &ChannelFilter::dipole_only(), opts)?;
    let sum = |keep: fn(Channel) -> bool| Channel::ALL.iter().filter(|c| keep(**c)).map(|c| b.channel(*c)).sum::<f64>();
    let vacuum_allowed = sum(Channel::vacuum_allowed);
    let fibre_enabled = sum(|c| !c.vacuum_allowed());
    Ok(ChannelReport {
        u_total: b.u_total,
        u0: b.u0,
        vacuum_allowed,
        fibre_enabled,
        vacuum_allowed_over_u0: vacuum_allowed / b.u0,
        fibre_enabled_over_u0: fibre_enabled / b.u0,
        channels: b.channels,
        top: b.top,
    })
}

/// `U(with quadrupole terms) - U(dipole-dipole only)` on the same basis and
/// with the same method. The basis must have been built with quadrupole
/// couplings and the propagator sampled with gradients.
pub fn quad_contribution(
    atom: &Atom,
    basis: &PairBasis,
    axis: &QuantizationAxis,
    propagator: &PropagatorTensor,
    method: Method,
    opts: &Pt2Options,
    max_basis: usize,
) -> Result<f64> {
    let with = energy_shift(atom, basis, axis, propagator, &ChannelFilter::all(), method, opts, max_basis)?;
    let without = energy_shift(atom, basis, axis, propagator, &ChannelFilter::dipole_only(), method, opts, max_basis)?;
    Ok(with - without)
}

/// Outcome of widening the basis window until `U` settles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WidenReport {
    pub window: BasisWindow,
    pub value: f64,
    pub history: Vec<(BasisWindow, f64)>,
    pub converged: bool,
}

/// Widens the n-window by one on each side until the relative change of
/// `eval` drops below `tol`, or `max_steps` widenings were tried.
pub fn auto_widen<F>(start: BasisWindow, tol: f64, max_steps: usize, mut eval: F) -> Result<WidenReport>
where
    F: FnMut(&BasisWindow) -> Result<f64>,
{
    let mut window = start;
    let mut value = eval(&window)?;
    let mut history = vec![(window, value)];
    for _ in 0..max_steps {
        let next = window.widened(1);
        let v = eval(&next)?;
        history.push((next, v));
        let change = (v - value).abs() / v.abs().max(f64::MIN_POSITIVE);
        window = next;
        value = v;
        if change < tol {
            return Ok(WidenReport { window, value, history, converged: true });
        }
    }
    Ok(WidenReport { window, value, history, converged: false })
}
