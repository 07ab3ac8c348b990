use std::collections::BTreeMap;

use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atomic::{Atom, QuantizationAxis};
use crate::error::{Error, Result};
use crate::pair::{coupling_kind, Channel, ChannelFilter, Coupling, PairBasis, PairCouplings, PairState};
use crate::propagators::PropagatorTensor;

/// Guard and reporting knobs of second-order perturbation theory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Pt2Options {
    /// Pairs closer than this to resonance (GHz) invalidate PT2...
    pub resonance_floor_ghz: f64,
    /// ...when they carry more than this fraction of the second-order sum.
    pub resonance_share: f64,
    /// Length of the dominant-pair list.
    pub top_k: usize,
}

impl Default for Pt2Options {
    fn default() -> Self {
        Self { resonance_floor_ghz: 0.5, resonance_share: 0.01, top_k: 10 }
    }
}

/// Second-order contribution of one intermediate pair to the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairContribution {
    pub index: usize,
    pub state: PairState,
    pub coupling: Coupling,
    pub u_ghz: f64,
}

/// Energy shift of the initial pair and its decompositions (GHz).
///
/// `u0 + u_vacfib + u_fibfib + first_order == u_total` and
/// `sum(channels) + quadrupole + first_order == u_total`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialBreakdown {
    pub u_total: f64,
    pub u0: f64,
    pub u_vacfib: f64,
    pub u_fibfib: f64,
    /// `<init| V |init>`, nonzero only for permanent quadrupole moments.
    pub first_order: f64,
    pub channels: BTreeMap<Channel, f64>,
    /// Second-order terms involving at least one quadrupole step.
    pub quadrupole: f64,
    pub top: Vec<PairContribution>,
    /// Eigenvalues of the effective Hamiltonian on the initial manifold.
    pub manifold_shifts: Vec<f64>,
}

impl PotentialBreakdown {
    pub fn channel(&self, c: Channel) -> f64 {
        self.channels.get(&c).copied().unwrap_or(0.0)
    }
}

/// Second-order shift of the initial pair, `U = sum_kl |V_kl|^2 / Delta_kl`,
/// with the photon-path split of `|V0 + V1|^2`.
///
/// For a degenerate initial manifold the effective Hamiltonian
/// `H_eff = P V P + sum_k P V|k><k|V P / Delta_k` is formed; `u_total` is its
/// diagonal element on the initial pair and `manifold_shifts` its spectrum.
pub fn pt2(
    atom: &Atom,
    basis: &PairBasis,
    axis: &QuantizationAxis,
    propagator: &PropagatorTensor,
    filter: &ChannelFilter,
    opts: &Pt2Options,
) -> Result<PotentialBreakdown> {
    let couplings = PairCouplings::new(atom, basis, axis, propagator, filter)?;
    let m = basis.manifold_len;
    let (free, refl) = couplings.columns(basis.manifold());
    let n = basis.len();

    let mut heff = Mat::<Complex64>::from_fn(m, m, |i, j| free[(i, j)] + refl[(i, j)]);
    let first_order = heff[(0, 0)].re;

    let (mut u0, mut uvf, mut uff) = (0.0, 0.0, 0.0);
    let mut channels: BTreeMap<Channel, f64> = Channel::ALL.iter().map(|c| (*c, 0.0)).collect();
    let mut quadrupole = 0.0;
    let mut contributions = Vec::new();
    let mut near = Vec::new();
    let init = basis.initial();

    for k in m..n {
        let delta = basis.states[k].detuning;
        let v: Vec<Complex64> = (0..m).map(|c| free[(k, c)] + refl[(k, c)]).collect();
        if v.iter().all(|x| x.norm_sqr() == 0.0) {
            continue;
        }
        if delta.abs() < opts.resonance_floor_ghz {
            near.push(k);
        }
        if delta == 0.0 {
            continue;
        }
        for i in 0..m {
            for j in 0..m {
                heff[(i, j)] += v[i].conj() * v[j] / delta;
            }
        }
        let (f, r) = (free[(k, 0)], refl[(k, 0)]);
        let (a, b, c) = (f.norm_sqr() / delta, 2.0 * (f.conj() * r).re / delta, r.norm_sqr() / delta);
        u0 += a;
        uvf += b;
        uff += c;
        let u = a + b + c;
        if u == 0.0 {
            continue;
        }
        let kind = coupling_kind(init, &basis.states[k]).expect("nonzero element has a multipole order");
        match kind {
            Coupling::Dipole(ch) => *channels.get_mut(&ch).unwrap() += u,
            _ => quadrupole += u,
        }
        contributions.push(PairContribution { index: k, state: basis.states[k], coupling: kind, u_ghz: u });
    }

    let second: f64 = u0 + uvf + uff;
    let scale: f64 = (0..m).map(|i| heff[(i, i)].re.abs()).fold(second.abs(), f64::max);
    for &k in &near {
        let state = &basis.states[k];
        let weight: f64 = (0..m)
            .map(|c| (free[(k, c)] + refl[(k, c)]).norm_sqr())
            .sum::<f64>()
            / state.detuning.abs();
        if state.detuning == 0.0 || weight > opts.resonance_share * scale {
            return Err(Error::QuasiResonance {
                pair: state.label(),
                detuning_ghz: state.detuning,
                floor_ghz: opts.resonance_floor_ghz,
            });
        }
    }

    contributions.sort_by(|x, y| y.u_ghz.abs().total_cmp(&x.u_ghz.abs()).then(x.index.cmp(&y.index)));
    contributions.truncate(opts.top_k);

    let manifold_shifts = if m == 1 {
        vec![heff[(0, 0)].re]
    } else {
        let evd = heff.self_adjoint_eigen(Side::Lower).map_err(|_| Error::Eigen)?;
        let s = evd.S().column_vector();
        (0..m).map(|i| s[i].re).collect()
    };

    Ok(PotentialBreakdown {
        u_total: first_order + second,
        u0,
        u_vacfib: uvf,
        u_fibfib: uff,
        first_order,
        channels,
        quadrupole,
        top: contributions,
        manifold_shifts,
    })
}
