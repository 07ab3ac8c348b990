use serde::{Deserialize, Serialize};

use super::PairState;
use crate::atomic::{dipole_allowed, AtomState};
use crate::error::{Error, Result};

/// Polarization class of a dipole-dipole coupling, relative to the
/// quantisation axis the magnetic quantum numbers refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Channel {
    PiPi,
    PiSigma,
    SigmaSame,
    SigmaOpposite,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::PiPi, Channel::PiSigma, Channel::SigmaSame, Channel::SigmaOpposite];

    /// Channels that survive in vacuum for a lateral pair.
    pub fn vacuum_allowed(self) -> bool {
        matches!(self, Channel::PiPi | Channel::SigmaOpposite)
    }

    pub fn label(self) -> &'static str {
        match self {
            Channel::PiPi => "pi-pi",
            Channel::PiSigma => "pi-sigma",
            Channel::SigmaSame => "sigma-sigma-same",
            Channel::SigmaOpposite => "sigma-sigma-opposite",
        }
    }

    /// Class of the doubled magnetic steps `(2 dM_A, 2 dM_B)`.
    pub fn from_steps(qa2: i32, qb2: i32) -> Self {
        match (qa2, qb2) {
            (0, 0) => Channel::PiPi,
            (0, _) | (_, 0) => Channel::PiSigma,
            _ if qa2.signum() == qb2.signum() => Channel::SigmaSame,
            _ => Channel::SigmaOpposite,
        }
    }
}

/// Multipole order of one matrix element. Parity fixes it uniquely: a
/// dipole step changes `L` by one, a quadrupole step by zero or two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    Dipole(Channel),
    DipoleQuadrupole,
    QuadrupoleDipole,
    QuadrupoleQuadrupole,
}

/// Which couplings an assembly keeps. Rejected elements are set to exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelFilter {
    pub pi_pi: bool,
    pub pi_sigma: bool,
    pub sigma_same: bool,
    pub sigma_opposite: bool,
    pub dipole_dipole: bool,
    /// Covers both the `d.Q` and `Q.d` terms.
    pub dipole_quadrupole: bool,
    pub quadrupole_quadrupole: bool,
}

impl Default for ChannelFilter {
    fn default() -> Self {
        Self::all()
    }
}

impl ChannelFilter {
    pub fn all() -> Self {
        Self {
            pi_pi: true,
            pi_sigma: true,
            sigma_same: true,
            sigma_opposite: true,
            dipole_dipole: true,
            dipole_quadrupole: true,
            quadrupole_quadrupole: true,
        }
    }

    pub fn dipole_only() -> Self {
        Self { dipole_quadrupole: false, quadrupole_quadrupole: false, ..Self::all() }
    }

    /// A single dipole-dipole channel.
    pub fn only(channel: Channel) -> Self {
        let mut f = Self {
            pi_pi: false,
            pi_sigma: false,
            sigma_same: false,
            sigma_opposite: false,
            ..Self::dipole_only()
        };
        *f.channel_mut(channel) = true;
        f
    }

    fn channel_mut(&mut self, channel: Channel) -> &mut bool {
        match channel {
            Channel::PiPi => &mut self.pi_pi,
            Channel::PiSigma => &mut self.pi_sigma,
            Channel::SigmaSame => &mut self.sigma_same,
            Channel::SigmaOpposite => &mut self.sigma_opposite,
        }
    }

    pub fn allows_channel(&self, channel: Channel) -> bool {
        match channel {
            Channel::PiPi => self.pi_pi,
            Channel::PiSigma => self.pi_sigma,
            Channel::SigmaSame => self.sigma_same,
            Channel::SigmaOpposite => self.sigma_opposite,
        }
    }

    pub fn allows(&self, coupling: Coupling) -> bool {
        match coupling {
            Coupling::Dipole(c) => self.dipole_dipole && self.allows_channel(c),
            Coupling::DipoleQuadrupole | Coupling::QuadrupoleDipole => self.dipole_quadrupole,
            Coupling::QuadrupoleQuadrupole => self.quadrupole_quadrupole,
        }
    }

    pub fn wants_quadrupole(&self) -> bool {
        self.dipole_quadrupole || self.quadrupole_quadrupole
    }
}

fn single_step(from: &AtomState, to: &AtomState) -> Result<i32> {
    dipole_allowed(from, to).map_err(|_| Error::NotSingleStep)?;
    Ok(to.mj2 - from.mj2)
}

/// Channel of the dipole-dipole coupling `initial -> coupled`.
///
/// Magnetic quantum numbers are taken along whatever axis the states were
/// defined for, so the class is relative to that axis.
pub fn classify_channel(initial: &PairState, coupled: &PairState) -> Result<Channel> {
    let qa = single_step(&initial.a, &coupled.a)?;
    let qb = single_step(&initial.b, &coupled.b)?;
    Ok(Channel::from_steps(qa, qb))
}

/// Multipole order linking two pair states, or `None` if the element vanishes
/// by parity (`dL` of one atom not in {0, 1, 2}).
pub fn coupling_kind(from: &PairState, to: &PairState) -> Option<Coupling> {
    let order = |x: &AtomState, y: &AtomState| match x.l.abs_diff(y.l) {
        1 => Some(1),
        0 | 2 => Some(2),
        _ => None,
    };
    match (order(&from.a, &to.a)?, order(&from.b, &to.b)?) {
        (1, 1) => Some(Coupling::Dipole(Channel::from_steps(to.a.mj2 - from.a.mj2, to.b.mj2 - from.b.mj2))),
        (1, 2) => Some(Coupling::DipoleQuadrupole),
        (2, 1) => Some(Coupling::QuadrupoleDipole),
        _ => Some(Coupling::QuadrupoleQuadrupole),
    }
}
