//! Rubidium Rydberg single-atom structure: level energies, radial integrals and
//! dipole / quadrupole matrix elements for an arbitrary quantisation axis.

mod defects;
mod multipole;
pub mod radial;
mod state;

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

pub use defects::{DefectSeries, QuantumDefectTable, RB87_TABLE};
pub use multipole::{dipole_allowed, quadrupole_allowed, spherical_unit_conj};
pub use radial::{RadialParams, RadialWavefunction};
pub use state::AtomState;

use crate::error::{Error, Result};

type Level = (u32, u32, u32);

/// Direction of the quantisation axis `e_q = (sinΘ cosΦ, sinΘ sinΦ, cosΘ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct QuantizationAxis {
    pub theta: f64,
    pub phi: f64,
}

impl QuantizationAxis {
    pub const Z: Self = Self { theta: 0.0, phi: 0.0 };

    pub fn new(theta: f64, phi: f64) -> Self {
        Self { theta, phi }
    }

    /// Rotation whose columns are the quantisation-frame unit vectors
    /// `(e_x', e_y', e_z' = e_q)` in lab coordinates.
    pub fn rotation(&self) -> Matrix3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Matrix3::new(
            ct * cp, -sp, st * cp, //
            ct * sp, cp, st * sp, //
            -st, 0.0, ct,
        )
    }

    pub fn unit_vector(&self) -> Vector3<f64> {
        self.rotation().column(2).into_owned()
    }
}

/// One-atom structure with memoized radial integrals.
///
/// The caches are behind read-write locks so a single `Atom` can be shared by
/// parallel scan workers.
#[derive(Debug)]
pub struct Atom {
    defects: QuantumDefectTable,
    radial: RadialParams,
    wavefunctions: RwLock<HashMap<Level, Arc<RadialWavefunction>>>,
    integrals: RwLock<HashMap<(Level, Level, i32), f64>>,
}

impl Atom {
    pub fn new(defects: QuantumDefectTable, radial: RadialParams) -> Self {
        Self {
            defects,
            radial,
            wavefunctions: RwLock::new(HashMap::new()),
            integrals: RwLock::new(HashMap::new()),
        }
    }

    pub fn rubidium87() -> Self {
        Self::new(QuantumDefectTable::rubidium87(), RadialParams::default())
    }

    pub fn defects(&self) -> &QuantumDefectTable {
        &self.defects
    }

    /// Level energy in GHz relative to the ionization threshold.
    pub fn energy(&self, state: &AtomState) -> Result<f64> {
        state.validate()?;
        self.defects.energy_ghz(state.n, state.l, state.j2)
    }

    pub fn wavefunction(&self, state: &AtomState) -> Result<Arc<RadialWavefunction>> {
        let key = state.level();
        if let Some(wf) = self.wavefunctions.read().get(&key) {
            return Ok(wf.clone());
        }
        let nstar = self.defects.effective_n(state.n, state.l, state.j2)?;
        let wf = Arc::new(radial::solve(nstar, state.n, state.l, &self.radial)?);
        Ok(self.wavefunctions.write().entry(key).or_insert(wf).clone())
    }

    /// `int R_a(r) r^power R_b(r) r^2 dr` in atomic units. Symmetric in `(a, b)`.
    pub fn radial_integral(&self, a: &AtomState, b: &AtomState, power: i32) -> Result<f64> {
        let dl = a.l.abs_diff(b.l);
        let ok = match power {
            1 => dl == 1,
            2 => dl == 0 || dl == 2,
            _ => true,
        };
        if !ok {
            return Err(Error::ForbiddenTransition {
                from: *a,
                to: *b,
                reason: "orbital selection rule for the radial power",
            });
        }
        let (ka, kb) = (a.level(), b.level());
        let key = if ka <= kb { (ka, kb, power) } else { (kb, ka, power) };
        if let Some(v) = self.integrals.read().get(&key) {
            return Ok(*v);
        }
        let v = self.wavefunction(a)?.overlap(&*self.wavefunction(b)?, power);
        self.integrals.write().insert(key, v);
        Ok(v)
    }

    /// Whether `<to| r |from>` is nonzero by angular momentum selection rules.
    pub fn dipole_coupled(from: &AtomState, to: &AtomState) -> bool {
        dipole_allowed(from, to).is_ok() && multipole::angular_factor(to, from, 1, to.mj2 - from.mj2).abs() > 1e-14
    }

    /// Whether the rank-2 part of `<to| r r |from>` is nonzero by selection rules.
    pub fn quadrupole_coupled(from: &AtomState, to: &AtomState) -> bool {
        quadrupole_allowed(from, to).is_ok() && multipole::angular_factor(to, from, 2, to.mj2 - from.mj2).abs() > 1e-14
    }

    /// `<to| r_q |from>` with `q = M_to - M_from`, atomic units.
    pub fn dipole_spherical(&self, from: &AtomState, to: &AtomState) -> Result<(i32, f64)> {
        dipole_allowed(from, to)?;
        let radial = self.radial_integral(from, to, 1)?;
        let q2 = to.mj2 - from.mj2;
        Ok((q2 / 2, radial * multipole::angular_factor(to, from, 1, q2)))
    }

    /// Lab-frame Cartesian vector `<to| r |from>` (atomic units, electron charge
    /// omitted), for magnetic quantum numbers defined along `axis`.
    pub fn dipole_vector(&self, from: &AtomState, to: &AtomState, axis: &QuantizationAxis) -> Result<Vector3<Complex64>> {
        let (q, amp) = self.dipole_spherical(from, to)?;
        let local = spherical_unit_conj(q) * Complex64::new(amp, 0.0);
        Ok(axis.rotation().map(|v| Complex64::new(v, 0.0)) * local)
    }

    /// Lab-frame tensor `<to| Q |from>` with `Q = -(1/2) r ⊗ r` (atomic units).
    pub fn quadrupole_tensor(&self, from: &AtomState, to: &AtomState, axis: &QuantizationAxis) -> Result<Matrix3<Complex64>> {
        quadrupole_allowed(from, to)?;
        let radial = self.radial_integral(from, to, 2)?;
        let local = multipole::quadrupole_local(from, to, radial);
        let rot = axis.rotation().map(|v| Complex64::new(v, 0.0));
        Ok(rot * local * rot.transpose())
    }
}
