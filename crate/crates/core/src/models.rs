//! Closed-form reduced models: the single-channel pi-pi ratio, the sigma+
//! anisotropy model and the Förster detuning scan.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::atomic::{Atom, AtomState};
use crate::error::{Error, Result};
use crate::propagators::{anisotropy_coeffs, t1, Environment, PairGeometry};

/// `U / U0 = (1 + 2 pi dz^3 [T1]_zz)^2` for a single pi-pi channel.
/// `dz` in nm, `t1zz` in nm^-3.
pub fn pipi_ratio(dz: f64, t1zz: f64) -> f64 {
    let f = 1.0 + 2.0 * PI * dz.powi(3) * t1zz;
    f * f
}

/// Free-space lateral propagator `diag(-1, -1, 2) / (4 pi dz^3)`.
fn t0_lateral(dz: f64) -> Matrix3<f64> {
    Matrix3::from_diagonal(&Vector3::new(-1.0, -1.0, 2.0)) / (4.0 * PI * dz.powi(3))
}

/// Unnormalized sigma+ polarization for the quantisation axis `(theta, phi)`.
fn sigma_plus(theta: f64, phi: f64) -> Vector3<Complex64> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(Complex64::new(-ct * cp, -sp), Complex64::new(-ct * sp, cp), Complex64::new(st, 0.0))
}

/// `|e+ . (T0 + T1) . e+|^2` for a lateral pair, in nm^-6.
pub fn sigma_model(theta: f64, phi: f64, dz: f64, t1: &Matrix3<f64>) -> f64 {
    let e = sigma_plus(theta, phi);
    let t = (t0_lateral(dz) + t1).map(|v| Complex64::new(v, 0.0));
    (e.transpose() * t * e)[(0, 0)].norm_sqr()
}

/// Coefficients of the sigma+ model (nm^-3 and dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaCoefficients {
    pub t0_scalar: f64,
    pub t_m: f64,
    pub delta_t: f64,
    pub eta1: f64,
    pub eta2: f64,
}

impl EtaCoefficients {
    pub fn from_tensor(dz: f64, t1: &Matrix3<f64>) -> Self {
        let t0_scalar = 3.0 / (4.0 * PI * dz.powi(3));
        let (delta_t, t_m) = anisotropy_coeffs(t1);
        Self {
            t0_scalar,
            t_m,
            delta_t,
            eta1: -2.0 * delta_t / (t0_scalar + t_m - delta_t),
            eta2: -delta_t / (t0_scalar + t_m),
        }
    }

    /// `(T0 + Tm - dT)^2 (sin^2 theta - eta1)^2`, the `phi = 0` slice.
    pub fn phi0_slice(&self, theta: f64) -> f64 {
        let s = theta.sin().powi(2) - self.eta1;
        (self.t0_scalar + self.t_m - self.delta_t).powi(2) * s * s
    }

    /// `(T0 + Tm)^2 (1 - eta2 cos 2 phi)^2`, the `theta = pi/2` slice.
    pub fn equator_slice(&self, phi: f64) -> f64 {
        let s = 1.0 - self.eta2 * (2.0 * phi).cos();
        (self.t0_scalar + self.t_m).powi(2) * s * s
    }
}

/// Extrema of the `phi = 0` slice normalized by `(T0 + Tm - dT)^2`:
/// `A1 = eta1^2` at `theta = 0`, `A2 = (1 - eta1)^2` at `theta = pi/2`, and the
/// zero `theta_min = asin(sqrt(eta1))`, defined only for `0 <= eta1 <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaReport {
    pub coefficients: EtaCoefficients,
    pub a1: f64,
    pub a2: f64,
    pub theta_min: Option<f64>,
    pub eta1_in_range: bool,
}

impl EtaReport {
    pub fn from_coefficients(coefficients: EtaCoefficients) -> Self {
        let eta1 = coefficients.eta1;
        let in_range = (0.0..=1.0).contains(&eta1);
        Self {
            coefficients,
            a1: eta1 * eta1,
            a2: (1.0 - eta1) * (1.0 - eta1),
            theta_min: in_range.then(|| eta1.sqrt().asin()),
            eta1_in_range: in_range,
        }
    }
}

/// Evaluates the sigma+ model coefficients at a lateral geometry.
pub fn eta_report(geometry: &PairGeometry, env: &Environment) -> Result<EtaReport> {
    if !geometry.is_lateral() {
        return Err(Error::Geometry("the sigma+ model needs a lateral configuration".into()));
    }
    let t = t1(geometry, env)?;
    Ok(EtaReport::from_coefficients(EtaCoefficients::from_tensor(geometry.dz.abs(), &t)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForsterRow {
    pub n: u32,
    /// `nP3/2 nP3/2 -> nS1/2 (n-1)D5/2` (GHz).
    pub delta1: f64,
    /// `nP3/2 nP3/2 -> nS1/2 (n+1)S1/2` (GHz).
    pub delta2: f64,
    pub ratio: f64,
}

/// Förster detunings `Delta = 2 E(nP3/2) - E(k) - E(l)`, i.e. the initial pair
/// energy minus the final one, so `Delta > 0` when the final pair lies below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForsterScan {
    pub rows: Vec<ForsterRow>,
}

impl ForsterScan {
    /// Values of `n` after which `Delta2` changes sign.
    pub fn delta2_sign_changes(&self) -> Vec<u32> {
        self.rows
            .windows(2)
            .filter(|w| w[0].delta2.signum() != w[1].delta2.signum())
            .map(|w| w[0].n)
            .collect()
    }
}

pub fn forster_scan(atom: &Atom, n_min: u32, n_max: u32) -> Result<ForsterScan> {
    if n_min < 4 || n_min > n_max {
        return Err(Error::InvalidInput(format!("Förster scan needs 4 <= n_min <= n_max, got {n_min}..{n_max}")));
    }
    let e = |n, l, j2| atom.energy(&AtomState::new(n, l, j2, 1)?);
    let rows = (n_min..=n_max)
        .map(|n| {
            let p = 2.0 * e(n, 1, 3)?;
            let s = e(n, 0, 1)?;
            let delta1 = p - s - e(n - 1, 2, 5)?;
            let delta2 = p - s - e(n + 1, 0, 1)?;
            Ok(ForsterRow { n, delta1, delta2, ratio: delta1 / delta2 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForsterScan { rows })
}
