use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::atomic::QuantizationAxis;
use crate::error::{Error, Result};

/// Two atoms outside a fibre of radius `fibre_radius` whose axis is `z`.
///
/// Atom A sits at cylindrical coordinates `(r_a, 0, 0)` and atom B at
/// `(r_b, dphi, dz)`. Lengths in nm, angles in rad. For the half-space model the
/// surface is the plane `x = fibre_radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairGeometry {
    pub fibre_radius: f64,
    pub r_a: f64,
    pub r_b: f64,
    pub dphi: f64,
    pub dz: f64,
    pub axis: QuantizationAxis,
}

impl PairGeometry {
    /// Lateral configuration: equal radii, `dphi = 0`, quantisation along `z`.
    pub fn lateral(fibre_radius: f64, r: f64, dz: f64) -> Self {
        Self { fibre_radius, r_a: r, r_b: r, dphi: 0.0, dz, axis: QuantizationAxis::Z }
    }

    pub fn with_axis(self, axis: QuantizationAxis) -> Self {
        Self { axis, ..self }
    }

    pub fn position_a(&self) -> Vector3<f64> {
        Vector3::new(self.r_a, 0.0, 0.0)
    }

    pub fn position_b(&self) -> Vector3<f64> {
        Vector3::new(self.r_b * self.dphi.cos(), self.r_b * self.dphi.sin(), self.dz)
    }

    /// Interatomic distance `r_AB` (nm).
    pub fn separation(&self) -> f64 {
        let chord = (0.5 * self.dphi).sin();
        (self.dz * self.dz + (self.r_a - self.r_b).powi(2) + 4.0 * self.r_a * self.r_b * chord * chord).sqrt()
    }

    /// Cosine of the angle between the interatomic axis and the fibre axis.
    pub fn cos_theta_ab(&self) -> f64 {
        self.dz / self.separation()
    }

    pub fn is_lateral(&self) -> bool {
        self.dphi == 0.0 && self.r_a == self.r_b
    }

    /// Atom-surface distances `(R_A - a, R_B - a)`.
    pub fn surface_gaps(&self) -> (f64, f64) {
        (self.r_a - self.fibre_radius, self.r_b - self.fibre_radius)
    }

    pub fn validate_free(&self) -> Result<()> {
        let vals = [self.fibre_radius, self.r_a, self.r_b, self.dphi, self.dz];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Geometry("non-finite coordinate".into()));
        }
        if self.r_a < 0.0 || self.r_b < 0.0 {
            return Err(Error::Geometry("radial coordinates must be non-negative".into()));
        }
        if !(self.separation() > 0.0) {
            return Err(Error::Geometry("coincident atoms (r_AB = 0)".into()));
        }
        Ok(())
    }

    pub fn validate_outside(&self) -> Result<()> {
        self.validate_free()?;
        if !(self.fibre_radius > 0.0) {
            return Err(Error::Geometry(format!("fibre radius {} nm must be positive", self.fibre_radius)));
        }
        if !(self.r_a > self.fibre_radius && self.r_b > self.fibre_radius) {
            return Err(Error::Geometry(format!(
                "atoms must lie outside the fibre (a = {} nm, R_A = {} nm, R_B = {} nm)",
                self.fibre_radius, self.r_a, self.r_b
            )));
        }
        Ok(())
    }
}

/// Static dielectric response of the fibre material.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Medium {
    epsilon: f64,
}

impl Medium {
    /// Fused silica default `eps(0) = 3.9`.
    pub const SILICA: Self = Self { epsilon: 3.9 };

    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon > 1.0) || !epsilon.is_finite() {
            return Err(Error::Medium(epsilon));
        }
        Ok(Self { epsilon })
    }

    pub fn from_index(n: f64) -> Result<Self> {
        Self::new(n * n)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Image-charge factor `(eps - 1)/(eps + 1)`.
    pub fn image_factor(&self) -> f64 {
        (self.epsilon - 1.0) / (self.epsilon + 1.0)
    }
}

impl Default for Medium {
    fn default() -> Self {
        Self::SILICA
    }
}
