//! Free-space static propagator `T0 = -(1/4 pi r^3)(I - 3 u u)` and its gradients.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use super::tensor::{d2_inv_r, d3_inv_r, d4_inv_r, scale3, scale4, Tensor3, Tensor4};
use super::GradientBlock;

/// `T0(r_A, r_B)` for positions in nm; returns nm^-3.
pub fn t0_points(ra: &Vector3<f64>, rb: &Vector3<f64>) -> Matrix3<f64> {
    d2_inv_r(&(ra - rb)) / (4.0 * PI)
}

pub fn grad_a(ra: &Vector3<f64>, rb: &Vector3<f64>) -> Tensor3 {
    scale3(&d3_inv_r(&(ra - rb)), 1.0 / (4.0 * PI))
}

pub fn grad_b(ra: &Vector3<f64>, rb: &Vector3<f64>) -> Tensor3 {
    scale3(&d3_inv_r(&(ra - rb)), -1.0 / (4.0 * PI))
}

pub fn hess_ab(ra: &Vector3<f64>, rb: &Vector3<f64>) -> Tensor4 {
    scale4(&d4_inv_r(&(ra - rb)), -1.0 / (4.0 * PI))
}

pub fn gradients(ra: &Vector3<f64>, rb: &Vector3<f64>) -> GradientBlock {
    GradientBlock { grad_a: grad_a(ra, rb), grad_b: grad_b(ra, rb), hess_ab: hess_ab(ra, rb) }
}
