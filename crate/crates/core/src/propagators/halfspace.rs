//! Image-dipole propagator of a dielectric half-space `x < a`.
//!
//! With `M = diag(-1, 1, 1)` and the mirror image `r_B* = M r_B + 2a e_x`,
//! `T1 = -(beta/4 pi) H(D) M` where `D = r_A - r_B*`, `H = grad grad (1/D)` and
//! `beta = (eps - 1)/(eps + 1)`.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use super::tensor::{d2_inv_r, d3_inv_r, d4_inv_r, Tensor3, Tensor4, ZERO3, ZERO4};
use super::GradientBlock;
use crate::error::{Error, Result};

const MIRROR: [f64; 3] = [-1.0, 1.0, 1.0];

fn image_separation(plane: f64, ra: &Vector3<f64>, rb: &Vector3<f64>) -> Result<Vector3<f64>> {
    if !(ra.x > plane && rb.x > plane) {
        return Err(Error::Geometry(format!("atom inside the half-space medium (x <= {plane} nm)")));
    }
    Ok(Vector3::new(ra.x - (2.0 * plane - rb.x), ra.y - rb.y, ra.z - rb.z))
}

pub fn t1_points(plane: f64, beta: f64, ra: &Vector3<f64>, rb: &Vector3<f64>) -> Result<Matrix3<f64>> {
    let d = image_separation(plane, ra, rb)?;
    let h = d2_inv_r(&d);
    Ok(Matrix3::from_fn(|i, j| -beta / (4.0 * PI) * h[(i, j)] * MIRROR[j]))
}

pub fn gradients(plane: f64, beta: f64, ra: &Vector3<f64>, rb: &Vector3<f64>) -> Result<GradientBlock> {
    let d = image_separation(plane, ra, rb)?;
    let g3 = d3_inv_r(&d);
    let g4 = d4_inv_r(&d);
    let c = beta / (4.0 * PI);
    let mut grad_a: Tensor3 = ZERO3;
    let mut grad_b: Tensor3 = ZERO3;
    let mut hess_ab: Tensor4 = ZERO4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                grad_a[i][j][k] = -c * g3[i][j][k] * MIRROR[j];
                grad_b[i][j][k] = c * g3[i][j][k] * MIRROR[j] * MIRROR[k];
                for l in 0..3 {
                    hess_ab[i][j][k][l] = c * g4[i][j][k][l] * MIRROR[j] * MIRROR[l];
                }
            }
        }
    }
    Ok(GradientBlock { grad_a, grad_b, hess_ab })
}
