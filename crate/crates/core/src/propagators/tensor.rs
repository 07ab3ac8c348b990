//! Rank-3/4 arrays for propagator gradients and derivatives of `1/|R|`.
//!
//! Index convention used throughout: `grad[i][j][k] = d_k T_ij` and
//! `hess[i][j][k][l] = d_{A,k} d_{B,l} T_ij`.

use nalgebra::{Matrix3, Vector3};

pub type Tensor3 = [[[f64; 3]; 3]; 3];
pub type Tensor4 = [[[[f64; 3]; 3]; 3]; 3];

pub const ZERO3: Tensor3 = [[[0.0; 3]; 3]; 3];
pub const ZERO4: Tensor4 = [[[[0.0; 3]; 3]; 3]; 3];

#[inline]
fn kd(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

/// `d_i d_j (1/R)`.
pub fn d2_inv_r(r: &Vector3<f64>) -> Matrix3<f64> {
    let r2 = r.norm_squared();
    let r5 = r2 * r2 * r2.sqrt();
    Matrix3::from_fn(|i, j| (3.0 * r[i] * r[j] - r2 * kd(i, j)) / r5)
}

/// `d_i d_j d_k (1/R)`.
pub fn d3_inv_r(r: &Vector3<f64>) -> Tensor3 {
    let r2 = r.norm_squared();
    let rn = r2.sqrt();
    let r5 = r2 * r2 * rn;
    let r7 = r5 * r2;
    let mut out = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[i][j][k] = -15.0 * r[i] * r[j] * r[k] / r7
                    + 3.0 * (r[i] * kd(j, k) + r[j] * kd(i, k) + r[k] * kd(i, j)) / r5;
            }
        }
    }
    out
}

/// `d_i d_j d_k d_l (1/R)`.
pub fn d4_inv_r(r: &Vector3<f64>) -> Tensor4 {
    let r2 = r.norm_squared();
    let rn = r2.sqrt();
    let r5 = r2 * r2 * rn;
    let r7 = r5 * r2;
    let r9 = r7 * r2;
    let mut out = ZERO4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[i][j][k][l] = 105.0 * r[i] * r[j] * r[k] * r[l] / r9
                        - 15.0
                            * (kd(i, l) * r[j] * r[k]
                                + kd(j, l) * r[i] * r[k]
                                + kd(k, l) * r[i] * r[j]
                                + kd(j, k) * r[i] * r[l]
                                + kd(i, k) * r[j] * r[l]
                                + kd(i, j) * r[k] * r[l])
                            / r7
                        + 3.0 * (kd(j, k) * kd(i, l) + kd(i, k) * kd(j, l) + kd(i, j) * kd(k, l)) / r5;
                }
            }
        }
    }
    out
}

pub fn scale3(t: &Tensor3, s: f64) -> Tensor3 {
    let mut out = *t;
    out.iter_mut().flatten().flatten().for_each(|v| *v *= s);
    out
}

pub fn scale4(t: &Tensor4, s: f64) -> Tensor4 {
    let mut out = *t;
    out.iter_mut().flatten().flatten().flatten().for_each(|v| *v *= s);
    out
}

pub fn max_abs3(t: &Tensor3) -> f64 {
    t.iter().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
}

pub fn max_abs4(t: &Tensor4) -> f64 {
    t.iter().flatten().flatten().flatten().fold(0.0, |m, v| m.max(v.abs()))
}
