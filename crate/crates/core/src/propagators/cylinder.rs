//! Reflected static propagator of a dielectric cylinder of radius `a` along `z`.
//!
//! The scattered scalar Green's function outside the cylinder is
//!
//! `G1 = (1/2 pi^2) sum_m eps_m cos(m psi) int_0^inf dk cos(k zeta) A_m(ka) K_m(k rho_A) K_m(k rho_B)`
//!
//! with `A_m = (1 - eps) I_m I_m' / (eps K_m I_m' - K_m' I_m)`, `psi = phi_A - phi_B`,
//! `zeta = z_A - z_B`, `eps_0 = 1` and `eps_m = 2`. `T1 = -grad_A grad_B G1` is
//! assembled in the local cylindrical bases of both atoms and rotated to
//! Cartesian components. Bessel functions only enter through the ratios
//! `I_m / I_{m-1}` (backward recurrence) and `K_m / K_{m-1}` (forward
//! recurrence), so no individual `I_m` or `K_m` is ever formed.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use super::bessel::k01_scaled;
use super::quadrature::{integrate, QuadOptions};
use super::CylQuadParams;
use crate::error::{Error, Result};

const MAX_SEGMENTS: usize = 20_000;
/// Largest tolerated estimate of the truncated m-tail, relative to `rel_tol`.
const M_TAIL_SLACK: f64 = 100.0;

struct Point {
    rho_a: f64,
    rho_b: f64,
    psi: f64,
    zeta: f64,
    basis_a: Matrix3<f64>,
    basis_b: Matrix3<f64>,
}

fn cylindrical_basis(phi: f64) -> Matrix3<f64> {
    let (s, c) = phi.sin_cos();
    // columns e_rho, e_phi, e_z
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

impl Point {
    fn new(a: f64, ra: &Vector3<f64>, rb: &Vector3<f64>) -> Result<Self> {
        let rho_a = ra.x.hypot(ra.y);
        let rho_b = rb.x.hypot(rb.y);
        if !(rho_a > a && rho_b > a) {
            return Err(Error::Geometry(format!(
                "atom inside the cylinder (a = {a} nm, rho_A = {rho_a} nm, rho_B = {rho_b} nm)"
            )));
        }
        let phi_a = ra.y.atan2(ra.x);
        let phi_b = rb.y.atan2(rb.x);
        Ok(Self {
            rho_a,
            rho_b,
            psi: phi_a - phi_b,
            zeta: ra.z - rb.z,
            basis_a: cylindrical_basis(phi_a),
            basis_b: cylindrical_basis(phi_b),
        })
    }
}

/// Per-point recurrence state for one atom coordinate `y = k rho`.
struct KRatio {
    y: f64,
    q: f64,
    q1: f64,
    log_ratio: f64,
}

impl KRatio {
    fn new(y: f64, x: f64, k0x: f64) -> Self {
        let (k0, k1) = k01_scaled(y);
        Self { y, q: 0.0, q1: k1 / k0, log_ratio: (k0 / k0x).ln() - (y - x) }
    }

    /// Advances `q = K_m / K_{m-1}` to order `m >= 1` and returns it.
    fn advance(&mut self, m: usize) -> f64 {
        self.q = if m == 1 { self.q1 } else { 1.0 / self.q + 2.0 * (m - 1) as f64 / self.y };
        self.q
    }

    /// `K_m'(y) / K_m(y)`.
    fn log_derivative(&self, m: usize) -> f64 {
        if m == 0 {
            -self.q1
        } else {
            -1.0 / self.q - m as f64 / self.y
        }
    }
}

/// Evaluates `T1` (nm^-3) at several `(r_A, r_B)` pairs sharing one adaptive
/// k-grid, so that finite-difference stencils see consistent quadrature errors.
pub fn t1_points(a: f64, epsilon: f64, quad: &CylQuadParams, pairs: &[(Vector3<f64>, Vector3<f64>)]) -> Result<Vec<Matrix3<f64>>> {
    if pairs.is_empty() {
        return Ok(Vec::new());
    }
    let points = pairs.iter().map(|(ra, rb)| Point::new(a, ra, rb)).collect::<Result<Vec<_>>>()?;
    let min_gap = points.iter().map(|p| p.rho_a.min(p.rho_b) - a).fold(f64::INFINITY, f64::min);
    let max_zeta = points.iter().map(|p| p.zeta.abs()).fold(0.0, f64::max);
    let k_max = quad.k_max_scale / min_gap;
    let segments = ((k_max * max_zeta / PI).ceil() as usize).clamp(8, 2000);

    let np = points.len();
    let dim = 9 * np + 2;
    let m_max = quad.m_max;
    let rel_tol = quad.rel_tol;
    let mut p_ratio = Vec::new();
    let mut states: Vec<(KRatio, KRatio)> = Vec::with_capacity(np);
    let mut trig: Vec<(f64, f64)> = vec![(0.0, 0.0); np];

    let integrand = |k: f64, out: &mut [f64]| {
        out.iter_mut().for_each(|v| *v = 0.0);
        let x = k * a;
        // p[j] = I_j(x) / I_{j-1}(x) for j = 1..=m_max+1
        let n_top = m_max + 62 + (1.5 * x).ceil() as usize;
        p_ratio.clear();
        p_ratio.resize(m_max + 2, 0.0);
        let mut p = 0.0;
        for j in (1..=n_top).rev() {
            p = 1.0 / (2.0 * j as f64 / x + p);
            if j <= m_max + 1 {
                p_ratio[j] = p;
            }
        }
        let (k0x, k1x) = k01_scaled(x);
        let mut kx = KRatio { y: x, q: 0.0, q1: k1x / k0x, log_ratio: 0.0 };
        states.clear();
        for (pt, t) in points.iter().zip(trig.iter_mut()) {
            states.push((KRatio::new(k * pt.rho_a, x, k0x), KRatio::new(k * pt.rho_b, x, k0x)));
            *t = (k * pt.zeta).sin_cos();
        }

        let mut bound_sum = 0.0;
        let mut prev_bound = 0.0;
        let mut last_bound = 0.0;
        let mut quiet = 0;
        let mut converged = false;
        for m in 0..=m_max {
            let mf = m as f64;
            if m >= 1 {
                let qx = kx.advance(m);
                for (sa, sb) in states.iter_mut() {
                    sa.log_ratio += (sa.advance(m) / qx).ln();
                    sb.log_ratio += (sb.advance(m) / qx).ln();
                }
            }
            let r = p_ratio[m + 1] + mf / x;
            let s = kx.log_derivative(m);
            let ik = 1.0 / (x * (r - s));
            let amp = (1.0 - epsilon) * ik * r / (epsilon * r - s);
            let weight = if m == 0 { 1.0 } else { 2.0 };
            let mut mode_bound = 0.0;
            for (i, (pt, (sa, sb))) in points.iter().zip(states.iter()).enumerate() {
                let w = weight * amp * (sa.log_ratio + sb.log_ratio).exp();
                if w == 0.0 {
                    continue;
                }
                let da = sa.log_derivative(m);
                let db = sb.log_derivative(m);
                let (sz, cz) = trig[i];
                let (sm, cm) = (mf * pt.psi).sin_cos();
                let ka = k * da;
                let kb = k * db;
                let ma = mf * sm / pt.rho_a;
                let mb = mf * sm / pt.rho_b;
                let o = &mut out[9 * i..9 * i + 9];
                o[0] += w * ka * kb * cz * cm;
                o[1] += w * ka * mb * cz;
                o[2] += w * ka * k * sz * cm;
                o[3] -= w * ma * kb * cz;
                o[4] += w * mf * mf * cm * cz / (pt.rho_a * pt.rho_b);
                o[5] -= w * ma * k * sz;
                o[6] -= w * k * sz * kb * cm;
                o[7] -= w * k * sz * mb;
                o[8] += w * k * k * cz * cm;
                mode_bound += w.abs() * (k * (da.abs() + 1.0) + mf / pt.rho_a) * (k * (db.abs() + 1.0) + mf / pt.rho_b);
            }
            bound_sum += mode_bound;
            prev_bound = last_bound;
            last_bound = mode_bound;
            if m >= 1 && mode_bound <= rel_tol * bound_sum {
                quiet += 1;
                if quiet >= 2 {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        let tail = if converged || prev_bound == 0.0 {
            last_bound
        } else {
            let rho = (last_bound / prev_bound).min(0.99);
            last_bound * rho / (1.0 - rho)
        };
        out[9 * np] = tail;
        out[9 * np + 1] = bound_sum;
    };

    let opts = QuadOptions { rel_tol, control_dims: 9 * np, initial_segments: segments, max_segments: MAX_SEGMENTS };
    let res = integrate(integrand, 0.0, k_max, dim, &opts)?;
    let tail = res.value[9 * np] / res.value[9 * np + 1];
    if tail > M_TAIL_SLACK * rel_tol {
        return Err(Error::QuadratureNonConvergence { residual: tail, tol: rel_tol });
    }
    let pref = -1.0 / (2.0 * PI * PI);
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            let c = Matrix3::from_row_slice(&res.value[9 * i..9 * i + 9]) * pref;
            pt.basis_a * c * pt.basis_b.transpose()
        })
        .collect())
}
