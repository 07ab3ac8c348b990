//! Static (nonretarded) propagator `T(r_A, r_B) = T0 + T1` and its gradients for
//! vacuum, a dielectric half-space and a dielectric cylinder.
//!
//! Convention: `T = -grad_A grad_B G` with `G0 = 1/(4 pi |r_A - r_B|)`. All
//! tensors are in nm^-3 (gradients nm^-4, mixed second derivatives nm^-5).

mod bessel;
mod cylinder;
mod free;
mod geometry;
mod halfspace;
pub mod quadrature;
pub mod tensor;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

pub use bessel::k01_scaled;
pub use geometry::{Medium, PairGeometry};
pub use tensor::{Tensor3, Tensor4};

use crate::error::{Error, Result};
use tensor::{max_abs3, max_abs4, ZERO3, ZERO4};

/// Convergence controls of the cylinder mode expansion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CylQuadParams {
    /// Hard cap on the azimuthal order.
    pub m_max: usize,
    /// Relative tolerance for both the m-truncation and the k-quadrature.
    pub rel_tol: f64,
    /// `k_max = k_max_scale / min(X_A, X_B)`.
    pub k_max_scale: f64,
}

impl Default for CylQuadParams {
    fn default() -> Self {
        Self { m_max: 120, rel_tol: 1e-8, k_max_scale: 40.0 }
    }
}

/// Surroundings of the atom pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Environment {
    Vacuum,
    HalfSpace { medium: Medium },
    Cylinder { medium: Medium, quadrature: CylQuadParams },
}

impl Environment {
    pub fn cylinder(medium: Medium) -> Self {
        Self::Cylinder { medium, quadrature: CylQuadParams::default() }
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, Self::Vacuum)
    }
}

/// First and mixed second derivatives of one part of the propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientBlock {
    /// `grad_a[i][j][k] = d T_ij / d r_{A,k}`.
    pub grad_a: Tensor3,
    /// `grad_b[i][j][k] = d T_ij / d r_{B,k}`.
    pub grad_b: Tensor3,
    /// `hess_ab[i][j][k][l] = d^2 T_ij / d r_{A,k} d r_{B,l}`.
    pub hess_ab: Tensor4,
}

impl GradientBlock {
    pub const ZERO: Self = Self { grad_a: ZERO3, grad_b: ZERO3, hess_ab: ZERO4 };
}

/// Propagator sample at one geometry point, split into free and reflected parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorTensor {
    pub t0: Matrix3<f64>,
    pub t1: Matrix3<f64>,
    pub grad0: Option<GradientBlock>,
    pub grad1: Option<GradientBlock>,
}

impl PropagatorTensor {
    pub fn total(&self) -> Matrix3<f64> {
        self.t0 + self.t1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Free,
    Reflected,
}

/// Free-space propagator `T0 = -(1/4 pi r^3)(I - 3 u u)`.
pub fn t0(geometry: &PairGeometry) -> Result<Matrix3<f64>> {
    geometry.validate_free()?;
    Ok(free::t0_points(&geometry.position_a(), &geometry.position_b()))
}

/// Image propagator of the half-space `x < a`.
pub fn t1_halfspace(geometry: &PairGeometry, medium: &Medium) -> Result<Matrix3<f64>> {
    geometry.validate_free()?;
    halfspace::t1_points(geometry.fibre_radius, medium.image_factor(), &geometry.position_a(), &geometry.position_b())
}

/// Half-space `T1` for arbitrary Cartesian positions (nm); the surface is `x = plane`.
pub fn t1_halfspace_points(plane: f64, medium: &Medium, ra: &Vector3<f64>, rb: &Vector3<f64>) -> Result<Matrix3<f64>> {
    halfspace::t1_points(plane, medium.image_factor(), ra, rb)
}

/// Reflected propagator of the dielectric cylinder of radius `a`.
pub fn t1_cylinder(geometry: &PairGeometry, medium: &Medium, quad: &CylQuadParams) -> Result<Matrix3<f64>> {
    geometry.validate_outside()?;
    let pair = [(geometry.position_a(), geometry.position_b())];
    Ok(cylinder::t1_points(geometry.fibre_radius, medium.epsilon(), quad, &pair)?[0])
}

/// Cylinder `T1` at arbitrary Cartesian positions (nm).
pub fn t1_cylinder_points(
    fibre_radius: f64,
    medium: &Medium,
    quad: &CylQuadParams,
    pairs: &[(Vector3<f64>, Vector3<f64>)],
) -> Result<Vec<Matrix3<f64>>> {
    cylinder::t1_points(fibre_radius, medium.epsilon(), quad, pairs)
}

/// Reflected part for any environment (zero in vacuum).
pub fn t1(geometry: &PairGeometry, env: &Environment) -> Result<Matrix3<f64>> {
    match env {
        Environment::Vacuum => Ok(Matrix3::zeros()),
        Environment::HalfSpace { medium } => t1_halfspace(geometry, medium),
        Environment::Cylinder { medium, quadrature } => t1_cylinder(geometry, medium, quadrature),
    }
}

/// Samples the propagator, optionally with the gradient blocks needed for
/// quadrupole couplings.
pub fn propagator(geometry: &PairGeometry, env: &Environment, with_gradients: bool) -> Result<PropagatorTensor> {
    let t0 = t0(geometry)?;
    let (ra, rb) = (geometry.position_a(), geometry.position_b());
    if !with_gradients {
        return Ok(PropagatorTensor { t0, t1: t1(geometry, env)?, grad0: None, grad1: None });
    }
    let grad0 = Some(free::gradients(&ra, &rb));
    let (t1, grad1) = match env {
        Environment::Vacuum => (Matrix3::zeros(), GradientBlock::ZERO),
        Environment::HalfSpace { medium } => {
            let beta = medium.image_factor();
            let a = geometry.fibre_radius;
            (halfspace::t1_points(a, beta, &ra, &rb)?, halfspace::gradients(a, beta, &ra, &rb)?)
        }
        Environment::Cylinder { medium, quadrature } => {
            geometry.validate_outside()?;
            let a = geometry.fibre_radius;
            let eval = |pairs: &[(Vector3<f64>, Vector3<f64>)]| cylinder::t1_points(a, medium.epsilon(), quadrature, pairs);
            let (gap_a, gap_b) = geometry.surface_gaps();
            let fd = fd_gradients(eval, &ra, &rb, 0.05 * gap_a.min(gap_b))?;
            (fd.center, fd.block)
        }
    };
    Ok(PropagatorTensor { t0, t1, grad0, grad1: Some(grad1) })
}

/// One gradient array of the chosen part.
pub fn grad_t(geometry: &PairGeometry, env: &Environment, which: Which, part: Part) -> Result<Tensor3> {
    let p = propagator(geometry, env, true)?;
    let block = match part {
        Part::Free => p.grad0,
        Part::Reflected => p.grad1,
    }
    .expect("gradients requested");
    Ok(match which {
        Which::A => block.grad_a,
        Which::B => block.grad_b,
    })
}

/// `(Delta T, T_m)` with `Delta T = (T_xx - T_yy)/2` and `T_m = T_zz - (T_xx + T_yy)/2`.
pub fn anisotropy_coeffs(t1: &Matrix3<f64>) -> (f64, f64) {
    let dt = 0.5 * (t1[(0, 0)] - t1[(1, 1)]);
    let tm = t1[(2, 2)] - 0.5 * (t1[(0, 0)] + t1[(1, 1)]);
    (dt, tm)
}

/// Finite-difference gradients with their Richardson residual.
#[derive(Debug, Clone)]
pub struct FdGradients {
    pub center: Matrix3<f64>,
    pub block: GradientBlock,
    /// Largest `|D(h/2) - D(h)| / 3` relative to the largest entry of the same array.
    pub residual: f64,
    pub step: f64,
}

const FD_TARGET: f64 = 1e-4;

/// Richardson-extrapolated central differences of a propagator evaluated at a
/// batch of position pairs. The step is halved (at most three times) until the
/// extrapolation residual drops below 1e-4 relative.
pub fn fd_gradients<F>(mut eval: F, ra: &Vector3<f64>, rb: &Vector3<f64>, h0: f64) -> Result<FdGradients>
where
    F: FnMut(&[(Vector3<f64>, Vector3<f64>)]) -> Result<Vec<Matrix3<f64>>>,
{
    let mut h = h0;
    let mut best: Option<FdGradients> = None;
    for _ in 0..4 {
        let g = fd_once(&mut eval, ra, rb, h)?;
        let done = g.residual < FD_TARGET;
        if best.as_ref().map_or(true, |b| g.residual < b.residual) {
            best = Some(g);
        }
        if done {
            break;
        }
        h *= 0.5;
    }
    let best = best.expect("at least one pass");
    if best.residual >= FD_TARGET {
        return Err(Error::QuadratureNonConvergence { residual: best.residual, tol: FD_TARGET });
    }
    Ok(best)
}

fn fd_once<F>(eval: &mut F, ra: &Vector3<f64>, rb: &Vector3<f64>, h: f64) -> Result<FdGradients>
where
    F: FnMut(&[(Vector3<f64>, Vector3<f64>)]) -> Result<Vec<Matrix3<f64>>>,
{
    let e = |k: usize, s: f64| Vector3::from_fn(|i, _| if i == k { s } else { 0.0 });
    let steps = [h, 0.5 * h];
    let mut pairs = vec![(*ra, *rb)];
    for &s in &steps {
        for k in 0..3 {
            for sign in [1.0, -1.0] {
                pairs.push((ra + e(k, sign * s), *rb));
            }
        }
        for k in 0..3 {
            for sign in [1.0, -1.0] {
                pairs.push((*ra, rb + e(k, sign * s)));
            }
        }
        for k in 0..3 {
            for l in 0..3 {
                for (sa, sb) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    pairs.push((ra + e(k, sa * s), rb + e(l, sb * s)));
                }
            }
        }
    }
    let vals = eval(&pairs)?;
    let per_step = 6 + 6 + 36;
    let mut grads = [[ZERO3; 2]; 2];
    let mut hess = [ZERO4; 2];
    for (si, &s) in steps.iter().enumerate() {
        let base = 1 + si * per_step;
        for k in 0..3 {
            let da = (vals[base + 2 * k] - vals[base + 2 * k + 1]) / (2.0 * s);
            let db = (vals[base + 6 + 2 * k] - vals[base + 6 + 2 * k + 1]) / (2.0 * s);
            for i in 0..3 {
                for j in 0..3 {
                    grads[si][0][i][j][k] = da[(i, j)];
                    grads[si][1][i][j][k] = db[(i, j)];
                }
            }
        }
        for k in 0..3 {
            for l in 0..3 {
                let o = base + 12 + 4 * (3 * k + l);
                let d = (vals[o] - vals[o + 1] - vals[o + 2] + vals[o + 3]) / (4.0 * s * s);
                for i in 0..3 {
                    for j in 0..3 {
                        hess[si][i][j][k][l] = d[(i, j)];
                    }
                }
            }
        }
    }
    let rich3 = |c: &Tensor3, f: &Tensor3| {
        let mut out = ZERO3;
        let mut diff = ZERO3;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j][k] = (4.0 * f[i][j][k] - c[i][j][k]) / 3.0;
                    diff[i][j][k] = (f[i][j][k] - c[i][j][k]) / 3.0;
                }
            }
        }
        let scale = max_abs3(&out);
        (out, if scale > 0.0 { max_abs3(&diff) / scale } else { 0.0 })
    };
    let (grad_a, ra_res) = rich3(&grads[0][0], &grads[1][0]);
    let (grad_b, rb_res) = rich3(&grads[0][1], &grads[1][1]);
    let mut hess_ab = ZERO4;
    let mut diff = ZERO4;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    hess_ab[i][j][k][l] = (4.0 * hess[1][i][j][k][l] - hess[0][i][j][k][l]) / 3.0;
                    diff[i][j][k][l] = (hess[1][i][j][k][l] - hess[0][i][j][k][l]) / 3.0;
                }
            }
        }
    }
    let hs = max_abs4(&hess_ab);
    let h_res = if hs > 0.0 { max_abs4(&diff) / hs } else { 0.0 };
    Ok(FdGradients {
        center: vals[0],
        block: GradientBlock { grad_a, grad_b, hess_ab },
        residual: ra_res.max(rb_res).max(h_res),
        step: h,
    })
}
