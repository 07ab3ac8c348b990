//! Angular parts of the dipole and quadrupole operators in the `|n L J M_J>` basis.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;

use super::AtomState;
use crate::angular::{clebsch_gordan, wigner_3j, wigner_6j};
use crate::error::{Error, Result};

fn sign(k: i32) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `<l'||C^k||l>`.
fn reduced_c(l_to: u32, k: u32, l_from: u32) -> f64 {
    let (lt, lf, k) = (l_to as i32, l_from as i32, k as i32);
    sign(lt) * (((2 * lf + 1) * (2 * lt + 1)) as f64).sqrt() * wigner_3j(2 * lt, 2 * k, 2 * lf, 0, 0, 0)
}

/// `<l' s j'||C^k||l s j>` for `s = 1/2`, tensor acting on the orbital part only.
fn reduced_cj(to: &AtomState, k: u32, from: &AtomState) -> f64 {
    let (lt, jt2, lf, jf2, k) = (to.l as i32, to.j2 as i32, from.l as i32, from.j2 as i32, k as i32);
    // (-1)^(l' + s + j + k), all doubled inside
    let ph = sign((2 * lt + 1 + jf2 + 2 * k) / 2);
    ph * (((jf2 + 1) * (jt2 + 1)) as f64).sqrt()
        * wigner_6j(2 * lt, jt2, 1, jf2, 2 * lf, 2 * k)
        * reduced_c(to.l, k as u32, from.l)
}

/// `<to| C^k_q |from>` with `q2 = 2q` (Wigner-Eckart).
pub(crate) fn angular_factor(to: &AtomState, from: &AtomState, k: u32, q2: i32) -> f64 {
    let k2 = 2 * k as i32;
    sign((to.j2 as i32 - to.mj2) / 2)
        * wigner_3j(to.j2 as i32, k2, from.j2 as i32, -to.mj2, q2, from.mj2)
        * reduced_cj(to, k, from)
}

/// Conjugate spherical unit vector `e_q^*` in the quantisation frame.
pub fn spherical_unit_conj(q: i32) -> Vector3<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    match q {
        1 => Vector3::new(c(-s, 0.0), c(0.0, s), c(0.0, 0.0)),
        0 => Vector3::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)),
        -1 => Vector3::new(c(s, 0.0), c(0.0, s), c(0.0, 0.0)),
        _ => panic!("spherical component {q} out of range"),
    }
}

pub fn dipole_allowed(from: &AtomState, to: &AtomState) -> Result<()> {
    let forbid = |reason| Err(Error::ForbiddenTransition { from: *from, to: *to, reason });
    if from.l.abs_diff(to.l) != 1 {
        return forbid("dipole requires |dL| = 1");
    }
    if from.j2.abs_diff(to.j2) > 2 {
        return forbid("dipole requires |dJ| <= 1");
    }
    if from.mj2.abs_diff(to.mj2) > 2 {
        return forbid("dipole requires |dM| <= 1");
    }
    Ok(())
}

pub fn quadrupole_allowed(from: &AtomState, to: &AtomState) -> Result<()> {
    let forbid = |reason| Err(Error::ForbiddenTransition { from: *from, to: *to, reason });
    let dl = from.l.abs_diff(to.l);
    if dl != 0 && dl != 2 {
        return forbid("quadrupole requires dL in {0, +-2}");
    }
    if from.l == 0 && to.l == 0 {
        return forbid("quadrupole vanishes between S states");
    }
    if from.j2.abs_diff(to.j2) > 4 {
        return forbid("quadrupole requires |dJ| <= 2");
    }
    if from.mj2.abs_diff(to.mj2) > 4 {
        return forbid("quadrupole requires |dM| <= 2");
    }
    Ok(())
}

/// Whether the rank-0 part of `r r` connects the two states (same `L, J, M_J`, any `n`).
pub(crate) fn same_orbital(from: &AtomState, to: &AtomState) -> bool {
    from.l == to.l && from.j2 == to.j2 && from.mj2 == to.mj2
}

/// `<to| -(1/2) r_i r_j |from>` in the quantisation frame, given the radial
/// integral `<r^2>` between the two levels.
pub(crate) fn quadrupole_local(from: &AtomState, to: &AtomState, radial: f64) -> Matrix3<Complex64> {
    let q2 = to.mj2 - from.mj2;
    let rank2 = radial * angular_factor(to, from, 2, q2);
    let scalar = if same_orbital(from, to) { radial } else { 0.0 };
    let e: [Vector3<Complex64>; 3] = [spherical_unit_conj(-1), spherical_unit_conj(0), spherical_unit_conj(1)];
    let mut out = Matrix3::zeros();
    for q1 in -1i32..=1 {
        for qb in -1i32..=1 {
            let mut c = 0.0;
            if 2 * (q1 + qb) == q2 {
                c += clebsch_gordan(2, 2 * q1, 2, 2 * qb, 4, q2) * rank2 * (2.0f64 / 3.0).sqrt();
            }
            if q1 + qb == 0 {
                c -= clebsch_gordan(2, 2 * q1, 2, 2 * qb, 0, 0) * scalar / 3f64.sqrt();
            }
            if c != 0.0 {
                let ea = &e[(q1 + 1) as usize];
                let eb = &e[(qb + 1) as usize];
                out += ea * eb.transpose() * Complex64::new(-0.5 * c, 0.0);
            }
        }
    }
    out
}
