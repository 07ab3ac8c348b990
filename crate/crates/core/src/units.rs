//! Physical constants and unit conversions.
//!
//! Energies are in GHz everywhere except inside the radial solver and the
//! Hamiltonian kernels, which work in atomic units. Geometry is in nm at the
//! library boundary.

/// Bohr radius in nm.
pub const BOHR_NM: f64 = 0.052_917_721_090_3;

/// One hartree in GHz.
pub const HARTREE_GHZ: f64 = 6_579_683.920_502;

/// Static core polarizability of Rb+ in atomic units (sets the inner radial cutoff).
pub const RB_CORE_POLARIZABILITY: f64 = 9.0760;

pub const NM_PER_UM: f64 = 1000.0;

#[inline]
pub fn hartree_to_ghz(e: f64) -> f64 {
    e * HARTREE_GHZ
}

#[inline]
pub fn nm_to_bohr(x: f64) -> f64 {
    x / BOHR_NM
}

/// Scale factor converting a propagator derivative of total order `order`
/// (`T` is order 3, `grad T` order 4, ...) from nm^-order to bohr^-order.
#[inline]
pub fn inv_nm_pow_to_bohr(order: i32) -> f64 {
    BOHR_NM.powi(order)
}
