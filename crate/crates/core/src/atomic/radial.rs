//! Numerov integration of the Coulomb radial equation on a logarithmic grid.
//!
//! With `r = e^x` and `P(r) = r R(r) = e^{x/2} y(x)` the radial equation becomes
//! `y'' = [(l + 1/2)^2 + 2 r^2 (V(r) - E)] y`, which is integrated inward from
//! `r_max = 2 n (n + 15)` using the quantum-defect energy `E = -1 / (2 n*^2)`.
//! Grid points sit at integer multiples of the step so that any two
//! wavefunctions share abscissae.

use crate::error::{Error, Result};
use crate::units::RB_CORE_POLARIZABILITY;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialParams {
    /// Step in `x = ln r`.
    pub step: f64,
    /// Inner cutoff radius (bohr).
    pub inner_cutoff: f64,
}

impl Default for RadialParams {
    fn default() -> Self {
        Self { step: 0.005, inner_cutoff: RB_CORE_POLARIZABILITY.cbrt() }
    }
}

#[derive(Debug, Clone)]
pub struct RadialWavefunction {
    step: f64,
    k_min: i64,
    /// `y(x)` at `x = (k_min + i) * step`, normalized so that `int P^2 dr = 1`.
    y: Vec<f64>,
}

impl RadialWavefunction {
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn r_min(&self) -> f64 {
        (self.k_min as f64 * self.step).exp()
    }

    pub fn r_max(&self) -> f64 {
        ((self.k_min + self.y.len() as i64 - 1) as f64 * self.step).exp()
    }

    /// `P(r) = r R(r)` sampled on the grid, as `(r, P)` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.y.iter().enumerate().map(move |(i, &y)| {
            let x = (self.k_min + i as i64) as f64 * self.step;
            (x.exp(), (0.5 * x).exp() * y)
        })
    }

    /// `int P_a P_b r^power dr` over the common support.
    pub fn overlap(&self, other: &Self, power: i32) -> f64 {
        assert!((self.step - other.step).abs() < 1e-15, "wavefunctions on different grids");
        let lo = self.k_min.max(other.k_min);
        let hi = (self.k_min + self.y.len() as i64).min(other.k_min + other.y.len() as i64);
        let mut sum = 0.0;
        for k in lo..hi {
            let x = k as f64 * self.step;
            let ya = self.y[(k - self.k_min) as usize];
            let yb = other.y[(k - other.k_min) as usize];
            sum += ya * yb * ((2 + power) as f64 * x).exp();
        }
        sum * self.step
    }
}

/// Solves for the radial function of a level with effective quantum number
/// `nstar`, principal quantum number `n` and orbital quantum number `l`.
pub fn solve(nstar: f64, n: u32, l: u32, params: &RadialParams) -> Result<RadialWavefunction> {
    if !(nstar > 0.0) || !(params.step > 0.0) || !(params.inner_cutoff > 0.0) {
        return Err(Error::RadialNonConvergence(format!(
            "bad input n*={nstar}, step={}, cutoff={}",
            params.step, params.inner_cutoff
        )));
    }
    let h = params.step;
    let energy = -0.5 / (nstar * nstar);
    let ll = (l * (l + 1)) as f64;
    let r_max = 2.0 * n as f64 * (n as f64 + 15.0);

    // classical turning points of -1/r + l(l+1)/(2r^2) = E
    let disc = 1.0 - ll / (nstar * nstar);
    if disc < 0.0 {
        return Err(Error::RadialNonConvergence(format!("no classically allowed region for n*={nstar}, l={l}")));
    }
    let r_outer = nstar * nstar * (1.0 + disc.sqrt());
    let r_inner = nstar * nstar * (1.0 - disc.sqrt());
    if r_max <= r_outer {
        return Err(Error::RadialNonConvergence(format!(
            "outer bound {r_max:.1} a.u. inside turning point {r_outer:.1} a.u."
        )));
    }
    if params.inner_cutoff >= r_outer {
        return Err(Error::RadialNonConvergence(format!(
            "inner cutoff {} a.u. beyond turning point {r_outer:.1} a.u.",
            params.inner_cutoff
        )));
    }

    let k_top = (r_max.ln() / h).floor() as i64;
    let k_bot = (params.inner_cutoff.ln() / h).ceil() as i64;
    let npts = (k_top - k_bot + 1) as usize;
    let lhalf2 = (l as f64 + 0.5).powi(2);
    let f = |k: i64| {
        let r = (k as f64 * h).exp();
        lhalf2 + 2.0 * r * r * (-1.0 / r - energy)
    };
    let c = h * h / 12.0;

    // y stored top-down during integration
    let mut ys = Vec::with_capacity(npts);
    let y0 = 1e-10;
    ys.push(y0);
    ys.push(y0 * (h * f(k_top).max(0.0).sqrt()).exp());
    let mut f_next = f(k_top);
    let mut f_cur = f(k_top - 1);
    let mut k = k_top - 1;
    let mut diverged_at = None;
    while k > k_bot {
        let f_prev = f(k - 1);
        let n_ = ys.len();
        let y_next = ys[n_ - 2];
        let y_cur = ys[n_ - 1];
        let y_prev = (2.0 * (1.0 + 5.0 * c * f_cur) * y_cur - (1.0 - c * f_next) * y_next) / (1.0 - c * f_prev);
        if !y_prev.is_finite() {
            return Err(Error::RadialNonConvergence(format!("overflow at r={:.3e}", ((k - 1) as f64 * h).exp())));
        }
        // inside the inner turning point |P| must decrease toward the origin
        let r_prev = ((k - 1) as f64 * h).exp();
        if l > 0 && r_prev < r_inner {
            let p_prev = (0.5 * (k - 1) as f64 * h).exp() * y_prev;
            let p_cur = (0.5 * k as f64 * h).exp() * y_cur;
            if p_prev.abs() > p_cur.abs() {
                diverged_at = Some(k);
                break;
            }
        }
        ys.push(y_prev);
        f_next = f_cur;
        f_cur = f_prev;
        k -= 1;
    }
    let k_min = diverged_at.unwrap_or(k);
    ys.reverse();

    let mut wf = RadialWavefunction { step: h, k_min, y: ys };
    let norm = wf.overlap(&wf, 0);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::RadialNonConvergence("zero norm".into()));
    }
    let s = 1.0 / norm.sqrt();
    wf.y.iter_mut().for_each(|v| *v *= s);
    Ok(wf)
}
