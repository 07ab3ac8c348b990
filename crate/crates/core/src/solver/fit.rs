use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Local log-log slope tolerance around -6.
pub const SLOPE_TOL: f64 = 0.2;
/// Largest accepted deviation of `U r^6` from the fitted asymptote.
pub const ASYMPTOTE_TOL: f64 = 0.05;

/// Van der Waals asymptote `U = -C6 / r^6`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct C6Fit {
    /// GHz um^6 (or the units of the samples).
    pub c6: f64,
    /// Smallest separation of the fit window.
    pub r_vdw: f64,
    /// Weighted rms of `U r^6` about the fit, relative to `|C6|`.
    pub residual: f64,
    pub window_start: usize,
}

fn weighted_constant(r: &[f64], y: &[f64]) -> (f64, f64) {
    let w: Vec<f64> = r.iter().map(|x| x.powi(6)).collect();
    let sw: f64 = w.iter().sum();
    let a = w.iter().zip(y).map(|(w, y)| w * y).sum::<f64>() / sw;
    let var = w.iter().zip(y).map(|(w, y)| w * (y - a) * (y - a)).sum::<f64>() / sw;
    (a, var.sqrt())
}

/// Fits the `r^-6` tail of a potential curve.
///
/// The window is the longest suffix of the samples (at least three points)
/// in which every local slope `d ln|U| / d ln r` is within `-6 +- 0.2` and
/// every `U r^6` lies within 5% of the weighted mean (weights `r^6`).
pub fn fit_c6(samples: &[(f64, f64)]) -> Result<C6Fit> {
    if samples.len() < 4 {
        return Err(Error::InvalidInput("fit_c6 needs at least 4 samples".into()));
    }
    if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) || samples[0].0 <= 0.0 {
        return Err(Error::InvalidInput("fit_c6 needs strictly increasing positive separations".into()));
    }
    let r: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let u: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let y: Vec<f64> = r.iter().zip(&u).map(|(r, u)| u * r.powi(6)).collect();
    let n = r.len();
    let slope_ok: Vec<bool> = (0..n - 1)
        .map(|i| {
            let q = u[i + 1] / u[i];
            q > 0.0 && ((q.ln() / (r[i + 1] / r[i]).ln()) + 6.0).abs() <= SLOPE_TOL
        })
        .collect();

    for start in 0..=n - 3 {
        if !slope_ok[start..].iter().all(|&ok| ok) {
            continue;
        }
        let (a, rms) = weighted_constant(&r[start..], &y[start..]);
        if a != 0.0 && y[start..].iter().all(|v| (v / a - 1.0).abs() <= ASYMPTOTE_TOL) {
            return Ok(C6Fit { c6: -a, r_vdw: r[start], residual: rms / a.abs(), window_start: start });
        }
    }
    Err(Error::NoAsymptote)
}
