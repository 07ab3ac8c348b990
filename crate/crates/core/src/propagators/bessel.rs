//! Exponentially scaled modified Bessel functions `e^x K_0(x)`, `e^x K_1(x)`.
//!
//! Higher orders and the `I_m` side are only ever needed as ratios, which the
//! cylinder kernel builds from recurrences.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `(e^x K_0(x), e^x K_1(x))` for `x > 0`.
pub fn k01_scaled(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "K_nu requires a positive argument, got {x}");
    if x <= 2.0 {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        (k0 * e, k1 * e)
    } else {
        k01_integral(x)
    }
}

/// Ascending series, accurate for small and moderate `x`.
fn k01_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let ln_half = (0.5 * x).ln();
    // term_k = y^k / (k!)^2, harmonic H_k
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 0.0;
    let mut k0_tail = 0.0;
    // I_1 / (x/2) and the K_1 digamma sum use y^k / (k! (k+1)!)
    let mut i1_half = 0.0;
    let mut k1_tail = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        let t1 = term / (kf + 1.0);
        i0 += term;
        k0_tail += harmonic * term;
        i1_half += t1;
        // psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma
        k1_tail += (2.0 * harmonic + 1.0 / (kf + 1.0) - 2.0 * EULER_GAMMA) * t1;
        if term < 1e-18 * i0 {
            break;
        }
        term *= y / ((kf + 1.0) * (kf + 1.0));
        harmonic += 1.0 / (kf + 1.0);
    }
    let k0 = -(ln_half + EULER_GAMMA) * i0 + k0_tail;
    let i1 = 0.5 * x * i1_half;
    let k1 = 1.0 / x + ln_half * i1 - 0.25 * x * k1_tail;
    (k0, k1)
}

/// Trapezoid rule on `int_0^inf e^{-x (cosh t - 1)} cosh(nu t) dt`, which
/// converges geometrically for this entire integrand.
fn k01_integral(x: f64) -> (f64, f64) {
    let h = 0.25 / (0.5 * x).sqrt().max(1.0);
    let mut s0 = 0.5;
    let mut s1 = 0.5;
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let e = (-x * (t.cosh() - 1.0)).exp();
        let f1 = e * t.cosh();
        s0 += e;
        s1 += f1;
        if f1 < 1e-18 * s1 {
            break;
        }
        k += 1;
    }
    (s0 * h, s1 * h)
}
