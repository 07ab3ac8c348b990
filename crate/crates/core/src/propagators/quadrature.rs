//! Adaptive 10/21-point Gauss-Kronrod quadrature for vector-valued integrands.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
/// 10-point Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Segment {
    lo: f64,
    hi: f64,
    value: Vec<f64>,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub rel_tol: f64,
    /// Number of leading components that take part in error control.
    pub control_dims: usize,
    pub initial_segments: usize,
    pub max_segments: usize,
}

#[derive(Debug, Clone)]
pub struct QuadResult {
    pub value: Vec<f64>,
    /// Estimated absolute error (max norm over the controlled components).
    pub error: f64,
}

/// Integrates `f(x, out)` (which must overwrite `out`) over `[lo, hi]`.
pub fn integrate<F>(mut f: F, lo: f64, hi: f64, dim: usize, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64, &mut [f64]),
{
    let ctrl = opts.control_dims.min(dim);
    let mut buf = vec![0.0; dim];
    let mut rule = |a: f64, b: f64, buf: &mut [f64]| -> Segment {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut kron = vec![0.0; dim];
        let mut gauss = vec![0.0; dim];
        for (i, (&x, &w)) in XGK.iter().zip(WGK.iter()).enumerate() {
            let nodes: &[f64] = if x == 0.0 { &[0.0] } else { &[-1.0, 1.0] };
            for s in nodes {
                f(c + s * h * x, buf);
                for d in 0..dim {
                    kron[d] += w * buf[d];
                    if i % 2 == 1 {
                        gauss[d] += WG[i / 2] * buf[d];
                    }
                }
            }
        }
        let mut err = 0.0f64;
        for d in 0..dim {
            kron[d] *= h;
            gauss[d] *= h;
            if d < ctrl {
                err = err.max((kron[d] - gauss[d]).abs());
            }
        }
        Segment { lo: a, hi: b, value: kron, error: err }
    };

    let n0 = opts.initial_segments.max(1);
    let width = (hi - lo) / n0 as f64;
    let mut heap = BinaryHeap::new();
    for i in 0..n0 {
        let a = lo + i as f64 * width;
        let b = if i + 1 == n0 { hi } else { a + width };
        heap.push(rule(a, b, &mut buf));
    }
    loop {
        let mut total = vec![0.0; dim];
        let mut err = 0.0;
        for s in heap.iter() {
            for d in 0..dim {
                total[d] += s.value[d];
            }
            err += s.error;
        }
        let scale = total[..ctrl].iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if err <= opts.rel_tol * scale || err == 0.0 {
            return Ok(QuadResult { value: total, error: err });
        }
        if heap.len() >= opts.max_segments {
            return Err(Error::QuadratureNonConvergence { residual: err / scale, tol: opts.rel_tol });
        }
        let worst = heap.pop().expect("segment heap is nonempty");
        let mid = 0.5 * (worst.lo + worst.hi);
        heap.push(rule(worst.lo, mid, &mut buf));
        heap.push(rule(mid, worst.hi, &mut buf));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(tol: f64) -> QuadOptions {
        QuadOptions { rel_tol: tol, control_dims: usize::MAX, initial_segments: 1, max_segments: 1000 }
    }

    #[test]
    fn exact_for_low_degree_polynomials() {
        let r = integrate(|x, o| o[0] = x.powi(20) + 3.0 * x.powi(7), -1.0, 2.0, 1, &opts(1e-14)).unwrap();
        let exact = (2f64.powi(21) + 1.0) / 21.0 + 3.0 * (2f64.powi(8) - 1.0) / 8.0;
        assert!((r.value[0] - exact).abs() < 1e-12 * exact);
    }

    #[test]
    fn vector_oscillatory_integrand() {
        let r = integrate(
            |x, o| {
                o[0] = (-x).exp() * (10.0 * x).cos();
                o[1] = (-x).exp();
            },
            0.0,
            40.0,
            2,
            &opts(1e-12),
        )
        .unwrap();
        // int_0^inf e^-x cos(10x) dx = 1/101
        assert!((r.value[0] - 1.0 / 101.0).abs() < 1e-12);
        assert!((r.value[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let o = QuadOptions { max_segments: 4, ..opts(1e-14) };
        let r = integrate(|x, out| out[0] = 1.0 / x.sqrt(), 0.0, 1.0, 1, &o);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }
}
