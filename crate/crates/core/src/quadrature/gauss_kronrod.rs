//! 21-point Gauss–Kronrod rule with an embedded 10-point Gauss rule, and a
//! global adaptive driver that bisects the segment with the largest error.

#![allow(clippy::excessive_precision)] // tabulated constants, kept as published

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Kronrod abscissae on [0, 1]; odd indices are the Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_976_607,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[inline]
fn checked<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64> {
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::UndeclaredSingularity { at: x })
    }
}

/// One application of the rule on [a, b]: (Kronrod estimate, |K - G|, ∫|f|).
pub(crate) fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut kronrod = WGK[10] * fc;
    let mut abs = WGK[10] * fc.abs();
    let mut gauss = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs(), abs * half.abs()))
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Adaptive {
    pub value: f64,
    pub error: f64,
    pub segments: usize,
    pub exhausted: bool,
}

pub(crate) fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_segments: usize,
) -> Result<Adaptive> {
    if a == b {
        return Ok(Adaptive {
            value: 0.0,
            error: 0.0,
            segments: 0,
            exhausted: false,
        });
    }
    let (value, error, abs) = gk21(f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value,
        error,
        abs,
    });
    let mut total_err = error;
    let mut total_abs = abs;
    let mut exhausted = false;

    while total_err > tol.max(4.0 * f64::EPSILON * total_abs) {
        if heap.len() >= max_segments {
            exhausted = true;
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            heap.push(worst);
            exhausted = true;
            break;
        }
        let (v1, e1, s1) = gk21(f, worst.a, mid)?;
        let (v2, e2, s2) = gk21(f, mid, worst.b)?;
        total_err += e1 + e2 - worst.error;
        total_abs += s1 + s2 - worst.abs;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1, abs: s1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2, abs: s2 });
    }
    // Re-sum from the segments to shed accumulated cancellation.
    Ok(Adaptive {
        value: heap.iter().map(|s| s.value).sum(),
        error: heap.iter().map(|s| s.error).sum(),
        segments: heap.len(),
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_interval_length() {
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn kronrod_is_exact_on_high_degree_monomials() {
        // The 21-point Kronrod rule integrates degree 31 exactly.
        for deg in [0u32, 1, 7, 19, 30, 31] {
            let (v, _, _) = gk21(&|x: f64| x.powi(deg as i32), 0.0, 1.0).unwrap();
            let exact = 1.0 / (deg as f64 + 1.0);
            assert!((v - exact).abs() < 1e-14, "degree {deg}: {v} vs {exact}");
        }
    }

    #[test]
    fn gauss_part_is_exact_to_degree_19() {
        let (_, err, _) = gk21(&|x: f64| x.powi(19) - 3.0 * x.powi(4), -1.0, 2.0).unwrap();
        assert!(err < 1e-10 * 2f64.powi(20));
        let (_, err, _) = gk21(&|x: f64| x.powi(19), 0.0, 1.0).unwrap();
        assert!(err < 1e-15);
    }

    #[test]
    fn adaptive_resolves_a_kink() {
        let r = adaptive(&|x: f64| (x - 0.3).abs(), 0.0, 1.0, 1e-12, 500).unwrap();
        let exact = 0.3 * 0.3 / 2.0 + 0.7 * 0.7 / 2.0;
        assert!((r.value - exact).abs() < 1e-12);
        assert!(!r.exhausted);
    }

    #[test]
    fn non_finite_values_are_reported() {
        let r = adaptive(&|x: f64| 1.0 / (x - 0.5), 0.0, 1.0, 1e-8, 100);
        assert!(matches!(r, Err(Error::UndeclaredSingularity { .. })));
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = adaptive(&|x: f64| x * x, 1.0, 0.0, 1e-12, 100).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-15);
    }
}
