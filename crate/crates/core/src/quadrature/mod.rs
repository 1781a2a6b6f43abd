//! Adaptive integration with singular-endpoint grading, radial integration on
//! ℝᴺ, divergence certificates and finite-difference stencils.

mod divergence;
mod gauss_kronrod;
mod stencil;

pub use divergence::{
    probe_divergence, probe_divergence_with, DivergenceCertificate, Location, ProbeSample,
    ProbeVerdict, Side,
};
pub use stencil::{fd_residual, fd_residual_with, Stencil, DEFAULT_FD_STEP};

use divergence::{certificate_from, run_shells, Direction, SideSign};

use crate::error::{Error, Result};
use crate::extended::ExtendedValue;

/// Knobs for the integrator and the divergence probes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance per integral.
    pub tol: f64,
    pub max_segments: usize,
    /// Exponent margin separating log-divergence (`p = -1`) from integrable
    /// powers such as `p = -0.9`.
    pub exp_margin: f64,
    /// Partial sums beyond this are treated as divergent outright.
    pub blowup_threshold: f64,
    pub probe_depth: usize,
    /// Shells used in the slope fit.
    pub fit_window: usize,
    /// Shells evaluated before an integration run may stop early.
    pub min_shells: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            tol: 1e-8,
            max_segments: 2000,
            exp_margin: 0.05,
            blowup_threshold: 1e12,
            probe_depth: 48,
            fit_window: 16,
            min_shells: 16,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig {
            tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: ExtendedValue,
    pub subdivisions: usize,
    pub singular_points_handled: Vec<f64>,
    /// Raised when a segment budget ran out before the error target was met.
    pub too_many_subdivisions: bool,
}

impl QuadResult {
    fn zero() -> Self {
        QuadResult {
            value: ExtendedValue::ZERO,
            subdivisions: 0,
            singular_points_handled: Vec::new(),
            too_many_subdivisions: false,
        }
    }
}

/// Points where the integrand is merely non-smooth (split there) and points
/// where it may blow up (graded and probed).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Breakpoints {
    pub kinks: Vec<f64>,
    pub singular: Vec<f64>,
}

impl Breakpoints {
    pub fn singular(points: &[f64]) -> Self {
        Breakpoints {
            kinks: Vec::new(),
            singular: points.to_vec(),
        }
    }
}

/// `∫_a^b f` with adaptive subdivision; declared singular points are never
/// evaluated and are approached through dyadic shells. A divergent endpoint
/// yields `+∞` with its certificate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    singular_points: &[f64],
    tol: f64,
) -> Result<QuadResult> {
    integrate_with(
        &f,
        a,
        b,
        &Breakpoints::singular(singular_points),
        &QuadConfig::with_tol(tol),
    )
}

pub fn integrate_with<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &Breakpoints,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    assert!(a <= b, "integrate expects a <= b, got [{a}, {b}]");
    if a == b {
        return Ok(QuadResult::zero());
    }
    for &s in &breaks.singular {
        if !(a..=b).contains(&s) {
            return Err(Error::Precondition(format!(
                "singular point {s} lies outside [{a}, {b}]"
            )));
        }
    }
    let mut cuts: Vec<f64> = vec![a, b];
    cuts.extend(breaks.kinks.iter().copied().filter(|k| *k > a && *k < b));
    cuts.extend(breaks.singular.iter().copied());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let is_singular = |p: f64| breaks.singular.contains(&p);

    // Split pieces singular at both ends so each piece has at most one.
    let mut pieces: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if is_singular(lo) && is_singular(hi) {
            let mid = 0.5 * (lo + hi);
            pieces.push((lo, mid));
            pieces.push((mid, hi));
        } else {
            pieces.push((lo, hi));
        }
    }

    let piece_tol = cfg.tol / pieces.len() as f64;
    let mut out = QuadResult::zero();
    let mut total = 0.0;
    let mut total_err = 0.0;
    for (lo, hi) in pieces {
        let graded = if is_singular(lo) {
            Some((Direction::Toward(SideSign::Right), lo))
        } else if is_singular(hi) {
            Some((Direction::Toward(SideSign::Left), hi))
        } else {
            None
        };
        match graded {
            None => {
                let r = gauss_kronrod::adaptive(f, lo, hi, piece_tol, cfg.max_segments)?;
                total += r.value;
                total_err += r.error;
                out.subdivisions += r.segments;
                out.too_many_subdivisions |= r.exhausted;
            }
            Some((dir, point)) => {
                let run = run_shells(f, dir, point, hi - lo, piece_tol, cfg, true)?;
                out.subdivisions += run.segments;
                if !out.singular_points_handled.contains(&point) {
                    out.singular_points_handled.push(point);
                }
                if run.divergent {
                    out.value = ExtendedValue::infinite(certificate_from(&run, dir, point));
                    return Ok(out);
                }
                total += run.samples.last().map_or(0.0, |s| s.cumulative) + run.remainder;
                total_err += run.quad_err + run.remainder_err;
            }
        }
    }
    if total < 0.0 && total >= -total_err.max(1e-14 * total.abs()) {
        total = 0.0;
    }
    if total < 0.0 {
        return Err(Error::Precondition(format!(
            "integral is negative ({total:e}); use integrate_signed for signed integrands"
        )));
    }
    out.value = ExtendedValue::finite(total, total_err);
    if total_err > cfg.tol {
        out.too_many_subdivisions = true;
    }
    Ok(out)
}

/// Signed integral over a finite interval without singular handling; used
/// where integrands legitimately change sign (residuals, differences).
pub fn integrate_signed<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    kinks: &[f64],
    cfg: &QuadConfig,
) -> Result<(f64, f64)> {
    let mut cuts = vec![a, b];
    cuts.extend(kinks.iter().copied().filter(|k| *k > a && *k < b));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let tol = cfg.tol / (cuts.len() - 1).max(1) as f64;
    let mut value = 0.0;
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let r = gauss_kronrod::adaptive(f, w[0], w[1], tol, cfg.max_segments)?;
        value += r.value;
        err += r.error;
    }
    Ok((value, err))
}

/// `∫_start^∞ f` via outward dyadic shells and a geometric tail.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: &F, start: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    assert!(start > 0.0, "tail integration starts at a positive radius");
    let run = run_shells(f, Direction::Outward, start, start, cfg.tol, cfg, true)?;
    let mut out = QuadResult::zero();
    out.subdivisions = run.segments;
    if run.divergent {
        out.value = ExtendedValue::infinite(certificate_from(&run, Direction::Outward, start));
    } else {
        let total = run.samples.last().map_or(0.0, |s| s.cumulative) + run.remainder;
        out.value = ExtendedValue::finite(total, run.quad_err + run.remainder_err);
    }
    Ok(out)
}

/// Integration range for radial integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialRange {
    /// `[0, R]`
    Ball(f64),
    /// `[0, ∞)`
    Whole,
}

/// Surface area of the unit sphere in ℝᴺ, `2 π^{N/2} / Γ(N/2)`.
pub fn unit_sphere_area(n: u32) -> f64 {
    2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n)
}

/// `Γ(n/2)` for a positive integer `n`.
pub fn gamma_half(n: u32) -> f64 {
    assert!(n >= 1);
    let (mut acc, mut k) = if n.is_multiple_of(2) {
        (1.0, 2u32) // Γ(1)
    } else {
        (std::f64::consts::PI.sqrt(), 1u32) // Γ(1/2)
    };
    while k < n {
        acc *= k as f64 / 2.0;
        k += 2;
    }
    acc
}

/// `∫ g(|z|) dz` over a ball or all of ℝᴺ, reduced to
/// `σ_{N-1} ∫ g(r) r^{N-1} dr`. The origin is treated as a singular endpoint.
pub fn integrate_radial<G: Fn(f64) -> f64>(
    g: G,
    n: u32,
    range: RadialRange,
    tol: f64,
) -> Result<QuadResult> {
    if n < 5 {
        return Err(Error::ModelDimension(n));
    }
    let sigma = unit_sphere_area(n);
    let integrand = |r: f64| crate::extended::mul0(g(r), sigma * r.powi(n as i32 - 1));
    let cfg = QuadConfig::with_tol(tol);
    match range {
        RadialRange::Ball(radius) => {
            integrate_with(&integrand, 0.0, radius, &Breakpoints::singular(&[0.0]), &cfg)
        }
        RadialRange::Whole => {
            let half = QuadConfig::with_tol(tol / 2.0);
            let mut inner =
                integrate_with(&integrand, 0.0, 1.0, &Breakpoints::singular(&[0.0]), &half)?;
            let tail = integrate_tail(&integrand, 1.0, &half)?;
            inner.value = inner.value.add(&tail.value);
            inner.subdivisions += tail.subdivisions;
            inner.too_many_subdivisions |= tail.too_many_subdivisions;
            Ok(inner)
        }
    }
}
