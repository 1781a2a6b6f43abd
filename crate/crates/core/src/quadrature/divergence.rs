//! Dyadic shell probes for endpoint and tail behaviour of one-signed
//! integrands.
//!
//! Toward a point `s` the shells are `[s + 2^{-k-1} d, s + 2^{-k} d]`; toward
//! infinity they are `[R 2^k, R 2^{k+1}]`. For an integrand behaving like a
//! power `t^p` the shell integrals form a geometric sequence, so the slope of
//! `log2 |shell_k|` against `k` recovers `p`. The same sequence gives the
//! geometric tail used to finish convergent integrals.

use std::fmt;

use super::gauss_kronrod::adaptive;
use super::QuadConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Point(f64),
    Tail,
}

/// Which side of the location the integrand lives on. `Right` means the
/// approach `s⁺`, i.e. the integrand is sampled on `(s, s + d]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    RadialTail,
    /// A closed-form pole evaluated exactly at the point.
    AtPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeSample {
    /// Distance of the shell's outer edge from the point (or its inner radius
    /// for tail shells).
    pub distance: f64,
    pub shell: f64,
    /// Partial integral accumulated over all shells up to this one.
    pub cumulative: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceCertificate {
    pub location: Location,
    pub side: Side,
    /// Estimated power `p` in `f ~ t^p` near the location (or `r^p` in the
    /// tail).
    pub estimated_exponent: f64,
    pub probe_trace: Vec<ProbeSample>,
}

impl DivergenceCertificate {
    pub fn pole(point: f64, exponent: f64) -> Self {
        DivergenceCertificate {
            location: Location::Point(point),
            side: Side::AtPoint,
            estimated_exponent: exponent,
            probe_trace: Vec::new(),
        }
    }
}

impl fmt::Display for DivergenceCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.location {
            Location::Point(p) => write!(f, "diverges at {p} ({:?})", self.side)?,
            Location::Tail => write!(f, "diverges in the radial tail")?,
        }
        write!(
            f,
            ", exponent {:.6}, {} shells",
            self.estimated_exponent,
            self.probe_trace.len()
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProbeVerdict {
    Divergent(DivergenceCertificate),
    Finite {
        estimated_exponent: f64,
        trace: Vec<ProbeSample>,
    },
}

impl ProbeVerdict {
    pub fn is_divergent(&self) -> bool {
        matches!(self, ProbeVerdict::Divergent(_))
    }

    pub fn exponent(&self) -> f64 {
        match self {
            ProbeVerdict::Divergent(c) => c.estimated_exponent,
            ProbeVerdict::Finite {
                estimated_exponent, ..
            } => *estimated_exponent,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    /// Shells shrinking onto a point from the given side.
    Toward(SideSign),
    /// Shells growing to infinity.
    Outward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SideSign {
    Left,
    Right,
}

/// Outcome of a shell run: the samples, the fitted log2-slope per shell, the
/// verdict and (for convergent runs) the extrapolated remainder.
#[derive(Debug, Clone)]
pub(crate) struct ShellRun {
    pub samples: Vec<ProbeSample>,
    pub slope: f64,
    pub divergent: bool,
    pub remainder: f64,
    pub remainder_err: f64,
    pub quad_err: f64,
    pub segments: usize,
}

impl ShellRun {
    /// Power `p` of the integrand implied by the fitted slope.
    pub fn exponent(&self, dir: Direction) -> f64 {
        match dir {
            Direction::Toward(_) => -self.slope - 1.0,
            Direction::Outward => self.slope - 1.0,
        }
    }
}

/// Least-squares slope of `log2 |shell|` against shell index over the last
/// `window` nonzero shells. Returns `-inf` when the shells have vanished.
fn fitted_slope(samples: &[ProbeSample], window: usize) -> f64 {
    let tail: Vec<(f64, f64)> = samples
        .iter()
        .enumerate()
        .rev()
        .take(window)
        .filter(|(_, s)| s.shell != 0.0)
        .map(|(k, s)| (k as f64, s.shell.abs().log2()))
        .collect();
    if tail.len() < 2 {
        return f64::NEG_INFINITY;
    }
    let n = tail.len() as f64;
    let mx = tail.iter().map(|t| t.0).sum::<f64>() / n;
    let my = tail.iter().map(|t| t.1).sum::<f64>() / n;
    let sxy: f64 = tail.iter().map(|t| (t.0 - mx) * (t.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|t| (t.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn shell_bounds(dir: Direction, origin: f64, reach: f64, k: usize) -> (f64, f64, f64) {
    match dir {
        Direction::Toward(side) => {
            let outer = reach * 0.5f64.powi(k as i32);
            let inner = 0.5 * outer;
            match side {
                SideSign::Right => (origin + inner, origin + outer, outer),
                SideSign::Left => (origin - outer, origin - inner, outer),
            }
        }
        Direction::Outward => {
            let lo = origin * 2f64.powi(k as i32);
            (lo, 2.0 * lo, lo)
        }
    }
}

/// Runs the shell sequence. With `early_stop`, the run ends as soon as the
/// fitted decay makes the remaining tail negligible against `tol`.
pub(crate) fn run_shells<F: Fn(f64) -> f64>(
    f: &F,
    dir: Direction,
    origin: f64,
    reach: f64,
    tol: f64,
    cfg: &QuadConfig,
    early_stop: bool,
) -> Result<ShellRun> {
    let shell_tol = tol / (4.0 * cfg.probe_depth as f64);
    let mut samples: Vec<ProbeSample> = Vec::with_capacity(cfg.probe_depth);
    let mut cumulative = 0.0;
    let mut quad_err = 0.0;
    let mut segments = 0;
    let mut sign = 0.0f64;
    let location = match dir {
        Direction::Toward(_) => origin,
        Direction::Outward => f64::INFINITY,
    };

    for k in 0..cfg.probe_depth {
        let (lo, hi, distance) = shell_bounds(dir, origin, reach, k);
        let r = adaptive(f, lo, hi, shell_tol, cfg.max_segments)?;
        segments += r.segments;
        quad_err += r.error;
        if r.value.abs() > r.error {
            let s = r.value.signum();
            if sign == 0.0 {
                sign = s;
            } else if s != sign {
                return Err(Error::OscillatingSign { point: location });
            }
        }
        cumulative += r.value;
        samples.push(ProbeSample {
            distance,
            shell: r.value,
            cumulative,
        });
        if cumulative.abs() > cfg.blowup_threshold {
            break;
        }
        if early_stop && k + 1 >= cfg.min_shells {
            let slope = fitted_slope(&samples, cfg.fit_window);
            let (rem, _) = geometric_remainder(r.value, slope);
            if slope < -cfg.exp_margin - 0.3 && rem.abs() < 1e-3 * shell_tol {
                break;
            }
            if r.value == 0.0 && samples.iter().rev().take(cfg.fit_window).all(|s| s.shell == 0.0) {
                break;
            }
        }
    }

    let slope = fitted_slope(&samples, cfg.fit_window);
    let divergent = cumulative.abs() > cfg.blowup_threshold || slope >= -cfg.exp_margin;
    let (remainder, remainder_err) = if divergent {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let last = samples.last().map(|s| s.shell).unwrap_or(0.0);
        let (fit_rem, _) = geometric_remainder(last, slope);
        // Second estimate from the ratio of the last two shells.
        let ratio_rem = match samples.len() {
            n if n >= 2 && samples[n - 2].shell != 0.0 => {
                let q = samples[n - 1].shell / samples[n - 2].shell;
                if q > 0.0 && q < 1.0 {
                    last * q / (1.0 - q)
                } else {
                    fit_rem
                }
            }
            _ => fit_rem,
        };
        (fit_rem, (fit_rem - ratio_rem).abs())
    };

    Ok(ShellRun {
        samples,
        slope,
        divergent,
        remainder,
        remainder_err,
        quad_err,
        segments,
    })
}

/// Sum of the geometric continuation `last·q + last·q² + …` with
/// `q = 2^slope`, and the ratio `q`.
fn geometric_remainder(last: f64, slope: f64) -> (f64, f64) {
    if last == 0.0 || slope == f64::NEG_INFINITY {
        return (0.0, 0.0);
    }
    let q = 2f64.powf(slope);
    if q >= 1.0 {
        (f64::INFINITY, q)
    } else {
        (last * q / (1.0 - q), q)
    }
}

pub(crate) fn certificate_from(run: &ShellRun, dir: Direction, origin: f64) -> DivergenceCertificate {
    let (location, side) = match dir {
        Direction::Toward(SideSign::Right) => (Location::Point(origin), Side::Right),
        Direction::Toward(SideSign::Left) => (Location::Point(origin), Side::Left),
        Direction::Outward => (Location::Tail, Side::RadialTail),
    };
    let slope = if run.slope.is_finite() { run.slope } else { 0.0 };
    let exponent = match dir {
        Direction::Toward(_) => -slope - 1.0,
        Direction::Outward => slope - 1.0,
    };
    DivergenceCertificate {
        location,
        side,
        estimated_exponent: exponent,
        probe_trace: run.samples.clone(),
    }
}

/// Probes `∫ f` near `point` on the given side over a window of length
/// `reach`, using the full shell depth, and classifies it.
pub fn probe_divergence<F: Fn(f64) -> f64>(
    f: F,
    point: f64,
    side: Side,
    reach: f64,
) -> Result<ProbeVerdict> {
    probe_divergence_with(f, point, side, reach, &QuadConfig::default())
}

pub fn probe_divergence_with<F: Fn(f64) -> f64>(
    f: F,
    point: f64,
    side: Side,
    reach: f64,
    cfg: &QuadConfig,
) -> Result<ProbeVerdict> {
    let dir = match side {
        Side::Right => Direction::Toward(SideSign::Right),
        Side::Left => Direction::Toward(SideSign::Left),
        Side::RadialTail => Direction::Outward,
        Side::AtPoint => {
            return Err(Error::Precondition(
                "a probe needs a one-sided approach or the radial tail".into(),
            ))
        }
    };
    let origin = match dir {
        Direction::Outward => reach,
        Direction::Toward(_) => point,
    };
    let run = run_shells(&f, dir, origin, reach, cfg.tol, cfg, false)?;
    let exponent = run.exponent(dir);
    if run.divergent {
        Ok(ProbeVerdict::Divergent(certificate_from(&run, dir, origin)))
    } else {
        Ok(ProbeVerdict::Finite {
            estimated_exponent: exponent,
            trace: run.samples,
        })
    }
}
