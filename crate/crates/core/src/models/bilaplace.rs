//! `u'' = -v`, `v'' = 0` on `(0, 1)` with Navier boundary data: both kernels
//! are the Dirichlet Green function `min(x, y)(1 - max(x, y))` of `-d²/dx²`
//! and the reference measure is Lebesgue measure.
//!
//! Here `H` is the Navier Green function of `d⁴/dx⁴`: for `x ≤ y`,
//! `H(x, y) = x(1 - y)(2y - x² - y²)/6`.

use std::cell::RefCell;

use crate::coupling::compose_green;
use crate::error::Result;
use crate::extended::ExtendedValue;
use crate::kernel::{GreenKernel, HarmonicBasis, IntervalDomain, LineModel, ModelId, ReferenceMeasure};
use crate::quadrature::{fd_residual, QuadConfig, Stencil, DEFAULT_FD_STEP};

pub const DOMAIN: IntervalDomain = IntervalDomain {
    lo: 0.0,
    hi: 1.0,
    lo_closed: false,
    hi_closed: false,
};

/// Quadrature tolerance used when `H` is differentiated numerically.
pub const FD_QUAD_TOL: f64 = 1e-13;

pub fn green(x: f64, y: f64) -> f64 {
    x.min(y) * (1.0 - x.max(y))
}

fn one(_: f64) -> f64 {
    1.0
}
fn linear(x: f64) -> f64 {
    x
}

pub fn model() -> LineModel {
    let g = GreenKernel::line("min(x,y)(1-max(x,y))", DOMAIN, green).symmetric();
    let basis = HarmonicBasis {
        labels: ["1", "x"],
        funcs: [one, linear],
    };
    LineModel {
        id: ModelId::Bilaplace,
        domain: DOMAIN,
        g1: g.clone(),
        g2: g,
        mu: ReferenceMeasure {
            label: "dy",
            support: DOMAIN,
            density: one,
        },
        l1: Stencil::second_derivative(),
        l2: Stencil::second_derivative(),
        basis1: basis,
        basis2: basis,
        kink_weight: one,
        quad: QuadConfig::default(),
        adjoint: false,
    }
}

/// Closed form of `H(x, y)`.
pub fn h_closed_form(x: f64, y: f64) -> f64 {
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    x * (1.0 - y) * (2.0 * y - x * x - y * y) / 6.0
}

/// `H(x, y)` by quadrature; always finite on this model.
pub fn h_sym(model: &LineModel, x: f64, y: f64) -> Result<ExtendedValue> {
    compose_green(model, x, y)
}

/// `|H(x, y) - H(y, x)|` from quadrature.
pub fn h_symmetry_defect(model: &LineModel, x: f64, y: f64) -> Result<f64> {
    let a = compose_green(model, x, y)?.value();
    let b = compose_green(model, y, x)?.value();
    Ok((a - b).abs())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NavierReport {
    pub y: f64,
    /// `(x, H''(x, y) + G(x, y))` at each interior probe.
    pub residuals: Vec<(f64, f64)>,
    /// `H(ε, y)` and `H(1 - ε, y)`.
    pub boundary: [f64; 2],
    /// `∂³H(y⁺, y) - ∂³H(y⁻, y)`.
    pub third_jump: f64,
}

impl NavierReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0f64, |m, r| m.max(r.1.abs()))
    }
}

/// Checks that `x ↦ H(x, y)` solves `u'' = -G(·, y)` with zero Navier data,
/// and measures the jump of its third derivative at the pole. `H` is computed
/// by quadrature throughout.
pub fn navier_check(model: &LineModel, y: f64, probes: &[f64], eps: f64) -> Result<NavierReport> {
    model.check_point(y)?;
    let fine = model.clone().with_quad_tol(FD_QUAD_TOL);
    let h = |x: f64| compose_green(&fine, x, y).map(|v| v.value());

    let mut residuals = Vec::with_capacity(probes.len());
    for &x in probes {
        let step = DEFAULT_FD_STEP.min(0.2 * (x - y).abs()).min(0.2 * x).min(0.2 * (1.0 - x));
        let failure = RefCell::new(None);
        let u = |t: f64| {
            h(t).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            })
        };
        let d2 = fd_residual(&fine.l1, u, x, step);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        residuals.push((x, d2? + green(x, y)));
    }

    // H is a cubic on each side of y, so a four-point one-sided third
    // difference is exact up to quadrature noise.
    let d = 0.25 * y.min(1.0 - y) / 4.0;
    let third = |sign: f64| -> Result<f64> {
        let v: Vec<f64> = (1..=4)
            .map(|k| h(y + sign * k as f64 * d))
            .collect::<Result<_>>()?;
        Ok(sign * (v[3] - 3.0 * v[2] + 3.0 * v[1] - v[0]) / (d * d * d))
    };
    let third_jump = third(1.0)? - third(-1.0)?;

    Ok(NavierReport {
        y,
        residuals,
        boundary: [h(eps)?, h(1.0 - eps)?],
        third_jump,
    })
}
