//! The model on `[0, 1)` with `L₁ u = (x u)''` and `L₂`-harmonic functions
//! `a/x² + b`.
//!
//! Green kernels: `p_y(x) = 1/max(x, y) - 1` and `q_y(x) = 1/max(x, y)² - 1`,
//! with `1/0 = +∞`. The jump of `(x p_y)'` at `x = y` is `-1/y`, so the
//! reference measure of the coupling kernel has density `y`. With that density
//! `V1 = (1 - x)/2` exactly; the density `y(1 - y)` gives `(1 - x)(2 - x)/6`
//! instead and is kept only as [`MuDensity::Stated`] for comparison runs.
//!
//! This model is the negative fixture: `H(·, 0) ≡ +∞`, the pure partner of
//! `q₀` is not superharmonic, and adjoint coupling of data with `φ(0) > 0` is
//! infinite at `0`.

use crate::coupling::{compose_green, coupling_apply, BiharmonicPair};
use crate::error::{Error, Result};
use crate::eval::Evaluable;
use crate::extended::ExtendedValue;
use crate::kernel::{
    EndpointSingularity, GreenKernel, HarmonicBasis, IntervalDomain, LineModel, ModelId,
    ReferenceMeasure,
};
use crate::quadrature::{QuadConfig, Side, Stencil};
use crate::riquier::{biharmonic_measures, RegularSubdomain};

pub const DOMAIN: IntervalDomain = IntervalDomain {
    lo: 0.0,
    hi: 1.0,
    lo_closed: true,
    hi_closed: false,
};

/// Smallest probe abscissa for the obstruction curve; `1/x` overflows the
/// useful range below it.
pub const OBSTRUCTION_CUTOFF: f64 = 1e-8;

/// `p_y(x)`
pub fn p(x: f64, y: f64) -> f64 {
    1.0 / x.max(y) - 1.0
}

/// `q_y(x)`
pub fn q(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    1.0 / (m * m) - 1.0
}

fn one(_: f64) -> f64 {
    1.0
}
fn inv(x: f64) -> f64 {
    1.0 / x
}
fn inv_sq(x: f64) -> f64 {
    1.0 / (x * x)
}
fn linear(x: f64) -> f64 {
    x
}
fn cubic(x: f64) -> f64 {
    x * x * x
}
fn stated(y: f64) -> f64 {
    y * (1.0 - y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MuDensity {
    /// `dμ = y dy`, fixed by the kink of `x p_y(x)`.
    Kink,
    /// `dμ = y(1 - y) dy`.
    Stated,
}

pub fn model() -> LineModel {
    model_with(MuDensity::Kink)
}

pub fn model_with(density: MuDensity) -> LineModel {
    let g1 = GreenKernel::line("p_y(x)", DOMAIN, p)
        .symmetric()
        .with_endpoint_singularity(EndpointSingularity {
            point: 0.0,
            side: Side::Right,
            exponent: -1.0,
        });
    let g2 = GreenKernel::line("q_y(x)", DOMAIN, q)
        .symmetric()
        .with_endpoint_singularity(EndpointSingularity {
            point: 0.0,
            side: Side::Right,
            exponent: -2.0,
        });
    let mu = match density {
        MuDensity::Kink => ReferenceMeasure {
            label: "y dy",
            support: DOMAIN,
            density: linear,
        },
        MuDensity::Stated => ReferenceMeasure {
            label: "y(1-y) dy",
            support: DOMAIN,
            density: stated,
        },
    };
    LineModel {
        id: ModelId::Interval,
        domain: DOMAIN,
        g1,
        g2,
        mu,
        l1: Stencil::Multiplied(linear),
        l2: Stencil::Flux(cubic),
        basis1: HarmonicBasis {
            labels: ["1", "1/x"],
            funcs: [one, inv],
        },
        basis2: HarmonicBasis {
            labels: ["1", "1/x^2"],
            funcs: [one, inv_sq],
        },
        kink_weight: linear,
        quad: QuadConfig::default(),
        adjoint: false,
    }
}

/// `(V1, 1) = ((1 - x)/2, 1)`, a pure potential by the closed form of `V1`.
pub fn v1_pair() -> BiharmonicPair {
    BiharmonicPair::pure_potential(
        Evaluable::closed("(1-x)/2", |x| (1.0 - x) / 2.0),
        Evaluable::constant(1.0),
        "V1(x) = ∫_0^x (1/x-1) y dy + ∫_x^1 (1-y) dy = (1-x)/2",
    )
}

/// `|V1(x) - (1 - x)/2|`.
pub fn v1_identity_residual(model: &LineModel, x: f64) -> Result<f64> {
    let v1 = coupling_apply(model, &Evaluable::constant(1.0), x)?;
    Ok((v1.value() - (1.0 - x) / 2.0).abs())
}

/// The pure partner `p'_y = V q_y` evaluated at `x`, i.e. `H(x, y)`.
pub fn pure_of_q(model: &LineModel, y: f64, x: f64) -> Result<ExtendedValue> {
    compose_green(model, x, y)
}

/// The only candidate for the pure partner of `q₀` on `(0, 1)`:
/// `ln(x)/x + x/2 + a + b/x`.
pub fn obstruction_curve(a: f64, b: f64, x: f64) -> f64 {
    x.ln() / x + x / 2.0 + a + b / x
}

/// Minimum of the obstruction curve over the probes. For every `(a, b)` the
/// curve tends to `-∞` at `0⁺`, so a probe set reaching close enough to `0`
/// has a negative minimum.
pub fn pure_obstruction(a: f64, b: f64, probes: &[f64]) -> Result<f64> {
    if probes.is_empty() {
        return Err(Error::Precondition("no obstruction probes".into()));
    }
    probes.iter().try_fold(f64::INFINITY, |m, &x| {
        if !(OBSTRUCTION_CUTOFF..1.0).contains(&x) {
            return Err(Error::Precondition(format!(
                "obstruction probe {x} outside [{OBSTRUCTION_CUTOFF}, 1)"
            )));
        }
        Ok(m.min(obstruction_curve(a, b, x)))
    })
}

/// One-sided derivatives of `x p_y(x)` at `x = y` differ by this amount
/// (right minus left), estimated by second-order one-sided differences.
pub fn kink_jump(y: f64, h: f64) -> f64 {
    let w = |x: f64| x * p(x, y);
    let right = (-3.0 * w(y) + 4.0 * w(y + h) - w(y + 2.0 * h)) / (2.0 * h);
    let left = (3.0 * w(y) - 4.0 * w(y - h) + w(y - 2.0 * h)) / (2.0 * h);
    right - left
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrictnessReport {
    /// `p(x) - ∫p dμ_x`
    pub margin: f64,
    /// `∫q dν_x`
    pub nu_term: f64,
}

/// Strictness margin of a pure pair `(p, q)` on `ω` at `x`. The margin must
/// dominate the `ν`-term; falling short of it is an invariant violation.
pub fn strictness_probe(
    model: &LineModel,
    pair: &BiharmonicPair,
    omega: &RegularSubdomain,
    x: f64,
) -> Result<StrictnessReport> {
    let m = biharmonic_measures(model, omega, x)?;
    let pe = [pair.u.value(omega.a), pair.u.value(omega.b)];
    let qe = [pair.v.value(omega.a), pair.v.value(omega.b)];
    let margin = pair.u.value(x) - (m.mu[0] * pe[0] + m.mu[1] * pe[1]);
    let nu_term = m.nu[0] * qe[0] + m.nu[1] * qe[1];
    let tol = crate::Tolerances::default().identity;
    if margin < nu_term - tol {
        return Err(Error::InvariantViolation(format!(
            "strictness margin {margin:e} below the ν-term {nu_term:e} on [{}, {}] at {x}",
            omega.a, omega.b
        )));
    }
    Ok(StrictnessReport { margin, nu_term })
}
