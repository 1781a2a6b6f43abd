//! Riquier (Navier-type) boundary problems on subintervals of the 1D models
//! and the triple of biharmonic measures `(μ_x, ν_x, λ_x)`.
//!
//! On `ω = [a, b]` the second component is the `basis₂` interpolant of the
//! boundary data `g`; the first is the `basis₁` interpolant of `f` plus the
//! localized coupling `∫ K_ω(x, z) v(z) w(z) dz`, where `K_ω` is `G₁` minus
//! its boundary sweep and `w` is the model's kink weight. Both measure
//! triples live on `{a, b}`.

use crate::coupling::BiharmonicPair;
use crate::error::{Error, Result};
use crate::kernel::{Cardinals, LineModel};
use crate::quadrature::integrate_signed;

#[derive(Debug, Clone, Copy)]
pub struct RegularSubdomain {
    pub a: f64,
    pub b: f64,
    pub(crate) c1: Cardinals,
    pub(crate) c2: Cardinals,
}

impl RegularSubdomain {
    pub fn new(model: &LineModel, a: f64, b: f64) -> Result<Self> {
        let d = model.domain;
        if !(a < b) || a < d.lo || b > d.hi {
            return Err(Error::Regularity {
                a,
                b,
                reason: format!("not a subinterval of {d}"),
            });
        }
        Ok(RegularSubdomain {
            a,
            b,
            c1: model.basis1.cardinals(a, b)?,
            c2: model.basis2.cardinals(a, b)?,
        })
    }

    /// Interpolation condition numbers for `basis₁` and `basis₂`.
    pub fn conditions(&self) -> (f64, f64) {
        (self.c1.condition, self.c2.condition)
    }

    pub fn contains(&self, x: f64) -> bool {
        (self.a..=self.b).contains(&x)
    }
}

/// `K_ω(x, z) = G₁(x, z) - Σ_e c_e(x) G₁(e, z)`, the Green kernel of `L₁`
/// on `ω`.
#[derive(Debug, Clone)]
pub struct LocalGreen<'m> {
    model: &'m LineModel,
    pub omega: RegularSubdomain,
}

impl LocalGreen<'_> {
    pub fn eval(&self, x: f64, z: f64) -> f64 {
        let g = &self.model.g1;
        let (a, b) = (self.omega.a, self.omega.b);
        let c = self.omega.c1.eval(x);
        g.value(x, z) - c[0] * g.value(a, z) - c[1] * g.value(b, z)
    }

    /// `∫_a^b K_ω(x, z) h(z) w(z) dz`.
    pub fn apply<H: Fn(f64) -> f64>(&self, h: H, x: f64) -> Result<f64> {
        let (a, b) = (self.omega.a, self.omega.b);
        if x <= a || x >= b {
            return Ok(0.0);
        }
        let w = self.model.kink_weight;
        let integrand = |z: f64| self.eval(x, z) * h(z) * w(z);
        Ok(integrate_signed(&integrand, a, b, &[x], &self.model.quad)?.0)
    }
}

pub fn localize_green<'m>(model: &'m LineModel, omega: &RegularSubdomain) -> LocalGreen<'m> {
    LocalGreen {
        model,
        omega: *omega,
    }
}

#[derive(Debug, Clone)]
pub struct RiquierSolution<'m> {
    local: LocalGreen<'m>,
    pub f: [f64; 2],
    pub g: [f64; 2],
}

impl RiquierSolution<'_> {
    pub fn omega(&self) -> &RegularSubdomain {
        &self.local.omega
    }

    pub fn v(&self, x: f64) -> f64 {
        self.local.omega.c2.interpolate(self.g, x)
    }

    pub fn u(&self, x: f64) -> Result<f64> {
        let omega = &self.local.omega;
        if !omega.contains(x) {
            return Err(Error::Domain {
                point: x,
                domain: format!("[{}, {}]", omega.a, omega.b),
            });
        }
        let harmonic = omega.c1.interpolate(self.f, x);
        Ok(harmonic + self.local.apply(|z| self.v(z), x)?)
    }
}

/// Solves the Riquier problem on `ω` with boundary data `u = f`, `v = g` at
/// `{a, b}`.
pub fn solve_riquier<'m>(
    model: &'m LineModel,
    omega: &RegularSubdomain,
    f: [f64; 2],
    g: [f64; 2],
) -> Result<RiquierSolution<'m>> {
    if f.iter().chain(g.iter()).any(|t| !t.is_finite()) {
        return Err(Error::Precondition("Riquier data must be finite".into()));
    }
    Ok(RiquierSolution {
        local: localize_green(model, omega),
        f,
        g,
    })
}

/// Weights of the three biharmonic measures at `x`, each on `{a, b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureTriple {
    pub endpoints: [f64; 2],
    pub mu: [f64; 2],
    pub nu: [f64; 2],
    pub lambda: [f64; 2],
}

impl MeasureTriple {
    /// `(⟨f, μ⟩ + ⟨g, ν⟩, ⟨g, λ⟩)`.
    pub fn pair(&self, f: [f64; 2], g: [f64; 2]) -> (f64, f64) {
        (
            self.mu[0] * f[0] + self.mu[1] * f[1] + self.nu[0] * g[0] + self.nu[1] * g[1],
            self.lambda[0] * g[0] + self.lambda[1] * g[1],
        )
    }

    pub fn weights(&self) -> [f64; 6] {
        [
            self.mu[0],
            self.mu[1],
            self.nu[0],
            self.nu[1],
            self.lambda[0],
            self.lambda[1],
        ]
    }
}

pub fn biharmonic_measures(
    model: &LineModel,
    omega: &RegularSubdomain,
    x: f64,
) -> Result<MeasureTriple> {
    if !omega.contains(x) {
        return Err(Error::Domain {
            point: x,
            domain: format!("[{}, {}]", omega.a, omega.b),
        });
    }
    let local = localize_green(model, omega);
    let nu_a = local.apply(|z| omega.c2.eval(z)[0], x)?;
    let nu_b = local.apply(|z| omega.c2.eval(z)[1], x)?;
    Ok(MeasureTriple {
        endpoints: [omega.a, omega.b],
        mu: omega.c1.eval(x),
        nu: [nu_a, nu_b],
        lambda: omega.c2.eval(x),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeMargin {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    /// `u(x) - ∫u dμ_x - ∫v dν_x`
    pub first: f64,
    /// `v(x) - ∫v dλ_x`
    pub second: f64,
}

#[derive(Debug, Clone, Default)]
pub struct HyperharmonicReport {
    pub probes: Vec<ProbeMargin>,
}

impl HyperharmonicReport {
    pub fn min_margin(&self) -> f64 {
        self.probes
            .iter()
            .map(|p| p.first.min(p.second))
            .fold(f64::INFINITY, f64::min)
    }
}

fn margin(at_x: f64, mean: f64) -> f64 {
    if at_x == f64::INFINITY {
        f64::INFINITY
    } else {
        at_x - mean
    }
}

/// Evaluates both defining inequalities of a hyperharmonic pair at every
/// `(ω, x)` probe.
pub fn verify_hyperharmonic(
    model: &LineModel,
    pair: &BiharmonicPair,
    probes: &[(RegularSubdomain, f64)],
) -> Result<HyperharmonicReport> {
    let mut out = Vec::with_capacity(probes.len());
    for (omega, x) in probes {
        let m = biharmonic_measures(model, omega, *x)?;
        let ue = [pair.u.value(omega.a), pair.u.value(omega.b)];
        let ve = [pair.v.value(omega.a), pair.v.value(omega.b)];
        let mean_u = crate::extended::mul0(m.mu[0], ue[0])
            + crate::extended::mul0(m.mu[1], ue[1])
            + crate::extended::mul0(m.nu[0], ve[0])
            + crate::extended::mul0(m.nu[1], ve[1]);
        let mean_v = crate::extended::mul0(m.lambda[0], ve[0]) + crate::extended::mul0(m.lambda[1], ve[1]);
        out.push(ProbeMargin {
            a: omega.a,
            b: omega.b,
            x: *x,
            first: margin(pair.u.value(*x), mean_u),
            second: margin(pair.v.value(*x), mean_v),
        });
    }
    Ok(HyperharmonicReport { probes: out })
}
