//! The Newtonian kernel `G(x, y) = c_N |x - y|^{2-N}` on ℝᴺ, `N ≥ 5`, with
//! `c_N = Γ(N/2) / ((N - 2) 2 π^{N/2})` so that `-Δ G(·, y) = δ_y`.
//!
//! The composed kernel `H(x, y) = ∫ G(x, z) G(z, y) dz` is computed in
//! polar coordinates around `x` with the polar axis through `y`: for
//! `d = |x - y|`, `s = |z - x|` and `ρ² = s² + d² - 2 s d cos θ`,
//!
//! `H = c_N² σ_{N-2} ∫_0^π ∫_0^∞ s (sin θ / ρ)^{N-2} ds dθ`,
//!
//! where `σ_{N-2}` is the area of the unit sphere in ℝ^{N-1}. Dilation gives
//! `H ∝ d^{4-N}`, which the tests use as an independent check.

use crate::error::{Error, Result};
use crate::extended::ExtendedValue;
use crate::kernel::{DiagonalSingularity, GreenKernel, IntervalDomain, KernelRule};
use crate::quadrature::{
    integrate_radial, integrate_signed, integrate_tail, probe_divergence, unit_sphere_area,
    gamma_half, DivergenceCertificate, ProbeVerdict, QuadConfig, RadialRange, Side,
};

/// Below this distance the angular integrand is too peaked for the requested
/// accuracy and [`NewtonianModel::riesz_compose`] refuses to answer.
pub const MIN_COMPOSE_DISTANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonianModel {
    pub dim: u32,
    pub c: f64,
}

pub fn normalization_constant(n: u32) -> f64 {
    gamma_half(n) / ((n as f64 - 2.0) * 2.0 * std::f64::consts::PI.powf(n as f64 / 2.0))
}

impl NewtonianModel {
    pub fn new(dim: u32) -> Result<Self> {
        if dim < 5 {
            return Err(Error::ModelDimension(dim));
        }
        Ok(NewtonianModel {
            dim,
            c: normalization_constant(dim),
        })
    }

    /// The kernel as a function of distance, for use with the generic kernel
    /// machinery.
    pub fn kernel(&self) -> GreenKernel {
        let mut k = GreenKernel::line(
            "c_N |x-y|^(2-N)",
            IntervalDomain {
                lo: f64::NEG_INFINITY,
                hi: f64::INFINITY,
                lo_closed: false,
                hi_closed: false,
            },
            |_, _| f64::NAN,
        )
        .symmetric();
        k.diagonal = DiagonalSingularity::Power(2.0 - self.dim as f64);
        k.rule = KernelRule::Newtonian {
            dim: self.dim,
            c: self.c,
        };
        k
    }

    /// `c_N r^{2-N}`; `+∞` at `r = 0`.
    pub fn at_distance(&self, r: f64) -> f64 {
        crate::kernel::newtonian_value(self.dim, self.c, r)
    }

    fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let n = self.dim as usize;
        if x.len() != n || y.len() != n {
            return Err(Error::Precondition(format!(
                "points must have {n} coordinates, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        if x.iter().chain(y).any(|t| !t.is_finite()) {
            return Err(Error::Precondition("coordinates must be finite".into()));
        }
        Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
    }

    pub fn newton_kernel(&self, x: &[f64], y: &[f64]) -> Result<ExtendedValue> {
        let r = self.distance(x, y)?;
        if r == 0.0 {
            let mut cert = DivergenceCertificate::pole(0.0, 2.0 - self.dim as f64);
            cert.location = crate::quadrature::Location::Point(0.0);
            return Ok(ExtendedValue::infinite(cert));
        }
        Ok(ExtendedValue::exact(self.at_distance(r)))
    }

    /// `∫ G(0, z) g(|z|) dz` over a ball or all of ℝᴺ.
    pub fn coupling_apply_radial<G: Fn(f64) -> f64>(
        &self,
        g: G,
        range: RadialRange,
        tol: f64,
    ) -> Result<ExtendedValue> {
        let integrand = |r: f64| crate::extended::mul0(self.at_distance(r), g(r));
        Ok(integrate_radial(integrand, self.dim, range, tol)?.value)
    }

    /// `V 1 = ∫ c_N |z|^{2-N} dz` diverges in the radial tail with exponent
    /// `+1` (integrand `c_N σ_{N-1} r`).
    pub fn constant_coupling_divergence(&self) -> Result<DivergenceCertificate> {
        match self.coupling_apply_radial(|_| 1.0, RadialRange::Whole, 1e-8)? {
            ExtendedValue::Infinite(c) => Ok(*c),
            ExtendedValue::Finite { value, .. } => Err(Error::InvariantViolation(format!(
                "coupling of the constant 1 came out finite ({value})"
            ))),
        }
    }

    /// `H(x, y)`. Coincident points give `+∞` with the certificate of the
    /// near-diagonal integrand `s^{3-N}`.
    pub fn riesz_compose(&self, x: &[f64], y: &[f64], tol: f64) -> Result<ExtendedValue> {
        let d = self.distance(x, y)?;
        if d == 0.0 {
            let n = self.dim as f64;
            let scale = self.c * self.c * unit_sphere_area(self.dim);
            return match probe_divergence(move |s: f64| scale * s.powf(3.0 - n), 0.0, Side::Right, 1.0)? {
                ProbeVerdict::Divergent(c) => Ok(ExtendedValue::infinite(c)),
                ProbeVerdict::Finite { .. } => Err(Error::InvariantViolation(
                    "near-diagonal probe of H came out finite".into(),
                )),
            };
        }
        self.compose_at_distance(d, tol)
    }

    /// `H` as a function of `d = |x - y| > 0`.
    pub fn compose_at_distance(&self, d: f64, tol: f64) -> Result<ExtendedValue> {
        if !(d >= MIN_COMPOSE_DISTANCE) || !d.is_finite() {
            return Err(Error::Conditioning {
                distance: d,
                limit: MIN_COMPOSE_DISTANCE,
            });
        }
        let n = self.dim as i32;
        let prefactor = self.c * self.c * unit_sphere_area(self.dim - 1);
        let outer_tol = tol / prefactor;
        let inner_cfg = QuadConfig::with_tol(outer_tol / (10.0 * std::f64::consts::PI));

        let inner = |theta: f64| -> Result<f64> {
            let (sin, cos) = theta.sin_cos();
            let f = |s: f64| {
                let rho = (s * s + d * d - 2.0 * s * d * cos).max(0.0).sqrt();
                s * (sin / rho).powi(n - 2)
            };
            let peak = d * cos;
            let kinks: &[f64] = if peak > 0.0 { &[peak] } else { &[] };
            let (near, _) = integrate_signed(&f, 0.0, 2.0 * d, kinks, &inner_cfg)?;
            let far = integrate_tail(&f, 2.0 * d, &inner_cfg)?.value;
            match far {
                ExtendedValue::Finite { value, .. } => Ok(near + value),
                ExtendedValue::Infinite(_) => Err(Error::InvariantViolation(format!(
                    "radial tail of H diverged in dimension {n}"
                ))),
            }
        };

        let failure = std::cell::RefCell::new(None);
        let outer = |theta: f64| {
            inner(theta).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            })
        };
        let result = integrate_signed(&outer, 0.0, std::f64::consts::PI, &[], &QuadConfig::with_tol(outer_tol));
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        let (j, err) = result?;
        Ok(ExtendedValue::finite(prefactor * j, prefactor * err))
    }

    /// Closed form of `H` from the mean-value property on spheres:
    /// `c_N² σ_{N-1} d^{4-N} (N - 2) / (2 (N - 4))`.
    pub fn compose_closed_form(&self, d: f64) -> f64 {
        let n = self.dim as f64;
        self.c * self.c * unit_sphere_area(self.dim) * d.powf(4.0 - n) * (n - 2.0)
            / (2.0 * (n - 4.0))
    }

    /// Outward flux `-∂_r G · |S_r|` through the sphere of radius `r`, with
    /// the derivative from a Richardson-extrapolated central difference and
    /// the sphere area from the product of `∫_0^π sin^k θ dθ`.
    pub fn gauss_flux(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::Precondition(format!("flux radius {r} must be positive")));
        }
        let h = 1e-3 * r;
        let d = |h: f64| (self.at_distance(r + h) - self.at_distance(r - h)) / (2.0 * h);
        let dr = (4.0 * d(0.5 * h) - d(h)) / 3.0;
        let cfg = QuadConfig::with_tol(1e-13);
        let mut area = 2.0 * std::f64::consts::PI;
        for k in 1..=(self.dim as i32 - 2) {
            area *= integrate_signed(&|t: f64| t.sin().powi(k), 0.0, std::f64::consts::PI, &[], &cfg)?.0;
        }
        Ok(-dr * area * r.powi(self.dim as i32 - 1))
    }
}

/// Tail of the near-field integrand of `H` at `x = y` in dimension `n`,
/// `∫^∞ s^{3-n} ds`: divergent for `n = 4`, convergent from `n = 5` on.
pub fn strongness_tail_probe(n: u32) -> Result<ProbeVerdict> {
    if n < 3 {
        return Err(Error::ModelDimension(n));
    }
    let p = 3.0 - n as f64;
    probe_divergence(move |s: f64| s.powf(p), f64::INFINITY, Side::RadialTail, 1.0)
}
