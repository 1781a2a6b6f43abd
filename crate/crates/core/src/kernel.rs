//! Green kernels, reference measures, harmonic bases and the model bundle
//! every operator works against.

use std::fmt;

use crate::error::{Error, Result};
use crate::extended::ExtendedValue;
use crate::quadrature::{DivergenceCertificate, QuadConfig, Side, Stencil};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    Interval,
    Bilaplace,
    Newtonian(u32),
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Interval => write!(f, "interval"),
            ModelId::Bilaplace => write!(f, "bilaplace"),
            ModelId::Newtonian(n) => write!(f, "newtonian{n}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalDomain {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl IntervalDomain {
    pub fn contains(&self, x: f64) -> bool {
        (x > self.lo || (self.lo_closed && x == self.lo))
            && (x < self.hi || (self.hi_closed && x == self.hi))
    }

    pub fn check(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain {
                point: x,
                domain: self.to_string(),
            })
        }
    }
}

impl fmt::Display for IntervalDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { "[" } else { "(" },
            self.lo,
            self.hi,
            if self.hi_closed { "]" } else { ")" }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiagonalSingularity {
    None,
    /// `G(x, y) ~ |x - y|^exponent` near the diagonal.
    Power(f64),
}

/// Blow-up of the kernel as both arguments approach `point` from `side`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointSingularity {
    pub point: f64,
    pub side: Side,
    pub exponent: f64,
}

#[derive(Debug, Clone, Copy)]
pub enum KernelRule {
    Line(fn(f64, f64) -> f64),
    /// `c · r^{2-N}` as a function of the distance `r`.
    Newtonian { dim: u32, c: f64 },
}

/// A nonnegative kernel `G(x, y)` given in closed form, with its singular
/// structure declared up front so quadrature can plan around it.
#[derive(Debug, Clone)]
pub struct GreenKernel {
    pub name: &'static str,
    pub domain: IntervalDomain,
    pub rule: KernelRule,
    pub diagonal: DiagonalSingularity,
    pub endpoint_singularities: Vec<EndpointSingularity>,
    /// `x ↦ G(x, y)` has a derivative jump at `x = y`.
    pub kink_on_diagonal: bool,
    pub symmetric: bool,
    transposed: bool,
}

impl GreenKernel {
    pub fn line(name: &'static str, domain: IntervalDomain, rule: fn(f64, f64) -> f64) -> Self {
        GreenKernel {
            name,
            domain,
            rule: KernelRule::Line(rule),
            diagonal: DiagonalSingularity::None,
            endpoint_singularities: Vec::new(),
            kink_on_diagonal: true,
            symmetric: false,
            transposed: false,
        }
    }

    pub fn symmetric(mut self) -> Self {
        self.symmetric = true;
        self
    }

    pub fn with_endpoint_singularity(mut self, s: EndpointSingularity) -> Self {
        self.endpoint_singularities.push(s);
        self
    }

    /// `(x, y) ↦ G(y, x)`.
    pub fn transposed(&self) -> Self {
        GreenKernel {
            transposed: !self.transposed,
            ..self.clone()
        }
    }

    /// Raw value with `+∞` on the singular locus; no domain check.
    #[inline]
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let (x, y) = if self.transposed { (y, x) } else { (x, y) };
        match self.rule {
            KernelRule::Line(f) => f(x, y),
            KernelRule::Newtonian { dim, c } => newtonian_value(dim, c, (x - y).abs()),
        }
    }

    pub fn singular_points(&self) -> Vec<f64> {
        self.endpoint_singularities.iter().map(|s| s.point).collect()
    }

    fn pole_exponent(&self, x: f64, y: f64) -> f64 {
        if x == y {
            if let DiagonalSingularity::Power(p) = self.diagonal {
                return p;
            }
        }
        self.endpoint_singularities
            .iter()
            .find(|s| s.point == x || s.point == y)
            .map_or(f64::NAN, |s| s.exponent)
    }
}

pub(crate) fn newtonian_value(dim: u32, c: f64, r: f64) -> f64 {
    if r == 0.0 {
        f64::INFINITY
    } else {
        c * r.powi(2 - dim as i32)
    }
}

/// Evaluates `K(x, y)`; `+∞` is returned exactly on the declared singular
/// locus, carrying the declared exponent.
pub fn kernel_eval(k: &GreenKernel, x: f64, y: f64) -> Result<ExtendedValue> {
    k.domain.check(x)?;
    k.domain.check(y)?;
    let v = k.value(x, y);
    if v.is_finite() {
        Ok(ExtendedValue::exact(v))
    } else {
        let point = if k.endpoint_singularities.iter().any(|s| s.point == y) {
            y
        } else {
            x
        };
        Ok(ExtendedValue::infinite(DivergenceCertificate::pole(
            point,
            k.pole_exponent(x, y),
        )))
    }
}

/// Density with respect to length on the model interval.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceMeasure {
    pub label: &'static str,
    pub support: IntervalDomain,
    pub density: fn(f64) -> f64,
}

/// Two functions spanning the local harmonic solutions of one sheaf.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicBasis {
    pub labels: [&'static str; 2],
    pub funcs: [fn(f64) -> f64; 2],
}

/// Condition-number ceiling beyond which a subinterval is rejected as
/// numerically non-regular.
pub const MAX_INTERPOLATION_CONDITION: f64 = 1e10;

/// Cardinal functions of a two-function basis on the endpoints `{a, b}`:
/// `c_a(a) = 1, c_a(b) = 0` and the reverse for `c_b`.
#[derive(Debug, Clone, Copy)]
pub struct Cardinals {
    pub basis: HarmonicBasis,
    pub a: f64,
    pub b: f64,
    coef: [[f64; 2]; 2],
    pub condition: f64,
}

impl HarmonicBasis {
    pub fn eval(&self, i: usize, x: f64) -> f64 {
        (self.funcs[i])(x)
    }

    pub fn cardinals(&self, a: f64, b: f64) -> Result<Cardinals> {
        let m = [
            [self.eval(0, a), self.eval(1, a)],
            [self.eval(0, b), self.eval(1, b)],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let frob2: f64 = m.iter().flatten().map(|v| v * v).sum();
        let condition = if det == 0.0 || !det.is_finite() || !frob2.is_finite() {
            f64::INFINITY
        } else {
            let d = det.abs();
            let disc = (frob2 * frob2 - 4.0 * d * d).max(0.0).sqrt();
            (frob2 + disc) / (2.0 * d)
        };
        if !(condition <= MAX_INTERPOLATION_CONDITION) {
            return Err(Error::Regularity {
                a,
                b,
                reason: format!(
                    "basis {{{}, {}}} interpolation condition number {condition:e}",
                    self.labels[0], self.labels[1]
                ),
            });
        }
        Ok(Cardinals {
            basis: *self,
            a,
            b,
            coef: [
                [m[1][1] / det, -m[1][0] / det],
                [-m[0][1] / det, m[0][0] / det],
            ],
            condition,
        })
    }
}

impl Cardinals {
    /// `[c_a(x), c_b(x)]`.
    pub fn eval(&self, x: f64) -> [f64; 2] {
        let e = [self.basis.eval(0, x), self.basis.eval(1, x)];
        [
            self.coef[0][0] * e[0] + self.coef[0][1] * e[1],
            self.coef[1][0] * e[0] + self.coef[1][1] * e[1],
        ]
    }

    /// The basis interpolant of endpoint data `(f(a), f(b))` at `x`.
    pub fn interpolate(&self, data: [f64; 2], x: f64) -> f64 {
        let c = self.eval(x);
        c[0] * data[0] + c[1] * data[1]
    }
}

/// One of the one-dimensional model spaces: two Green kernels, the reference
/// measure of the coupling kernel, the two differential operators and bases
/// of their local solutions.
#[derive(Debug, Clone)]
pub struct LineModel {
    pub id: ModelId,
    pub domain: IntervalDomain,
    pub g1: GreenKernel,
    pub g2: GreenKernel,
    pub mu: ReferenceMeasure,
    pub l1: Stencil,
    pub l2: Stencil,
    pub basis1: HarmonicBasis,
    pub basis2: HarmonicBasis,
    /// Weight turning the kink of `G₁(·, z)` into a unit source for `L₁`.
    pub kink_weight: fn(f64) -> f64,
    pub quad: QuadConfig,
    pub(crate) adjoint: bool,
}

impl LineModel {
    pub fn with_quad_tol(mut self, tol: f64) -> Self {
        self.quad.tol = tol;
        self
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn check_point(&self, x: f64) -> Result<()> {
        self.domain.check(x)
    }

    pub fn density(&self, z: f64) -> f64 {
        (self.mu.density)(z)
    }

    /// Points where either kernel may blow up; integrals over the model
    /// domain approach them through graded shells.
    pub fn singular_points(&self) -> Vec<f64> {
        let mut pts = self.g1.singular_points();
        pts.extend(self.g2.singular_points());
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// The model with `(G₁, basis₁)` and `(G₂ᵀ, basis₂)` exchanged: the
    /// adjoint space, available only where adjoint coupling is finite and
    /// continuous on compactly supported data.
    pub fn adjoint(&self) -> Result<LineModel> {
        if self.id != ModelId::Bilaplace {
            return Err(Error::AdjointUnavailable(format!(
                "adjoint coupling of the {} model is not finite on compactly supported data",
                self.id
            )));
        }
        Ok(LineModel {
            g1: self.g2.transposed(),
            g2: self.g1.transposed(),
            l1: self.l2,
            l2: self.l1,
            basis1: self.basis2,
            basis2: self.basis1,
            adjoint: !self.adjoint,
            ..self.clone()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(_: f64) -> f64 {
        1.0
    }
    fn id(x: f64) -> f64 {
        x
    }
    fn inv(x: f64) -> f64 {
        1.0 / x
    }

    #[test]
    fn linear_cardinals_are_hat_weights() {
        let basis = HarmonicBasis {
            labels: ["1", "x"],
            funcs: [one, id],
        };
        let c = basis.cardinals(0.0, 1.0).unwrap();
        let w = c.eval(0.25);
        assert!((w[0] - 0.75).abs() < 1e-15 && (w[1] - 0.25).abs() < 1e-15);
        assert!(c.condition.is_finite());
    }

    #[test]
    fn singular_basis_is_not_regular() {
        let basis = HarmonicBasis {
            labels: ["1", "1/x"],
            funcs: [one, inv],
        };
        assert!(matches!(
            basis.cardinals(0.0, 0.5),
            Err(Error::Regularity { .. })
        ));
        assert!(basis.cardinals(0.25, 0.75).is_ok());
    }

    #[test]
    fn domain_membership_respects_closedness() {
        let d = IntervalDomain {
            lo: 0.0,
            hi: 1.0,
            lo_closed: true,
            hi_closed: false,
        };
        assert!(d.contains(0.0));
        assert!(!d.contains(1.0));
        assert!(matches!(d.check(1.5), Err(Error::Domain { .. })));
        assert_eq!(d.to_string(), "[0, 1)");
    }
}
