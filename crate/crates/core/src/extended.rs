//! Nonnegative extended reals.
//!
//! A value is either finite (with the quadrature error estimate that produced
//! it) or `+∞`, in which case it carries the certificate explaining where and
//! how fast the defining integral diverges. Arithmetic follows measure theory:
//! `+∞` absorbs addition and positive scaling, and `0 · (+∞) = 0`.

use std::fmt;

use crate::quadrature::DivergenceCertificate;

#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedValue {
    Finite { value: f64, error_bound: f64 },
    Infinite(Box<DivergenceCertificate>),
}

impl ExtendedValue {
    pub const ZERO: ExtendedValue = ExtendedValue::Finite {
        value: 0.0,
        error_bound: 0.0,
    };

    /// Builds a finite value. Negative values within the error bound are
    /// quadrature noise around zero and are clamped to zero.
    pub fn finite(value: f64, error_bound: f64) -> Self {
        let error_bound = error_bound.abs();
        debug_assert!(value.is_finite(), "finite value expected, got {value}");
        debug_assert!(
            value >= -error_bound - 1e-300 - 1e-14 * value.abs(),
            "negative extended value {value} (error bound {error_bound})"
        );
        ExtendedValue::Finite {
            value: value.max(0.0),
            error_bound,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self::finite(value, 0.0)
    }

    pub fn infinite(certificate: DivergenceCertificate) -> Self {
        ExtendedValue::Infinite(Box::new(certificate))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite { .. })
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    /// The value as an `f64`, `f64::INFINITY` for `+∞`.
    pub fn value(&self) -> f64 {
        match self {
            ExtendedValue::Finite { value, .. } => *value,
            ExtendedValue::Infinite(_) => f64::INFINITY,
        }
    }

    pub fn error_bound(&self) -> Option<f64> {
        match self {
            ExtendedValue::Finite { error_bound, .. } => Some(*error_bound),
            ExtendedValue::Infinite(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&DivergenceCertificate> {
        match self {
            ExtendedValue::Finite { .. } => None,
            ExtendedValue::Infinite(c) => Some(c),
        }
    }

    pub fn add(&self, other: &ExtendedValue) -> ExtendedValue {
        match (self, other) {
            (
                ExtendedValue::Finite {
                    value: a,
                    error_bound: ea,
                },
                ExtendedValue::Finite {
                    value: b,
                    error_bound: eb,
                },
            ) => ExtendedValue::Finite {
                value: a + b,
                error_bound: ea + eb,
            },
            (ExtendedValue::Infinite(c), _) | (_, ExtendedValue::Infinite(c)) => {
                ExtendedValue::Infinite(c.clone())
            }
        }
    }

    /// Scales by a nonnegative real; `0 · (+∞) = 0`.
    pub fn scale(&self, factor: f64) -> ExtendedValue {
        assert!(factor >= 0.0, "extended values scale by nonnegative reals only");
        if factor == 0.0 {
            return ExtendedValue::ZERO;
        }
        match self {
            ExtendedValue::Finite { value, error_bound } => ExtendedValue::Finite {
                value: value * factor,
                error_bound: error_bound * factor,
            },
            ExtendedValue::Infinite(c) => ExtendedValue::Infinite(c.clone()),
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite { value, error_bound } => write!(f, "{value} ± {error_bound:e}"),
            ExtendedValue::Infinite(c) => write!(f, "INF ({c})"),
        }
    }
}

/// Product with the `0 · ∞ = 0` convention.
#[inline]
pub fn mul0(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}
