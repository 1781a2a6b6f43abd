//! Central-difference residuals for the second-order operators of the 1D
//! models, with one Richardson step.

use crate::error::{Error, Result};

pub const DEFAULT_FD_STEP: f64 = 1e-4;

/// A second-order operator in one of two divergence forms.
#[derive(Debug, Clone, Copy)]
pub enum Stencil {
    /// `u ↦ (m(x) u)''`
    Multiplied(fn(f64) -> f64),
    /// `u ↦ (a(x) u')'`
    Flux(fn(f64) -> f64),
}

fn one(_: f64) -> f64 {
    1.0
}

impl Stencil {
    pub fn second_derivative() -> Self {
        Stencil::Multiplied(one)
    }

    fn apply<U: Fn(f64) -> f64>(&self, u: &U, x: f64, h: f64) -> f64 {
        match self {
            Stencil::Multiplied(m) => {
                let w = |t: f64| m(t) * u(t);
                (w(x + h) - 2.0 * w(x) + w(x - h)) / (h * h)
            }
            Stencil::Flux(a) => {
                let (um, u0, up) = (u(x - h), u(x), u(x + h));
                (a(x + 0.5 * h) * (up - u0) - a(x - 0.5 * h) * (u0 - um)) / (h * h)
            }
        }
    }
}

/// `L[u](x)` by central differences at step `h` and `h/2`, Richardson
/// combined to fourth order.
pub fn fd_residual<U: Fn(f64) -> f64>(stencil: &Stencil, u: U, x: f64, h: f64) -> Result<f64> {
    fd_residual_with(stencil, &u, x, h)
}

pub fn fd_residual_with<U: Fn(f64) -> f64>(
    stencil: &Stencil,
    u: &U,
    x: f64,
    h: f64,
) -> Result<f64> {
    for k in -4i32..=4 {
        let t = x + k as f64 * 0.5 * h;
        if !u(t).is_finite() {
            return Err(Error::Stencil { x });
        }
    }
    let coarse = stencil.apply(u, x, h);
    let fine = stencil.apply(u, x, 0.5 * h);
    Ok((4.0 * fine - coarse) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_times(t: f64) -> f64 {
        t
    }

    fn cube(t: f64) -> f64 {
        t * t * t
    }

    #[test]
    fn second_derivative_of_a_cubic() {
        let r = fd_residual(&Stencil::second_derivative(), |t: f64| t * t * t, 0.7, 1e-3).unwrap();
        assert!((r - 4.2).abs() < 1e-8);
    }

    #[test]
    fn multiplied_form_of_a_quadratic() {
        // (x · (1 - x)/2)'' = -1
        let r = fd_residual(&Stencil::Multiplied(x_times), |t: f64| (1.0 - t) / 2.0, 0.5, 1e-4)
            .unwrap();
        assert!((r + 1.0).abs() < 1e-6);
    }

    #[test]
    fn flux_form_annihilates_inverse_squares() {
        let r = fd_residual(&Stencil::Flux(cube), |t: f64| 3.0 / (t * t) + 1.0, 0.4, 1e-4).unwrap();
        assert!(r.abs() < 1e-4, "{r}");
    }

    #[test]
    fn infinite_window_is_a_stencil_error() {
        let r = fd_residual(&Stencil::second_derivative(), |t: f64| 1.0 / t, 0.0001, 1e-4);
        assert!(matches!(r, Err(Error::Stencil { .. })));
    }
}
