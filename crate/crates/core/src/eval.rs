//! Functions of one real variable passed to the kernel operators: either a
//! closed form (with its declared kinks and singular points) or samples on a
//! grid with linear interpolation.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Evaluable {
    Closed {
        label: String,
        f: Closure,
        kinks: Vec<f64>,
        singular: Vec<f64>,
    },
    Grid {
        xs: Arc<[f64]>,
        ys: Arc<[f64]>,
    },
}

impl fmt::Debug for Evaluable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluable::Closed {
                label,
                kinks,
                singular,
                ..
            } => f
                .debug_struct("Closed")
                .field("label", label)
                .field("kinks", kinks)
                .field("singular", singular)
                .finish(),
            Evaluable::Grid { xs, .. } => f
                .debug_struct("Grid")
                .field("nodes", &xs.len())
                .field("range", &(xs[0], xs[xs.len() - 1]))
                .finish(),
        }
    }
}

impl Evaluable {
    pub fn closed(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Evaluable::Closed {
            label: label.into(),
            f: Arc::new(f),
            kinks: Vec::new(),
            singular: Vec::new(),
        }
    }

    pub fn constant(c: f64) -> Self {
        Evaluable::closed(format!("const {c}"), move |_| c)
    }

    pub fn zero() -> Self {
        Evaluable::constant(0.0)
    }

    /// Samples on strictly increasing nodes, interpolated linearly.
    pub fn grid(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(Error::Precondition(
                "grid functions need at least two nodes and one value per node".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("grid nodes must increase strictly".into()));
        }
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::Precondition("grid values must be finite".into()));
        }
        Ok(Evaluable::Grid {
            xs: xs.into(),
            ys: ys.into(),
        })
    }

    pub fn with_kinks(mut self, points: &[f64]) -> Self {
        if let Evaluable::Closed { kinks, .. } = &mut self {
            kinks.extend_from_slice(points);
        }
        self
    }

    pub fn with_singular(mut self, points: &[f64]) -> Self {
        if let Evaluable::Closed { singular, .. } = &mut self {
            singular.extend_from_slice(points);
        }
        self
    }

    pub fn label(&self) -> String {
        match self {
            Evaluable::Closed { label, .. } => label.clone(),
            Evaluable::Grid { xs, .. } => format!("grid[{} nodes]", xs.len()),
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, Evaluable::Grid { .. })
    }

    /// Value at `x`. Grid functions are held constant outside their range;
    /// callers check coverage with [`Evaluable::covers`] first.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            Evaluable::Closed { f, .. } => f(x),
            Evaluable::Grid { xs, ys } => {
                let n = xs.len();
                if x <= xs[0] {
                    return ys[0];
                }
                if x >= xs[n - 1] {
                    return ys[n - 1];
                }
                let i = xs.partition_point(|&t| t <= x) - 1;
                let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
                ys[i] + t * (ys[i + 1] - ys[i])
            }
        }
    }

    pub fn covers(&self, a: f64, b: f64) -> Result<()> {
        match self {
            Evaluable::Closed { .. } => Ok(()),
            Evaluable::Grid { xs, .. } => {
                let (lo, hi) = (xs[0], xs[xs.len() - 1]);
                if a < lo || b > hi {
                    Err(Error::Grid {
                        at: if a < lo { a } else { b },
                        reason: format!("grid covers only [{lo}, {hi}]"),
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Value at a point where some kernel is singular; grid samples cannot
    /// stand in for the exact value there.
    pub fn value_at_singular(&self, x: f64) -> Result<f64> {
        match self {
            Evaluable::Closed { f, .. } => Ok(f(x)),
            Evaluable::Grid { .. } => Err(Error::Grid {
                at: x,
                reason: "grid functions are not evaluated at singular points".into(),
            }),
        }
    }

    pub fn kinks(&self) -> Vec<f64> {
        match self {
            Evaluable::Closed { kinks, .. } => kinks.clone(),
            Evaluable::Grid { xs, .. } => xs.to_vec(),
        }
    }

    pub fn singular(&self) -> &[f64] {
        match self {
            Evaluable::Closed { singular, .. } => singular,
            Evaluable::Grid { .. } => &[],
        }
    }

    /// Pointwise product, kinks and singular points merged.
    pub fn product(&self, other: &Evaluable) -> Evaluable {
        let (a, b) = (self.clone(), other.clone());
        let mut kinks = self.kinks();
        kinks.extend(other.kinks());
        let mut singular = self.singular().to_vec();
        singular.extend_from_slice(other.singular());
        Evaluable::Closed {
            label: format!("({})·({})", self.label(), other.label()),
            f: Arc::new(move |x| crate::extended::mul0(a.value(x), b.value(x))),
            kinks,
            singular,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_interpolates_linearly() {
        let g = Evaluable::grid(vec![0.0, 1.0, 3.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(g.value(0.5), 1.0);
        assert_eq!(g.value(2.0), 1.0);
        assert_eq!(g.value(3.0), 0.0);
    }

    #[test]
    fn grid_coverage_and_singular_points_are_checked() {
        let g = Evaluable::grid(vec![0.1, 0.9], vec![1.0, 1.0]).unwrap();
        assert!(g.covers(0.2, 0.8).is_ok());
        assert!(matches!(g.covers(0.0, 0.8), Err(Error::Grid { .. })));
        assert!(g.value_at_singular(0.5).is_err());
        assert_eq!(Evaluable::constant(2.0).value_at_singular(0.0), Ok(2.0));
    }

    #[test]
    fn malformed_grids_are_rejected() {
        assert!(Evaluable::grid(vec![0.0], vec![1.0]).is_err());
        assert!(Evaluable::grid(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
        assert!(Evaluable::grid(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn product_uses_zero_times_infinity_convention() {
        let a = Evaluable::closed("pole", |x: f64| 1.0 / x).with_singular(&[0.0]);
        let b = Evaluable::closed("id", |x| x).with_kinks(&[0.5]);
        let p = a.product(&b);
        assert_eq!(p.value(0.0), 0.0);
        assert_eq!(p.singular(), &[0.0]);
        assert_eq!(p.kinks(), vec![0.5]);
    }
}
