//! The coupling kernel `V f(x) = ∫ G₁(x, y) f(y) dμ(y)`, its weighted form
//! `W`, the composed Green kernel `H`, and the pure decomposition and
//! classification of biharmonic pairs.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::eval::Evaluable;
use crate::extended::{mul0, ExtendedValue};
use crate::kernel::LineModel;
use crate::quadrature::{integrate_with, Breakpoints};
use crate::riquier::{verify_hyperharmonic, HyperharmonicReport, RegularSubdomain};
use crate::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairFlag {
    Hyperharmonic,
    Superharmonic,
    Harmonic,
    Potential,
    Pure,
}

impl fmt::Display for PairFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairFlag::Hyperharmonic => "hyperharmonic",
            PairFlag::Superharmonic => "superharmonic",
            PairFlag::Harmonic => "harmonic",
            PairFlag::Potential => "potential",
            PairFlag::Pure => "pure",
        };
        f.write_str(s)
    }
}

/// A pair `(u, v)` with the flags established for it so far. Flags come
/// either from [`classify_pair`] or from a constructor that knows a
/// closed-form argument, which is then recorded in `provenance`.
#[derive(Debug, Clone)]
pub struct BiharmonicPair {
    pub u: Evaluable,
    pub v: Evaluable,
    flags: BTreeSet<PairFlag>,
    pub provenance: String,
}

impl BiharmonicPair {
    pub fn new(u: Evaluable, v: Evaluable) -> Self {
        BiharmonicPair {
            u,
            v,
            flags: BTreeSet::new(),
            provenance: String::new(),
        }
    }

    /// A pair known in closed form to be a pure potential, e.g. `(V1, 1)`
    /// when `V1` has an explicit antiderivative.
    pub fn pure_potential(u: Evaluable, v: Evaluable, proof: impl Into<String>) -> Self {
        BiharmonicPair {
            u,
            v,
            flags: [
                PairFlag::Hyperharmonic,
                PairFlag::Superharmonic,
                PairFlag::Potential,
                PairFlag::Pure,
            ]
            .into_iter()
            .collect(),
            provenance: proof.into(),
        }
    }

    pub fn flags(&self) -> &BTreeSet<PairFlag> {
        &self.flags
    }

    pub fn has(&self, flag: PairFlag) -> bool {
        self.flags.contains(&flag)
    }
}

/// `V f(x) = ∫ G₁(x, y) f(y) dμ(y)`. Divergence is a valid result.
pub fn coupling_apply(model: &LineModel, f: &Evaluable, x: f64) -> Result<ExtendedValue> {
    model.check_point(x)?;
    let (lo, hi) = (model.domain.lo, model.domain.hi);
    f.covers(lo, hi)?;
    let integrand = |z: f64| mul0(mul0(model.g1.value(x, z), f.value(z)), model.density(z));
    let mut breaks = Breakpoints {
        kinks: f.kinks(),
        singular: model.singular_points(),
    };
    if model.g1.kink_on_diagonal {
        breaks.kinks.push(x);
    }
    breaks
        .singular
        .extend(f.singular().iter().filter(|s| (lo..=hi).contains(*s)));
    breaks.singular.sort_by(f64::total_cmp);
    breaks.singular.dedup();
    Ok(integrate_with(&integrand, lo, hi, &breaks, &model.quad)?.value)
}

/// `W f = V(q f)` for a strictly positive weight `q`.
pub fn w_apply(model: &LineModel, q: &Evaluable, f: &Evaluable, x: f64) -> Result<ExtendedValue> {
    let (lo, hi) = (model.domain.lo, model.domain.hi);
    q.covers(lo, hi)?;
    for i in 1..64 {
        let t = lo + (hi - lo) * i as f64 / 64.0;
        let qt = q.value(t);
        if !(qt > 0.0) {
            return Err(Error::Precondition(format!("weight q({t}) = {qt} is not positive")));
        }
    }
    coupling_apply(model, &q.product(f), x)
}

/// The column `z ↦ G₂(z, y)` as an evaluable.
pub fn g2_column(model: &LineModel, y: f64) -> Evaluable {
    let g2 = model.g2.clone();
    let mut e = Evaluable::closed(format!("G2(., {y})"), move |z| g2.value(z, y))
        .with_singular(&model.g2.singular_points());
    if model.g2.kink_on_diagonal {
        e = e.with_kinks(&[y]);
    }
    e
}

/// The column `z ↦ G₁(z, y)`.
pub fn g1_column(model: &LineModel, y: f64) -> Evaluable {
    let g1 = model.g1.clone();
    let mut e = Evaluable::closed(format!("G1(., {y})"), move |z| g1.value(z, y))
        .with_singular(&model.g1.singular_points());
    if model.g1.kink_on_diagonal {
        e = e.with_kinks(&[y]);
    }
    e
}

/// `H(x, y) = ∫ G₁(x, z) G₂(z, y) dμ(z)`, i.e. `V` applied to the column
/// `G₂(·, y)`.
pub fn compose_green(model: &LineModel, x: f64, y: f64) -> Result<ExtendedValue> {
    model.check_point(y)?;
    coupling_apply(model, &g2_column(model, y), x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub grid: Vec<f64>,
    /// `V v` on the grid.
    pub u0: Vec<f64>,
    /// `u - V v` on the grid.
    pub u1: Vec<f64>,
    /// Three-point windows on which the `L₁` mean-value inequality for `u1`
    /// was checked.
    pub windows_checked: usize,
}

/// Splits `u = u0 + u1` with `u0 = V v` and checks that the remainder is a
/// nonnegative `L₁`-superharmonic function on the grid.
pub fn pure_decompose(model: &LineModel, pair: &BiharmonicPair, grid: &[f64]) -> Result<Decomposition> {
    let tol = Tolerances::default().identity;
    let mut u0 = Vec::with_capacity(grid.len());
    let mut u1 = Vec::with_capacity(grid.len());
    for &x in grid {
        let coupled = coupling_apply(model, &pair.v, x)?;
        let u = pair.u.value(x);
        if coupled.is_infinite() && u.is_finite() {
            return Err(Error::Classification(format!(
                "V v is +∞ at {x} while u({x}) = {u}"
            )));
        }
        let c = coupled.value();
        let r = if u.is_infinite() { f64::INFINITY } else { u - c };
        if r < -tol {
            return Err(Error::Classification(format!(
                "u - V v = {r:e} < 0 at x = {x}"
            )));
        }
        u0.push(c);
        u1.push(r);
    }

    let mut windows_checked = 0;
    for i in 1..grid.len().saturating_sub(1) {
        let (a, x, b) = (grid[i - 1], grid[i], grid[i + 1]);
        if !(u1[i - 1].is_finite() && u1[i + 1].is_finite()) {
            continue;
        }
        let Ok(c) = model.basis1.cardinals(a, b) else {
            continue;
        };
        let mean = c.interpolate([u1[i - 1], u1[i + 1]], x);
        if u1[i] < mean - tol {
            return Err(Error::Classification(format!(
                "u - V v fails the L1 mean-value inequality on [{a}, {b}] at {x}: {} < {mean}",
                u1[i]
            )));
        }
        windows_checked += 1;
    }
    Ok(Decomposition {
        grid: grid.to_vec(),
        u0,
        u1,
        windows_checked,
    })
}

#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub flags: BTreeSet<PairFlag>,
    pub probes: HyperharmonicReport,
    /// Human-readable descriptions of violated probes.
    pub violations: Vec<String>,
    /// `max |u - V v|` on the grid when the decomposition succeeded.
    pub remainder_sup: Option<f64>,
}

/// Classifies a pair from inequality probes on the given subintervals, plus
/// the pure decomposition on `grid`. `Potential` is carried over only from
/// the pair's constructor provenance.
pub fn classify_pair(
    model: &LineModel,
    pair: &BiharmonicPair,
    grid: &[f64],
    subintervals: &[(f64, f64)],
) -> Result<ClassifyReport> {
    let tol = Tolerances::default().identity;
    let mut probes = Vec::new();
    for &(a, b) in subintervals {
        let omega = RegularSubdomain::new(model, a, b)?;
        let inside: Vec<f64> = grid.iter().copied().filter(|&x| x > a && x < b).collect();
        if inside.is_empty() {
            probes.push((omega, 0.5 * (a + b)));
        } else {
            probes.extend(inside.into_iter().map(|x| (omega, x)));
        }
    }
    let report = verify_hyperharmonic(model, pair, &probes)?;

    let mut flags = BTreeSet::new();
    let mut violations = Vec::new();
    for p in &report.probes {
        if p.first < -tol || p.second < -tol {
            violations.push(format!(
                "[{}, {}] at {}: margins {:e}, {:e}",
                p.a, p.b, p.x, p.first, p.second
            ));
        }
    }
    let hyper = violations.is_empty();
    if hyper {
        flags.insert(PairFlag::Hyperharmonic);
        if report
            .probes
            .iter()
            .all(|p| p.first.abs() <= tol && p.second.abs() <= tol)
        {
            flags.insert(PairFlag::Harmonic);
        }
    }
    let finite = grid
        .iter()
        .all(|&x| pair.u.value(x).is_finite() && pair.v.value(x).is_finite());
    let mut remainder_sup = None;
    if hyper && finite {
        flags.insert(PairFlag::Superharmonic);
        if let Ok(d) = pure_decompose(model, pair, grid) {
            let sup = d.u1.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            remainder_sup = Some(sup);
            if sup <= tol {
                flags.insert(PairFlag::Pure);
            }
        }
    }
    for f in [PairFlag::Potential, PairFlag::Pure] {
        if pair.has(f) && hyper {
            flags.insert(f);
        }
    }
    Ok(ClassifyReport {
        flags,
        probes: report,
        violations,
        remainder_sup,
    })
}
