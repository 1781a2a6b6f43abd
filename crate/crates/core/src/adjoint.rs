//! Adjoint coupling `V* φ(x) = ∫ G₂(z, x) φ(z) dμ(z)` and the checks built on
//! it: finiteness and continuity of `V*φ` for compactly supported `φ`, the
//! two routes to `H`, sampled continuity and lower semicontinuity of `H`,
//! and the duality pairing.

use crate::coupling::{compose_green, coupling_apply, g1_column};
use crate::error::{Error, Result};
use crate::eval::Evaluable;
use crate::extended::{mul0, ExtendedValue};
use crate::kernel::LineModel;
use crate::quadrature::{integrate_with, Breakpoints, DivergenceCertificate};
use crate::Tolerances;

pub fn adjoint_apply(model: &LineModel, phi: &Evaluable, x: f64) -> Result<ExtendedValue> {
    model.check_point(x)?;
    let (lo, hi) = (model.domain.lo, model.domain.hi);
    phi.covers(lo, hi)?;
    let integrand = |z: f64| mul0(mul0(model.g2.value(z, x), phi.value(z)), model.density(z));
    let mut breaks = Breakpoints {
        kinks: phi.kinks(),
        singular: model.singular_points(),
    };
    if model.g2.kink_on_diagonal {
        breaks.kinks.push(x);
    }
    breaks
        .singular
        .extend(phi.singular().iter().filter(|s| (lo..=hi).contains(*s)));
    breaks.singular.sort_by(f64::total_cmp);
    breaks.singular.dedup();
    Ok(integrate_with(&integrand, lo, hi, &breaks, &model.quad)?.value)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Condition63Verdict {
    /// Finite on the grid and the refinement test found no jump.
    Pass,
    /// `V*φ(witness) = +∞`.
    Infinite {
        witness: f64,
        certificate: DivergenceCertificate,
    },
    /// Finite but the modulus of continuity did not shrink under refinement.
    Discontinuous { near: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Condition63Report {
    pub verdict: Condition63Verdict,
    pub values: Vec<(f64, ExtendedValue)>,
    /// Largest neighbour difference on the grid and on its midpoint
    /// refinement.
    pub moduli: [f64; 2],
}

impl Condition63Report {
    pub fn passed(&self) -> bool {
        self.verdict == Condition63Verdict::Pass
    }
}

/// Checks that `V*φ` is finite and continuous on `grid` for nonnegative `φ`
/// supported in `support`. Continuity is judged by halving the grid: the
/// largest neighbour difference must shrink to at most three quarters.
pub fn condition63_check(
    model: &LineModel,
    phi: &Evaluable,
    support: (f64, f64),
    grid: &[f64],
) -> Result<Condition63Report> {
    let (a, b) = support;
    if !(a < b) || !model.domain.contains(a) || !(model.domain.contains(b) || b == model.domain.hi)
    {
        return Err(Error::Precondition(format!(
            "support [{a}, {b}] is not a compact part of {}",
            model.domain
        )));
    }
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("condition grid must increase strictly".into()));
    }
    for k in 0..=64 {
        let t = a + (b - a) * k as f64 / 64.0;
        if phi.value(t) < 0.0 {
            return Err(Error::Precondition(format!("φ({t}) < 0")));
        }
    }
    let restricted = phi
        .product(&Evaluable::closed("1_[a,b]", move |z| {
            if (a..=b).contains(&z) {
                1.0
            } else {
                0.0
            }
        }))
        .with_kinks(&[a, b]);

    let mut values = Vec::with_capacity(grid.len());
    for &x in grid {
        let v = adjoint_apply(model, &restricted, x)?;
        if let ExtendedValue::Infinite(c) = &v {
            let certificate = (**c).clone();
            values.push((x, v));
            return Ok(Condition63Report {
                verdict: Condition63Verdict::Infinite {
                    witness: x,
                    certificate,
                },
                values,
                moduli: [f64::NAN; 2],
            });
        }
        values.push((x, v));
    }

    let mut coarse = 0.0f64;
    let mut fine = 0.0f64;
    let mut worst = grid[0];
    for (i, w) in values.windows(2).enumerate() {
        let (x0, v0) = (w[0].0, w[0].1.value());
        let (x1, v1) = (w[1].0, w[1].1.value());
        let mid = 0.5 * (x0 + x1);
        let vm = adjoint_apply(model, &restricted, mid)?.value();
        let c = (v1 - v0).abs();
        let f = (vm - v0).abs().max((v1 - vm).abs());
        coarse = coarse.max(c);
        if f > fine {
            fine = f;
            worst = grid[i];
        }
    }
    let tol = Tolerances::default().identity;
    let verdict = if fine <= 0.75 * coarse + tol {
        Condition63Verdict::Pass
    } else {
        Condition63Verdict::Discontinuous { near: worst }
    };
    Ok(Condition63Report {
        verdict,
        values,
        moduli: [coarse, fine],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Eq61Outcome {
    Finite {
        /// `∫ G₂(z, x) G₁(y, z) dμ(z)`, i.e. `V*` of the column `G₁(y, ·)`.
        adjoint_route: f64,
        /// `H(y, x)`.
        compose_route: f64,
        residual: f64,
    },
    /// Both routes diverge.
    ConsistentDivergence,
    /// Exactly one route diverges.
    MixedDivergence { adjoint_infinite: bool },
}

/// `V*(G₁(y, ·))(x)` against `H(y, x)`: two different integrations of the
/// same quantity. The column is handed to `V*` without its kink so that the
/// adjoint route splits the domain only at `x`.
pub fn eq61_residual(model: &LineModel, x: f64, y: f64) -> Result<Eq61Outcome> {
    model.check_point(y)?;
    let g1 = model.g1.clone();
    let column = Evaluable::closed(format!("G1({y}, .)"), move |z| g1.value(y, z))
        .with_singular(&model.g1.singular_points());
    let adjoint = adjoint_apply(model, &column, x)?;
    let composed = compose_green(model, y, x)?;
    Ok(match (adjoint.is_infinite(), composed.is_infinite()) {
        (true, true) => Eq61Outcome::ConsistentDivergence,
        (false, false) => {
            let (a, c) = (adjoint.value(), composed.value());
            Eq61Outcome::Finite {
                adjoint_route: a,
                compose_route: c,
                residual: (a - c).abs(),
            }
        }
        (adjoint_infinite, _) => Eq61Outcome::MixedDivergence { adjoint_infinite },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityVerdict {
    Consistent,
    Violated,
    /// The target value is `+∞` and the approach values grow towards it.
    BoundaryBlowUp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub x: f64,
    pub target: f64,
    pub target_value: f64,
    /// `y_k = target + δ₀ 2^{-k}` (or minus, near the upper endpoint).
    pub approach: Vec<f64>,
    pub values: Vec<f64>,
    /// `|H(x, y_k) - H(x, target)|` for a finite target.
    pub oscillation: Vec<f64>,
    pub verdict: ContinuityVerdict,
}

/// Samples `y ↦ H(x, y)` along a dyadic approach to `target`. A finite target
/// is consistent with continuity when the oscillations are nonincreasing
/// (within the identity tolerance) over the second half of the approach and
/// end below `max(tol, max_k o_k · 2^{-depth/2})`; a jump leaves the last
/// oscillation at the jump size.
pub fn continuity_probe(model: &LineModel, x: f64, target: f64, depth: usize) -> Result<ContinuityReport> {
    model.check_point(x)?;
    model.check_point(target)?;
    if depth < 2 {
        return Err(Error::Precondition("continuity probe needs depth ≥ 2".into()));
    }
    let tol = Tolerances::default().identity;
    let (lo, hi) = (model.domain.lo, model.domain.hi);
    let room_up = hi - target;
    let (sign, mut delta0) = if room_up >= target - lo {
        (1.0, 0.25 * room_up)
    } else {
        (-1.0, 0.25 * (target - lo))
    };
    // Keep the window clear of the kink of H(x, ·) at y = x, so the
    // oscillation decays from the first sample on.
    if x != target && (x - target).signum() == sign {
        delta0 = delta0.min(0.5 * (x - target).abs());
    }
    let approach: Vec<f64> = (0..depth)
        .map(|k| target + sign * delta0 * 0.5f64.powi(k as i32))
        .collect();
    let values = approach
        .iter()
        .map(|&y| compose_green(model, x, y).map(|v| v.value()))
        .collect::<Result<Vec<_>>>()?;
    let target_value = compose_green(model, x, target)?.value();

    if target_value.is_infinite() {
        let growing = values.windows(2).all(|w| w[1] >= w[0] - tol)
            && values[depth - 1] > values[0] + tol;
        return Ok(ContinuityReport {
            x,
            target,
            target_value,
            approach,
            values,
            oscillation: Vec::new(),
            verdict: if growing {
                ContinuityVerdict::BoundaryBlowUp
            } else {
                ContinuityVerdict::Violated
            },
        });
    }

    let oscillation: Vec<f64> = values.iter().map(|v| (v - target_value).abs()).collect();
    let monotone = oscillation[depth / 2..]
        .windows(2)
        .all(|w| w[1] <= w[0] + tol);
    let scale = oscillation.iter().copied().fold(0.0, f64::max);
    let bound = tol.max(scale * 0.5f64.powf(depth as f64 / 2.0));
    let verdict = if monotone && oscillation[depth - 1] <= bound {
        ContinuityVerdict::Consistent
    } else {
        ContinuityVerdict::Violated
    };
    Ok(ContinuityReport {
        x,
        target,
        target_value,
        approach,
        values,
        oscillation,
        verdict,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LscNode {
    pub x: f64,
    pub y: f64,
    pub value: f64,
    /// Smallest extrapolated directional limit.
    pub liminf: f64,
    pub passed: bool,
}

const DIRECTIONS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (1.0, 1.0),
    (1.0, -1.0),
    (-1.0, 1.0),
    (-1.0, -1.0),
];

/// Lower semicontinuity of `H` at interior nodes `(x, y)` of a uniform grid
/// with `n` nodes per axis. In each of eight directions the values at the
/// two deepest dyadic offsets `h 2^{-depth}`, `h 2^{-depth+1}` are
/// extrapolated linearly to offset `0`; a node passes when its value does
/// not exceed the smallest of these limits by more than the identity
/// tolerance, scaled by `max(1, |H|)`.
pub fn lsc_probe(model: &LineModel, n: usize, depth: i32) -> Result<Vec<LscNode>> {
    let tol = Tolerances::default().identity;
    let (lo, hi) = (model.domain.lo, model.domain.hi);
    let h = (hi - lo) / (n + 1) as f64;
    let node = |i: usize| lo + h * (i + 1) as f64;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (node(i), node(j));
            let value = compose_green(model, x, y)?.value();
            let mut liminf = f64::INFINITY;
            for (dx, dy) in DIRECTIONS {
                let at = |k: i32| {
                    let t = h * 0.5f64.powi(k);
                    compose_green(model, x + dx * t, y + dy * t).map(|v| v.value())
                };
                let near = at(depth)?;
                let far = at(depth - 1)?;
                liminf = liminf.min(2.0 * near - far);
            }
            out.push(LscNode {
                x,
                y,
                value,
                liminf,
                passed: value <= liminf + tol * value.abs().max(1.0),
            });
        }
    }
    Ok(out)
}

/// `|⟨ψ, Vφ⟩ - ⟨φ, V*ψ⟩|` with `⟨f, g⟩ = ∫ f g dμ`. Both sides integrate
/// `G₁`-against-`G₂` data, so the identity needs `G₁ = G₂ᵀ`; it is offered
/// only on models where the two kernels coincide.
pub fn duality_defect(model: &LineModel, phi: &Evaluable, psi: &Evaluable) -> Result<f64> {
    let sym = (0..8).all(|i| {
        let (x, y) = (0.1 + 0.1 * i as f64, 0.85 - 0.09 * i as f64);
        model.g1.value(x, y) == model.g2.value(y, x)
    });
    if !sym {
        return Err(Error::AdjointUnavailable(format!(
            "G1 and the transpose of G2 differ on the {} model",
            model.id
        )));
    }
    let (lo, hi) = (model.domain.lo, model.domain.hi);
    let cfg = model.quad;
    let pairing = |outer: &Evaluable, inner: &dyn Fn(f64) -> Result<ExtendedValue>| -> Result<f64> {
        let failure = std::cell::RefCell::new(None);
        let f = |z: f64| {
            let v = inner(z).map(|v| v.value()).unwrap_or_else(|e| {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            });
            outer.value(z) * v * model.density(z)
        };
        let r = crate::quadrature::integrate_signed(&f, lo, hi, &outer.kinks(), &cfg);
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(r?.0)
    };
    let left = pairing(psi, &|z| coupling_apply(model, phi, z))?;
    let right = pairing(phi, &|z| adjoint_apply(model, psi, z))?;
    Ok((left - right).abs())
}

/// `V*` applied to the column `G₁(·, y)`; exposed for comparisons with the
/// transposed model.
pub fn adjoint_of_g1_column(model: &LineModel, y: f64, x: f64) -> Result<ExtendedValue> {
    adjoint_apply(model, &g1_column(model, y), x)
}
