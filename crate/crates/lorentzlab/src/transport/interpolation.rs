//! `t`-intermediate point measures built from an optimal coupling.

use super::lq::{lq_distance, LqStatus};
use super::measure::{Coupling, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::extended::ExtendedTime;
use crate::spacetime::DiscreteSpacetime;

/// `|ℓ(x,z) − tℓ(x,y)| + |ℓ(z,y) − (1−t)ℓ(x,y)|`, or `+∞` if `z ∉ J(x, y)`.
pub fn intermediate_error(space: &DiscreteSpacetime, x: usize, z: usize, y: usize, t: f64) -> f64 {
    let (a, b, c) = (space.ell(x, z), space.ell(z, y), space.ell(x, y));
    match (a.finite_value(), b.finite_value(), c.finite_value()) {
        (Some(a), Some(b), Some(c)) => (a - t * c).abs() + (b - (1.0 - t) * c).abs(),
        _ => f64::INFINITY,
    }
}

/// Best available `t`-intermediate point of `(x, y)` and its defect.
///
/// Grid spacetimes use the lattice point nearest to the affine interpolant
/// (falling back to a search when that cell is not between `x` and `y`);
/// other spacetimes are searched exhaustively over `J(x, y)`.
pub fn intermediate_point(space: &DiscreteSpacetime, x: usize, y: usize, t: f64) -> Result<(usize, f64)> {
    space.check_point(x)?;
    space.check_point(y)?;
    if !space.leq(x, y) {
        return Err(Error::Precondition(format!("points {x} and {y} are not causally related")));
    }
    if t == 0.0 {
        return Ok((x, 0.0));
    }
    if t == 1.0 {
        return Ok((y, 0.0));
    }
    if let (Some(g), Some(cx), Some(cy)) = (space.grid(), space.coords(x), space.coords(y)) {
        let p: Vec<f64> = cx.iter().zip(cy).map(|(a, b)| a + t * (b - a)).collect();
        if let Some(z) = g.nearest(&p) {
            let e = intermediate_error(space, x, z, y, t);
            if e.is_finite() {
                return Ok((z, e));
            }
        }
    }
    let mut best = (x, f64::INFINITY);
    for z in 0..space.len() {
        let e = intermediate_error(space, x, z, y, t);
        if e < best.1 {
            best = (z, e);
        }
    }
    if !best.1.is_finite() {
        return Err(Error::Precondition(format!(
            "no point between {x} and {y} has finite separations; refine the grid"
        )));
    }
    Ok(best)
}

#[derive(Clone, Debug)]
pub struct IntermediateResult {
    pub xi: DiscreteMeasure,
    /// Coupling of `μ` and `ξ`.
    pub first: Coupling,
    /// Coupling of `ξ` and `ν`.
    pub second: Coupling,
    /// Glued triples `(x, z, y, mass)`.
    pub triples: Vec<(usize, usize, usize, f64)>,
    /// Largest intermediate-point defect over the charged triples.
    pub snapping_error: f64,
    pub lq: ExtendedTime,
}

/// Moves every pair of an optimal `(μ, ν)` coupling to a `t`-intermediate point.
///
/// `tol` caps the admissible snapping error; pairs beyond it are reported as a
/// precondition failure.
pub fn intermediate_measure(
    space: &DiscreteSpacetime,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    t: f64,
    q: f64,
    tol: f64,
) -> Result<IntermediateResult> {
    let lq = lq_distance(space, mu, nu, q)?;
    let v = lq.value.finite_value().filter(|&v| v > 0.0);
    if v.is_none() || lq.status != LqStatus::Optimal {
        return Err(Error::Precondition(format!("ℓ_q(μ, ν) = {} is not a positive finite value", lq.value)));
    }
    interpolate_coupling(space, &lq.coupling, t, tol).map(|mut r| {
        r.lq = lq.value;
        r
    })
}

/// Intermediate measure along a given coupling.
pub fn interpolate_coupling(space: &DiscreteSpacetime, pi: &Coupling, t: f64, tol: f64) -> Result<IntermediateResult> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("interpolation time must lie in [0, 1], got {t}")));
    }
    let n = space.len();
    let mut w = vec![0.0; n];
    let mut triples = Vec::with_capacity(pi.entries.len());
    let mut worst = 0.0f64;
    for &(x, y, m) in &pi.entries {
        let (z, e) = intermediate_point(space, x, y, t)?;
        if e > tol {
            return Err(Error::Precondition(format!(
                "pair ({x}, {y}) has no {t}-intermediate point within {tol} (best defect {e:.3e}); refine the grid"
            )));
        }
        worst = worst.max(e);
        w[z] += m;
        triples.push((x, z, y, m));
    }
    let xi = DiscreteMeasure::new(w).or_else(|_| {
        DiscreteMeasure::normalized(triples.iter().fold(vec![0.0; n], |mut acc, &(_, z, _, m)| {
            acc[z] += m;
            acc
        }))
    })?;
    let first = Coupling { entries: triples.iter().map(|&(x, z, _, m)| (x, z, m)).collect() };
    let second = Coupling { entries: triples.iter().map(|&(_, z, y, m)| (z, y, m)).collect() };
    Ok(IntermediateResult { xi, first, second, triples, snapping_error: worst, lq: ExtendedTime::NEG_INF })
}

/// Intermediate measures at `t = k/2^depth`, all built from one optimal coupling.
pub fn dyadic_interpolation(
    space: &DiscreteSpacetime,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    q: f64,
    depth: u32,
    tol: f64,
) -> Result<Vec<(f64, DiscreteMeasure)>> {
    let lq = lq_distance(space, mu, nu, q)?;
    if lq.status != LqStatus::Optimal || !lq.value.is_chronological() {
        return Err(Error::Precondition(format!("ℓ_q(μ, ν) = {} is not a positive finite value", lq.value)));
    }
    let steps = 1usize << depth;
    let mut out = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let m = match k {
            0 => mu.clone(),
            k if k == steps => nu.clone(),
            _ => interpolate_coupling(space, &lq.coupling, t, tol)?.xi,
        };
        out.push((t, m));
    }
    Ok(out)
}
