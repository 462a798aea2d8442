//! Causal functions on discrete spacetimes: order checks, slopes, steepness,
//! McShane extensions and the duality formula for `ℓ`.

use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::spacetime::DiscreteSpacetime;

fn check_len(space: &DiscreteSpacetime, f: &[ExtReal]) -> Result<()> {
    if f.len() != space.len() {
        return Err(Error::Dimension(format!("function has {} values, spacetime has {} points", f.len(), space.len())));
    }
    Ok(())
}

/// All causal pairs `x ≤ y` with `f(x) > f(y)`.
pub fn causality_check(space: &DiscreteSpacetime, f: &[ExtReal]) -> Result<Vec<(usize, usize)>> {
    steepness_check(space, f, 0.0, None)
}

/// Pairs `x ≤ y` within `region` (all points if `None`) violating
/// `f(y) − f(x) ≥ L ℓ(x, y)` under the extended-real conventions.
pub fn steepness_check(space: &DiscreteSpacetime, f: &[ExtReal], l: f64, region: Option<&[usize]>) -> Result<Vec<(usize, usize)>> {
    check_len(space, f)?;
    if !(l >= 0.0 && l.is_finite()) {
        return Err(Error::Parameter(format!("steepness constant must be finite and nonnegative, got {l}")));
    }
    let all: Vec<usize>;
    let pts = match region {
        Some(r) => {
            for &p in r {
                space.check_point(p)?;
            }
            r
        }
        None => {
            all = (0..space.len()).collect();
            &all
        }
    };
    let mut out = Vec::new();
    for &x in pts {
        for &y in pts {
            if !space.leq(x, y) {
                continue;
            }
            let rise = f[y] - f[x];
            if rise < space.ell(x, y).value().scale(l) {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

pub fn is_steep(space: &DiscreteSpacetime, f: &[ExtReal], l: f64) -> Result<bool> {
    Ok(steepness_check(space, f, l, None)?.is_empty())
}

/// Forward and backward slopes at one competitor-count level.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeLevel {
    /// Number of nearest chronological competitors used (`None`: all of them).
    pub neighbours: Option<usize>,
    pub fwd: Vec<f64>,
    pub bwd: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeField {
    /// Values at the finest level of the schedule.
    pub fwd: Vec<f64>,
    pub bwd: Vec<f64>,
    pub st: Vec<f64>,
    pub levels: Vec<SlopeLevel>,
}

/// The default competitor schedule on grids.
pub const SLOPE_SCHEDULE: [usize; 3] = [4, 8, 16];

/// `|∂^f f|(x) = inf (f(y) − f(x))/ℓ(x,y)` over chronological successors `y`, and
/// the backward analogue over predecessors. On spacetimes with coordinates the
/// infimum runs over the `k` Euclidean-nearest competitors for each `k` of the
/// schedule (the last level is reported); without coordinates all competitors
/// are used. `inf ∅ = +∞`.
pub fn slopes(space: &DiscreteSpacetime, f: &[ExtReal], schedule: &[usize]) -> Result<SlopeField> {
    check_len(space, f)?;
    let n = space.len();
    let use_knn = space.has_coords() && !schedule.is_empty();
    let ks: Vec<Option<usize>> = if use_knn { schedule.iter().map(|&k| Some(k)).collect() } else { vec![None] };
    let mut levels: Vec<SlopeLevel> =
        ks.iter().map(|&k| SlopeLevel { neighbours: k, fwd: vec![f64::INFINITY; n], bwd: vec![f64::INFINITY; n] }).collect();
    let kmax = ks.iter().map(|k| k.unwrap_or(usize::MAX)).max().unwrap();
    for x in 0..n {
        let Some(fx) = f[x].finite() else { continue };
        for forward in [true, false] {
            let mut cands: Vec<(f64, f64)> = Vec::new(); // (distance, quotient)
            for y in 0..n {
                if y == x {
                    continue;
                }
                let l = if forward { space.ell(x, y) } else { space.ell(y, x) };
                if !l.is_chronological() {
                    continue;
                }
                let Some(fy) = f[y].finite() else { continue };
                let rise = if forward { fy - fx } else { fx - fy };
                let quot = match l.finite_value() {
                    Some(v) => rise / v,
                    None => 0.0,
                };
                let dist = match (space.coords(x), space.coords(y)) {
                    (Some(a), Some(b)) if use_knn => a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>(),
                    _ => 0.0,
                };
                cands.push((dist, quot));
            }
            if use_knn {
                let take = kmax.min(cands.len());
                if take < cands.len() {
                    cands.select_nth_unstable_by(take, |a, b| a.0.total_cmp(&b.0));
                    cands.truncate(take);
                }
                cands.sort_by(|a, b| a.0.total_cmp(&b.0));
            }
            for (lev, k) in levels.iter_mut().zip(&ks) {
                let upto = k.unwrap_or(usize::MAX).min(cands.len());
                let v = cands[..upto].iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
                if forward {
                    lev.fwd[x] = v;
                } else {
                    lev.bwd[x] = v;
                }
            }
        }
    }
    let last = levels.last().unwrap();
    let st = last.fwd.iter().zip(&last.bwd).map(|(a, b)| a.min(*b)).collect();
    Ok(SlopeField { fwd: last.fwd.clone(), bwd: last.bwd.clone(), st, levels })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionMode {
    /// `f_∧(y) = sup{f(x) + Lℓ(x,y) : x ∈ W, x ≤ y}`.
    Lower,
    /// `f_∨(y) = inf{f(z) − Lℓ(y,z) : z ∈ W, y ≤ z}`.
    Upper,
}

/// Extremal `L`-steep extension of `f` given on `W = {i : f[i] is Some}`.
pub fn mcshane_extend(space: &DiscreteSpacetime, f: &[Option<ExtReal>], l: f64, mode: ExtensionMode) -> Result<Vec<ExtReal>> {
    if f.len() != space.len() {
        return Err(Error::Dimension(format!("partial function has {} slots, spacetime has {} points", f.len(), space.len())));
    }
    if let Some(i) = (0..space.len()).find(|&i| space.ell(i, i) != crate::ExtendedTime::ZERO) {
        return Err(Error::Precondition(format!("ℓ does not vanish on the diagonal at point {i}")));
    }
    let w: Vec<usize> = (0..f.len()).filter(|&i| f[i].is_some()).collect();
    let vals: Vec<ExtReal> = (0..f.len()).map(|i| f[i].unwrap_or(ExtReal::NegInf)).collect();
    if let Some(&(x, y)) = steepness_check(space, &vals, l, Some(&w))?.first() {
        return Err(Error::Precondition(format!("input is not {l}-steep on its domain: pair ({x}, {y})")));
    }
    let mut out = Vec::with_capacity(space.len());
    for y in 0..space.len() {
        if let Some(v) = f[y] {
            out.push(v);
            continue;
        }
        let v = match mode {
            ExtensionMode::Lower => w
                .iter()
                .filter(|&&x| space.leq(x, y) && vals[x] > ExtReal::NegInf)
                .map(|&x| vals[x] + space.ell(x, y).value().scale(l))
                .fold(ExtReal::NegInf, ExtReal::max),
            ExtensionMode::Upper => w
                .iter()
                .filter(|&&z| space.leq(y, z) && vals[z] < ExtReal::PosInf)
                .map(|&z| vals[z] - space.ell(y, z).value().scale(l))
                .fold(ExtReal::PosInf, ExtReal::min),
        };
        out.push(v);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityFormula {
    pub ell: ExtReal,
    /// `inf_f f(y) − f(x)` over the candidates.
    pub inf: ExtReal,
    /// Index of the candidate attaining the infimum.
    pub argmin: Option<usize>,
    /// Candidates that fail to be 1-steep (the slope surrogate), by index.
    pub not_steep: Vec<usize>,
}

/// Evaluates `inf{f(y) − f(x)}` over causal candidates for comparison with `ℓ(x, y)`.
pub fn duality_formula_check(space: &DiscreteSpacetime, x: usize, y: usize, candidates: &[Vec<ExtReal>]) -> Result<DualityFormula> {
    space.check_point(x)?;
    space.check_point(y)?;
    let mut inf = ExtReal::PosInf;
    let mut argmin = None;
    let mut not_steep = Vec::new();
    for (k, f) in candidates.iter().enumerate() {
        if let Some(&(a, b)) = causality_check(space, f)?.first() {
            return Err(Error::Precondition(format!("candidate {k} is not causal: f({a}) > f({b})")));
        }
        if !is_steep(space, f, 1.0)? {
            not_steep.push(k);
        }
        let v = f[y] - f[x];
        if argmin.is_none() || v < inf {
            inf = v;
            argmin = Some(k);
        }
    }
    Ok(DualityFormula { ell: space.ell(x, y).value(), inf, argmin, not_steep })
}

/// `ℓ(x, ·)` as a partial function on `{x}`, extended by the lower McShane formula.
pub fn distance_extension(space: &DiscreteSpacetime, x: usize) -> Result<Vec<ExtReal>> {
    space.check_point(x)?;
    let mut f = vec![None; space.len()];
    f[x] = Some(ExtReal::ZERO);
    mcshane_extend(space, &f, 1.0, ExtensionMode::Lower)
}
