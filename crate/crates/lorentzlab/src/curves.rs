//! Sampled causal paths: causal speed, `q`-actions, `ℓ`-length and the
//! geodesic characterizations.
//!
//! Along a path with samples `γ_{t_0}, …, γ_{t_n}` write `T(i, j) = ℓ(γ_{t_i}, γ_{t_j})`.
//! The partition sums `Σ T^q / (q Δ^{q−1})` decrease under refinement, so the
//! infimum over dyadic refinements of the sample grid is attained at the
//! finest level; every level is still reported.

use crate::error::{Error, Result};
use crate::extended::{ExtReal, ExtendedTime};
use crate::norms::HyperbolicNorm;
use crate::spacetime::DiscreteSpacetime;
use crate::transport::lq::check_exponent;

#[derive(Clone, Debug, PartialEq)]
pub enum PathPoints {
    /// Point indices of a spacetime.
    Indices(Vec<usize>),
    /// Coordinates in a normed model space.
    Coords(Vec<Vec<f64>>),
}

/// Time-stamped samples `γ_{t_i}` with `0 = t_0 < … < t_n = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCausalPath {
    times: Vec<f64>,
    points: PathPoints,
}

fn check_times(times: &[f64], len: usize) -> Result<()> {
    if times.len() != len {
        return Err(Error::Dimension(format!("{} times for {len} samples", times.len())));
    }
    if len < 2 {
        return Err(Error::Precondition("a path needs at least two samples".into()));
    }
    if times[0] != 0.0 || times[len - 1] != 1.0 {
        return Err(Error::Precondition(format!("path times must run from 0 to 1, got [{}, {}]", times[0], times[len - 1])));
    }
    if let Some(w) = times.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition(format!("path times are not strictly increasing at sample {}", w + 1)));
    }
    Ok(())
}

impl SampledCausalPath {
    pub fn from_indices(times: Vec<f64>, points: Vec<usize>) -> Result<Self> {
        check_times(&times, points.len())?;
        Ok(SampledCausalPath { times, points: PathPoints::Indices(points) })
    }

    pub fn from_coords(times: Vec<f64>, coords: Vec<Vec<f64>>) -> Result<Self> {
        check_times(&times, coords.len())?;
        let d = coords[0].len();
        if coords.iter().any(|c| c.len() != d) {
            return Err(Error::Dimension("path coordinates have inconsistent dimension".into()));
        }
        Ok(SampledCausalPath { times, points: PathPoints::Coords(coords) })
    }

    /// `γ(t_i)` for `t_i = i / steps`.
    pub fn sample_curve(curve: impl Fn(f64) -> Vec<f64>, steps: usize) -> Result<Self> {
        let times: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
        let coords = times.iter().map(|&t| curve(t)).collect();
        Self::from_coords(times, coords)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &PathPoints {
        &self.points
    }

    pub fn indices(&self) -> Option<&[usize]> {
        match &self.points {
            PathPoints::Indices(p) => Some(p),
            PathPoints::Coords(_) => None,
        }
    }

    /// Same samples with new time stamps.
    pub fn retimed(&self, times: Vec<f64>) -> Result<Self> {
        check_times(&times, self.len())?;
        Ok(SampledCausalPath { times, points: self.points.clone() })
    }

    /// Binds the path to the spacetime that evaluates `ℓ` between its samples.
    pub fn on<'a>(&'a self, space: &'a DiscreteSpacetime) -> Result<BoundPath<'a>> {
        match &self.points {
            PathPoints::Indices(p) => {
                for &i in p {
                    space.check_point(i)?;
                }
                Ok(BoundPath { path: self, space, norm: None })
            }
            PathPoints::Coords(c) => {
                let norm = space.norm().ok_or_else(|| Error::Unsupported("coordinate paths need a normed model space".into()))?;
                if c[0].len() != norm.dim() {
                    return Err(Error::Dimension(format!("path in dimension {}, space has {}", c[0].len(), norm.dim())));
                }
                Ok(BoundPath { path: self, space, norm: Some(norm) })
            }
        }
    }
}

/// A path together with its ambient spacetime.
#[derive(Clone, Copy)]
pub struct BoundPath<'a> {
    path: &'a SampledCausalPath,
    space: &'a DiscreteSpacetime,
    norm: Option<&'a HyperbolicNorm>,
}

impl<'a> BoundPath<'a> {
    pub fn path(&self) -> &SampledCausalPath {
        self.path
    }

    pub fn samples(&self) -> usize {
        self.path.len()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.path.times[i]
    }

    /// `T(i, j) = ℓ(γ_{t_i}, γ_{t_j})`.
    pub fn sep(&self, i: usize, j: usize) -> ExtendedTime {
        match (&self.path.points, self.norm) {
            (PathPoints::Indices(p), _) => self.space.ell(p[i], p[j]),
            (PathPoints::Coords(c), Some(n)) => {
                let d = c[i].len();
                let mut buf = [0.0f64; 8];
                if d <= 8 {
                    for k in 0..d {
                        buf[k] = c[j][k] - c[i][k];
                    }
                    n.eval_unchecked(&buf[..d])
                } else {
                    let v: Vec<f64> = c[j].iter().zip(&c[i]).map(|(a, b)| a - b).collect();
                    n.eval_unchecked(&v)
                }
            }
            (PathPoints::Coords(_), None) => unreachable!("bound coordinate paths carry a norm"),
        }
    }

    /// First consecutive pair of samples with `γ_{t_i} ≰ γ_{t_{i+1}}`; by
    /// transitivity of `≤` this decides monotonicity of the whole path.
    pub fn monotonicity_witness(&self) -> Option<(usize, usize)> {
        (0..self.samples() - 1).find(|&i| !self.sep(i, i + 1).is_causal()).map(|i| (i, i + 1))
    }

    fn require_monotone(&self) -> Result<()> {
        if let Some((i, j)) = self.monotonicity_witness() {
            return Err(Error::Precondition(format!("path is not causal: sample {i} does not precede sample {j}")));
        }
        Ok(())
    }

    /// Sample indices of the dyadic level `k` partition (deduplicated).
    pub fn dyadic_level(&self, k: u32) -> Vec<usize> {
        let n = self.samples() - 1;
        if k >= 63 || (1usize << k) >= n {
            return (0..=n).collect();
        }
        let parts = 1usize << k;
        let mut idx: Vec<usize> = (0..=parts).map(|i| ((i as u128 * n as u128) / parts as u128) as usize).collect();
        idx.dedup();
        idx
    }

    /// `Σ T(t_i,t_{i+1})^q / (q Δ_i^{q−1})` over a partition given by sample indices.
    pub fn partition_action(&self, idx: &[usize], q: f64) -> ExtReal {
        let mut total = ExtReal::ZERO;
        for w in idx.windows(2) {
            let dt = self.time(w[1]) - self.time(w[0]);
            total = total + self.sep(w[0], w[1]).pow(q).scale(dt.powf(1.0 - q) / q);
        }
        total
    }
}

/// Per-interval causal speed estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct SpeedProfile {
    /// Absolutely continuous density on each sample interval.
    pub abs_density: Vec<f64>,
    /// Atom attributed to each sample interval (located at its midpoint).
    pub singular_mass: Vec<f64>,
    pub total: ExtendedTime,
    /// Intervals with `T = +∞`.
    pub infinite_intervals: Vec<usize>,
    /// Maximal runs `[i, j]` of samples on which `T` stays finite.
    pub finite_runs: Vec<(usize, usize)>,
    /// `(stride, partition sum of T, largest difference quotient)` per stride.
    pub convergence: Vec<(usize, f64, f64)>,
}

impl SpeedProfile {
    /// Mass assigned to the sample range `[i, j]`.
    pub fn mass_between(&self, times: &[f64], i: usize, j: usize) -> f64 {
        (i..j).map(|k| self.abs_density[k] * (times[k + 1] - times[k]) + self.singular_mass[k]).sum()
    }

    /// `(midpoint time, mass)` of every atom.
    pub fn atoms(&self, times: &[f64]) -> Vec<(f64, f64)> {
        (0..self.singular_mass.len())
            .filter(|&k| self.singular_mass[k] > 0.0)
            .map(|k| (0.5 * (times[k] + times[k + 1]), self.singular_mass[k]))
            .collect()
    }
}

/// Estimates `|γ̇|` from difference quotients on the sample grid.
///
/// The density on interval `i` is its quotient `T(i,i+1)/Δ_i`, capped by the
/// larger neighbouring quotient; mass above the cap exceeding `10·tol` is an
/// atom. `strides` lists the window lengths of the convergence table.
pub fn causal_speed(space: &DiscreteSpacetime, path: &SampledCausalPath, strides: &[usize], tol: f64) -> Result<SpeedProfile> {
    let p = path.on(space)?;
    p.require_monotone()?;
    let n = p.samples() - 1;
    let mut quot = vec![0.0; n];
    let mut infinite_intervals = Vec::new();
    for i in 0..n {
        match p.sep(i, i + 1).finite_value() {
            Some(v) => quot[i] = v / (p.time(i + 1) - p.time(i)),
            None => {
                quot[i] = f64::INFINITY;
                infinite_intervals.push(i);
            }
        }
    }
    let mut abs_density = vec![0.0; n];
    let mut singular_mass = vec![0.0; n];
    for i in 0..n {
        if !quot[i].is_finite() {
            abs_density[i] = f64::INFINITY;
            continue;
        }
        let left = if i > 0 { quot[i - 1] } else { f64::NEG_INFINITY };
        let right = if i + 1 < n { quot[i + 1] } else { f64::NEG_INFINITY };
        let cap = left.max(right);
        let dt = p.time(i + 1) - p.time(i);
        if n > 1 && cap < quot[i] && (quot[i] - cap) * dt > 10.0 * tol {
            abs_density[i] = cap.max(0.0);
            singular_mass[i] = (quot[i] - abs_density[i]) * dt;
        } else {
            abs_density[i] = quot[i];
        }
    }
    let total = if infinite_intervals.is_empty() {
        ExtendedTime::finite((0..n).map(|i| quot[i] * (p.time(i + 1) - p.time(i))).sum())?
    } else {
        ExtendedTime::POS_INF
    };

    let mut finite_runs = Vec::new();
    let mut start = 0;
    for i in 0..n {
        if !quot[i].is_finite() {
            if start < i {
                finite_runs.push((start, i));
            }
            start = i + 1;
        }
    }
    if start < n {
        finite_runs.push((start, n));
    }

    let mut convergence = Vec::new();
    for &k in strides {
        let k = k.max(1);
        let mut sum = 0.0;
        let mut worst = 0.0f64;
        let mut a = 0;
        while a < n {
            let b = (a + k).min(n);
            let v = p.sep(a, b).to_f64();
            sum += v;
            worst = worst.max(v / (p.time(b) - p.time(a)));
            a = b;
        }
        convergence.push((k, sum, worst));
    }
    Ok(SpeedProfile { abs_density, singular_mass, total, infinite_intervals, finite_runs, convergence })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionMode {
    PartitionInfimum,
    DensityIntegral,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActionReport {
    pub value: ExtReal,
    /// `ℓ(γ_0, γ_1)^q / q`, an upper bound.
    pub bound: ExtReal,
    /// Partition value at each dyadic level (partition mode only).
    pub levels: Vec<(u32, ExtReal)>,
}

/// The `q`-action `A_q(γ)`.
pub fn q_action(space: &DiscreteSpacetime, path: &SampledCausalPath, q: f64, mode: ActionMode, depth: u32) -> Result<ActionReport> {
    check_exponent(q)?;
    let p = path.on(space)?;
    p.require_monotone()?;
    let n = p.samples() - 1;
    let bound = p.sep(0, n).pow_over_q(q);
    match mode {
        ActionMode::PartitionInfimum => {
            let mut levels = Vec::new();
            let mut best = ExtReal::PosInf;
            for k in 0..=depth {
                let v = p.partition_action(&p.dyadic_level(k), q);
                best = best.min(v);
                levels.push((k, v));
                if (1usize << k.min(62)) >= n {
                    break;
                }
            }
            Ok(ActionReport { value: best, bound, levels })
        }
        ActionMode::DensityIntegral => {
            let prof = causal_speed(space, path, &[], 0.0)?;
            let mut total = ExtReal::ZERO;
            for i in 0..n {
                let dt = p.time(i + 1) - p.time(i);
                let rho = ExtendedTime::new(ExtReal::from_f64(prof.abs_density[i]))?;
                total = total + rho.pow(q).scale(dt / q);
            }
            Ok(ActionReport { value: total, bound, levels: Vec::new() })
        }
    }
}

/// `L_ℓ(γ)`: infimum of `Σ T(t_i, t_{i+1})` over dyadic refinements up to `depth`.
pub fn length_ell(space: &DiscreteSpacetime, path: &SampledCausalPath, depth: u32) -> Result<f64> {
    let p = path.on(space)?;
    p.require_monotone()?;
    let n = p.samples() - 1;
    let mut best = f64::INFINITY;
    for k in 0..=depth {
        let idx = p.dyadic_level(k);
        let s: f64 = idx.windows(2).map(|w| p.sep(w[0], w[1]).to_f64()).sum();
        best = best.min(s);
        if (1usize << k.min(62)) >= n {
            break;
        }
    }
    if best.is_nan() {
        return Err(Error::Numerical("ℓ-length is undefined along this path".into()));
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesyReport {
    pub ell_endpoints: ExtendedTime,
    /// `ℓ(γ_0, γ_1) = 0`: classified as a null geodesic candidate, the
    /// action criteria do not apply.
    pub null: bool,
    /// `ℓ(γ_s, γ_t) ≥ (t − s) ℓ(γ_0, γ_1)` on all sampled pairs.
    pub proportional: Option<bool>,
    pub worst_proportional_defect: f64,
    /// Constant positive speed without atoms.
    pub constant_speed: Option<bool>,
    /// Action saturation for `q ∈ {−1, ½, ¾}` and the given `q`.
    pub saturates_all: Option<bool>,
    /// Action saturation for the given `q`.
    pub saturates_q: Option<bool>,
    /// The criteria are equivalent; disagreement indicates a sampling artifact.
    pub consistent: bool,
}

/// Evaluates the equivalent geodesic criteria at sample resolution.
pub fn geodesic_check(space: &DiscreteSpacetime, path: &SampledCausalPath, q: f64, tol: f64) -> Result<GeodesyReport> {
    check_exponent(q)?;
    let p = path.on(space)?;
    p.require_monotone()?;
    let n = p.samples() - 1;
    let ell = p.sep(0, n);
    let Some(l) = ell.finite_value().filter(|&l| l > 0.0) else {
        let null = ell == ExtendedTime::ZERO;
        return Ok(GeodesyReport {
            ell_endpoints: ell,
            null,
            proportional: None,
            worst_proportional_defect: 0.0,
            constant_speed: None,
            saturates_all: None,
            saturates_q: None,
            consistent: true,
        });
    };
    let scale = tol * l.max(1.0);

    let mut worst = 0.0f64;
    for i in 0..=n {
        for j in i + 1..=n {
            let want = (p.time(j) - p.time(i)) * l;
            let have = p.sep(i, j).finite_value().unwrap_or(f64::INFINITY);
            worst = worst.max(want - have);
        }
    }
    let proportional = worst <= scale;

    let prof = causal_speed(space, path, &[], tol)?;
    let c = prof.abs_density.first().copied().unwrap_or(0.0);
    let constant_speed = c > 0.0
        && prof.abs_density.iter().all(|&r| (r - c).abs() <= tol * c.max(1.0))
        && prof.singular_mass.iter().all(|&m| m == 0.0);

    let saturates = |q: f64| -> Result<bool> {
        let a = q_action(space, path, q, ActionMode::PartitionInfimum, 62)?.value;
        let target = l.powf(q) / q;
        Ok(a.finite().is_some_and(|a| (a - target).abs() <= tol * target.abs().max(1.0)))
    };
    let mut all = true;
    for qq in [-1.0, 0.5, 0.75, q] {
        all &= saturates(qq)?;
    }
    let sat_q = saturates(q)?;
    let consistent = proportional == constant_speed && constant_speed == all && all == sat_q;
    Ok(GeodesyReport {
        ell_endpoints: ell,
        null: false,
        proportional: Some(proportional),
        worst_proportional_defect: worst,
        constant_speed: Some(constant_speed),
        saturates_all: Some(all),
        saturates_q: Some(sat_q),
        consistent,
    })
}

/// A closed-form curve in a normed model space, with the extension `T̃` of
/// its separation outside `[0, 1]`.
pub struct ClosedFormCurve<F: Fn(f64) -> Vec<f64>> {
    pub norm: HyperbolicNorm,
    pub map: F,
}

impl<F: Fn(f64) -> Vec<f64>> ClosedFormCurve<F> {
    fn t_inner(&self, s: f64, t: f64) -> ExtendedTime {
        let (a, b) = ((self.map)(s), (self.map)(t));
        let v: Vec<f64> = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        self.norm.eval_unchecked(&v)
    }

    /// `T̃(a, b)` for `a ≤ b`: constant continuation outside the unit square.
    pub fn t_ext(&self, a: f64, b: f64) -> ExtendedTime {
        if (a < 0.0 && b < 0.0) || (a > 1.0 && b > 1.0) {
            return ExtendedTime::ZERO;
        }
        self.t_inner(a.clamp(0.0, 1.0), b.clamp(0.0, 1.0))
    }

    /// `f_n(t) = Σ_{i=−1}^{n−1} T̃(t + i/n, t + (i+1)/n)^q / (q (1/n)^{q−1})`.
    pub fn uniform_partition_sum(&self, q: f64, n: usize, t: f64) -> ExtReal {
        let h = 1.0 / n as f64;
        let mut total = ExtReal::ZERO;
        for i in -1..(n as i64) {
            let a = t + i as f64 * h;
            total = total + self.t_ext(a, a + h).pow(q).scale(h.powf(1.0 - q) / q);
        }
        total
    }

    /// Fraction of `samples` equispaced offsets `t ∈ [0, 1/n)` with `f_n(t) < A + ε`.
    pub fn good_offset_fraction(&self, q: f64, n: usize, action: f64, eps: f64, samples: usize) -> f64 {
        let h = 1.0 / n as f64;
        let good = (0..samples)
            .filter(|&k| {
                let t = (k as f64 + 0.5) / samples as f64 * h;
                self.uniform_partition_sum(q, n, t) < ExtReal::Finite(action + eps)
            })
            .count();
        good as f64 / samples as f64
    }
}
