//! Geodesics towards a Dirac mass with controlled densities, built by iterated
//! `λ`-intermediate steps and local redistribution of mass within
//! intermediate-point fibres.

use super::entropy::check_dimension;
use super::tmcp::{default_dimensions, expansion_factor, overlap_deposit, tmcp_check, Direction, TmcpOptions, TmcpReport};
use crate::error::{Error, Result};
use crate::extended::ExtendedTime;
use crate::spacetime::DiscreteSpacetime;
use crate::transport::interpolation::intermediate_error;
use crate::transport::lq::{check_exponent, coupling_value};
use crate::transport::{Coupling, DiscreteMeasure};

#[derive(Clone, Debug, PartialEq)]
pub struct GoodGeodesicOptions {
    pub k: f64,
    pub n: f64,
    pub q: f64,
    pub lambda: f64,
    pub depth: u32,
    /// Largest intermediate-point defect admitted in a fibre.
    pub fibre_tol: f64,
    /// Cells around the interpolated position searched for fibre points on grids.
    pub fibre_radius: usize,
    pub max_iter: usize,
    /// Entropy-flattening sweeps after the density bound is met.
    pub sweeps: usize,
    /// Tolerance of the certified inequalities.
    pub tol: f64,
}

impl GoodGeodesicOptions {
    pub fn new(k: f64, n: f64, q: f64, lambda: f64, depth: u32, fibre_tol: f64) -> Self {
        GoodGeodesicOptions { k, n, q, lambda, depth, fibre_tol, fibre_radius: 1, max_iter: 10_000, sweeps: 10, tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelReport {
    /// Remaining fraction `s = (1−λ)^k`; the measure sits at time `t = 1 − s`.
    pub s: f64,
    pub t: f64,
    pub max_density: f64,
    /// `s^{−N} e^{D(1−s)√(K₋(N−1))} ‖ρ₀‖`.
    pub density_bound: f64,
    pub mass_excess: f64,
    pub redistribution_iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityFailure {
    pub level: usize,
    pub cell: usize,
    pub density: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GoodGeodesicReport {
    pub levels: Vec<LevelReport>,
    /// `ℓ_q(μ₀, δ_{x₁})`.
    pub lq: f64,
    pub diameter: f64,
    /// Smallest `L_{ij} − (s_i − s_j)ℓ_q(μ₀, δ_{x₁})` over level pairs, where
    /// `L_{ij}` lower-bounds `ℓ_q(ν_{s_i}, ν_{s_j})` through the constructed coupling.
    pub geodesy_defect: f64,
    /// Tolerance applied to the geodesy defect: `tol` plus the fibre tolerance,
    /// since every snapped step may miss exact interpolation by that much.
    pub geodesy_tol: f64,
    pub entropy: TmcpReport,
    pub failure: Option<DensityFailure>,
    pub passed: bool,
}

struct Step {
    /// `alloc[x] = [(z, mass)]` for every source point `x`.
    alloc: Vec<Vec<(usize, f64)>>,
    fibres: Vec<Vec<usize>>,
}

fn density(w: f64, m: f64) -> f64 {
    if m > 0.0 {
        w / m
    } else if w > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Fibre of `λ`-intermediate points of `(x, x₁)` and an initial split of `x`'s mass.
fn fibre(space: &DiscreteSpacetime, x: usize, x1: usize, lambda: f64, opts: &GoodGeodesicOptions) -> Result<(Vec<usize>, Vec<(usize, f64)>)> {
    let ok = |z: usize| intermediate_error(space, x, z, x1, lambda) <= opts.fibre_tol;
    if let (Some(g), Some(cx), Some(c1)) = (space.grid(), space.coords(x), space.coords(x1)) {
        let p: Vec<f64> = cx.iter().zip(c1).map(|(a, b)| a + lambda * (b - a)).collect();
        let r = opts.fibre_radius.max(1) as isize;
        let d = g.dim();
        let mut centre = vec![0isize; d];
        for a in 0..d {
            centre[a] = ((p[a] - g.lower[a]) / g.spacing[a]).floor() as isize;
        }
        let mut cells = Vec::new();
        let span = (2 * r + 1) as usize;
        let mut idx = vec![0usize; d];
        'outer: for k in 0..span.pow(d as u32) {
            let mut rem = k;
            for a in (0..d).rev() {
                let i = centre[a] + (rem % span) as isize - r;
                rem /= span;
                if i < 0 || i >= g.shape[a] as isize {
                    continue 'outer;
                }
                idx[a] = i as usize;
            }
            let z = g.flat_index(&idx);
            if ok(z) && space.weight(z) > 0.0 {
                cells.push(z);
            }
        }
        cells.sort_unstable();
        let mut init: Vec<(usize, f64)> = match overlap_deposit(g, &p, 1.0 - lambda) {
            Ok(v) => v.into_iter().filter(|(z, _)| cells.binary_search(z).is_ok()).collect(),
            Err(_) => Vec::new(),
        };
        let total: f64 = init.iter().map(|e| e.1).sum();
        if total > 0.0 {
            init.iter_mut().for_each(|e| e.1 /= total);
            return Ok((cells, init));
        }
        if let Some(&z) = cells.iter().min_by(|&&a, &&b| {
            intermediate_error(space, x, a, x1, lambda).total_cmp(&intermediate_error(space, x, b, x1, lambda))
        }) {
            return Ok((cells, vec![(z, 1.0)]));
        }
    }
    let cells: Vec<usize> = (0..space.len()).filter(|&z| ok(z)).collect();
    let best = cells
        .iter()
        .copied()
        .min_by(|&a, &b| intermediate_error(space, x, a, x1, lambda).total_cmp(&intermediate_error(space, x, b, x1, lambda)))
        .ok_or_else(|| {
            Error::Precondition(format!("point {x} has no {lambda}-intermediate point towards {x1} within {}", opts.fibre_tol))
        })?;
    Ok((cells, vec![(best, 1.0)]))
}

/// Moves over-dense mass within fibres (largest violation first), then flattens.
/// Returns the number of redistribution iterations.
fn redistribute(space: &DiscreteSpacetime, step: &mut Step, src_mass: &[f64], w: &mut [f64], cap: f64, opts: &GoodGeodesicOptions) -> usize {
    let m = space.weights();
    let mut contributors: Vec<Vec<usize>> = vec![Vec::new(); space.len()];
    for (x, a) in step.alloc.iter().enumerate() {
        for &(z, _) in a {
            contributors[z].push(x);
        }
    }
    let mut iterations = 0;
    let slack = cap * 1e-12;
    while iterations < opts.max_iter {
        // largest violation first, ties to the lowest index
        let worst = (0..w.len())
            .filter(|&z| density(w[z], m[z]) > cap + slack)
            .max_by(|&a, &b| density(w[a], m[a]).total_cmp(&density(w[b], m[b])).then(b.cmp(&a)));
        let Some(z) = worst else { break };
        iterations += 1;
        let mut moved = false;
        let srcs = contributors[z].clone();
        for x in srcs {
            if density(w[z], m[z]) <= cap + slack {
                break;
            }
            let Some(pos) = step.alloc[x].iter().position(|e| e.0 == z) else { continue };
            for &zz in &step.fibres[x] {
                if zz == z || m[zz] == 0.0 {
                    continue;
                }
                let room = (cap - density(w[zz], m[zz])) * m[zz];
                let over = if m[z] > 0.0 { (density(w[z], m[z]) - cap) * m[z] } else { w[z] };
                let delta = room.min(over).min(step.alloc[x][pos].1);
                if delta <= 0.0 {
                    continue;
                }
                step.alloc[x][pos].1 -= delta;
                w[z] -= delta;
                w[zz] += delta;
                match step.alloc[x].iter_mut().find(|e| e.0 == zz) {
                    Some(e) => e.1 += delta,
                    None => {
                        step.alloc[x].push((zz, delta));
                        contributors[zz].push(x);
                    }
                }
                moved = true;
                if step.alloc[x][pos].1 <= 0.0 {
                    break;
                }
            }
        }
        if !moved {
            break;
        }
    }
    for _ in 0..opts.sweeps {
        let mut total_moved = 0.0;
        for x in 0..step.alloc.len() {
            if src_mass[x] == 0.0 {
                continue;
            }
            let Some((pa, _)) = step.alloc[x]
                .iter()
                .enumerate()
                .filter(|(_, e)| e.1 > 0.0)
                .max_by(|a, b| density(w[a.1 .0], m[a.1 .0]).total_cmp(&density(w[b.1 .0], m[b.1 .0])))
            else {
                continue;
            };
            let a = step.alloc[x][pa].0;
            let Some(&b) = step.fibres[x].iter().filter(|&&z| m[z] > 0.0).min_by(|&&p, &&q| density(w[p], m[p]).total_cmp(&density(w[q], m[q]))) else {
                continue;
            };
            let (ra, rb) = (density(w[a], m[a]), density(w[b], m[b]));
            if a == b || !(ra > rb * (1.0 + 1e-12)) || !ra.is_finite() {
                continue;
            }
            let equalize = (ra - rb) / (1.0 / m[a] + 1.0 / m[b]);
            let delta = equalize.min(step.alloc[x][pa].1).min(((cap - rb) * m[b]).max(0.0));
            if delta <= 0.0 {
                continue;
            }
            step.alloc[x][pa].1 -= delta;
            w[a] -= delta;
            w[b] += delta;
            match step.alloc[x].iter_mut().find(|e| e.0 == b) {
                Some(e) => e.1 += delta,
                None => step.alloc[x].push((b, delta)),
            }
            total_moved += delta;
        }
        if total_moved <= 1e-15 {
            break;
        }
    }
    for a in &mut step.alloc {
        a.retain(|e| e.1 > 0.0);
    }
    iterations
}

/// Builds `ν_{(1−λ)^k}`, `k = 1..=depth`, from `μ₀` towards `δ_{x₁}` and certifies
/// geodesy, the density bound and the entropy inequality of the result.
///
/// Returns the geodesic as `(t, μ_t)` with `t = 1 − (1−λ)^k`, starting at `(0, μ₀)`.
pub fn good_geodesic(
    space: &DiscreteSpacetime,
    mu0: &DiscreteMeasure,
    x1: usize,
    opts: &GoodGeodesicOptions,
) -> Result<(Vec<(f64, DiscreteMeasure)>, GoodGeodesicReport)> {
    check_dimension(opts.n)?;
    check_exponent(opts.q)?;
    if !(opts.lambda > 0.0 && opts.lambda < 1.0) {
        return Err(Error::Parameter(format!("step λ must lie in (0, 1), got {}", opts.lambda)));
    }
    if opts.depth == 0 {
        return Err(Error::Parameter("depth must be at least 1".into()));
    }
    space.check_point(x1)?;
    mu0.check_on(space)?;
    if mu0.singular_mass(space) > 0.0 {
        return Err(Error::Precondition("μ₀ charges points of zero reference weight; its density is unbounded".into()));
    }
    let support = mu0.support();
    let mut diameter = 0.0f64;
    let mut lq_sum = 0.0;
    let mut null_mass = false;
    for &x in &support {
        let l = space.ell(x, x1);
        let Some(v) = l.finite_value().filter(|&v| v > 0.0) else {
            return Err(Error::Precondition(format!("support point {x} is not chronologically before {x1} at finite separation")));
        };
        diameter = diameter.max(v);
        if v == 0.0 {
            null_mass = true;
        }
        lq_sum += mu0.weight(x) * v.powf(opts.q);
    }
    debug_assert!(!null_mass);
    let lq = lq_sum.powf(1.0 / opts.q);
    let rho0 = mu0.max_density(space);

    let n_pts = space.len();
    let mut current = mu0.weights().to_vec();
    // weighted paths through the levels
    let mut paths: Vec<(Vec<usize>, f64)> = support.iter().map(|&x| (vec![x], mu0.weight(x))).collect();
    let mut geodesic = vec![(0.0, mu0.clone())];
    let mut levels = Vec::new();
    let mut failure = None;
    for k in 1..=opts.depth {
        let s = (1.0 - opts.lambda).powi(k as i32);
        let t = 1.0 - s;
        let cap = s.powf(-opts.n) * expansion_factor(opts.k, diameter, t, opts.n - 1.0) * rho0;
        let mut step = Step { alloc: vec![Vec::new(); n_pts], fibres: vec![Vec::new(); n_pts] };
        let mut w = vec![0.0; n_pts];
        for x in 0..n_pts {
            if current[x] <= 0.0 {
                continue;
            }
            let (f, init) = fibre(space, x, x1, opts.lambda, opts)?;
            for &(z, frac) in &init {
                w[z] += frac * current[x];
            }
            step.alloc[x] = init.into_iter().map(|(z, frac)| (z, frac * current[x])).collect();
            step.fibres[x] = f;
        }
        let iterations = redistribute(space, &mut step, &current, &mut w, cap, opts);
        let nu = DiscreteMeasure::normalized(w.clone())?;
        let md = nu.max_density(space);
        if failure.is_none() && md > cap * (1.0 + 1e-9) {
            let cell = (0..n_pts).max_by(|&a, &b| density(w[a], space.weight(a)).total_cmp(&density(w[b], space.weight(b)))).unwrap();
            failure = Some(DensityFailure { level: k as usize, cell, density: md, bound: cap });
        }
        levels.push(LevelReport {
            s,
            t,
            max_density: md,
            density_bound: cap,
            mass_excess: super::entropy::mass_excess(space, &nu, cap)?,
            redistribution_iterations: iterations,
        });
        // split every path proportionally to its endpoint's allocation
        let mut next = Vec::with_capacity(paths.len() * 2);
        for (p, m) in paths {
            let x = *p.last().unwrap();
            for &(z, a) in &step.alloc[x] {
                let mut q = p.clone();
                q.push(z);
                next.push((q, m * a / current[x]));
            }
        }
        paths = next;
        current = w;
        geodesic.push((t, nu));
    }

    // geodesy through the constructed couplings, including the Dirac endpoint
    let mut s_levels: Vec<f64> = std::iter::once(1.0).chain(levels.iter().map(|l| l.s)).collect();
    s_levels.push(0.0);
    let depth = levels.len();
    let mut geodesy_defect = f64::INFINITY;
    for i in 0..s_levels.len() {
        for j in i + 1..s_levels.len() {
            let entries: Vec<(usize, usize, f64)> =
                paths.iter().map(|(p, m)| (p[i], if j > depth { x1 } else { p[j] }, *m)).collect();
            let (v, _) = coupling_value(space, &Coupling { entries }, opts.q);
            let lower = match v.finite_value() {
                Some(v) => v,
                None if v == ExtendedTime::POS_INF => f64::INFINITY,
                None => f64::NEG_INFINITY,
            };
            geodesy_defect = geodesy_defect.min(lower - (s_levels[i] - s_levels[j]) * lq);
        }
    }

    let entropy = tmcp_check(
        space,
        &geodesic,
        x1,
        &TmcpOptions { k: opts.k, dimensions: default_dimensions(opts.n), direction: Direction::Future, reduced: false, tol: opts.tol },
    )?;
    let geodesy_tol = opts.tol + opts.fibre_tol;
    let passed = failure.is_none() && geodesy_defect >= -geodesy_tol && entropy.passed;
    Ok((geodesic, GoodGeodesicReport { levels, lq, diameter, geodesy_defect, geodesy_tol, entropy, failure, passed }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_on_a_chain_moves_to_the_midpoint() {
        let t = |x: f64| ExtendedTime::finite(x).unwrap();
        let ni = ExtendedTime::NEG_INF;
        let ell = vec![vec![t(0.0), t(1.0), t(2.0)], vec![ni, t(0.0), t(1.0)], vec![ni, ni, t(0.0)]];
        let s = DiscreteSpacetime::from_matrix(ell, vec![1.0; 3]).unwrap();
        let opts = GoodGeodesicOptions::new(0.0, 2.0, 0.5, 0.5, 1, 1e-12);
        let (geo, rep) = good_geodesic(&s, &DiscreteMeasure::dirac(3, 0).unwrap(), 2, &opts).unwrap();
        assert_eq!(geo[1], (0.5, DiscreteMeasure::dirac(3, 1).unwrap()));
        assert!(rep.geodesy_defect.abs() < 1e-12);
        assert!(rep.passed);
    }

    #[test]
    fn uniform_block_respects_the_density_bound() {
        let s = DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 16.5), (-8.5, 8.5)], &[17, 17]).unwrap();
        let g = s.grid().unwrap();
        let o = g.flat_index(&[16, 8]);
        let block: Vec<usize> = (0..4).flat_map(|i| (6..11).map(move |j| (i, j))).map(|(i, j)| g.flat_index(&[i, j])).collect();
        let mu0 = DiscreteMeasure::reference_on(&s, &block).unwrap();
        let mut opts = GoodGeodesicOptions::new(0.0, 2.0, 0.5, 0.25, 1, 4.0);
        opts.tol = 1e-6;
        let (_, rep) = good_geodesic(&s, &mu0, o, &opts).unwrap();
        assert!(rep.failure.is_none(), "{:?}", rep.failure);
        assert!(rep.levels[0].max_density <= rep.levels[0].density_bound * (1.0 + 1e-12));
        assert_eq!(rep.levels[0].mass_excess, 0.0);
    }
}
