//! Entropy inequality along geodesics ending (future) or starting (past) at a
//! Dirac mass.

use super::distortion::DistortionParams;
use super::entropy::{check_dimension, renyi_entropy};
use crate::error::{Error, Result};
use crate::spacetime::DiscreteSpacetime;
use crate::transport::DiscreteMeasure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Geodesic from an absolutely continuous `μ₀` to `δ_{x₁}`.
    Future,
    /// Geodesic from `δ_{x₀}` to an absolutely continuous `μ₁`.
    Past,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TmcpOptions {
    pub k: f64,
    /// Dimension bounds `N′` to check; [`default_dimensions`] gives `{N, N+1, 2N}`.
    pub dimensions: Vec<f64>,
    pub direction: Direction,
    /// Use `σ` instead of `τ` (the reduced condition).
    pub reduced: bool,
    pub tol: f64,
}

pub fn default_dimensions(n: f64) -> Vec<f64> {
    vec![n, n + 1.0, 2.0 * n]
}

#[derive(Clone, Debug, PartialEq)]
pub struct TmcpRow {
    pub t: f64,
    pub n: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub defect: f64,
    pub max_density: f64,
    /// Density bound `(1−t)^{−N′} e^{Dt√(K₋(N′−1))} ‖ρ₀‖` (past: `t ↔ 1−t`).
    pub density_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TmcpReport {
    pub rows: Vec<TmcpRow>,
    pub passed: bool,
    pub worst_defect: f64,
    /// Largest separation from the support to the Dirac endpoint.
    pub diameter: f64,
    pub tol: f64,
}

/// `e^{D t √(K₋ M)}` with `K₋ = max(−K, 0)`.
pub fn expansion_factor(k: f64, d: f64, t: f64, m: f64) -> f64 {
    (d * t * ((-k).max(0.0) * m).sqrt()).exp()
}

/// Checks `S_{N′}(μ_t) ≤ −Σ_x τ^{(1−t)}_{K,N′}(ℓ(x,x₁)) ρ₀(x)^{−1/N′} μ₀(x)` (future)
/// or the mirrored inequality with `τ^{(t)}`, `ℓ(x₀,x)` and `ρ₁` (past).
///
/// The geodesic lists `(t, μ_t)`; its `t = 0` (future) or `t = 1` (past) entry is
/// the absolutely continuous endpoint.
pub fn tmcp_check(space: &DiscreteSpacetime, geodesic: &[(f64, DiscreteMeasure)], target: usize, opts: &TmcpOptions) -> Result<TmcpReport> {
    space.check_point(target)?;
    if opts.dimensions.is_empty() {
        return Err(Error::Parameter("no dimension bounds to check".into()));
    }
    for &n in &opts.dimensions {
        check_dimension(n)?;
    }
    let anchor_t = if opts.direction == Direction::Future { 0.0 } else { 1.0 };
    let anchor = geodesic
        .iter()
        .find(|(t, _)| *t == anchor_t)
        .map(|(_, m)| m)
        .ok_or_else(|| Error::Precondition(format!("geodesic has no entry at t = {anchor_t}")))?;
    anchor.check_on(space)?;
    if anchor.singular_mass(space) > 0.0 {
        return Err(Error::Precondition("the absolutely continuous endpoint charges points of zero reference weight".into()));
    }
    let support = anchor.support();
    let sep = |x: usize| match opts.direction {
        Direction::Future => space.ell(x, target),
        Direction::Past => space.ell(target, x),
    };
    let mut diameter = 0.0f64;
    let mut thetas = Vec::with_capacity(support.len());
    for &x in &support {
        let l = sep(x);
        if !l.is_chronological() {
            return Err(Error::Precondition(format!("support point {x} is not chronologically related to the target {target}")));
        }
        let Some(v) = l.finite_value() else {
            return Err(Error::Precondition(format!("support point {x} is at infinite separation from the target")));
        };
        diameter = diameter.max(v);
        thetas.push(v);
    }
    let rho0 = anchor.max_density(space);
    let mut rows = Vec::new();
    let mut worst = f64::INFINITY;
    for (t, mu) in geodesic {
        let (t, mu) = (*t, mu);
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Parameter(format!("geodesic time {t} outside [0, 1]")));
        }
        mu.check_on(space)?;
        let r = if opts.direction == Direction::Future { 1.0 - t } else { t };
        for &n in &opts.dimensions {
            let lhs = renyi_entropy(space, mu, n)?.value;
            let mut rhs = 0.0;
            for (&x, &theta) in support.iter().zip(&thetas) {
                let p = DistortionParams::new(opts.k, n, r, theta)?;
                let coeff = if opts.reduced { p.sigma() } else { p.tau() };
                let Some(c) = coeff.finite_value() else {
                    rhs = f64::NEG_INFINITY;
                    break;
                };
                let rho = anchor.weight(x) / space.weight(x);
                rhs -= c * rho.powf(-1.0 / n) * anchor.weight(x);
            }
            let defect = rhs - lhs;
            worst = worst.min(defect);
            let m = if opts.reduced { n } else { n - 1.0 };
            let density_bound =
                if r > 0.0 { r.powf(-n) * expansion_factor(opts.k, diameter, 1.0 - r, m) * rho0 } else { f64::INFINITY };
            rows.push(TmcpRow { t, n, lhs, rhs, defect, max_density: mu.max_density(space), density_bound });
        }
    }
    Ok(TmcpReport { passed: worst >= -opts.tol, worst_defect: worst, rows, diameter, tol: opts.tol })
}

/// Push-forward of `μ` under `x ↦ x + t(x₁ − x)` on a grid. Each cell is mapped
/// as a box (shrunk by `1 − t` towards `x₁`) and its mass split over the cells it
/// overlaps, so a uniform density stays exactly uniform in the interior.
pub fn affine_interpolant(space: &DiscreteSpacetime, mu: &DiscreteMeasure, x1: usize, t: f64) -> Result<DiscreteMeasure> {
    let grid = space.grid().ok_or_else(|| Error::Unsupported("affine interpolation needs a grid spacetime".into()))?;
    space.check_point(x1)?;
    mu.check_on(space)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Parameter(format!("t must lie in [0, 1], got {t}")));
    }
    let target = space.coords(x1).unwrap().to_vec();
    let mut w = vec![0.0; space.len()];
    for x in mu.support() {
        let p: Vec<f64> = space.coords(x).unwrap().iter().zip(&target).map(|(a, b)| a + t * (b - a)).collect();
        for (z, f) in overlap_deposit(grid, &p, 1.0 - t)? {
            w[z] += f * mu.weight(x);
        }
    }
    DiscreteMeasure::normalized(w)
}

/// Cells overlapped by the box centred at `p` with sides `scale · spacing`, with
/// overlap fractions; a degenerate box deposits onto the cell containing `p`.
pub(crate) fn overlap_deposit(grid: &crate::spacetime::Grid, p: &[f64], scale: f64) -> Result<Vec<(usize, f64)>> {
    let d = grid.dim();
    let leaves = || Error::Precondition(format!("interpolated point {p:?} leaves the grid"));
    let snap = |u: f64| {
        let r = u.round();
        if (u - r).abs() < 1e-9 {
            r
        } else {
            u
        }
    };
    let mut axes: Vec<Vec<(usize, f64)>> = Vec::with_capacity(d);
    for a in 0..d {
        let u = (p[a] - grid.lower[a]) / grid.spacing[a];
        let size = grid.shape[a] as f64;
        let mut cells = Vec::new();
        if scale * grid.spacing[a] <= 1e-12 * grid.spacing[a] {
            let i = snap(u).floor().min(size - 1.0);
            if !(0.0..size).contains(&i) {
                return Err(leaves());
            }
            cells.push((i as usize, 1.0));
        } else {
            let (lo, hi) = (snap(u - scale / 2.0), snap(u + scale / 2.0));
            if lo < 0.0 || hi > size {
                return Err(leaves());
            }
            let mut i = lo.floor();
            while i < hi {
                let f = ((i + 1.0).min(hi) - i.max(lo)) / (hi - lo);
                if f > 1e-14 {
                    cells.push((i as usize, f));
                }
                i += 1.0;
            }
        }
        axes.push(cells);
    }
    let mut out = vec![(0usize, 1.0f64)];
    let mut idx: Vec<Vec<usize>> = vec![Vec::new()];
    for cells in &axes {
        let mut next = Vec::with_capacity(out.len() * cells.len());
        let mut next_idx = Vec::with_capacity(out.len() * cells.len());
        for (k, &(_, f)) in out.iter().enumerate() {
            for &(i, g) in cells {
                let mut m = idx[k].clone();
                m.push(i);
                next.push((0, f * g));
                next_idx.push(m);
            }
        }
        out = next;
        idx = next_idx;
    }
    Ok(out.into_iter().zip(idx).map(|((_, f), m)| (grid.flat_index(&m), f)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExtendedTime;

    fn chain() -> DiscreteSpacetime {
        // 0 and 1 both precede 2; 0 ≪ 1
        let t = |x: f64| ExtendedTime::finite(x).unwrap();
        let ni = ExtendedTime::NEG_INF;
        let ell = vec![vec![t(0.0), t(1.0), t(2.0)], vec![ni, t(0.0), t(1.0)], vec![ni, ni, t(0.0)]];
        DiscreteSpacetime::from_matrix(ell, vec![1.0; 3]).unwrap()
    }

    fn opts(n: f64) -> TmcpOptions {
        TmcpOptions { k: 0.0, dimensions: default_dimensions(n), direction: Direction::Future, reduced: false, tol: 1e-12 }
    }

    #[test]
    fn flat_rhs_is_a_scaled_initial_entropy() {
        let s = chain();
        let mu0 = DiscreteMeasure::new(vec![0.5, 0.5, 0.0]).unwrap();
        let geo = vec![(0.0, mu0.clone()), (1.0, DiscreteMeasure::dirac(3, 2).unwrap())];
        let r = tmcp_check(&s, &geo, 2, &opts(2.0)).unwrap();
        for row in &r.rows {
            let s0 = renyi_entropy(&s, &mu0, row.n).unwrap().value;
            assert!((row.rhs - (1.0 - row.t) * s0).abs() < 1e-14);
        }
        assert!(r.passed);
    }

    #[test]
    fn concentration_fails_and_spreading_passes() {
        // three unit cells below a common target; μ₀ uniform on two of them
        let t = |x: f64| ExtendedTime::finite(x).unwrap();
        let ni = ExtendedTime::NEG_INF;
        let ell = vec![
            vec![t(0.0), ni, ni, t(1.0)],
            vec![ni, t(0.0), ni, t(1.0)],
            vec![ni, ni, t(0.0), t(1.0)],
            vec![ni, ni, ni, t(0.0)],
        ];
        let s = DiscreteSpacetime::from_matrix(ell, vec![1.0, 1.0, 0.1, 1.0]).unwrap();
        let mu0 = DiscreteMeasure::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        // S_2(μ₀) = −√2; at t = 1/2 the bound is −√2/2
        let concentrated = DiscreteMeasure::dirac(4, 2).unwrap(); // S_2 = −√0.1 ≈ −0.316
        // −(2√(1/3) + √(10/3)·0.1) ≈ −1.337
        let spread = DiscreteMeasure::new(vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]).unwrap();
        let check = |m: DiscreteMeasure| {
            let o = TmcpOptions { dimensions: vec![2.0], ..opts(2.0) };
            tmcp_check(&s, &[(0.0, mu0.clone()), (0.5, m)], 3, &o).unwrap()
        };
        assert!(!check(concentrated).passed);
        assert!(check(spread).passed);
    }

    #[test]
    fn unrelated_support_is_rejected() {
        let s = chain();
        let mu0 = DiscreteMeasure::new(vec![0.5, 0.0, 0.5]).unwrap();
        assert!(matches!(tmcp_check(&s, &[(0.0, mu0)], 2, &opts(2.0)), Err(Error::Precondition(_))));
    }

    #[test]
    fn aligned_affine_interpolant_is_exact() {
        let s = DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 4.5), (-2.5, 2.5)], &[5, 5]).unwrap();
        let g = s.grid().unwrap();
        let o = g.flat_index(&[4, 2]);
        let x = g.flat_index(&[0, 2]);
        let m = affine_interpolant(&s, &DiscreteMeasure::dirac(25, x).unwrap(), o, 0.5).unwrap();
        assert_eq!(m, DiscreteMeasure::dirac(25, g.flat_index(&[2, 2])).unwrap());
        // shrunk cell [0.5625, 1.4375] × [2.0625, 2.9375] in index units: split evenly along time
        let q = affine_interpolant(&s, &DiscreteMeasure::dirac(25, x).unwrap(), o, 0.125).unwrap();
        assert_eq!(q.support(), vec![g.flat_index(&[0, 2]), g.flat_index(&[1, 2])]);
        assert!((q.weight(g.flat_index(&[0, 2])) - 0.5).abs() < 1e-12);
        // a uniform block keeps a uniform interior
        let block: Vec<usize> = (0..4).flat_map(|i| (0..5).map(move |j| (i, j))).map(|(i, j)| g.flat_index(&[i, j])).collect();
        let half = affine_interpolant(&s, &DiscreteMeasure::uniform_on(25, &block).unwrap(), o, 0.5).unwrap();
        let w = half.weight(g.flat_index(&[3, 2]));
        assert!((w - 4.0 / 20.0).abs() < 1e-12);
    }
}
