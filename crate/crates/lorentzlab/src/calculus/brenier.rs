//! Backward slope of the Kantorovich potential `f^o` against `ℓ(·, o)^{q−1}`.

use super::smooth::{modulus, SmoothFunction};
use crate::error::{Error, Result};
use crate::norms::HyperbolicNorm;
use crate::spacetime::DiscreteSpacetime;
use crate::transport::DiscreteMeasure;

#[derive(Clone, Debug, PartialEq)]
pub struct BrenierRow {
    pub point: usize,
    pub ell: f64,
    pub slope: f64,
    /// `ℓ(γ₀, o)^{q−1}`.
    pub expected: f64,
    pub rel_dev: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BrenierReport {
    pub rows: Vec<BrenierRow>,
    pub max_rel_dev: f64,
    pub ell_min: f64,
}

fn finish(rows: Vec<BrenierRow>) -> BrenierReport {
    let max_rel_dev = rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    let ell_min = rows.iter().map(|r| r.ell).fold(f64::INFINITY, f64::min);
    BrenierReport { rows, max_rel_dev, ell_min }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Compares `|df^o|` (dual norm of the analytic differential) with `ℓ(x, o)^{q−1}`
/// at coordinate points of `I⁻(o)`.
pub fn metric_brenier_analytic(norm: &HyperbolicNorm, points: &[Vec<f64>], o: &[f64], q: f64) -> Result<BrenierReport> {
    crate::transport::lq::check_exponent(q)?;
    let f = SmoothFunction::potential_to(o.to_vec(), q);
    let mut rows = Vec::with_capacity(points.len());
    for (i, x) in points.iter().enumerate() {
        let v: Vec<f64> = o.iter().zip(x).map(|(a, b)| a - b).collect();
        let Some(l) = norm.eval(&v)?.finite_value().filter(|&l| l > 0.0) else {
            return Err(Error::Precondition(format!("sample {x:?} is not in the chronological past of the vertex")));
        };
        let slope = modulus(norm, &f, x)?.ok_or_else(|| Error::Numerical(format!("differential not causal at {x:?}")))?;
        let expected = l.powf(q - 1.0);
        rows.push(BrenierRow { point: i, ell: l, slope, expected, rel_dev: (slope - expected).abs() / expected });
    }
    Ok(finish(rows))
}

/// Backward slope of `f^o` at every support point of `μ₀`. On grids the
/// competitors are the `neighbours` nearest lattice points on the ray from `o`
/// through the point (behind it); elsewhere all chronological predecessors.
pub fn metric_brenier_check(space: &DiscreteSpacetime, mu0: &DiscreteMeasure, o: usize, q: f64, neighbours: usize) -> Result<BrenierReport> {
    crate::transport::lq::check_exponent(q)?;
    space.check_point(o)?;
    mu0.check_on(space)?;
    let potential = |x: usize| -> Option<f64> {
        let l = space.ell(x, o).finite_value()?;
        (l > 0.0).then(|| -l.powf(q) / q)
    };
    let mut rows = Vec::new();
    for x in mu0.support() {
        let Some(l) = space.ell(x, o).finite_value().filter(|&l| l > 0.0) else {
            return Err(Error::Precondition(format!("support point {x} is not in the chronological past of {o}")));
        };
        let fx = potential(x).unwrap();
        let mut slope = f64::INFINITY;
        let quotient = |y: usize| -> Option<f64> {
            let lyx = space.ell(y, x).finite_value().filter(|&v| v > 0.0)?;
            Some((fx - potential(y)?) / lyx)
        };
        if let Some(g) = space.grid() {
            let (ix, io) = (g.multi_index(x), g.multi_index(o));
            let v: Vec<i64> = io.iter().zip(&ix).map(|(a, b)| *a as i64 - *b as i64).collect();
            let k = v.iter().fold(0, |a, &b| gcd(a, b));
            let step: Vec<i64> = v.iter().map(|c| c / k).collect();
            for j in 1..=neighbours.max(1) as i64 {
                let y: Option<Vec<usize>> = ix
                    .iter()
                    .zip(&step)
                    .enumerate()
                    .map(|(a, (&i, &s))| {
                        let c = i as i64 - j * s;
                        (c >= 0 && c < g.shape[a] as i64).then_some(c as usize)
                    })
                    .collect();
                let Some(y) = y else { break };
                if let Some(qv) = quotient(g.flat_index(&y)) {
                    slope = slope.min(qv);
                }
            }
        } else {
            for y in 0..space.len() {
                if let Some(qv) = quotient(y) {
                    slope = slope.min(qv);
                }
            }
        }
        let expected = l.powf(q - 1.0);
        rows.push(BrenierRow { point: x, ell: l, slope, expected, rel_dev: (slope - expected).abs() / expected });
    }
    Ok(finish(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_identity_and_q_to_one() {
        let n = HyperbolicNorm::minkowski(3).unwrap();
        let pts = vec![vec![-2.0, 0.3, 0.1], vec![-1.0, 0.0, -0.5]];
        let r = metric_brenier_analytic(&n, &pts, &[0.0; 3], 0.5).unwrap();
        assert!(r.max_rel_dev < 1e-12);
        let near_one = metric_brenier_analytic(&n, &pts, &[0.0; 3], 1.0 - 1e-9).unwrap();
        assert!(near_one.rows.iter().all(|r| (r.expected - 1.0).abs() < 1e-8));
    }

    #[test]
    fn grid_rays_approach_the_identity() {
        let s = DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 20.5), (-10.5, 10.5)], &[21, 21]).unwrap();
        let g = s.grid().unwrap();
        let o = g.flat_index(&[20, 10]);
        let mu = DiscreteMeasure::uniform_on(s.len(), &[g.flat_index(&[10, 10]), g.flat_index(&[12, 6])]).unwrap();
        let r = metric_brenier_check(&s, &mu, o, 0.5, 1).unwrap();
        assert!(r.max_rel_dev < 3.0 / r.ell_min, "{r:?}");
    }
}
