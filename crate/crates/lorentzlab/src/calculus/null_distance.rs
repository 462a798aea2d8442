//! Null distance of a strictly causal function and perturbation cones.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::functions::causality_check;
use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::spacetime::DiscreteSpacetime;

/// First pair `x ≤ y`, `x ≠ y`, with `f(x) ≥ f(y)`.
pub fn strict_causality_witness(space: &DiscreteSpacetime, f: &[f64]) -> Option<(usize, usize)> {
    let n = space.len();
    (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).find(|&(x, y)| x != y && space.leq(x, y) && f[x] >= f[y])
}

#[derive(Clone, Copy)]
struct Key(f64);
impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o).is_eq()
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Null distances `d̂_f(x, ·)` to every point: shortest paths in the graph joining
/// causally related points with edge weight `|f(b) − f(a)|` (`+∞` when unreachable).
pub fn null_distances_from(space: &DiscreteSpacetime, f: &[f64], x: usize) -> Result<Vec<f64>> {
    space.check_point(x)?;
    if f.len() != space.len() {
        return Err(Error::Dimension(format!("function has {} values, spacetime has {} points", f.len(), space.len())));
    }
    if let Some(i) = f.iter().position(|v| !v.is_finite()) {
        return Err(Error::Parameter(format!("function value at point {i} is not finite")));
    }
    if let Some((a, b)) = strict_causality_witness(space, f) {
        return Err(Error::Precondition(format!("function is not strictly causal: {a} ≤ {b} but f({a}) ≥ f({b})")));
    }
    let n = space.len();
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[x] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Key(0.0), x)));
    while let Some(Reverse((Key(d), u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for v in 0..n {
            if done[v] || !(space.leq(u, v) || space.leq(v, u)) {
                continue;
            }
            let nd = d + (f[v] - f[u]).abs();
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((Key(nd), v)));
            }
        }
    }
    Ok(dist)
}

pub fn null_distance(space: &DiscreteSpacetime, f: &[f64], x: usize, y: usize) -> Result<f64> {
    space.check_point(y)?;
    Ok(null_distances_from(space, f, x)?[y])
}

#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationReport {
    /// Largest scheduled `ε` with `f + εg` causal.
    pub plus_eps: Option<f64>,
    /// Largest scheduled `ε` with `f − εg` causal.
    pub minus_eps: Option<f64>,
    /// All scheduled `ε` below `plus_eps` (resp. `minus_eps`) pass as well.
    pub star_shaped: bool,
}

impl PerturbationReport {
    pub fn member(&self) -> bool {
        self.plus_eps.is_some()
    }

    pub fn symmetric_member(&self) -> bool {
        self.plus_eps.is_some() && self.minus_eps.is_some()
    }
}

/// Checks causality of `f ± εg` for every `ε` in the schedule.
pub fn perturbation_membership(space: &DiscreteSpacetime, f: &[ExtReal], g: &[f64], eps_schedule: &[f64]) -> Result<PerturbationReport> {
    if g.len() != space.len() {
        return Err(Error::Dimension(format!("perturbation has {} values, spacetime has {} points", g.len(), space.len())));
    }
    if let Some(&(a, b)) = causality_check(space, f)?.first() {
        return Err(Error::Precondition(format!("base function is not causal: f({a}) > f({b})")));
    }
    if let Some(e) = eps_schedule.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(Error::Parameter(format!("schedule entries must be positive, got {e}")));
    }
    let mut eps = eps_schedule.to_vec();
    eps.sort_by(f64::total_cmp);
    let mut star = true;
    let mut largest = [None, None];
    for (k, sign) in [1.0, -1.0].into_iter().enumerate() {
        let ok: Vec<bool> = eps
            .iter()
            .map(|&e| {
                let h: Vec<ExtReal> = f.iter().zip(g).map(|(&a, &b)| a + ExtReal::Finite(sign * e * b)).collect();
                causality_check(space, &h).map(|v| v.is_empty())
            })
            .collect::<Result<_>>()?;
        if let Some(i) = ok.iter().rposition(|&b| b) {
            largest[k] = Some(eps[i]);
            star &= ok[..i].iter().all(|&b| b);
        }
    }
    Ok(PerturbationReport { plus_eps: largest[0], minus_eps: largest[1], star_shaped: star })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> DiscreteSpacetime {
        DiscreteSpacetime::minkowski_grid(2, &[(-0.5, 3.5), (-0.5, 3.5)], &[4, 4]).unwrap()
    }

    fn time_plus(s: &DiscreteSpacetime) -> Vec<f64> {
        (0..s.len()).map(|i| s.coords(i).unwrap()[0] + 0.25 * s.coords(i).unwrap()[1]).collect()
    }

    #[test]
    fn causal_pairs_and_symmetry() {
        let s = grid();
        let f = time_plus(&s);
        for x in 0..s.len() {
            let d = null_distances_from(&s, &f, x).unwrap();
            assert_eq!(d[x], 0.0);
            for y in 0..s.len() {
                if s.leq(x, y) {
                    assert_eq!(d[y], f[y] - f[x]);
                }
                assert_eq!(d[y], null_distances_from(&s, &f, y).unwrap()[x]);
            }
        }
    }

    #[test]
    fn ties_are_rejected() {
        let s = grid();
        let f: Vec<f64> = (0..s.len()).map(|i| (s.coords(i).unwrap()[0] / 2.0).floor()).collect();
        assert!(matches!(null_distance(&s, &f, 0, 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn scaled_copy_is_a_perturbation_up_to_one() {
        let s = grid();
        let f: Vec<ExtReal> = time_plus(&s).into_iter().map(ExtReal::Finite).collect();
        let g: Vec<f64> = f.iter().map(|v| -v.finite().unwrap()).collect();
        let r = perturbation_membership(&s, &f, &g, &[0.25, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(r.plus_eps, Some(1.0));
        assert_eq!(r.minus_eps, Some(1.5));
        assert!(r.star_shaped && r.symmetric_member());
    }
}
