//! Lifting a discrete path of measures to a measure on sampled paths by
//! gluing optimal couplings of consecutive slices along their shared marginal.

use super::lq::{lq_distance, LqStatus};
use super::measure::DiscreteMeasure;
use crate::curves::SampledCausalPath;
use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::spacetime::DiscreteSpacetime;

/// Finitely many weighted sampled paths.
#[derive(Clone, Debug)]
pub struct DiscretePlan {
    pub times: Vec<f64>,
    /// `(points along the path, weight)`.
    pub atoms: Vec<(Vec<usize>, f64)>,
}

impl DiscretePlan {
    pub fn path(&self, k: usize) -> Result<SampledCausalPath> {
        SampledCausalPath::from_indices(self.times.clone(), self.atoms[k].0.clone())
    }

    /// The slice `(e_t)_# π` at the `k`-th time.
    pub fn slice(&self, n: usize, k: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for (p, m) in &self.atoms {
            w[p[k]] += m;
        }
        w
    }

    /// `Σ_paths w · Σ_k ℓ(γ_k, γ_{k+1})^q / (q Δ_k^{q−1})`.
    pub fn action(&self, space: &DiscreteSpacetime, q: f64) -> ExtReal {
        let mut total = ExtReal::ZERO;
        for (p, m) in &self.atoms {
            for k in 0..self.times.len() - 1 {
                let dt = self.times[k + 1] - self.times[k];
                total = total + space.ell(p[k], p[k + 1]).pow(q).scale(m * dt.powf(1.0 - q) / q);
            }
        }
        total
    }
}

#[derive(Clone, Debug)]
pub struct LiftReport {
    pub plan: DiscretePlan,
    /// `Σ_k ℓ_q(μ_k, μ_{k+1})^q / (q Δ_k^{q−1})`.
    pub dyadic_action: ExtReal,
    pub plan_action: ExtReal,
    /// Largest deviation between a plan slice and the input measure.
    pub slice_error: f64,
}

/// Glues optimal couplings of consecutive measures into a plan.
pub fn lift_to_plan(space: &DiscreteSpacetime, interpolation: &[(f64, DiscreteMeasure)], q: f64) -> Result<LiftReport> {
    if interpolation.len() < 2 {
        return Err(Error::Precondition("lifting needs at least two time slices".into()));
    }
    let times: Vec<f64> = interpolation.iter().map(|p| p.0).collect();
    if times[0] != 0.0 || *times.last().unwrap() != 1.0 || times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Precondition("slice times must increase strictly from 0 to 1".into()));
    }
    let n = space.len();
    let mu0 = &interpolation[0].1;
    mu0.check_on(space)?;
    let mut atoms: Vec<(Vec<usize>, f64)> = mu0.support().into_iter().map(|x| (vec![x], mu0.weight(x))).collect();
    let mut dyadic_action = ExtReal::ZERO;
    for k in 0..interpolation.len() - 1 {
        let (a, b) = (&interpolation[k].1, &interpolation[k + 1].1);
        let r = lq_distance(space, a, b, q)?;
        if r.status == LqStatus::NoCausalCoupling {
            return Err(Error::Precondition(format!("slices {k} and {} admit no causal coupling", k + 1)));
        }
        let dt = times[k + 1] - times[k];
        dyadic_action = dyadic_action + r.cost(q).scale(dt.powf(1.0 - q));

        // sequential allocation of coupling mass to the paths ending at each point
        let mut by_end: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, (p, _)) in atoms.iter().enumerate() {
            by_end[*p.last().unwrap()].push(i);
        }
        let mut out_by_start: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(x, y, m) in &r.coupling.entries {
            out_by_start[x].push((y, m));
        }
        let mut next = Vec::with_capacity(atoms.len() + r.coupling.entries.len());
        for x in 0..n {
            let (paths, outs) = (&by_end[x], &out_by_start[x]);
            if paths.is_empty() {
                continue;
            }
            let (mut pi, mut oi) = (0usize, 0usize);
            let mut left_p = atoms[paths[0]].1;
            let mut left_o = outs.first().map_or(0.0, |o| o.1);
            while pi < paths.len() && oi < outs.len() {
                let m = left_p.min(left_o);
                if m > 0.0 {
                    let mut p = atoms[paths[pi]].0.clone();
                    p.push(outs[oi].0);
                    next.push((p, m));
                }
                left_p -= m;
                left_o -= m;
                // advance whichever side is exhausted (up to round-off)
                let scale = atoms[paths[pi]].1.max(outs[oi].1) * 1e-12;
                if left_p <= scale {
                    pi += 1;
                    if pi < paths.len() {
                        left_p = atoms[paths[pi]].1;
                    }
                }
                if left_o <= scale {
                    oi += 1;
                    if oi < outs.len() {
                        left_o = outs[oi].1;
                    }
                }
            }
        }
        atoms = next;
    }
    let plan = DiscretePlan { times, atoms };
    let mut slice_error = 0.0f64;
    for (k, (_, m)) in interpolation.iter().enumerate() {
        let s = plan.slice(n, k);
        slice_error = s.iter().zip(m.weights()).map(|(a, b)| (a - b).abs()).fold(slice_error, f64::max);
    }
    let plan_action = plan.action(space, q);
    Ok(LiftReport { plan, dyadic_action, plan_action, slice_error })
}
