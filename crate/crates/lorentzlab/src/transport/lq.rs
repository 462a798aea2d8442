//! The `q`-Lorentz–Wasserstein distance `ℓ_q(μ, ν) = sup_π [∫ ℓ^q dπ]^{1/q}`
//! over causal couplings, solved exactly as a transportation problem on the
//! causal bipartite graph between the supports.

use super::measure::{Coupling, DiscreteMeasure};
use super::simplex::{Pricing, SolveStatus, TransportProblem};
use crate::error::{Error, Result};
use crate::extended::{ExtReal, ExtendedTime};
use crate::spacetime::DiscreteSpacetime;

/// Rejects `q = 0` and `q ≥ 1`.
pub fn check_exponent(q: f64) -> Result<()> {
    if q == 0.0 || !(q < 1.0) || !q.is_finite() {
        return Err(Error::Parameter(format!("transport exponent must satisfy 0 ≠ q < 1, got {q}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LqOptions {
    pub pricing: Pricing,
    /// Absolute tolerance for deciding whether infinite arcs carry mass.
    pub tol: f64,
}

impl Default for LqOptions {
    fn default() -> Self {
        LqOptions { pricing: Pricing::Bland, tol: 1e-10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LqStatus {
    Optimal,
    /// `Π_≤(μ, ν) = ∅`; the value is `−∞`.
    NoCausalCoupling,
    /// `q < 0` and every causal coupling charges a null pair; the value is 0
    /// and the returned coupling is merely feasible.
    Degenerate,
    /// `q > 0` and some coupling charges pairs with `ℓ = +∞`.
    Infinite,
}

#[derive(Clone, Debug)]
pub struct LqResult {
    pub value: ExtendedTime,
    pub status: LqStatus,
    pub coupling: Coupling,
    /// `∫ ℓ^q dπ` for the returned coupling.
    pub objective: ExtReal,
    /// Complementary-slackness residual of the final basis.
    pub cs_residual: f64,
}

impl LqResult {
    fn empty(value: ExtendedTime, status: LqStatus) -> Self {
        LqResult { value, status, coupling: Coupling::default(), objective: ExtReal::NegInf, cs_residual: 0.0 }
    }

    /// `ℓ_q^q / q`, the optimal transport cost.
    pub fn cost(&self, q: f64) -> ExtReal {
        self.value.pow_over_q(q)
    }
}

/// `[∫ ℓ^q dπ]^{1/q}` of a given coupling; `−∞` if it charges a non-causal pair.
pub fn coupling_value(space: &DiscreteSpacetime, pi: &Coupling, q: f64) -> (ExtendedTime, ExtReal) {
    let mut s = ExtReal::ZERO;
    for &(x, y, m) in &pi.entries {
        if m <= 0.0 {
            continue;
        }
        match space.ell(x, y).pow(q) {
            ExtReal::NegInf => return (ExtendedTime::NEG_INF, ExtReal::NegInf),
            v => s = s + v.scale(m),
        }
    }
    (integral_root(s, q), s)
}

/// `S^{1/q}` for `S = ∫ ℓ^q dπ ∈ [0, +∞]`.
fn integral_root(s: ExtReal, q: f64) -> ExtendedTime {
    let v = match s {
        ExtReal::PosInf => {
            if q > 0.0 {
                ExtReal::PosInf
            } else {
                ExtReal::ZERO
            }
        }
        ExtReal::Finite(x) if x <= 0.0 => {
            if q > 0.0 {
                ExtReal::ZERO
            } else {
                ExtReal::PosInf
            }
        }
        ExtReal::Finite(x) => ExtReal::Finite(x.powf(1.0 / q)),
        ExtReal::NegInf => ExtReal::NegInf,
    };
    ExtendedTime::new(v).expect("roots of nonnegative integrals are admissible")
}

pub fn lq_distance(space: &DiscreteSpacetime, mu: &DiscreteMeasure, nu: &DiscreteMeasure, q: f64) -> Result<LqResult> {
    lq_distance_with(space, mu, nu, q, &LqOptions::default())
}

fn solve_arcs(
    a_sup: &[usize],
    b_sup: &[usize],
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    arcs: &[(usize, usize, f64)],
    pricing: Pricing,
) -> Result<(SolveStatus, Coupling, f64, f64)> {
    let problem = TransportProblem {
        supply: a_sup.iter().map(|&x| mu.weight(x)).collect(),
        demand: b_sup.iter().map(|&y| nu.weight(y)).collect(),
        arcs: arcs.to_vec(),
    };
    let sol = problem.solve(pricing)?;
    let entries = arcs
        .iter()
        .zip(&sol.flow)
        .filter(|(_, &f)| f > 0.0)
        .map(|(&(i, j, _), &f)| (a_sup[i], b_sup[j], f))
        .collect();
    Ok((sol.status, Coupling { entries }, sol.cost, sol.slackness_residual + sol.dual_residual))
}

pub fn lq_distance_with(
    space: &DiscreteSpacetime,
    mu: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    q: f64,
    opts: &LqOptions,
) -> Result<LqResult> {
    check_exponent(q)?;
    mu.check_on(space)?;
    nu.check_on(space)?;
    let (a_sup, b_sup) = (mu.support(), nu.support());

    // a Dirac marginal forces the product coupling
    if a_sup.len() == 1 || b_sup.len() == 1 {
        let pi = Coupling::product(mu, nu);
        if pi.acausal_witness(space).is_some() {
            return Ok(LqResult::empty(ExtendedTime::NEG_INF, LqStatus::NoCausalCoupling));
        }
        let (value, objective) = coupling_value(space, &pi, q);
        let status = match (q > 0.0, value) {
            (true, v) if v == ExtendedTime::POS_INF => LqStatus::Infinite,
            (false, v) if v == ExtendedTime::ZERO => LqStatus::Degenerate,
            _ => LqStatus::Optimal,
        };
        return Ok(LqResult { value, status, coupling: pi, objective, cs_residual: 0.0 });
    }

    // classify causal arcs
    let mut finite = Vec::new();
    let mut infinite = Vec::new();
    let mut null = Vec::new();
    for (i, &x) in a_sup.iter().enumerate() {
        for (j, &y) in b_sup.iter().enumerate() {
            match space.ell(x, y).value() {
                ExtReal::NegInf => {}
                ExtReal::PosInf => infinite.push((i, j)),
                ExtReal::Finite(v) if v == 0.0 => null.push((i, j)),
                ExtReal::Finite(v) => finite.push((i, j, v)),
            }
        }
    }

    if q > 0.0 {
        let mut arcs: Vec<(usize, usize, f64)> = finite.iter().map(|&(i, j, _)| (i, j, 0.0)).collect();
        arcs.extend(null.iter().map(|&(i, j)| (i, j, 0.0)));
        if !infinite.is_empty() {
            let mut aux = arcs.clone();
            aux.extend(infinite.iter().map(|&(i, j)| (i, j, -1.0)));
            let (status, pi, cost, res) = solve_arcs(&a_sup, &b_sup, mu, nu, &aux, opts.pricing)?;
            if status == SolveStatus::Infeasible {
                return Ok(LqResult::empty(ExtendedTime::NEG_INF, LqStatus::NoCausalCoupling));
            }
            if cost < -opts.tol {
                return Ok(LqResult {
                    value: ExtendedTime::POS_INF,
                    status: LqStatus::Infinite,
                    coupling: pi,
                    objective: ExtReal::PosInf,
                    cs_residual: res,
                });
            }
        }
        let arcs: Vec<_> = finite
            .iter()
            .map(|&(i, j, v)| (i, j, -v.powf(q)))
            .chain(null.iter().map(|&(i, j)| (i, j, 0.0)))
            .collect();
        let (status, pi, _, res) = solve_arcs(&a_sup, &b_sup, mu, nu, &arcs, opts.pricing)?;
        if status == SolveStatus::Infeasible {
            return Ok(LqResult::empty(ExtendedTime::NEG_INF, LqStatus::NoCausalCoupling));
        }
        let (value, objective) = coupling_value(space, &pi, q);
        return Ok(LqResult { value, status: LqStatus::Optimal, coupling: pi, objective, cs_residual: res });
    }

    // q < 0: minimise ∫ ℓ^q, avoiding null pairs whenever possible
    let arcs: Vec<_> = finite
        .iter()
        .map(|&(i, j, v)| (i, j, v.powf(q)))
        .chain(infinite.iter().map(|&(i, j)| (i, j, 0.0)))
        .collect();
    let (status, pi, _, res) = solve_arcs(&a_sup, &b_sup, mu, nu, &arcs, opts.pricing)?;
    if status == SolveStatus::Optimal {
        let (value, objective) = coupling_value(space, &pi, q);
        return Ok(LqResult { value, status: LqStatus::Optimal, coupling: pi, objective, cs_residual: res });
    }
    if null.is_empty() {
        return Ok(LqResult::empty(ExtendedTime::NEG_INF, LqStatus::NoCausalCoupling));
    }
    let mut arcs: Vec<_> = arcs.iter().map(|&(i, j, _)| (i, j, 0.0)).collect();
    arcs.extend(null.iter().map(|&(i, j)| (i, j, 1.0)));
    let (status, pi, _, res) = solve_arcs(&a_sup, &b_sup, mu, nu, &arcs, opts.pricing)?;
    if status == SolveStatus::Infeasible {
        return Ok(LqResult::empty(ExtendedTime::NEG_INF, LqStatus::NoCausalCoupling));
    }
    Ok(LqResult { value: ExtendedTime::ZERO, status: LqStatus::Degenerate, coupling: pi, objective: ExtReal::PosInf, cs_residual: res })
}

/// `ℓ_q(μ,ν) − ℓ_q(μ,ξ) − ℓ_q(ξ,ν)` under the extended-real conventions;
/// nonnegative (up to round-off) by the reverse triangle inequality.
pub fn reverse_triangle_lq(
    space: &DiscreteSpacetime,
    mu: &DiscreteMeasure,
    xi: &DiscreteMeasure,
    nu: &DiscreteMeasure,
    q: f64,
) -> Result<ExtReal> {
    let a = lq_distance(space, mu, nu, q)?.value.value();
    let b = lq_distance(space, mu, xi, q)?.value.value();
    let c = lq_distance(space, xi, nu, q)?.value.value();
    Ok((a - b) - c)
}
