//! Weak-form d'Alembert comparison for Lorentz distance functions and their
//! `q`-powers on Minkowski space, checked by midpoint quadrature.

use super::smooth::{modulus, pairing, SmoothFunction};
use crate::curvature::tau_tilde;
use crate::error::{Error, Result};
use crate::norms::{DualityParams, HyperbolicNorm};

/// Nonnegative test function `A Π_a exp(−1/(1−((x_a−c_a)/r_a)²))`.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpSpec {
    pub centre: Vec<f64>,
    pub radius: Vec<f64>,
    pub amplitude: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeakForm {
    /// `f^o = −ℓ(·,o)^q/q` (past side: `ℓ(o,·)^q/q`) against `N τ̃(ℓ) φ`.
    Potential,
    /// `g^o = −ℓ(·,o)` (past side: `ℓ(o,·)`) against `(N τ̃(ℓ) − 1)/ℓ · φ`.
    Distance,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DalembertOptions {
    pub o: Vec<f64>,
    pub p: f64,
    pub k: f64,
    pub n: f64,
    pub form: WeakForm,
    /// `false`: `φ` supported in `I⁻(o)`; `true`: in `I⁺(o)`.
    pub past: bool,
    pub bump: BumpSpec,
    /// Quadrature cells per axis across the support of `φ`.
    pub resolutions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakFormLevel {
    pub cells: usize,
    pub h: f64,
    /// `∫ dφ(∇f)|df|^{p−2} d𝔪`.
    pub lhs: f64,
    /// Comparison integral (nonnegative for `K = 0`).
    pub rhs: f64,
    /// `rhs − lhs` (future) or `lhs + rhs` (past); nonnegative when the inequality holds.
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeakFormReport {
    pub levels: Vec<WeakFormLevel>,
    /// `|defect|` decreases strictly along the schedule.
    pub monotone: bool,
    /// `|defect| / |rhs|` at the finest level.
    pub relative_defect: f64,
    pub past: bool,
}

fn margin_ok(norm: &HyperbolicNorm, o: &[f64], corner: &[f64], past: bool) -> bool {
    let v: Vec<f64> = if past { corner.iter().zip(o).map(|(a, b)| a - b).collect() } else { o.iter().zip(corner).map(|(a, b)| a - b).collect() };
    norm.eval(&v).map(|l| l.is_chronological()).unwrap_or(false)
}

/// Evaluates both sides of the comparison on each resolution of the schedule.
pub fn dalembert_verify(norm: &HyperbolicNorm, opts: &DalembertOptions) -> Result<WeakFormReport> {
    if norm.metric().is_none() {
        return Err(Error::Unsupported("the weak-form check needs a Minkowskian model; hyperbolic ℓ^p has no smooth gradient oracle".into()));
    }
    let d = norm.dim();
    let b = &opts.bump;
    if opts.o.len() != d || b.centre.len() != d || b.radius.len() != d {
        return Err(Error::Dimension(format!("vertex, centre and radii must have {d} components")));
    }
    if !(b.amplitude > 0.0) || b.radius.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::Precondition("test function must be nonnegative with positive radii".into()));
    }
    if opts.resolutions.is_empty() {
        return Err(Error::Parameter("resolution schedule is empty".into()));
    }
    let q = DualityParams::from_p(opts.p)?.q;
    let phi = SmoothFunction::bump(b.centre.clone(), b.radius.clone(), b.amplitude);
    let f = match (opts.form, opts.past) {
        (WeakForm::Potential, false) => SmoothFunction::potential_to(opts.o.clone(), q),
        (WeakForm::Potential, true) => SmoothFunction::potential_from(opts.o.clone(), q),
        (WeakForm::Distance, false) => SmoothFunction::distance_to(opts.o.clone()),
        (WeakForm::Distance, true) => SmoothFunction::distance_from(opts.o.clone()),
    };
    let ell = |x: &[f64]| -> f64 {
        let v: Vec<f64> = if opts.past { x.iter().zip(&opts.o).map(|(a, b)| a - b).collect() } else { opts.o.iter().zip(x).map(|(a, b)| a - b).collect() };
        norm.eval(&v).ok().and_then(|l| l.finite_value()).unwrap_or(f64::NAN)
    };
    let mut levels = Vec::with_capacity(opts.resolutions.len());
    for &cells in &opts.resolutions {
        if cells < 2 {
            return Err(Error::Parameter("at least two quadrature cells per axis are needed".into()));
        }
        let hs: Vec<f64> = b.radius.iter().map(|r| 2.0 * r / cells as f64).collect();
        let h = hs.iter().cloned().fold(0.0, f64::max);
        // the support box enlarged by two cells must sit inside the cone
        for corner in 0..(1usize << d) {
            let c: Vec<f64> = (0..d)
                .map(|a| {
                    let s = if corner >> a & 1 == 1 { 1.0 } else { -1.0 };
                    b.centre[a] + s * (b.radius[a] + 2.0 * hs[a])
                })
                .collect();
            if !margin_ok(norm, &opts.o, &c, opts.past) {
                return Err(Error::Precondition(format!(
                    "test function support (with a two-cell margin) leaves the {} cone at {c:?}",
                    if opts.past { "future" } else { "past" }
                )));
            }
        }
        let vol: f64 = hs.iter().product();
        let (mut lhs, mut rhs) = (0.0, 0.0);
        let mut idx = vec![0usize; d];
        let total = cells.pow(d as u32);
        let mut x = vec![0.0; d];
        for k in 0..total {
            let mut rem = k;
            for a in (0..d).rev() {
                idx[a] = rem % cells;
                rem /= cells;
                x[a] = b.centre[a] - b.radius[a] + (idx[a] as f64 + 0.5) * hs[a];
            }
            let pv = phi.value(&x);
            if pv == 0.0 {
                continue;
            }
            let l = ell(&x);
            let m = modulus(norm, &f, &x)?.ok_or_else(|| Error::Numerical(format!("differential not causal at {x:?}")))?;
            let weight = match opts.form {
                WeakForm::Potential => m.powf(opts.p - 2.0),
                WeakForm::Distance => 1.0,
            };
            lhs += pairing(norm, &f, &phi, &x)? * weight * vol;
            let tt = tau_tilde(opts.k, opts.n, l)?;
            let c = match opts.form {
                WeakForm::Potential => opts.n * tt,
                WeakForm::Distance => (opts.n * tt - 1.0) / l,
            };
            rhs += c * pv * vol;
        }
        let defect = if opts.past { lhs + rhs } else { rhs - lhs };
        levels.push(WeakFormLevel { cells, h, lhs, rhs, defect });
    }
    let monotone = levels.windows(2).all(|w| w[1].defect.abs() < w[0].defect.abs());
    let last = levels.last().unwrap();
    Ok(WeakFormReport { relative_defect: last.defect.abs() / last.rhs.abs(), monotone, levels, past: opts.past })
}
