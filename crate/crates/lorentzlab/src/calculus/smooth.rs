//! Closed-form functions on Minkowski space with analytic differentials, where
//! the modulus `|df|` is the dual Minkowski norm of the differential.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::norms::HyperbolicNorm;

type Field = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type CoField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A function with its differential (a covector field).
#[derive(Clone)]
pub struct SmoothFunction {
    value: Field,
    differential: CoField,
}

impl std::fmt::Debug for SmoothFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SmoothFunction")
    }
}

fn minkowski_sq(v: &[f64]) -> f64 {
    v[0] * v[0] - v[1..].iter().map(|x| x * x).sum::<f64>()
}

fn lower(v: &[f64]) -> Vec<f64> {
    v.iter().enumerate().map(|(i, &x)| if i == 0 { x } else { -x }).collect()
}

/// `s ↦ exp(−1/(1−s²))` on `(−1, 1)`, and its derivative.
fn bump1(s: f64) -> (f64, f64) {
    if s.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let u = 1.0 - s * s;
    let v = (-1.0 / u).exp();
    (v, v * (-2.0 * s / (u * u)))
}

impl SmoothFunction {
    pub fn new(value: impl Fn(&[f64]) -> f64 + Send + Sync + 'static, differential: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        SmoothFunction { value: Arc::new(value), differential: Arc::new(differential) }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.value)(x)
    }

    pub fn differential(&self, x: &[f64]) -> Vec<f64> {
        (self.differential)(x)
    }

    /// `x ↦ ⟨ζ, x⟩`.
    pub fn linear(zeta: Vec<f64>) -> Self {
        let z = zeta.clone();
        SmoothFunction::new(move |x| z.iter().zip(x).map(|(a, b)| a * b).sum(), move |_| zeta.clone())
    }

    /// `g_o = ℓ(o, ·)` on `I⁺(o)`.
    pub fn distance_from(o: Vec<f64>) -> Self {
        let o2 = o.clone();
        SmoothFunction::new(
            move |x| {
                let v: Vec<f64> = x.iter().zip(&o).map(|(a, b)| a - b).collect();
                minkowski_sq(&v).sqrt()
            },
            move |x| {
                let v: Vec<f64> = x.iter().zip(&o2).map(|(a, b)| a - b).collect();
                let l = minkowski_sq(&v).sqrt();
                lower(&v).into_iter().map(|c| c / l).collect()
            },
        )
    }

    /// `g^o = −ℓ(·, o)` on `I⁻(o)`.
    pub fn distance_to(o: Vec<f64>) -> Self {
        Self::potential_to_raw(o, None)
    }

    /// `f^o = −ℓ(·, o)^q / q` on `I⁻(o)`.
    pub fn potential_to(o: Vec<f64>, q: f64) -> Self {
        Self::potential_to_raw(o, Some(q))
    }

    /// `f_o = ℓ(o, ·)^q / q` on `I⁺(o)`.
    pub fn potential_from(o: Vec<f64>, q: f64) -> Self {
        let o2 = o.clone();
        SmoothFunction::new(
            move |x| {
                let v: Vec<f64> = x.iter().zip(&o).map(|(a, b)| a - b).collect();
                minkowski_sq(&v).sqrt().powf(q) / q
            },
            move |x| {
                let v: Vec<f64> = x.iter().zip(&o2).map(|(a, b)| a - b).collect();
                let l = minkowski_sq(&v).sqrt();
                lower(&v).into_iter().map(|c| c * l.powf(q - 2.0)).collect()
            },
        )
    }

    fn potential_to_raw(o: Vec<f64>, q: Option<f64>) -> Self {
        let o2 = o.clone();
        SmoothFunction::new(
            move |x| {
                let v: Vec<f64> = o.iter().zip(x).map(|(a, b)| a - b).collect();
                let l = minkowski_sq(&v).sqrt();
                match q {
                    Some(q) => -l.powf(q) / q,
                    None => -l,
                }
            },
            move |x| {
                let v: Vec<f64> = o2.iter().zip(x).map(|(a, b)| a - b).collect();
                let l = minkowski_sq(&v).sqrt();
                // d(−ℓ(·,o)^q/q) = ℓ^{q−1} (o−x)♭/ℓ
                let w = match q {
                    Some(q) => l.powf(q - 2.0),
                    None => 1.0 / l,
                };
                lower(&v).into_iter().map(|c| c * w).collect()
            },
        )
    }

    /// `A Π_a b((x_a − c_a)/r_a)` with `b(s) = exp(−1/(1−s²))`.
    pub fn bump(centre: Vec<f64>, radius: Vec<f64>, amplitude: f64) -> Self {
        let (c2, r2) = (centre.clone(), radius.clone());
        SmoothFunction::new(
            move |x| amplitude * x.iter().zip(&centre).zip(&radius).map(|((x, c), r)| bump1((x - c) / r).0).product::<f64>(),
            move |x| {
                let parts: Vec<(f64, f64)> = x.iter().zip(&c2).zip(&r2).map(|((x, c), r)| bump1((x - c) / r)).collect();
                (0..x.len())
                    .map(|a| {
                        let others: f64 = parts.iter().enumerate().filter(|(b, _)| *b != a).map(|(_, p)| p.0).product();
                        amplitude * parts[a].1 / r2[a] * others
                    })
                    .collect()
            },
        )
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        let (a, b) = (self.clone(), self.clone());
        SmoothFunction::new(move |x| lambda * a.value(x), move |x| b.differential(x).into_iter().map(|c| lambda * c).collect())
    }

    /// `λ₁ f + λ₂ g`.
    pub fn combine(&self, l1: f64, other: &SmoothFunction, l2: f64) -> Self {
        let (f, g, f2, g2) = (self.clone(), other.clone(), self.clone(), other.clone());
        SmoothFunction::new(
            move |x| l1 * f.value(x) + l2 * g.value(x),
            move |x| f2.differential(x).iter().zip(g2.differential(x)).map(|(a, b)| l1 * a + l2 * b).collect(),
        )
    }

    pub fn product(&self, other: &SmoothFunction) -> Self {
        let (f, g, f2, g2) = (self.clone(), other.clone(), self.clone(), other.clone());
        SmoothFunction::new(
            move |x| f.value(x) * g.value(x),
            move |x| {
                let (fv, gv) = (f2.value(x), g2.value(x));
                f2.differential(x).iter().zip(g2.differential(x)).map(|(a, b)| gv * a + fv * b).collect()
            },
        )
    }

    /// `φ ∘ f` given `φ` and `φ′`.
    pub fn compose(&self, phi: impl Fn(f64) -> f64 + Send + Sync + 'static, dphi: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let (f, f2) = (self.clone(), self.clone());
        let dphi = Arc::new(dphi);
        SmoothFunction::new(move |x| phi(f.value(x)), move |x| {
            let s = dphi(f2.value(x));
            f2.differential(x).into_iter().map(|c| s * c).collect()
        })
    }
}

fn require_minkowski(norm: &HyperbolicNorm, what: &str) -> Result<()> {
    if norm.metric().is_none() {
        return Err(Error::Unsupported(format!("{what} needs a Minkowskian (inner-product) model")));
    }
    Ok(())
}

/// `|df|(x)`: dual norm of the differential, `None` where `df` is not future causal.
pub fn modulus(norm: &HyperbolicNorm, f: &SmoothFunction, x: &[f64]) -> Result<Option<f64>> {
    let d = f.differential(x);
    if d.iter().any(|c| !c.is_finite()) {
        return Ok(None);
    }
    Ok(norm.dual_eval(&d)?.finite_value())
}

/// `dg(∇f)`: the inverse metric paired with both differentials.
pub fn pairing(norm: &HyperbolicNorm, f: &SmoothFunction, g: &SmoothFunction, x: &[f64]) -> Result<f64> {
    require_minkowski(norm, "the gradient pairing")?;
    let grad = norm.sharp(&f.differential(x))?;
    Ok(grad.iter().zip(g.differential(x)).map(|(a, b)| a * b).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerticalQuotientReport {
    pub eps: Vec<f64>,
    /// `quotients[i][k] = (|d(f+ε_k g)|^p − |df|^p)/(pε_k)` at sample `i`; `−∞` where `f + εg` is not causal.
    pub quotients: Vec<Vec<f64>>,
    /// Linear extrapolation to `ε → 0` from the two smallest `ε`.
    pub limit: Vec<f64>,
    /// `dg(∇f)|df|^{p−2}`.
    pub analytic: Vec<f64>,
    /// Quotients are nonincreasing in `ε` at every sample.
    pub monotone: bool,
}

/// Vertical right difference quotients of `|d·|^p/p` at `f` in direction `g`.
pub fn vertical_quotient(
    norm: &HyperbolicNorm,
    f: &SmoothFunction,
    g: &SmoothFunction,
    p: f64,
    eps_schedule: &[f64],
    samples: &[Vec<f64>],
) -> Result<VerticalQuotientReport> {
    require_minkowski(norm, "the vertical quotient")?;
    if !(p < 1.0) || p == 0.0 {
        return Err(Error::Parameter(format!("p must lie in (−∞, 0) ∪ (0, 1), got {p}")));
    }
    if eps_schedule.is_empty() || eps_schedule.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::Parameter("ε schedule must be nonempty and positive".into()));
    }
    let mut eps = eps_schedule.to_vec();
    eps.sort_by(f64::total_cmp);
    let mut quotients = Vec::with_capacity(samples.len());
    let mut limit = Vec::with_capacity(samples.len());
    let mut analytic = Vec::with_capacity(samples.len());
    let mut monotone = true;
    for x in samples {
        let Some(base) = modulus(norm, f, x)? else {
            return Err(Error::Precondition(format!("f is not causal at the sample {x:?}")));
        };
        let row: Vec<f64> = eps
            .iter()
            .map(|&e| {
                let h = f.combine(1.0, g, e);
                Ok(match modulus(norm, &h, x)? {
                    Some(m) => (m.powf(p) - base.powf(p)) / (p * e),
                    None => f64::NEG_INFINITY,
                })
            })
            .collect::<Result<_>>()?;
        let scale = row.iter().filter(|v| v.is_finite()).fold(1.0f64, |a, v| a.max(v.abs()));
        monotone &= row.windows(2).all(|w| w[1] <= w[0] + 1e-12 * scale);
        let lim = if row.len() >= 2 && row[0].is_finite() && row[1].is_finite() {
            row[0] - eps[0] * (row[1] - row[0]) / (eps[1] - eps[0])
        } else {
            row[0]
        };
        limit.push(lim);
        analytic.push(pairing(norm, f, g, x)? * base.powf(p - 2.0));
        quotients.push(row);
    }
    Ok(VerticalQuotientReport { eps, quotients, limit, analytic, monotone })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RulesReport {
    /// `min |d(λ₁f+λ₂g)| − λ₁|df| − λ₂|dg|` (nonnegative by concavity).
    pub concavity_gap_min: f64,
    pub concavity_gap_max: f64,
    /// `max | |d(φ∘f)| − φ′(f)|df| |`.
    pub chain_error: f64,
    /// `min |d(fg)| − f|dg| − g|df|` over samples with `f, g > 0`.
    pub leibniz_gap_min: f64,
    /// `max | |d(λf)| − λ|df| |`.
    pub homogeneity_error: f64,
    pub samples: usize,
}

/// Samples the calculus rules for the modulus of the differential; `composite`
/// is `φ ∘ f` (see [`SmoothFunction::compose`]) and `dphi` is `φ′`.
pub fn calculus_rules_check(
    norm: &HyperbolicNorm,
    f: &SmoothFunction,
    g: &SmoothFunction,
    composite: &SmoothFunction,
    dphi: &dyn Fn(f64) -> f64,
    lambdas: (f64, f64),
    samples: &[Vec<f64>],
) -> Result<RulesReport> {
    require_minkowski(norm, "the calculus rules")?;
    let (l1, l2) = lambdas;
    if !(l1 >= 0.0 && l2 >= 0.0) {
        return Err(Error::Parameter("combination weights must be nonnegative".into()));
    }
    let m = |h: &SmoothFunction, x: &[f64]| -> Result<f64> {
        modulus(norm, h, x)?.ok_or_else(|| Error::Precondition(format!("function is not causal at {x:?}")))
    };
    let combo = f.combine(l1, g, l2);
    let prod = f.product(g);
    let scaled = f.scaled(l1);
    let mut r = RulesReport {
        concavity_gap_min: f64::INFINITY,
        concavity_gap_max: f64::NEG_INFINITY,
        chain_error: 0.0,
        leibniz_gap_min: f64::INFINITY,
        homogeneity_error: 0.0,
        samples: samples.len(),
    };
    for x in samples {
        let (df, dg) = (m(f, x)?, m(g, x)?);
        let gap = m(&combo, x)? - l1 * df - l2 * dg;
        r.concavity_gap_min = r.concavity_gap_min.min(gap);
        r.concavity_gap_max = r.concavity_gap_max.max(gap);
        let fv = f.value(x);
        let slope = dphi(fv);
        let comp = m(composite, x)?;
        r.chain_error = r.chain_error.max((comp - slope * df).abs());
        let gv = g.value(x);
        if fv > 0.0 && gv > 0.0 {
            r.leibniz_gap_min = r.leibniz_gap_min.min(m(&prod, x)? - fv * dg - gv * df);
        }
        r.homogeneity_error = r.homogeneity_error.max((m(&scaled, x)? - l1 * df).abs());
    }
    Ok(r)
}

/// `max |2|df|² + 2|d(f+g)|² − |dg|² − |d(2f+g)|²|` over the samples.
pub fn minkowskianity_defect(norm: &HyperbolicNorm, f: &SmoothFunction, g: &SmoothFunction, samples: &[Vec<f64>]) -> Result<f64> {
    let sq = |h: &SmoothFunction, x: &[f64]| -> Result<f64> {
        let v = modulus(norm, h, x)?.ok_or_else(|| Error::Precondition(format!("function is not causal at {x:?}")))?;
        Ok(v * v)
    };
    let (s1, s2) = (f.combine(1.0, g, 1.0), f.combine(2.0, g, 1.0));
    let mut worst = 0.0f64;
    for x in samples {
        let d = 2.0 * sq(f, x)? + 2.0 * sq(&s1, x)? - sq(g, x)? - sq(&s2, x)?;
        worst = worst.max(d.abs());
    }
    Ok(worst)
}
