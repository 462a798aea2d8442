//! Kantorovich potentials for the cost `ℓ^q/q`: transforms, superdifferentials,
//! the duality gap and cyclical monotonicity of supports.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lq::{check_exponent, lq_distance};
use super::measure::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::spacetime::DiscreteSpacetime;

#[derive(Clone, Debug, PartialEq)]
pub struct KantorovichPotential {
    pub values: Vec<ExtReal>,
    pub q: f64,
}

impl KantorovichPotential {
    pub fn new(values: Vec<ExtReal>, q: f64) -> Result<Self> {
        check_exponent(q)?;
        Ok(KantorovichPotential { values, q })
    }

    pub fn from_f64(values: &[f64], q: f64) -> Result<Self> {
        Self::new(values.iter().map(|&v| ExtReal::from_f64(v)).collect(), q)
    }

    /// `f^o = −ℓ(·, o)^q / q` on `I⁻(o)`, `−∞` elsewhere.
    pub fn towards(space: &DiscreteSpacetime, o: usize, q: f64) -> Result<Self> {
        space.check_point(o)?;
        let values = (0..space.len())
            .map(|x| {
                let l = space.ell(x, o);
                if l.is_chronological() {
                    -l.pow_over_q(q)
                } else {
                    ExtReal::NegInf
                }
            })
            .collect();
        Self::new(values, q)
    }

    /// `f^{(ℓ^q/q)}(y) = sup_{x ≤ y} f(x) + ℓ(x,y)^q/q` at the given points (all if `None`).
    pub fn transform(&self, space: &DiscreteSpacetime, targets: Option<&[usize]>) -> Result<Vec<ExtReal>> {
        if self.values.len() != space.len() {
            return Err(Error::Dimension(format!("potential on {} points, spacetime has {}", self.values.len(), space.len())));
        }
        let all: Vec<usize>;
        let ys = match targets {
            Some(t) => t,
            None => {
                all = (0..space.len()).collect();
                &all
            }
        };
        let mut out = Vec::with_capacity(ys.len());
        for &y in ys {
            space.check_point(y)?;
            let mut best = ExtReal::NegInf; // sup ∅
            for x in 0..space.len() {
                let c = space.ell(x, y).pow_over_q(self.q);
                if c == ExtReal::NegInf && !space.leq(x, y) {
                    continue;
                }
                best = best.max(self.values[x] + c);
            }
            out.push(best);
        }
        Ok(out)
    }

    /// Pairs `(x, y)` with `x ≤ y` attaining the transform with a finite value,
    /// `y` ranging over `targets` (all points if `None`).
    pub fn superdifferential(&self, space: &DiscreteSpacetime, targets: Option<&[usize]>, tol: f64) -> Result<Vec<(usize, usize)>> {
        let all: Vec<usize> = (0..space.len()).collect();
        let ys = targets.unwrap_or(&all);
        let fc = self.transform(space, Some(ys))?;
        let mut pairs = Vec::new();
        for (k, &y) in ys.iter().enumerate() {
            let Some(top) = fc[k].finite() else { continue };
            for x in 0..space.len() {
                if !space.leq(x, y) {
                    continue;
                }
                if let Some(v) = (self.values[x] + space.ell(x, y).pow_over_q(self.q)).finite() {
                    if (top - v).abs() <= tol {
                        pairs.push((x, y));
                    }
                }
            }
        }
        Ok(pairs)
    }

    /// First causal pair where the potential decreases.
    pub fn causality_witness(values: &[ExtReal], space: &DiscreteSpacetime) -> Option<(usize, usize)> {
        for x in 0..space.len() {
            for y in 0..space.len() {
                if space.leq(x, y) && values[x] > values[y] {
                    return Some((x, y));
                }
            }
        }
        None
    }
}

fn integrate(values: &[ExtReal], m: &DiscreteMeasure, points: &[usize]) -> ExtReal {
    points.iter().zip(values).fold(ExtReal::ZERO, |acc, (&p, &v)| acc + v.scale(m.weight(p)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualityGap {
    /// `∫ f^{(ℓ^q/q)} dν − ∫ f dμ`.
    pub dual: ExtReal,
    /// `ℓ_q(μ,ν)^q / q`.
    pub primal: ExtReal,
    /// `dual − primal`: nonnegative by weak duality, zero for a strong potential.
    pub gap: ExtReal,
}

/// Compares the Kantorovich dual value of `f` with the optimal cost.
pub fn duality_gap(space: &DiscreteSpacetime, mu: &DiscreteMeasure, nu: &DiscreteMeasure, f: &KantorovichPotential) -> Result<DualityGap> {
    let lq = lq_distance(space, mu, nu, f.q)?;
    if lq.value == crate::ExtendedTime::NEG_INF {
        return Err(Error::Precondition("no causal coupling exists, the duality gap is undefined".into()));
    }
    let primal = lq.cost(f.q);
    let b = nu.support();
    let a = mu.support();
    let fc = f.transform(space, Some(&b))?;
    let fa: Vec<ExtReal> = a.iter().map(|&x| f.values[x]).collect();
    let dual = integrate(&fc, nu, &b) - integrate(&fa, mu, &a);
    Ok(DualityGap { dual, primal, gap: dual - primal })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicReport {
    pub passed: bool,
    pub permutations_checked: usize,
    pub exhaustive: bool,
    /// Largest excess of a permuted cost over the identity cost.
    pub worst_excess: f64,
    /// Assignment `σ` (pair `i` receives source `σ(i)`) attaining the worst excess.
    pub witness: Option<Vec<usize>>,
    /// Pairs that are not chronological.
    pub non_chronological: Vec<usize>,
}

/// Checks `(1/q)Σ ℓ(x_i,y_i)^q ≥ (1/q)Σ ℓ(x_σ(i),y_i)^q`: all permutations for
/// up to 8 pairs, otherwise `samples` seeded random permutations.
pub fn cyclical_monotonicity_check(
    space: &DiscreteSpacetime,
    pairs: &[(usize, usize)],
    q: f64,
    tol: f64,
    samples: usize,
    seed: u64,
) -> Result<CyclicReport> {
    check_exponent(q)?;
    for &(x, y) in pairs {
        space.check_point(x)?;
        space.check_point(y)?;
    }
    let n = pairs.len();
    let cost = |i: usize, j: usize| space.ell(pairs[i].0, pairs[j].1).pow_over_q(q);
    let base = (0..n).fold(ExtReal::ZERO, |a, i| a + cost(i, i));
    let non_chronological = (0..n).filter(|&i| !space.ll(pairs[i].0, pairs[i].1)).collect();
    let mut report = CyclicReport {
        passed: true,
        permutations_checked: 0,
        exhaustive: n <= 8,
        worst_excess: f64::NEG_INFINITY,
        witness: None,
        non_chronological,
    };
    let visit = |sigma: &[usize], report: &mut CyclicReport| {
        report.permutations_checked += 1;
        let s = (0..n).fold(ExtReal::ZERO, |a, i| a + cost(sigma[i], i));
        let excess = match (s, base) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a - b,
            (ExtReal::NegInf, _) | (_, ExtReal::PosInf) => f64::NEG_INFINITY,
            _ => f64::INFINITY,
        };
        if excess > report.worst_excess {
            report.worst_excess = excess;
            report.witness = Some(sigma.to_vec());
        }
        if excess > tol {
            report.passed = false;
        }
    };
    let mut sigma: Vec<usize> = (0..n).collect();
    if n <= 8 {
        // Heap's algorithm
        let mut c = vec![0usize; n];
        visit(&sigma, &mut report);
        let mut i = 0;
        while i < n {
            if c[i] < i {
                if i % 2 == 0 {
                    sigma.swap(0, i);
                } else {
                    sigma.swap(c[i], i);
                }
                visit(&sigma, &mut report);
                c[i] += 1;
                i = 0;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        visit(&sigma, &mut report);
        for _ in 0..samples {
            sigma.shuffle(&mut rng);
            visit(&sigma, &mut report);
        }
    }
    if n == 0 {
        report.worst_excess = 0.0;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExtendedTime;

    fn t(x: f64) -> ExtendedTime {
        ExtendedTime::finite(x).unwrap()
    }
    const NI: ExtendedTime = ExtendedTime::NEG_INF;

    fn chain() -> DiscreteSpacetime {
        let ell = vec![vec![t(0.0), t(1.0), t(2.0)], vec![NI, t(0.0), t(1.0)], vec![NI, NI, t(0.0)]];
        DiscreteSpacetime::from_matrix(ell, vec![1.0; 3]).unwrap()
    }

    #[test]
    fn transform_of_distance_potential_vanishes_at_the_target() {
        let s = chain();
        for q in [0.5, -1.0] {
            let f = KantorovichPotential::towards(&s, 2, q).unwrap();
            let fc = f.transform(&s, None).unwrap();
            assert_eq!(fc[2], ExtReal::ZERO);
            assert!(KantorovichPotential::causality_witness(&fc, &s).is_none());
            let sd = f.superdifferential(&s, Some(&[2]), 1e-12).unwrap();
            assert_eq!(sd, vec![(0, 2), (1, 2)]);
        }
    }

    #[test]
    fn zero_potential_transform_unrolls_the_definition() {
        let s = chain();
        let f = KantorovichPotential::from_f64(&[0.0; 3], 0.5).unwrap();
        let fc = f.transform(&s, None).unwrap();
        assert_eq!(fc, vec![ExtReal::ZERO, ExtReal::Finite(2.0), ExtReal::Finite(2.0 * 2f64.sqrt())]);
    }

    #[test]
    fn strong_potential_for_a_dirac_target() {
        let s = chain();
        let mu = DiscreteMeasure::new(vec![0.5, 0.5, 0.0]).unwrap();
        let nu = DiscreteMeasure::dirac(3, 2).unwrap();
        let f = KantorovichPotential::towards(&s, 2, 0.5).unwrap();
        let g = duality_gap(&s, &mu, &nu, &f).unwrap();
        assert!(g.gap.finite().unwrap().abs() < 1e-12);
    }

    #[test]
    fn swapped_assignment_breaks_monotonicity() {
        // x0 ≪ y0, x1 ≪ y1 strongly, crossed pairs weakly related
        let ell = vec![
            vec![t(0.0), NI, t(3.0), t(1.0)],
            vec![NI, t(0.0), t(1.0), t(3.0)],
            vec![NI, NI, t(0.0), NI],
            vec![NI, NI, NI, t(0.0)],
        ];
        let s = DiscreteSpacetime::from_matrix(ell, vec![1.0; 4]).unwrap();
        let good = cyclical_monotonicity_check(&s, &[(0, 2), (1, 3)], 0.5, 1e-12, 0, 0).unwrap();
        assert!(good.passed && good.exhaustive);
        let bad = cyclical_monotonicity_check(&s, &[(0, 3), (1, 2)], 0.5, 1e-12, 0, 0).unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.witness, Some(vec![1, 0]));
        let one = cyclical_monotonicity_check(&s, &[(0, 2)], -1.0, 0.0, 0, 0).unwrap();
        assert!(one.passed && one.permutations_checked == 1);
    }
}
