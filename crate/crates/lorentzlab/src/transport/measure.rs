use crate::error::{Error, Result};
use crate::spacetime::DiscreteSpacetime;

/// Normalization slack accepted for probability weights.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Probability measure on the points of a spacetime.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteMeasure {
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Weights indexed by point; must be nonnegative and sum to one.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Parameter(format!("weight of point {i} must be finite and nonnegative, got {w}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL * weights.len().max(1) as f64 {
            return Err(Error::Parameter(format!("measure has total mass {total}, expected 1")));
        }
        Ok(DiscreteMeasure { weights })
    }

    /// Rescales nonnegative weights to unit mass.
    pub fn normalized(mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::Parameter("cannot normalize a measure with zero or infinite mass".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(weights)
    }

    pub fn dirac(n: usize, x: usize) -> Result<Self> {
        crate::error::check_index(x, n)?;
        let mut w = vec![0.0; n];
        w[x] = 1.0;
        Ok(DiscreteMeasure { weights: w })
    }

    /// Uniform probability on a point set.
    pub fn uniform_on(n: usize, points: &[usize]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Precondition("uniform measure on an empty set".into()));
        }
        let mut w = vec![0.0; n];
        for &p in points {
            crate::error::check_index(p, n)?;
            w[p] += 1.0;
        }
        Self::normalized(w)
    }

    /// Normalized restriction of the reference measure to `points`.
    pub fn reference_on(space: &DiscreteSpacetime, points: &[usize]) -> Result<Self> {
        let mut w = vec![0.0; space.len()];
        for &p in points {
            space.check_point(p)?;
            w[p] = space.weight(p);
        }
        Self::normalized(w)
    }

    /// Sparse `(point, weight)` list over `n` points; repeated points accumulate.
    pub fn from_entries(n: usize, entries: &[(usize, f64)]) -> Result<Self> {
        let mut w = vec![0.0; n];
        for &(p, m) in entries {
            crate::error::check_index(p, n)?;
            w[p] += m;
        }
        Self::new(w)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Points carrying positive mass, increasing.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i] > 0.0).collect()
    }

    pub fn is_dirac(&self) -> Option<usize> {
        let s = self.support();
        (s.len() == 1).then(|| s[0])
    }

    pub fn check_on(&self, space: &DiscreteSpacetime) -> Result<()> {
        if self.len() != space.len() {
            return Err(Error::Dimension(format!("measure on {} points, spacetime has {}", self.len(), space.len())));
        }
        Ok(())
    }

    /// Density with respect to the reference measure; `None` where `𝔪` vanishes.
    pub fn density(&self, space: &DiscreteSpacetime) -> Vec<Option<f64>> {
        self.weights
            .iter()
            .zip(space.weights())
            .map(|(&w, &m)| if m > 0.0 { Some(w / m) } else { None })
            .collect()
    }

    /// Mass sitting on points of zero reference weight.
    pub fn singular_mass(&self, space: &DiscreteSpacetime) -> f64 {
        self.weights.iter().zip(space.weights()).filter(|(_, &m)| m == 0.0).map(|(w, _)| w).sum()
    }

    /// Largest density over the absolutely continuous part.
    pub fn max_density(&self, space: &DiscreteSpacetime) -> f64 {
        self.density(space).into_iter().flatten().fold(0.0, f64::max)
    }
}

/// Sparse coupling `π` between two measures on the same point set.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Coupling {
    /// `(x, y, mass)` with positive mass.
    pub entries: Vec<(usize, usize, f64)>,
}

impl Coupling {
    pub fn product(mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> Self {
        let (a, b) = (mu.support(), nu.support());
        let mut entries = Vec::with_capacity(a.len() * b.len());
        for &x in &a {
            for &y in &b {
                entries.push((x, y, mu.weight(x) * nu.weight(y)));
            }
        }
        Coupling { entries }
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn first_marginal(&self, n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for &(x, _, m) in &self.entries {
            w[x] += m;
        }
        w
    }

    pub fn second_marginal(&self, n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for &(_, y, m) in &self.entries {
            w[y] += m;
        }
        w
    }

    /// Largest absolute deviation of the marginals from `(μ, ν)`.
    pub fn marginal_error(&self, mu: &DiscreteMeasure, nu: &DiscreteMeasure) -> f64 {
        let n = mu.len();
        let a = self.first_marginal(n);
        let b = self.second_marginal(n);
        let ea = a.iter().zip(mu.weights()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        let eb = b.iter().zip(nu.weights()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        ea.max(eb)
    }

    /// First pair with positive mass that is not causally related.
    pub fn acausal_witness(&self, space: &DiscreteSpacetime) -> Option<(usize, usize)> {
        self.entries.iter().find(|&&(x, y, m)| m > 0.0 && !space.leq(x, y)).map(|&(x, y, _)| (x, y))
    }

    pub fn support(&self) -> Vec<(usize, usize)> {
        self.entries.iter().filter(|e| e.2 > 0.0).map(|&(x, y, _)| (x, y)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_is_enforced() {
        assert!(DiscreteMeasure::new(vec![0.5, 0.4]).is_err());
        assert!(DiscreteMeasure::new(vec![0.5, -0.5, 1.0]).is_err());
        let m = DiscreteMeasure::normalized(vec![1.0, 3.0]).unwrap();
        assert_eq!(m.weights(), &[0.25, 0.75]);
        assert_eq!(DiscreteMeasure::dirac(3, 2).unwrap().is_dirac(), Some(2));
    }

    #[test]
    fn product_coupling_has_the_right_marginals() {
        let mu = DiscreteMeasure::new(vec![0.25, 0.75, 0.0]).unwrap();
        let nu = DiscreteMeasure::new(vec![0.0, 0.5, 0.5]).unwrap();
        let pi = Coupling::product(&mu, &nu);
        assert_eq!(pi.entries.len(), 4);
        assert!(pi.marginal_error(&mu, &nu) < 1e-15);
    }
}
