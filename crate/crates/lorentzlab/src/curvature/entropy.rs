//! Rényi entropy and mass excess with respect to the reference measure.

use crate::error::{Error, Result};
use crate::spacetime::DiscreteSpacetime;
use crate::transport::DiscreteMeasure;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    /// `S_N(μ) = −Σ ρ_i^{(N−1)/N} 𝔪_i` over the absolutely continuous part.
    pub value: f64,
    pub n: f64,
}

pub fn check_dimension(n: f64) -> Result<()> {
    if !(n > 1.0) || n.is_infinite() {
        return Err(Error::Parameter(format!("dimension bound N must exceed 1, got {n}")));
    }
    Ok(())
}

pub fn renyi_entropy(space: &DiscreteSpacetime, mu: &DiscreteMeasure, n: f64) -> Result<EntropyValue> {
    check_dimension(n)?;
    mu.check_on(space)?;
    let a = (n - 1.0) / n;
    let value = -mu
        .weights()
        .iter()
        .zip(space.weights())
        .filter(|(w, m)| **w > 0.0 && **m > 0.0)
        .map(|(w, m)| (w / m).powf(a) * m)
        .sum::<f64>();
    Ok(EntropyValue { value, n })
}

/// `F_c(μ) = Σ (ρ_i − c)_+ 𝔪_i + μ^⊥[M]`.
pub fn mass_excess(space: &DiscreteSpacetime, mu: &DiscreteMeasure, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Parameter(format!("density threshold must be positive, got {c}")));
    }
    mu.check_on(space)?;
    Ok(mu
        .weights()
        .iter()
        .zip(space.weights())
        .map(|(&w, &m)| if m > 0.0 { (w / m - c).max(0.0) * m } else { w })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ExtendedTime;

    fn cells(weights: Vec<f64>) -> DiscreteSpacetime {
        let n = weights.len();
        let ell = (0..n)
            .map(|i| (0..n).map(|j| if i == j { ExtendedTime::ZERO } else { ExtendedTime::NEG_INF }).collect())
            .collect();
        DiscreteSpacetime::from_matrix(ell, weights).unwrap()
    }

    #[test]
    fn uniform_measure_entropy() {
        let s = cells(vec![0.5, 0.5, 1.0]);
        let mu = DiscreteMeasure::reference_on(&s, &[0, 1, 2]).unwrap();
        let e = renyi_entropy(&s, &mu, 3.0).unwrap();
        assert!((e.value + 2f64.powf(1.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn singular_part_carries_no_entropy_but_full_excess() {
        let s = cells(vec![0.0, 1.0]);
        let d = DiscreteMeasure::dirac(2, 0).unwrap();
        assert_eq!(renyi_entropy(&s, &d, 2.0).unwrap().value, 0.0);
        assert_eq!(mass_excess(&s, &d, 1.0).unwrap(), 1.0);
        assert!(renyi_entropy(&s, &d, 1.0).is_err());
    }

    #[test]
    fn three_cell_excess() {
        // densities 0.6/0.5 = 1.2, 0.3/0.25 = 1.2, 0.1/0.25 = 0.4; c = 1
        let s = cells(vec![0.5, 0.25, 0.25]);
        let mu = DiscreteMeasure::new(vec![0.6, 0.3, 0.1]).unwrap();
        assert!((mass_excess(&s, &mu, 1.0).unwrap() - (0.2 * 0.5 + 0.2 * 0.25)).abs() < 1e-15);
        assert_eq!(mass_excess(&s, &mu, 1.2 + 1e-12).unwrap(), 0.0);
        let h = renyi_entropy(&s, &mu, 2.0).unwrap().value;
        let oracle = -(1.2f64.sqrt() * 0.5 + 1.2f64.sqrt() * 0.25 + 0.4f64.sqrt() * 0.25);
        assert!((h - oracle).abs() < 1e-15);
    }
}
