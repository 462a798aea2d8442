//! Volume-distortion coefficients of constant-curvature model spaces.

use crate::error::{Error, Result};
use crate::extended::ExtendedTime;

/// Curvature bound `K`, dimension bound `N`, time `t` and separation `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistortionParams {
    pub k: f64,
    pub n: f64,
    pub t: f64,
    pub theta: f64,
}

impl DistortionParams {
    pub fn new(k: f64, n: f64, t: f64, theta: f64) -> Result<Self> {
        if !(n > 1.0) || n.is_infinite() {
            return Err(Error::Parameter(format!("dimension bound N must exceed 1, got {n}")));
        }
        if !k.is_finite() {
            return Err(Error::Parameter(format!("curvature bound must be finite, got {k}")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Parameter(format!("t must lie in [0, 1], got {t}")));
        }
        if !(theta >= 0.0 && theta.is_finite()) {
            return Err(Error::Parameter(format!("θ must be finite and nonnegative, got {theta}")));
        }
        Ok(DistortionParams { k, n, t, theta })
    }

    pub fn sigma(&self) -> ExtendedTime {
        sigma_raw(self.k, self.n, self.t, self.theta)
    }

    pub fn tau(&self) -> ExtendedTime {
        tau_raw(self.k, self.n, self.t, self.theta)
    }
}

/// Generalized sine `sin_κ(θ)`.
pub fn sin_kappa(kappa: f64, theta: f64) -> f64 {
    if kappa > 0.0 {
        let r = kappa.sqrt();
        (r * theta).sin() / r
    } else if kappa < 0.0 {
        let r = (-kappa).sqrt();
        (r * theta).sinh() / r
    } else {
        theta
    }
}

fn sigma_raw(k: f64, n: f64, t: f64, theta: f64) -> ExtendedTime {
    if k * theta * theta >= n * std::f64::consts::PI.powi(2) {
        return ExtendedTime::POS_INF;
    }
    if k == 0.0 || theta == 0.0 {
        // limit θ → 0 of the quotient is t as well
        return ExtendedTime::from_nonneg(t);
    }
    let kappa = k / n;
    ExtendedTime::from_nonneg((sin_kappa(kappa, t * theta) / sin_kappa(kappa, theta)).max(0.0))
}

fn tau_raw(k: f64, n: f64, t: f64, theta: f64) -> ExtendedTime {
    if k == 0.0 {
        return ExtendedTime::from_nonneg(t);
    }
    match sigma_raw(k, n - 1.0, t, theta).finite_value() {
        Some(s) => ExtendedTime::from_nonneg(t.powf(1.0 / n) * s.powf((n - 1.0) / n)),
        None if t == 0.0 => ExtendedTime::ZERO,
        None => ExtendedTime::POS_INF,
    }
}

/// `σ^{(t)}_{K,N}(θ)`; `+∞` once `Kθ² ≥ Nπ²`.
pub fn sigma(p: &DistortionParams) -> ExtendedTime {
    p.sigma()
}

/// `τ^{(t)}_{K,N}(θ) = t^{1/N} σ^{(t)}_{K,N−1}(θ)^{(N−1)/N}`.
pub fn tau(p: &DistortionParams) -> ExtendedTime {
    p.tau()
}

fn check_kn(k: f64, n: f64, theta: f64) -> Result<()> {
    DistortionParams::new(k, n, 1.0, theta).map(|_| ())
}

/// `x cot x` for `K > 0`, `x coth x` for `K < 0`, continuous at `x = 0`.
fn x_cot(x: f64, positive: bool) -> f64 {
    if x == 0.0 {
        return 1.0;
    }
    if positive {
        x / x.tan()
    } else {
        x / x.tanh()
    }
}

/// Derivative of `r ↦ τ^{(r)}_{K,N}(θ)` at `r = 1`.
pub fn tau_tilde(k: f64, n: f64, theta: f64) -> Result<f64> {
    check_kn(k, n, theta)?;
    if k == 0.0 {
        return Ok(1.0);
    }
    if k > 0.0 && theta > std::f64::consts::PI * ((n - 1.0) / k).sqrt() {
        return Err(Error::Domain(format!("τ̃ needs θ ≤ π√((N−1)/K), got θ = {theta}")));
    }
    let x = theta * (k.abs() / (n - 1.0)).sqrt();
    Ok(1.0 / n + (n - 1.0) / n * x_cot(x, k > 0.0))
}

/// Derivative of `r ↦ σ^{(r)}_{K,N}(θ)` at `r = 1`.
pub fn sigma_tilde(k: f64, n: f64, theta: f64) -> Result<f64> {
    check_kn(k, n, theta)?;
    if k == 0.0 {
        return Ok(1.0);
    }
    if k > 0.0 && theta > std::f64::consts::PI * (n / k).sqrt() {
        return Err(Error::Domain(format!("σ̃ needs θ ≤ π√(N/K), got θ = {theta}")));
    }
    Ok(x_cot(theta * (k.abs() / n).sqrt(), k > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn val(e: ExtendedTime) -> f64 {
        e.finite_value().unwrap()
    }

    #[test]
    fn generalized_sine_branches() {
        assert_eq!(sin_kappa(0.0, 0.7), 0.7);
        assert!((sin_kappa(1.0, PI / 2.0) - 1.0).abs() < 1e-15);
        assert!((sin_kappa(-1.0, 1.0) - 1f64.sinh()).abs() < 1e-15);
    }

    #[test]
    fn flat_coefficients_are_linear() {
        for t in [0.0, 0.3, 1.0] {
            let p = DistortionParams::new(0.0, 3.0, t, 2.0).unwrap();
            assert_eq!(val(p.sigma()), t);
            assert_eq!(val(p.tau()), t);
        }
    }

    #[test]
    fn sigma_blows_up_at_the_conjugate_threshold() {
        let n = 2.0;
        let theta = (n * PI * PI).sqrt();
        assert_eq!(DistortionParams::new(1.0, n, 0.5, theta).unwrap().sigma(), ExtendedTime::POS_INF);
        assert!(DistortionParams::new(1.0, n, 0.5, theta * 0.999).unwrap().sigma().is_causal());
        assert_eq!(DistortionParams::new(1.0, n, 0.5, theta).unwrap().tau(), ExtendedTime::POS_INF);
    }

    #[test]
    fn tilde_coefficients_at_zero_curvature() {
        assert_eq!(tau_tilde(0.0, 4.0, 3.0).unwrap(), 1.0);
        assert_eq!(sigma_tilde(0.0, 4.0, 3.0).unwrap(), 1.0);
        assert!(matches!(tau_tilde(1.0, 2.0, 4.0), Err(Error::Domain(_))));
        assert!(sigma_tilde(-1.0, 2.0, 40.0).unwrap() > 1.0);
    }
}
