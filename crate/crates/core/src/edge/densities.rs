//! Closed-form limiting densities: the Wigner semicircle, its shifted
//! version seen from the top edge, and the soft-edge densities for
//! β = 1, 2, 4.

use std::f64::consts::{PI, SQRT_2};

use super::airy::{airy_ai_pair, airy_integral};
use crate::{Error, Result};

/// (1/π) √(2 − x²) on |x| ≤ √2.
pub fn wigner(x: f64) -> f64 {
    let s = 2.0 - x * x;
    if s > 0.0 {
        s.sqrt() / PI
    } else {
        0.0
    }
}

/// (1/π) √(x (2√2 − x)) on [0, 2√2]: the semicircle seen from its upper edge.
pub fn shifted_wigner(x: f64) -> f64 {
    let s = x * (2.0 * SQRT_2 - x);
    if s > 0.0 {
        s.sqrt() / PI
    } else {
        0.0
    }
}

/// Soft-edge limit of the mean eigenvalue density for β ∈ {1, 2, 4}.
pub fn edge_density(beta: f64, x: f64) -> Result<f64> {
    let kernel = |y: f64| {
        let p = airy_ai_pair(y);
        (p.derivative * p.derivative - y * p.value * p.value, p.value)
    };
    if beta == 2.0 {
        Ok(kernel(x).0)
    } else if beta == 1.0 {
        let (k, ai) = kernel(x);
        Ok(k + 0.5 * ai * (1.0 - airy_integral(x)))
    } else if beta == 4.0 {
        let kappa = 2f64.powf(2.0 / 3.0);
        let y = kappa * x;
        let (k, ai) = kernel(y);
        Ok((k - 0.5 * ai * airy_integral(y)) / kappa.sqrt())
    } else {
        Err(Error::Unsupported(format!(
            "no closed-form edge density for beta = {beta}; only 1, 2 and 4 are available"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn semicircle_values() {
        assert!((wigner(0.0) - SQRT_2 / PI).abs() < 1e-15);
        assert!((shifted_wigner(SQRT_2) - SQRT_2 / PI).abs() < 1e-15);
        assert_eq!(wigner(1.5), 0.0);
        assert_eq!(shifted_wigner(-0.1), 0.0);
        assert_eq!(shifted_wigner(2.9), 0.0);
        let rule = GaussLegendre::new(60);
        // substitution x = √2 (1 - cos θ) removes the endpoint square roots
        let total = rule.integrate(0.0, PI, |t| shifted_wigner(SQRT_2 * (1.0 - t.cos())) * SQRT_2 * t.sin());
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gue_edge_density() {
        let v = edge_density(2.0, 0.0).unwrap();
        assert!((v - 0.066987).abs() < 1e-6);
        let left = edge_density(2.0, -25.0).unwrap();
        assert!((left / (5.0 / PI) - 1.0).abs() < 0.02);
    }

    #[test]
    fn right_tail_log_rate() {
        // The log of the β = 1 density approaches -(2/3) x^{3/2}; power-law
        // prefactors still shift it by ~12% at x = 10.
        let x: f64 = 10.0;
        let ln = edge_density(1.0, x).unwrap().ln();
        let lead = -(2.0 / 3.0) * x.powf(1.5);
        assert!((ln / lead - 1.0).abs() < 0.15);
        // the local rate d ln ρ / d x^{3/2} carries the β-dependence
        for beta in [1.0, 2.0] {
            let (a, b): (f64, f64) = (9.0, 10.0);
            let slope = (edge_density(beta, b).unwrap().ln() - edge_density(beta, a).unwrap().ln())
                / (b.powf(1.5) - a.powf(1.5));
            assert!((slope / (-2.0 * beta / 3.0) - 1.0).abs() < 0.1, "beta={beta}: {slope}");
        }
    }

    #[test]
    fn left_tail_all_betas() {
        for beta in [1.0, 2.0, 4.0] {
            let v = edge_density(beta, -30.0).unwrap();
            assert!((v / (30f64.sqrt() / PI) - 1.0).abs() < 0.02, "beta={beta}");
        }
    }

    #[test]
    fn unsupported_beta() {
        assert!(matches!(edge_density(3.0, 0.0), Err(Error::Unsupported(_))));
    }
}
