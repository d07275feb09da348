//! Deterministic quadrature of the joint eigenvalue law for N = 2, 3.

use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::quadrature::GaussLegendre;
use crate::sampler::log_normalization;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleObservable {
    Gap,
    Dos,
    LambdaMax,
}

struct JointLaw {
    beta: f64,
    log_z: f64,
    rule: GaussLegendre,
    half_range: f64,
}

impl JointLaw {
    fn new(beta: f64, n: usize) -> Self {
        Self {
            beta,
            log_z: log_normalization(n, beta),
            rule: GaussLegendre::new(20),
            half_range: 7.5 / beta.sqrt() + 2.0,
        }
    }

    fn density(&self, l: &[f64]) -> f64 {
        let mut vandermonde = 0.0;
        let mut quadratic = 0.0;
        for (i, a) in l.iter().enumerate() {
            quadratic += a * a;
            for b in &l[i + 1..] {
                vandermonde += (a - b).abs().ln();
            }
        }
        (self.beta * vandermonde - 0.5 * self.beta * quadratic - self.log_z).exp()
    }

    fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        if !(b > a) {
            return 0.0;
        }
        let panels = (b - a).ceil().max(1.0) as usize;
        self.rule.integrate_composite(a, b, panels, f)
    }

    /// Density of one of the N! orderings summed; arguments are descending.
    fn gap_two(&self, r: f64) -> f64 {
        let l = self.half_range;
        2.0 * self.integrate(-l, l, |c| self.density(&[c + 0.5 * r, c - 0.5 * r]))
    }

    fn max_two(&self, x: f64) -> f64 {
        2.0 * self.integrate(-self.half_range, x, |b| self.density(&[x, b]))
    }

    fn gap_three(&self, r: f64) -> f64 {
        let l = self.half_range;
        6.0 * self.integrate(-l, l, |x| self.integrate(-l, x - r, |y| self.density(&[x, x - r, y])))
    }

    /// density of λ_max − λ_min
    fn span_three(&self, s: f64) -> f64 {
        let l = self.half_range;
        6.0 * self.integrate(-l, l, |x| self.integrate(x - s, x, |b| self.density(&[x, b, x - s])))
    }

    fn max_three(&self, x: f64) -> f64 {
        let l = self.half_range;
        6.0 * self.integrate(-l, x, |b| self.integrate(-l, b, |c| self.density(&[x, b, c])))
    }
}

/// Pointwise density of `observable` for the N = 2 or 3 ensemble.
pub fn oracle_density(beta: f64, n: usize, observable: OracleObservable, t: f64) -> Result<f64> {
    Ok(OracleEvaluator::new(beta, n)?.at(observable, t))
}

/// Reusable evaluator (the normalisation and quadrature rule are built once).
pub struct OracleEvaluator {
    law: JointLaw,
    n: usize,
}

impl OracleEvaluator {
    pub fn new(beta: f64, n: usize) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidInput(format!("beta = {beta} must be positive")));
        }
        if !(2..=3).contains(&n) {
            return Err(Error::Unsupported(format!("the quadrature oracle covers N = 2, 3, not {n}")));
        }
        Ok(Self { law: JointLaw::new(beta, n), n })
    }

    pub fn at(&self, observable: OracleObservable, t: f64) -> f64 {
        let law = &self.law;
        match (self.n, observable) {
            (2, OracleObservable::Gap | OracleObservable::Dos) => {
                if t < 0.0 { 0.0 } else { law.gap_two(t) }
            }
            (2, OracleObservable::LambdaMax) => law.max_two(t),
            (_, OracleObservable::Gap) => {
                if t < 0.0 { 0.0 } else { law.gap_three(t) }
            }
            (_, OracleObservable::Dos) => {
                if t < 0.0 { 0.0 } else { 0.5 * (law.gap_three(t) + law.span_three(t)) }
            }
            (_, OracleObservable::LambdaMax) => law.max_three(t),
        }
    }

    /// Abscissa range carrying all but a negligible part of the mass.
    pub fn support(&self, observable: OracleObservable) -> (f64, f64) {
        let s = self.law.beta.sqrt();
        match observable {
            OracleObservable::Gap | OracleObservable::Dos => (0.0, 12.0 / s),
            OracleObservable::LambdaMax => (-7.0 / s, 9.0 / s),
        }
    }
}

/// Oracle curve on `points` uniform abscissae covering the support.
pub fn small_n_oracle(beta: f64, n: usize, observable: OracleObservable, points: usize) -> Result<Curve> {
    let eval = OracleEvaluator::new(beta, n)?;
    let (a, b) = eval.support(observable);
    Curve::tabulate(a, b, points, |t| Ok(eval.at(observable, t)))
}
