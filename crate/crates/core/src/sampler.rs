//! Gaussian β-ensemble sampling through the tridiagonal model.
//!
//! Diagonal entries are N(0, 1/β) and the j-th off-diagonal entry is
//! χ_{β(N−j)} / √(2β), so the eigenvalues follow
//! `exp(−β Σ λ²/2) ∏ |λ_i − λ_j|^β` and the spectral edge sits at √(2N).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub beta: f64,
    pub n: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(beta: f64, n: usize, seed: u64) -> Result<Self> {
        let spec = Self { beta, n, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidInput(format!("beta = {} must be positive", self.beta)));
        }
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        Ok(())
    }

    /// Independent generator for sample `index`: the run seed picks the key,
    /// the sample index picks the stream.
    pub fn rng_for(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }

    /// √(2N), the location of the upper spectral edge.
    pub fn edge(&self) -> f64 {
        (2.0 * self.n as f64).sqrt()
    }
}

/// Symmetric tridiagonal matrix, stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidInput("empty diagonal".into()));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "off-diagonal has {} entries, expected {}",
                offdiag.len(),
                diag.len() - 1
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        if offdiag.iter().any(|&e| e < 0.0) {
            return Err(Error::InvalidInput("off-diagonal entries must be >= 0".into()));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// Leading principal submatrix of size `k`.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::InvalidInput(format!("submatrix size {k} out of range")));
        }
        Ok(Self { diag: self.diag[..k].to_vec(), offdiag: self.offdiag[..k - 1].to_vec() })
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|v| v * v).sum();
        let e: f64 = self.offdiag.iter().map(|v| v * v).sum();
        (d + 2.0 * e).sqrt()
    }

    /// Interval [lo, hi] containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }
}

/// Standard normal variate.
pub fn sample_gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// χ variate with `dof` degrees of freedom (any real dof > 0).
pub fn sample_chi<R: Rng + ?Sized>(dof: f64, rng: &mut R) -> Result<f64> {
    if !(dof > 0.0 && dof.is_finite()) {
        return Err(Error::Domain(format!("chi degrees of freedom {dof} must be positive")));
    }
    let gamma = Gamma::new(dof / 2.0, 2.0).map_err(|e| Error::Domain(e.to_string()))?;
    Ok(gamma.sample(rng).sqrt())
}

/// Draw one member of the ensemble.
pub fn sample_matrix<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<TridiagonalMatrix> {
    spec.validate()?;
    let n = spec.n;
    let beta = spec.beta;
    let sd = beta.sqrt().recip();
    let diag: Vec<f64> = (0..n).map(|_| sd * sample_gaussian(rng)).collect();
    let scale = (2.0 * beta).sqrt().recip();
    let mut offdiag = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        offdiag.push(scale * sample_chi(beta * (n - j) as f64, rng)?);
    }
    Ok(TridiagonalMatrix { diag, offdiag })
}

/// ln Z_N for the weight `exp(−β Σ λ²/2) ∏_{i<j} |λ_i − λ_j|^β`.
pub fn log_normalization(n: usize, beta: f64) -> f64 {
    let nf = n as f64;
    let product: f64 = (1..=n).map(|j| ln_gamma(1.0 + beta * j as f64 / 2.0)).sum();
    0.5 * nf * (2.0 * std::f64::consts::PI).ln() - (0.5 * nf + beta * nf * (nf - 1.0) / 4.0) * beta.ln()
        + product
        - nf * ln_gamma(1.0 + beta / 2.0)
}

/// Logarithm of the normalised joint eigenvalue density. Coincident
/// eigenvalues give −∞.
pub fn log_joint_density(lambdas: &[f64], beta: f64) -> Result<f64> {
    if lambdas.is_empty() {
        return Err(Error::InvalidInput("no eigenvalues".into()));
    }
    if !(beta > 0.0) {
        return Err(Error::InvalidInput(format!("beta = {beta} must be positive")));
    }
    let mut vandermonde = 0.0;
    for (i, a) in lambdas.iter().enumerate() {
        for b in &lambdas[i + 1..] {
            vandermonde += (a - b).abs().ln();
        }
    }
    let quadratic: f64 = lambdas.iter().map(|l| l * l).sum();
    Ok(beta * vandermonde - 0.5 * beta * quadratic - log_normalization(lambdas.len(), beta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::GaussLegendre;

    #[test]
    fn spec_validation() {
        assert!(EnsembleSpec::new(0.0, 3, 1).is_err());
        assert!(EnsembleSpec::new(f64::NAN, 3, 1).is_err());
        assert!(EnsembleSpec::new(2.0, 0, 1).is_err());
        assert!(EnsembleSpec::new(0.7, 1, 1).is_ok());
    }

    #[test]
    fn matrix_validation() {
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![1.0, 2.0], vec![-1.0]).is_err());
        assert!(TridiagonalMatrix::new(vec![], vec![]).is_err());
        assert!(TridiagonalMatrix::new(vec![f64::INFINITY], vec![]).is_err());
    }

    #[test]
    fn gaussian_determinism() {
        let spec = EnsembleSpec::new(2.0, 5, 42).unwrap();
        let a = sample_gaussian(&mut spec.rng_for(0));
        let b = sample_gaussian(&mut spec.rng_for(0));
        let c = sample_gaussian(&mut spec.rng_for(1));
        assert_eq!(a.to_bits(), b.to_bits());
        assert_ne!(a, c);
    }

    #[test]
    fn chi_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(matches!(sample_chi(0.0, &mut rng), Err(Error::Domain(_))));
        assert!(matches!(sample_chi(-1.0, &mut rng), Err(Error::Domain(_))));
    }

    #[test]
    fn offdiag_second_moments() {
        let spec = EnsembleSpec::new(1.3, 6, 9).unwrap();
        let draws = 100_000;
        let mut sums = vec![0.0; 5];
        let mut sq = vec![0.0; 5];
        for k in 0..draws {
            let m = sample_matrix(&spec, &mut spec.rng_for(k)).unwrap();
            for (j, e) in m.offdiag().iter().enumerate() {
                sums[j] += e * e;
                sq[j] += e.powi(4);
            }
        }
        for j in 0..5 {
            let mean = sums[j] / draws as f64;
            let var = sq[j] / draws as f64 - mean * mean;
            let expected = (6 - (j + 1)) as f64 / 2.0;
            assert!((mean - expected).abs() < 5.0 * (var / draws as f64).sqrt(), "j={j}");
        }
    }

    #[test]
    fn normalization_single_eigenvalue() {
        for beta in [0.5, 1.0, 2.0, 4.0] {
            let expected = -0.5 * (2.0 * std::f64::consts::PI / beta).ln();
            assert!((log_joint_density(&[0.0], beta).unwrap() - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn coincident_eigenvalues() {
        assert_eq!(log_joint_density(&[0.3, 0.3, 1.0], 2.0).unwrap(), f64::NEG_INFINITY);
    }

    #[test]
    fn two_by_two_density_integrates_to_one() {
        let rule = GaussLegendre::new(40);
        for beta in [1.0, 2.0, 4.0, 2.7] {
            // 2-D quadrature on a box; the integrand has a kink on the diagonal,
            // so split along it
            let inner = |a: f64| {
                rule.integrate_composite(-8.0, a, 8, |b| log_joint_density(&[a, b], beta).unwrap().exp())
            };
            let total = 2.0 * rule.integrate_composite(-8.0, 8.0, 16, inner);
            assert!((total - 1.0).abs() < 1e-6, "beta={beta}: {total}");
        }
    }
}
