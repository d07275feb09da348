//! The spectral solution f̃(r̃, x) of `∂²f̃ = (x + 2q² − r̃) f̃` that decays
//! like `2^{-1/6} √π Ai(x − r̃)` as x → ∞, and the companion
//! `g̃(r̃, x) = −(r̃ / q(x)) ∫_x^∞ q f̃`.
//!
//! The equation is integrated from `x_max` toward `x_min` with the Numerov
//! scheme on the table grid. Moving left the decaying solution is the
//! dominant one, so the recursion is stable.

use super::airy::{airy_ai_pair, airy_product_tail};
use super::painleve::EdgeTable;
use crate::quadrature::{cumulative_from_right, hermite};
use crate::{Error, Result};

/// 2^{-1/6} √π
pub fn boundary_amplitude() -> f64 {
    2f64.powf(-1.0 / 6.0) * std::f64::consts::PI.sqrt()
}

/// f̃ and ∂ₓf̃ for one spectral parameter, on the table grid.
#[derive(Debug, Clone)]
pub struct FTildeSolution {
    pub r_tilde: f64,
    pub values: Vec<f64>,
    pub derivative: Vec<f64>,
    /// J(x) = ∫_x^∞ q f̃, including the Airy tail beyond the grid.
    pub q_overlap: Vec<f64>,
    x_min: f64,
    step: f64,
    /// x + 2q² − r̃ at the grid points
    potential: Vec<f64>,
    q: Vec<f64>,
}

/// Solve for f̃(r̃, ·) on the grid of `table`.
pub fn solve_f_tilde(r_tilde: f64, table: &EdgeTable) -> Result<FTildeSolution> {
    solve_with_profile(r_tilde, table, &table.q)
}

/// Same as [`solve_f_tilde`] but with an arbitrary `q` profile on the table
/// grid; with `q ≡ 0` and `r̃ = 0` the exact solution is proportional to Ai.
#[doc(hidden)]
pub fn solve_with_profile(r_tilde: f64, table: &EdgeTable, q: &[f64]) -> Result<FTildeSolution> {
    if !r_tilde.is_finite() {
        return Err(Error::InvalidInput(format!("spectral parameter {r_tilde}")));
    }
    let x_max = table.x_max();
    if r_tilde.abs() > x_max - 4.0 {
        return Err(Error::Range(format!(
            "|r̃| = {} exceeds x_max - 4 = {}",
            r_tilde.abs(),
            x_max - 4.0
        )));
    }
    let n = table.len();
    let h = table.step;
    let x = &table.x_grid;
    let potential: Vec<f64> = x
        .iter()
        .zip(q)
        .map(|(&xi, &qi)| xi + 2.0 * qi * qi - r_tilde)
        .collect();

    let c = boundary_amplitude();
    let mut f = vec![0.0; n];
    f[n - 1] = c * airy_ai_pair(x[n - 1] - r_tilde).value;
    f[n - 2] = c * airy_ai_pair(x[n - 2] - r_tilde).value;
    let k = h * h / 12.0;
    for i in (1..n - 1).rev() {
        let a_next = 1.0 - k * potential[i + 1];
        let a_mid = 2.0 * (1.0 + 5.0 * k * potential[i]);
        let a_prev = 1.0 - k * potential[i - 1];
        f[i - 1] = (a_mid * f[i] - a_next * f[i + 1]) / a_prev;
    }

    let second: Vec<f64> = potential.iter().zip(&f).map(|(w, v)| w * v).collect();
    let mut derivative = vec![0.0; n];
    for i in 1..n - 1 {
        derivative[i] = (f[i + 1] - f[i - 1]) / (2.0 * h) - h / 12.0 * (second[i + 1] - second[i - 1]);
    }
    derivative[0] = (f[1] - f[0]) / h - h / 6.0 * (2.0 * second[0] + second[1]);
    derivative[n - 1] = c * airy_ai_pair(x[n - 1] - r_tilde).derivative;

    let integrand: Vec<f64> = q.iter().zip(&f).map(|(a, b)| a * b).collect();
    // beyond x_max q ≈ Ai and f̃ ≈ c Ai(· − r̃)
    let tail = if q[n - 1] == 0.0 { 0.0 } else { c * airy_product_tail(x_max, -r_tilde) };
    let q_overlap = cumulative_from_right(&integrand, h, tail);

    Ok(FTildeSolution {
        r_tilde,
        values: f,
        derivative,
        q_overlap,
        x_min: table.x_min(),
        step: h,
        potential,
        q: q.to_vec(),
    })
}

impl FTildeSolution {
    fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let last = self.values.len() - 1;
        let t = (x - self.x_min) / self.step;
        if !(-1e-9..=last as f64 + 1e-9).contains(&t) {
            return Err(Error::Range(format!("x = {x} outside solution grid")));
        }
        let k = (t.floor() as usize).min(last - 1);
        Ok((k, x - (self.x_min + self.step * k as f64)))
    }

    pub fn value_at(&self, x: f64) -> Result<f64> {
        let (k, dx) = self.locate(x)?;
        Ok(hermite(
            self.values[k],
            self.values[k + 1],
            self.derivative[k],
            self.derivative[k + 1],
            self.step,
            dx,
        ))
    }

    /// ∫_x^∞ q f̃ at an arbitrary point of the grid range.
    pub fn q_overlap_at(&self, x: f64) -> Result<f64> {
        let (k, dx) = self.locate(x)?;
        let d = |j: usize| -self.q[j] * self.values[j];
        Ok(hermite(self.q_overlap[k], self.q_overlap[k + 1], d(k), d(k + 1), self.step, dx))
    }

    /// Residuals |∂²f̃ − (x + 2q² − r̃) f̃| at interior points (five-point
    /// fourth-order second difference).
    pub fn ode_residuals(&self) -> Vec<f64> {
        let h = self.step;
        let f = &self.values;
        (2..f.len() - 2)
            .map(|i| {
                let d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2])
                    / (12.0 * h * h);
                (d2 - self.potential[i] * f[i]).abs()
            })
            .collect()
    }

    /// Residuals divided by max(|f̃|, 1). For r̃ < 0 the solution grows to
    /// ~10⁶ at the left end, where the absolute residual of any second
    /// difference is dominated by rounding of f̃ itself.
    pub fn relative_ode_residuals(&self) -> Vec<f64> {
        self.ode_residuals()
            .into_iter()
            .zip(&self.values[2..])
            .map(|(e, f)| e / f.abs().max(1.0))
            .collect()
    }
}

/// g̃(r̃, x) = −(r̃ / q(x)) ∫_x^∞ q f̃ on the grid.
pub fn g_tilde(table: &EdgeTable, f: &FTildeSolution) -> Vec<f64> {
    f.q_overlap
        .iter()
        .zip(&table.q)
        .map(|(j, q)| -f.r_tilde * j / q)
        .collect()
}
