//! Hastings–McLeod solution of Painlevé II and the Tracy–Widom GUE law.
//!
//! `q'' = 2q³ + xq` is solved as a two-point boundary-value problem on
//! `[x_min, x_max]`, discretised with the fourth-order Numerov stencil and
//! solved by Newton iteration (tridiagonal Jacobian). The right boundary is
//! `q(x_max) = Ai(x_max)`, the left one the two-term expansion
//! `√(−x/2)(1 + 1/(8x³))`. Integrated quantities are accumulated from the
//! right so they keep full relative accuracy in the exponentially small
//! tail, each started from its closed-form Airy tail beyond `x_max`.

use serde::Serialize;

use super::airy::{airy_ai, airy_ai_pair, airy_integral, airy_product_tail};
use crate::quadrature::{cumulative_from_right, hermite};
use crate::{Error, Result};

pub const DEFAULT_X_MIN: f64 = -12.0;
pub const DEFAULT_X_MAX: f64 = 10.0;
pub const DEFAULT_STEP: f64 = 1.0 / 512.0;

const MAX_NEWTON: usize = 50;

/// Tabulated Hastings–McLeod data on a uniform grid.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeTable {
    pub x_grid: Vec<f64>,
    pub step: f64,
    pub q: Vec<f64>,
    pub q_prime: Vec<f64>,
    /// R(x) = ∫_x^∞ q²
    pub r: Vec<f64>,
    /// I(x) = ∫_x^∞ q
    pub i: Vec<f64>,
    /// Tracy–Widom GUE distribution F₂(x)
    pub f2: Vec<f64>,
    /// Newton iterations used by the boundary-value solve.
    pub newton_iterations: usize,
}

/// Right-hand side of Painlevé II.
fn p2_rhs(x: f64, q: f64) -> f64 {
    2.0 * q * q * q + x * q
}

/// Hastings–McLeod left asymptotic used as the boundary value.
pub fn left_boundary_value(x: f64) -> f64 {
    (-x / 2.0).sqrt() * (1.0 + 1.0 / (8.0 * x * x * x))
}

/// Thomas algorithm; `lower[i]` couples row i to i-1, `upper[i]` to i+1.
pub(crate) fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = diag[0];
    c[0] = upper[0] / d;
    rhs[0] /= d;
    for i in 1..n {
        d = diag[i] - lower[i] * c[i - 1];
        if i + 1 < n {
            c[i] = upper[i] / d;
        }
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / d;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

impl EdgeTable {
    /// Default grid: [-12, 10] with step 1/512.
    pub fn build_default() -> Result<Self> {
        Self::build(DEFAULT_X_MIN, DEFAULT_X_MAX, DEFAULT_STEP)
    }

    /// Solve for q on `[x_min, x_max]` and fill q′, R, I and F₂.
    pub fn build(x_min: f64, x_max: f64, step: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && step.is_finite()) {
            return Err(Error::InvalidInput("non-finite grid parameters".into()));
        }
        if x_min > -10.0 || x_max < 8.0 {
            return Err(Error::Domain(format!(
                "grid [{x_min}, {x_max}] must cover at least [-10, 8]"
            )));
        }
        if step <= 0.0 || step > 1.0 / 256.0 {
            return Err(Error::Domain(format!("step {step} must lie in (0, 1/256]")));
        }
        let intervals = ((x_max - x_min) / step).round() as usize;
        let n = intervals + 1;
        let x_grid: Vec<f64> = (0..n).map(|k| x_min + step * k as f64).collect();
        let x_max = x_grid[n - 1];

        let (q, newton_iterations) = solve_hastings_mcleod(&x_grid, step)?;

        // q' from the Numerov-consistent derivative formula
        let h = step;
        let g: Vec<f64> = x_grid.iter().zip(&q).map(|(&x, &v)| p2_rhs(x, v)).collect();
        let mut q_prime = vec![0.0; n];
        for k in 1..n - 1 {
            q_prime[k] = (q[k + 1] - q[k - 1]) / (2.0 * h) - h / 12.0 * (g[k + 1] - g[k - 1]);
        }
        q_prime[0] = (q[1] - q[0]) / h - h / 6.0 * (2.0 * g[0] + g[1]);
        q_prime[n - 1] = airy_ai_pair(x_max).derivative;

        let q_sq: Vec<f64> = q.iter().map(|v| v * v).collect();
        let r = cumulative_from_right(&q_sq, h, airy_product_tail(x_max, 0.0));
        let i = cumulative_from_right(&q, h, airy_integral(x_max));
        // ln F₂(x) = -∫_x^∞ R; beyond x_max, ∫ R = ∫_x^∞ (t - x) Ai² in closed form
        let p = airy_ai_pair(x_max);
        let r_tail = (2.0 * x_max * x_max * p.value * p.value
            - 2.0 * x_max * p.derivative * p.derivative
            - p.value * p.derivative)
            / 3.0;
        let int_r = cumulative_from_right(&r, h, r_tail);
        let f2 = int_r.iter().map(|v| (-v).exp()).collect();

        Ok(Self { x_grid, step, q, q_prime, r, i, f2, newton_iterations })
    }

    pub fn len(&self) -> usize {
        self.x_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_grid.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.x_grid[0]
    }

    pub fn x_max(&self) -> f64 {
        self.x_grid[self.len() - 1]
    }

    /// Tracy–Widom density F₂′ = F₂ R on the grid.
    pub fn f2_density(&self) -> Vec<f64> {
        self.f2.iter().zip(&self.r).map(|(f, r)| f * r).collect()
    }

    /// Locate `x` on the grid; `None` outside `[x_min, x_max]`.
    pub(crate) fn locate(&self, x: f64) -> Option<(usize, f64)> {
        let t = (x - self.x_min()) / self.step;
        let last = self.len() - 1;
        if !(-1e-9..=last as f64 + 1e-9).contains(&t) {
            return None;
        }
        let k = (t.floor() as usize).min(last - 1);
        Some((k, x - self.x_grid[k]))
    }

    fn interp(&self, values: &[f64], derivs: &[f64], x: f64) -> Result<f64> {
        let (k, dx) = self
            .locate(x)
            .ok_or_else(|| Error::Range(format!("x = {x} outside table grid")))?;
        Ok(hermite(values[k], values[k + 1], derivs[k], derivs[k + 1], self.step, dx))
    }

    pub fn q_at(&self, x: f64) -> Result<f64> {
        self.interp(&self.q, &self.q_prime, x)
    }

    pub fn q_prime_at(&self, x: f64) -> Result<f64> {
        let (k, dx) = self
            .locate(x)
            .ok_or_else(|| Error::Range(format!("x = {x} outside table grid")))?;
        let d2 = |j: usize| p2_rhs(self.x_grid[j], self.q[j]);
        Ok(hermite(self.q_prime[k], self.q_prime[k + 1], d2(k), d2(k + 1), self.step, dx))
    }

    pub fn r_at(&self, x: f64) -> Result<f64> {
        let (k, dx) = self
            .locate(x)
            .ok_or_else(|| Error::Range(format!("x = {x} outside table grid")))?;
        let d = |j: usize| -self.q[j] * self.q[j];
        Ok(hermite(self.r[k], self.r[k + 1], d(k), d(k + 1), self.step, dx))
    }

    pub fn f2_at(&self, x: f64) -> Result<f64> {
        let (k, dx) = self
            .locate(x)
            .ok_or_else(|| Error::Range(format!("x = {x} outside table grid")))?;
        let d = |j: usize| self.f2[j] * self.r[j];
        Ok(hermite(self.f2[k], self.f2[k + 1], d(k), d(k + 1), self.step, dx))
    }

    /// F₂′(x), interpolated.
    pub fn f2_density_at(&self, x: f64) -> Result<f64> {
        Ok(self.f2_at(x)? * self.r_at(x)?)
    }

    /// Painlevé II residual |q″ − 2q³ − xq| at interior points, with q″ from
    /// a fourth-order five-point difference.
    pub fn ode_residuals(&self) -> Vec<f64> {
        let h = self.step;
        let q = &self.q;
        (2..self.len() - 2)
            .map(|k| {
                let d2 = (-q[k - 2] + 16.0 * q[k - 1] - 30.0 * q[k] + 16.0 * q[k + 1] - q[k + 2])
                    / (12.0 * h * h);
                (d2 - p2_rhs(self.x_grid[k], q[k])).abs()
            })
            .collect()
    }

    /// Mean of the Tracy–Widom GUE law, ∫ x F₂′(x) dx over the grid.
    pub fn tw_mean(&self) -> f64 {
        let dens: Vec<f64> = self
            .x_grid
            .iter()
            .zip(self.f2_density())
            .map(|(x, d)| x * d)
            .collect();
        crate::quadrature::simpson(&dens, self.step)
    }

    /// Tracy–Widom mass of `(a, b)`, i.e. F₂(b) − F₂(a), clamped to the grid.
    pub fn tw_mass(&self, a: f64, b: f64) -> f64 {
        let f = |x: f64| {
            if x <= self.x_min() {
                0.0
            } else if x >= self.x_max() {
                1.0
            } else {
                self.f2_at(x).unwrap_or(0.0)
            }
        };
        f(b) - f(a)
    }
}

/// Newton–Numerov solve for the Hastings–McLeod profile.
fn solve_hastings_mcleod(x: &[f64], h: f64) -> Result<(Vec<f64>, usize)> {
    let n = x.len();
    let h2 = h * h / 12.0;
    let mut q: Vec<f64> = x
        .iter()
        .map(|&xi| {
            let ai = airy_ai(xi);
            (ai * ai + (-xi / 2.0).max(0.0)).sqrt()
        })
        .collect();
    q[0] = left_boundary_value(x[0]);
    q[n - 1] = airy_ai(x[n - 1]);

    let m = n - 2;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let mut residual = f64::INFINITY;
    for iter in 1..=MAX_NEWTON {
        let g: Vec<f64> = x.iter().zip(&q).map(|(&xi, &qi)| p2_rhs(xi, qi)).collect();
        let dg: Vec<f64> = x.iter().zip(&q).map(|(&xi, &qi)| 6.0 * qi * qi + xi).collect();
        residual = 0.0;
        for k in 1..n - 1 {
            let row = k - 1;
            let f = q[k + 1] - 2.0 * q[k] + q[k - 1] - h2 * (g[k + 1] + 10.0 * g[k] + g[k - 1]);
            residual = f64::max(residual, f.abs());
            rhs[row] = -f;
            diag[row] = -2.0 - 10.0 * h2 * dg[k];
            lower[row] = if k > 1 { 1.0 - h2 * dg[k - 1] } else { 0.0 };
            upper[row] = if k < n - 2 { 1.0 - h2 * dg[k + 1] } else { 0.0 };
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        let mut max_step: f64 = 0.0;
        for (k, dq) in rhs.iter().enumerate() {
            q[k + 1] += dq;
            max_step = max_step.max(dq.abs());
        }
        // quadratic convergence stalls at rounding level (~1e-14 for q = O(1))
        if max_step < 1e-11 && residual < 1e-12 {
            return Ok((q, iter));
        }
    }
    Err(Error::Convergence { iterations: MAX_NEWTON, residual })
}
