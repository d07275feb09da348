//! Eigenvalues of symmetric tridiagonal matrices: implicit-shift QL for the
//! whole spectrum, Sturm-sequence bisection for the top of it.

use serde::{Deserialize, Serialize};

use crate::sampler::TridiagonalMatrix;
use crate::{Error, Result};

const MAX_QL_SWEEPS: usize = 60;

/// Eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts descending; exact ties keep their input order.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("empty spectrum".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("non-finite eigenvalue".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lambda_max(&self) -> f64 {
        self.values[0]
    }

    /// Λ₁ − Λ₂.
    pub fn gap(&self) -> Result<f64> {
        if self.values.len() < 2 {
            return Err(Error::Domain("the gap needs at least two eigenvalues".into()));
        }
        Ok(self.values[0] - self.values[1])
    }
}

/// All eigenvalues by the implicit-shift QL algorithm.
pub fn eigenvalues_full(m: &TridiagonalMatrix) -> Result<Spectrum> {
    let n = m.len();
    // QL chases from the bottom; the ensemble matrices are graded with the
    // large entries on top, so work on the reversed matrix
    let mut d: Vec<f64> = m.diag().iter().rev().copied().collect();
    let mut e: Vec<f64> = m.offdiag().iter().rev().copied().collect();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut k = l;
            while k + 1 < n {
                let dd = d[k].abs() + d[k + 1].abs();
                if e[k].abs() <= f64::EPSILON * dd {
                    break;
                }
                k += 1;
            }
            if k == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::Convergence { iterations: sweeps, residual: e[l].abs() });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[k] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..k).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[k] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[k] = 0.0;
        }
    }
    Spectrum::new(d)
}

/// Number of eigenvalues strictly below `x`.
pub fn sturm_count(m: &TridiagonalMatrix, x: f64) -> usize {
    let d = m.diag();
    let e = m.offdiag();
    let pivmin = f64::MIN_POSITIVE * e.iter().fold(1.0f64, |a, v| a.max(v * v));
    let mut count = 0;
    let mut q = d[0] - x;
    for i in 0.. {
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        if i + 1 == d.len() {
            break;
        }
        q = d[i + 1] - x - e[i] * e[i] / q;
    }
    count
}

/// The k-th largest eigenvalue (k = 1 is λ_max) by bisection inside
/// `[lo, hi]`, which must bracket it.
fn kth_largest(m: &TridiagonalMatrix, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let below = m.len() - k;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(m, mid) > below {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn bisection_tolerance(m: &TridiagonalMatrix) -> f64 {
    1e-12 * m.norm().max(f64::MIN_POSITIVE)
}

/// (Λ₁, Λ₂) by Sturm bisection.
pub fn top_two(m: &TridiagonalMatrix) -> Result<(f64, f64)> {
    if m.len() < 2 {
        return Err(Error::Domain("top_two needs n >= 2".into()));
    }
    let (lo, hi) = m.gershgorin();
    let tol = bisection_tolerance(m);
    let first = kth_largest(m, 1, lo, hi, tol);
    let second = kth_largest(m, 2, lo, first + tol, tol);
    Ok((first, second))
}

/// λ_max alone.
pub fn lambda_max(m: &TridiagonalMatrix) -> f64 {
    let (lo, hi) = m.gershgorin();
    kth_largest(m, 1, lo, hi, bisection_tolerance(m))
}

/// Number of eigenvalues in each interval `[edges[b], edges[b+1])`,
/// `edges` increasing. Only intervals whose end counts differ are refined,
/// so the cost scales with the number of occupied bins.
///
/// `top_count` overrides the Sturm count at the last edge; pass it when that
/// edge sits on an eigenvalue known only to bisection accuracy.
pub fn counts_between(m: &TridiagonalMatrix, edges: &[f64], top_count: Option<usize>) -> Vec<u64> {
    if edges.len() < 2 {
        return Vec::new();
    }
    let mut out = vec![0u64; edges.len() - 1];
    let last = edges.len() - 1;
    let lo = sturm_count(m, edges[0]);
    let hi = top_count.unwrap_or_else(|| sturm_count(m, edges[last]));
    fill_counts(m, edges, 0, last, lo, hi, &mut out);
    out
}

fn fill_counts(
    m: &TridiagonalMatrix,
    edges: &[f64],
    a: usize,
    b: usize,
    count_a: usize,
    count_b: usize,
    out: &mut [u64],
) {
    if count_b <= count_a {
        return;
    }
    if b == a + 1 {
        out[a] = (count_b - count_a) as u64;
        return;
    }
    let mid = (a + b) / 2;
    let count_mid = sturm_count(m, edges[mid]);
    fill_counts(m, edges, a, mid, count_a, count_mid, out);
    fill_counts(m, edges, mid, b, count_mid, count_b, out);
}
