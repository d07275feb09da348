//! Small quadrature toolkit shared by the special-function and oracle code.

use std::sync::OnceLock;

/// Gauss–Legendre nodes and weights on [-1, 1], computed by Newton
/// iteration on the Legendre recurrence.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, z);
                dp = d;
                let dz = p / d;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = -z;
            nodes[n - 1 - i] = z;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Integrate `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(mid + half * t))
            .sum::<f64>()
            * half
    }

    /// Composite rule: `[a, b]` split into `panels` equal pieces.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

/// Legendre polynomial P_n(z) and its derivative.
fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// A shared 20-point rule.
pub fn gl20() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(20))
}

/// Composite Simpson over uniformly spaced samples. An odd number of
/// intervals gets a 3/8 rule on the last three.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let (even_end, tail) = if intervals % 2 == 0 {
                (n - 1, 0.0)
            } else {
                let k = n - 4;
                let t = 3.0 * h / 8.0
                    * (values[k] + 3.0 * values[k + 1] + 3.0 * values[k + 2] + values[k + 3]);
                (n - 4, t)
            };
            let mut s = values[0] + values[even_end];
            for (i, v) in values.iter().enumerate().take(even_end).skip(1) {
                s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            s * h / 3.0 + tail
        }
    }
}

/// Fourth-order cumulative integral from the right: `out[i] = ∫_{x_i}^{x_last} f`
/// plus `tail`, for uniformly spaced samples.
///
/// Interior intervals use the four-point rule
/// `h/24 (-f_{i-1} + 13 f_i + 13 f_{i+1} - f_{i+2})`; the two boundary
/// intervals use the one-sided cubic variant.
pub fn cumulative_from_right(values: &[f64], h: f64, tail: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    out[n - 1] = tail;
    if n == 1 {
        return out;
    }
    let piece = |i: usize| -> f64 {
        // integral over [x_i, x_{i+1}]
        if n < 4 {
            return 0.5 * h * (values[i] + values[i + 1]);
        }
        if i == 0 {
            h / 24.0 * (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3])
        } else if i + 2 >= n {
            h / 24.0
                * (values[i - 2] - 5.0 * values[i - 1] + 19.0 * values[i] + 9.0 * values[i + 1])
        } else {
            h / 24.0 * (-values[i - 1] + 13.0 * values[i] + 13.0 * values[i + 1] - values[i + 2])
        }
    };
    for i in (0..n - 1).rev() {
        out[i] = out[i + 1] + piece(i);
    }
    out
}

/// Fourth-order central first derivative on a uniform grid, with
/// one-sided fourth-order stencils at the two ends on each side.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "derivative stencil needs at least five samples");
    let mut d = vec![0.0; n];
    for i in 2..n - 2 {
        d[i] = (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2])
            / (12.0 * h);
    }
    let fwd = |v: &[f64]| (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
    let fwd1 = |v: &[f64]| (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
    d[0] = fwd(&values[0..5]);
    d[1] = fwd1(&values[0..5]);
    let rev: Vec<f64> = values[n - 5..].iter().rev().copied().collect();
    d[n - 1] = -fwd(&rev);
    d[n - 2] = -fwd1(&rev);
    d
}

/// Cubic Hermite interpolation on `[x_k, x_k + h]` at offset `dx`.
pub fn hermite(v0: f64, v1: f64, d0: f64, d1: f64, h: f64, dx: f64) -> f64 {
    let t = dx / h;
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * v0
        + (t3 - 2.0 * t2 + t) * h * d0
        + (-2.0 * t3 + 3.0 * t2) * v1
        + (t3 - t2) * h * d1
}
