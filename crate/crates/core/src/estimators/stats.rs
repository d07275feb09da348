use serde::{Deserialize, Serialize};

use super::curve::Curve;
use crate::eigensolver::Spectrum;
use crate::{Error, Result};

/// Acceptance rule |λ_max − center| < half_width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionWindow {
    pub center: f64,
    pub half_width: f64,
}

impl ConditionWindow {
    pub fn new(center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite() && center.is_finite()) {
            return Err(Error::InvalidInput(format!("bad window {center} ± {half_width}")));
        }
        Ok(Self { center, half_width })
    }

    /// Window centred on the edge √(2N).
    pub fn at_edge(n: usize, half_width: f64) -> Result<Self> {
        Self::new((2.0 * n as f64).sqrt(), half_width)
    }

    pub fn accepts(&self, lambda_max: f64) -> bool {
        (lambda_max - self.center).abs() < self.half_width
    }
}

pub fn condition_accept(s: &Spectrum, w: &ConditionWindow) -> bool {
    w.accepts(s.lambda_max())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFit {
    pub slope: f64,
    pub slope_stderr: f64,
    pub intercept: f64,
    pub points: usize,
}

/// Weighted least-squares fit of ln y = intercept + slope·ln x over points
/// with x in `[a, b]` and y > 0. Weights come from the relative error bars;
/// exact curves (all stderr zero) are fitted unweighted. Histogram bins with
/// fewer than `min_counts` events are skipped.
pub fn fit_power_slope(c: &Curve, a: f64, b: f64, min_counts: u64) -> Result<PowerFit> {
    fit_log_linear(c, a.max(f64::MIN_POSITIVE), b, min_counts, f64::ln)
}

/// Same fit with an arbitrary abscissa transform: ln y against t(x).
pub fn fit_log_linear<T: Fn(f64) -> f64>(c: &Curve, a: f64, b: f64, min_counts: u64, t: T) -> Result<PowerFit> {
    let weighted = c.stderr.iter().any(|&s| s > 0.0);
    let mut rows = Vec::new();
    for k in 0..c.len() {
        let (x, y) = (c.x[k], c.y[k]);
        if x < a || x > b || !(y > 0.0) {
            continue;
        }
        if let Some(bins) = &c.bins {
            if bins[k].counts < min_counts.max(1) {
                continue;
            }
        }
        let w = if weighted {
            if c.stderr[k] <= 0.0 {
                continue;
            }
            (y / c.stderr[k]).powi(2)
        } else {
            1.0
        };
        rows.push((t(x), y.ln(), w));
    }
    if rows.len() < 2 {
        return Err(Error::InvalidInput(format!("only {} usable points for the fit", rows.len())));
    }
    let sw: f64 = rows.iter().map(|r| r.2).sum();
    let mu = rows.iter().map(|r| r.2 * r.0).sum::<f64>() / sw;
    let mv = rows.iter().map(|r| r.2 * r.1).sum::<f64>() / sw;
    let suu: f64 = rows.iter().map(|r| r.2 * (r.0 - mu).powi(2)).sum();
    let suv: f64 = rows.iter().map(|r| r.2 * (r.0 - mu) * (r.1 - mv)).sum();
    if suu <= 0.0 {
        return Err(Error::InvalidInput("degenerate abscissae in fit".into()));
    }
    let slope = suv / suu;
    let slope_stderr = if weighted {
        suu.recip().sqrt()
    } else {
        let resid: f64 = rows.iter().map(|r| (r.1 - mv - slope * (r.0 - mu)).powi(2)).sum();
        let dof = rows.len().saturating_sub(2).max(1) as f64;
        (resid / dof / suu).sqrt()
    };
    Ok(PowerFit { slope, slope_stderr, intercept: mv - slope * mu, points: rows.len() })
}

/// Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("no samples".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &v) in sorted.iter().enumerate() {
        let f = cdf(v);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

/// Cumulative trapezoid integral of a density curve, as a CDF clamped to
/// [0, 1]; zero left of the first abscissa and one right of the last.
pub fn cdf_from_density(c: &Curve) -> impl Fn(f64) -> f64 + '_ {
    let mut acc = vec![0.0; c.len()];
    for k in 1..c.len() {
        acc[k] = acc[k - 1] + 0.5 * (c.x[k] - c.x[k - 1]) * (c.y[k] + c.y[k - 1]);
    }
    move |t: f64| {
        let n = c.len();
        if t <= c.x[0] {
            return 0.0;
        }
        if t >= c.x[n - 1] {
            return 1.0;
        }
        let k = c.x.partition_point(|&v| v <= t).clamp(1, n - 1);
        let h = t - c.x[k - 1];
        let slope = (c.y[k] - c.y[k - 1]) / (c.x[k] - c.x[k - 1]);
        let part = h * (c.y[k - 1] + 0.5 * slope * h);
        (acc[k - 1] + part).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_is_strict() {
        let w = ConditionWindow::new(10.0, 0.5).unwrap();
        assert!(w.accepts(10.0));
        assert!(!w.accepts(10.5));
        assert!(!w.accepts(9.5));
        assert!(w.accepts(10.4999));
        assert!(ConditionWindow::new(0.0, 0.0).is_err());
        let s = Spectrum::new(vec![20.0, 1.0]).unwrap();
        assert!(condition_accept(&s, &ConditionWindow::at_edge(200, 0.1).unwrap()));
    }

    #[test]
    fn exact_power_law_slope() {
        let c = Curve::tabulate(0.01, 1.0, 50, |x| Ok(3.0 * x.powf(2.5))).unwrap();
        let fit = fit_power_slope(&c, 0.0, 1.0, 0).unwrap();
        assert!((fit.slope - 2.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
        let c = Curve::tabulate(1.0, 4.0, 30, |x| Ok((-0.7 * x.powf(1.5)).exp())).unwrap();
        let fit = fit_log_linear(&c, 0.0, 9.0, 0, |x| x.powf(1.5)).unwrap();
        assert!((fit.slope + 0.7).abs() < 1e-12);
    }

    #[test]
    fn ks_against_uniform() {
        let s: Vec<f64> = (0..1000).map(|k| (k as f64 + 0.5) / 1000.0).collect();
        let d = ks_distance(&s, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.0005).abs() < 1e-12);
        let c = Curve::tabulate(0.0, 1.0, 3, |_| Ok(1.0)).unwrap();
        let cdf = cdf_from_density(&c);
        assert!((cdf(0.3) - 0.3).abs() < 1e-15);
        assert_eq!(cdf(2.0), 1.0);
    }
}
