use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::histogram::{Histogram, Observable};
use crate::{Error, Result};

/// Bin extent and raw count behind one curve point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinInfo {
    pub left: f64,
    pub right: f64,
    pub counts: u64,
}

/// (abscissa, ordinate, stderr) triples; histogram-derived curves also carry
/// their bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub stderr: Vec<f64>,
    pub bins: Option<Vec<BinInfo>>,
}

impl Curve {
    pub fn new(x: Vec<f64>, y: Vec<f64>, stderr: Vec<f64>) -> Result<Self> {
        let c = Self { x, y, stderr, bins: None };
        c.validate()?;
        Ok(c)
    }

    /// Exact curve without error bars.
    pub fn exact(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        Self::new(x, y, vec![0.0; n])
    }

    /// Tabulate `f` on `points` uniform abscissae over `[a, b]`.
    pub fn tabulate<F: FnMut(f64) -> Result<f64>>(a: f64, b: f64, points: usize, mut f: F) -> Result<Self> {
        if points < 2 || !(b > a) {
            return Err(Error::InvalidInput(format!("cannot tabulate {points} points on [{a}, {b}]")));
        }
        let h = (b - a) / (points - 1) as f64;
        let x: Vec<f64> = (0..points).map(|k| a + h * k as f64).collect();
        let y = x.iter().map(|&v| f(v)).collect::<Result<Vec<_>>>()?;
        Self::exact(x, y)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.x.len();
        if self.y.len() != n || self.stderr.len() != n {
            return Err(Error::InvalidInput("curve columns differ in length".into()));
        }
        if let Some(bins) = &self.bins {
            if bins.len() != n {
                return Err(Error::InvalidInput("curve bins differ in length".into()));
            }
        }
        if self.x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("curve abscissae must increase strictly".into()));
        }
        if self.stderr.iter().any(|s| !(*s >= 0.0)) {
            return Err(Error::InvalidInput("negative or NaN stderr".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Linear interpolation; `None` outside the abscissa range.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let n = self.x.len();
        if n == 0 || t < self.x[0] || t > self.x[n - 1] {
            return None;
        }
        if n == 1 {
            return Some(self.y[0]);
        }
        let k = self.x.partition_point(|&v| v <= t).clamp(1, n - 1);
        let (x0, x1) = (self.x[k - 1], self.x[k]);
        let w = (t - x0) / (x1 - x0);
        Some(self.y[k - 1] * (1.0 - w) + self.y[k] * w)
    }

    /// Trapezoid integral, or the bin sum for histogram curves.
    pub fn integral(&self) -> f64 {
        match &self.bins {
            Some(bins) => bins.iter().zip(&self.y).map(|(b, y)| y * (b.right - b.left)).sum(),
            None => self.x.windows(2).zip(self.y.windows(2)).map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1])).sum(),
        }
    }

    /// Points with abscissa in `[a, b]`.
    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let keep: Vec<usize> = (0..self.len()).filter(|&k| self.x[k] >= a && self.x[k] <= b).collect();
        Self {
            x: keep.iter().map(|&k| self.x[k]).collect(),
            y: keep.iter().map(|&k| self.y[k]).collect(),
            stderr: keep.iter().map(|&k| self.stderr[k]).collect(),
            bins: self.bins.as_ref().map(|bins| keep.iter().map(|&k| bins[k]).collect()),
        }
    }

    /// CSV text: the histogram schema when bins are present, `x,y` otherwise.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match &self.bins {
            Some(bins) => {
                out.push_str("bin_left,bin_right,density,stderr,counts\n");
                for ((b, y), e) in bins.iter().zip(&self.y).zip(&self.stderr) {
                    let _ = writeln!(out, "{:e},{:e},{:e},{:e},{}", b.left, b.right, y, e, b.counts);
                }
            }
            None => {
                out.push_str("x,y\n");
                for (x, y) in self.x.iter().zip(&self.y) {
                    let _ = writeln!(out, "{x:e},{y:e}");
                }
            }
        }
        out
    }

    /// Parse either CSV schema; histogram rows become points at bin centres.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::InvalidInput("empty CSV".into()))?;
        let columns: Vec<&str> = header.split(',').map(str::trim).collect();
        let num = |s: &str| f64::from_str(s).map_err(|_| Error::InvalidInput(format!("not a number: '{s}'")));
        let curve = match columns.as_slice() {
            ["bin_left", "bin_right", "density", "stderr", "counts"] => {
                let mut c = Curve { x: vec![], y: vec![], stderr: vec![], bins: Some(vec![]) };
                for line in lines {
                    let cells = parse_row(line, 5)?;
                    let (left, right) = (num(cells[0])?, num(cells[1])?);
                    let counts = cells[4]
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad count '{}'", cells[4])))?;
                    c.x.push(0.5 * (left + right));
                    c.y.push(num(cells[2])?);
                    c.stderr.push(num(cells[3])?);
                    c.bins.as_mut().unwrap().push(BinInfo { left, right, counts });
                }
                c
            }
            ["x", "y"] => {
                let mut c = Curve { x: vec![], y: vec![], stderr: vec![], bins: None };
                for line in lines {
                    let cells = parse_row(line, 2)?;
                    c.x.push(num(cells[0])?);
                    c.y.push(num(cells[1])?);
                    c.stderr.push(0.0);
                }
                c
            }
            _ => return Err(Error::InvalidInput(format!("unrecognised CSV header '{header}'"))),
        };
        curve.validate()?;
        Ok(curve)
    }
}

fn parse_row(line: &str, width: usize) -> Result<Vec<&str>> {
    let cells: Vec<&str> = line.split(',').map(str::trim).collect();
    if cells.len() != width {
        return Err(Error::InvalidInput(format!("expected {width} columns in row '{line}'")));
    }
    Ok(cells)
}

fn from_histogram(h: &Histogram, x_scale: f64, y_scale: f64) -> Curve {
    let mut c = Curve { x: vec![], y: vec![], stderr: vec![], bins: Some(vec![]) };
    for b in 0..h.bins {
        c.x.push(h.center(b) * x_scale);
        c.y.push(h.density(b) * y_scale);
        c.stderr.push(h.stderr(b) * y_scale);
        c.bins.as_mut().unwrap().push(BinInfo {
            left: h.edge(b) * x_scale,
            right: h.edge(b + 1) * x_scale,
            counts: h.counts[b],
        });
    }
    c
}

/// Histogram in its own units.
pub fn unscaled(h: &Histogram) -> Curve {
    from_histogram(h, 1.0, 1.0)
}

/// Bulk scale of the DOS: x = r/√N, y = √N ρ.
pub fn rescale_bulk(h: &Histogram, n: usize) -> Result<Curve> {
    if h.observable != Observable::Dos {
        return Err(Error::Mismatch("bulk rescaling applies to DOS histograms".into()));
    }
    let s = (n as f64).sqrt();
    Ok(from_histogram(h, 1.0 / s, s))
}

/// Edge scale: x = √2 N^{1/6} r, with the density divided by √2 N^{−5/6}
/// (DOS) or √2 N^{1/6} (gap).
pub fn rescale_edge(h: &Histogram, n: usize) -> Result<Curve> {
    let nf = n as f64;
    let x_scale = std::f64::consts::SQRT_2 * nf.powf(1.0 / 6.0);
    let y_scale = match h.observable {
        Observable::Dos => 1.0 / (std::f64::consts::SQRT_2 * nf.powf(-5.0 / 6.0)),
        Observable::Gap => 1.0 / x_scale,
        Observable::Density => {
            return Err(Error::Mismatch("edge rescaling applies to DOS and gap histograms".into()))
        }
    };
    Ok(from_histogram(h, x_scale, y_scale))
}

/// Edge-scale r̃ window mapped back to raw r at matrix size `n`.
pub fn edge_to_raw(r_tilde: f64, n: usize) -> f64 {
    r_tilde / (std::f64::consts::SQRT_2 * (n as f64).powf(1.0 / 6.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub sup: f64,
    pub l2: f64,
    pub chi2_per_bin: f64,
    /// points entering sup and L²
    pub points: usize,
    /// points with a nonzero error bar, entering χ²
    pub chi2_points: usize,
}

/// Reference for a comparison: another curve or a function.
pub enum Reference<'a> {
    Curve(&'a Curve),
    Function(&'a dyn Fn(f64) -> Result<f64>),
}

impl Reference<'_> {
    fn at(&self, t: f64) -> Result<Option<f64>> {
        match self {
            Reference::Curve(c) => Ok(c.interpolate(t)),
            Reference::Function(f) => f(t).map(Some),
        }
    }

    /// Functions are averaged over the bin by Simpson's rule when bins are
    /// known; tabulated curves are read at the point itself.
    fn average(&self, c: &Curve, k: usize) -> Result<Option<f64>> {
        match (&c.bins, self) {
            (Some(bins), Reference::Function(_)) => {
                let b = bins[k];
                let pts = [self.at(b.left)?, self.at(0.5 * (b.left + b.right))?, self.at(b.right)?];
                match pts {
                    [Some(a), Some(m), Some(z)] => Ok(Some((a + 4.0 * m + z) / 6.0)),
                    _ => self.at(c.x[k]),
                }
            }
            _ => self.at(c.x[k]),
        }
    }
}

/// Sup, L² and χ²/bin distances from `c` to `reference` over the points of
/// `c` in `[a, b]` where the reference is defined. Histogram curves are
/// compared to the bin average of the reference.
pub fn compare_curves(c: &Curve, reference: &Reference, a: f64, b: f64) -> Result<Metrics> {
    let mut sup: f64 = 0.0;
    let mut l2 = 0.0;
    let mut chi2 = 0.0;
    let mut points = 0;
    let mut chi2_points = 0;
    for k in 0..c.len() {
        if c.x[k] < a || c.x[k] > b {
            continue;
        }
        let Some(r) = reference.average(c, k)? else { continue };
        let d = c.y[k] - r;
        let weight = match &c.bins {
            Some(bins) => bins[k].right - bins[k].left,
            None if c.len() > 1 => {
                let lo = if k > 0 { c.x[k - 1] } else { c.x[k] };
                let hi = if k + 1 < c.len() { c.x[k + 1] } else { c.x[k] };
                0.5 * (hi - lo)
            }
            None => 1.0,
        };
        sup = sup.max(d.abs());
        l2 += d * d * weight;
        points += 1;
        if c.stderr[k] > 0.0 {
            chi2 += (d / c.stderr[k]).powi(2);
            chi2_points += 1;
        }
    }
    if points == 0 {
        return Err(Error::InvalidInput("curves do not overlap on the comparison window".into()));
    }
    Ok(Metrics {
        sup,
        l2: l2.sqrt(),
        chi2_per_bin: if chi2_points > 0 { chi2 / chi2_points as f64 } else { 0.0 },
        points,
        chi2_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gap_histogram() -> Histogram {
        let mut h = Histogram::new(Observable::Gap, 2, 0.0, 4.0, 8).unwrap();
        h.counts = vec![1, 3, 5, 7, 5, 3, 1, 0];
        h.n_samples = 25;
        h.n_events = 25;
        h
    }

    #[test]
    fn csv_round_trip() {
        let c = rescale_edge(&gap_histogram(), 100).unwrap();
        let back = Curve::from_csv(&c.to_csv()).unwrap();
        assert_eq!(back.bins, c.bins);
        for (a, b) in back.y.iter().zip(&c.y) {
            assert!((a - b).abs() <= 1e-15 * a.abs());
        }
        let e = Curve::exact(vec![0.0, 1.0], vec![2.0, 3.0]).unwrap();
        assert_eq!(Curve::from_csv(&e.to_csv()).unwrap(), e);
        assert!(Curve::from_csv("a,b\n1,2\n").is_err());
        assert!(Curve::from_csv("x,y\n1,2,3\n").is_err());
        assert!(Curve::from_csv("x,y\n1,zz\n").is_err());
    }

    #[test]
    fn rescaling_preserves_mass() {
        let h = gap_histogram();
        let raw = unscaled(&h).integral();
        let edge = rescale_edge(&h, 100).unwrap().integral();
        assert!((raw - 1.0).abs() < 1e-12 && (edge - 1.0).abs() < 1e-12);
        assert!(rescale_bulk(&h, 100).is_err());
    }

    #[test]
    fn self_comparison_is_zero() {
        let c = rescale_edge(&gap_histogram(), 10).unwrap();
        let m = compare_curves(&c, &Reference::Curve(&c), f64::NEG_INFINITY, f64::INFINITY).unwrap();
        assert_eq!((m.sup, m.l2, m.chi2_per_bin), (0.0, 0.0, 0.0));
        assert_eq!(m.points, 8);
    }

    #[test]
    fn disjoint_ranges_error() {
        let a = Curve::exact(vec![0.0, 1.0], vec![1.0, 1.0]).unwrap();
        let b = Curve::exact(vec![2.0, 3.0], vec![1.0, 1.0]).unwrap();
        assert!(compare_curves(&a, &Reference::Curve(&b), 0.0, 10.0).is_err());
    }

    #[test]
    fn function_reference() {
        let c = Curve::tabulate(0.0, 1.0, 11, |x| Ok(x * x)).unwrap();
        let f = |x: f64| Ok(x * x + 0.1);
        let m = compare_curves(&c, &Reference::Function(&f), 0.0, 1.0).unwrap();
        assert!((m.sup - 0.1).abs() < 1e-12);
        assert!((m.l2 - 0.1).abs() < 1e-12);
        // histogram bins are compared to the bin average: for a linear density
        // on [0, 1) that is the value at the centre
        let mut h = Histogram::new(Observable::Gap, 2, 0.0, 1.0, 2).unwrap();
        h.counts = vec![1, 3];
        h.n_samples = 4;
        h.n_events = 4;
        let linear = |x: f64| Ok(2.0 * x);
        let m = compare_curves(&unscaled(&h), &Reference::Function(&linear), 0.0, 1.0).unwrap();
        assert!(m.sup < 1e-12);
    }
}
