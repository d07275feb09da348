use serde::{Deserialize, Serialize};

use crate::eigensolver::{counts_between, Spectrum};
use crate::sampler::TridiagonalMatrix;
use crate::{Error, Result};

/// What a histogram bins, which fixes its normaliser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    /// λ_max − λ_i for every i other than the maximum; N − 1 events per sample.
    Dos,
    /// Λ₁ − Λ₂; one event per sample.
    Gap,
    /// Every eigenvalue; N events per sample.
    Density,
}

impl Observable {
    pub fn events_per_sample(self, n: usize) -> u64 {
        match self {
            Observable::Dos => n as u64 - 1,
            Observable::Gap => 1,
            Observable::Density => n as u64,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Observable::Dos => "dos",
            Observable::Gap => "gap",
            Observable::Density => "density",
        }
    }
}

/// Uniform-bin density estimator over `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub observable: Observable,
    /// matrix size, needed by the normaliser
    pub n: usize,
    pub lo: f64,
    pub hi: f64,
    pub bins: usize,
    pub counts: Vec<u64>,
    pub n_events: u64,
    pub n_samples: u64,
    pub out_of_range: u64,
}

impl Histogram {
    pub fn new(observable: Observable, n: usize, lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::InvalidInput("histogram needs at least one bin".into()));
        }
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidInput(format!("bad histogram range [{lo}, {hi})")));
        }
        if n == 0 || (observable != Observable::Density && n < 2) {
            return Err(Error::Domain(format!("{} histogram needs n >= 2", observable.name())));
        }
        Ok(Self {
            observable,
            n,
            lo,
            hi,
            bins,
            counts: vec![0; bins],
            n_events: 0,
            n_samples: 0,
            out_of_range: 0,
        })
    }

    /// Empty histogram with the same configuration.
    pub fn empty_like(&self) -> Self {
        Self {
            counts: vec![0; self.bins],
            n_events: 0,
            n_samples: 0,
            out_of_range: 0,
            ..self.clone()
        }
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.bins as f64
    }

    pub fn edge(&self, b: usize) -> f64 {
        self.lo + self.width() * b as f64
    }

    pub fn center(&self, b: usize) -> f64 {
        self.lo + self.width() * (b as f64 + 0.5)
    }

    fn push(&mut self, value: f64) {
        self.n_events += 1;
        let t = (value - self.lo) / self.width();
        if t >= 0.0 && t < self.bins as f64 {
            self.counts[t as usize] += 1;
        } else {
            self.out_of_range += 1;
        }
    }

    fn check(&self, observable: Observable, s: &Spectrum) -> Result<()> {
        if self.observable != observable {
            return Err(Error::Mismatch(format!(
                "histogram bins {}, not {}",
                self.observable.name(),
                observable.name()
            )));
        }
        if s.len() != self.n {
            return Err(Error::Mismatch(format!("spectrum of size {} in an n = {} histogram", s.len(), self.n)));
        }
        Ok(())
    }

    pub fn accumulate_dos(&mut self, s: &Spectrum) -> Result<()> {
        self.check(Observable::Dos, s)?;
        let top = s.lambda_max();
        for v in &s.values()[1..] {
            self.push(top - v);
        }
        self.n_samples += 1;
        Ok(())
    }

    pub fn accumulate_gap(&mut self, s: &Spectrum) -> Result<()> {
        self.check(Observable::Gap, s)?;
        self.push(s.gap()?);
        self.n_samples += 1;
        Ok(())
    }

    /// Gap accumulation from (Λ₁, Λ₂) alone.
    pub fn accumulate_top_two(&mut self, first: f64, second: f64) -> Result<()> {
        if self.observable != Observable::Gap {
            return Err(Error::Mismatch("top-two accumulation needs a gap histogram".into()));
        }
        self.push(first - second);
        self.n_samples += 1;
        Ok(())
    }

    pub fn accumulate_global_density(&mut self, s: &Spectrum) -> Result<()> {
        self.check(Observable::Density, s)?;
        for &v in s.values() {
            self.push(v);
        }
        self.n_samples += 1;
        Ok(())
    }

    /// Route a spectrum to the accumulator matching this histogram.
    pub fn accumulate(&mut self, s: &Spectrum) -> Result<()> {
        match self.observable {
            Observable::Dos => self.accumulate_dos(s),
            Observable::Gap => self.accumulate_gap(s),
            Observable::Density => self.accumulate_global_density(s),
        }
    }

    /// DOS accumulation from Sturm counts, without the full spectrum:
    /// `lambda_max` must be the largest eigenvalue of `m`. Needs `lo = 0`.
    pub fn accumulate_dos_sturm(&mut self, m: &TridiagonalMatrix, lambda_max: f64) -> Result<()> {
        if self.observable != Observable::Dos || m.len() != self.n {
            return Err(Error::Mismatch("Sturm DOS path needs a DOS histogram of matching n".into()));
        }
        if self.lo != 0.0 {
            return Err(Error::Unsupported("Sturm DOS path needs a histogram starting at r = 0".into()));
        }
        // λ-space edges, increasing: λ_max − r_B, …, λ_max − r_0
        let edges: Vec<f64> = (0..=self.bins).rev().map(|b| lambda_max - self.edge(b)).collect();
        // below λ_max itself sit exactly n − 1 eigenvalues
        let counts = counts_between(m, &edges, Some(m.len() - 1));
        let mut inside = 0;
        for (k, c) in counts.iter().enumerate() {
            self.counts[self.bins - 1 - k] += c;
            inside += c;
        }
        let events = self.n as u64 - 1;
        self.n_events += events;
        self.out_of_range += events - inside;
        self.n_samples += 1;
        Ok(())
    }

    pub fn normalizer(&self) -> u64 {
        self.observable.events_per_sample(self.n) * self.n_samples
    }

    pub fn density(&self, b: usize) -> f64 {
        let norm = self.normalizer();
        if norm == 0 {
            return 0.0;
        }
        self.counts[b] as f64 / (norm as f64 * self.width())
    }

    /// Poisson error bar of `density(b)`.
    pub fn stderr(&self, b: usize) -> f64 {
        let norm = self.normalizer();
        if norm == 0 {
            return 0.0;
        }
        (self.counts[b] as f64).sqrt() / (norm as f64 * self.width())
    }

    /// Fraction of the normaliser that fell outside the range.
    pub fn out_of_range_fraction(&self) -> f64 {
        match self.normalizer() {
            0 => 0.0,
            norm => self.out_of_range as f64 / norm as f64,
        }
    }

    pub fn same_config(&self, other: &Self) -> bool {
        self.observable == other.observable
            && self.n == other.n
            && self.lo == other.lo
            && self.hi == other.hi
            && self.bins == other.bins
    }

    /// Component-wise sum of two histograms with identical configuration.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.merge_in(other)?;
        Ok(out)
    }

    pub fn merge_in(&mut self, other: &Self) -> Result<()> {
        if !self.same_config(other) {
            return Err(Error::Mismatch("histograms with different configurations".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.n_events += other.n_events;
        self.n_samples += other.n_samples;
        self.out_of_range += other.out_of_range;
        Ok(())
    }
}
