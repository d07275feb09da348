//! Parallel Monte Carlo driver. Samples are split into fixed-size chunks
//! by index; every sample draws from its own stream, and chunk results are
//! integer histograms, so the output does not depend on the worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigensolver::{eigenvalues_full, sturm_count, top_two};
use crate::estimators::{ConditionWindow, Histogram, Observable};
use crate::sampler::{sample_matrix, EnsembleSpec, TridiagonalMatrix};
use crate::{Error, Result};

const CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverPath {
    /// QL on the whole spectrum
    Full,
    /// Sturm bisection for Λ₁, Λ₂ and Sturm bin counts for the DOS
    TopTwo,
}

#[derive(Debug, Clone)]
pub struct RunPlan {
    pub spec: EnsembleSpec,
    pub samples: u64,
    pub workers: usize,
    /// empty histograms to fill, one per observable
    pub histograms: Vec<Histogram>,
    pub window: Option<ConditionWindow>,
    pub solver: SolverPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub histograms: Vec<Histogram>,
    /// samples passing the window (all of them without a window)
    pub accepted: u64,
    pub samples: u64,
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::InvalidInput("workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))
}

fn chunks(samples: u64) -> Vec<(u64, u64)> {
    (0..samples.div_ceil(CHUNK)).map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(samples))).collect()
}

impl RunPlan {
    fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.samples == 0 {
            return Err(Error::InvalidInput("samples must be at least 1".into()));
        }
        for h in &self.histograms {
            if h.n != self.spec.n {
                return Err(Error::Mismatch(format!("histogram for n = {} in an n = {} run", h.n, self.spec.n)));
            }
            if self.solver == SolverPath::TopTwo && h.observable == Observable::Density {
                return Err(Error::Unsupported("the top-two path cannot fill a global density histogram".into()));
            }
        }
        Ok(())
    }

    /// Window test by two Sturm counts, before any eigenvalue is computed.
    fn in_window(&self, m: &TridiagonalMatrix) -> bool {
        match &self.window {
            None => true,
            Some(w) => {
                let n = m.len();
                sturm_count(m, w.center + w.half_width) == n && sturm_count(m, w.center - w.half_width) < n
            }
        }
    }

    fn process(&self, m: &TridiagonalMatrix, hists: &mut [Histogram]) -> Result<bool> {
        match self.solver {
            SolverPath::Full => {
                let s = eigenvalues_full(m)?;
                if let Some(w) = &self.window {
                    if !w.accepts(s.lambda_max()) {
                        return Ok(false);
                    }
                }
                for h in hists.iter_mut() {
                    h.accumulate(&s)?;
                }
            }
            SolverPath::TopTwo => {
                if !self.in_window(m) {
                    return Ok(false);
                }
                let (first, second) = top_two(m)?;
                if let Some(w) = &self.window {
                    if !w.accepts(first) {
                        return Ok(false);
                    }
                }
                for h in hists.iter_mut() {
                    match h.observable {
                        Observable::Gap => h.accumulate_top_two(first, second)?,
                        Observable::Dos => h.accumulate_dos_sturm(m, first)?,
                        Observable::Density => unreachable!("rejected by validate"),
                    }
                }
            }
        }
        Ok(true)
    }

    fn run_chunk(&self, (start, end): (u64, u64)) -> Result<(Vec<Histogram>, u64)> {
        let mut hists: Vec<Histogram> = self.histograms.iter().map(Histogram::empty_like).collect();
        let mut accepted = 0;
        for index in start..end {
            let m = sample_matrix(&self.spec, &mut self.spec.rng_for(index))?;
            if self.process(&m, &mut hists)? {
                accepted += 1;
            }
        }
        Ok((hists, accepted))
    }
}

pub fn run(plan: &RunPlan) -> Result<RunOutput> {
    plan.validate()?;
    let parts = pool(plan.workers)?.install(|| {
        chunks(plan.samples)
            .into_par_iter()
            .map(|c| plan.run_chunk(c))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut histograms: Vec<Histogram> = plan.histograms.iter().map(Histogram::empty_like).collect();
    let mut accepted = 0;
    for (hists, acc) in parts {
        for (total, part) in histograms.iter_mut().zip(&hists) {
            total.merge_in(part)?;
        }
        accepted += acc;
    }
    Ok(RunOutput { histograms, accepted, samples: plan.samples })
}

/// `f` applied to every sampled matrix, in sample order.
pub fn map_samples<T, F>(spec: &EnsembleSpec, samples: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&TridiagonalMatrix) -> Result<T> + Sync,
{
    spec.validate()?;
    let parts = pool(workers)?.install(|| {
        chunks(samples)
            .into_par_iter()
            .map(|(start, end)| {
                (start..end)
                    .map(|i| f(&sample_matrix(spec, &mut spec.rng_for(i))?))
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(parts.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(samples: u64, workers: usize) -> RunPlan {
        let spec = EnsembleSpec::new(2.0, 12, 77).unwrap();
        RunPlan {
            spec,
            samples,
            workers,
            histograms: vec![
                Histogram::new(Observable::Dos, 12, 0.0, 8.0, 40).unwrap(),
                Histogram::new(Observable::Gap, 12, 0.0, 3.0, 30).unwrap(),
            ],
            window: None,
            solver: SolverPath::Full,
        }
    }

    #[test]
    fn worker_count_does_not_matter() {
        let one = run(&plan(5000, 1)).unwrap();
        let four = run(&plan(5000, 4)).unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn solver_paths_agree() {
        let mut p = plan(3000, 2);
        p.window = Some(ConditionWindow::at_edge(12, 0.3).unwrap());
        let full = run(&p).unwrap();
        p.solver = SolverPath::TopTwo;
        let fast = run(&p).unwrap();
        assert_eq!(full.accepted, fast.accepted);
        assert!(full.accepted > 100 && full.accepted < 3000);
        assert_eq!(full.histograms, fast.histograms);
    }

    #[test]
    fn values_in_order() {
        let spec = EnsembleSpec::new(1.0, 3, 5).unwrap();
        let a = map_samples(&spec, 5000, 1, |m| Ok(m.diag()[0])).unwrap();
        let b = map_samples(&spec, 5000, 3, |m| Ok(m.diag()[0])).unwrap();
        assert_eq!(a, b);
        let direct = sample_matrix(&spec, &mut spec.rng_for(4321)).unwrap().diag()[0];
        assert_eq!(a[4321], direct);
    }

    #[test]
    fn invalid_plans() {
        let mut p = plan(10, 0);
        assert!(run(&p).is_err());
        p.workers = 1;
        p.solver = SolverPath::TopTwo;
        p.histograms.push(Histogram::new(Observable::Density, 12, -10.0, 10.0, 10).unwrap());
        assert!(matches!(run(&p), Err(Error::Unsupported(_))));
    }
}
