use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use softedge::eigensolver::{eigenvalues_full, lambda_max};
use softedge::estimators::{ks_distance, Histogram, Observable};
use softedge::sampler::{sample_chi, sample_gaussian, sample_matrix, EnsembleSpec};
use softedge::simulation::{map_samples, run, RunPlan, SolverPath};

#[test]
fn gaussian_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 1_000_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_gaussian(&mut rng)).collect();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    assert!(mean.abs() < 5.0 / (n as f64).sqrt(), "{mean}");
    assert!((var - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt(), "{var}");
}

#[test]
fn chi_matches_its_distribution() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for dof in [1.0, 2.0, 3.7] {
        let xs: Vec<f64> = (0..200_000).map(|_| sample_chi(dof, &mut rng).unwrap()).collect();
        let law = ChiSquared::new(dof).unwrap();
        let d = ks_distance(&xs, |x| if x <= 0.0 { 0.0 } else { law.cdf(x * x) }).unwrap();
        // 1.95/√n is the 0.1% critical value
        assert!(d < 1.95 / (xs.len() as f64).sqrt(), "dof={dof}: {d}");
    }
}

#[test]
fn single_eigenvalue_has_variance_one_over_beta() {
    for beta in [1.0, 2.0, 4.0] {
        let spec = EnsembleSpec::new(beta, 1, 3).unwrap();
        let xs = map_samples(&spec, 100_000, 2, |m| Ok(m.diag()[0])).unwrap();
        let var = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64;
        assert!((var * beta - 1.0).abs() < 0.02, "beta={beta}: {var}");
    }
}

#[test]
fn largest_eigenvalue_sits_near_the_edge() {
    let spec = EnsembleSpec::new(2.0, 100, 5).unwrap();
    let tops = map_samples(&spec, 2000, 4, |m| Ok(lambda_max(m))).unwrap();
    let mean = tops.iter().sum::<f64>() / tops.len() as f64;
    // √200 ≈ 14.14; the Tracy–Widom mean pulls it below by ~0.33
    assert!(mean > 13.5 && mean < 14.1, "{mean}");
    assert!(tops.iter().all(|&t| t > 12.5 && t < 15.5));
}

#[test]
fn global_density_is_symmetric() {
    let spec = EnsembleSpec::new(1.0, 30, 8).unwrap();
    let h = Histogram::new(Observable::Density, 30, -10.0, 10.0, 40).unwrap();
    let plan = RunPlan { spec, samples: 20_000, workers: 4, histograms: vec![h], window: None, solver: SolverPath::Full };
    let out = run(&plan).unwrap();
    let h = &out.histograms[0];
    for b in 0..20 {
        let (l, r) = (h.counts[b] as f64, h.counts[39 - b] as f64);
        let sigma = (l + r).sqrt().max(1.0);
        assert!((l - r).abs() < 5.0 * sigma, "bin {b}: {l} vs {r}");
    }
}

#[test]
fn streams_are_addressable_by_index() {
    // any subset of samples can be regenerated without the rest
    let spec = EnsembleSpec::new(2.5, 12, 77).unwrap();
    let all = map_samples(&spec, 300, 3, |m| Ok(eigenvalues_full(m)?.lambda_max())).unwrap();
    for index in [0u64, 151, 299] {
        let m = sample_matrix(&spec, &mut spec.rng_for(index)).unwrap();
        assert_eq!(eigenvalues_full(&m).unwrap().lambda_max(), all[index as usize]);
    }
}
