use rayon::prelude::*;

use super::{run, EngineError, RunMetrics, RunOptions, StabilityThresholds};
use crate::network::NodeId;
use crate::scenario::Scenario;
use crate::stochastic::derive_seed;
use crate::strategy::Strategy;

/// A `lambda x mu` grid with uniform rate overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub lambdas: Vec<f64>,
    pub mus: Vec<f64>,
    pub strategy: Strategy,
    pub horizon: u64,
    pub seeds: Vec<u64>,
    pub thresholds: StabilityThresholds,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub lambda: f64,
    pub mu: f64,
    pub strategy: Strategy,
    pub stations: Vec<NodeId>,
    /// Per station, the largest maximum occupancy over all seeds.
    pub max_occupancy_over_seeds: Vec<u32>,
    /// Some station was unstable in some seed.
    pub unstable_any_seed: bool,
    pub runs: Vec<RunMetrics>,
}

impl SweepCell {
    /// Occupancies as exported: an unstable cell reports zeros.
    pub fn exported_max(&self) -> Vec<u32> {
        if self.unstable_any_seed {
            vec![0; self.max_occupancy_over_seeds.len()]
        } else {
            self.max_occupancy_over_seeds.clone()
        }
    }
}

/// Seed of one sweep run, derived from the scenario seed, the cell and the
/// user seed. Independent of the strategy, so strategies see paired draws.
pub fn sweep_run_seed(base_seed: u64, lambda: f64, mu: f64, seed: u64) -> u64 {
    derive_seed(&[base_seed, lambda.to_bits(), mu.to_bits(), seed])
}

/// Runs every `(lambda, mu, seed)` combination. Cells come back in
/// `lambda`-major order; results do not depend on thread scheduling.
pub fn sweep(base: &Scenario, cfg: &SweepConfig) -> Result<Vec<SweepCell>, EngineError> {
    let in_unit = |v: &f64| (0.0..=1.0).contains(v);
    if cfg.lambdas.is_empty() || cfg.mus.is_empty() || cfg.seeds.is_empty() {
        return Err(EngineError::InvalidSweep(
            "lambdas, mus and seeds must be nonempty".into(),
        ));
    }
    if !cfg.lambdas.iter().chain(&cfg.mus).all(in_unit) {
        return Err(EngineError::InvalidSweep("rates must lie in [0, 1]".into()));
    }
    if cfg.horizon < 1 {
        return Err(EngineError::InvalidSweep("horizon must be at least 1".into()));
    }

    let cells: Vec<(f64, f64)> = cfg
        .lambdas
        .iter()
        .flat_map(|&l| cfg.mus.iter().map(move |&m| (l, m)))
        .collect();
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| cfg.seeds.iter().map(move |&s| (c, s)))
        .collect();
    let options = RunOptions {
        thresholds: cfg.thresholds,
    };
    let results: Vec<Result<RunMetrics, EngineError>> = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let (lambda, mu) = cells[c];
            let scenario = base
                .with_uniform_rates(lambda, mu)
                .with_horizon(cfg.horizon)
                .with_seed(sweep_run_seed(base.seed(), lambda, mu, seed));
            run(&scenario, cfg.strategy, &options)
        })
        .collect();

    let mut results = results.into_iter();
    let stations: Vec<NodeId> = base
        .network()
        .stations()
        .iter()
        .map(|&s| base.network().id(s).clone())
        .collect();
    let mut out = Vec::with_capacity(cells.len());
    for &(lambda, mu) in &cells {
        let runs = results
            .by_ref()
            .take(cfg.seeds.len())
            .collect::<Result<Vec<_>, _>>()?;
        let mut max = vec![0u32; stations.len()];
        for r in &runs {
            for (m, s) in max.iter_mut().zip(&r.stations) {
                *m = (*m).max(s.max_occupancy);
            }
        }
        out.push(SweepCell {
            lambda,
            mu,
            strategy: cfg.strategy,
            stations: stations.clone(),
            max_occupancy_over_seeds: max,
            unstable_any_seed: runs.iter().any(|r| !r.all_stable()),
            runs,
        });
    }
    Ok(out)
}
