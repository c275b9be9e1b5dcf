//! Multi-start local search for unit vectors unbiased to a set of columns.
//!
//! Every restart starts from a Gaussian point on the sphere drawn from its
//! own ChaCha stream, so results do not depend on thread scheduling.

mod cluster;
mod objective;
mod optimizer;

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::StateVector;

pub use cluster::{cluster, Cluster};
pub use objective::{objective, Constraints, Objective};
pub use optimizer::Termination;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub seed: u64,
    pub max_iterations: usize,
    /// Stop once the projected gradient norm falls below this.
    pub gradient_tol: f64,
    /// A restart succeeds when its objective value is below this.
    pub success_residual: f64,
    pub cluster_threshold: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 1000,
            seed: 0,
            max_iterations: 400,
            gradient_tol: 1e-12,
            success_residual: 1e-16,
            cluster_threshold: 1e-6,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("restarts", self.restarts as f64),
            ("max_iterations", self.max_iterations as f64),
            ("gradient_tol", self.gradient_tol),
            ("success_residual", self.success_residual),
            ("cluster_threshold", self.cluster_threshold),
        ];
        match positive.iter().find(|(_, v)| !(*v > 0.0)) {
            Some((name, v)) => Err(Error::Precondition(format!("{name} must be positive, got {v}"))),
            None => Ok(()),
        }
    }
}

/// Canonical representative of the ray through ψ.
pub fn canonicalize(psi: &StateVector) -> StateVector {
    psi.canonical_phase()
}

/// Uniform point on the unit sphere of C^dim for restart `index`.
pub fn restart_start(seed: u64, index: usize, dim: usize) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    StateVector::new(amps)
        .and_then(|v| v.normalized())
        .expect("Gaussian sample is nonzero")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub state: StateVector,
    pub residual: f64,
    /// Restart that produced the representative.
    pub restart: usize,
    pub members: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestartRecord {
    pub index: usize,
    pub state: StateVector,
    pub residual: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub solutions: Vec<Solution>,
    pub clusters: usize,
    pub successes: usize,
    /// Smallest objective value over all restarts.
    pub min_residual: f64,
    /// Smallest objective value among restarts that did not succeed.
    pub best_failed_residual: Option<f64>,
    /// Restarts that hit the iteration cap.
    pub unconverged: usize,
    /// Restarts that stopped because no step made progress at working
    /// precision; typical at nonzero local minima.
    pub stalled: usize,
    pub config: SearchConfig,
    pub constraint_count: usize,
    pub wall_time_secs: f64,
    #[serde(skip)]
    pub records: Vec<RestartRecord>,
}

impl SearchResult {
    /// Cluster the successful restarts again under another threshold.
    pub fn recluster(&self, threshold: f64) -> Vec<Cluster> {
        let successes: Vec<(StateVector, f64)> = self
            .records
            .iter()
            .filter(|r| r.residual < self.config.success_residual)
            .map(|r| (r.state.clone(), r.residual))
            .collect();
        cluster(&successes, threshold)
    }
}

pub fn run_restart(index: usize, constraints: &Constraints, config: &SearchConfig) -> RestartRecord {
    let start = restart_start(config.seed, index, constraints.dim());
    let out = optimizer::minimize(start.amps(), constraints, config.max_iterations, config.gradient_tol);
    let state = StateVector::new(out.psi).expect("dimension preserved");
    RestartRecord {
        index,
        state: canonicalize(&state),
        residual: out.value,
        gradient_norm: out.gradient_norm,
        iterations: out.iterations,
        termination: out.termination,
    }
}

/// Run all restarts (in parallel), then canonicalize and cluster the
/// successful ones. Deterministic for a given configuration.
pub fn search(constraints: &Constraints, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let started = Instant::now();
    let records: Vec<RestartRecord> = (0..config.restarts)
        .into_par_iter()
        .map(|k| run_restart(k, constraints, config))
        .collect();
    let successes: Vec<&RestartRecord> = records
        .iter()
        .filter(|r| r.residual < config.success_residual)
        .collect();
    let pairs: Vec<(StateVector, f64)> = successes.iter().map(|r| (r.state.clone(), r.residual)).collect();
    let clusters = cluster(&pairs, config.cluster_threshold);
    let solutions = clusters
        .iter()
        .map(|c| {
            let rep = successes[c.representative];
            Solution {
                state: rep.state.clone(),
                residual: rep.residual,
                restart: rep.index,
                members: c.members.len(),
            }
        })
        .collect();
    let count = |t| records.iter().filter(|r| r.termination == t).count();
    let min_residual = records.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min);
    let best_failed_residual = records
        .iter()
        .filter(|r| r.residual >= config.success_residual)
        .map(|r| r.residual)
        .reduce(f64::min);
    Ok(SearchResult {
        solutions,
        clusters: clusters.len(),
        successes: successes.len(),
        min_residual,
        best_failed_residual,
        unconverged: count(Termination::IterationCap),
        stalled: count(Termination::Stalled),
        config: *config,
        constraint_count: constraints.len(),
        wall_time_secs: started.elapsed().as_secs_f64(),
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{mu_basis, BasisId, BasisLabel};

    fn qutrit_zx() -> Constraints {
        Constraints::from_bases(&[
            mu_basis(BasisId::qutrit(BasisLabel::Z)),
            mu_basis(BasisId::qutrit(BasisLabel::X)),
        ])
        .unwrap()
    }

    #[test]
    fn starts_are_reproducible_and_distinct() {
        let a = restart_start(5, 3, 6);
        assert_eq!(a, restart_start(5, 3, 6));
        assert_ne!(a, restart_start(5, 4, 6));
        assert_ne!(a, restart_start(6, 3, 6));
        assert!(a.is_unit(1e-14));
    }

    #[test]
    fn finds_the_six_qutrit_vectors() {
        let config = SearchConfig {
            restarts: 200,
            seed: 1,
            ..SearchConfig::default()
        };
        let r = search(&qutrit_zx(), &config).unwrap();
        assert_eq!(r.clusters, 6);
        for s in &r.solutions {
            assert!(s.residual < 1e-16);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let config = SearchConfig {
            restarts: 50,
            seed: 9,
            ..SearchConfig::default()
        };
        let a = search(&qutrit_zx(), &config).unwrap();
        let b = search(&qutrit_zx(), &config).unwrap();
        assert_eq!(a.solutions, b.solutions);
        assert_eq!(a.min_residual.to_bits(), b.min_residual.to_bits());
    }

    #[test]
    fn rejects_zero_restarts() {
        let config = SearchConfig {
            restarts: 0,
            ..SearchConfig::default()
        };
        assert!(search(&qutrit_zx(), &config).is_err());
    }
}
