//! Replay of the argument that no vector of C⁶ is unbiased to an MU product
//! triple.
//!
//! Step 1 forces the qubit marginal to be maximally mixed, so any solution
//! is maximally entangled. Step 2 forces the missing Schmidt direction of
//! the qutrit to be unbiased to B_z and B_x, leaving twelve candidates.
//! Step 3 shows each candidate fails the conditions on |1_x, J_x⟩.

mod c3;
mod candidates;
mod phases;

use serde::Serialize;

use crate::constructions::{triple, yw_labels, Triple};
use crate::error::Result;
use crate::linalg::{bloch, partial_trace, schmidt, BlochVector, SchmidtDecomposition, StateVector, Subsystem};
use crate::search::{search, Constraints, SearchConfig, SearchResult};
use crate::verify::{validate_product_set, Tolerance};

pub use c3::{enumerate_c3_mu_to_zx, enumerate_flat_c3, enumerate_flat_columns, flat_vector, C3Enumeration, NonConverged, MIN_RESOLUTION};
pub use candidates::{
    consistency, step3_family_min_deviation, step3_violation, twelve_candidates, Candidate, Consistency, Verdict,
    ViolationReport,
};
pub use phases::{
    candidate_id, extract_phase_sequence, h_pair, scan_theta_phi, CandidateParams, FeasibilityMap, Order,
    PhaseSequence, ScanSummary,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step1Report {
    pub bloch: BlochVector,
    pub schmidt: SchmidtDecomposition,
    pub maximally_entangled: bool,
}

/// Bloch vector of the qubit marginal and the Schmidt form of ψ.
pub fn step1_reduced_state(psi: &StateVector, tol: f64) -> Result<Step1Report> {
    let rho = partial_trace(psi, Subsystem::A)?;
    let n = bloch(&rho, 1e-8)?;
    let s = schmidt(psi)?;
    Ok(Step1Report {
        maximally_entangled: n.norm() < tol,
        bloch: n,
        schmidt: s,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem1Config {
    /// Points per phase for the C³ torus grid.
    pub resolution: usize,
    /// (ϑ, φ) grid for the elimination scan.
    pub scan_grid: (usize, usize),
    pub search: SearchConfig,
    pub tol: f64,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Self {
            resolution: 720,
            scan_grid: (181, 360),
            search: SearchConfig::default(),
            tol: 1e-10,
        }
    }
}

/// Step-3 deviations below this would count as a near miss.
pub const VIOLATION_FLOOR: f64 = 0.1;
/// Off-pole scan residuals below this would count as a feasible point.
pub const SCAN_FLOOR: f64 = 1e-6;
/// Search minima below this would count as a near miss.
pub const SEARCH_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub triple: Triple,
    pub triple_valid: bool,
    pub enumeration: C3Enumeration,
    pub enumeration_matches_yw: bool,
    pub scans: Vec<ScanSummary>,
    pub mu_sequences: Vec<(String, PhaseSequence)>,
    pub candidates: Vec<Consistency>,
    pub violations: Vec<ViolationReport>,
    /// Smallest Step-3 deviation over the phase families of all candidates.
    pub family_min_deviation: f64,
    pub search: SearchResult,
    pub verdict: String,
}

pub fn theorem1_pipeline(which: Triple, config: &Theorem1Config) -> Result<Theorem1Report> {
    let bases = triple(which);
    let triple_valid = validate_product_set(&bases, Tolerance::new(1e-12)?)?.pass;

    let enumeration = enumerate_c3_mu_to_zx(config.resolution, 1e-12)?;
    let enumeration_matches_yw = enumeration.matches_yw(1e-8);

    let mut scans = Vec::new();
    let mut mu_sequences = Vec::new();
    for base in yw_labels() {
        for order in [Order::HA, Order::AH] {
            let map = scan_theta_phi(base, order, config.scan_grid.0, config.scan_grid.1)?;
            scans.push(map.summary(SCAN_FLOOR));
            let (h, hp) = h_pair(base, order);
            mu_sequences.push((candidate_id(base, order), extract_phase_sequence(&h, &hp, &phases::z_basis(), 1e-10)?));
        }
    }

    let cands = twelve_candidates();
    let candidates = cands.iter().map(consistency).collect::<Result<Vec<_>>>()?;
    let violations = cands
        .iter()
        .map(|c| step3_violation(c, config.tol))
        .collect::<Result<Vec<_>>>()?;
    let family_min_deviation = cands
        .iter()
        .map(|c| step3_family_min_deviation(c, 360))
        .fold(f64::INFINITY, f64::min);

    let constraints = Constraints::from_product_bases(&bases)?;
    let search = search(&constraints, &config.search)?;

    let unextendible = triple_valid
        && enumeration.solutions.len() == 6
        && enumeration_matches_yw
        && scans.iter().all(|s| s.near_zeros_off_poles == 0 && s.max_at_poles < config.tol)
        && candidates.len() == 12
        && candidates.iter().all(|c| c.entanglement_gap < 1e-12)
        && violations
            .iter()
            .all(|v| v.verdict == Verdict::Violated && v.max_deviation >= VIOLATION_FLOOR)
        && family_min_deviation >= VIOLATION_FLOOR
        && search.solutions.is_empty()
        && search.min_residual > SEARCH_FLOOR;
    Ok(Theorem1Report {
        triple: which,
        triple_valid,
        enumeration,
        enumeration_matches_yw,
        scans,
        mu_sequences,
        candidates,
        violations,
        family_min_deviation,
        search,
        verdict: if unextendible { "unextendible" } else { "inconclusive" }.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::tensor;

    #[test]
    fn step1_on_product_and_candidate() {
        let p = tensor(&StateVector::basis(2, 0).unwrap(), &StateVector::basis(3, 0).unwrap()).unwrap();
        let r = step1_reduced_state(&p, 1e-10).unwrap();
        assert!((r.bloch.norm() - 1.0).abs() < 1e-15);
        assert!(!r.maximally_entangled);
        let c = &twelve_candidates()[3];
        let r = step1_reduced_state(&c.state, 1e-10).unwrap();
        assert!(r.bloch.norm() < 1e-15);
        assert!(r.maximally_entangled);
        assert!(r.schmidt.is_maximally_entangled(1e-12));
    }

    #[test]
    fn pipeline_at_small_scale() {
        let config = Theorem1Config {
            resolution: 72,
            scan_grid: (37, 72),
            search: SearchConfig {
                restarts: 50,
                ..SearchConfig::default()
            },
            tol: 1e-10,
        };
        let r = theorem1_pipeline(Triple::T1, &config).unwrap();
        assert_eq!(r.verdict, "unextendible");
        assert_eq!(r.enumeration.solutions.len(), 6);
        assert_eq!(r.violations.len(), 12);
    }
}
