use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::phases::{candidate_id, extract_phase_sequence, h_pair, x_basis, CandidateParams, Order, PhaseSequence};
use crate::constructions::{mu_basis, yw_labels, BasisId, BasisLabel, StateLabel};
use crate::error::Result;
use crate::linalg::{inner, partial_trace, schmidt, tensor, StateVector, Subsystem};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub id: String,
    pub params: CandidateParams,
    pub h: StateVector,
    pub hperp: StateVector,
    /// (|0_z⟩⊗|H⟩ + |1_z⟩⊗|H^⊥⟩)/√2
    pub state: StateVector,
}

impl Candidate {
    pub fn new(base: StateLabel, order: Order) -> Result<Self> {
        let params = CandidateParams::new(0.0, 0.0, base, order)?;
        let (h, hperp) = h_pair(base, order);
        let state = entangle(&h, &hperp, 0.0);
        Ok(Self {
            id: candidate_id(base, order),
            params,
            h,
            hperp,
            state,
        })
    }

    /// The same candidate with |H^⊥⟩ replaced by e^{iφ}|H^⊥⟩.
    pub fn with_phase(&self, phi: f64) -> StateVector {
        entangle(&self.h, &self.hperp, phi)
    }
}

fn entangle(h: &StateVector, hperp: &StateVector, phi: f64) -> StateVector {
    let z0 = StateVector::basis(2, 0).expect("dim 2");
    let z1 = StateVector::basis(2, 1).expect("dim 2");
    let a = tensor(&z0, h).expect("dims");
    let b = tensor(&z1, hperp).expect("dims");
    a.combine(
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        &b,
        Complex64::from_polar(FRAC_1_SQRT_2, phi),
    )
    .expect("dim 6")
}

/// For B_y then B_w, each choice of |H^⊥⟩⊥ and both orders.
pub fn twelve_candidates() -> Vec<Candidate> {
    yw_labels()
        .into_iter()
        .flat_map(|base| [Order::HA, Order::AH].map(move |o| (base, o)))
        .map(|(base, order)| Candidate::new(base, order).expect("labels from B_y ∪ B_w"))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Violated,
    Satisfied,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationReport {
    pub id: String,
    /// |⟨1_x,J_x|ψ⟩|² by direct evaluation.
    pub overlaps: [f64; 3],
    /// (1/6)(1 − cos ν_J)
    pub predicted: [f64; 3],
    pub deviations: [f64; 3],
    pub max_deviation: f64,
    pub nu: PhaseSequence,
    pub verdict: Verdict,
}

fn one_x(j: usize) -> StateVector {
    let q = mu_basis(BasisId::qubit(BasisLabel::X)).columns[1].clone();
    let t = mu_basis(BasisId::qutrit(BasisLabel::X)).columns[j].clone();
    tensor(&q, &t).expect("dims")
}

fn x_overlaps(psi: &StateVector) -> [f64; 3] {
    [0, 1, 2].map(|j| inner(&one_x(j), psi).expect("dim 6").norm_sqr())
}

/// Evaluate the conditions |⟨1_x,J_x|ψ⟩|² = 1/6 on a candidate.
pub fn step3_violation(candidate: &Candidate, tol: f64) -> Result<ViolationReport> {
    let nu = extract_phase_sequence(&candidate.h, &candidate.hperp, &x_basis(), 1e-10)?;
    let overlaps = x_overlaps(&candidate.state);
    let predicted = nu.angles.map(|v| (1.0 - v.cos()) / 6.0);
    let deviations = overlaps.map(|o| (o - 1.0 / 6.0).abs());
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(ViolationReport {
        id: candidate.id.clone(),
        overlaps,
        predicted,
        deviations,
        max_deviation,
        nu,
        verdict: if max_deviation > tol {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        },
    })
}

/// Smallest Step-3 deviation over the phase family e^{iφ}|H^⊥⟩ sampled at
/// `n_phi` points. A free phase shifts every ν_J equally, so the lattice
/// bound holds for the whole family.
pub fn step3_family_min_deviation(candidate: &Candidate, n_phi: usize) -> f64 {
    (0..n_phi.max(1))
        .map(|k| {
            let psi = candidate.with_phase(TAU * k as f64 / n_phi.max(1) as f64);
            x_overlaps(&psi)
                .iter()
                .map(|o| (o - 1.0 / 6.0).abs())
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Which conditions a candidate meets by construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Consistency {
    pub id: String,
    pub lambda: (f64, f64),
    /// |λ₁ − λ₂|
    pub entanglement_gap: f64,
    /// Worst deviation of |⟨j_z,J_z|ψ⟩|² from 1/6.
    pub z_product: f64,
    /// Worst deviation of ⟨j_a|ρ_A|j_a⟩ from 1/2, a ∈ {z, x, y}.
    pub qubit_marginals: f64,
    /// Worst deviation of ⟨J_a|ρ_B|J_a⟩ from 1/3, a ∈ {z, x}.
    pub qutrit_marginals: f64,
    /// Worst deviation of |⟨j_x,J_x|ψ⟩|² from 1/6 for j = 0 and j = 1.
    /// Both equal (1/6)|cos ν_J| at their worst J.
    pub x_product: (f64, f64),
}

pub fn consistency(candidate: &Candidate) -> Result<Consistency> {
    let psi = &candidate.state;
    let s = schmidt(psi)?;
    let sixth = |v: &StateVector| (inner(v, psi).expect("dim 6").norm_sqr() - 1.0 / 6.0).abs();
    let qb = |l| mu_basis(BasisId::qubit(l));
    let qt = |l| mu_basis(BasisId::qutrit(l));
    let mut z_product: f64 = 0.0;
    for a in &qb(BasisLabel::Z).columns {
        for b in &qt(BasisLabel::Z).columns {
            z_product = z_product.max(sixth(&tensor(a, b)?));
        }
    }
    let mut x_product = (0.0f64, 0.0f64);
    for (j, a) in qb(BasisLabel::X).columns.iter().enumerate() {
        for b in &qt(BasisLabel::X).columns {
            let d = sixth(&tensor(a, b)?);
            if j == 0 {
                x_product.0 = x_product.0.max(d);
            } else {
                x_product.1 = x_product.1.max(d);
            }
        }
    }
    let rho_a = partial_trace(psi, Subsystem::A)?;
    let rho_b = partial_trace(psi, Subsystem::B)?;
    let mut qubit_marginals: f64 = 0.0;
    for l in [BasisLabel::Z, BasisLabel::X, BasisLabel::Y] {
        for c in &qb(l).columns {
            qubit_marginals = qubit_marginals.max((rho_a.expectation(c)? - 0.5).abs());
        }
    }
    let mut qutrit_marginals: f64 = 0.0;
    for l in [BasisLabel::Z, BasisLabel::X] {
        for c in &qt(l).columns {
            qutrit_marginals = qutrit_marginals.max((rho_b.expectation(c)? - 1.0 / 3.0).abs());
        }
    }
    Ok(Consistency {
        id: candidate.id.clone(),
        lambda: (s.lambda1, s.lambda2),
        entanglement_gap: (s.lambda1 - s.lambda2).abs(),
        z_product,
        qubit_marginals,
        qutrit_marginals,
        x_product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_distinct_ids() {
        let c = twelve_candidates();
        assert_eq!(c.len(), 12);
        let mut ids: Vec<_> = c.iter().map(|c| c.id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 12);
        assert_eq!(c[0].id, "y:0:HA");
        assert_eq!(c[11].id, "w:2:AH");
    }

    #[test]
    fn direct_overlaps_match_nu_formula() {
        for c in twelve_candidates() {
            let r = step3_violation(&c, 1e-10).unwrap();
            for j in 0..3 {
                assert!((r.overlaps[j] - r.predicted[j]).abs() < 1e-14);
            }
            assert_eq!(r.verdict, Verdict::Violated);
            assert!(r.max_deviation >= 3f64.sqrt() / 12.0 - 1e-12);
        }
    }

    #[test]
    fn both_x_halves_deviate_equally() {
        for c in twelve_candidates() {
            let k = consistency(&c).unwrap();
            assert!(k.z_product < 1e-14);
            assert!(k.qubit_marginals < 1e-14 && k.qutrit_marginals < 1e-14);
            assert!((k.x_product.0 - k.x_product.1).abs() < 1e-14);
        }
    }
}
