//! Extensions of the {5,5,4} product constellation.
//!
//! Over P₀ the four extra states take the form S₁ or S₂. Two further
//! orthogonal states complete a third basis. For S₁ they are product
//! states by construction; for S₂ an entangled candidate fails the
//! unbiasedness conditions on |0_z, J_z⟩ unless α or β vanishes.

mod admissible;
mod extension;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{
    constellation_554, pair_family, BasisId, BasisLabel, PairChoice, PairFamily, ParamSet, QutritChoice, StateLabel,
    Triple,
};
use crate::error::Result;
use crate::theorem1::{theorem1_pipeline, Theorem1Config};
use crate::verify::{validate_constellation, Tolerance};

pub use admissible::{admissible_product_states, max_orthogonal_set, qubit_admissible, AdmissibleReport, QubitAdmissible};
pub use extension::{
    coefficients, direct_residuals, explicit_residuals, s1_extension_is_product, s2_feasibility, yw_ordered_pairs,
    AnalyticStep, ExtensionState, FeasibilityReport, FeasibilityVerdict, RootCoordinates,
};

/// Random normalized (α, β).
pub fn random_coefficients(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    let mut g = || -> f64 { StandardNormal.sample(rng) };
    let a = Complex64::new(g(), g());
    let b = Complex64::new(g(), g());
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / n, b / n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Config {
    /// (t, s) grid for each S₂ pair.
    pub grid: (usize, usize),
    /// Lower bound on |αβ| defining the interior region.
    pub region: f64,
    pub tol: f64,
    /// Random (α, β) per S₁ instance.
    pub s1_samples: usize,
    /// Random (ξ, η) for the P₁ spot checks.
    pub p1_samples: usize,
    pub seed: u64,
    /// Torus resolution for the qutrit admissibility enumeration.
    pub resolution: usize,
    /// Run the unextendibility chain for the product triples as well.
    pub theorem1: Option<Theorem1Config>,
}

impl Default for Theorem2Config {
    fn default() -> Self {
        Self {
            grid: (360, 360),
            region: 0.05,
            tol: 1e-10,
            s1_samples: 100,
            p1_samples: 4,
            seed: 0,
            resolution: 180,
            theorem1: Some(Theorem1Config::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct S1Instance {
    pub a_basis: BasisLabel,
    pub b: StateLabel,
    pub constellation_valid: bool,
    pub samples: usize,
    pub all_product: bool,
    /// Largest overlap of any sampled extension with the states of S.
    pub max_overlap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct S2Instance {
    pub a: StateLabel,
    pub a_perp: StateLabel,
    pub b: StateLabel,
    pub b_perp: StateLabel,
    pub constellation_valid: bool,
    /// None when A^⊥⊥ = B^⊥⊥, which forces a product extension.
    pub feasibility: Option<FeasibilityReport>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct P1Sample {
    pub xi: f64,
    pub eta: f64,
    pub admissible: usize,
    pub max_orthogonal: usize,
    pub cross_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub p0_admissible: AdmissibleReport,
    pub p2_admissible: usize,
    pub p3_admissible: usize,
    pub p1_samples: Vec<P1Sample>,
    pub s1: Vec<S1Instance>,
    pub s2: Vec<S2Instance>,
    /// The 30 ordered pairs from B_y ∪ B_w.
    pub pairs: Vec<FeasibilityReport>,
    /// Smallest interior residual over all pairs.
    pub floor: f64,
    /// Verdicts of the triple pipelines, when run.
    pub triples: Vec<(Triple, String)>,
    pub verdict: String,
}

const EXTENDS_BY_PRODUCTS: &str = "extends only by product states";

fn s1_instances(config: &Theorem2Config, tol: Tolerance) -> Result<Vec<S1Instance>> {
    let mut cases = Vec::new();
    for a_basis in [BasisLabel::Y, BasisLabel::W] {
        for b in crate::constructions::yw_labels() {
            cases.push((a_basis, b));
        }
    }
    cases
        .par_iter()
        .enumerate()
        .map(|(k, &(a_basis, b))| {
            let c = constellation_554(PairChoice::P0, QutritChoice::S1 { a_basis, b })?;
            let constellation_valid = validate_constellation(&c, tol)?.pass;
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
            rng.set_stream(k as u64);
            let mut all_product = true;
            let mut max_overlap: f64 = 0.0;
            for _ in 0..config.s1_samples {
                let (alpha, beta) = random_coefficients(&mut rng);
                all_product &= s1_extension_is_product(&c, alpha, beta, config.tol)?;
                max_overlap = max_overlap.max(ExtensionState::s1(&c, alpha, beta)?.overlap_with_s(&c));
            }
            Ok(S1Instance {
                a_basis,
                b,
                constellation_valid,
                samples: config.s1_samples,
                all_product,
                max_overlap,
            })
        })
        .collect()
}

/// Every unordered pair {A, A^⊥} within B_y or B_w.
fn orthogonal_pairs() -> Vec<(StateLabel, StateLabel)> {
    let mut out = Vec::new();
    for l in [BasisLabel::Y, BasisLabel::W] {
        let b = BasisId::qutrit(l);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            out.push((b.state(i), b.state(j)));
        }
    }
    out
}

fn s2_instances(config: &Theorem2Config, tol: Tolerance) -> Result<Vec<S2Instance>> {
    let mut cases = Vec::new();
    for &(a, a_perp) in &orthogonal_pairs() {
        for &(b, b_perp) in &orthogonal_pairs() {
            cases.push((a, a_perp, b, b_perp));
        }
    }
    cases
        .into_iter()
        .map(|(a, a_perp, b, b_perp)| {
            let c = constellation_554(
                PairChoice::P0,
                QutritChoice::S2 {
                    a,
                    a_perp,
                    b,
                    b_perp,
                },
            )?;
            let constellation_valid = validate_constellation(&c, tol)?.pass;
            let (app, bpp) = (c.a_states[2], c.b_states[2]);
            let feasibility = if app == bpp {
                None
            } else {
                Some(s2_feasibility(
                    RootCoordinates::from_label(app)?,
                    RootCoordinates::from_label(bpp)?,
                    config.grid,
                    config.region,
                    1e-9,
                )?)
            };
            let product_only = feasibility
                .as_ref()
                .is_none_or(|f| f.verdict == FeasibilityVerdict::ProductOnly);
            Ok(S2Instance {
                a,
                a_perp,
                b,
                b_perp,
                constellation_valid,
                feasibility,
                verdict: if product_only { EXTENDS_BY_PRODUCTS } else { "entangled extension" }.to_string(),
            })
        })
        .collect()
}

fn p1_samples(config: &Theorem2Config) -> Result<Vec<P1Sample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(u64::MAX);
    let turn = Uniform::new(0.0, std::f64::consts::TAU).expect("valid range");
    (0..config.p1_samples)
        .map(|_| {
            let (xi, eta) = (turn.sample(&mut rng), turn.sample(&mut rng));
            let params = ParamSet {
                xi,
                eta,
                ..ParamSet::default()
            };
            let pair = pair_family(PairFamily::P1, &params)?;
            let r = admissible_product_states(&pair, config.resolution, config.tol)?;
            Ok(P1Sample {
                xi,
                eta,
                admissible: r.states.len(),
                max_orthogonal: r.max_orthogonal,
                cross_check: r.cross_check,
            })
        })
        .collect()
}

/// Gather the evidence that the {5,5,4} constellation over P₀ lies in no
/// complete set of seven MU bases.
///
/// Every extension of S₁ or S₂ is a product state, so any third basis
/// completing the constellation is a product basis and the three form a
/// product triple. Product triples admit no further unbiased vector.
pub fn theorem2_pipeline(config: &Theorem2Config) -> Result<Theorem2Report> {
    let tol = Tolerance::new(config.tol)?;
    let p0 = pair_family(PairFamily::P0, &ParamSet::default())?;
    let p0_admissible = admissible_product_states(&p0, config.resolution, config.tol)?;
    let p2 = pair_family(PairFamily::P2, &ParamSet::default())?;
    let p2_admissible = admissible_product_states(&p2, config.resolution, config.tol)?.states.len();
    let p3 = pair_family(PairFamily::P3, &ParamSet::default())?;
    let p3_admissible = admissible_product_states(&p3, config.resolution, config.tol)?.states.len();
    let p1_samples = p1_samples(config)?;

    let s1 = s1_instances(config, tol)?;
    let s2 = s2_instances(config, tol)?;
    let pairs = yw_ordered_pairs()
        .into_iter()
        .map(|(a, b)| {
            s2_feasibility(
                RootCoordinates::from_label(a)?,
                RootCoordinates::from_label(b)?,
                config.grid,
                config.region,
                1e-9,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let floor = pairs.iter().map(|p| p.interior_floor).fold(f64::INFINITY, f64::min);

    let mut triples = Vec::new();
    if let Some(t1) = &config.theorem1 {
        for which in [Triple::T0, Triple::T1] {
            triples.push((which, theorem1_pipeline(which, t1)?.verdict));
        }
    }

    let excluded = p0_admissible.states.len() == 12
        && p0_admissible.cross_check
        && p2_admissible == 0
        && p3_admissible == 0
        && s1
            .iter()
            .all(|s| s.constellation_valid && s.all_product && s.max_overlap < 1e-12)
        && s2
            .iter()
            .all(|s| s.constellation_valid && s.verdict == EXTENDS_BY_PRODUCTS)
        && pairs.iter().all(|p| p.verdict == FeasibilityVerdict::ProductOnly)
        && floor > 0.0
        && triples.iter().all(|(_, v)| v == "unextendible");
    Ok(Theorem2Report {
        p0_admissible,
        p2_admissible,
        p3_admissible,
        p1_samples,
        s1,
        s2,
        pairs,
        floor,
        triples,
        verdict: if excluded { "excluded" } else { "inconclusive" }.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pipeline_without_triples() {
        let config = Theorem2Config {
            grid: (91, 120),
            p1_samples: 1,
            resolution: 72,
            s1_samples: 10,
            theorem1: None,
            ..Theorem2Config::default()
        };
        let r = theorem2_pipeline(&config).unwrap();
        assert_eq!(r.verdict, "excluded");
        assert_eq!(r.s1.len(), 12);
        assert_eq!(r.s2.len(), 36);
        assert_eq!(r.s2.iter().filter(|s| s.feasibility.is_none()).count(), 6);
        assert_eq!(r.pairs.len(), 30);
        assert!(r.floor > 0.008, "{}", r.floor);
    }
}
