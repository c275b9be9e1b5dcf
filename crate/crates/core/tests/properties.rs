mod common;

use std::f64::consts::{PI, TAU};

use common::*;
use mub_core::constellation::{
    coefficients, direct_residuals, explicit_residuals, s1_extension_is_product, RootCoordinates,
};
use mub_core::constructions::{
    constellation_554, mu_basis, pair_family, BasisId, BasisLabel, PairChoice, PairFamily, ParamSet, QutritChoice,
};
use mub_core::linalg::{inner, partial_trace, schmidt, tensor, Subsystem};
use mub_core::search::{canonicalize, objective, Constraints};
use mub_core::verify::{are_mu, product_mu_criterion, validate_product_set, vector_mu_to_bases, Tolerance};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn t(eps: f64) -> Tolerance {
    Tolerance::new(eps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inner_is_conjugate_symmetric(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 3, 6])) {
        let mut r = rng(seed);
        let (u, v) = (gaussian_state(&mut r, dim), gaussian_state(&mut r, dim));
        let a = inner(&u, &v).unwrap();
        let b = inner(&v, &u).unwrap();
        prop_assert!((a - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn schmidt_reconstructs_and_spectra_agree(seed in any::<u64>()) {
        let psi = gaussian_state(&mut rng(seed), 6);
        let s = schmidt(&psi).unwrap();
        prop_assert!(s.reconstruct().distance(&psi) < 1e-10);
        prop_assert!(s.lambda1 >= s.lambda2 && s.lambda2 >= 0.0);
        let mut ea = partial_trace(&psi, Subsystem::A).unwrap().eigenvalues();
        let mut eb = partial_trace(&psi, Subsystem::B).unwrap().eigenvalues();
        ea.sort_by(|x, y| y.total_cmp(x));
        eb.sort_by(|x, y| y.total_cmp(x));
        prop_assert!((ea[0] - s.lambda1.powi(2)).abs() < 1e-10);
        prop_assert!((ea[1] - s.lambda2.powi(2)).abs() < 1e-10);
        prop_assert!((eb[0] - ea[0]).abs() < 1e-10 && (eb[1] - ea[1]).abs() < 1e-10);
        prop_assert!(eb[2].abs() < 1e-10);
    }

    #[test]
    fn marginals_of_products_are_the_factors(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (gaussian_state(&mut r, 2), gaussian_state(&mut r, 3));
        let psi = tensor(&a, &b).unwrap();
        let ra = partial_trace(&psi, Subsystem::A).unwrap();
        let rb = partial_trace(&psi, Subsystem::B).unwrap();
        prop_assert!((ra.expectation(&a).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((rb.expectation(&b).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(schmidt(&psi).unwrap().is_product(1e-7));
    }

    #[test]
    fn objective_is_phase_invariant(seed in any::<u64>(), gamma in 0.0..TAU) {
        let psi = gaussian_state(&mut rng(seed), 6);
        let p0 = pair_family(PairFamily::P0, &ParamSet::default()).unwrap();
        let c = Constraints::from_product_bases(&p0).unwrap();
        let f = objective(&psi, &c).unwrap().value;
        let g = objective(&phased(&psi, gamma), &c).unwrap().value;
        prop_assert!((f - g).abs() < 1e-13);
        prop_assert!(canonicalize(&psi).distance(&canonicalize(&phased(&psi, gamma))) < 1e-9);
    }

    #[test]
    fn are_mu_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let b1 = mub_core::constructions::Basis::new(random_unitary(&mut r, 3), mub_core::constructions::Provenance::Custom("u".into())).unwrap();
        let b2 = mu_basis(BasisId::qutrit(BasisLabel::W));
        let x = are_mu(&b1, &b2, t(1e-10)).unwrap();
        let y = are_mu(&b2, &b1, t(1e-10)).unwrap();
        prop_assert_eq!(x.pass, y.pass);
        prop_assert!((x.worst_deviation - y.worst_deviation).abs() < 1e-14);
    }

    #[test]
    fn p1_pairs_are_valid(xi in 0.0..TAU, eta in 0.0..TAU) {
        let pair = pair_family(PairFamily::P1, &ParamSet { xi, eta, ..ParamSet::default() }).unwrap();
        prop_assert!(validate_product_set(&pair, t(1e-12)).unwrap().pass);
    }

    #[test]
    fn p3_pairs_are_valid(zeta in 0.0..TAU, chi in 0.0..TAU, sigma in 0.01..PI - 0.01, tau in 0.01..PI - 0.01) {
        let pair = pair_family(PairFamily::P3, &ParamSet { zeta, chi, sigma, tau, ..ParamSet::default() }).unwrap();
        prop_assert!(validate_product_set(&pair, t(1e-12)).unwrap().pass);
    }

    #[test]
    fn s1_product_verdict_ignores_phases(t0 in 0.0..PI / 2.0, s in 0.0..TAU, gamma in 0.0..TAU, delta in 0.0..TAU, k in 0usize..6) {
        let b = mub_core::constructions::yw_labels()[k];
        let c = constellation_554(PairChoice::P0, QutritChoice::S1 { a_basis: BasisLabel::Y, b }).unwrap();
        let (a, bb) = coefficients(t0, s);
        let x = s1_extension_is_product(&c, a, bb, 1e-10).unwrap();
        let y = s1_extension_is_product(&c, a * Complex64::from_polar(1.0, gamma), bb * Complex64::from_polar(1.0, delta), 1e-10).unwrap();
        prop_assert!(x && y);
    }

    #[test]
    fn residual_forms_agree(i in 0usize..6, j in 0usize..6, t0 in 0.0..PI / 2.0, s in 0.0..TAU) {
        prop_assume!(i != j);
        let labels = mub_core::constructions::yw_labels();
        let a = RootCoordinates::from_label(labels[i]).unwrap();
        let b = RootCoordinates::from_label(labels[j]).unwrap();
        let (al, be) = coefficients(t0, s);
        let x = explicit_residuals(a, b, al, be);
        let y = direct_residuals(a, b, al, be);
        for k in 0..3 {
            prop_assert!((x[k] - y[k]).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gradient_matches_finite_differences(seed in any::<u64>()) {
        let psi = gaussian_state(&mut rng(seed), 6);
        let t1 = mub_core::constructions::triple(mub_core::constructions::Triple::T1);
        let c = Constraints::from_product_bases(&t1).unwrap();
        prop_assert!(gradient_relative_error(&psi, &c) < 1e-6);
    }

    #[test]
    fn factorized_criterion_matches_direct(seed in any::<u64>(), constructed in any::<bool>()) {
        let (pb, phi, big_phi) = factorized_case(seed, constructed);
        let f = product_mu_criterion(&phi, &big_phi, &pb, t(1e-9)).unwrap();
        let d = vector_mu_to_bases(&tensor(&phi, &big_phi).unwrap(), &[pb.basis()], t(1e-9)).unwrap();
        prop_assert_eq!(f.pass, d.pass);
        prop_assert_eq!(f.pass, constructed);
    }
}
