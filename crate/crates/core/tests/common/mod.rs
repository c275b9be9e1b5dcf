#![allow(dead_code)]

use std::f64::consts::TAU;

use mub_core::constructions::{mu_basis, yw_labels, BasisId, BasisLabel, ProductBasis, ProductColumn};
use mub_core::search::{objective, Constraints};
use mub_core::linalg::{inner, StateVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn gaussian_state<R: Rng>(rng: &mut R, dim: usize) -> StateVector {
    let amps = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::new(amps).unwrap().normalized().unwrap()
}

/// Columns of a Haar-like random unitary by Gram-Schmidt.
pub fn random_unitary<R: Rng>(rng: &mut R, dim: usize) -> Vec<StateVector> {
    let mut cols: Vec<StateVector> = Vec::new();
    while cols.len() < dim {
        let mut v = gaussian_state(rng, dim);
        for c in &cols {
            let o = inner(c, &v).unwrap();
            v = v.combine(Complex64::new(1.0, 0.0), c, -o).unwrap();
        }
        if v.norm() > 1e-6 {
            cols.push(v.normalized().unwrap());
        }
    }
    cols
}

pub fn apply(u: &[StateVector], v: &StateVector) -> StateVector {
    let dim = u.len();
    let amps = (0..dim)
        .map(|r| (0..dim).map(|k| u[k].amps()[r] * v.amps()[k]).sum())
        .collect();
    StateVector::new(amps).unwrap()
}

pub fn phased(v: &StateVector, gamma: f64) -> StateVector {
    v.scaled(Complex64::from_polar(1.0, gamma))
}

/// {|u_j⟩⊗|V_J⟩ for j = 0} ∪ {|u_j⟩⊗|W_J⟩ for j = 1}.
pub fn product_basis(qubit: &[StateVector], first: &[StateVector], second: &[StateVector]) -> ProductBasis {
    let mut cols = Vec::new();
    for (j, q) in qubit.iter().enumerate() {
        let qt = if j == 0 { first } else { second };
        for t in qt {
            cols.push(ProductColumn::new(q.clone(), t.clone(), None, None).unwrap());
        }
    }
    ProductBasis::new("random", cols).unwrap()
}

pub fn flat(phases: &[f64]) -> StateVector {
    let s = 1.0 / (phases.len() as f64).sqrt();
    StateVector::new(phases.iter().map(|&p| Complex64::from_polar(s, p)).collect()).unwrap()
}

/// Central differences of F along the real coordinates, projected onto the
/// sphere tangent like the analytic gradient.
pub fn fd_gradient(psi: &StateVector, c: &Constraints) -> Vec<f64> {
    let x = psi.to_reals();
    let h = 1e-6;
    let f = |y: &[f64]| objective(&StateVector::from_reals(y).unwrap(), c).unwrap().value;
    let mut g: Vec<f64> = (0..x.len())
        .map(|k| {
            let (mut p, mut m) = (x.clone(), x.clone());
            p[k] += h;
            m[k] -= h;
            (f(&p) - f(&m)) / (2.0 * h)
        })
        .collect();
    let dot: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
    g.iter_mut().zip(&x).for_each(|(a, b)| *a -= dot * b);
    g
}

pub fn gradient_relative_error(psi: &StateVector, c: &Constraints) -> f64 {
    let a = objective(psi, c).unwrap().gradient;
    let n = fd_gradient(psi, c);
    let diff: f64 = a.iter().zip(&n).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    diff / scale
}

/// A random product basis with a product state; when `constructed` the
/// state is unbiased to the basis by design.
pub fn factorized_case(seed: u64, constructed: bool) -> (ProductBasis, StateVector, StateVector) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let u2 = random_unitary(&mut r, 2);
    let u3 = random_unitary(&mut r, 3);
    let p: [f64; 2] = [r.random_range(0.0..TAU), r.random_range(0.0..TAU)];
    let d = flat(&[0.0, p[0], p[1]]);
    let rot = |v: &StateVector| apply(&u3, &StateVector::new(v.amps().iter().zip(d.amps()).map(|(a, b)| a * b * 3f64.sqrt()).collect()).unwrap());
    let std3: Vec<StateVector> = (0..3).map(|k| apply(&u3, &StateVector::basis(3, k).unwrap())).collect();
    let fourier: Vec<StateVector> = mu_basis(BasisId::qutrit(BasisLabel::X)).columns.iter().map(rot).collect();
    let pb = product_basis(&u2, &std3, &fourier);
    if constructed {
        let theta: f64 = r.random_range(0.0..TAU);
        let phi = apply(&u2, &flat(&[0.0, theta]));
        let k: usize = r.random_range(0..6);
        let big_phi = rot(&yw_labels()[k].vector());
        (pb, phi, big_phi)
    } else {
        (pb, gaussian_state(&mut r, 2), gaussian_state(&mut r, 3))
    }
}
