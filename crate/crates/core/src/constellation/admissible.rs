use num_complex::Complex64;
use serde::Serialize;

use crate::constructions::ProductBasis;
use crate::error::{Error, Result};
use crate::linalg::{inner, tensor, StateVector};
use crate::theorem1::enumerate_flat_columns;
use crate::verify::{vector_mu_to_bases, Tolerance};

/// Bloch vector of a pure qubit state.
fn pure_bloch(v: &StateVector) -> [f64; 3] {
    let (a, b) = (v.amps()[0], v.amps()[1]);
    let c = a * b.conj();
    [2.0 * c.re, -2.0 * c.im, a.norm_sqr() - b.norm_sqr()]
}

/// Pure qubit state with Bloch vector n.
fn from_bloch(n: [f64; 3]) -> StateVector {
    let theta = n[2].clamp(-1.0, 1.0).acos();
    let phi = n[1].atan2(n[0]);
    StateVector::new(vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ])
    .expect("dim 2")
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = dot(a, a).sqrt();
    a.map(|x| x / n)
}

fn distinct_rays<'a>(vs: impl Iterator<Item = &'a StateVector>) -> Vec<StateVector> {
    let mut out: Vec<StateVector> = Vec::new();
    for v in vs {
        if !out.iter().any(|r| r.same_ray(v, 1e-9)) {
            out.push(v.clone());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QubitAdmissible {
    /// Dimension of the span of the factor Bloch vectors.
    pub rank: usize,
    pub states: Vec<StateVector>,
    /// Rank one leaves a circle of solutions; `states` then samples it.
    pub continuous: bool,
}

/// Qubit states unbiased to every state in `factors`: Bloch vectors
/// orthogonal to all factor Bloch vectors.
pub fn qubit_admissible(factors: &[StateVector], samples: usize) -> QubitAdmissible {
    let mut span: Vec<[f64; 3]> = Vec::new();
    for f in factors {
        let mut n = pure_bloch(f);
        for s in &span {
            let d = dot(n, *s);
            n = [n[0] - d * s[0], n[1] - d * s[1], n[2] - d * s[2]];
        }
        if dot(n, n).sqrt() > 1e-9 {
            span.push(unit(n));
        }
    }
    let rank = span.len();
    let states = match rank {
        0 | 3 => Vec::new(),
        2 => {
            let c = unit(cross(span[0], span[1]));
            vec![from_bloch(c), from_bloch(c.map(|x| -x))]
        }
        _ => {
            let a = span[0];
            let helper = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let u = unit(cross(a, helper));
            let w = cross(a, u);
            (0..samples)
                .map(|k| {
                    let t = std::f64::consts::TAU * k as f64 / samples as f64;
                    from_bloch([0, 1, 2].map(|i| t.cos() * u[i] + t.sin() * w[i]))
                })
                .collect()
        }
    };
    QubitAdmissible {
        rank,
        continuous: rank == 1,
        states,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleReport {
    pub pair: String,
    pub qubit: QubitAdmissible,
    pub qutrit: Vec<StateVector>,
    /// Qutrit torus minima that did not refine to a solution.
    pub qutrit_non_converged: usize,
    /// Products of the admissible factors.
    pub states: Vec<StateVector>,
    /// Whether each product also passes the dimension-six criterion.
    pub cross_check: bool,
    /// Size of the largest pairwise orthogonal subset of `states`.
    pub max_orthogonal: usize,
}

/// Product states MU to both bases of a pair, built factor by factor.
///
/// The qutrit factors must include the standard basis; flatness then
/// takes care of it and the torus enumeration runs against the rest.
pub fn admissible_product_states(pair: &[ProductBasis; 2], resolution: usize, tol: f64) -> Result<AdmissibleReport> {
    let columns = || pair.iter().flat_map(|b| b.columns.iter());
    let qubits = distinct_rays(columns().map(|c| &c.qubit));
    let qutrits = distinct_rays(columns().map(|c| &c.qutrit));
    let z: Vec<StateVector> = (0..3).map(|k| StateVector::basis(3, k).expect("dim 3")).collect();
    if !z.iter().all(|e| qutrits.iter().any(|r| r.same_ray(e, 1e-9))) {
        return Err(Error::Precondition(
            "qutrit factors of the pair do not contain the standard basis".into(),
        ));
    }
    let against: Vec<StateVector> = qutrits
        .into_iter()
        .filter(|r| !z.iter().any(|e| r.same_ray(e, 1e-9)))
        .collect();

    let qubit = qubit_admissible(&qubits, 8);
    let e = enumerate_flat_columns(&against, resolution, 1e-12)?;
    let (qutrit, qutrit_non_converged) = (e.solutions, e.non_converged.len());

    let mut states = Vec::new();
    for q in &qubit.states {
        for t in &qutrit {
            states.push(tensor(q, t)?);
        }
    }
    let bases = [pair[0].basis(), pair[1].basis()];
    let t = Tolerance::new(tol)?;
    let mut cross_check = true;
    for s in &states {
        cross_check &= vector_mu_to_bases(s, &bases, t)?.pass;
    }
    let max_orthogonal = max_orthogonal_set(&states, 1e-9);
    Ok(AdmissibleReport {
        pair: format!("{} / {}", pair[0].name, pair[1].name),
        qubit,
        qutrit,
        qutrit_non_converged,
        states,
        cross_check,
        max_orthogonal,
    })
}

/// Largest clique of the orthogonality graph, by branch and bound.
pub fn max_orthogonal_set(states: &[StateVector], tol: f64) -> usize {
    let n = states.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| i != j && inner(&states[i], &states[j]).map_or(false, |o| o.norm() < tol))
                .collect()
        })
        .collect();
    fn grow(adj: &[Vec<bool>], clique: &mut Vec<usize>, candidates: &[usize], best: &mut usize) {
        if clique.len() + candidates.len() <= *best {
            return;
        }
        if candidates.is_empty() {
            *best = clique.len();
            return;
        }
        for (k, &v) in candidates.iter().enumerate() {
            if clique.len() + candidates.len() - k <= *best {
                return;
            }
            let next: Vec<usize> = candidates[k + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
            clique.push(v);
            grow(adj, clique, &next, best);
            clique.pop();
        }
        *best = (*best).max(clique.len());
    }
    let mut best = 0;
    let all: Vec<usize> = (0..n).collect();
    grow(&adj, &mut Vec::new(), &all, &mut best);
    best
}
