use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{mu_basis, yw_labels, Basis, BasisId, BasisLabel, StateLabel};
use crate::error::{Error, Result};
use crate::linalg::StateVector;
use crate::search::{cluster, canonicalize};

pub const MIN_RESOLUTION: usize = 36;

/// Flat vector (1, e^{ia}, e^{ib})/√3.
pub fn flat_vector(a: f64, b: f64) -> StateVector {
    let s = 1.0 / 3f64.sqrt();
    StateVector::new(vec![
        Complex64::new(s, 0.0),
        Complex64::from_polar(s, a),
        Complex64::from_polar(s, b),
    ])
    .expect("dim 3")
}

struct TorusObjective {
    /// Conjugated components of every constraint column.
    rows: Vec<[Complex64; 3]>,
}

impl TorusObjective {
    fn new(columns: &[StateVector]) -> Self {
        let rows = columns
            .iter()
            .map(|c| [c.amps()[0].conj(), c.amps()[1].conj(), c.amps()[2].conj()])
            .collect();
        Self { rows }
    }

    fn phases(a: f64, b: f64) -> [Complex64; 3] {
        let s = 1.0 / 3f64.sqrt();
        [
            Complex64::new(s, 0.0),
            Complex64::from_polar(s, a),
            Complex64::from_polar(s, b),
        ]
    }

    fn value(&self, a: f64, b: f64) -> f64 {
        let v = Self::phases(a, b);
        self.rows
            .iter()
            .map(|r| {
                let o = r[0] * v[0] + r[1] * v[1] + r[2] * v[2];
                (o.norm_sqr() - 1.0 / 3.0).powi(2)
            })
            .sum()
    }

    /// Residuals and their (∂/∂a, ∂/∂b) derivatives.
    fn linearize(&self, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        let v = Self::phases(a, b);
        let i = Complex64::i();
        self.rows
            .iter()
            .map(|r| {
                let o = r[0] * v[0] + r[1] * v[1] + r[2] * v[2];
                let da = r[1] * i * v[1];
                let db = r[2] * i * v[2];
                (
                    o.norm_sqr() - 1.0 / 3.0,
                    2.0 * (o.conj() * da).re,
                    2.0 * (o.conj() * db).re,
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonConverged {
    pub a: f64,
    pub b: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C3Enumeration {
    pub resolution: usize,
    pub grid_minima: usize,
    /// Canonical distinct solutions.
    pub solutions: Vec<StateVector>,
    /// Largest single-condition deviation among the refined solutions.
    pub max_deviation: f64,
    /// Grid minima whose refinement did not reach a solution.
    pub non_converged: Vec<NonConverged>,
}

impl C3Enumeration {
    /// For each solution, the member of B_y ∪ B_w it coincides with.
    pub fn matches(&self, tol: f64) -> Vec<Option<StateLabel>> {
        self.solutions
            .iter()
            .map(|s| yw_labels().into_iter().find(|l| l.vector().same_ray(s, tol)))
            .collect()
    }

    /// Whether the solutions are exactly the six states of B_y ∪ B_w.
    pub fn matches_yw(&self, tol: f64) -> bool {
        let m = self.matches(tol);
        m.len() == 6
            && yw_labels()
                .iter()
                .all(|l| m.iter().filter(|x| **x == Some(*l)).count() == 1)
    }
}

/// Damped Gauss–Newton in the two phases.
fn refine(f: &TorusObjective, mut a: f64, mut b: f64, tol: f64) -> (f64, f64, f64) {
    let mut lambda = 1e-6;
    let mut value = f.value(a, b);
    for _ in 0..200 {
        let lin = f.linearize(a, b);
        if lin.iter().all(|(r, _, _)| r.abs() <= tol) {
            break;
        }
        let (mut h00, mut h01, mut h11, mut g0, mut g1) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (r, ja, jb) in &lin {
            h00 += ja * ja;
            h01 += ja * jb;
            h11 += jb * jb;
            g0 += ja * r;
            g1 += jb * r;
        }
        let mut moved = false;
        while lambda < 1e12 {
            let (d00, d11) = (h00 * (1.0 + lambda) + 1e-300, h11 * (1.0 + lambda) + 1e-300);
            let det = d00 * d11 - h01 * h01;
            let da = -(d11 * g0 - h01 * g1) / det;
            let db = -(d00 * g1 - h01 * g0) / det;
            let next = f.value(a + da, b + db);
            if next < value {
                a += da;
                b += db;
                value = next;
                lambda = (lambda / 4.0).max(1e-15);
                moved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !moved {
            break;
        }
    }
    let worst = f
        .linearize(a, b)
        .iter()
        .map(|(r, _, _)| r.abs())
        .fold(0.0, f64::max);
    (a.rem_euclid(TAU), b.rem_euclid(TAU), worst)
}

/// Flat vectors of C³ unbiased to every basis in `against`.
///
/// Flatness already makes them unbiased to B_z, leaving the two relative
/// phases. The torus is scanned on a grid, every grid local minimum is
/// refined, and converged points are clustered up to global phase.
pub fn enumerate_flat_c3(against: &[Basis], resolution: usize, refine_tol: f64) -> Result<C3Enumeration> {
    let columns: Vec<StateVector> = against.iter().flat_map(|b| b.columns.iter().cloned()).collect();
    enumerate_flat_columns(&columns, resolution, refine_tol)
}

/// As [`enumerate_flat_c3`], against an arbitrary list of unit vectors.
pub fn enumerate_flat_columns(against: &[StateVector], resolution: usize, refine_tol: f64) -> Result<C3Enumeration> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::ResolutionTooLow {
            found: resolution,
            min: MIN_RESOLUTION,
        });
    }
    if let Some(b) = against.iter().find(|b| b.dim() != 3) {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: b.dim(),
        });
    }
    let f = TorusObjective::new(against);
    let n = resolution;
    let step = TAU / n as f64;
    let grid: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| f.value((k / n) as f64 * step, (k % n) as f64 * step))
        .collect();
    let at = |i: usize, j: usize| grid[(i % n) * n + (j % n)];
    let minima: Vec<(usize, usize)> = (0..n * n)
        .filter(|&k| {
            let (i, j) = (k / n, k % n);
            let v = grid[k];
            (0..3).all(|di| {
                (0..3).all(|dj| {
                    if di == 1 && dj == 1 {
                        return true;
                    }
                    let (ii, jj) = ((i + n + di - 1) % n, (j + n + dj - 1) % n);
                    let w = at(ii, jj);
                    // ties go to the lowest linear index
                    if ii * n + jj < k {
                        v < w
                    } else {
                        v <= w
                    }
                })
            })
        })
        .map(|k| (k / n, k % n))
        .collect();

    let refined: Vec<(f64, f64, f64)> = minima
        .par_iter()
        .map(|&(i, j)| refine(&f, i as f64 * step, j as f64 * step, refine_tol))
        .collect();
    let mut converged = Vec::new();
    let mut non_converged = Vec::new();
    for (a, b, worst) in refined {
        if worst <= refine_tol {
            converged.push((canonicalize(&flat_vector(a, b)), worst));
        } else {
            non_converged.push(NonConverged { a, b, residual: worst });
        }
    }
    let clusters = cluster(&converged, 1e-6);
    let solutions: Vec<StateVector> = clusters
        .iter()
        .map(|c| converged[c.representative].0.clone())
        .collect();
    let max_deviation = clusters
        .iter()
        .map(|c| converged[c.representative].1)
        .fold(0.0, f64::max);
    Ok(C3Enumeration {
        resolution,
        grid_minima: minima.len(),
        solutions,
        max_deviation,
        non_converged,
    })
}

/// The vectors of C³ unbiased to both B_z and B_x.
pub fn enumerate_c3_mu_to_zx(resolution: usize, refine_tol: f64) -> Result<C3Enumeration> {
    enumerate_flat_c3(&[mu_basis(BasisId::qutrit(BasisLabel::X))], resolution, refine_tol)
}
