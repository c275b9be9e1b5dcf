use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::objective::{jacobian_row, project_tangent, Constraints};

#[derive(Debug, Clone)]
pub(crate) struct LocalOutcome {
    pub psi: Vec<Complex64>,
    pub value: f64,
    pub gradient_norm: f64,
    pub iterations: usize,
    pub termination: Termination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Projected gradient norm below tolerance, or an exact zero.
    Gradient,
    /// No trial step decreases the objective at working precision.
    Stalled,
    IterationCap,
}

fn to_reals(psi: &[Complex64]) -> Vec<f64> {
    psi.iter().flat_map(|z| [z.re, z.im]).collect()
}

fn normalize(x: &mut [f64]) {
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= n);
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect()
}

struct Linearization {
    value: f64,
    jtj: DMatrix<f64>,
    jtr: DVector<f64>,
}

fn linearize(x: &[f64], c: &Constraints, res: &mut Vec<(f64, Complex64)>) -> Linearization {
    let n = x.len();
    c.residuals(&to_complex(x), res);
    let mut jac = DMatrix::<f64>::zeros(res.len(), n);
    let mut row = vec![0.0; n];
    for (i, ((_, o), b)) in res.iter().zip(c.columns()).enumerate() {
        jacobian_row(*o, b, &mut row);
        project_tangent(&mut row, x);
        jac.row_mut(i).copy_from_slice(&row);
    }
    let r = DVector::from_iterator(res.len(), res.iter().map(|(r, _)| *r));
    Linearization {
        value: r.norm_squared(),
        jtr: jac.transpose() * &r,
        jtj: jac.transpose() * jac,
    }
}

fn value_at(x: &[f64], c: &Constraints, res: &mut Vec<(f64, Complex64)>) -> f64 {
    c.residuals(&to_complex(x), res);
    res.iter().map(|(r, _)| r * r).sum()
}

/// Levenberg–Marquardt on the unit sphere: each step solves the damped
/// normal equations in the tangent space and retracts by normalizing.
pub(crate) fn minimize(
    start: &[Complex64],
    c: &Constraints,
    max_iterations: usize,
    gradient_tol: f64,
) -> LocalOutcome {
    let mut x = to_reals(start);
    normalize(&mut x);
    let n = x.len();
    let mut res = Vec::with_capacity(c.len());
    let mut lambda = 1e-3;
    let mut lin = linearize(&x, c, &mut res);
    let mut iterations = 0;
    let mut termination = Termination::IterationCap;
    let mut gradient_norm = 2.0 * lin.jtr.norm();
    while iterations < max_iterations {
        if gradient_norm < gradient_tol || lin.value == 0.0 {
            termination = Termination::Gradient;
            break;
        }
        iterations += 1;
        let mut accepted = false;
        while lambda < 1e12 {
            let mut a = lin.jtj.clone();
            let scale = a.diagonal().max().max(1e-300);
            for k in 0..n {
                a[(k, k)] += lambda * scale;
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 4.0;
                continue;
            };
            let step = chol.solve(&(-&lin.jtr));
            let mut trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            normalize(&mut trial);
            let v = value_at(&trial, c, &mut res);
            if v < lin.value {
                let moved = x.iter().zip(&trial).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                x = trial;
                lambda = (lambda / 3.0).max(1e-12);
                accepted = moved > 0.0;
                break;
            }
            lambda *= 4.0;
        }
        lin = linearize(&x, c, &mut res);
        gradient_norm = 2.0 * lin.jtr.norm();
        if !accepted {
            termination = Termination::Stalled;
            break;
        }
    }
    if gradient_norm < gradient_tol || lin.value == 0.0 {
        termination = Termination::Gradient;
    }
    LocalOutcome {
        psi: to_complex(&x),
        value: lin.value,
        gradient_norm,
        iterations,
        termination,
    }
}
