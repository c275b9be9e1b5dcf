use num_complex::Complex64;
use serde::Serialize;

use super::scalar::Scalar;
use super::state::{check_dim, StateVector};
use crate::error::{Error, Result};

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Operator<S = Complex64> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Scalar> Operator<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        check_dim(dim)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        Ok(Self {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose k-th column is `columns[k]`.
    pub fn from_columns(columns: &[StateVector<S>]) -> Result<Self> {
        let dim = columns.len();
        check_dim(dim)?;
        let mut entries = vec![S::zero(); dim * dim];
        for (k, col) in columns.iter().enumerate() {
            if col.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.dim(),
                });
            }
            for (r, &a) in col.amps().iter().enumerate() {
                entries[r * dim + k] = a;
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let mut entries = vec![S::zero(); dim * dim];
        for k in 0..dim {
            entries[k * dim + k] = S::one();
        }
        Ok(Self { dim, entries })
    }

    pub fn diagonal(diag: Vec<S>) -> Result<Self> {
        let dim = diag.len();
        check_dim(dim)?;
        let mut entries = vec![S::zero(); dim * dim];
        for (k, d) in diag.into_iter().enumerate() {
            entries[k * dim + k] = d;
        }
        Ok(Self { dim, entries })
    }

    /// |u⟩⟨v|
    pub fn outer(u: &StateVector<S>, v: &StateVector<S>) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                found: v.dim(),
            });
        }
        let dim = u.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for a in u.amps() {
            for b in v.amps() {
                entries.push(*a * b.conj());
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> S {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn column(&self, k: usize) -> StateVector<S> {
        StateVector::new((0..self.dim).map(|r| self.get(r, k)).collect())
            .expect("dimension already validated")
    }

    pub fn columns(&self) -> Vec<StateVector<S>> {
        (0..self.dim).map(|k| self.column(k)).collect()
    }

    pub fn apply(&self, v: &StateVector<S>) -> Result<StateVector<S>> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        let amps = self
            .entries
            .chunks_exact(self.dim)
            .map(|row| {
                row.iter()
                    .zip(v.amps())
                    .fold(S::zero(), |acc, (&m, &x)| acc + m * x)
            })
            .collect();
        StateVector::new(amps)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![S::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).fold(S::zero(), |acc, k| {
                    acc + self.entries[r * n + k] * rhs.entries[k * n + c]
                });
            }
        }
        Ok(Self { dim: n, entries })
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![S::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.entries[r * n + c].conj();
            }
        }
        Self { dim: n, entries }
    }

    pub fn scaled(&self, factor: S) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&e| factor * e).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if rhs.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(&a, &b)| a + b)
                .collect(),
        })
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |acc, k| acc + self.get(k, k))
    }

    /// max‖(A − B)_{rc}‖ over entries.
    pub fn max_deviation(&self, rhs: &Self) -> f64 {
        if rhs.dim != self.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(&a, &b)| (a - b).magnitude())
            .fold(0.0, f64::max)
    }

    /// Deviation of A†A from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let id = Self::identity(self.dim).expect("dimension validated");
        self.adjoint()
            .matmul(self)
            .expect("same dimension")
            .max_deviation(&id)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_deviation(&self.adjoint())
    }

    pub fn to_float(&self) -> Operator<Complex64> {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(Scalar::to_c64).collect(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite 2×2 or 3×3 matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix(Operator<Complex64>);

impl DensityMatrix {
    pub fn new(op: Operator<Complex64>, tol: f64) -> Result<Self> {
        if !matches!(op.dim(), 2 | 3) {
            return Err(Error::UnsupportedDimension(op.dim()));
        }
        let herm = op.hermiticity_deviation();
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let tr = op.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::Precondition(format!("trace {tr} is not 1")));
        }
        let rho = Self(op);
        let min = rho
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min < -tol {
            return Err(Error::Precondition(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn new_unchecked(op: Operator<Complex64>) -> Self {
        Self(op)
    }

    pub fn operator(&self) -> &Operator<Complex64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0.get(r, c)
    }

    /// ⟨v|ρ|v⟩
    pub fn expectation(&self, v: &StateVector) -> Result<f64> {
        let rv = self.0.apply(v)?;
        Ok(super::state::inner(v, &rv)?.re)
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev = match self.dim() {
            2 => hermitian_eigenvalues_2(&self.0).to_vec(),
            3 => hermitian_eigenvalues_3(&self.0).to_vec(),
            _ => unreachable!("dimension validated"),
        };
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }
}

pub(crate) fn hermitian_eigenvalues_2(m: &Operator<Complex64>) -> [f64; 2] {
    let a = m.get(0, 0).re;
    let c = m.get(1, 1).re;
    let b = m.get(0, 1);
    let mean = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b.norm_sqr()).sqrt();
    [mean + r, mean - r]
}

/// Closed-form (trigonometric) eigenvalues of a 3×3 hermitian matrix.
pub(crate) fn hermitian_eigenvalues_3(m: &Operator<Complex64>) -> [f64; 3] {
    let a = |r, c| m.get(r, c);
    let p1 = a(0, 1).norm_sqr() + a(0, 2).norm_sqr() + a(1, 2).norm_sqr();
    let d = [a(0, 0).re, a(1, 1).re, a(2, 2).re];
    let q = (d[0] + d[1] + d[2]) / 3.0;
    if p1 == 0.0 {
        return d;
    }
    let p2 = (d[0] - q).powi(2) + (d[1] - q).powi(2) + (d[2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    if p == 0.0 {
        return [q; 3];
    }
    // B = (A − qI)/p, r = det(B)/2
    let b = |r: usize, c: usize| {
        let v = a(r, c);
        if r == c {
            Complex64::new((v.re - q) / p, 0.0)
        } else {
            v / p
        }
    };
    let det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1))
        - b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0))
        + b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
    let r = (det.re / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let two_pi_3 = 2.0 * std::f64::consts::PI / 3.0;
    let e1 = q + 2.0 * p * phi.cos();
    let e3 = q + 2.0 * p * (phi + two_pi_3).cos();
    let e2 = 3.0 * q - e1 - e3;
    [e1, e2, e3]
}
