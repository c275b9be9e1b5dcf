use num_complex::Complex64;
use serde::Serialize;

use crate::constructions::{Basis, ProductBasis};
use crate::error::{Error, Result};
use crate::linalg::StateVector;

/// The columns a vector must be unbiased to.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constraints {
    dim: usize,
    columns: Vec<StateVector>,
}

impl Constraints {
    pub fn new(columns: Vec<StateVector>) -> Result<Self> {
        let dim = columns
            .first()
            .map(StateVector::dim)
            .ok_or_else(|| Error::Precondition("no constraint columns".into()))?;
        if let Some(bad) = columns.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self { dim, columns })
    }

    pub fn from_bases(bases: &[Basis]) -> Result<Self> {
        Self::new(bases.iter().flat_map(|b| b.columns.iter().cloned()).collect())
    }

    pub fn from_product_bases(bases: &[ProductBasis]) -> Result<Self> {
        Self::new(
            bases
                .iter()
                .flat_map(|b| b.columns.iter().map(|c| c.state.clone()))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[StateVector] {
        &self.columns
    }

    /// r_i = |⟨b_i|ψ⟩|² − 1/d together with the overlaps ⟨b_i|ψ⟩.
    pub(crate) fn residuals(&self, psi: &[Complex64], out: &mut Vec<(f64, Complex64)>) {
        let target = 1.0 / self.dim as f64;
        out.clear();
        out.extend(self.columns.iter().map(|b| {
            let o: Complex64 = b.amps().iter().zip(psi).map(|(b, p)| b.conj() * p).sum();
            (o.norm_sqr() - target, o)
        }));
    }
}

/// Objective value and its gradient with respect to the 2d real coordinates
/// (Re ψ₀, Im ψ₀, Re ψ₁, …), projected onto the tangent space of the sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Objective {
    pub value: f64,
    pub gradient: Vec<f64>,
}

impl Objective {
    pub fn gradient_norm(&self) -> f64 {
        self.gradient.iter().map(|g| g * g).sum::<f64>().sqrt()
    }
}

/// Project a real 2d-vector onto the tangent space at the unit vector `x`.
pub(crate) fn project_tangent(g: &mut [f64], x: &[f64]) {
    let dot: f64 = g.iter().zip(x).map(|(a, b)| a * b).sum();
    g.iter_mut().zip(x).for_each(|(a, b)| *a -= dot * b);
}

/// Real Jacobian row of |⟨b|ψ⟩|²: the complex gradient is 2⟨b|ψ⟩ b.
pub(crate) fn jacobian_row(o: Complex64, b: &StateVector, row: &mut [f64]) {
    for (k, bk) in b.amps().iter().enumerate() {
        let g = 2.0 * o * bk;
        row[2 * k] = g.re;
        row[2 * k + 1] = g.im;
    }
}

/// F(ψ) = Σᵢ (|⟨bᵢ|ψ⟩|² − 1/d)².
pub fn objective(psi: &StateVector, constraints: &Constraints) -> Result<Objective> {
    if psi.dim() != constraints.dim {
        return Err(Error::DimensionMismatch {
            expected: constraints.dim,
            found: psi.dim(),
        });
    }
    let mut res = Vec::with_capacity(constraints.len());
    constraints.residuals(psi.amps(), &mut res);
    let n = 2 * psi.dim();
    let mut gradient = vec![0.0; n];
    let mut row = vec![0.0; n];
    for ((r, o), b) in res.iter().zip(&constraints.columns) {
        jacobian_row(*o, b, &mut row);
        gradient.iter_mut().zip(&row).for_each(|(g, j)| *g += 2.0 * r * j);
    }
    project_tangent(&mut gradient, &psi.to_reals());
    Ok(Objective {
        value: res.iter().map(|(r, _)| r * r).sum(),
        gradient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{triple, Triple};

    #[test]
    fn value_at_standard_vector() {
        let t0 = triple(Triple::T0);
        let c = Constraints::from_product_bases(&t0).unwrap();
        let psi = StateVector::basis(6, 0).unwrap();
        let f = objective(&psi, &c).unwrap();
        let z_block = (5.0f64 / 6.0).powi(2) + 5.0 * (1.0f64 / 6.0).powi(2);
        // every x and y overlap of e₀ already has modulus² 1/6
        assert!((f.value - z_block).abs() < 1e-14, "{}", f.value);
    }

    #[test]
    fn zero_at_flat_vector_against_standard_basis() {
        let c = Constraints::new((0..6).map(|k| StateVector::basis(6, k).unwrap()).collect()).unwrap();
        let h = 1.0 / 6f64.sqrt();
        let psi = StateVector::new(vec![Complex64::new(h, 0.0); 6]).unwrap();
        let f = objective(&psi, &c).unwrap();
        assert!(f.value < 1e-30);
        assert!(f.gradient_norm() < 1e-15);
    }

    #[test]
    fn rejects_mixed_dimensions() {
        let cols = vec![StateVector::basis(6, 0).unwrap(), StateVector::basis(3, 0).unwrap()];
        assert!(Constraints::new(cols).is_err());
    }
}
