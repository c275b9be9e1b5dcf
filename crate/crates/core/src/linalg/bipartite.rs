//! Bipartite structure of C⁶ = C² ⊗ C³: reduced states, Bloch vectors and
//! the Schmidt decomposition.

use num_complex::Complex64;
use serde::Serialize;

use super::operator::{DensityMatrix, Operator};
use super::state::{inner, tensor, StateVector};
use crate::error::{Error, Result};

/// Which subsystem a partial trace keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Subsystem {
    /// The qubit factor C².
    A,
    /// The qutrit factor C³.
    B,
}

fn require_dim(v: &StateVector, dim: usize) -> Result<()> {
    if v.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: v.dim(),
        });
    }
    Ok(())
}

/// Reduced density matrix of |ψ⟩⟨ψ| on the kept subsystem.
pub fn partial_trace(psi: &StateVector, keep: Subsystem) -> Result<DensityMatrix> {
    require_dim(psi, 6)?;
    let a = psi.amps();
    let rows = match keep {
        Subsystem::A => (0..2)
            .map(|j| {
                (0..2)
                    .map(|k| (0..3).map(|jj| a[3 * j + jj] * a[3 * k + jj].conj()).sum())
                    .collect()
            })
            .collect(),
        Subsystem::B => (0..3)
            .map(|jj| {
                (0..3)
                    .map(|kk| (0..2).map(|j| a[3 * j + jj] * a[3 * j + kk].conj()).sum())
                    .collect()
            })
            .collect(),
    };
    Ok(DensityMatrix::new_unchecked(Operator::from_rows(rows)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

/// n_a = tr(σ_a ρ) with σ_a = |0_a⟩⟨0_a| − |1_a⟩⟨1_a|.
pub fn bloch(rho: &DensityMatrix, tol: f64) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let herm = rho.operator().hermiticity_deviation();
    if herm > tol {
        return Err(Error::NotHermitian(herm));
    }
    let r01 = rho.get(0, 1);
    Ok(BlochVector {
        x: 2.0 * r01.re,
        y: -2.0 * r01.im,
        z: rho.get(0, 0).re - rho.get(1, 1).re,
    })
}

/// ψ = λ₁|c⟩⊗|C⟩ + λ₂|c^⊥⟩⊗|C^⊥⟩ with λ₁ ≥ λ₂ ≥ 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtDecomposition {
    pub lambda1: f64,
    pub lambda2: f64,
    /// |c⟩, |c^⊥⟩
    pub left: [StateVector; 2],
    /// |C⟩, |C^⊥⟩, |C^⊥⊥⟩
    pub right: [StateVector; 3],
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> StateVector {
        let t1 = tensor(&self.left[0], &self.right[0]).expect("dims fixed");
        let t2 = tensor(&self.left[1], &self.right[1]).expect("dims fixed");
        t1.combine(
            Complex64::new(self.lambda1, 0.0),
            &t2,
            Complex64::new(self.lambda2, 0.0),
        )
        .expect("same dim")
    }

    pub fn is_product(&self, tol: f64) -> bool {
        self.lambda2 < tol
    }

    pub fn is_maximally_entangled(&self, tol: f64) -> bool {
        (self.lambda1 - self.lambda2).abs() < tol
    }
}

/// Schmidt decomposition from the singular value decomposition of the 2×3
/// amplitude grid M_{jJ} = ψ_{3j+J}.
pub fn schmidt(psi: &StateVector) -> Result<SchmidtDecomposition> {
    require_dim(psi, 6)?;
    let m = psi.amps();
    // G = M M† = ρ_A
    let g00: f64 = m[..3].iter().map(|a| a.norm_sqr()).sum();
    let g11: f64 = m[3..].iter().map(|a| a.norm_sqr()).sum();
    let g01: Complex64 = (0..3).map(|k| m[k] * m[3 + k].conj()).sum();
    let mean = 0.5 * (g00 + g11);
    let r = (0.25 * (g00 - g11).powi(2) + g01.norm_sqr()).sqrt();
    let top = mean + r;

    let v = [g01, Complex64::new(top - g00, 0.0)];
    let w = [Complex64::new(top - g11, 0.0), g01.conj()];
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
    let u1 = if nv.max(nw) <= 1e-300 {
        [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]
    } else if nv >= nw {
        [v[0] / nv, v[1] / nv]
    } else {
        [w[0] / nw, w[1] / nw]
    };
    let u2 = [-u1[1].conj(), u1[0].conj()];

    // u†M: contract the qubit index.
    let project = |u: &[Complex64; 2]| -> Vec<Complex64> {
        (0..3)
            .map(|k| u[0].conj() * m[k] + u[1].conj() * m[3 + k])
            .collect()
    };
    let y1 = StateVector::new(project(&u1))?;
    let y2 = StateVector::new(project(&u2))?;
    let (lambda1, lambda2) = (y1.norm(), y2.norm());
    if lambda1 == 0.0 {
        return Err(Error::Precondition("zero vector has no Schmidt form".into()));
    }
    let c1 = y1.scaled(Complex64::new(1.0 / lambda1, 0.0));
    let c2 = if lambda2 > 1e-12 {
        let ov = inner(&c1, &y2)?;
        y2.combine(Complex64::new(1.0, 0.0), &c1, -ov)?.normalized()?
    } else {
        any_orthogonal(&c1)
    };
    let c3 = orthocomplement3(&c1, &c2, 1e-8)?;
    let left = [
        StateVector::new(u1.to_vec())?,
        StateVector::new(u2.to_vec())?,
    ];
    Ok(SchmidtDecomposition {
        lambda1,
        lambda2,
        left,
        right: [c1, c2, c3],
    })
}

/// Some unit vector in C³ orthogonal to the unit vector `u`.
fn any_orthogonal(u: &StateVector) -> StateVector {
    let k = (0..3)
        .min_by(|&a, &b| u.amps()[a].norm().total_cmp(&u.amps()[b].norm()))
        .expect("non-empty");
    let e = StateVector::basis(3, k).expect("valid");
    let ov = inner(u, &e).expect("same dim");
    e.combine(Complex64::new(1.0, 0.0), u, -ov)
        .expect("same dim")
        .normalized()
        .expect("e_k is not parallel to u")
}

/// Unit vector orthogonal to both inputs (the conjugated cross product),
/// phased so that its first non-negligible component is real positive.
pub fn orthocomplement3(d1: &StateVector, d2: &StateVector, tol: f64) -> Result<StateVector> {
    require_dim(d1, 3)?;
    require_dim(d2, 3)?;
    let (a, b) = (d1.amps(), d2.amps());
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let w = StateVector::new(cross.iter().map(|c| c.conj()).collect())?;
    let n = w.norm();
    if n <= tol * d1.norm().max(1e-300) * d2.norm().max(1e-300) || n == 0.0 {
        return Err(Error::LinearlyDependent);
    }
    let ov = inner(d1, d2)?.norm() / (d1.norm() * d2.norm());
    if ov > tol {
        return Err(Error::NotOrthogonal(ov));
    }
    let w = w.scaled(Complex64::new(1.0 / n, 0.0));
    let pivot = w
        .amps()
        .iter()
        .find(|z| z.norm() > 1e-9)
        .copied()
        .expect("unit vector has a nonzero entry");
    let mut out = w.scaled(pivot.conj() / pivot.norm());
    let k = out.amps().iter().position(|z| z.norm() > 1e-9).expect("nonzero");
    let re = out.amps()[k].norm();
    let mut amps = out.amps().to_vec();
    amps[k] = Complex64::new(re, 0.0);
    out = StateVector::new(amps)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn z(d: usize, k: usize) -> StateVector {
        StateVector::basis(d, k).unwrap()
    }

    #[test]
    fn partial_trace_of_product_state() {
        let psi = tensor(&z(2, 0), &z(3, 0)).unwrap();
        let rho = partial_trace(&psi, Subsystem::A).unwrap();
        assert_eq!(rho.get(0, 0), c(1.0, 0.0));
        assert_eq!(rho.get(1, 1), c(0.0, 0.0));
        assert_eq!(rho.get(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn bloch_vectors_of_pure_qubits() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero_x = StateVector::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        let zero_y = StateVector::new(vec![c(h, 0.0), c(0.0, h)]).unwrap();
        let cases = [(z(2, 0), [0.0, 0.0, 1.0]), (zero_x, [1.0, 0.0, 0.0]), (zero_y, [0.0, 1.0, 0.0])];
        for (v, expected) in cases {
            let rho = DensityMatrix::new(Operator::outer(&v, &v).unwrap(), 1e-12).unwrap();
            let n = bloch(&rho, 1e-12).unwrap();
            assert!((n.x - expected[0]).abs() < 1e-15);
            assert!((n.y - expected[1]).abs() < 1e-15);
            assert!((n.z - expected[2]).abs() < 1e-15);
        }
    }

    #[test]
    fn bloch_rejects_non_hermitian() {
        let m = Operator::from_rows(vec![vec![c(0.5, 0.0), c(0.4, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.0)]])
            .unwrap();
        let rho = DensityMatrix::new_unchecked(m);
        assert!(matches!(bloch(&rho, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn schmidt_of_product_state() {
        let psi = tensor(&z(2, 1), &z(3, 2)).unwrap();
        let s = schmidt(&psi).unwrap();
        assert!((s.lambda1 - 1.0).abs() < 1e-15);
        assert!(s.lambda2 < 1e-15);
        assert!(s.is_product(1e-10));
        assert!(s.reconstruct().phase_distance(&psi) < 1e-7);
    }

    #[test]
    fn orthocomplement_of_standard_pair() {
        let w = orthocomplement3(&z(3, 0), &z(3, 1), 1e-10).unwrap();
        assert_eq!(w, z(3, 2));
    }

    #[test]
    fn orthocomplement_errors() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let skew = StateVector::new(vec![c(h, 0.0), c(h, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(
            orthocomplement3(&z(3, 0), &skew, 1e-10),
            Err(Error::NotOrthogonal(_))
        ));
        assert_eq!(
            orthocomplement3(&z(3, 0), &z(3, 0).scaled(c(0.0, 1.0)), 1e-10),
            Err(Error::LinearlyDependent)
        );
    }
}
