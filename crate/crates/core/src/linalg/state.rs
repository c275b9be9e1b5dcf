use num_complex::Complex64;
use serde::Serialize;

use super::cyclotomic::Cyclotomic;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Relative slack used when picking the largest-modulus component for
/// phase canonicalization. Flat vectors have all moduli equal, so ties are
/// the common case and must resolve to the first index.
pub const PHASE_TIE_SLACK: f64 = 1e-6;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 3 | 6 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

/// Column vector of amplitudes in C², C³ or C⁶.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct StateVector<S = Complex64> {
    amps: Vec<S>,
}

pub type ExactState = StateVector<Cyclotomic>;

impl<S: Scalar> StateVector<S> {
    pub fn new(amps: Vec<S>) -> Result<Self> {
        check_dim(amps.len())?;
        Ok(Self { amps })
    }

    /// Standard basis vector e_k.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k,
            });
        }
        let mut amps = vec![S::zero(); dim];
        amps[k] = S::one();
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[S] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> S {
        self.amps
            .iter()
            .fold(S::zero(), |acc, a| acc + a.norm_sqr())
    }

    pub fn scaled(&self, factor: S) -> Self {
        Self {
            amps: self.amps.iter().map(|&a| factor * a).collect(),
        }
    }

    pub fn to_float(&self) -> StateVector<Complex64> {
        StateVector {
            amps: self.amps.iter().map(Scalar::to_c64).collect(),
        }
    }

    /// Linear combination `a·self + b·other`.
    pub fn combine(&self, a: S, other: &Self, b: S) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        })
    }
}

fn same_dim<S>(u: &StateVector<S>, v: &StateVector<S>) -> Result<()> {
    if u.amps.len() != v.amps.len() {
        return Err(Error::DimensionMismatch {
            expected: u.amps.len(),
            found: v.amps.len(),
        });
    }
    Ok(())
}

/// ⟨u|v⟩, conjugate-linear in the first argument.
pub fn inner<S: Scalar>(u: &StateVector<S>, v: &StateVector<S>) -> Result<S> {
    same_dim(u, v)?;
    Ok(inner_unchecked(u.amps(), v.amps()))
}

#[inline]
pub(crate) fn inner_unchecked<S: Scalar>(u: &[S], v: &[S]) -> S {
    u.iter()
        .zip(v)
        .fold(S::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

/// |a⟩⊗|B⟩ for a ∈ C², B ∈ C³; component 3·j + J holds a_j·B_J.
pub fn tensor<S: Scalar>(a: &StateVector<S>, b: &StateVector<S>) -> Result<StateVector<S>> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    if b.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: b.dim(),
        });
    }
    let amps = a
        .amps
        .iter()
        .flat_map(|&x| b.amps.iter().map(move |&y| x * y))
        .collect();
    Ok(StateVector { amps })
}

impl StateVector<Complex64> {
    pub fn from_reals(re_im: &[f64]) -> Result<Self> {
        if re_im.len() % 2 != 0 {
            return Err(Error::Precondition(
                "real parametrization needs an even number of entries".into(),
            ));
        }
        Self::new(
            re_im
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0], c[1]))
                .collect(),
        )
    }

    pub fn to_reals(&self) -> Vec<f64> {
        self.amps.iter().flat_map(|a| [a.re, a.im]).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Precondition("cannot normalize a zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn is_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    /// Fix the global phase: the first component whose modulus is within
    /// [`PHASE_TIE_SLACK`] of the largest is made real and positive.
    pub fn canonical_phase(&self) -> Self {
        let max = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return self.clone();
        }
        let pivot = self
            .amps
            .iter()
            .find(|a| a.norm() >= max * (1.0 - PHASE_TIE_SLACK))
            .copied()
            .expect("max is attained");
        let phase = pivot.conj() / pivot.norm();
        let mut out = self.scaled(phase);
        let k = self
            .amps
            .iter()
            .position(|a| a.norm() >= max * (1.0 - PHASE_TIE_SLACK))
            .expect("max is attained");
        out.amps[k] = Complex64::new(out.amps[k].norm(), 0.0);
        out
    }

    /// Euclidean distance between amplitude vectors.
    pub fn distance(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Distance after aligning global phases: min over γ of ‖u − e^{iγ}v‖.
    pub fn phase_distance(&self, other: &Self) -> f64 {
        let ov = inner_unchecked(&self.amps, &other.amps).norm();
        let d2 = self.norm_sqr().re + other.norm_sqr().re - 2.0 * ov;
        d2.max(0.0).sqrt()
    }

    /// Whether the two vectors agree up to a global phase within `tol`.
    pub fn same_ray(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim() && self.phase_distance(other) <= tol
    }
}

impl<'a, S> IntoIterator for &'a StateVector<S> {
    type Item = &'a S;
    type IntoIter = std::slice::Iter<'a, S>;
    fn into_iter(self) -> Self::IntoIter {
        self.amps.iter()
    }
}
