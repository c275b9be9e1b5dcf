//! Orthonormality and unbiasedness predicates.
//!
//! Every check reports the worst deviation over its conditions, where a
//! condition's deviation is `|⟨a|b⟩ − δ|` for orthonormality and
//! `| |⟨a|b⟩|² − 1/d |` for unbiasedness. In exact mode deviations of
//! conditions that hold are exactly zero.

use serde::Serialize;

use crate::constructions::{Basis, Constellation554, ProductBasis};
use crate::error::{Error, Result};
use crate::linalg::{inner, Mode, Scalar, StateVector};
use crate::DEFAULT_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon.is_finite() {
            Ok(Self(epsilon))
        } else {
            Err(Error::Precondition(format!(
                "tolerance must be positive, got {epsilon}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(DEFAULT_TOL)
    }
}

/// (basis index, column index)
pub type Location = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Offender {
    pub first: Location,
    pub second: Option<Location>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuReport {
    pub pass: bool,
    pub worst_deviation: f64,
    pub offender: Option<Offender>,
    pub mode: Mode,
    pub conditions: usize,
}

struct Worst {
    deviation: f64,
    offender: Option<Offender>,
    conditions: usize,
}

impl Worst {
    fn new() -> Self {
        Self {
            deviation: 0.0,
            offender: None,
            conditions: 0,
        }
    }

    fn record(&mut self, deviation: f64, offender: Offender) {
        self.conditions += 1;
        if deviation > self.deviation || (self.offender.is_none() && deviation > 0.0) {
            self.deviation = deviation;
            self.offender = Some(offender);
        }
    }

    fn report<S: Scalar>(self, tol: Tolerance) -> MuReport {
        MuReport {
            pass: self.deviation <= tol.value(),
            worst_deviation: self.deviation,
            offender: if self.deviation > 0.0 { self.offender } else { None },
            mode: S::MODE,
            conditions: self.conditions,
        }
    }
}

impl MuReport {
    /// Fold several reports into one; offenders keep their own numbering.
    pub fn merge(reports: &[MuReport]) -> MuReport {
        let worst = reports
            .iter()
            .max_by(|a, b| a.worst_deviation.total_cmp(&b.worst_deviation));
        MuReport {
            pass: reports.iter().all(|r| r.pass),
            worst_deviation: worst.map_or(0.0, |r| r.worst_deviation),
            offender: worst.and_then(|r| r.offender),
            mode: worst.map_or(Mode::Float, |r| r.mode),
            conditions: reports.iter().map(|r| r.conditions).sum(),
        }
    }
}

fn unbiased_deviation<S: Scalar>(overlap: S, dim: usize) -> f64 {
    (overlap.norm_sqr() - S::from_ratio(1, dim as i64)).magnitude()
}

fn require_same_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch {
            expected: a,
            found: b,
        });
    }
    Ok(())
}

/// ⟨c_i|c_j⟩ = δ_ij for all column pairs (i ≤ j).
pub fn is_orthonormal<S: Scalar>(b: &Basis<S>, tol: Tolerance) -> MuReport {
    let mut worst = Worst::new();
    for (i, ci) in b.columns.iter().enumerate() {
        for (j, cj) in b.columns.iter().enumerate().skip(i) {
            let ov = inner(ci, cj).map_or(f64::INFINITY, |ov| {
                let target = if i == j { S::one() } else { S::zero() };
                (ov - target).magnitude()
            });
            worst.record(
                ov,
                Offender {
                    first: (0, i),
                    second: Some((0, j)),
                },
            );
        }
    }
    worst.report::<S>(tol)
}

/// |⟨a_i|b_j⟩|² = 1/d for all i, j.
pub fn are_mu<S: Scalar>(b1: &Basis<S>, b2: &Basis<S>, tol: Tolerance) -> Result<MuReport> {
    require_same_dim(b1.dim(), b2.dim())?;
    let d = b1.dim();
    let mut worst = Worst::new();
    for (i, ci) in b1.columns.iter().enumerate() {
        for (j, cj) in b2.columns.iter().enumerate() {
            worst.record(
                unbiased_deviation(inner(ci, cj)?, d),
                Offender {
                    first: (0, i),
                    second: Some((1, j)),
                },
            );
        }
    }
    Ok(worst.report::<S>(tol))
}

/// |⟨b|ψ⟩|² = 1/d for every column b of every basis.
pub fn vector_mu_to_bases<S: Scalar>(
    psi: &StateVector<S>,
    bases: &[Basis<S>],
    tol: Tolerance,
) -> Result<MuReport> {
    let mut worst = Worst::new();
    for (k, b) in bases.iter().enumerate() {
        require_same_dim(psi.dim(), b.dim())?;
        for (c, col) in b.columns.iter().enumerate() {
            worst.record(
                unbiased_deviation(inner(col, psi)?, psi.dim()),
                Offender {
                    first: (k, c),
                    second: None,
                },
            );
        }
    }
    Ok(worst.report::<S>(tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub basis: usize,
    pub column: usize,
    pub overlap_sqr: f64,
    pub deviation: f64,
}

/// Every condition of [`vector_mu_to_bases`], for verbose dumps.
pub fn vector_conditions<S: Scalar>(psi: &StateVector<S>, bases: &[Basis<S>]) -> Result<Vec<Condition>> {
    let mut out = Vec::new();
    for (k, b) in bases.iter().enumerate() {
        require_same_dim(psi.dim(), b.dim())?;
        for (c, col) in b.columns.iter().enumerate() {
            let ov = inner(col, psi)?;
            out.push(Condition {
                basis: k,
                column: c,
                overlap_sqr: ov.norm_sqr().to_c64().re,
                deviation: unbiased_deviation(ov, psi.dim()),
            });
        }
    }
    Ok(out)
}

/// Factorized test for a product state |φ,Φ⟩ against a product basis:
/// |⟨ψ_i|φ⟩|² = 1/2 and |⟨Ψ_i|Φ⟩|² = 1/3 for every column i.
pub fn product_mu_criterion<S: Scalar>(
    qubit: &StateVector<S>,
    qutrit: &StateVector<S>,
    pb: &ProductBasis<S>,
    tol: Tolerance,
) -> Result<MuReport> {
    require_same_dim(2, qubit.dim())?;
    require_same_dim(3, qutrit.dim())?;
    let mut worst = Worst::new();
    for (i, col) in pb.columns.iter().enumerate() {
        worst.record(
            unbiased_deviation(inner(&col.qubit, qubit)?, 2),
            Offender {
                first: (0, i),
                second: None,
            },
        );
        worst.record(
            unbiased_deviation(inner(&col.qutrit, qutrit)?, 3),
            Offender {
                first: (1, i),
                second: None,
            },
        );
    }
    Ok(worst.report::<S>(tol))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetReport {
    pub pass: bool,
    pub orthonormality: Vec<MuReport>,
    /// (i, j, report) for i < j
    pub unbiasedness: Vec<(usize, usize, MuReport)>,
    pub worst_deviation: f64,
    pub mode: Mode,
}

impl SetReport {
    pub fn cross_conditions(&self) -> usize {
        self.unbiasedness.iter().map(|(_, _, r)| r.conditions).sum()
    }
}

/// Orthonormality of each basis plus pairwise unbiasedness.
pub fn validate_mu_set<S: Scalar>(bases: &[Basis<S>], tol: Tolerance) -> Result<SetReport> {
    let orthonormality: Vec<MuReport> = bases.iter().map(|b| is_orthonormal(b, tol)).collect();
    let mut unbiasedness = Vec::new();
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            unbiasedness.push((i, j, are_mu(&bases[i], &bases[j], tol)?));
        }
    }
    let worst_deviation = orthonormality
        .iter()
        .chain(unbiasedness.iter().map(|(_, _, r)| r))
        .map(|r| r.worst_deviation)
        .fold(0.0, f64::max);
    let pass = orthonormality.iter().all(|r| r.pass) && unbiasedness.iter().all(|(_, _, r)| r.pass);
    Ok(SetReport {
        pass,
        orthonormality,
        unbiasedness,
        worst_deviation,
        mode: S::MODE,
    })
}

pub fn validate_product_set<S: Scalar>(bases: &[ProductBasis<S>], tol: Tolerance) -> Result<SetReport> {
    let plain: Vec<Basis<S>> = bases.iter().map(ProductBasis::basis).collect();
    validate_mu_set(&plain, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstellationReport {
    pub pass: bool,
    pub orthogonality: MuReport,
    pub unbiasedness: MuReport,
}

/// Every listed state of the constellation against every other: orthogonal
/// within a basis or within S, unbiased across groups.
pub fn validate_constellation(c: &Constellation554, tol: Tolerance) -> Result<ConstellationReport> {
    let groups: Vec<Vec<StateVector>> = c
        .pair
        .iter()
        .map(|b| {
            b.columns
                .iter()
                .enumerate()
                .filter(|(k, _)| Some(*k) != b.implied)
                .map(|(_, col)| col.state.clone())
                .collect()
        })
        .chain(std::iter::once(c.extra.iter().map(|col| col.state.clone()).collect()))
        .collect();
    let mut orth = Worst::new();
    let mut mu = Worst::new();
    for (g, group) in groups.iter().enumerate() {
        for (i, u) in group.iter().enumerate() {
            for (j, v) in group.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                orth.record(
                    (inner(u, v)? - target).norm(),
                    Offender {
                        first: (g, i),
                        second: Some((g, j)),
                    },
                );
            }
        }
        for (h, other) in groups.iter().enumerate().skip(g + 1) {
            for (i, u) in group.iter().enumerate() {
                for (j, v) in other.iter().enumerate() {
                    mu.record(
                        unbiased_deviation(inner(u, v)?, 6),
                        Offender {
                            first: (g, i),
                            second: Some((h, j)),
                        },
                    );
                }
            }
        }
    }
    let orthogonality = orth.report::<num_complex::Complex64>(tol);
    let unbiasedness = mu.report::<num_complex::Complex64>(tol);
    Ok(ConstellationReport {
        pass: orthogonality.pass && unbiasedness.pass,
        orthogonality,
        unbiasedness,
    })
}
