use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{mu_basis, Basis, BasisId, BasisLabel, StateLabel};
use crate::error::{Error, Result};
use crate::linalg::{inner, StateVector};

/// Which of the two remaining basis states plays |H⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Order {
    /// |H⟩ is the lower-indexed remaining state.
    HA,
    /// Swapped.
    AH,
}

impl Order {
    pub fn token(self) -> &'static str {
        match self {
            Order::HA => "HA",
            Order::AH => "AH",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CandidateParams {
    pub theta: f64,
    pub phi: f64,
    /// The state of B_y ∪ B_w playing |H^⊥⊥⟩.
    pub base: StateLabel,
    pub order: Order,
}

impl CandidateParams {
    pub fn new(theta: f64, phi: f64, base: StateLabel, order: Order) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::ParamOutOfRange {
                name: "theta",
                value: theta,
                range: "[0, π]",
            });
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(Error::ParamOutOfRange {
                name: "phi",
                value: phi,
                range: "[0, 2π)",
            });
        }
        require_yw(base)?;
        Ok(Self {
            theta,
            phi,
            base,
            order,
        })
    }

    /// "y:2:HA"
    pub fn id(&self) -> String {
        candidate_id(self.base, self.order)
    }

    /// |D⟩ = cos(ϑ/2)|H⟩ + e^{iφ} sin(ϑ/2)|H^⊥⟩ and
    /// |D^⊥⟩ = sin(ϑ/2)|H⟩ − e^{iφ} cos(ϑ/2)|H^⊥⟩.
    pub fn d_pair(&self) -> (StateVector, StateVector) {
        let (h, hp) = h_pair(self.base, self.order);
        let (c, s) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let e = Complex64::from_polar(1.0, self.phi);
        let d = h.combine(Complex64::new(c, 0.0), &hp, e * s).expect("dim 3");
        let dp = h.combine(Complex64::new(s, 0.0), &hp, -e * c).expect("dim 3");
        (d, dp)
    }
}

pub(crate) fn require_yw(l: StateLabel) -> Result<()> {
    if l.basis.dim() == 3 && matches!(l.basis.label(), BasisLabel::Y | BasisLabel::W) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{l} is not a member of B_y or B_w")))
    }
}

pub fn candidate_id(base: StateLabel, order: Order) -> String {
    format!("{}:{}:{}", base.basis.label().as_char(), base.index, order.token())
}

/// The two members of the basis of `base` other than `base` itself, as
/// (|H⟩, |H^⊥⟩).
pub fn h_pair(base: StateLabel, order: Order) -> (StateVector, StateVector) {
    let rest: Vec<usize> = (0..3).filter(|&k| k != base.index).collect();
    let (p, q) = match order {
        Order::HA => (rest[0], rest[1]),
        Order::AH => (rest[1], rest[0]),
    };
    (base.basis.state(p).vector(), base.basis.state(q).vector())
}

/// Angles μ_J defined by ⟨H|J⟩⟨J|H^⊥⟩ = (1/3) e^{iμ_J} for the columns J of
/// a basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSequence {
    pub angles: [f64; 3],
    /// Fitted μ in angles ≈ μ + orientation·2πJ/3.
    pub offset: f64,
    /// +1 or −1: the direction in which the lattice is traversed. Swapping
    /// |H⟩ and |H^⊥⟩ flips it.
    pub orientation: i8,
    /// Largest angular distance from the fitted lattice.
    pub lattice_deviation: f64,
    /// |Σ_J e^{iμ_J}|
    pub phasor_sum: f64,
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn extract_phase_sequence(
    h: &StateVector,
    hperp: &StateVector,
    basis: &Basis,
    tol: f64,
) -> Result<PhaseSequence> {
    let ov = inner(h, hperp)?.norm();
    if ov > tol {
        return Err(Error::NotOrthogonal(ov));
    }
    if basis.dim() != 3 || h.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: if h.dim() != 3 { h.dim() } else { basis.dim() },
        });
    }
    let mut phasors = [Complex64::new(0.0, 0.0); 3];
    for (k, col) in basis.columns.iter().enumerate() {
        let a = inner(h, col)?;
        let b = inner(col, hperp)?;
        for m in [a.norm_sqr(), b.norm_sqr()] {
            if (m - 1.0 / 3.0).abs() > tol {
                return Err(Error::NotFlat((m - 1.0 / 3.0).abs()));
            }
        }
        phasors[k] = 3.0 * a * b;
    }
    let angles = phasors.map(|p| p.arg().rem_euclid(TAU));
    let fit = |s: f64| {
        let shifted: Complex64 = (0..3)
            .map(|j| Complex64::from_polar(1.0, angles[j] - s * TAU * j as f64 / 3.0))
            .sum();
        let offset = shifted.arg().rem_euclid(TAU);
        let dev = (0..3)
            .map(|j| angular_distance(angles[j], offset + s * TAU * j as f64 / 3.0))
            .fold(0.0, f64::max);
        (offset, dev)
    };
    let (plus, minus) = (fit(1.0), fit(-1.0));
    let (orientation, (offset, lattice_deviation)) = if plus.1 <= minus.1 {
        (1, plus)
    } else {
        (-1, minus)
    };
    Ok(PhaseSequence {
        angles,
        offset,
        orientation,
        lattice_deviation,
        phasor_sum: phasors.iter().sum::<Complex64>().norm() / 3.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityMap {
    pub base: StateLabel,
    pub order: Order,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// max_J | |⟨J_z|D⟩|² − 1/3 |, row-major in (ϑ, φ).
    #[serde(skip)]
    pub residual_d: Vec<f64>,
    /// The same for |D^⊥⟩.
    #[serde(skip)]
    pub residual_dperp: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSummary {
    pub id: String,
    pub grid: (usize, usize),
    /// Largest residual on the rows ϑ ∈ {0, π}.
    pub max_at_poles: f64,
    /// Smallest residual over rows with ϑ ∉ {0, π}, for |D⟩ and |D^⊥⟩.
    pub min_off_poles: (f64, f64),
    /// Grid points with ϑ ∉ {0, π} and residual below the threshold.
    pub near_zeros_off_poles: usize,
}

impl FeasibilityMap {
    pub fn at(&self, i: usize, k: usize) -> (f64, f64) {
        let idx = i * self.phis.len() + k;
        (self.residual_d[idx], self.residual_dperp[idx])
    }

    fn is_pole(&self, i: usize) -> bool {
        i == 0 || i + 1 == self.thetas.len()
    }

    pub fn summary(&self, threshold: f64) -> ScanSummary {
        let (nt, np) = (self.thetas.len(), self.phis.len());
        let mut max_at_poles: f64 = 0.0;
        let mut min_off = (f64::INFINITY, f64::INFINITY);
        let mut near = 0;
        for i in 0..nt {
            for k in 0..np {
                let (d, dp) = self.at(i, k);
                if self.is_pole(i) {
                    max_at_poles = max_at_poles.max(d).max(dp);
                } else {
                    min_off = (min_off.0.min(d), min_off.1.min(dp));
                    if d.min(dp) < threshold {
                        near += 1;
                    }
                }
            }
        }
        ScanSummary {
            id: candidate_id(self.base, self.order),
            grid: (nt, np),
            max_at_poles,
            min_off_poles: min_off,
            near_zeros_off_poles: near,
        }
    }
}

fn z_residual(v: &StateVector) -> f64 {
    v.amps()
        .iter()
        .map(|a| (a.norm_sqr() - 1.0 / 3.0).abs())
        .fold(0.0, f64::max)
}

/// Residual surface of the B_z conditions on |D⟩ and |D^⊥⟩ over a grid of
/// `n_theta` points in [0, π] (both ends included) and `n_phi` points in
/// [0, 2π).
pub fn scan_theta_phi(base: StateLabel, order: Order, n_theta: usize, n_phi: usize) -> Result<FeasibilityMap> {
    require_yw(base)?;
    if n_theta < 3 || n_phi < 1 {
        return Err(Error::ResolutionTooLow {
            found: n_theta.min(n_phi),
            min: 3,
        });
    }
    let thetas: Vec<f64> = (0..n_theta)
        .map(|i| PI * i as f64 / (n_theta - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..n_phi).map(|k| TAU * k as f64 / n_phi as f64).collect();
    let rows: Vec<Vec<(f64, f64)>> = thetas
        .par_iter()
        .map(|&theta| {
            phis.iter()
                .map(|&phi| {
                    let p = CandidateParams {
                        theta,
                        phi,
                        base,
                        order,
                    };
                    let (d, dp) = p.d_pair();
                    (z_residual(&d), z_residual(&dp))
                })
                .collect()
        })
        .collect();
    let flat: Vec<(f64, f64)> = rows.into_iter().flatten().collect();
    Ok(FeasibilityMap {
        base,
        order,
        thetas,
        phis,
        residual_d: flat.iter().map(|r| r.0).collect(),
        residual_dperp: flat.iter().map(|r| r.1).collect(),
    })
}

pub fn z_basis() -> Basis {
    mu_basis(BasisId::qutrit(BasisLabel::Z))
}

pub fn x_basis() -> Basis {
    mu_basis(BasisId::qutrit(BasisLabel::X))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(l: BasisLabel, k: usize) -> StateLabel {
        BasisId::qutrit(l).state(k)
    }

    #[test]
    fn y_pair_lattice_against_z() {
        let (h, hp) = (label(BasisLabel::Y, 0).vector(), label(BasisLabel::Y, 1).vector());
        let p = extract_phase_sequence(&h, &hp, &z_basis(), 1e-10).unwrap();
        assert!(p.lattice_deviation < 1e-10);
        assert!(p.phasor_sum < 1e-12);
    }

    #[test]
    fn swapping_flips_orientation() {
        let (a, b) = (label(BasisLabel::W, 0).vector(), label(BasisLabel::W, 2).vector());
        let p = extract_phase_sequence(&a, &b, &x_basis(), 1e-10).unwrap();
        let q = extract_phase_sequence(&b, &a, &x_basis(), 1e-10).unwrap();
        assert!(p.lattice_deviation < 1e-10 && q.lattice_deviation < 1e-10);
        assert_eq!(p.orientation, -q.orientation);
    }

    #[test]
    fn rejects_non_flat_or_non_orthogonal() {
        let e0 = StateVector::basis(3, 0).unwrap();
        let e1 = StateVector::basis(3, 1).unwrap();
        assert!(matches!(
            extract_phase_sequence(&e0, &e1, &z_basis(), 1e-10),
            Err(Error::NotFlat(_))
        ));
        let y0 = label(BasisLabel::Y, 0).vector();
        assert!(matches!(
            extract_phase_sequence(&y0, &y0, &z_basis(), 1e-10),
            Err(Error::NotOrthogonal(_))
        ));
    }

    #[test]
    fn scan_matches_closed_form() {
        // |⟨J_z|D⟩|² − 1/3 = (1/3) sin ϑ cos(φ + μ_J)
        let base = label(BasisLabel::Y, 2);
        let (h, hp) = h_pair(base, Order::HA);
        let mu = extract_phase_sequence(&h, &hp, &z_basis(), 1e-10).unwrap();
        let map = scan_theta_phi(base, Order::HA, 13, 24).unwrap();
        for (i, &t) in map.thetas.iter().enumerate() {
            for (k, &f) in map.phis.iter().enumerate() {
                let expected = mu
                    .angles
                    .iter()
                    .map(|m| (t.sin() * (f + m).cos() / 3.0).abs())
                    .fold(0.0, f64::max);
                assert!((map.at(i, k).0 - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn poles_are_feasible_and_equator_is_not() {
        let map = scan_theta_phi(label(BasisLabel::W, 1), Order::AH, 5, 360).unwrap();
        let s = map.summary(1e-6);
        assert!(s.max_at_poles < 1e-15);
        assert_eq!(s.near_zeros_off_poles, 0);
        // at ϑ = π/2 the residual is at least √3/6
        let eq = (0..360).map(|k| map.at(2, k).0).fold(f64::INFINITY, f64::min);
        assert!(eq >= 3f64.sqrt() / 6.0 - 1e-12, "{eq}");
    }

    #[test]
    fn params_are_range_checked() {
        let base = label(BasisLabel::Y, 0);
        assert!(CandidateParams::new(4.0, 0.0, base, Order::HA).is_err());
        assert!(CandidateParams::new(1.0, TAU, base, Order::HA).is_err());
        assert!(CandidateParams::new(1.0, 0.0, label(BasisLabel::X, 0), Order::HA).is_err());
        assert_eq!(CandidateParams::new(0.0, 0.0, label(BasisLabel::Y, 2), Order::HA).unwrap().id(), "y:2:HA");
    }
}
