use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{BasisId, BasisLabel, Constellation554, Shape, StateLabel};
use crate::error::{Error, Result};
use crate::linalg::{inner, schmidt, tensor, StateVector};

/// A state orthogonal to the four states of S.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionState {
    pub shape: Shape,
    pub alpha: Complex64,
    pub beta: Complex64,
    /// Qubit factors multiplying α and β.
    pub qubits: [StateLabel; 2],
    /// Qutrit factors multiplying α and β.
    pub components: [StateLabel; 2],
    pub state: StateVector,
}

fn check_normalized(alpha: Complex64, beta: Complex64) -> Result<()> {
    let n = alpha.norm_sqr() + beta.norm_sqr();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::Precondition(format!("|α|² + |β|² = {n}, expected 1")));
    }
    Ok(())
}

impl ExtensionState {
    /// S₁: α|b, B^⊥⟩ + β|b, B^⊥⊥⟩.
    pub fn s1(c: &Constellation554, alpha: Complex64, beta: Complex64) -> Result<Self> {
        c.require_shape(Shape::S1)?;
        Self::build(c, alpha, beta, [c.qubit_b, c.qubit_b], [c.b_states[1], c.b_states[2]])
    }

    /// S₂: α|a, A^⊥⊥⟩ + β|b, B^⊥⊥⟩.
    pub fn s2(c: &Constellation554, alpha: Complex64, beta: Complex64) -> Result<Self> {
        c.require_shape(Shape::S2)?;
        Self::build(c, alpha, beta, [c.qubit_a, c.qubit_b], [c.a_states[2], c.b_states[2]])
    }

    fn build(
        c: &Constellation554,
        alpha: Complex64,
        beta: Complex64,
        qubits: [StateLabel; 2],
        components: [StateLabel; 2],
    ) -> Result<Self> {
        check_normalized(alpha, beta)?;
        let first = tensor(&qubits[0].vector(), &components[0].vector())?;
        let second = tensor(&qubits[1].vector(), &components[1].vector())?;
        let state = first.combine(alpha, &second, beta)?;
        Ok(Self {
            shape: c.shape,
            alpha,
            beta,
            qubits,
            components,
            state,
        })
    }

    /// Largest overlap modulus with the four states of S.
    pub fn overlap_with_s(&self, c: &Constellation554) -> f64 {
        c.extra
            .iter()
            .map(|col| inner(&col.state, &self.state).map_or(f64::INFINITY, |o| o.norm()))
            .fold(0.0, f64::max)
    }
}

/// Whether the S₁ extension with coefficients (α, β) factorizes.
pub fn s1_extension_is_product(c: &Constellation554, alpha: Complex64, beta: Complex64, tol: f64) -> Result<bool> {
    let e = ExtensionState::s1(c, alpha, beta)?;
    Ok(schmidt(&e.state)?.is_product(tol))
}

/// A flat qutrit vector (1, ω₁, ω₂)/√3 with third roots of unity ω_J,
/// stored by their exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RootCoordinates {
    pub exponents: [u8; 3],
}

impl RootCoordinates {
    pub fn new(exponents: [u8; 3]) -> Result<Self> {
        if exponents[0] != 0 || exponents.iter().any(|&e| e > 2) {
            return Err(Error::Precondition(format!(
                "root coordinates need ω₀ = 1 and exponents below 3, got {exponents:?}"
            )));
        }
        Ok(Self { exponents })
    }

    /// Read off the coordinates of a member of B_y or B_w.
    pub fn from_label(l: StateLabel) -> Result<Self> {
        if l.basis.dim() != 3 || !matches!(l.basis.label(), BasisLabel::Y | BasisLabel::W) {
            return Err(Error::Precondition(format!("{l} is not a member of B_y or B_w")));
        }
        let v = l.vector();
        let first = v.amps()[0];
        let mut exponents = [0u8; 3];
        for (k, a) in v.amps().iter().enumerate() {
            let ratio = a / first;
            let e = (ratio.arg().rem_euclid(TAU) / (TAU / 3.0)).round() as u8 % 3;
            exponents[k] = e;
        }
        Self::new(exponents)
    }

    pub fn root(&self, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.exponents[j] as f64 / 3.0)
    }

    pub fn vector(&self) -> StateVector {
        let s = 1.0 / 3f64.sqrt();
        StateVector::new((0..3).map(|j| self.root(j) * s).collect()).expect("dim 3")
    }
}

/// (1/3) Re(α β̄ ω_J ω̄′_J), which equals |⟨0_z,J_z|ψ₂⟩|² − 1/6.
pub fn explicit_residuals(a: RootCoordinates, b: RootCoordinates, alpha: Complex64, beta: Complex64) -> [f64; 3] {
    [0, 1, 2].map(|j| {
        let w = alpha * beta.conj() * a.root(j) * b.root(j).conj();
        (w + w.conj()).re / 6.0
    })
}

/// |⟨0_z,J_z|ψ₂⟩|² − 1/6 from the dimension-six state
/// ψ₂ = α|0_y, A^⊥⊥⟩ + β|1_y, B^⊥⊥⟩.
pub fn direct_residuals(a: RootCoordinates, b: RootCoordinates, alpha: Complex64, beta: Complex64) -> [f64; 3] {
    DirectForm::new(a, b).residuals(alpha, beta)
}

/// The two product vectors of ψ₂ and the |0_z, J_z⟩ columns.
struct DirectForm {
    first: StateVector,
    second: StateVector,
    columns: [StateVector; 3],
}

impl DirectForm {
    fn new(a: RootCoordinates, b: RootCoordinates) -> Self {
        let y = BasisId::qubit(BasisLabel::Y);
        Self {
            first: tensor(&y.state(0).vector(), &a.vector()).expect("dims"),
            second: tensor(&y.state(1).vector(), &b.vector()).expect("dims"),
            columns: [0, 1, 2].map(|j| StateVector::basis(6, j).expect("dim 6")),
        }
    }

    fn residuals(&self, alpha: Complex64, beta: Complex64) -> [f64; 3] {
        let psi = self.first.combine(alpha, &self.second, beta).expect("dim 6");
        [0, 1, 2].map(|j| inner(&self.columns[j], &psi).expect("dim 6").norm_sqr() - 1.0 / 6.0)
    }
}

/// The J = 0 condition α β̄ + ᾱ β = 0 fixes s = ±π/2 in β = e^{is} sin t;
/// the J = 1, 2 conditions then need Im(ω_J ω̄′_J) = 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticStep {
    pub s_values: [f64; 2],
    pub imaginary_parts: [f64; 2],
    /// True when some J ∈ {1, 2} has Im(ω_J ω̄′_J) ≠ 0.
    pub blocked: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeasibilityVerdict {
    ProductOnly,
    EntangledFeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub a: RootCoordinates,
    pub b: RootCoordinates,
    pub analytic: AnalyticStep,
    /// (t, s) grid with α = cos t, β = e^{is} sin t, t ∈ [0, π/2].
    pub grid: (usize, usize),
    /// Smallest max_J |r_J| over grid points with |αβ| ≥ `region`.
    pub interior_floor: f64,
    pub region: f64,
    /// Grid points with max_J |r_J| below the tolerance, and how many of
    /// them have αβ ≠ 0.
    pub feasible_points: usize,
    pub feasible_off_axes: usize,
    /// Largest residual on the α = 0 and β = 0 boundaries.
    pub boundary_residual: f64,
    /// Largest disagreement between the explicit and direct residuals.
    pub cross_check: f64,
    pub verdict: FeasibilityVerdict,
}

/// Solve the S₂ unbiasedness conditions on ψ₂ = α|0_y,A^⊥⊥⟩ + β|1_y,B^⊥⊥⟩.
pub fn s2_feasibility(
    a: RootCoordinates,
    b: RootCoordinates,
    grid: (usize, usize),
    region: f64,
    tol: f64,
) -> Result<FeasibilityReport> {
    if a == b {
        return Err(Error::Precondition(
            "A^⊥⊥ = B^⊥⊥ makes ψ₂ a product state".into(),
        ));
    }
    let (nt, ns) = grid;
    if nt < 3 || ns < 4 {
        return Err(Error::ResolutionTooLow {
            found: nt.min(ns),
            min: 4,
        });
    }
    let imaginary_parts = [1, 2].map(|j| (a.root(j) * b.root(j).conj()).im);
    let analytic = AnalyticStep {
        s_values: [FRAC_PI_2, 3.0 * FRAC_PI_2],
        imaginary_parts,
        blocked: imaginary_parts.iter().any(|v| v.abs() > 1e-12),
    };

    let direct = &DirectForm::new(a, b);
    let points: Vec<(usize, f64, f64, f64)> = (0..nt)
        .into_par_iter()
        .flat_map_iter(|i| {
            let t = FRAC_PI_2 * i as f64 / (nt - 1) as f64;
            (0..ns).map(move |k| {
                let s = TAU * k as f64 / ns as f64;
                let alpha = Complex64::new(t.cos(), 0.0);
                let beta = Complex64::from_polar(t.sin(), s);
                let r = explicit_residuals(a, b, alpha, beta);
                let d = direct.residuals(alpha, beta);
                let worst = r.iter().map(|v| v.abs()).fold(0.0, f64::max);
                let cross = r.iter().zip(&d).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                (i, (alpha * beta).norm(), worst, cross)
            })
        })
        .collect();
    let on_axis = |i: usize| i == 0 || i + 1 == nt;
    let interior_floor = points
        .iter()
        .filter(|p| p.1 >= region)
        .map(|p| p.2)
        .fold(f64::INFINITY, f64::min);
    let feasible: Vec<_> = points.iter().filter(|p| p.2 < tol).collect();
    let feasible_off_axes = feasible.iter().filter(|p| !on_axis(p.0)).count();
    let boundary_residual = points
        .iter()
        .filter(|p| on_axis(p.0))
        .map(|p| p.2)
        .fold(0.0, f64::max);
    let cross_check = points.iter().map(|p| p.3).fold(0.0, f64::max);
    let verdict = if analytic.blocked && feasible_off_axes == 0 {
        FeasibilityVerdict::ProductOnly
    } else {
        FeasibilityVerdict::EntangledFeasible
    };
    Ok(FeasibilityReport {
        a,
        b,
        analytic,
        grid,
        interior_floor,
        region,
        feasible_points: feasible.len(),
        feasible_off_axes,
        boundary_residual,
        cross_check,
        verdict,
    })
}

/// Every ordered pair of distinct members of B_y ∪ B_w.
pub fn yw_ordered_pairs() -> Vec<(StateLabel, StateLabel)> {
    let labels = crate::constructions::yw_labels();
    labels
        .iter()
        .flat_map(|&p| labels.iter().filter(move |&&q| q != p).map(move |&q| (p, q)))
        .collect()
}

/// (α, β) = (cos t, e^{is} sin t)
pub fn coefficients(t: f64, s: f64) -> (Complex64, Complex64) {
    (Complex64::new(t.cos(), 0.0), Complex64::from_polar(t.sin(), s))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{constellation_554, PairChoice, QutritChoice};

    fn qt(l: BasisLabel, k: usize) -> StateLabel {
        BasisId::qutrit(l).state(k)
    }

    fn s1() -> Constellation554 {
        constellation_554(
            PairChoice::P0,
            QutritChoice::S1 {
                a_basis: BasisLabel::Y,
                b: qt(BasisLabel::W, 0),
            },
        )
        .unwrap()
    }

    #[test]
    fn root_coordinates_of_hy_columns() {
        let r = RootCoordinates::from_label(qt(BasisLabel::Y, 0)).unwrap();
        assert_eq!(r.exponents, [0, 1, 1]);
        assert!(r.vector().same_ray(&qt(BasisLabel::Y, 0).vector(), 1e-12));
        assert!(RootCoordinates::from_label(qt(BasisLabel::X, 0)).is_err());
        assert!(RootCoordinates::new([1, 0, 0]).is_err());
    }

    #[test]
    fn s1_extensions_factorize() {
        let c = s1();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (a, b) in [(1.0, 0.0), (h, h), (0.6, 0.8)] {
            let (a, b) = (Complex64::new(a, 0.0), Complex64::new(0.0, b));
            assert!(s1_extension_is_product(&c, a, b, 1e-10).unwrap());
            assert!(ExtensionState::s1(&c, a, b).unwrap().overlap_with_s(&c) < 1e-14);
        }
    }

    #[test]
    fn s1_rejects_s2_and_unnormalized() {
        let c = s1();
        assert!(ExtensionState::s2(&c, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).is_err());
        assert!(ExtensionState::s1(&c, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn explicit_equals_direct() {
        let a = RootCoordinates::from_label(qt(BasisLabel::Y, 1)).unwrap();
        let b = RootCoordinates::from_label(qt(BasisLabel::W, 2)).unwrap();
        for (t, s) in [(0.3, 1.1), (0.7, 4.0), (1.2, 2.5)] {
            let (al, be) = coefficients(t, s);
            let x = explicit_residuals(a, b, al, be);
            let y = direct_residuals(a, b, al, be);
            for j in 0..3 {
                assert!((x[j] - y[j]).abs() < 1e-15);
                // closed form (1/6) sin 2t cos(θ_J − s)
                let theta = (a.root(j) * b.root(j).conj()).arg();
                assert!((x[j] - (2.0 * t).sin() * (theta - s).cos() / 6.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn identical_states_are_rejected() {
        let a = RootCoordinates::from_label(qt(BasisLabel::W, 1)).unwrap();
        assert!(s2_feasibility(a, a, (10, 10), 0.05, 1e-9).is_err());
    }

    #[test]
    fn thirty_pairs() {
        assert_eq!(yw_ordered_pairs().len(), 30);
    }
}
