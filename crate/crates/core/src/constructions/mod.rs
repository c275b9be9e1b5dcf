//! Concrete objects: Heisenberg–Weyl operators and their eigenbases in C²
//! and C³, MU product triples and pairs in C⁶, and {5,5,4} constellations.
//!
//! Parameter-free objects are built exactly over [`Cyclotomic`] and
//! converted to floating point on demand.

mod constellation;
mod product;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Cyclotomic, Operator, Scalar, StateVector};

pub use constellation::{constellation_554, Constellation554, PairChoice, QutritChoice, Shape};
pub use product::{
    pair_exact, pair_family, triple, triple_exact, Directness, PairFamily, ParamSet, ProductBasis,
    ProductColumn, Triple,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisLabel {
    Z,
    X,
    Y,
    W,
}

impl BasisLabel {
    pub fn as_char(self) -> char {
        match self {
            BasisLabel::Z => 'z',
            BasisLabel::X => 'x',
            BasisLabel::Y => 'y',
            BasisLabel::W => 'w',
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "z" | "Z" => Some(BasisLabel::Z),
            "x" | "X" => Some(BasisLabel::X),
            "y" | "Y" => Some(BasisLabel::Y),
            "w" | "W" => Some(BasisLabel::W),
            _ => None,
        }
    }
}

/// One of the Heisenberg–Weyl eigenbases of C² (z, x, y) or C³ (z, x, y, w).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BasisId {
    dim: usize,
    label: BasisLabel,
}

impl BasisId {
    pub fn new(dim: usize, label: BasisLabel) -> Result<Self> {
        match (dim, label) {
            (2, BasisLabel::W) => Err(Error::InvalidOperator {
                dim,
                which: "W".into(),
            }),
            (2 | 3, _) => Ok(Self { dim, label }),
            (d, _) => Err(Error::UnsupportedDimension(d)),
        }
    }

    pub fn qubit(label: BasisLabel) -> Self {
        Self::new(2, label).expect("qubit label")
    }

    pub fn qutrit(label: BasisLabel) -> Self {
        Self::new(3, label).expect("qutrit label")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> BasisLabel {
        self.label
    }

    pub fn state(self, index: usize) -> StateLabel {
        assert!(index < self.dim, "index {index} out of range");
        StateLabel { basis: self, index }
    }
}

impl fmt::Display for BasisId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}^{}", self.label.as_char(), self.dim)
    }
}

/// Names a single state such as |1_y⟩ or |2_w⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StateLabel {
    pub basis: BasisId,
    pub index: usize,
}

impl StateLabel {
    pub fn exact(&self) -> StateVector<Cyclotomic> {
        mu_basis_exact(self.basis).columns[self.index].clone()
    }

    pub fn vector(&self) -> StateVector {
        self.exact().to_float()
    }

    /// Parse labels of the form `0_y` (qubit) given the dimension.
    pub fn parse(s: &str, dim: usize) -> Result<Self> {
        let bad = || Error::Precondition(format!("cannot parse state label {s:?}"));
        let (idx, lab) = s.split_once('_').ok_or_else(bad)?;
        let index: usize = idx.parse().map_err(|_| bad())?;
        let label = BasisLabel::parse(lab).ok_or_else(bad)?;
        let basis = BasisId::new(dim, label)?;
        if index >= dim {
            return Err(bad());
        }
        Ok(basis.state(index))
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.index, self.basis.label.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    HeisenbergWeyl(BasisId),
    Custom(String),
}

/// Ordered orthonormal set of `dim` columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Basis<S = Complex64> {
    pub columns: Vec<StateVector<S>>,
    pub provenance: Provenance,
}

impl<S: Scalar> Basis<S> {
    pub fn new(columns: Vec<StateVector<S>>, provenance: Provenance) -> Result<Self> {
        let dim = columns.first().map(StateVector::dim).unwrap_or(0);
        if columns.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: columns.len(),
            });
        }
        if let Some(bad) = columns.iter().find(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(Self {
            columns,
            provenance,
        })
    }

    /// Like [`Basis::new`] but accepts any number of columns of equal
    /// dimension, e.g. a deliberately broken basis under test.
    pub fn from_columns_unchecked(columns: Vec<StateVector<S>>, provenance: Provenance) -> Self {
        Self {
            columns,
            provenance,
        }
    }

    pub fn dim(&self) -> usize {
        self.columns.first().map(StateVector::dim).unwrap_or(0)
    }

    pub fn to_float(&self) -> Basis<Complex64> {
        Basis {
            columns: self.columns.iter().map(StateVector::to_float).collect(),
            provenance: self.provenance.clone(),
        }
    }

    pub fn matrix(&self) -> Result<Operator<S>> {
        Operator::from_columns(&self.columns)
    }
}

/// The four Heisenberg–Weyl operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HwOperator {
    X,
    Z,
    /// XZ
    Y,
    /// X²Z, qutrit only.
    W,
}

fn omega(dim: usize, power: i64) -> Cyclotomic {
    Cyclotomic::root_of_unity(dim, power)
}

/// Shift X|J⟩ = |J+1 mod d⟩, phase Z|J⟩ = ω^J|J⟩ with ω = e^{2πi/d}, so that
/// ZX = ωXZ.
pub fn hw_operator_exact(dim: usize, which: HwOperator) -> Result<Operator<Cyclotomic>> {
    if !matches!(dim, 2 | 3) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let z = Operator::diagonal((0..dim).map(|j| omega(dim, j as i64)).collect())?;
    let x = Operator::from_columns(
        &(0..dim)
            .map(|j| StateVector::basis(dim, (j + 1) % dim))
            .collect::<Result<Vec<_>>>()?,
    )?;
    match which {
        HwOperator::X => Ok(x),
        HwOperator::Z => Ok(z),
        HwOperator::Y => x.matmul(&z),
        HwOperator::W if dim == 3 => x.matmul(&x)?.matmul(&z),
        HwOperator::W => Err(Error::InvalidOperator {
            dim,
            which: "W".into(),
        }),
    }
}

pub fn hw_operator(dim: usize, which: HwOperator) -> Result<Operator> {
    Ok(hw_operator_exact(dim, which)?.to_float())
}

/// Heisenberg–Weyl eigenbasis, exact. Columns have a real positive first
/// component. For C³ the x, y and w bases are the columns of F₃, H_y and
/// H_w respectively.
pub fn mu_basis_exact(id: BasisId) -> Basis<Cyclotomic> {
    let one = Cyclotomic::one();
    let vec = |amps: Vec<Cyclotomic>, scale: Cyclotomic| {
        StateVector::new(amps).expect("valid dim").scaled(scale)
    };
    let columns = match (id.dim, id.label) {
        (d, BasisLabel::Z) => (0..d)
            .map(|k| StateVector::basis(d, k).expect("valid"))
            .collect(),
        (2, label) => {
            let h = Cyclotomic::inv_sqrt2();
            let second = match label {
                BasisLabel::X => one,
                BasisLabel::Y => Cyclotomic::i(),
                _ => unreachable!("validated by BasisId"),
            };
            vec![vec(vec![one, second], h), vec(vec![one, -second], h)]
        }
        (3, label) => {
            let s = Cyclotomic::inv_sqrt3();
            let w = |p: i64| omega(3, p);
            let exps: [[i64; 3]; 3] = match label {
                BasisLabel::X => [[0, 0, 0], [0, 1, 2], [0, 2, 1]],
                BasisLabel::Y => [[0, 1, 1], [0, 2, 0], [0, 0, 2]],
                BasisLabel::W => [[0, 2, 2], [0, 0, 1], [0, 1, 0]],
                BasisLabel::Z => unreachable!(),
            };
            exps.iter()
                .map(|e| vec(e.iter().map(|&p| w(p)).collect(), s))
                .collect()
        }
        _ => unreachable!("validated by BasisId"),
    };
    Basis {
        columns,
        provenance: Provenance::HeisenbergWeyl(id),
    }
}

pub fn mu_basis(id: BasisId) -> Basis {
    mu_basis_exact(id).to_float()
}

/// The six qutrit states of B_y ∪ B_w, in the order y0, y1, y2, w0, w1, w2.
pub fn yw_labels() -> Vec<StateLabel> {
    [BasisLabel::Y, BasisLabel::W]
        .into_iter()
        .flat_map(|l| (0..3).map(move |k| BasisId::qutrit(l).state(k)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn qubit_z_is_diag_one_minus_one() {
        let z = hw_operator(2, HwOperator::Z).unwrap();
        assert_eq!(z, Operator::diagonal(vec![c(1.0, 0.0), c(-1.0, 0.0)]).unwrap());
    }

    #[test]
    fn qutrit_shift_moves_zero_to_one() {
        let x = hw_operator_exact(3, HwOperator::X).unwrap();
        let e0 = StateVector::<Cyclotomic>::basis(3, 0).unwrap();
        assert_eq!(x.apply(&e0).unwrap(), StateVector::basis(3, 1).unwrap());
    }

    #[test]
    fn weyl_commutation_relation() {
        for d in [2, 3] {
            let x = hw_operator_exact(d, HwOperator::X).unwrap();
            let z = hw_operator_exact(d, HwOperator::Z).unwrap();
            let zx = z.matmul(&x).unwrap();
            let xz = x.matmul(&z).unwrap().scaled(omega(d, 1));
            assert_eq!(zx, xz, "d = {d}");
        }
    }

    #[test]
    fn w_only_for_qutrits() {
        assert!(matches!(
            hw_operator(2, HwOperator::W),
            Err(Error::InvalidOperator { dim: 2, .. })
        ));
        assert!(BasisId::new(2, BasisLabel::W).is_err());
        assert!(BasisId::new(4, BasisLabel::Z).is_err());
    }

    #[test]
    fn hy_first_column() {
        let col = mu_basis(BasisId::qutrit(BasisLabel::Y)).columns[0].clone();
        let s = 1.0 / 3f64.sqrt();
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let expected = [c(s, 0.0), w * s, w * s];
        for (a, b) in col.amps().iter().zip(expected) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn bases_are_eigenbases() {
        // With ZX = ωXZ the columns of F₃ diagonalize X, H_w diagonalizes
        // XZ and H_y diagonalizes X²Z; for qubits B_y diagonalizes XZ.
        let pairs = [
            (2, BasisLabel::Z, HwOperator::Z),
            (2, BasisLabel::X, HwOperator::X),
            (2, BasisLabel::Y, HwOperator::Y),
            (3, BasisLabel::Z, HwOperator::Z),
            (3, BasisLabel::X, HwOperator::X),
            (3, BasisLabel::W, HwOperator::Y),
            (3, BasisLabel::Y, HwOperator::W),
        ];
        for (d, label, op) in pairs {
            let m = hw_operator_exact(d, op).unwrap();
            for v in mu_basis_exact(BasisId::new(d, label).unwrap()).columns {
                let mv = m.apply(&v).unwrap();
                let lambda = inner(&v, &mv).unwrap();
                assert_eq!(mv, v.scaled(lambda), "{label:?} vs {op:?}");
                assert_eq!(lambda.norm_sqr(), Cyclotomic::one());
            }
        }
    }

    #[test]
    fn qubit_y_basis_matches_closed_form() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let b = mu_basis(BasisId::qubit(BasisLabel::Y));
        assert!((b.columns[0].amps()[1] - c(0.0, h)).norm() < 1e-15);
        assert!((b.columns[1].amps()[1] - c(0.0, -h)).norm() < 1e-15);
    }

    #[test]
    fn label_parsing_roundtrip() {
        for l in yw_labels() {
            assert_eq!(StateLabel::parse(&l.to_string(), 3).unwrap(), l);
        }
        assert!(StateLabel::parse("3_y", 3).is_err());
        assert!(StateLabel::parse("0_w", 2).is_err());
    }
}
