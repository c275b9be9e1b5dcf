use serde::Serialize;

use super::product::{pair_family, PairFamily, ParamSet, ProductBasis, ProductColumn};
use super::{BasisId, BasisLabel, StateLabel};
use crate::error::{Error, Result};
use crate::linalg::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// {|a,A⟩, |a,A^⊥⟩, |a,A^⊥⊥⟩, |b,B⟩}
    S1,
    /// {|a,A⟩, |a,A^⊥⟩, |b,B⟩, |b,B^⊥⟩}
    S2,
}

impl Shape {
    fn name(self) -> &'static str {
        match self {
            Shape::S1 => "S1",
            Shape::S2 => "S2",
        }
    }
}

/// The product pair underlying the constellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PairChoice {
    P0,
    P1 { xi: f64, eta: f64 },
}

impl PairChoice {
    pub fn build(self) -> Result<[ProductBasis; 2]> {
        match self {
            PairChoice::P0 => pair_family(PairFamily::P0, &ParamSet::default()),
            PairChoice::P1 { xi, eta } => pair_family(
                PairFamily::P1,
                &ParamSet {
                    xi,
                    eta,
                    ..ParamSet::default()
                },
            ),
        }
    }
}

/// Qutrit factors of the four extra states. All of them are drawn from
/// B_y ∪ B_w.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum QutritChoice {
    /// A, A^⊥, A^⊥⊥ run through the basis `a_basis`; B is one further state.
    S1 { a_basis: BasisLabel, b: StateLabel },
    /// Two orthogonal states for each qubit factor.
    S2 {
        a: StateLabel,
        a_perp: StateLabel,
        b: StateLabel,
        b_perp: StateLabel,
    },
}

/// Two product bases (five listed states each, the sixth implied) plus a set
/// S of four orthogonal product states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Constellation554 {
    pub shape: Shape,
    pub pair: [ProductBasis; 2],
    pub extra: Vec<ProductColumn>,
    /// Qubit factor carried by the A states and by the B states.
    pub qubit_a: StateLabel,
    pub qubit_b: StateLabel,
    /// A, A^⊥, A^⊥⊥
    pub a_states: [StateLabel; 3],
    /// B, B^⊥, B^⊥⊥
    pub b_states: [StateLabel; 3],
}

fn require_yw(l: StateLabel) -> Result<()> {
    if l.basis.dim() == 3 && matches!(l.basis.label(), BasisLabel::Y | BasisLabel::W) {
        Ok(())
    } else {
        Err(Error::InvalidConstellation(format!(
            "qutrit factor {l} is not MU to both B_z and B_x"
        )))
    }
}

/// Complete two orthogonal members of one basis by the third.
fn complete(a: StateLabel, a_perp: StateLabel) -> Result<[StateLabel; 3]> {
    if a.basis != a_perp.basis || a.index == a_perp.index {
        return Err(Error::InvalidConstellation(format!(
            "{a} and {a_perp} are not orthogonal"
        )));
    }
    let rest = 3 - a.index - a_perp.index;
    Ok([a, a_perp, a.basis.state(rest)])
}

fn others(b: StateLabel) -> [StateLabel; 3] {
    let mut rest = (0..3).filter(|&k| k != b.index);
    let (p, pp) = (rest.next().unwrap(), rest.next().unwrap());
    [b, b.basis.state(p), b.basis.state(pp)]
}

/// Build an S₁ or S₂ constellation over P₀ or P₁ with qubit factors 0_y
/// (A states) and 1_y (B states).
pub fn constellation_554(pair: PairChoice, choice: QutritChoice) -> Result<Constellation554> {
    let y = BasisId::qubit(BasisLabel::Y);
    build(pair, choice, y.state(0), y.state(1))
}

fn build(
    pair: PairChoice,
    choice: QutritChoice,
    qubit_a: StateLabel,
    qubit_b: StateLabel,
) -> Result<Constellation554> {
    let (shape, a_states, b_states) = match choice {
        QutritChoice::S1 { a_basis, b } => {
            let basis = BasisId::new(3, a_basis)?;
            let a0 = basis.state(0);
            require_yw(a0)?;
            require_yw(b)?;
            (Shape::S1, [a0, basis.state(1), basis.state(2)], others(b))
        }
        QutritChoice::S2 {
            a,
            a_perp,
            b,
            b_perp,
        } => {
            for l in [a, a_perp, b, b_perp] {
                require_yw(l)?;
            }
            (Shape::S2, complete(a, a_perp)?, complete(b, b_perp)?)
        }
    };
    let labeled = |q: StateLabel, t: StateLabel| {
        ProductColumn::new(q.vector(), t.vector(), Some(q), Some(t))
    };
    let extra = match shape {
        Shape::S1 => vec![
            labeled(qubit_a, a_states[0])?,
            labeled(qubit_a, a_states[1])?,
            labeled(qubit_a, a_states[2])?,
            labeled(qubit_b, b_states[0])?,
        ],
        Shape::S2 => vec![
            labeled(qubit_a, a_states[0])?,
            labeled(qubit_a, a_states[1])?,
            labeled(qubit_b, b_states[0])?,
            labeled(qubit_b, b_states[1])?,
        ],
    };
    let pair = pair.build()?.map(|b| b.with_implied(5));
    Ok(Constellation554 {
        shape,
        pair,
        extra,
        qubit_a,
        qubit_b,
        a_states,
        b_states,
    })
}

impl Constellation554 {
    /// Classify four labeled product states into S₁ or S₂.
    pub fn from_states(pair: PairChoice, states: &[(StateLabel, StateLabel)]) -> Result<Self> {
        let y = BasisId::qubit(BasisLabel::Y);
        if let Some((q, _)) = states.iter().find(|(q, _)| q.basis != y) {
            return Err(Error::InvalidConstellation(format!(
                "qubit factor {q} is not MU to both B_z and B_x"
            )));
        }
        let count = |k| states.iter().filter(|(q, _)| q.index == k).count();
        let (n0, n1) = (count(0), count(1));
        if n0 > 3 || n1 > 3 {
            return Err(Error::InvalidConstellation(format!(
                "a qubit factor occurs {} times; orthogonality allows at most three",
                n0.max(n1)
            )));
        }
        if states.len() != 4 {
            return Err(Error::InvalidConstellation(format!(
                "expected four states, found {}",
                states.len()
            )));
        }
        let with = |k| -> Vec<StateLabel> {
            states
                .iter()
                .filter(|(q, _)| q.index == k)
                .map(|&(_, t)| t)
                .collect()
        };
        let orthogonal_triple = |ts: &[StateLabel]| -> Result<BasisLabel> {
            let full = complete(ts[0], ts[1])?;
            if ts[2] != full[2] {
                return Err(Error::InvalidConstellation(format!(
                    "{} is not orthogonal to {} and {}",
                    ts[2], ts[0], ts[1]
                )));
            }
            Ok(ts[0].basis.label())
        };
        match (n0, n1) {
            (3, 1) | (1, 3) => {
                let (major, minor) = if n0 == 3 { (0, 1) } else { (1, 0) };
                let a = with(major);
                let a_basis = orthogonal_triple(&a)?;
                let b = with(minor)[0];
                build(
                    pair,
                    QutritChoice::S1 { a_basis, b },
                    y.state(major),
                    y.state(minor),
                )
            }
            (2, 2) => {
                let (a, b) = (with(0), with(1));
                build(
                    pair,
                    QutritChoice::S2 {
                        a: a[0],
                        a_perp: a[1],
                        b: b[0],
                        b_perp: b[1],
                    },
                    y.state(0),
                    y.state(1),
                )
            }
            _ => unreachable!("four states with at most three per factor"),
        }
    }

    /// The ten listed bases states followed by the four states of S.
    pub fn listed_states(&self) -> Vec<StateVector> {
        self.pair
            .iter()
            .flat_map(|b| {
                b.columns
                    .iter()
                    .enumerate()
                    .filter(move |(k, _)| Some(*k) != b.implied)
                    .map(|(_, c)| c.state.clone())
            })
            .chain(self.extra.iter().map(|c| c.state.clone()))
            .collect()
    }

    pub fn require_shape(&self, shape: Shape) -> Result<()> {
        if self.shape == shape {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                expected: shape.name(),
                found: self.shape.name(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qt(l: BasisLabel, k: usize) -> StateLabel {
        BasisId::qutrit(l).state(k)
    }

    fn qb(k: usize) -> StateLabel {
        BasisId::qubit(BasisLabel::Y).state(k)
    }

    #[test]
    fn s1_completes_b_states() {
        let c = constellation_554(
            PairChoice::P0,
            QutritChoice::S1 {
                a_basis: BasisLabel::Y,
                b: qt(BasisLabel::W, 0),
            },
        )
        .unwrap();
        assert_eq!(c.b_states, [qt(BasisLabel::W, 0), qt(BasisLabel::W, 1), qt(BasisLabel::W, 2)]);
        assert_eq!(c.extra.len(), 4);
        assert_eq!(c.listed_states().len(), 14);
    }

    #[test]
    fn s2_rejects_non_orthogonal_choice() {
        let err = constellation_554(
            PairChoice::P0,
            QutritChoice::S2 {
                a: qt(BasisLabel::Y, 0),
                a_perp: qt(BasisLabel::W, 1),
                b: qt(BasisLabel::W, 0),
                b_perp: qt(BasisLabel::W, 2),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConstellation(_)));
    }

    #[test]
    fn rejects_z_or_x_qutrit_factor() {
        let err = constellation_554(
            PairChoice::P0,
            QutritChoice::S1 {
                a_basis: BasisLabel::X,
                b: qt(BasisLabel::Y, 0),
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidConstellation(_)));
    }

    #[test]
    fn classify_from_states() {
        let y = BasisLabel::Y;
        let s1 = Constellation554::from_states(
            PairChoice::P0,
            &[(qb(0), qt(y, 0)), (qb(0), qt(y, 2)), (qb(0), qt(y, 1)), (qb(1), qt(BasisLabel::W, 2))],
        )
        .unwrap();
        assert_eq!(s1.shape, Shape::S1);
        let s2 = Constellation554::from_states(
            PairChoice::P0,
            &[(qb(0), qt(y, 0)), (qb(0), qt(y, 1)), (qb(1), qt(BasisLabel::W, 0)), (qb(1), qt(BasisLabel::W, 1))],
        )
        .unwrap();
        assert_eq!(s2.shape, Shape::S2);
        assert_eq!(s2.a_states[2], qt(y, 2));
        assert!(s2.require_shape(Shape::S1).is_err());
    }

    #[test]
    fn rejects_overused_qubit_factor() {
        let y = BasisLabel::Y;
        let w = BasisLabel::W;
        let five = [
            (qb(0), qt(y, 0)),
            (qb(0), qt(y, 1)),
            (qb(0), qt(y, 2)),
            (qb(0), qt(w, 0)),
            (qb(0), qt(w, 1)),
        ];
        let err = Constellation554::from_states(PairChoice::P0, &five).unwrap_err();
        assert!(err.to_string().contains("at most three"), "{err}");
        let four = &five[..4];
        assert!(Constellation554::from_states(PairChoice::P0, four).is_err());
    }
}
