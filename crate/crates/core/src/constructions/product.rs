use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::{mu_basis, Basis, BasisId, BasisLabel, Provenance, StateLabel};
use crate::error::{Error, Result};
use crate::linalg::{tensor, Cyclotomic, Operator, Scalar, StateVector};

/// One column |φ⟩⊗|Φ⟩ of a product basis, keeping its factors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductColumn<S = Complex64> {
    pub qubit: StateVector<S>,
    pub qutrit: StateVector<S>,
    pub qubit_label: Option<StateLabel>,
    pub qutrit_label: Option<StateLabel>,
    pub state: StateVector<S>,
}

impl<S: Scalar> ProductColumn<S> {
    pub fn new(
        qubit: StateVector<S>,
        qutrit: StateVector<S>,
        qubit_label: Option<StateLabel>,
        qutrit_label: Option<StateLabel>,
    ) -> Result<Self> {
        let state = tensor(&qubit, &qutrit)?;
        Ok(Self {
            qubit,
            qutrit,
            qubit_label,
            qutrit_label,
            state,
        })
    }

    pub fn to_float(&self) -> ProductColumn<Complex64> {
        ProductColumn {
            qubit: self.qubit.to_float(),
            qutrit: self.qutrit.to_float(),
            qubit_label: self.qubit_label,
            qutrit_label: self.qutrit_label,
            state: self.state.to_float(),
        }
    }

    pub fn describe(&self) -> String {
        let q = self.qubit_label.map_or("·".to_string(), |l| l.to_string());
        let t = self.qutrit_label.map_or("·".to_string(), |l| l.to_string());
        format!("|{q},{t}⟩")
    }
}

impl ProductColumn<Cyclotomic> {
    fn labeled(qubit: StateLabel, qutrit: StateLabel) -> Self {
        Self::new(qubit.exact(), qutrit.exact(), Some(qubit), Some(qutrit)).expect("dims fixed")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Directness {
    /// A tensor product of one C² basis with one C³ basis.
    Direct,
    Indirect,
}

/// Orthonormal basis of C⁶ whose columns all factorize.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductBasis<S = Complex64> {
    pub name: String,
    pub columns: Vec<ProductColumn<S>>,
    pub directness: Directness,
    /// Column that a {5,5,4} listing leaves implicit.
    pub implied: Option<usize>,
}

fn distinct_rays(vectors: impl Iterator<Item = StateVector>) -> usize {
    let mut reps: Vec<StateVector> = Vec::new();
    for v in vectors {
        if !reps.iter().any(|r| r.same_ray(&v, 1e-6)) {
            reps.push(v);
        }
    }
    reps.len()
}

impl<S: Scalar> ProductBasis<S> {
    pub fn new(name: impl Into<String>, columns: Vec<ProductColumn<S>>) -> Result<Self> {
        if columns.len() != 6 {
            return Err(Error::DimensionMismatch {
                expected: 6,
                found: columns.len(),
            });
        }
        let qubits = distinct_rays(columns.iter().map(|c| c.qubit.to_float()));
        let qutrits = distinct_rays(columns.iter().map(|c| c.qutrit.to_float()));
        let directness = if qubits == 2 && qutrits == 3 {
            Directness::Direct
        } else {
            Directness::Indirect
        };
        Ok(Self {
            name: name.into(),
            columns,
            directness,
            implied: None,
        })
    }

    pub fn basis(&self) -> Basis<S> {
        Basis {
            columns: self.columns.iter().map(|c| c.state.clone()).collect(),
            provenance: Provenance::Custom(self.name.clone()),
        }
    }

    pub fn to_float(&self) -> ProductBasis<Complex64> {
        ProductBasis {
            name: self.name.clone(),
            columns: self.columns.iter().map(ProductColumn::to_float).collect(),
            directness: self.directness,
            implied: self.implied,
        }
    }

    pub fn with_implied(mut self, column: usize) -> Self {
        self.implied = Some(column);
        self
    }
}

impl ProductBasis<Cyclotomic> {
    /// {|j_a, J_b⟩} ordered by 3·j + J.
    fn direct(qubit: BasisLabel, qutrit: BasisLabel) -> Self {
        let name = format!("|j_{},J_{}⟩", qubit.as_char(), qutrit.as_char());
        let columns = (0..2)
            .flat_map(|j| {
                (0..3).map(move |k| {
                    ProductColumn::labeled(BasisId::qubit(qubit).state(j), BasisId::qutrit(qutrit).state(k))
                })
            })
            .collect();
        Self::new(name, columns).expect("six columns")
    }

    /// {|0_a, J_b⟩, |1_a, J_c⟩}
    fn split(qubit: BasisLabel, first: BasisLabel, second: BasisLabel) -> Self {
        let q = BasisId::qubit(qubit);
        let name = format!(
            "|0_{},J_{}⟩,|1_{},J_{}⟩",
            qubit.as_char(),
            first.as_char(),
            qubit.as_char(),
            second.as_char()
        );
        let columns = [(0, first), (1, second)]
            .into_iter()
            .flat_map(|(j, l)| (0..3).map(move |k| ProductColumn::labeled(q.state(j), BasisId::qutrit(l).state(k))))
            .collect();
        Self::new(name, columns).expect("six columns")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Triple {
    T0,
    T1,
}

pub fn triple_exact(which: Triple) -> [ProductBasis<Cyclotomic>; 3] {
    use BasisLabel::*;
    let third = match which {
        Triple::T0 => ProductBasis::direct(Y, Y),
        Triple::T1 => ProductBasis::split(Y, Y, W),
    };
    [ProductBasis::direct(Z, Z), ProductBasis::direct(X, X), third]
}

pub fn triple(which: Triple) -> [ProductBasis; 3] {
    triple_exact(which).map(|b| b.to_float())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairFamily {
    P0,
    P1,
    P2,
    P3,
}

/// Continuous parameters of the pair families. Families ignore the
/// parameters they do not use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSet {
    pub xi: f64,
    pub eta: f64,
    pub zeta: f64,
    pub chi: f64,
    pub sigma: f64,
    pub tau: f64,
}

impl Default for ParamSet {
    fn default() -> Self {
        Self {
            xi: 0.0,
            eta: 0.0,
            zeta: 0.0,
            chi: 0.0,
            sigma: PI / 2.0,
            tau: PI / 2.0,
        }
    }
}

fn check_full_turn(name: &'static str, value: f64) -> Result<()> {
    if (0.0..2.0 * PI).contains(&value) {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value,
            range: "[0, 2π)",
        })
    }
}

fn check_open_half_turn(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < PI {
        Ok(())
    } else {
        Err(Error::ParamOutOfRange {
            name,
            value,
            range: "(0, π)",
        })
    }
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// R_{ξ,η} = |0_z⟩⟨0_z| + e^{iξ}|1_z⟩⟨1_z| + e^{iη}|2_z⟩⟨2_z|
pub fn r_operator(xi: f64, eta: f64) -> Operator {
    Operator::diagonal(vec![phase(0.0), phase(xi), phase(eta)]).expect("dim 3")
}

/// S_{ζ,χ}: the same diagonal phases relative to the qutrit x basis.
pub fn s_operator(zeta: f64, chi: f64) -> Operator {
    let f = mu_basis(BasisId::qutrit(BasisLabel::X)).matrix().expect("dim 3");
    let d = r_operator(zeta, chi);
    f.matmul(&d).and_then(|m| m.matmul(&f.adjoint())).expect("dim 3")
}

/// r_s|j_x⟩ = (|0_z⟩ ± e^{is}|1_z⟩)/√2, + for j = 0.
pub fn r_small(s: f64, j: usize) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if j == 0 { 1.0 } else { -1.0 };
    StateVector::new(vec![Complex64::new(h, 0.0), phase(s) * (sign * h)]).expect("dim 2")
}

pub fn pair_exact(which: PairFamily) -> Result<[ProductBasis<Cyclotomic>; 2]> {
    use BasisLabel::*;
    match which {
        PairFamily::P0 => Ok([ProductBasis::direct(Z, Z), ProductBasis::direct(X, X)]),
        PairFamily::P2 => Ok([ProductBasis::split(Z, Z, Y), ProductBasis::split(X, X, W)]),
        _ => Err(Error::Precondition(format!(
            "{which:?} depends on continuous parameters; no exact form"
        ))),
    }
}

/// Representatives of the four families of MU product pairs.
pub fn pair_family(which: PairFamily, params: &ParamSet) -> Result<[ProductBasis; 2]> {
    let qb = |l| BasisId::qubit(l);
    let qt = |l| BasisId::qutrit(l);
    let col = |q: StateVector, t: StateVector, ql: Option<StateLabel>, tl: Option<StateLabel>| {
        ProductColumn::new(q, t, ql, tl)
    };
    match which {
        PairFamily::P0 | PairFamily::P2 => Ok(pair_exact(which)?.map(|b| b.to_float())),
        PairFamily::P1 => {
            check_full_turn("xi", params.xi)?;
            check_full_turn("eta", params.eta)?;
            let [first, _] = pair_exact(PairFamily::P0)?.map(|b| b.to_float());
            let r = r_operator(params.xi, params.eta);
            let mut columns = Vec::with_capacity(6);
            for j in 0..2 {
                for k in 0..3 {
                    let ql = qb(BasisLabel::X).state(j);
                    let tl = qt(BasisLabel::X).state(k);
                    let (t, label) = if j == 0 {
                        (tl.vector(), Some(tl))
                    } else {
                        (r.apply(&tl.vector())?, None)
                    };
                    columns.push(col(ql.vector(), t, Some(ql), label)?);
                }
            }
            Ok([
                first,
                ProductBasis::new("|0_x,J_x⟩,|1_x,R J_x⟩", columns)?,
            ])
        }
        PairFamily::P3 => {
            check_full_turn("zeta", params.zeta)?;
            check_full_turn("chi", params.chi)?;
            check_open_half_turn("sigma", params.sigma)?;
            check_open_half_turn("tau", params.tau)?;
            let s = s_operator(params.zeta, params.chi);
            let mut first = Vec::with_capacity(6);
            for j in 0..2 {
                for k in 0..3 {
                    let ql = qb(BasisLabel::Z).state(j);
                    let tl = qt(BasisLabel::Z).state(k);
                    let (t, label) = if j == 0 {
                        (tl.vector(), Some(tl))
                    } else {
                        (s.apply(&tl.vector())?, None)
                    };
                    first.push(col(ql.vector(), t, Some(ql), label)?);
                }
            }
            let mut second = Vec::with_capacity(6);
            for j in 0..2 {
                for k in 0..3 {
                    let tl = qt(BasisLabel::X).state(k);
                    let (q, label) = match k {
                        0 => {
                            let l = qb(BasisLabel::X).state(j);
                            (l.vector(), Some(l))
                        }
                        1 => (r_small(params.sigma, j), None),
                        _ => (r_small(params.tau, j), None),
                    };
                    second.push(col(q, tl.vector(), label, Some(tl))?);
                }
            }
            Ok([
                ProductBasis::new("|0_z,J_z⟩,|1_z,S J_z⟩", first)?,
                ProductBasis::new("|j_x,0_x⟩,|r_σ j_x,1_x⟩,|r_τ j_x,2_x⟩", second)?,
            ])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triples_directness() {
        let t0 = triple(Triple::T0);
        assert!(t0.iter().all(|b| b.directness == Directness::Direct));
        let t1 = triple(Triple::T1);
        assert_eq!(t1[0].directness, Directness::Direct);
        assert_eq!(t1[1].directness, Directness::Direct);
        assert_eq!(t1[2].directness, Directness::Indirect);
    }

    #[test]
    fn p1_at_zero_is_p0() {
        let p0 = pair_family(PairFamily::P0, &ParamSet::default()).unwrap();
        let p1 = pair_family(PairFamily::P1, &ParamSet::default()).unwrap();
        for (a, b) in p0.iter().zip(&p1) {
            for (x, y) in a.columns.iter().zip(&b.columns) {
                assert!(x.state.distance(&y.state) < 1e-15);
            }
        }
    }

    #[test]
    fn p2_qutrit_labels() {
        let [a, b] = pair_family(PairFamily::P2, &ParamSet::default()).unwrap();
        let labels = |pb: &ProductBasis| -> Vec<BasisLabel> {
            pb.columns
                .iter()
                .map(|c| c.qutrit_label.unwrap().basis.label())
                .collect()
        };
        use BasisLabel::*;
        assert_eq!(labels(&a), vec![Z, Z, Z, Y, Y, Y]);
        assert_eq!(labels(&b), vec![X, X, X, W, W, W]);
    }

    #[test]
    fn p3_rejects_degenerate_sigma() {
        let mut p = ParamSet::default();
        p.sigma = 0.0;
        assert!(matches!(
            pair_family(PairFamily::P3, &p),
            Err(Error::ParamOutOfRange { name: "sigma", .. })
        ));
        p.sigma = 1.0;
        p.tau = PI;
        assert!(matches!(
            pair_family(PairFamily::P3, &p),
            Err(Error::ParamOutOfRange { name: "tau", .. })
        ));
    }

    #[test]
    fn s_operator_is_unitary_and_diagonal_in_x() {
        let s = s_operator(0.7, 2.1);
        assert!(s.unitarity_deviation() < 1e-14);
        let x1 = BasisId::qutrit(BasisLabel::X).state(1).vector();
        let sx = s.apply(&x1).unwrap();
        assert!(sx.distance(&x1.scaled(phase(0.7))) < 1e-14);
    }
}
