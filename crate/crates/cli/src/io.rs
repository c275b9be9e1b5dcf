//! Schema version 1 data files.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "dim": 6,
//!   "bases": [[[[re, im], ...], ...]],
//!   "states": [[[re, im], ...]],
//!   "metadata": {"name": "...", "labels": [["0_z,0_z", ...]], "exact": {...}}
//! }
//! ```
//!
//! Bases are arrays of columns. The optional `exact` block carries the
//! cyclotomic coordinates of every entry so exact objects survive a round
//! trip unchanged.

use std::path::Path;

use mub_core::constructions::{Basis, Provenance};
use mub_core::linalg::cyclotomic::DEGREE;
use mub_core::linalg::{Cyclotomic, Scalar, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: &str = "1";
const NORM_TOL: f64 = 1e-9;
const EXACT_AGREEMENT: f64 = 1e-12;

pub type Entry = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactEntry {
    pub num: [i128; DEGREE],
    pub den: i128,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactData {
    #[serde(default)]
    pub bases: Vec<Vec<Vec<ExactEntry>>>,
    #[serde(default)]
    pub states: Vec<Vec<ExactEntry>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Column labels per basis, e.g. "0_z,1_x".
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<ExactData>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataFile {
    pub schema_version: String,
    pub dim: usize,
    #[serde(default)]
    pub bases: Vec<Vec<Vec<Entry>>>,
    #[serde(default)]
    pub states: Vec<Vec<Entry>>,
    #[serde(default)]
    pub metadata: Metadata,
}

fn entry(z: Complex64) -> Entry {
    [z.re, z.im]
}

fn exact_entry(z: &Cyclotomic) -> ExactEntry {
    ExactEntry {
        num: *z.coords(),
        den: z.denominator(),
    }
}

fn float_column<S: Scalar>(v: &StateVector<S>) -> Vec<Entry> {
    v.to_float().amps().iter().copied().map(entry).collect()
}

impl DataFile {
    pub fn new(dim: usize) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            dim,
            bases: Vec::new(),
            states: Vec::new(),
            metadata: Metadata::default(),
        }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.metadata.name = Some(name.into());
        self
    }

    pub fn push_basis<S: Scalar>(&mut self, b: &Basis<S>, labels: Option<Vec<String>>) {
        self.bases.push(b.columns.iter().map(float_column).collect());
        if let Some(l) = labels {
            // keep label rows aligned with bases
            while self.metadata.labels.len() + 1 < self.bases.len() {
                self.metadata.labels.push(Vec::new());
            }
            self.metadata.labels.push(l);
        }
    }

    pub fn push_state<S: Scalar>(&mut self, v: &StateVector<S>) {
        self.states.push(float_column(v));
    }

    /// Record exact coordinates for everything pushed so far.
    pub fn attach_exact(&mut self, bases: &[Basis<Cyclotomic>], states: &[StateVector<Cyclotomic>]) {
        self.metadata.exact = Some(ExactData {
            bases: bases
                .iter()
                .map(|b| b.columns.iter().map(|c| c.amps().iter().map(exact_entry).collect()).collect())
                .collect(),
            states: states
                .iter()
                .map(|s| s.amps().iter().map(exact_entry).collect())
                .collect(),
        });
    }

    pub fn float_bases(&self) -> Vec<Basis> {
        self.bases
            .iter()
            .enumerate()
            .map(|(k, cols)| {
                let columns = cols.iter().map(|c| to_state(c)).collect();
                Basis::from_columns_unchecked(columns, Provenance::Custom(self.basis_name(k)))
            })
            .collect()
    }

    pub fn float_states(&self) -> Vec<StateVector> {
        self.states.iter().map(|s| to_state(s)).collect()
    }

    /// Exact bases and states, when the file carries them.
    pub fn exact_objects(&self) -> Option<(Vec<Basis<Cyclotomic>>, Vec<StateVector<Cyclotomic>>)> {
        let e = self.metadata.exact.as_ref()?;
        let value = |x: &ExactEntry| Cyclotomic::from_parts(x.num, x.den).expect("checked on import");
        let bases = e
            .bases
            .iter()
            .enumerate()
            .map(|(k, cols)| {
                let columns = cols
                    .iter()
                    .map(|c| StateVector::new(c.iter().map(value).collect()).expect("checked on import"))
                    .collect();
                Basis::from_columns_unchecked(columns, Provenance::Custom(self.basis_name(k)))
            })
            .collect();
        let states = e
            .states
            .iter()
            .map(|s| StateVector::new(s.iter().map(value).collect()).expect("checked on import"))
            .collect();
        Some((bases, states))
    }

    fn basis_name(&self, k: usize) -> String {
        match &self.metadata.name {
            Some(n) => format!("{n}[{k}]"),
            None => format!("basis {k}"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: DataFile = serde_json::from_str(text).map_err(|e| CliError::Schema {
            field: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        file.check()?;
        Ok(file)
    }

    fn check(&self) -> Result<(), CliError> {
        let bad = |field: String, message: String| Err(CliError::Schema { field, message });
        if self.schema_version != SCHEMA_VERSION {
            return bad(
                "schema_version".into(),
                format!("unsupported version {:?}, expected {SCHEMA_VERSION:?}", self.schema_version),
            );
        }
        if ![2, 3, 6].contains(&self.dim) {
            return bad("dim".into(), format!("dimension {} is not 2, 3 or 6", self.dim));
        }
        let finite = |e: &Entry| e[0].is_finite() && e[1].is_finite();
        for (k, b) in self.bases.iter().enumerate() {
            if b.len() != self.dim {
                return bad(format!("bases[{k}]"), format!("{} columns, expected {}", b.len(), self.dim));
            }
            for (c, col) in b.iter().enumerate() {
                if col.len() != self.dim {
                    return bad(format!("bases[{k}][{c}]"), format!("{} entries, expected {}", col.len(), self.dim));
                }
                if let Some(i) = col.iter().position(|e| !finite(e)) {
                    return bad(format!("bases[{k}][{c}][{i}]"), "entry is not finite".into());
                }
            }
        }
        for (k, s) in self.states.iter().enumerate() {
            if s.len() != self.dim {
                return bad(format!("states[{k}]"), format!("{} entries, expected {}", s.len(), self.dim));
            }
            if let Some(i) = s.iter().position(|e| !finite(e)) {
                return bad(format!("states[{k}][{i}]"), "entry is not finite".into());
            }
            let norm = to_state(s).norm();
            if (norm - 1.0).abs() > NORM_TOL {
                return bad(format!("states[{k}]"), format!("norm {norm} differs from 1"));
            }
        }
        for (k, l) in self.metadata.labels.iter().enumerate() {
            if k >= self.bases.len() || (!l.is_empty() && l.len() != self.dim) {
                return bad(format!("metadata.labels[{k}]"), "labels do not match the bases".into());
            }
        }
        if let Some(e) = &self.metadata.exact {
            self.check_exact(e)?;
        }
        Ok(())
    }

    fn check_exact(&self, e: &ExactData) -> Result<(), CliError> {
        let bad = |field: String, message: String| Err(CliError::Schema { field, message });
        let agree = |field: String, x: &ExactEntry, f: &Entry| -> Result<(), CliError> {
            let Some(v) = Cyclotomic::from_parts(x.num, x.den) else {
                return bad(field, "zero denominator".into());
            };
            let z = v.to_c64();
            if (z - Complex64::new(f[0], f[1])).norm() > EXACT_AGREEMENT {
                return bad(field, format!("exact value {z} disagrees with float entry {f:?}"));
            }
            Ok(())
        };
        if e.bases.len() != self.bases.len() || e.states.len() != self.states.len() {
            return bad("metadata.exact".into(), "shape differs from the float data".into());
        }
        for (k, (eb, fb)) in e.bases.iter().zip(&self.bases).enumerate() {
            for (c, (ec, fc)) in eb.iter().zip(fb).enumerate() {
                if ec.len() != fc.len() || eb.len() != fb.len() {
                    return bad(format!("metadata.exact.bases[{k}][{c}]"), "shape differs from the float data".into());
                }
                for (i, (x, f)) in ec.iter().zip(fc).enumerate() {
                    agree(format!("metadata.exact.bases[{k}][{c}][{i}]"), x, f)?;
                }
            }
        }
        for (k, (es, fs)) in e.states.iter().zip(&self.states).enumerate() {
            if es.len() != fs.len() {
                return bad(format!("metadata.exact.states[{k}]"), "shape differs from the float data".into());
            }
            for (i, (x, f)) in es.iter().zip(fs).enumerate() {
                agree(format!("metadata.exact.states[{k}][{i}]"), x, f)?;
            }
        }
        Ok(())
    }
}

fn to_state(entries: &[Entry]) -> StateVector {
    StateVector::new(entries.iter().map(|e| Complex64::new(e[0], e[1])).collect()).expect("dimension checked")
}

pub fn import(path: &Path) -> Result<DataFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    DataFile::parse(&text).map_err(|e| match e {
        CliError::Schema { field, message } => CliError::Schema {
            field: format!("{}: {field}", path.display()),
            message,
        },
        other => other,
    })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
