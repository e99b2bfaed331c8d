//! Hamiltonian JSON files and deterministic CSV output.
//!
//! Pauli strings in files put qubit 0 first: `"XIZ"` is `X₀Z₂`.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonians::{Geometry, Group, GroupedHamiltonian};
use crate::pauli::{parse_term, PauliSum, PauliTerm};

/// Schema tag embedded in every JSON document the CLI writes.
pub const SCHEMA_VERSION: &str = "trotter/1";

/// Version field of Hamiltonian files.
pub const HAMILTONIAN_FORMAT: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub coeff: [f64; 2],
    pub pauli: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub label: String,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianFile {
    pub version: u32,
    pub n: usize,
    pub groups: Vec<GroupRecord>,
    pub geometry: Option<Geometry>,
    pub fields: Option<Vec<f64>>,
}

impl HamiltonianFile {
    pub fn from_hamiltonian(h: &GroupedHamiltonian) -> Self {
        let groups = h
            .groups
            .iter()
            .map(|g| GroupRecord {
                label: g.label.clone(),
                terms: g.op.terms().map(|t| TermRecord { coeff: [t.coeff.re, t.coeff.im], pauli: t.letters() }).collect(),
            })
            .collect();
        HamiltonianFile {
            version: HAMILTONIAN_FORMAT,
            n: h.n,
            groups,
            geometry: h.geometry.clone(),
            fields: h.fields.clone(),
        }
    }

    pub fn to_hamiltonian(&self) -> Result<GroupedHamiltonian> {
        if self.version != HAMILTONIAN_FORMAT {
            return Err(Error::Input(format!("unsupported Hamiltonian format version {}", self.version)));
        }
        let mut groups = Vec::with_capacity(self.groups.len());
        for g in &self.groups {
            let mut terms = Vec::with_capacity(g.terms.len());
            for t in &g.terms {
                let parsed = parse_term(&t.pauli)?;
                if parsed.n != self.n {
                    return Err(Error::Input(format!("string {:?} has {} letters, expected {}", t.pauli, parsed.n, self.n)));
                }
                terms.push(PauliTerm { coeff: C64::new(t.coeff[0], t.coeff[1]), ..parsed });
            }
            groups.push((g.label.clone(), PauliSum::from_terms(self.n, terms)?));
        }
        let mut h = GroupedHamiltonian::new(self.n, groups)?;
        if let Some(op) = h.groups.iter().map(|g: &Group| &g.op).find(|op| !op.is_hermitian(1e-12)) {
            return Err(Error::Input(format!("group is not Hermitian: {op}")));
        }
        h.geometry = self.geometry.clone();
        h.fields = self.fields.clone();
        Ok(h)
    }
}

pub fn hamiltonian_to_json(h: &GroupedHamiltonian) -> String {
    serde_json::to_string_pretty(&HamiltonianFile::from_hamiltonian(h)).expect("plain data serializes")
}

pub fn hamiltonian_from_json(text: &str) -> Result<GroupedHamiltonian> {
    let file: HamiltonianFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("bad Hamiltonian JSON: {e}")))?;
    file.to_hamiltonian()
}

pub fn read_hamiltonian(path: &Path) -> Result<GroupedHamiltonian> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    hamiltonian_from_json(&text)
}

/// 17 significant digits in scientific notation, so every `f64` round-trips.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// A CSV cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(u64),
    Real(f64),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => fmt_f64(*v),
            Cell::Empty => String::new(),
        }
    }
}

/// Fixed-header CSV with `\n` line endings.
#[derive(Clone, Debug, PartialEq)]
pub struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::Dimension(format!("row has {} cells, header has {}", row.len(), self.header.len())));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() == 1 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
