//! Benchmark Hamiltonians, term groupings and norm functionals.
//!
//! Sites are 1-based in labels and physics formulas and 0-based as qubits:
//! site `j` is qubit `j - 1`. Random fields `h_1..h_{n-1}` sit on sites
//! `1..n-1` and are drawn in order from [`XorShift64Star::uniform_pm1`].

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Mask, PauliSum, PauliTerm};
use crate::rng::XorShift64Star;
use crate::sectors::pauli_norm;

/// Lattice descriptor. `alpha = None` means nearest-neighbor couplings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub d: usize,
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub label: String,
    pub op: PauliSum,
}

/// `H = Σ_γ H_γ` with optional lattice metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedHamiltonian {
    pub n: usize,
    pub groups: Vec<Group>,
    pub geometry: Option<Geometry>,
    pub fields: Option<Vec<f64>>,
}

impl GroupedHamiltonian {
    pub fn new(n: usize, groups: Vec<(String, PauliSum)>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Input("a Hamiltonian needs at least one group".into()));
        }
        if let Some((_, g)) = groups.iter().find(|(_, g)| g.n() != n) {
            return Err(Error::Dimension(format!("group on {} qubits, expected {n}", g.n())));
        }
        let groups = groups.into_iter().map(|(label, op)| Group { label, op }).collect();
        Ok(GroupedHamiltonian { n, groups, geometry: None, fields: None })
    }

    /// Unlabelled groups, named `H1`, `H2`, ...
    pub fn from_ops(ops: Vec<PauliSum>) -> Result<Self> {
        let n = ops.first().map(PauliSum::n).ok_or_else(|| Error::Input("no groups".into()))?;
        Self::new(n, ops.into_iter().enumerate().map(|(i, op)| (format!("H{}", i + 1), op)).collect())
    }

    pub fn gamma(&self) -> usize {
        self.groups.len()
    }

    pub fn ops(&self) -> Vec<&PauliSum> {
        self.groups.iter().map(|g| &g.op).collect()
    }

    pub fn total(&self) -> PauliSum {
        PauliSum::sum(self.n, self.ops()).expect("groups share n")
    }

    /// Every elementary Pauli term of the total operator.
    pub fn elementary_terms(&self) -> Vec<PauliTerm> {
        self.total().terms().collect()
    }

    /// Same groups in a different order: `order[k]` is the old index of the
    /// new group `k`.
    pub fn permuted(&self, order: &[usize]) -> GroupedHamiltonian {
        let groups = order.iter().map(|&i| self.groups[i].clone()).collect();
        GroupedHamiltonian { groups, ..self.clone() }
    }

    /// Spectral norms of the groups.
    pub fn group_norms(&self) -> Result<Vec<f64>> {
        self.groups.iter().map(|g| pauli_norm(&g.op)).collect()
    }
}

fn bond(n: usize, q: usize, r: usize, c: f64, letter: char) -> PauliTerm {
    PauliTerm::from_ops(n, c, &[(q, letter), (r, letter)])
}

fn draw_fields(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = XorShift64Star::new(seed);
    (0..n - 1).map(|_| rng.uniform_pm1()).collect()
}

/// `Σ_{j=1}^{n-1} (X_jX_{j+1} + Y_jY_{j+1} + Z_jZ_{j+1} + h_j Z_j)` with one
/// group per elementary term.
pub fn heisenberg_chain(n: usize, seed: u64) -> Result<GroupedHamiltonian> {
    if n < 2 {
        return Err(Error::Input(format!("chain needs n >= 2, got {n}")));
    }
    heisenberg_chain_with_fields(n, &draw_fields(n, seed))
}

/// [`heisenberg_chain`] with explicit fields `h_1..h_{n-1}`.
pub fn heisenberg_chain_with_fields(n: usize, fields: &[f64]) -> Result<GroupedHamiltonian> {
    if n < 2 || fields.len() != n - 1 {
        return Err(Error::Input(format!("chain of {n} sites needs {} fields", n.saturating_sub(1))));
    }
    let mut terms = Vec::new();
    for q in 0..n - 1 {
        for l in ['X', 'Y', 'Z'] {
            terms.push(bond(n, q, q + 1, 1.0, l));
        }
        terms.push(PauliTerm::from_ops(n, fields[q], &[(q, 'Z')]));
    }
    let mut h = per_term(n, terms);
    h.geometry = Some(Geometry { d: 1, alpha: None });
    h.fields = Some(fields.to_vec());
    Ok(h)
}

/// `Σ_{j<k} |j-k|^{-α}(XX + YY + ZZ) + Σ_{j=1}^{n-1} h_j Z_j`, one group per
/// elementary term.
pub fn power_law_heisenberg(n: usize, alpha: f64, seed: u64) -> Result<GroupedHamiltonian> {
    if n < 2 {
        return Err(Error::Input(format!("chain needs n >= 2, got {n}")));
    }
    if !(alpha >= 0.0) {
        return Err(Error::Input(format!("alpha must be nonnegative, got {alpha}")));
    }
    power_law_heisenberg_with_fields(n, alpha, &draw_fields(n, seed))
}

pub fn power_law_heisenberg_with_fields(n: usize, alpha: f64, fields: &[f64]) -> Result<GroupedHamiltonian> {
    if n < 2 || fields.len() != n - 1 {
        return Err(Error::Input(format!("chain of {n} sites needs {} fields", n.saturating_sub(1))));
    }
    let mut terms = Vec::new();
    for q in 0..n {
        for r in q + 1..n {
            let c = ((r - q) as f64).powf(-alpha);
            for l in ['X', 'Y', 'Z'] {
                terms.push(bond(n, q, r, c, l));
            }
        }
    }
    for (q, &h) in fields.iter().enumerate() {
        terms.push(PauliTerm::from_ops(n, h, &[(q, 'Z')]));
    }
    let mut h = per_term(n, terms);
    h.geometry = Some(Geometry { d: 1, alpha: Some(alpha) });
    h.fields = Some(fields.to_vec());
    Ok(h)
}

/// Transverse-field Ising parts `A = Σ j_uv Z_u Z_v`, `B = Σ h_u X_u`
/// (0-based qubits).
pub fn tfim(
    n: usize,
    couplings: &BTreeMap<(usize, usize), f64>,
    fields: &BTreeMap<usize, f64>,
) -> Result<(PauliSum, PauliSum)> {
    let mut a = Vec::new();
    for (&(u, v), &j) in couplings {
        if j < 0.0 || u == v || u >= n || v >= n {
            return Err(Error::Input(format!("bad coupling j[{u},{v}] = {j}")));
        }
        a.push(bond(n, u, v, j, 'Z'));
    }
    let mut b = Vec::new();
    for (&u, &h) in fields {
        if h < 0.0 || u >= n {
            return Err(Error::Input(format!("bad field h[{u}] = {h}")));
        }
        b.push(PauliTerm::from_ops(n, h, &[(u, 'X')]));
    }
    Ok((PauliSum::from_terms(n, a)?, PauliSum::from_terms(n, b)?))
}

/// Uniform TFIM on an open chain: `j` on every bond, `h` on every site.
pub fn tfim_chain(n: usize, j: f64, h: f64) -> Result<(PauliSum, PauliSum)> {
    let couplings = (0..n.saturating_sub(1)).map(|u| ((u, u + 1), j)).collect();
    let fields = (0..n).map(|u| (u, h)).collect();
    tfim(n, &couplings, &fields)
}

fn per_term(n: usize, terms: Vec<PauliTerm>) -> GroupedHamiltonian {
    let groups = terms
        .into_iter()
        .map(|t| Group { label: term_label(&t), op: PauliSum::from_term(t) })
        .collect();
    GroupedHamiltonian { n, groups, geometry: None, fields: None }
}

/// Label such as `XX(1,2)` or `Z(3)` with 1-based sites.
pub fn term_label(t: &PauliTerm) -> String {
    let sites: Vec<usize> = t.support().iter().collect();
    let letters: String = sites.iter().map(|&q| t.letter(q)).collect();
    let idx: Vec<String> = sites.iter().map(|q| (q + 1).to_string()).collect();
    if sites.is_empty() {
        "I".to_string()
    } else {
        format!("{letters}({})", idx.join(","))
    }
}

/// How [`group_terms`] partitions the elementary terms.
#[derive(Clone, Debug, PartialEq)]
pub enum Grouping {
    /// `A` = bonds `(2j-1, 2j)` plus fields on odd sites, `B` = the rest.
    EvenOdd,
    /// `H1` = all XX, `H2` = all YY, `H3` = all ZZ and Z fields.
    XYZ,
    /// One group per elementary Pauli term.
    PerTerm,
    /// `assignment[k]` is the group of the `k`-th elementary term (in the
    /// sorted order of [`GroupedHamiltonian::elementary_terms`]).
    Custom { labels: Vec<String>, assignment: Vec<usize> },
}

impl std::str::FromStr for Grouping {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "even-odd" => Ok(Grouping::EvenOdd),
            "x-y-z" | "xyz" => Ok(Grouping::XYZ),
            "per-term" => Ok(Grouping::PerTerm),
            _ => Err(Error::Input(format!("unknown grouping {s:?}"))),
        }
    }
}

/// Regroups all elementary terms of `h`.
pub fn group_terms(h: &GroupedHamiltonian, strategy: &Grouping) -> Result<GroupedHamiltonian> {
    let n = h.n;
    let terms = h.elementary_terms();
    let (labels, assign): (Vec<String>, Vec<usize>) = match strategy {
        Grouping::PerTerm => {
            let mut out = per_term(n, terms);
            out.geometry = h.geometry.clone();
            out.fields = h.fields.clone();
            return Ok(out);
        }
        Grouping::EvenOdd => {
            match &h.geometry {
                Some(g) if g.d == 1 => {}
                _ => return Err(Error::Input("even-odd grouping needs a 1-D chain".into())),
            }
            let mut a = Vec::with_capacity(terms.len());
            for t in &terms {
                let sites: Vec<usize> = t.support().iter().collect();
                let first = match sites.as_slice() {
                    [q] => *q,
                    [q, r] if r - q == 1 => *q,
                    _ => return Err(Error::Input(format!("term {} is not nearest-neighbor", term_label(t)))),
                };
                // Qubit q is site q+1: odd sites (even q) go to A.
                a.push(first % 2);
            }
            (vec!["A".into(), "B".into()], a)
        }
        Grouping::XYZ => {
            let mut a = Vec::with_capacity(terms.len());
            for t in &terms {
                let letters: Vec<char> = t.support().iter().map(|q| t.letter(q)).collect();
                let g = match letters.as_slice() {
                    ['X', 'X'] => 0,
                    ['Y', 'Y'] => 1,
                    ['Z', 'Z'] | ['Z'] => 2,
                    _ => return Err(Error::Input(format!("term {} does not fit X-Y-Z grouping", term_label(t)))),
                };
                a.push(g);
            }
            (vec!["H1".into(), "H2".into(), "H3".into()], a)
        }
        Grouping::Custom { labels, assignment } => {
            if assignment.len() != terms.len() || assignment.iter().any(|&g| g >= labels.len()) {
                return Err(Error::Input("custom grouping does not match the term list".into()));
            }
            (labels.clone(), assignment.clone())
        }
    };
    let mut buckets: Vec<Vec<PauliTerm>> = vec![Vec::new(); labels.len()];
    for (t, g) in terms.into_iter().zip(assign) {
        buckets[g].push(t);
    }
    let groups = labels
        .into_iter()
        .zip(buckets)
        .map(|(label, ts)| Ok(Group { label, op: PauliSum::from_terms(n, ts)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupedHamiltonian { n, groups, geometry: h.geometry.clone(), fields: h.fields.clone() })
}

/// Splits a group into local terms: strings with the same support are
/// merged, and a string whose support lies strictly inside another's joins
/// the nearest such superset (same first site preferred, then the narrowest).
/// A Heisenberg bond plus its field is one local term.
pub fn local_terms(op: &PauliSum) -> Vec<PauliSum> {
    let mut by_support: BTreeMap<Mask, Vec<PauliTerm>> = BTreeMap::new();
    for t in op.terms() {
        by_support.entry(t.support()).or_default().push(t);
    }
    let supports: Vec<Mask> = by_support.keys().copied().collect();
    let is_strict_subset = |a: Mask, b: Mask| a != b && (a & b) == a;
    let low = |m: Mask| m.iter().next().unwrap_or(0);
    let mut maximal: Vec<Mask> =
        supports.iter().copied().filter(|&s| !supports.iter().any(|&o| is_strict_subset(s, o))).collect();
    maximal.sort_by_key(|&m| (low(m), m.width()));
    let mut parts: BTreeMap<Mask, Vec<PauliTerm>> = maximal.iter().map(|&m| (m, Vec::new())).collect();
    for (s, ts) in by_support {
        let home = if parts.contains_key(&s) {
            s
        } else {
            *maximal
                .iter()
                .filter(|&&m| is_strict_subset(s, m))
                .min_by_key(|&&m| (low(m).abs_diff(low(s)), m.width(), low(m)))
                .expect("a non-maximal support has a superset")
        };
        parts.get_mut(&home).unwrap().extend(ts);
    }
    let mut out: Vec<(Mask, PauliSum)> = parts
        .into_iter()
        .map(|(m, ts)| (m, PauliSum::from_terms(op.n(), ts).expect("same n")))
        .collect();
    out.sort_by_key(|(m, _)| (low(*m), m.width()));
    out.into_iter().map(|(_, s)| s).collect()
}

/// Drops every two-site term whose sites are more than `ell` apart. Returns
/// the truncated Hamiltonian and the total |coeff| removed.
pub fn truncate_power_law(h: &GroupedHamiltonian, ell: usize) -> Result<(GroupedHamiltonian, f64)> {
    if h.geometry.is_none() {
        return Err(Error::Input("truncation needs lattice geometry".into()));
    }
    if ell < 1 {
        return Err(Error::Input("cutoff must be at least 1".into()));
    }
    let mut removed = 0.0;
    let mut out = h.clone();
    for g in &mut out.groups {
        g.op = g.op.filter(|t| {
            let sites: Vec<usize> = t.support().iter().collect();
            let keep = sites.len() < 2 || sites[sites.len() - 1] - sites[0] <= ell;
            if !keep {
                removed += t.coeff.norm();
            }
            keep
        });
    }
    Ok((out, removed))
}

/// Term norms `‖H_{j_1..j_k}‖` keyed by sorted site tuples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LatticeTermTensor {
    pub k: usize,
    pub entries: BTreeMap<Vec<usize>, f64>,
}

impl LatticeTermTensor {
    pub fn new(k: usize) -> Self {
        LatticeTermTensor { k, entries: BTreeMap::new() }
    }

    /// Adds `value` at the sorted tuple `sites`.
    pub fn insert(&mut self, mut sites: Vec<usize>, value: f64) -> Result<()> {
        if sites.len() != self.k || value < 0.0 {
            return Err(Error::Input(format!("bad tensor entry {sites:?} = {value}")));
        }
        sites.sort_unstable();
        *self.entries.entry(sites).or_insert(0.0) += value;
        Ok(())
    }

    /// Local terms of `h` keyed by support, padded by repeating the last
    /// site when the support is smaller than `k`; values are exact spectral
    /// norms of the summed strings on that support.
    pub fn from_hamiltonian(h: &GroupedHamiltonian, k: usize) -> Result<Self> {
        let mut by_support: BTreeMap<Vec<usize>, Vec<PauliTerm>> = BTreeMap::new();
        for t in h.elementary_terms() {
            let sites: Vec<usize> = t.support().iter().collect();
            if sites.is_empty() {
                continue;
            }
            if sites.len() > k {
                return Err(Error::Input(format!("term {} is not {k}-local", term_label(&t))));
            }
            by_support.entry(sites).or_default().push(t);
        }
        let mut out = Self::new(k);
        for (mut sites, ts) in by_support {
            let norm = pauli_norm(&PauliSum::from_terms(h.n, ts)?)?;
            while sites.len() < k {
                sites.push(*sites.last().unwrap());
            }
            out.insert(sites, norm)?;
        }
        Ok(out)
    }

    /// `‖H‖₁ = Σ` of all entries.
    pub fn one_norm(&self) -> f64 {
        self.entries.values().sum()
    }

    /// `|||H|||₁`: the largest sum of entries sharing a fixed index in a
    /// fixed slot.
    pub fn induced_one_norm(&self) -> f64 {
        let mut sums: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (idx, &v) in &self.entries {
            for (slot, &j) in idx.iter().enumerate() {
                *sums.entry((slot, j)).or_insert(0.0) += v;
            }
        }
        sums.values().copied().fold(0.0, f64::max)
    }
}

/// `Σ ‖j‖₂^{-α}` over the nonzero points of `{-n..n}^d`, restricted to
/// `‖j‖₂ ≥ x` when `tail_from = Some(x)`.
pub fn power_law_lattice_sum(n: usize, d: usize, alpha: f64, tail_from: Option<f64>) -> Result<f64> {
    if n < 1 || !(1..=3).contains(&d) {
        return Err(Error::Input(format!("lattice sum needs n >= 1 and d in 1..=3, got n={n}, d={d}")));
    }
    let n = n as i64;
    let x2 = tail_from.map(|x| x * x).unwrap_or(0.0);
    let term = |r2: f64| if r2 >= x2 { r2.powf(-alpha / 2.0) } else { 0.0 };
    let mut s = 0.0;
    match d {
        1 => {
            // Sum small terms first.
            for j in (1..=n).rev() {
                s += 2.0 * term((j * j) as f64);
            }
        }
        2 => {
            for a in -n..=n {
                for b in -n..=n {
                    if a != 0 || b != 0 {
                        s += term((a * a + b * b) as f64);
                    }
                }
            }
        }
        _ => {
            for a in -n..=n {
                for b in -n..=n {
                    for c in -n..=n {
                        if a != 0 || b != 0 || c != 0 {
                            s += term((a * a + b * b + c * c) as f64);
                        }
                    }
                }
            }
        }
    }
    Ok(s)
}

/// Coefficient of a Pauli string in a sum, as a real number (test helper for
/// coupling lookups).
pub fn real_coeff(s: &PauliSum, t: &PauliTerm) -> f64 {
    let c: C64 = s.coeff(t.x, t.z);
    c.re
}
