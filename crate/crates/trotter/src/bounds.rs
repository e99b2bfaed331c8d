//! Trotter error bounds: 1-norm scaling, commutator scaling, the tight
//! first- and second-order bounds, the fourth-order coefficient tables and
//! counting estimates for k-local Hamiltonians.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::dense;
use crate::error::{Error, Result};
use crate::formula::{search_trotter_number, TrotterSearch, DEFAULT_R_CAP};
use crate::hamiltonians::{local_terms, GroupedHamiltonian, LatticeTermTensor};
use crate::pauli::{commutator, nested_commutator, PauliSum};
use crate::sectors::{pauli_norm, BlockOp, CompactOp, Sectors};

/// How spectral norms of nested commutators are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormMode {
    /// Exact norm of the full operator.
    DenseExact,
    /// Sum of Pauli coefficient magnitudes.
    #[serde(rename = "coeff-1norm")]
    Coeff1Norm,
    /// Innermost operand split into local terms, each nested commutator
    /// normed exactly on its own support, contributions summed.
    #[serde(rename = "cluster-exact-innermost-triangle")]
    Cluster,
}

impl std::str::FromStr for NormMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense-exact" | "dense" => Ok(NormMode::DenseExact),
            "coeff-1norm" | "coeff" => Ok(NormMode::Coeff1Norm),
            "cluster-exact-innermost-triangle" | "cluster" => Ok(NormMode::Cluster),
            _ => Err(Error::Input(format!("unknown norm mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for NormMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormMode::DenseExact => "dense-exact",
            NormMode::Coeff1Norm => "coeff-1norm",
            NormMode::Cluster => "cluster-exact-innermost-triangle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundTerm {
    pub label: String,
    /// Includes the power of `t`.
    pub coefficient: f64,
    pub norm: f64,
}

/// `value = Σ coefficient·norm` over `per_term`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub value: f64,
    pub per_term: Vec<BoundTerm>,
    pub norm_mode: NormMode,
    pub order: usize,
    pub t: f64,
}

impl BoundReport {
    fn from_terms(per_term: Vec<BoundTerm>, norm_mode: NormMode, order: usize, t: f64) -> Self {
        let value = per_term.iter().map(|b| b.coefficient * b.norm).sum();
        BoundReport { value, per_term, norm_mode, order, t }
    }

    /// `value / t^{p+1}`; the bound is homogeneous in `t`. Needs `t > 0`.
    pub fn prefactor(&self) -> f64 {
        self.value / self.t.powi(self.order as i32 + 1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn check_t(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Input(format!("t must be finite and nonnegative, got {t}")));
    }
    Ok(())
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Stage count of the standard formula of order `p`: 1 for Lie-Trotter and
/// `2·5^{k-1}` for Suzuki order `2k`.
pub fn standard_upsilon(p: usize) -> Result<usize> {
    match p {
        1 => Ok(1),
        2 | 4 | 6 | 8 => Ok(2 * 5usize.pow(p as u32 / 2 - 1)),
        _ => Err(Error::Input(format!("no standard formula of order {p}"))),
    }
}

/// `t^{p+1}/(p+1)!·[(ΥΣ)^{p+1}e^{tΥΣ} + Σ^{p+1}e^{tΣ}]` with `Σ = Σ_γ ‖H_γ‖`;
/// the exponentials are 1 for anti-Hermitian generators.
pub fn one_norm_bound(group_norms: &[f64], upsilon: usize, p: usize, t: f64, anti_hermitian: bool) -> Result<f64> {
    check_t(t)?;
    if group_norms.iter().any(|&x| !(x >= 0.0)) {
        return Err(Error::Input("group norms must be nonnegative".into()));
    }
    if upsilon < 1 || p < 1 {
        return Err(Error::Input("need Υ ≥ 1 and p ≥ 1".into()));
    }
    let s: f64 = group_norms.iter().sum();
    let us = upsilon as f64 * s;
    let q = p as i32 + 1;
    let (e1, e2) = if anti_hermitian { (1.0, 1.0) } else { ((t * us).exp(), (t * s).exp()) };
    Ok(t.powi(q) / factorial(p + 1) * (us.powi(q) * e1 + s.powi(q) * e2))
}

/// Smallest `r` with `r·one_norm_bound(t/r) ≤ ε` for anti-Hermitian
/// generators and the standard formula of order `p`.
pub fn one_norm_trotter_number(group_norms: &[f64], p: usize, t: f64, eps: f64) -> Result<TrotterSearch> {
    let upsilon = standard_upsilon(p)?;
    one_norm_bound(group_norms, upsilon, p, t, true)?;
    search_trotter_number(
        |r| Ok(r as f64 * one_norm_bound(group_norms, upsilon, p, t / r as f64, true)?),
        eps,
        DEFAULT_R_CAP,
    )
}

/// Smallest `r` with `r·bound(t/r) ≤ ε`.
pub fn bound_trotter_number(mut bound: impl FnMut(f64) -> Result<f64>, t: f64, eps: f64) -> Result<TrotterSearch> {
    check_t(t)?;
    search_trotter_number(|r| Ok(r as f64 * bound(t / r as f64)?), eps, DEFAULT_R_CAP)
}

/// [`bound_trotter_number`] for a bound `C·τ^{p+1}`.
pub fn homogeneous_trotter_number(prefactor: f64, p: usize, t: f64, eps: f64) -> Result<TrotterSearch> {
    if !(prefactor >= 0.0) {
        return Err(Error::Input(format!("prefactor must be nonnegative, got {prefactor}")));
    }
    bound_trotter_number(|tau| Ok(prefactor * tau.powi(p as i32 + 1)), t, eps)
}

/// `ceil(prefactor·α̃^{1/p}·t^{1+1/p}/ε^{1/p})`, at least 1.
pub fn comm_trotter_number(alpha_tilde: f64, p: usize, t: f64, eps: f64, prefactor: f64) -> Result<u64> {
    if !(alpha_tilde >= 0.0) || p < 1 || !(t >= 0.0) || !(eps > 0.0) || !(prefactor > 0.0) {
        return Err(Error::Input("comm_trotter_number needs α̃ ≥ 0, p ≥ 1, t ≥ 0, ε > 0".into()));
    }
    let q = 1.0 / p as f64;
    let r = prefactor * alpha_tilde.powf(q) * t.powf(1.0 + q) / eps.powf(q);
    // Guard against 1600.0000000000002 style round-up.
    let r = (r * (1.0 - 1e-14)).ceil();
    Ok((r as u64).max(1))
}

/// Norms of nested commutators of a fixed operator list, with memoized
/// inner commutators.
pub struct CommutatorNorms {
    ops: Vec<PauliSum>,
    mode: NormMode,
    dense: Option<(Sectors, Vec<BlockOp>)>,
    dense_memo: FxHashMap<Vec<usize>, BlockOp>,
    symbolic_memo: FxHashMap<Vec<usize>, PauliSum>,
    locals: FxHashMap<usize, Vec<PauliSum>>,
    local_memo: FxHashMap<(usize, usize, Vec<usize>), PauliSum>,
}

impl CommutatorNorms {
    pub fn new(ops: Vec<PauliSum>, mode: NormMode) -> Result<Self> {
        let n = ops.first().map(PauliSum::n).ok_or_else(|| Error::Input("no operators".into()))?;
        if ops.iter().any(|o| o.n() != n) {
            return Err(Error::Dimension("operators differ in qubit count".into()));
        }
        let dense = if mode == NormMode::DenseExact {
            dense::check_cap(n)?;
            let compact: Vec<CompactOp> = ops.iter().map(CompactOp::full).collect::<Result<_>>()?;
            let refs: Vec<&CompactOp> = compact.iter().collect();
            let sectors = Sectors::of(n, &refs);
            let blocks = compact.iter().map(|c| sectors.restrict(c)).collect::<Result<Vec<_>>>()?;
            Some((sectors, blocks))
        } else {
            None
        };
        Ok(CommutatorNorms {
            ops,
            mode,
            dense,
            dense_memo: FxHashMap::default(),
            symbolic_memo: FxHashMap::default(),
            locals: FxHashMap::default(),
            local_memo: FxHashMap::default(),
        })
    }

    pub fn from_hamiltonian(h: &GroupedHamiltonian, mode: NormMode) -> Result<Self> {
        Self::new(h.ops().into_iter().cloned().collect(), mode)
    }

    pub fn mode(&self) -> NormMode {
        self.mode
    }

    /// `‖[O_{i_1},[O_{i_2},…[O_{i_{m-1}},O_{i_m}]]]‖` for `idx = [i_1..i_m]`.
    pub fn norm(&mut self, idx: &[usize]) -> Result<f64> {
        if idx.len() < 2 {
            return Err(Error::Input("a nested commutator needs at least two operators".into()));
        }
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.ops.len()) {
            return Err(Error::Input(format!("operator index {bad} out of range")));
        }
        // Innermost first.
        let rev: Vec<usize> = idx.iter().rev().copied().collect();
        match self.mode {
            NormMode::DenseExact => {
                let b = self.dense_nested(&rev, true);
                // m brackets of Hermitian operators: i^m times it is Hermitian.
                let m = (rev.len() - 1) as u32;
                Ok(b.scale(C64::new(0.0, 1.0).powu(m)).hermitian_norm())
            }
            NormMode::Coeff1Norm => Ok(self.symbolic_nested(&rev, true)?.coefficient_one_norm()),
            NormMode::Cluster => {
                let inner = rev[0];
                if !self.locals.contains_key(&inner) {
                    self.locals.insert(inner, local_terms(&self.ops[inner]));
                }
                let count = self.locals[&inner].len();
                let mut total = 0.0;
                for li in 0..count {
                    let c = self.local_nested(inner, li, &rev[1..], true)?;
                    if !c.is_empty() {
                        total += pauli_norm(&c)?;
                    }
                }
                Ok(total)
            }
        }
    }

    fn dense_nested(&mut self, rev: &[usize], top: bool) -> BlockOp {
        let (_, blocks) = self.dense.as_ref().expect("dense mode");
        if rev.len() == 1 {
            return blocks[rev[0]].clone();
        }
        if let Some(b) = self.dense_memo.get(rev) {
            return b.clone();
        }
        let inner = self.dense_nested(&rev[..rev.len() - 1], false);
        let (_, blocks) = self.dense.as_ref().expect("dense mode");
        let out = blocks[rev[rev.len() - 1]].commutator(&inner);
        if !top {
            self.dense_memo.insert(rev.to_vec(), out.clone());
        }
        out
    }

    fn symbolic_nested(&mut self, rev: &[usize], top: bool) -> Result<PauliSum> {
        if rev.len() == 1 {
            return Ok(self.ops[rev[0]].clone());
        }
        if let Some(s) = self.symbolic_memo.get(rev) {
            return Ok(s.clone());
        }
        let inner = self.symbolic_nested(&rev[..rev.len() - 1], false)?;
        let out = commutator(&self.ops[rev[rev.len() - 1]], &inner)?;
        if !top {
            self.symbolic_memo.insert(rev.to_vec(), out.clone());
        }
        Ok(out)
    }

    fn local_nested(&mut self, inner: usize, li: usize, outer: &[usize], top: bool) -> Result<PauliSum> {
        if outer.is_empty() {
            return Ok(self.locals[&inner][li].clone());
        }
        let key = (inner, li, outer.to_vec());
        if let Some(s) = self.local_memo.get(&key) {
            return Ok(s.clone());
        }
        let below = self.local_nested(inner, li, &outer[..outer.len() - 1], false)?;
        let out = if below.is_empty() {
            below
        } else {
            // Only strings touching the support can fail to commute.
            let sup = below.support_mask();
            let near = self.ops[outer[outer.len() - 1]].filter(|t| !(t.support() & sup).is_empty());
            commutator(&near, &below)?
        };
        if !top {
            self.local_memo.insert(key, out.clone());
        }
        Ok(out)
    }
}

/// Label `[O_a,[O_b,O_c]]` from names, outermost first.
pub fn commutator_label(names: &[&str]) -> String {
    let m = names.len();
    let mut s = String::new();
    for n in &names[..m - 1] {
        s.push('[');
        s.push_str(n);
        s.push(',');
    }
    s.push_str(names[m - 1]);
    for _ in 0..m - 1 {
        s.push(']');
    }
    // Innermost pair is written [O_{m-1},O_m] already by the loop.
    s
}

/// `α_comm = Σ_{q_1+…+q_s=p} multinomial(p; q)·‖ad_{A_s}^{q_s}⋯ad_{A_1}^{q_1}(B)‖`
/// for generators `A_i = -i·a_i`; the phase does not affect the norms.
pub fn alpha_comm_conjugation(a_list: &[PauliSum], b: &PauliSum, p: usize, mode: NormMode) -> Result<f64> {
    if p < 1 {
        return Err(Error::Input("p must be at least 1".into()));
    }
    let mut total = 0.0;
    for q in compositions(p, a_list.len()) {
        let c = ad_chain(a_list, b, &q)?;
        if c.is_empty() {
            continue;
        }
        let norm = match mode {
            NormMode::Coeff1Norm => c.coefficient_one_norm(),
            _ => pauli_norm(&c)?,
        };
        total += multinomial(p, &q) * norm;
    }
    Ok(total)
}

/// `ad_{a_s}^{q_s}⋯ad_{a_1}^{q_1}(b)` with Hermitian `a_i` (no `-i` phases).
fn ad_chain(a_list: &[PauliSum], b: &PauliSum, q: &[usize]) -> Result<PauliSum> {
    let mut c = b.clone();
    for (a, &k) in a_list.iter().zip(q) {
        for _ in 0..k {
            if c.is_empty() {
                return Ok(c);
            }
            c = commutator(a, &c)?;
        }
    }
    Ok(c)
}

/// Weak compositions of `p` into `s` parts.
pub fn compositions(p: usize, s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return if p == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=p {
        for mut rest in compositions(p - first, s - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn multinomial(p: usize, q: &[usize]) -> f64 {
    factorial(p) / q.iter().map(|&k| factorial(k)).product::<f64>()
}

/// `‖𝒞(τ)‖` for the conjugation `e^{τA_s}⋯e^{τA_1}Be^{-τA_1}⋯e^{-τA_s}`,
/// `A_i = -i·a_i`, minus its Taylor part of degree below `p`, together with
/// the bound `α_comm·|τ|^p/p!`.
pub fn conjugation_remainder_check(a_list: &[PauliSum], b: &PauliSum, p: usize, tau: f64) -> Result<(f64, f64)> {
    if p < 1 {
        return Err(Error::Input("p must be at least 1".into()));
    }
    let n = b.n();
    dense::check_cap(n)?;
    let mut conj = b.to_dense()?;
    for a in a_list {
        // e^{τA} = e^{-iτa}.
        let u = a.to_dense()?.expm_i_hermitian(tau)?;
        conj = u.matmul(&conj).matmul(&u.adjoint());
    }
    // Taylor part: Σ_{|q|<p} τ^{|q|}/q! · ad_{A_s}^{q_s}⋯ad_{A_1}^{q_1}(B) with
    // ad_A = -i·ad_a.
    let mut poly = PauliSum::zero(n);
    for deg in 0..p {
        for q in compositions(deg, a_list.len()) {
            let c = ad_chain(a_list, b, &q)?;
            let w = tau.powi(deg as i32) / q.iter().map(|&k| factorial(k)).product::<f64>();
            let phase = C64::new(0.0, -1.0).powu(deg as u32);
            poly = poly.add(&c.scale(phase * w))?;
        }
    }
    let remainder = conj.sub(&poly.to_dense()?).spectral_norm();
    let bound = alpha_comm_conjugation(a_list, b, p, NormMode::DenseExact)? * tau.abs().powi(p as i32) / factorial(p);
    Ok((remainder, bound))
}

/// `‖H_γ‖` per group: exact, as the sum over local terms, or as the
/// coefficient 1-norm.
pub fn group_norms(h: &GroupedHamiltonian, mode: NormMode) -> Result<Vec<f64>> {
    h.groups
        .iter()
        .map(|g| match mode {
            NormMode::DenseExact => pauli_norm(&g.op),
            NormMode::Coeff1Norm => Ok(g.op.coefficient_one_norm()),
            NormMode::Cluster => local_terms(&g.op).iter().map(pauli_norm).sum(),
        })
        .collect()
}

/// Default cap on commutator evaluations in [`alpha_tilde`].
pub const ALPHA_TILDE_CAP: usize = 1_000_000;

/// `α̃ = Σ_{γ_1..γ_{p+1}} ‖[H_{γ_{p+1}},⋯[H_{γ_2},H_{γ_1}]]‖`, reported at
/// `t = 1` with unit coefficients.
pub fn alpha_tilde(h: &GroupedHamiltonian, p: usize, mode: NormMode) -> Result<BoundReport> {
    let gamma = h.gamma();
    let count = (gamma as f64).powi(p as i32 + 1);
    if p < 1 || count > ALPHA_TILDE_CAP as f64 {
        return Err(Error::Cap(format!("{gamma}^{} nested commutators exceeds the cap", p + 1)));
    }
    let mut eng = CommutatorNorms::from_hamiltonian(h, mode)?;
    let names: Vec<&str> = h.groups.iter().map(|g| g.label.as_str()).collect();
    let mut terms = Vec::new();
    let mut idx = vec![0usize; p + 1];
    loop {
        // idx is outermost first; skip tuples whose two innermost entries
        // coincide, which vanish identically.
        let norm = if idx[p] == idx[p - 1] { 0.0 } else { eng.norm(&idx)? };
        let label = commutator_label(&idx.iter().map(|&i| names[i]).collect::<Vec<_>>());
        terms.push(BoundTerm { label, coefficient: 1.0, norm });
        let mut k = p + 1;
        loop {
            if k == 0 {
                return Ok(BoundReport::from_terms(terms, mode, p, 1.0));
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < gamma {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Tight first-order bound `(t²/2)Σ_{γ_1}‖[Σ_{γ_2>γ_1}H_{γ_2},H_{γ_1}]‖` or the
/// second-order bound with its `t³/12` and `t³/24` sums.
pub fn tight_low_order_bound(h: &GroupedHamiltonian, t: f64, order: usize, mode: NormMode) -> Result<BoundReport> {
    check_t(t)?;
    let gamma = h.gamma();
    // Suffix sums S_γ = Σ_{γ'>γ} H_γ', built once.
    let mut suffix = vec![PauliSum::zero(h.n); gamma];
    for g in (0..gamma.saturating_sub(1)).rev() {
        suffix[g] = suffix[g + 1].add(&h.groups[g + 1].op)?;
    }
    let mut ops: Vec<PauliSum> = h.ops().into_iter().cloned().collect();
    ops.extend(suffix.iter().cloned());
    let mut eng = CommutatorNorms::new(ops, mode)?;
    let name = |g: usize| h.groups[g].label.clone();
    let sname = |g: usize| format!("S{}", g + 1);
    let mut terms = Vec::new();
    match order {
        1 => {
            for g in 0..gamma.saturating_sub(1) {
                let norm = eng.norm(&[gamma + g, g])?;
                let label = format!("[{},{}]", sname(g), name(g));
                terms.push(BoundTerm { label, coefficient: t * t / 2.0, norm });
            }
        }
        2 => {
            for g in 0..gamma.saturating_sub(1) {
                let s = gamma + g;
                let norm = eng.norm(&[s, s, g])?;
                terms.push(BoundTerm {
                    label: format!("[{},[{},{}]]", sname(g), sname(g), name(g)),
                    coefficient: t.powi(3) / 12.0,
                    norm,
                });
                let norm = eng.norm(&[g, g, s])?;
                terms.push(BoundTerm {
                    label: format!("[{},[{},{}]]", name(g), name(g), sname(g)),
                    coefficient: t.powi(3) / 24.0,
                    norm,
                });
            }
        }
        _ => return Err(Error::Input(format!("tight bounds exist for orders 1 and 2, got {order}"))),
    }
    Ok(BoundReport::from_terms(terms, mode, order, t))
}

/// Coefficients of the fourth-order Suzuki bounds.
pub struct FourthOrderCoefficientTable;

/// Two summands `A = H_1`, `B = H_2`: nested commutators, outermost first.
pub const TWO_TERM: [([usize; 5], f64); 8] = [
    ([1, 1, 1, 2, 1], 0.0047),
    ([1, 1, 2, 2, 1], 0.0057),
    ([1, 2, 1, 2, 1], 0.0046),
    ([1, 2, 2, 2, 1], 0.0074),
    ([2, 1, 1, 2, 1], 0.0097),
    ([2, 1, 2, 2, 1], 0.0097),
    ([2, 2, 1, 2, 1], 0.0173),
    ([2, 2, 2, 2, 1], 0.0284),
];

/// Three summands: `c_{i,j,k,l,m}` for `‖[H_i,[H_j,[H_k,[H_l,H_m]]]]‖`; all
/// other index tuples have coefficient zero.
pub const THREE_TERM: [([usize; 5], f64); 81] = [
    ([1, 1, 1, 2, 1], 0.0047),
    ([1, 1, 1, 3, 1], 0.0047),
    ([1, 1, 1, 3, 2], 0.0043),
    ([1, 1, 2, 2, 1], 0.0057),
    ([1, 1, 2, 3, 1], 0.0057),
    ([1, 1, 2, 3, 2], 0.0057),
    ([1, 1, 3, 2, 1], 0.0057),
    ([1, 1, 3, 3, 1], 0.0057),
    ([1, 1, 3, 3, 2], 0.0057),
    ([1, 2, 1, 2, 1], 0.0046),
    ([1, 2, 1, 3, 1], 0.0046),
    ([1, 2, 1, 3, 2], 0.0035),
    ([1, 2, 2, 2, 1], 0.0074),
    ([1, 2, 2, 3, 1], 0.0070),
    ([1, 2, 2, 3, 2], 0.0062),
    ([1, 2, 3, 2, 1], 0.0082),
    ([1, 2, 3, 3, 1], 0.0082),
    ([1, 2, 3, 3, 2], 0.0082),
    ([1, 3, 1, 2, 1], 0.0046),
    ([1, 3, 1, 3, 1], 0.0046),
    ([1, 3, 1, 3, 2], 0.0035),
    ([1, 3, 2, 2, 1], 0.0070),
    ([1, 3, 2, 3, 1], 0.0058),
    ([1, 3, 2, 3, 2], 0.0046),
    ([1, 3, 3, 2, 1], 0.0082),
    ([1, 3, 3, 3, 1], 0.0074),
    ([1, 3, 3, 3, 2], 0.0074),
    ([2, 1, 1, 2, 1], 0.0150),
    ([2, 1, 1, 3, 1], 0.0150),
    ([2, 1, 1, 3, 2], 0.0141),
    ([2, 1, 2, 2, 1], 0.0161),
    ([2, 1, 2, 3, 1], 0.0161),
    ([2, 1, 2, 3, 2], 0.0161),
    ([2, 1, 3, 2, 1], 0.0161),
    ([2, 1, 3, 3, 1], 0.0161),
    ([2, 1, 3, 3, 2], 0.0161),
    ([2, 2, 1, 2, 1], 0.0239),
    ([2, 2, 1, 3, 1], 0.0239),
    ([2, 2, 1, 3, 2], 0.0212),
    ([2, 2, 2, 2, 1], 0.0315),
    ([2, 2, 2, 3, 1], 0.0306),
    ([2, 2, 2, 3, 2], 0.0290),
    ([2, 2, 3, 2, 1], 0.0303),
    ([2, 2, 3, 3, 1], 0.0303),
    ([2, 2, 3, 3, 2], 0.0303),
    ([2, 3, 1, 2, 1], 0.0179),
    ([2, 3, 1, 3, 1], 0.0179),
    ([2, 3, 1, 3, 2], 0.0153),
    ([2, 3, 2, 2, 1], 0.0232),
    ([2, 3, 2, 3, 1], 0.0206),
    ([2, 3, 2, 3, 2], 0.0179),
    ([2, 3, 3, 2, 1], 0.0259),
    ([2, 3, 3, 3, 1], 0.0241),
    ([2, 3, 3, 3, 2], 0.0241),
    ([3, 1, 1, 2, 1], 0.0204),
    ([3, 1, 1, 3, 1], 0.0204),
    ([3, 1, 1, 3, 2], 0.0186),
    ([3, 1, 2, 2, 1], 0.0225),
    ([3, 1, 2, 3, 1], 0.0225),
    ([3, 1, 2, 3, 2], 0.0217),
    ([3, 1, 3, 2, 1], 0.0225),
    ([3, 1, 3, 3, 1], 0.0225),
    ([3, 1, 3, 3, 2], 0.0225),
    ([3, 2, 1, 2, 1], 0.0423),
    ([3, 2, 1, 3, 1], 0.0423),
    ([3, 2, 1, 3, 2], 0.0377),
    ([3, 2, 2, 2, 1], 0.0585),
    ([3, 2, 2, 3, 1], 0.0571),
    ([3, 2, 2, 3, 2], 0.0537),
    ([3, 2, 3, 2, 1], 0.0502),
    ([3, 2, 3, 3, 1], 0.0502),
    ([3, 2, 3, 3, 2], 0.0502),
    ([3, 3, 1, 2, 1], 0.0423),
    ([3, 3, 1, 3, 1], 0.0423),
    ([3, 3, 1, 3, 2], 0.0377),
    ([3, 3, 2, 2, 1], 0.0681),
    ([3, 3, 2, 3, 1], 0.0641),
    ([3, 3, 2, 3, 2], 0.0601),
    ([3, 3, 3, 2, 1], 0.0648),
    ([3, 3, 3, 3, 1], 0.0621),
    ([3, 3, 3, 3, 2], 0.0628),
];

impl FourthOrderCoefficientTable {
    /// Two-summand coefficient for a pattern such as `"BBBBA"` (outermost
    /// first).
    pub fn two_term(pattern: &str) -> Option<f64> {
        let idx: Vec<usize> = pattern
            .chars()
            .map(|c| match c {
                'A' => Some(1),
                'B' => Some(2),
                _ => None,
            })
            .collect::<Option<_>>()?;
        TWO_TERM.iter().find(|(k, _)| k[..] == idx[..]).map(|&(_, c)| c)
    }

    /// `c_{i,j,k,l,m}` (1-based), zero outside the table.
    pub fn three_term(i: usize, j: usize, k: usize, l: usize, m: usize) -> f64 {
        THREE_TERM.iter().find(|(key, _)| *key == [i, j, k, l, m]).map(|&(_, c)| c).unwrap_or(0.0)
    }

    pub fn for_gamma(gamma: usize) -> Result<&'static [([usize; 5], f64)]> {
        match gamma {
            2 => Ok(&TWO_TERM),
            3 => Ok(&THREE_TERM),
            _ => Err(Error::Input(format!("fourth-order tables exist for 2 or 3 summands, got {gamma}"))),
        }
    }
}

/// `t⁵·Σ c·‖nested commutator‖` for the fourth-order Suzuki formula.
pub fn fourth_order_bound(h: &GroupedHamiltonian, t: f64, mode: NormMode) -> Result<BoundReport> {
    check_t(t)?;
    let table = FourthOrderCoefficientTable::for_gamma(h.gamma())?;
    let mut eng = CommutatorNorms::from_hamiltonian(h, mode)?;
    fourth_order_with(&mut eng, h, table, t)
}

fn fourth_order_with(
    eng: &mut CommutatorNorms,
    h: &GroupedHamiltonian,
    table: &[([usize; 5], f64)],
    t: f64,
) -> Result<BoundReport> {
    let t5 = t.powi(5);
    let mut terms = Vec::with_capacity(table.len());
    for (key, c) in table {
        let idx: Vec<usize> = key.iter().map(|k| k - 1).collect();
        let norm = eng.norm(&idx)?;
        let names: Vec<&str> = idx.iter().map(|&i| h.groups[i].label.as_str()).collect();
        terms.push(BoundTerm { label: commutator_label(&names), coefficient: c * t5, norm });
    }
    Ok(BoundReport::from_terms(terms, eng.mode(), 4, t))
}

/// `α̃ ≤ ‖H‖₁·∏_{j=1}^{p} 2k(k+(j-1)(k-1))·|||H|||₁^p`.
pub fn counting_bound_klocal(norms: &LatticeTermTensor, p: usize) -> Result<f64> {
    let outer = vec![norms; p];
    counting_nested_bound(norms, &outer)
}

/// Counting estimate for `‖[H_{o_p},…[H_{o_1},H_inner]]‖` summed over all
/// terms: `‖H_inner‖₁·∏_j 2k(k+(j-1)(k-1))·|||H_{o_j}|||₁`, with `k` the largest
/// locality among the tensors.
pub fn counting_nested_bound(inner: &LatticeTermTensor, outer: &[&LatticeTermTensor]) -> Result<f64> {
    let k = outer.iter().map(|t| t.k).chain([inner.k]).max().unwrap_or(0);
    if k < 1 {
        return Err(Error::Input("locality must be at least 1".into()));
    }
    let kf = k as f64;
    let mut v = inner.one_norm();
    for (j, o) in outer.iter().enumerate() {
        let support = kf + j as f64 * (kf - 1.0);
        v *= 2.0 * kf * support * o.induced_one_norm();
    }
    Ok(v)
}

/// Fourth-order bound with every nested-commutator norm replaced by its
/// counting estimate from per-group term tensors (`k = 2`), at `t = 1`.
pub fn counting_fourth_order_prefactor(h: &GroupedHamiltonian) -> Result<f64> {
    let table = FourthOrderCoefficientTable::for_gamma(h.gamma())?;
    let tensors: Vec<LatticeTermTensor> = h
        .groups
        .iter()
        .map(|g| {
            let single = GroupedHamiltonian::new(h.n, vec![(g.label.clone(), g.op.clone())])?;
            LatticeTermTensor::from_hamiltonian(&single, 2)
        })
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for (key, c) in table {
        let outer: Vec<&LatticeTermTensor> = key[..4].iter().rev().map(|&i| &tensors[i - 1]).collect();
        total += c * counting_nested_bound(&tensors[key[4] - 1], &outer)?;
    }
    Ok(total)
}

/// Per-label norms of the fourth-order bound, keyed by label, for reuse.
pub fn fourth_order_norms(h: &GroupedHamiltonian, mode: NormMode) -> Result<BTreeMap<String, f64>> {
    Ok(fourth_order_bound(h, 1.0, mode)?.per_term.into_iter().map(|b| (b.label, b.norm)).collect())
}

/// Nested commutator norm of explicit operators (outermost first).
pub fn nested_norm(ops: &[&PauliSum], mode: NormMode) -> Result<f64> {
    match mode {
        NormMode::Coeff1Norm => Ok(nested_commutator(ops)?.coefficient_one_norm()),
        NormMode::DenseExact => pauli_norm(&nested_commutator(ops)?),
        NormMode::Cluster => {
            let m = ops.len();
            let mut total = 0.0;
            for h in local_terms(ops[m - 1]) {
                let mut list: Vec<&PauliSum> = ops[..m - 1].to_vec();
                list.push(&h);
                let c = nested_commutator(&list)?;
                if !c.is_empty() {
                    total += pauli_norm(&c)?;
                }
            }
            Ok(total)
        }
    }
}
