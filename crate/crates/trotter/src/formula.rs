//! Product-formula schedules and their exact evaluation.
//!
//! A schedule is a table of `Υ` stages. Stage `υ` applies
//! `e^{t a_{(υ,γ)} H_{π_υ(γ)}}` for `γ = 1..Γ`, the `γ = 1` factor first, and
//! stage 1 is applied before stage 2. Written as a matrix product the first
//! factor sits rightmost.

use faer::Mat;
use num_complex::Complex64 as C64;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::dense::{self, DenseOperator, HermitianEigen};
use crate::error::{Error, Result};
use crate::hamiltonians::GroupedHamiltonian;
use crate::pauli::PauliSum;
use crate::sectors::{BlockOp, CompactOp, Sectors};

/// Default upper limit for Trotter-number searches.
pub const DEFAULT_R_CAP: u64 = 10_000_000;

/// Generator convention: `-iH_γ` (real time) or `+H_γ` (imaginary time).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TimeMode {
    #[default]
    Real,
    Imaginary,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaSchedule {
    pub gamma: usize,
    /// `coeffs[υ][γ]`, both 0-based.
    pub coeffs: Vec<Vec<f64>>,
    /// `perms[υ][γ]` is the 0-based group applied at position `γ` of stage `υ`.
    pub perms: Vec<Vec<usize>>,
    pub order: usize,
}

/// One exponential `e^{t·coeff·G_group}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponential {
    pub group: usize,
    pub coeff: f64,
}

impl FormulaSchedule {
    /// Validated custom schedule.
    pub fn new(coeffs: Vec<Vec<f64>>, perms: Vec<Vec<usize>>, order: usize) -> Result<Self> {
        let gamma = perms.first().map(Vec::len).unwrap_or(0);
        if gamma == 0 || coeffs.len() != perms.len() {
            return Err(Error::Input("schedule needs at least one nonempty stage".into()));
        }
        for (c, p) in coeffs.iter().zip(&perms) {
            if c.len() != gamma || p.len() != gamma {
                return Err(Error::Input("ragged schedule table".into()));
            }
            let mut seen = vec![false; gamma];
            for &g in p {
                if g >= gamma || std::mem::replace(&mut seen[g], true) {
                    return Err(Error::Input(format!("stage permutation {p:?} is not a bijection")));
                }
            }
            if c.iter().any(|a| !a.is_finite() || a.abs() > 1.0 + 1e-12) {
                return Err(Error::Input(format!("stage coefficients {c:?} must lie in [-1, 1]")));
            }
        }
        Ok(FormulaSchedule { gamma, coeffs, perms, order })
    }

    pub fn upsilon(&self) -> usize {
        self.perms.len()
    }

    /// Total coefficient of each group, which is 1 for a consistent formula.
    pub fn group_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.gamma];
        for (c, p) in self.coeffs.iter().zip(&self.perms) {
            for (a, &g) in c.iter().zip(p) {
                s[g] += a;
            }
        }
        s
    }

    /// Exponentials of stage `υ` in application order.
    pub fn stage(&self, upsilon: usize) -> Vec<Exponential> {
        self.perms[upsilon]
            .iter()
            .zip(&self.coeffs[upsilon])
            .map(|(&group, &coeff)| Exponential { group, coeff })
            .collect()
    }

    /// Every stage flattened in application order, without merging.
    pub fn raw_exponentials(&self) -> Vec<Exponential> {
        (0..self.upsilon()).flat_map(|u| self.stage(u)).collect()
    }

    /// Flattened sequence with adjacent same-group exponentials merged and
    /// zero coefficients removed.
    pub fn exponentials(&self) -> Vec<Exponential> {
        merge(self.raw_exponentials())
    }

    /// JSON with 1-based permutations, for audit output.
    pub fn to_json(&self) -> serde_json::Value {
        let perms: Vec<Vec<usize>> = self.perms.iter().map(|p| p.iter().map(|g| g + 1).collect()).collect();
        serde_json::json!({
            "upsilon": self.upsilon(),
            "gamma": self.gamma,
            "order": self.order,
            "coeffs": self.coeffs,
            "perms": perms,
        })
    }
}

pub fn merge(exps: impl IntoIterator<Item = Exponential>) -> Vec<Exponential> {
    let mut out: Vec<Exponential> = Vec::new();
    for e in exps {
        if e.coeff == 0.0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.group == e.group => {
                last.coeff += e.coeff;
                if last.coeff == 0.0 {
                    out.pop();
                }
            }
            _ => out.push(e),
        }
    }
    out
}

/// `e^{tH_Γ}⋯e^{tH_1}`.
pub fn lie_trotter(gamma: usize) -> Result<FormulaSchedule> {
    if gamma < 1 {
        return Err(Error::Input("Lie-Trotter needs at least one group".into()));
    }
    FormulaSchedule::new(vec![vec![1.0; gamma]], vec![(0..gamma).collect()], 1)
}

/// `u_k = 1/(4 - 4^{1/(2k-1)})`.
pub fn suzuki_u(k: usize) -> f64 {
    1.0 / (4.0 - 4f64.powf(1.0 / (2 * k - 1) as f64))
}

/// Recursive Suzuki formula of order `2k`:
/// `S_2(t) = e^{tH_1/2}⋯e^{tH_Γ/2} e^{tH_Γ/2}⋯e^{tH_1/2}` and
/// `S_{2k}(t) = S_{2k-2}(u_k t)² S_{2k-2}((1-4u_k)t) S_{2k-2}(u_k t)²`.
pub fn suzuki(order: usize, gamma: usize) -> Result<FormulaSchedule> {
    if !matches!(order, 2 | 4 | 6 | 8) {
        return Err(Error::Input(format!("Suzuki order must be 2, 4, 6 or 8, got {order}")));
    }
    if gamma < 1 {
        return Err(Error::Input("Suzuki formula needs at least one group".into()));
    }
    // (multiplier, reversed) per stage.
    let mut stages = vec![(0.5, false), (0.5, true)];
    for k in 2..=order / 2 {
        let u = suzuki_u(k);
        let mut next = Vec::with_capacity(stages.len() * 5);
        for m in [u, u, 1.0 - 4.0 * u, u, u] {
            next.extend(stages.iter().map(|&(c, rev)| (c * m, rev)));
        }
        stages = next;
    }
    let fwd: Vec<usize> = (0..gamma).collect();
    let rev: Vec<usize> = (0..gamma).rev().collect();
    let coeffs = stages.iter().map(|&(c, _)| vec![c; gamma]).collect();
    let perms = stages.iter().map(|&(_, r)| if r { rev.clone() } else { fwd.clone() }).collect();
    FormulaSchedule::new(coeffs, perms, order)
}

/// Exact propagators for a grouped Hamiltonian on its sector decomposition.
///
/// Each group and the total Hamiltonian are diagonalized once per block;
/// a product of exponentials then costs one matrix product per factor.
pub struct Propagator {
    sectors: Sectors,
    mode: TimeMode,
    groups: Vec<Vec<HermitianEigen>>,
    total: Vec<HermitianEigen>,
    transitions: FxHashMap<(usize, usize), Vec<Mat<C64>>>,
}

impl Propagator {
    pub fn new(h: &GroupedHamiltonian, mode: TimeMode) -> Result<Self> {
        Self::with_observables(h, mode, &[])
    }

    /// Like [`Propagator::new`], with sectors also preserved by `observables`
    /// so they can be restricted with [`Propagator::restrict`].
    pub fn with_observables(h: &GroupedHamiltonian, mode: TimeMode, observables: &[&PauliSum]) -> Result<Self> {
        dense::check_cap(h.n)?;
        let compact: Vec<CompactOp> = h.ops().into_iter().map(CompactOp::full).collect::<Result<_>>()?;
        let extra: Vec<CompactOp> = observables.iter().map(|o| CompactOp::full(o)).collect::<Result<_>>()?;
        let refs: Vec<&CompactOp> = compact.iter().chain(&extra).collect();
        let sectors = Sectors::of(h.n, &refs);
        let mut groups = Vec::with_capacity(compact.len());
        for (c, grp) in compact.iter().zip(&h.groups) {
            if !grp.op.is_hermitian(1e-12) {
                return Err(Error::Contract(format!("group {} is not Hermitian", grp.label)));
            }
            groups.push(sectors.restrict(c)?.eigh()?);
        }
        let total = sectors.restrict(&CompactOp::full(&h.total())?)?.eigh()?;
        Ok(Propagator { sectors, mode, groups, total, transitions: FxHashMap::default() })
    }

    pub fn sectors(&self) -> &Sectors {
        &self.sectors
    }

    pub fn mode(&self) -> TimeMode {
        self.mode
    }

    fn phase(&self, theta: f64) -> impl Fn(f64) -> C64 + '_ {
        move |l| match self.mode {
            TimeMode::Real => C64::from_polar(1.0, -theta * l),
            TimeMode::Imaginary => C64::new((theta * l).exp(), 0.0),
        }
    }

    /// `V_a† V_b` per block, cached.
    fn transition(&mut self, a: usize, b: usize) -> &Vec<Mat<C64>> {
        let groups = &self.groups;
        self.transitions.entry((a, b)).or_insert_with(|| {
            groups[a].iter().zip(&groups[b]).map(|(ea, eb)| ea.vectors.adjoint() * &eb.vectors).collect()
        })
    }

    /// `e^{tG}` of the full Hamiltonian.
    pub fn exact(&self, t: f64) -> BlockOp {
        let f = self.phase(t);
        BlockOp { blocks: self.total.iter().map(|e| e.map(&f).into_mat()).collect() }
    }

    /// `e^{tG_g}` of one group.
    pub fn group_exp(&self, g: usize, t: f64) -> BlockOp {
        let f = self.phase(t);
        BlockOp { blocks: self.groups[g].iter().map(|e| e.map(&f).into_mat()).collect() }
    }

    /// Ordered product of `e^{t·c·G_g}`, first element applied first.
    pub fn product(&mut self, exps: &[Exponential], t: f64) -> Result<BlockOp> {
        let Some(first) = exps.first() else {
            return Ok(BlockOp::identity(&self.sectors));
        };
        if let Some(e) = exps.iter().find(|e| e.group >= self.groups.len()) {
            return Err(Error::Dimension(format!("schedule refers to group {} of {}", e.group + 1, self.groups.len())));
        }
        for w in exps.windows(2) {
            self.transition(w[1].group, w[0].group);
        }
        let nb = self.sectors.blocks().len();
        let mut blocks = Vec::with_capacity(nb);
        for b in 0..nb {
            // M = D_1 V_1†, then M ← D_k (V_k† V_{k-1}) M, finally V_m M.
            let e1 = &self.groups[first.group][b];
            let f = self.phase(t * first.coeff);
            let d: Vec<C64> = e1.values.iter().map(|&l| f(l)).collect();
            let v = e1.vectors.as_ref();
            let mut m = Mat::from_fn(v.ncols(), v.nrows(), |i, j| d[i] * v[(j, i)].conj());
            for w in exps.windows(2) {
                let tr = &self.transitions[&(w[1].group, w[0].group)][b];
                let mut next = tr * &m;
                let ek = &self.groups[w[1].group][b];
                let f = self.phase(t * w[1].coeff);
                for (i, &l) in ek.values.iter().enumerate() {
                    let p = f(l);
                    for j in 0..next.ncols() {
                        next[(i, j)] *= p;
                    }
                }
                m = next;
            }
            let last = &self.groups[exps[exps.len() - 1].group][b];
            blocks.push(&last.vectors * &m);
        }
        Ok(BlockOp { blocks })
    }

    /// One step `S(t)` of a schedule.
    pub fn step(&mut self, s: &FormulaSchedule, t: f64) -> Result<BlockOp> {
        if s.gamma != self.groups.len() {
            return Err(Error::Dimension(format!("schedule has {} groups, Hamiltonian {}", s.gamma, self.groups.len())));
        }
        self.product(&s.exponentials(), t)
    }

    /// `‖S(t/r)^r - e^{tG}‖`.
    pub fn error(&mut self, s: &FormulaSchedule, t: f64, r: u64) -> Result<f64> {
        if r < 1 {
            return Err(Error::Input("r must be at least 1".into()));
        }
        let sr = self.step(s, t / r as f64)?.pow(r);
        Ok(sr.sub(&self.exact(t)).spectral_norm())
    }

    /// An operator on the propagator's sectors; fails if it mixes them.
    pub fn restrict(&self, op: &PauliSum) -> Result<BlockOp> {
        self.sectors.restrict(&CompactOp::full(op)?)
    }

    pub fn assemble(&self, b: &BlockOp) -> DenseOperator {
        self.sectors.assemble(b)
    }
}

/// `S(t)` as a dense matrix.
pub fn evaluate(s: &FormulaSchedule, h: &GroupedHamiltonian, t: f64, mode: TimeMode) -> Result<DenseOperator> {
    check_gamma(s, h)?;
    let mut p = Propagator::new(h, mode)?;
    let b = p.step(s, t)?;
    Ok(p.assemble(&b))
}

fn check_gamma(s: &FormulaSchedule, h: &GroupedHamiltonian) -> Result<()> {
    if s.gamma != h.gamma() {
        return Err(Error::Dimension(format!("schedule has {} groups, Hamiltonian {}", s.gamma, h.gamma())));
    }
    Ok(())
}

/// `‖S(t/r)^r - e^{-itH}‖`.
pub fn empirical_error(h: &GroupedHamiltonian, s: &FormulaSchedule, t: f64, r: u64) -> Result<f64> {
    check_gamma(s, h)?;
    Propagator::new(h, TimeMode::Real)?.error(s, t, r)
}

/// Result of a Trotter-number search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrotterSearch {
    pub r: u64,
    pub error_at_r: f64,
    /// Error at `r - 1`, absent when `r = 1`.
    pub error_below: Option<f64>,
    pub probes: Vec<(u64, f64)>,
}

/// Smallest `r ≥ 1` with `f(r) ≤ ε`, assuming `f` is nonincreasing:
/// doubling bracket, then bisection. The returned `r` passes and `r - 1`
/// fails by construction; both values are reported.
pub fn search_trotter_number(
    mut f: impl FnMut(u64) -> Result<f64>,
    eps: f64,
    r_cap: u64,
) -> Result<TrotterSearch> {
    if !(eps > 0.0) {
        return Err(Error::Input(format!("epsilon must be positive, got {eps}")));
    }
    let mut probes = Vec::new();
    let mut probe = |r: u64, probes: &mut Vec<(u64, f64)>| -> Result<f64> {
        let e = f(r)?;
        if !e.is_finite() {
            return Err(Error::Numerical(format!("error at r = {r} is {e}")));
        }
        probes.push((r, e));
        Ok(e)
    };
    let mut hi = 1u64;
    let mut e_hi = probe(1, &mut probes)?;
    if e_hi <= eps {
        return Ok(TrotterSearch { r: 1, error_at_r: e_hi, error_below: None, probes });
    }
    let mut lo;
    let mut e_lo;
    loop {
        lo = hi;
        e_lo = e_hi;
        if hi >= r_cap {
            return Err(Error::Search(format!("error still {e_hi:.3e} > {eps:.3e} at r = {hi} (cap {r_cap})")));
        }
        hi = (hi * 2).min(r_cap);
        e_hi = probe(hi, &mut probes)?;
        if e_hi <= eps {
            break;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let e = probe(mid, &mut probes)?;
        if e <= eps {
            hi = mid;
            e_hi = e;
        } else {
            lo = mid;
            e_lo = e;
        }
    }
    if e_lo <= eps || e_hi > eps {
        return Err(Error::Search(format!("non-monotone error near r = {hi}")));
    }
    Ok(TrotterSearch { r: hi, error_at_r: e_hi, error_below: Some(e_lo), probes })
}

/// Smallest `r` with `‖S(t/r)^r - e^{-itH}‖ ≤ ε`.
pub fn empirical_trotter_number(
    h: &GroupedHamiltonian,
    s: &FormulaSchedule,
    t: f64,
    eps: f64,
) -> Result<TrotterSearch> {
    empirical_trotter_number_capped(h, s, t, eps, DEFAULT_R_CAP)
}

pub fn empirical_trotter_number_capped(
    h: &GroupedHamiltonian,
    s: &FormulaSchedule,
    t: f64,
    eps: f64,
    r_cap: u64,
) -> Result<TrotterSearch> {
    check_gamma(s, h)?;
    let mut p = Propagator::new(h, TimeMode::Real)?;
    search_trotter_number(|r| p.error(s, t, r), eps, r_cap)
}

/// Additive error `S(t) - e^{tG}` and multiplicative error `e^{-tG}S(t) - I`,
/// with `G = -iH` or `G = H` by mode.
pub fn error_operators(
    h: &GroupedHamiltonian,
    s: &FormulaSchedule,
    t: f64,
    mode: TimeMode,
) -> Result<(DenseOperator, DenseOperator)> {
    check_gamma(s, h)?;
    let mut p = Propagator::new(h, mode)?;
    let st = p.step(s, t)?;
    let additive = st.sub(&p.exact(t));
    let id = BlockOp::identity(p.sectors());
    let multiplicative = p.exact(-t).matmul(&st).sub(&id);
    Ok((p.assemble(&additive), p.assemble(&multiplicative)))
}

/// `ℰ(τ)` with `S'(τ) = (G + ℰ(τ))S(τ)`: the sum over factors `k` of
/// `(E_m⋯E_{k+1}) a_k G_k (E_m⋯E_{k+1})^{-1}` minus `G`.
pub fn exponentiated_error_sample(
    h: &GroupedHamiltonian,
    s: &FormulaSchedule,
    tau: f64,
    mode: TimeMode,
) -> Result<DenseOperator> {
    check_gamma(s, h)?;
    let p = Propagator::new(h, mode)?;
    let gens: Vec<BlockOp> = h
        .ops()
        .into_iter()
        .map(|op| {
            let b = p.sectors().restrict(&CompactOp::full(op)?)?;
            Ok(match mode {
                TimeMode::Real => b.scale(C64::new(0.0, -1.0)),
                TimeMode::Imaginary => b,
            })
        })
        .collect::<Result<_>>()?;
    let exps = s.raw_exponentials();
    let mut acc_neg = gens.iter().skip(1).fold(gens[0].clone(), |a, g| a.add(g)).scale(C64::new(-1.0, 0.0));
    // Walk from the last factor, growing the left product L = E_m⋯E_{k+1}.
    let mut left = BlockOp::identity(p.sectors());
    let mut left_inv = BlockOp::identity(p.sectors());
    for e in exps.iter().rev() {
        let term = left.matmul(&gens[e.group].scale(C64::new(e.coeff, 0.0))).matmul(&left_inv);
        acc_neg = acc_neg.add(&term);
        left = left.matmul(&p.group_exp(e.group, tau * e.coeff));
        left_inv = p.group_exp(e.group, -tau * e.coeff).matmul(&left_inv);
    }
    Ok(p.assemble(&acc_neg))
}

/// Fitted log-log slopes of the additive and exponentiated errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderReport {
    pub order: usize,
    pub times: Vec<f64>,
    pub additive: Vec<f64>,
    pub exponentiated: Vec<f64>,
    pub additive_slope: f64,
    pub exponentiated_slope: f64,
    pub passed: bool,
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Checks `S(t) = e^{-itH} + O(t^{p+1})` and `ℰ(τ) = O(τ^p)` by log-log
/// fits on five geometric points. The window ends at the largest
/// `t = 2^{-k}` whose additive error is at most `1e-5` and spans
/// `10^{min(1, 6/(p+1))}`, so the smallest errors stay near `1e-11`, above
/// rounding. Slopes must fall in `[q - 0.2, q + 0.3]`.
pub fn order_condition_check(h: &GroupedHamiltonian, s: &FormulaSchedule) -> Result<OrderReport> {
    check_gamma(s, h)?;
    let mut p = Propagator::new(h, TimeMode::Real)?;
    let mut t_hi = 1.0;
    while t_hi > 1e-6 && p.step(s, t_hi)?.sub(&p.exact(t_hi)).spectral_norm() > 1e-5 {
        t_hi /= 2.0;
    }
    let span = (6.0 / (s.order as f64 + 1.0)).min(1.0);
    let times: Vec<f64> = (0..5).map(|i| t_hi * 10f64.powf(span * (i as f64 / 4.0 - 1.0))).collect();
    let mut additive = Vec::new();
    let mut exponentiated = Vec::new();
    for &t in &times {
        additive.push(p.step(s, t)?.sub(&p.exact(t)).spectral_norm());
        exponentiated.push(exponentiated_error_sample(h, s, t, TimeMode::Real)?.spectral_norm());
    }
    let additive_slope = loglog_slope(&times, &additive);
    let exponentiated_slope = loglog_slope(&times, &exponentiated);
    let ok = |slope: f64, q: f64| slope >= q - 0.2 && slope <= q + 0.3;
    let q = s.order as f64;
    Ok(OrderReport {
        order: s.order,
        passed: ok(additive_slope, q + 1.0) && ok(exponentiated_slope, q),
        times,
        additive,
        exponentiated,
        additive_slope,
        exponentiated_slope,
    })
}
