//! Benchmark protocol for random-field Heisenberg chains: for each `n` and
//! seeded instance, the empirical Trotter number, the commutator-bound
//! Trotter number and the 1-norm-bound Trotter number.

use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{
    fourth_order_bound, group_norms, homogeneous_trotter_number, one_norm_trotter_number, tight_low_order_bound,
    NormMode,
};
use crate::error::{Error, Result};
use crate::formula::{empirical_trotter_number, lie_trotter, suzuki, FormulaSchedule};
use crate::hamiltonians::{group_terms, heisenberg_chain, power_law_heisenberg, GroupedHamiltonian, Grouping};
use crate::io::{mean_std, Cell, Csv};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchModel {
    /// Nearest-neighbor chain.
    HeisenbergNn,
    /// All-to-all chain with `|j-k|^{-α}` couplings.
    HeisenbergPl { alpha: f64 },
}

impl BenchModel {
    pub fn name(&self) -> &'static str {
        match self {
            BenchModel::HeisenbergNn => "heisenberg-nn",
            BenchModel::HeisenbergPl { .. } => "heisenberg-pl",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self {
            BenchModel::HeisenbergNn => None,
            BenchModel::HeisenbergPl { alpha } => Some(*alpha),
        }
    }

    pub fn build(&self, n: usize, seed: u64, ordering: &Grouping) -> Result<GroupedHamiltonian> {
        let h = match self {
            BenchModel::HeisenbergNn => heisenberg_chain(n, seed)?,
            BenchModel::HeisenbergPl { alpha } => power_law_heisenberg(n, *alpha, seed)?,
        };
        group_terms(&h, ordering)
    }
}

/// How the evolution time follows the system size.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum TimeRule {
    EqualsN,
    Fixed(f64),
}

impl TimeRule {
    pub fn time(&self, n: usize) -> f64 {
        match self {
            TimeRule::EqualsN => n as f64,
            TimeRule::Fixed(t) => *t,
        }
    }
}

impl FromStr for TimeRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "t=n" {
            return Ok(TimeRule::EqualsN);
        }
        match s.trim_start_matches("t=").parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(TimeRule::Fixed(t)),
            _ => Err(Error::Input(format!("time rule must be t=n or a positive time, got {s:?}"))),
        }
    }
}

/// Parses `10`, `5,7,9` or `5..=11` (also `5..12`).
pub fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Input(format!("bad size list {s:?}"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    let out: Vec<usize> = if let Some((a, b)) = s.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = s.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        s.split(',').map(num).collect::<Result<_>>()?
    };
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchConfig {
    pub model: BenchModel,
    pub ordering: String,
    pub sizes: Vec<usize>,
    pub time_rule: TimeRule,
    pub eps: f64,
    pub instances: usize,
    /// Instance `i` uses seed `seed + i`.
    pub seed: u64,
    pub order: usize,
    pub mode: NormMode,
    /// Skip the exact simulation (for sizes beyond the dense cap).
    pub skip_empirical: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub instance: usize,
    pub seed: u64,
    pub t: f64,
    pub r_empirical: Option<u64>,
    pub r_bound_ours: u64,
    pub r_bound_1norm: u64,
}

impl BenchRow {
    /// `r_bound_ours / r_empirical`.
    pub fn ratio(&self) -> Option<f64> {
        self.r_empirical.map(|e| self.r_bound_ours as f64 / e as f64)
    }
}

/// Per-size aggregate; `ratio` is the ratio of the means.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchSummary {
    pub n: usize,
    pub r_empirical: Option<(f64, f64)>,
    pub r_bound_ours: (f64, f64),
    pub r_bound_1norm: (f64, f64),
    pub ratio: Option<(f64, f64)>,
}

pub fn schedule_for(order: usize, gamma: usize) -> Result<FormulaSchedule> {
    if order == 1 { lie_trotter(gamma) } else { suzuki(order, gamma) }
}

/// Commutator-bound prefactor `C` with the single-step bound `C·τ^{p+1}`.
pub fn bound_prefactor(h: &GroupedHamiltonian, order: usize, mode: NormMode) -> Result<f64> {
    match order {
        1 | 2 => Ok(tight_low_order_bound(h, 1.0, order, mode)?.value),
        4 => Ok(fourth_order_bound(h, 1.0, mode)?.value),
        _ => Err(Error::Input(format!("commutator bounds are implemented for orders 1, 2 and 4, got {order}"))),
    }
}

pub fn run_instance(cfg: &BenchConfig, grouping: &Grouping, n: usize, instance: usize) -> Result<BenchRow> {
    let seed = cfg.seed.wrapping_add(instance as u64);
    let h = cfg.model.build(n, seed, grouping)?;
    let t = cfg.time_rule.time(n);
    let r_empirical = if cfg.skip_empirical {
        None
    } else {
        let s = schedule_for(cfg.order, h.gamma())?;
        Some(empirical_trotter_number(&h, &s, t, cfg.eps)?.r)
    };
    let c = bound_prefactor(&h, cfg.order, cfg.mode)?;
    let r_bound_ours = homogeneous_trotter_number(c, cfg.order, t, cfg.eps)?.r;
    let r_bound_1norm = one_norm_trotter_number(&group_norms(&h, cfg.mode)?, cfg.order, t, cfg.eps)?.r;
    Ok(BenchRow { n, instance, seed, t, r_empirical, r_bound_ours, r_bound_1norm })
}

/// All rows, sorted by `(n, instance)`.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.instances == 0 {
        return Err(Error::Input("need at least one instance".into()));
    }
    let grouping: Grouping = cfg.ordering.parse()?;
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        for i in 0..cfg.instances {
            rows.push(run_instance(cfg, &grouping, n, i)?);
        }
    }
    rows.sort_by_key(|r| (r.n, r.instance));
    Ok(rows)
}

pub fn summarize(rows: &[BenchRow]) -> Vec<BenchSummary> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let rs: Vec<&BenchRow> = rows.iter().filter(|r| r.n == n).collect();
            let col = |f: &dyn Fn(&BenchRow) -> f64| mean_std(&rs.iter().map(|r| f(r)).collect::<Vec<_>>());
            let ours = col(&|r| r.r_bound_ours as f64);
            let emp = rs.iter().map(|r| r.r_empirical).collect::<Option<Vec<u64>>>();
            let (r_empirical, ratio) = match emp {
                Some(e) => {
                    let e = mean_std(&e.iter().map(|&v| v as f64).collect::<Vec<_>>());
                    let ratios = mean_std(&rs.iter().filter_map(|r| r.ratio()).collect::<Vec<_>>());
                    (Some(e), Some((ours.0 / e.0, ratios.1)))
                }
                None => (None, None),
            };
            BenchSummary { n, r_empirical, r_bound_ours: ours, r_bound_1norm: col(&|r| r.r_bound_1norm as f64), ratio }
        })
        .collect()
}

pub const BENCH_COLUMNS: [&str; 12] = [
    "model",
    "ordering",
    "alpha",
    "n",
    "instance",
    "seed",
    "t",
    "eps",
    "r_empirical",
    "r_bound_ours",
    "r_bound_1norm",
    "ratio",
];

/// Instance rows followed, per size, by a `mean` and a `std` row. The
/// `ratio` of a `mean` row is the ratio of the mean Trotter numbers; its
/// `std` row holds the spread of the per-instance ratios.
pub fn bench_csv(cfg: &BenchConfig, rows: &[BenchRow]) -> Result<Csv> {
    let mut csv = Csv::new(&BENCH_COLUMNS);
    let head = |n: usize| -> Vec<Cell> {
        vec![cfg.model.name().into(), cfg.ordering.clone().into(), cfg.model.alpha().into(), n.into()]
    };
    for s in summarize(rows) {
        for r in rows.iter().filter(|r| r.n == s.n) {
            let mut row = head(r.n);
            row.extend([
                r.instance.into(),
                r.seed.into(),
                r.t.into(),
                cfg.eps.into(),
                r.r_empirical.into(),
                r.r_bound_ours.into(),
                r.r_bound_1norm.into(),
                r.ratio().into(),
            ]);
            csv.push(row)?;
        }
        let t = cfg.time_rule.time(s.n);
        for (tag, pick) in [("mean", 0), ("std", 1)] {
            let get = |v: (f64, f64)| if pick == 0 { v.0 } else { v.1 };
            let mut row = head(s.n);
            row.extend([
                tag.into(),
                Cell::Empty,
                t.into(),
                cfg.eps.into(),
                s.r_empirical.map(get).into(),
                get(s.r_bound_ours).into(),
                get(s.r_bound_1norm).into(),
                s.ratio.map(get).into(),
            ]);
            csv.push(row)?;
        }
    }
    Ok(csv)
}
