//! Trotter numbers and gate counts from the asymptotic simulation results,
//! evaluated with every `O`/`Θ` constant and log factor set to 1 and each
//! `o(1)` realized as `1/p`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    ElectronicStructure,
    KLocal,
    PowerLaw,
    PowerLawTruncated,
    Quasilocal,
    Clustered,
}

impl Model {
    pub const ALL: [Model; 6] = [
        Model::ElectronicStructure,
        Model::KLocal,
        Model::PowerLaw,
        Model::PowerLawTruncated,
        Model::Quasilocal,
        Model::Clustered,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::ElectronicStructure => "electronic-structure",
            Model::KLocal => "k-local",
            Model::PowerLaw => "power-law",
            Model::PowerLawTruncated => "power-law-truncated",
            Model::Quasilocal => "quasilocal",
            Model::Clustered => "clustered",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Model::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::Input(format!("unknown model {s:?}")))
    }
}

/// Inputs; fields a model does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanParams {
    pub n: f64,
    pub t: f64,
    pub eps: f64,
    pub p: usize,
    /// Power-law exponent.
    pub alpha: f64,
    /// Lattice dimension.
    pub d: usize,
    /// Locality of a k-local Hamiltonian.
    pub k: usize,
    /// `|||H|||₁` and `‖H‖₁` of a k-local Hamiltonian.
    pub induced_one_norm: f64,
    pub one_norm: f64,
    /// Inter-cluster interaction strength `h_B`.
    pub h_b: f64,
    /// Interaction degree `d'` of a clustered Hamiltonian.
    pub degree: f64,
    /// Contraction complexity `cc(g)` of the cluster graph.
    pub cc: f64,
}

impl Default for PlanParams {
    fn default() -> Self {
        PlanParams {
            n: 100.0,
            t: 100.0,
            eps: 1e-3,
            p: 4,
            alpha: 4.0,
            d: 1,
            k: 2,
            induced_one_norm: 1.0,
            one_norm: 1.0,
            h_b: 1.0,
            degree: 1.0,
            cc: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationPlan {
    pub model: Model,
    pub params: PlanParams,
    pub r: u64,
    /// Total gate count (for clustered Hamiltonians: the runtime exponent
    /// `r·cc(g)`).
    pub gates: f64,
    pub ell: Option<u64>,
    /// Exponents of the gate count in `n` and `t` at this `p`.
    pub n_exponent: Option<f64>,
    pub t_exponent: f64,
    pub notes: Vec<String>,
}

/// `ceil`, forgiving last-bit noise above an integer.
fn ceil_int(x: f64) -> f64 {
    (x * (1.0 - 1e-12)).ceil().max(1.0)
}

/// `|||H|||₁` and `‖H‖₁` scalings of a power-law lattice.
fn power_law_norms(n: f64, alpha: f64, d: f64) -> (f64, f64) {
    if alpha < d {
        (n.powf(1.0 - alpha / d), n.powf(2.0 - alpha / d))
    } else if alpha == d {
        (n.ln().max(1.0), n * n.ln().max(1.0))
    } else {
        (1.0, n)
    }
}

/// Truncation radius `ℓ = ⌈(nt/ε)^{1/(α-d)}⌉` clamped to `[1, n^{1/d}]`.
fn truncation_cutoff(n: f64, t: f64, eps: f64, alpha: f64, d: f64) -> f64 {
    ceil_int((n * t / eps).powf(1.0 / (alpha - d))).min(n.powf(1.0 / d).floor().max(1.0))
}

fn trotter(prefactor: f64, scale: f64, t: f64, eps: f64, p: f64) -> f64 {
    prefactor * scale.powf(1.0 / p) * t.powf(1.0 + 1.0 / p) / eps.powf(1.0 / p)
}

pub fn plan(model: Model, params: &PlanParams) -> Result<SimulationPlan> {
    let PlanParams { n, t, eps, p, alpha, d, k, .. } = *params;
    if !(n >= 1.0) || !(t > 0.0) || !(eps > 0.0) || p < 1 || d < 1 {
        return Err(Error::Input("need n ≥ 1, t > 0, ε > 0, p ≥ 1 and d ≥ 1".into()));
    }
    let pf = p as f64;
    let df = d as f64;
    let mut notes = vec!["asymptotic constants set to 1".to_string()];
    let mut ell = None;
    let (r, gates, n_exponent, t_exponent) = match model {
        Model::ElectronicStructure => {
            let r = ceil_int(trotter(1.0, 1.0, n * t, eps, pf));
            notes.push("per-step cost n (polylog factors dropped)".into());
            (r, r * n, Some(2.0 + 1.0 / pf), 1.0 + 1.0 / pf)
        }
        Model::KLocal => {
            let (ind, one) = (params.induced_one_norm, params.one_norm);
            if !(ind >= 0.0) || !(one >= 0.0) || k < 1 {
                return Err(Error::Input("k-local plan needs k ≥ 1 and nonnegative norms".into()));
            }
            let r = ceil_int(trotter(ind, one, t, eps, pf));
            (r, r * n.powi(k as i32), Some(k as f64), 1.0 + 1.0 / pf)
        }
        Model::PowerLaw => {
            if !(alpha >= 0.0) {
                return Err(Error::Input(format!("power-law exponent must be nonnegative, got {alpha}")));
            }
            let (ind, one) = power_law_norms(n, alpha, df);
            let r = ceil_int(trotter(ind, one, t, eps, pf));
            let e = if alpha < df { 3.0 - alpha / df + (2.0 - alpha / df) / pf } else { 2.0 + 1.0 / pf };
            if alpha == df {
                notes.push("log n factors dropped from the exponent".into());
            }
            if alpha > df {
                ell = Some(truncation_cutoff(n, t, eps, alpha, df) as u64);
                notes.push("ℓ is the truncation radius of the power-law-truncated plan".into());
            }
            (r, r * n * n, Some(e), 1.0 + 1.0 / pf)
        }
        Model::PowerLawTruncated => {
            if !(alpha > df) {
                return Err(Error::Input(format!("truncation needs α > d, got α={alpha}, d={d}")));
            }
            let l = truncation_cutoff(n, t, eps, alpha, df);
            ell = Some(l as u64);
            let r = ceil_int(trotter(1.0, n, t, eps, pf));
            let e = 1.0 + df / (alpha - df) + 1.0 / pf;
            notes.push("ℓ clamped to [1, n^{1/d}]".into());
            (r, r * n * l.powi(d as i32), Some(e), e)
        }
        Model::Quasilocal => {
            let l = ceil_int((n * t / eps).ln()).min(n.powf(1.0 / df).floor().max(1.0));
            ell = Some(l as u64);
            let r = ceil_int(trotter(1.0, n, t, eps, pf));
            notes.push("decay constant β set to 1; ℓ clamped to [1, n^{1/d}]".into());
            (r, r * n * l.powi(d as i32), Some(1.0 + 1.0 / pf), 1.0 + 1.0 / pf)
        }
        Model::Clustered => {
            let (hb, cc) = (params.h_b, params.cc);
            if !(hb >= 0.0) || !(cc >= 1.0) {
                return Err(Error::Input("clustered plan needs h_B ≥ 0 and cc(g) ≥ 1".into()));
            }
            let r = ceil_int(trotter(1.0, hb, t, eps, pf));
            notes.push(format!("previous runtime exponent h_B²t²cc/ε = {:.6e}", hb * hb * t * t * cc / eps));
            (r, r * cc, None, 1.0 + 1.0 / pf)
        }
    };
    Ok(SimulationPlan {
        model,
        params: params.clone(),
        r: r as u64,
        gates: gates.max(r),
        ell,
        n_exponent,
        t_exponent,
        notes,
    })
}
