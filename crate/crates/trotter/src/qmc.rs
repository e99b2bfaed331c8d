//! Trotter numbers for quantum Monte Carlo: the symmetric second-order split
//! of `e^{t(A+B)}` for transverse-field Ising models, the ferromagnet rule,
//! and exact eigenvalue checks of the multiplicative error.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::bounds::{nested_norm, NormMode};
use crate::dense::DenseOperator;
use crate::error::{Error, Result};
use crate::formula::{Exponential, Propagator, TimeMode};
use crate::hamiltonians::{local_terms, GroupedHamiltonian};
use crate::pauli::PauliSum;
use crate::sectors::pauli_norm;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Constraint {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QmcPlan {
    pub r: u64,
    pub constraints: Vec<Constraint>,
    pub eps: f64,
    /// Imaginary time (`β` for ferromagnets).
    pub t: f64,
}

impl QmcPlan {
    pub fn constraint(&self, name: &str) -> Option<f64> {
        self.constraints.iter().find(|c| c.name == name).map(|c| c.value)
    }
}

fn op_norm(op: &PauliSum, mode: NormMode) -> Result<f64> {
    match mode {
        NormMode::DenseExact => pauli_norm(op),
        NormMode::Coeff1Norm => Ok(op.coefficient_one_norm()),
        NormMode::Cluster => local_terms(op).iter().map(pauli_norm).sum(),
    }
}

/// Smallest power of two `r ≥ max{4t(‖A‖+‖B‖), √(t³‖[A,[A,B]]‖/ε),
/// √(2t³‖[B,[B,A]]‖/(3ε))}`.
pub fn tfim_trotter_number(a: &PauliSum, b: &PauliSum, t: f64, eps: f64, mode: NormMode) -> Result<QmcPlan> {
    if !(t > 0.0) || !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Input(format!("need t > 0 and 0 < ε < 1, got t={t}, ε={eps}")));
    }
    if !a.is_hermitian(1e-12) || !b.is_hermitian(1e-12) {
        return Err(Error::Input("A and B must be Hermitian".into()));
    }
    let na = op_norm(a, mode)?;
    let nb = op_norm(b, mode)?;
    let aab = nested_norm(&[a, a, b], mode)?;
    let bba = nested_norm(&[b, b, a], mode)?;
    let constraints = vec![
        Constraint { name: "4t(|A|+|B|)".into(), value: 4.0 * t * (na + nb) },
        Constraint { name: "sqrt(t^3|[A,[A,B]]|/eps)".into(), value: (t.powi(3) * aab / eps).sqrt() },
        Constraint { name: "sqrt(2t^3|[B,[B,A]]|/(3eps))".into(), value: (2.0 * t.powi(3) * bba / (3.0 * eps)).sqrt() },
    ];
    let need = constraints.iter().map(|c| c.value).fold(1.0, f64::max);
    let mut r = 1u64;
    while (r as f64) < need {
        r = r.checked_mul(2).ok_or_else(|| Error::Cap("Trotter number overflows".into()))?;
    }
    Ok(QmcPlan { r, constraints, eps, t })
}

/// `r = max{⌊2β⌋+1, 24n²β, 8n²β²/ε, 2√c·n²β^{3/2}/√ε}`, rounded up; the first
/// entry enforces the strict `r > 2β`.
pub fn ferromagnet_trotter_number(n: usize, beta: f64, eps: f64, c: f64) -> Result<QmcPlan> {
    if n < 1 || !(beta > 0.0) || !(eps > 0.0) || !(c > 0.0) {
        return Err(Error::Input("ferromagnet plan needs n ≥ 1 and positive β, ε, c".into()));
    }
    let n2 = (n * n) as f64;
    let constraints = vec![
        Constraint { name: "r>2beta".into(), value: (2.0 * beta).floor() + 1.0 },
        Constraint { name: "24n^2beta".into(), value: 24.0 * n2 * beta },
        Constraint { name: "8n^2beta^2/eps".into(), value: 8.0 * n2 * beta * beta / eps },
        Constraint { name: "2sqrt(c)n^2beta^1.5/sqrt(eps)".into(), value: 2.0 * c.sqrt() * n2 * beta.powf(1.5) / eps.sqrt() },
    ];
    let r = constraints.iter().map(|c| c.value).fold(1.0, f64::max).ceil();
    Ok(QmcPlan { r: r as u64, constraints, eps, t: beta })
}

fn split(a: &PauliSum, b: &PauliSum) -> Result<Propagator> {
    if a.n() != b.n() {
        return Err(Error::Dimension("A and B differ in qubit count".into()));
    }
    let h = GroupedHamiltonian::new(a.n(), vec![("A".into(), a.clone()), ("B".into(), b.clone())])?;
    Propagator::new(&h, TimeMode::Imaginary)
}

/// Eigenvalues (nonincreasing) of `V = e^{τA/2}e^{τB}e^{τA/2}` and of
/// `U = e^{τ(A+B)}`, `τ = t/r`.
fn step_spectra(prop: &mut Propagator, t: f64, r: u64) -> Result<(Vec<f64>, Vec<f64>)> {
    let tau = t / r as f64;
    let exps = [
        Exponential { group: 0, coeff: 0.5 },
        Exponential { group: 1, coeff: 1.0 },
        Exponential { group: 0, coeff: 0.5 },
    ];
    let v = prop.product(&exps, tau)?;
    // V is Hermitian up to rounding; symmetrize before the eigensolve.
    let v = v.add(&v.adjoint()).scale(C64::new(0.5, 0.0));
    let lv = v.eigvals_hermitian()?;
    let u = prop.exact(tau);
    let u = u.add(&u.adjoint()).scale(C64::new(0.5, 0.0));
    let lu = u.eigvals_hermitian()?;
    Ok((lv, lu))
}

/// `(max_i, min_i)` of `λ_i(V^r)/λ_i(U^r)` with both spectra sorted
/// nonincreasingly and paired by rank.
pub fn multiplicative_factor_check(a: &PauliSum, b: &PauliSum, t: f64, r: u64) -> Result<(f64, f64)> {
    if r < 1 || !(t >= 0.0) {
        return Err(Error::Input("need r ≥ 1 and t ≥ 0".into()));
    }
    let mut prop = split(a, b)?;
    let (lv, lu) = step_spectra(&mut prop, t, r)?;
    if lv.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::Numerical("symmetric step has a nonpositive eigenvalue".into()));
    }
    let rf = r as f64;
    let mut hi = f64::NEG_INFINITY;
    let mut lo = f64::INFINITY;
    for (x, y) in lv.iter().zip(&lu) {
        let ratio = (rf * (x.ln() - y.ln())).exp();
        hi = hi.max(ratio);
        lo = lo.min(ratio);
    }
    Ok((hi, lo))
}

/// `Z'/Z` with `Z' = Tr V^r` and `Z = Tr e^{t(A+B)}`.
pub fn partition_ratio(a: &PauliSum, b: &PauliSum, t: f64, r: u64) -> Result<f64> {
    if r < 1 || !(t >= 0.0) {
        return Err(Error::Input("need r ≥ 1 and t ≥ 0".into()));
    }
    let mut prop = split(a, b)?;
    let (lv, lu) = step_spectra(&mut prop, t, r)?;
    let rf = r as f64;
    let log_v: Vec<f64> = lv.iter().map(|x| rf * x.ln()).collect();
    let log_u: Vec<f64> = lu.iter().map(|y| rf * y.ln()).collect();
    Ok((log_sum_exp(&log_v) - log_sum_exp(&log_u)).exp())
}

fn log_sum_exp(x: &[f64]) -> f64 {
    let m = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + x.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Matchgate {
    F,
    G,
    H,
}

impl std::str::FromStr for Matchgate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f" => Ok(Matchgate::F),
            "g" => Ok(Matchgate::G),
            "h" => Ok(Matchgate::H),
            _ => Err(Error::Input(format!("unknown matchgate {s:?}"))),
        }
    }
}

/// `f(e^s) = diag(e^s, 1)` for `|s| < 1/2`; `g(t)` couples `|00⟩,|11⟩` and
/// `h(t)` couples `|01⟩,|10⟩`, for `0 ≤ t < 1/2`.
pub fn matchgate(kind: Matchgate, param: f64) -> Result<DenseOperator> {
    let re = |x: f64| C64::new(x, 0.0);
    match kind {
        Matchgate::F => {
            if !(param.abs() < 0.5) {
                return Err(Error::Input(format!("f needs |s| < 1/2, got {param}")));
            }
            Ok(DenseOperator::diag(&[re(param.exp()), re(1.0)]))
        }
        Matchgate::G | Matchgate::H => {
            if !(0.0..0.5).contains(&param) {
                return Err(Error::Input(format!("g and h need 0 ≤ t < 1/2, got {param}")));
            }
            let (i, j) = if kind == Matchgate::G { (0, 3) } else { (1, 2) };
            let mut m = DenseOperator::identity(4);
            m.add_at(i, i, re(param * param));
            m.add_at(i, j, re(param));
            m.add_at(j, i, re(param));
            Ok(m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::loglog_slope;
    use crate::hamiltonians::{tfim, tfim_chain};
    use crate::pauli::{commutator, PauliTerm};
    use std::collections::BTreeMap;

    fn all_to_all(n: usize, j: f64, h: f64) -> (PauliSum, PauliSum) {
        let mut js = BTreeMap::new();
        for u in 0..n {
            for v in u + 1..n {
                js.insert((u, v), j);
            }
        }
        let hs = (0..n).map(|u| (u, h)).collect();
        tfim(n, &js, &hs).unwrap()
    }

    #[test]
    fn commuting_split_is_exact() {
        let a = PauliSum::from_term(PauliTerm::from_ops(2, 1.0, &[(0, 'Z')]));
        let b = PauliSum::from_term(PauliTerm::from_ops(2, 0.5, &[(1, 'Z')]));
        let plan = tfim_trotter_number(&a, &b, 1.0, 0.1, NormMode::DenseExact).unwrap();
        assert_eq!(plan.r, 8); // 4·1.5 = 6
        let (hi, lo) = multiplicative_factor_check(&a, &b, 1.0, 4).unwrap();
        assert!((hi - 1.0).abs() < 1e-10 && (lo - 1.0).abs() < 1e-10);
        assert!((partition_ratio(&a, &b, 1.0, 4).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_qubit_plan_against_dense_norms() {
        let (a, b) = tfim_chain(2, 1.0, 1.0).unwrap();
        let plan = tfim_trotter_number(&a, &b, 1.0, 0.1, NormMode::DenseExact).unwrap();
        assert!((plan.constraint("4t(|A|+|B|)").unwrap() - 12.0).abs() < 1e-12);
        let (da, db) = (a.to_dense().unwrap(), b.to_dense().unwrap());
        let aab = da.commutator(&da.commutator(&db)).spectral_norm();
        let bba = db.commutator(&db.commutator(&da)).spectral_norm();
        let need = [12.0, (aab / 0.1).sqrt(), (2.0 * bba / 0.3).sqrt()].into_iter().fold(0.0, f64::max);
        assert_eq!(plan.r, (need.log2().ceil().exp2()) as u64);
        assert!(plan.r.is_power_of_two());
        for c in &plan.constraints {
            assert!(plan.r as f64 >= c.value);
        }
    }

    #[test]
    fn multiplicative_error_within_eps() {
        for n in 2..=5 {
            let (a, b) = all_to_all(n, 0.3, 0.7);
            let plan = tfim_trotter_number(&a, &b, 1.0, 0.1, NormMode::DenseExact).unwrap();
            let (hi, lo) = multiplicative_factor_check(&a, &b, 1.0, plan.r).unwrap();
            assert!(hi <= 0.1f64.exp() && lo >= (-0.1f64).exp(), "n={n}: {hi} {lo}");
            let z = partition_ratio(&a, &b, 1.0, plan.r).unwrap();
            assert!(z <= 0.1f64.exp() && z >= (-0.1f64).exp());
        }
    }

    #[test]
    fn deviation_shrinks_quadratically() {
        let (a, b) = tfim_chain(4, 1.0, 0.8).unwrap();
        let rs = [2u64, 4, 8, 16];
        let dev: Vec<f64> = rs
            .iter()
            .map(|&r| {
                let (hi, lo) = multiplicative_factor_check(&a, &b, 1.0, r).unwrap();
                (hi.ln()).abs().max(lo.ln().abs())
            })
            .collect();
        let x: Vec<f64> = rs.iter().map(|&r| r as f64).collect();
        let slope = loglog_slope(&x, &dev);
        assert!((slope + 2.0).abs() < 0.2, "slope {slope}");
        let z = partition_ratio(&a, &b, 1.0, 1 << 12).unwrap();
        assert!((z - 1.0).abs() < 1e-6);
    }

    #[test]
    fn symmetric_step_is_positive() {
        let (a, b) = all_to_all(4, 1.0, 1.0);
        let mut prop = split(&a, &b).unwrap();
        let (lv, _) = step_spectra(&mut prop, 1.0, 3).unwrap();
        assert!(lv.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn tfim_scaling() {
        let ns = [4usize, 6, 8, 10];
        let mut c1 = Vec::new();
        let mut c2 = Vec::new();
        for &n in &ns {
            let (a, b) = all_to_all(n, 1.0, 1.0);
            let plan = tfim_trotter_number(&a, &b, 1.0, 0.1, NormMode::DenseExact).unwrap();
            c1.push(plan.constraints[0].value);
            c2.push(plan.constraints[1].value);
        }
        let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        // Θ(n²) and Θ(n^{3/2}) with finite-size drift.
        let s1 = loglog_slope(&x, &c1);
        let s2 = loglog_slope(&x, &c2);
        assert!(s1 > 1.6 && s1 < 2.1, "{s1}");
        assert!(s2 > 1.2 && s2 < 1.7, "{s2}");
    }

    #[test]
    fn ferromagnet_rule() {
        let p = ferromagnet_trotter_number(10, 1.0, 0.1, 1.0).unwrap();
        assert_eq!(p.r, 8000);
        assert!((p.constraints[3].value - 632.455532).abs() < 1e-6);
        assert_eq!(p.constraints[0].value, 3.0);
        assert_eq!(ferromagnet_trotter_number(3, 1e-9, 0.1, 1.0).unwrap().r, 1);
        let a = ferromagnet_trotter_number(6, 2.0, 0.1, 1.0).unwrap().r as f64;
        let b = ferromagnet_trotter_number(6, 2.0, 0.05, 1.0).unwrap().r as f64;
        assert!((b / a - 2.0).abs() < 1e-3);
    }

    #[test]
    fn matchgate_forms() {
        assert_eq!(matchgate(Matchgate::G, 0.0).unwrap().sub(&DenseOperator::identity(4)).max_abs(), 0.0);
        let z = PauliSum::from_term(PauliTerm::from_ops(1, 1.0, &[(0, 'Z')]));
        let ipz = z.add(&PauliSum::from_term(PauliTerm::identity(1, 1.0))).unwrap();
        for s in [0.3, -0.2] {
            let direct = ipz.to_dense().unwrap().expm_real_hermitian(s / 2.0).unwrap();
            assert!(matchgate(Matchgate::F, s).unwrap().sub(&direct).max_abs() < 1e-14);
        }
        let xx = PauliSum::from_term(PauliTerm::from_ops(2, 1.0, &[(0, 'X'), (1, 'X')]));
        let yy = PauliSum::from_term(PauliTerm::from_ops(2, 1.0, &[(0, 'Y'), (1, 'Y')]));
        for (kind, gen) in [(Matchgate::G, yy.sub(&xx).unwrap()), (Matchgate::H, xx.add(&yy).unwrap().scale(C64::new(-1.0, 0.0)))] {
            let ts = [0.1, 0.05, 0.025];
            let errs: Vec<f64> = ts
                .iter()
                .map(|&t| {
                    let e = gen.to_dense().unwrap().expm_real_hermitian(-t / 2.0).unwrap();
                    matchgate(kind, t).unwrap().sub(&e).spectral_norm()
                })
                .collect();
            let slope = loglog_slope(&ts, &errs);
            assert!((slope - 2.0).abs() < 0.1, "{kind:?}: {slope}");
        }
        assert!(matchgate(Matchgate::H, 0.5).is_err());
        assert!(commutator(&xx, &yy).unwrap().is_empty());
    }
}
