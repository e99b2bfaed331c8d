//! Product formulas for local observables on 1-D chains: shells around the
//! observable, the parity-constrained formula, its reduced form, and the
//! light-cone planner.
//!
//! Schedules store stages in application order, so the stage applied last
//! sits next to the observable in `S†BS`. Stage `υ` counted from the
//! observable (1-based) is stored at index `Υ - υ`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{suzuki, Exponential, FormulaSchedule, Propagator, TimeMode};
use crate::hamiltonians::GroupedHamiltonian;
use crate::pauli::{PauliSum, PauliTerm};

/// Terms of a chain Hamiltonian grouped by distance to an observable.
///
/// Shell 0 is the interval spanned by the observable; shell `s ≥ 1` holds the
/// sites at distance in `((s-1)ℓ, sℓ]`.
#[derive(Clone, Debug)]
pub struct ShellDecomposition {
    pub gamma: usize,
    pub ell: usize,
    /// `H_1..H_Γ`, labelled `H1..`.
    pub groups: GroupedHamiltonian,
    pub obs_support: BTreeSet<usize>,
    pub shell_of_site: Vec<usize>,
    /// Terms spanning non-adjacent shells.
    pub dropped: PauliSum,
    /// `Σ|c|` over the dropped terms.
    pub truncation_weight: f64,
}

impl ShellDecomposition {
    pub fn truncated(&self) -> Result<PauliSum> {
        Ok(self.groups.total())
    }

    fn distance(&self, q: usize) -> usize {
        let lo = *self.obs_support.first().expect("nonempty support");
        let hi = *self.obs_support.last().expect("nonempty support");
        if q < lo {
            lo - q
        } else {
            q.saturating_sub(hi)
        }
    }

    /// Largest distance from the observable of any site touched by `H_γ`
    /// (1-based), or `None` for an empty group.
    pub fn group_radius(&self, gamma: usize) -> Option<usize> {
        self.groups.groups[gamma - 1].op.support().into_iter().map(|q| self.distance(q)).max()
    }
}

/// Splits the terms of `h` into `Γ` groups around `obs_support`:
/// `H_1` inside `ℬ_ℓ`, `H_γ` within shell `γ` or across shells `γ-1, γ`, and
/// `H_Γ` outside `ℬ_{(Γ-2)ℓ}`. A term matching several groups goes to the
/// lowest; terms matching none are dropped.
pub fn shell_decomposition(
    h: &GroupedHamiltonian,
    obs_support: &BTreeSet<usize>,
    ell: usize,
    gamma: usize,
) -> Result<ShellDecomposition> {
    if obs_support.is_empty() {
        return Err(Error::Input("observable support is empty".into()));
    }
    if gamma < 2 || ell < 1 {
        return Err(Error::Input(format!("need Γ ≥ 2 and ℓ ≥ 1, got Γ={gamma}, ℓ={ell}")));
    }
    if let Some(&q) = obs_support.iter().find(|&&q| q >= h.n) {
        return Err(Error::Input(format!("observable site {q} outside the {}-qubit chain", h.n)));
    }
    if h.geometry.as_ref().is_some_and(|g| g.d != 1) {
        return Err(Error::Input("shell decomposition is implemented for chains only".into()));
    }
    let n = h.n;
    let lo = *obs_support.first().unwrap();
    let hi = *obs_support.last().unwrap();
    let dist = |q: usize| if q < lo { lo - q } else { q.saturating_sub(hi) };
    let shell_of_site: Vec<usize> = (0..n).map(|q| dist(q).div_ceil(ell)).collect();

    let mut buckets: Vec<Vec<PauliTerm>> = vec![Vec::new(); gamma];
    let mut dropped = Vec::new();
    for term in h.total().terms() {
        let sites: Vec<usize> = term.support().iter().collect();
        let shells: BTreeSet<usize> = sites.iter().map(|&q| shell_of_site[q]).collect();
        let (smin, smax) = match (shells.first(), shells.last()) {
            (Some(&a), Some(&b)) => (a, b),
            // Identity terms commute with everything; keep them with H_1.
            _ => (0, 0),
        };
        let slot = if smax <= 1 {
            Some(0)
        } else if let Some(g) = (2..gamma).find(|&g| smin + 1 >= g && smax <= g) {
            Some(g - 1)
        } else if sites.iter().all(|&q| dist(q) > (gamma - 2) * ell) {
            Some(gamma - 1)
        } else {
            None
        };
        match slot {
            Some(s) => buckets[s].push(term),
            None => dropped.push(term),
        }
    }
    let groups = buckets
        .into_iter()
        .enumerate()
        .map(|(i, ts)| Ok((format!("H{}", i + 1), PauliSum::from_terms(n, ts)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut groups = GroupedHamiltonian::new(n, groups)?;
    groups.geometry = h.geometry.clone();
    let dropped = PauliSum::from_terms(n, dropped)?;
    let truncation_weight = dropped.coefficient_one_norm();
    Ok(ShellDecomposition {
        gamma,
        ell,
        groups,
        obs_support: obs_support.clone(),
        shell_of_site,
        dropped,
        truncation_weight,
    })
}

/// Paper-order permutation `π_υ` (0-based group indices, listed from the
/// observable outward): evens first for odd `υ`, odds first for even `υ`.
pub fn parity_permutation(upsilon_from_obs: usize, gamma: usize) -> Vec<usize> {
    // 1-based labels: even labels are 0-based odd indices.
    let evens = (1..gamma).step_by(2);
    let odds = (0..gamma).step_by(2);
    if upsilon_from_obs % 2 == 1 {
        evens.chain(odds).collect()
    } else {
        odds.chain(evens).collect()
    }
}

/// Suzuki formula of order `base_order` for the two commuting classes
/// (even- and odd-labelled groups), spread over `Γ` groups with parity
/// permutations. `Υ` is the formula's stage count.
pub fn constrained_schedule(upsilon: usize, gamma: usize, base_order: usize) -> Result<FormulaSchedule> {
    if !matches!(base_order, 2 | 4) {
        return Err(Error::Input(format!("base order must be 2 or 4, got {base_order}")));
    }
    let base = suzuki(base_order, 2)?;
    if base.upsilon() != upsilon {
        return Err(Error::Input(format!(
            "order {base_order} has {} stages, not Υ = {upsilon}",
            base.upsilon()
        )));
    }
    if gamma < 2 {
        return Err(Error::Input("need at least two groups".into()));
    }
    let mut coeffs = Vec::with_capacity(upsilon);
    let mut perms = Vec::with_capacity(upsilon);
    for k in 0..upsilon {
        let mut order = parity_permutation(upsilon - k, gamma);
        // Listed from the observable outward, so applied in reverse.
        order.reverse();
        // The base stage applies even-labelled groups (base group 0) first
        // when forward.
        let evens_first = base.perms[k][0] == 0;
        debug_assert_eq!(evens_first, order[0] % 2 == 1 || gamma == 1);
        coeffs.push(vec![base.coeffs[k][0]; gamma]);
        perms.push(order);
    }
    FormulaSchedule::new(coeffs, perms, base_order)
}

/// Keeps in stage `υ` (counted from the observable) only the exponentials
/// of `H_1..H_υ`. The result is a list of exponentials in application order.
pub fn reduced_formula(s: &FormulaSchedule) -> Vec<Exponential> {
    let upsilon = s.upsilon();
    let mut out = Vec::new();
    for k in 0..upsilon {
        let from_obs = upsilon - k;
        out.extend(s.stage(k).into_iter().filter(|e| e.group < from_obs));
    }
    out
}

/// `‖S̃†BS̃ - S̋†BS̋‖` for one step of the constrained formula at time `t`,
/// with `Υ = Γ - 1` stages (base order 2 for `Γ = 3`, 4 for `Γ = 11`).
pub fn cancellation_check(d: &ShellDecomposition, obs: &PauliSum, t: f64) -> Result<f64> {
    let upsilon = d.gamma - 1;
    let base_order = match upsilon {
        2 => 2,
        10 => 4,
        _ => return Err(Error::Contract(format!("no constrained formula with Υ = Γ - 1 = {upsilon}"))),
    };
    if obs.n() != d.groups.n {
        return Err(Error::Dimension("observable and Hamiltonian differ in qubit count".into()));
    }
    let lo = *d.obs_support.first().unwrap();
    let hi = *d.obs_support.last().unwrap();
    if obs.support().iter().any(|&q| q < lo || q > hi) {
        return Err(Error::Contract("observable acts outside the shell centre".into()));
    }
    let s = constrained_schedule(upsilon, d.gamma, base_order)?;
    let mut prop = Propagator::with_observables(&d.groups, TimeMode::Real, &[obs])?;
    let b = prop.restrict(obs)?;
    let full = prop.product(&s.raw_exponentials(), t)?;
    let reduced = prop.product(&reduced_formula(&s), t)?;
    let lhs = full.adjoint().matmul(&b).matmul(&full);
    let rhs = reduced.adjoint().matmul(&b).matmul(&reduced);
    // Both conjugates are Hermitian.
    Ok(lhs.sub(&rhs).hermitian_norm())
}

/// Light-cone simulation plan with all asymptotic constants set to 1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LightConePlan {
    pub alpha: f64,
    pub d: usize,
    pub p: usize,
    pub t: f64,
    pub eps: f64,
    pub x0: f64,
    /// Stage count `Υ` of the order-`p` Suzuki formula, and `Γ = Υ + 1`.
    pub upsilon: f64,
    pub gamma: f64,
    pub r: u64,
    pub ell: u64,
    /// `x₀ + rΓℓ`.
    pub radius: f64,
    /// `(radius^d·t)^{1+1/p+d/(α-d)}`.
    pub gate_count: f64,
    /// Exponent of `t` in the gate count at this `p`.
    pub gate_exponent: f64,
    /// Its `p → ∞` limit.
    pub gate_exponent_limit: f64,
    /// Light-cone exponent `(p(α-2d)-(α-d)(d-1))/((p+1)(α-d))`: the commutator
    /// bound is `O(1)` once `t ≳ ρ^{this}`.
    pub light_cone_exponent: f64,
}

fn check_light_cone_regime(alpha: f64, d: usize, p: usize) -> Result<()> {
    let df = d as f64;
    if d < 1 || !(alpha > 2.0 * df) {
        return Err(Error::Input(format!("need α > 2d, got α={alpha}, d={d}")));
    }
    let pmin = (alpha - df) * (df - 1.0) / (alpha - 2.0 * df);
    if !(p as f64 > pmin) {
        return Err(Error::Input(format!("need p > (α-d)(d-1)/(α-2d) = {pmin}")));
    }
    Ok(())
}

/// Exponent of `t` in the light-cone gate count at order `p`.
pub fn light_cone_gate_exponent(alpha: f64, d: usize, p: usize) -> Result<f64> {
    check_light_cone_regime(alpha, d, p)?;
    let (a, d, p) = (alpha, d as f64, p as f64);
    let num = (a * (p + 1.0) - d) * (a * (d * p + p + 1.0) - (d + 2.0) * d * p - d);
    let den = p * (a - d) * (a + d * d - d * (a + 2.0 * p + 1.0) + a * p);
    Ok(num / den)
}

/// `(1 + d(α-d)/(α-2d))(1 + d/(α-d))`.
pub fn light_cone_gate_exponent_limit(alpha: f64, d: usize) -> Result<f64> {
    check_light_cone_regime(alpha, d, usize::MAX)?;
    let (a, d) = (alpha, d as f64);
    Ok((1.0 + d * (a - d) / (a - 2.0 * d)) * (1.0 + d / (a - d)))
}

/// Lieb-Robinson-type commutator bound `C(t, ρ)` and the Trotter number
/// `r = ρ^{(α-d)/(α-d+p)} t^{p/(α-d+p)}` behind it.
pub fn lieb_robinson_bound(alpha: f64, d: usize, p: usize, t: f64, rho: f64) -> Result<(f64, f64)> {
    check_light_cone_regime(alpha, d, p)?;
    if !(t > 0.0) || !(rho > 0.0) {
        return Err(Error::Input("need t > 0 and ρ > 0".into()));
    }
    let (a, df, pf) = (alpha, d as f64, p as f64);
    let r = rho.powf((a - df) / (a - df + pf)) * t.powf(pf / (a - df + pf));
    let c = t.powf((pf + 1.0) * (a - df) / (a - df + pf))
        / rho.powf((pf * (a - 2.0 * df) - (a - df) * (df - 1.0)) / (a - df + pf));
    Ok((c, r))
}

pub fn light_cone_planner(alpha: f64, d: usize, p: usize, t: f64, eps: f64, x0: f64) -> Result<LightConePlan> {
    check_light_cone_regime(alpha, d, p)?;
    if !(t > 0.0) || !(eps > 0.0) || !(x0 >= 0.0) {
        return Err(Error::Input("need t > 0, ε > 0 and x₀ ≥ 0".into()));
    }
    let upsilon = match p {
        1 => 1.0,
        _ if p % 2 == 0 => 2.0 * 5f64.powi(p as i32 / 2 - 1),
        _ => return Err(Error::Input(format!("no product formula of odd order {p} > 1"))),
    };
    let gamma = upsilon + 1.0;
    let (a, df, pf) = (alpha, d as f64, p as f64);
    let den = pf * (a - 2.0 * df) - (a - df) * (df - 1.0);
    let r = (t.powf((pf * (a - 2.0 * df) + a - df) / den) / eps.powf((a - df) / den)).ceil().max(1.0);
    let ell = (r / t).powf(pf / (a - df)).ceil().max(1.0);
    let radius = x0 + r * gamma * ell;
    let gate_count = (radius.powi(d as i32) * t).powf(1.0 + 1.0 / pf + df / (a - df));
    Ok(LightConePlan {
        alpha,
        d,
        p,
        t,
        eps,
        x0,
        upsilon,
        gamma,
        r: r as u64,
        ell: ell as u64,
        radius,
        gate_count,
        gate_exponent: light_cone_gate_exponent(alpha, d, p)?,
        gate_exponent_limit: light_cone_gate_exponent_limit(alpha, d)?,
        light_cone_exponent: den / ((pf + 1.0) * (a - df)),
    })
}

/// `Z` on one site, a convenient local observable.
pub fn z_observable(n: usize, site: usize) -> PauliSum {
    PauliSum::from_term(PauliTerm::from_ops(n, 1.0, &[(site, 'Z')]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{heisenberg_chain, power_law_heisenberg};
    use crate::pauli::commutator;

    fn site(q: usize) -> BTreeSet<usize> {
        BTreeSet::from([q])
    }

    #[test]
    fn partition_is_exact() {
        let h = power_law_heisenberg(10, 4.0, 3).unwrap();
        let d = shell_decomposition(&h, &site(0), 2, 3).unwrap();
        let rebuilt = d.groups.total().add(&d.dropped).unwrap();
        assert!(rebuilt.sub(&h.total()).unwrap().coefficient_one_norm() < 1e-12);
        let counted: usize = d.groups.groups.iter().map(|g| g.op.len()).sum::<usize>() + d.dropped.len();
        assert_eq!(counted, h.total().len());
        assert!(d.truncation_weight > 0.0);
    }

    #[test]
    fn nearest_neighbor_drops_nothing() {
        let h = heisenberg_chain(12, 1).unwrap();
        for ell in 1..4 {
            for gamma in 2..6 {
                let d = shell_decomposition(&h, &site(4), ell, gamma).unwrap();
                assert_eq!(d.truncation_weight, 0.0, "ℓ={ell} Γ={gamma}");
            }
        }
    }

    #[test]
    fn parity_classes_commute_and_outer_groups_miss_the_observable() {
        let h = power_law_heisenberg(12, 3.0, 5).unwrap();
        let obs = z_observable(12, 5);
        for gamma in [3, 5, 6] {
            let d = shell_decomposition(&h, &site(5), 1, gamma).unwrap();
            let g = &d.groups.groups;
            for a in 0..gamma {
                for b in (a + 2..gamma).step_by(2) {
                    assert!(commutator(&g[a].op, &g[b].op).unwrap().is_empty(), "H{} H{}", a + 1, b + 1);
                }
                if a >= 1 {
                    assert!(commutator(&g[a].op, &obs).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn constrained_schedule_layout() {
        let s = constrained_schedule(2, 3, 2).unwrap();
        assert_eq!(s.upsilon(), 2);
        // Stage nearest the observable (applied last), listed outward: 2,1,3.
        let mut near = s.perms[1].clone();
        near.reverse();
        assert_eq!(near, vec![1, 0, 2]);
        for sum in s.group_sums() {
            assert!((sum - 1.0).abs() < 1e-14);
        }
        let s4 = constrained_schedule(10, 11, 4).unwrap();
        for sum in s4.group_sums() {
            assert!((sum - 1.0).abs() < 1e-12);
        }
        assert!(constrained_schedule(3, 4, 2).is_err());
    }

    #[test]
    fn reduced_formula_is_triangular() {
        let s = constrained_schedule(2, 3, 2).unwrap();
        let r = reduced_formula(&s);
        assert_eq!(r.len(), 3);
        // Applied first: the far stage keeps H1, H2; the near stage keeps H1.
        let groups: Vec<usize> = r.iter().map(|e| e.group).collect();
        assert_eq!(groups.iter().filter(|&&g| g == 0).count(), 2);
        assert_eq!(groups.last(), Some(&0));
        let s4 = constrained_schedule(10, 11, 4).unwrap();
        assert_eq!(reduced_formula(&s4).len(), 55);
        let s4 = constrained_schedule(4, 5, 4);
        assert!(s4.is_err());
    }

    #[test]
    fn cancellation_identity_small() {
        let h = heisenberg_chain(8, 2).unwrap();
        let d = shell_decomposition(&h, &site(0), 2, 3).unwrap();
        let obs = z_observable(8, 0);
        assert!(cancellation_check(&d, &obs, 0.0).unwrap() < 1e-12);
        for t in [0.1, 0.3, 0.5] {
            assert!(cancellation_check(&d, &obs, t).unwrap() <= 1e-10);
        }
        let outside = z_observable(8, 3);
        assert!(matches!(cancellation_check(&d, &outside, 0.1), Err(Error::Contract(_))));
    }

    #[test]
    fn cancellation_fails_for_unconstrained_order() {
        // Dropping exponentials from plain Suzuki stages does not cancel.
        let h = heisenberg_chain(8, 2).unwrap();
        let d = shell_decomposition(&h, &site(0), 2, 3).unwrap();
        let obs = z_observable(8, 0);
        let s = suzuki(2, 3).unwrap();
        let mut prop = Propagator::with_observables(&d.groups, TimeMode::Real, &[&obs]).unwrap();
        let b = prop.restrict(&obs).unwrap();
        let full = prop.product(&s.raw_exponentials(), 0.4).unwrap();
        let reduced = prop.product(&reduced_formula(&s), 0.4).unwrap();
        let diff = full.adjoint().matmul(&b).matmul(&full).sub(&reduced.adjoint().matmul(&b).matmul(&reduced));
        assert!(diff.spectral_norm() > 1e-3);
    }

    #[test]
    fn retained_generators_stay_in_the_light_cone() {
        let h = power_law_heisenberg(12, 4.0, 1).unwrap();
        let d = shell_decomposition(&h, &site(0), 2, 3).unwrap();
        let s = constrained_schedule(2, 3, 2).unwrap();
        for e in reduced_formula(&s) {
            assert!(d.group_radius(e.group + 1).unwrap_or(0) <= 2 * d.ell);
        }
    }

    #[test]
    fn light_cone_exponents() {
        let g = light_cone_gate_exponent_limit(1e6, 1).unwrap();
        assert!((g - 2.0).abs() < 1e-3);
        assert!((light_cone_gate_exponent_limit(4.0, 1).unwrap() - 10.0 / 3.0).abs() < 1e-12);
        let finite = light_cone_gate_exponent(4.0, 1, 1000).unwrap();
        assert!((finite - 10.0 / 3.0).abs() < 1e-2);
        let plan = light_cone_planner(3.0, 1, 1000, 10.0, 1e-2, 1.0).unwrap();
        assert!((plan.light_cone_exponent - 0.5).abs() < 1e-3);
        assert!(light_cone_planner(2.0, 1, 4, 10.0, 1e-2, 1.0).is_err());
        assert!(light_cone_planner(5.0, 2, 1, 10.0, 1e-2, 1.0).is_err());
    }

    #[test]
    fn light_cone_plan_values() {
        let plan = light_cone_planner(4.0, 1, 2, 10.0, 1e-2, 1.0).unwrap();
        // d = 1: den = p(α-2d) = 4; r = t^{(4+3)/4}/ε^{3/4}.
        let r = (10f64.powf(7.0 / 4.0) / 1e-2f64.powf(0.75)).ceil();
        assert_eq!(plan.r, r as u64);
        assert_eq!(plan.ell, (r / 10.0).powf(2.0 / 3.0).ceil() as u64);
        assert_eq!(plan.gamma, 3.0);
        assert_eq!(plan.radius, 1.0 + r * 3.0 * plan.ell as f64);
        let (c, rr) = lieb_robinson_bound(4.0, 1, 2, 1.0, 100.0).unwrap();
        assert!(c < 1.0 && rr > 1.0);
    }
}
