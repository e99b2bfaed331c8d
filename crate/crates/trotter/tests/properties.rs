//! Randomized invariants of the algebra, the formulas and the bounds.

use num_complex::Complex64 as C64;
use proptest::prelude::*;

use trotter::bounds::{alpha_tilde, fourth_order_bound, one_norm_bound, standard_upsilon, tight_low_order_bound, NormMode};
use trotter::dense::DenseOperator;
use trotter::formula::{empirical_error, evaluate, lie_trotter, order_condition_check, suzuki, TimeMode};
use trotter::hamiltonians::{
    group_terms, heisenberg_chain, local_terms, power_law_heisenberg, tfim, truncate_power_law, GroupedHamiltonian, Grouping,
};
use trotter::local_obs::shell_decomposition;
use trotter::pauli::{commutator, nested_commutator, PauliSum};
use trotter::planner::{plan, Model, PlanParams};
use trotter::qmc::{multiplicative_factor_check, tfim_trotter_number};
use trotter::sectors::pauli_norm;

fn letters(n: usize) -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')], n)
        .prop_map(|v| v.into_iter().collect())
}

fn pauli_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    proptest::collection::vec((letters(n), -1.0..1.0f64, -1.0..1.0f64), 1..=max_terms).prop_map(move |items| {
        let items: Vec<(&str, C64)> = items.iter().map(|(s, re, im)| (s.as_str(), C64::new(*re, *im))).collect();
        PauliSum::parse_terms(n, items).unwrap()
    })
}

fn hermitian_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    proptest::collection::vec((letters(n), -1.0..1.0f64), 1..=max_terms).prop_map(move |items| {
        let items: Vec<(&str, C64)> = items.iter().map(|(s, re)| (s.as_str(), C64::new(*re, 0.0))).collect();
        PauliSum::parse_terms(n, items).unwrap()
    })
}

/// `Γ` random Hermitian groups on `n` qubits.
fn grouped(n: usize, gamma: usize) -> impl Strategy<Value = GroupedHamiltonian> {
    proptest::collection::vec(hermitian_sum(n, 4), gamma).prop_map(|ops| GroupedHamiltonian::from_ops(ops).unwrap())
}

fn random_unitary(n: usize) -> impl Strategy<Value = DenseOperator> {
    hermitian_sum(n, 8).prop_map(|h| h.to_dense().unwrap().expm_i_hermitian(1.3).unwrap())
}

fn dense_close(a: &DenseOperator, b: &DenseOperator, tol: f64) -> bool {
    a.sub(b).max_abs() <= tol
}

fn model(n: usize, seed: u64, which: u8) -> GroupedHamiltonian {
    match which {
        0 => group_terms(&heisenberg_chain(n, seed).unwrap(), &Grouping::EvenOdd).unwrap(),
        1 => group_terms(&heisenberg_chain(n, seed).unwrap(), &Grouping::XYZ).unwrap(),
        2 => group_terms(&power_law_heisenberg(n, 1.5, seed).unwrap(), &Grouping::XYZ).unwrap(),
        _ => group_terms(&power_law_heisenberg(n, 4.0, seed).unwrap(), &Grouping::XYZ).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutator_matches_dense((a, b) in (1usize..=4).prop_flat_map(|n| (pauli_sum(n, 20), pauli_sum(n, 20)))) {
        let sym = commutator(&a, &b).unwrap().to_dense().unwrap();
        let dense = a.to_dense().unwrap().commutator(&b.to_dense().unwrap());
        prop_assert!(dense_close(&sym, &dense, 1e-12));
    }

    #[test]
    fn one_norm_dominates_spectral_norm(s in (1usize..=5).prop_flat_map(|n| pauli_sum(n, 20))) {
        prop_assert!(s.coefficient_one_norm() >= s.to_dense().unwrap().spectral_norm() * (1.0 - 1e-12));
    }

    #[test]
    fn nested_commutator_is_right_nested((a, b, c) in (1usize..=4).prop_flat_map(|n| (pauli_sum(n, 6), pauli_sum(n, 6), pauli_sum(n, 6)))) {
        let nested = nested_commutator(&[&c, &b, &a]).unwrap();
        prop_assert_eq!(nested, commutator(&c, &commutator(&b, &a).unwrap()).unwrap());
    }

    #[test]
    fn commutator_support((a, b) in (2usize..=6).prop_flat_map(|n| (pauli_sum(n, 8), pauli_sum(n, 8)))) {
        let c = commutator(&a, &b).unwrap();
        let union: std::collections::BTreeSet<usize> = a.support().union(&b.support()).copied().collect();
        prop_assert!(c.support().is_subset(&union));
        if a.support().is_disjoint(&b.support()) {
            prop_assert!(c.is_empty());
        }
    }

    #[test]
    fn simplified_sums_are_canonical(s in (1usize..=6).prop_flat_map(|n| pauli_sum(n, 12))) {
        let n = s.n();
        let diff = s.sub(&s).unwrap();
        prop_assert!(diff.is_empty());
        for t in s.terms() {
            prop_assert!(t.coeff != C64::new(0.0, 0.0));
            prop_assert!(t.support().iter().all(|q| q < n));
            let single = PauliSum::from_term(t.clone());
            prop_assert_eq!(pauli_norm(&single).unwrap(), t.coeff.norm());
        }
    }

    #[test]
    fn hermitian_sums_are_hermitian(s in (1usize..=4).prop_flat_map(|n| hermitian_sum(n, 10))) {
        let d = s.to_dense().unwrap();
        prop_assert!(s.is_hermitian(1e-12));
        prop_assert!(dense_close(&d, &d.adjoint(), 1e-12));
    }

    #[test]
    fn exponentials_compose(h in (1usize..=4).prop_flat_map(|n| hermitian_sum(n, 10)), a in -2.0..2.0f64, b in -2.0..2.0f64) {
        let d = h.to_dense().unwrap();
        let lhs = d.expm_i_hermitian(a).unwrap().matmul(&d.expm_i_hermitian(b).unwrap());
        let u = d.expm_i_hermitian(a + b).unwrap();
        prop_assert!(dense_close(&lhs, &u, 1e-10));
        prop_assert!(dense_close(&u.matmul(&u.adjoint()), &DenseOperator::identity(d.dim()), 1e-10));
    }

    #[test]
    fn spectral_norm_is_unitarily_invariant((m, u, v) in (1usize..=4).prop_flat_map(|n| (pauli_sum(n, 10), random_unitary(n), random_unitary(n)))) {
        let m = m.to_dense().unwrap();
        let rotated = u.matmul(&m).matmul(&v);
        prop_assert!((rotated.spectral_norm() - m.spectral_norm()).abs() <= 1e-9);
    }

    #[test]
    fn hermitian_norm_is_largest_eigenvalue(h in (1usize..=5).prop_flat_map(|n| hermitian_sum(n, 12))) {
        let d = h.to_dense().unwrap();
        let top = d.eigvals_hermitian().unwrap().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!((d.spectral_norm() - top).abs() <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grouping_preserves_the_operator(n in 2usize..=8, seed in any::<u64>(), which in 0u8..4) {
        let h = model(n, seed, which);
        let flat = if which < 2 { heisenberg_chain(n, seed).unwrap() } else {
            power_law_heisenberg(n, if which == 2 { 1.5 } else { 4.0 }, seed).unwrap()
        };
        prop_assert!(dense_close(&h.total().to_dense().unwrap(), &flat.total().to_dense().unwrap(), 1e-12));
        prop_assert!(h.total().is_hermitian(1e-12));
    }

    #[test]
    fn chain_groups_commute_internally(n in 2usize..=12, seed in any::<u64>(), xyz in any::<bool>()) {
        let h = model(n, seed, xyz as u8);
        for g in &h.groups {
            let terms = local_terms(&g.op);
            for (i, a) in terms.iter().enumerate() {
                for b in &terms[i + 1..] {
                    prop_assert!(commutator(a, b).unwrap().is_empty());
                }
            }
        }
    }

    #[test]
    fn truncation_error_is_bounded(n in 3usize..=7, seed in any::<u64>(), alpha in 0.5..4.0f64, ell in 1usize..4, t in prop_oneof![Just(0.1), Just(1.0)]) {
        let h = power_law_heisenberg(n, alpha, seed).unwrap();
        let (ht, removed) = truncate_power_law(&h, ell).unwrap();
        let diff = h.total().sub(&ht.total()).unwrap().to_dense().unwrap().spectral_norm();
        prop_assert!(diff <= removed * (1.0 + 1e-12) + 1e-14);
        let u = h.total().to_dense().unwrap().expm_i_hermitian(t).unwrap();
        let ut = ht.total().to_dense().unwrap().expm_i_hermitian(t).unwrap();
        prop_assert!(u.sub(&ut).spectral_norm() <= diff * t * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn suzuki_schedules_are_consistent(order in prop_oneof![Just(2usize), Just(4), Just(6), Just(8)], gamma in 1usize..=4) {
        let s = suzuki(order, gamma).unwrap();
        for (g, sum) in s.group_sums().iter().enumerate() {
            prop_assert!((sum - 1.0).abs() <= 1e-12, "group {} sums to {}", g, sum);
        }
        let flat = s.exponentials();
        let reversed: Vec<_> = flat.iter().rev().copied().collect();
        prop_assert_eq!(flat, reversed);
    }

    #[test]
    fn symmetric_formulas_reverse_in_time(h in (2usize..=4).prop_flat_map(|n| (2usize..=3).prop_flat_map(move |g| grouped(n, g))), order in prop_oneof![Just(2usize), Just(4)], t in 0.01..1.0f64) {
        let s = suzuki(order, h.gamma()).unwrap();
        let fwd = evaluate(&s, &h, t, TimeMode::Real).unwrap();
        let back = evaluate(&s, &h, -t, TimeMode::Real).unwrap();
        prop_assert!(dense_close(&fwd.matmul(&back), &DenseOperator::identity(fwd.dim()), 1e-10));
    }

    #[test]
    fn order_slopes_ignore_group_order(seed in any::<u64>(), order in prop_oneof![Just(1usize), Just(2), Just(4)], perm in Just(vec![2usize, 0, 1])) {
        let h = model(4, seed, 1);
        let s = if order == 1 { lie_trotter(3).unwrap() } else { suzuki(order, 3).unwrap() };
        let a = order_condition_check(&h, &s).unwrap();
        let b = order_condition_check(&h.permuted(&perm), &s).unwrap();
        prop_assert!(a.passed && b.passed);
        prop_assert!((a.additive_slope - b.additive_slope).abs() <= 0.3);
        prop_assert!((a.exponentiated_slope - b.exponentiated_slope).abs() <= 0.3);
    }

    #[test]
    fn bounds_dominate_the_error(n in 2usize..=6, seed in any::<u64>(), which in 0u8..4, t in 0.01..1.0f64) {
        let h = model(n, seed, which);
        for order in [1usize, 2] {
            let s = if order == 1 { lie_trotter(h.gamma()).unwrap() } else { suzuki(2, h.gamma()).unwrap() };
            let bound = tight_low_order_bound(&h, t, order, NormMode::DenseExact).unwrap().value;
            prop_assert!(empirical_error(&h, &s, t, 1).unwrap() <= bound * (1.0 + 1e-9) + 1e-13);
        }
        if h.gamma() <= 3 {
            let bound = fourth_order_bound(&h, t, NormMode::DenseExact).unwrap().value;
            prop_assert!(empirical_error(&h, &suzuki(4, h.gamma()).unwrap(), t, 1).unwrap() <= bound * (1.0 + 1e-9) + 1e-13);
        }
    }

    #[test]
    fn bounds_are_homogeneous(n in 2usize..=6, seed in any::<u64>(), which in 0u8..4, t in 0.01..2.0f64) {
        let h = model(n, seed, which);
        for order in [1usize, 2] {
            let a = tight_low_order_bound(&h, t, order, NormMode::DenseExact).unwrap().value;
            let b = tight_low_order_bound(&h, 2.0 * t, order, NormMode::DenseExact).unwrap().value;
            prop_assert!((b - a * 2f64.powi(order as i32 + 1)).abs() <= 1e-9 * b);
        }
        let a = fourth_order_bound(&h, t, NormMode::DenseExact).unwrap().value;
        let b = fourth_order_bound(&h, 2.0 * t, NormMode::DenseExact).unwrap().value;
        prop_assert!((b - 32.0 * a).abs() <= 1e-9 * b);
    }

    #[test]
    fn looser_norms_give_larger_bounds(n in 2usize..=6, seed in any::<u64>(), which in 0u8..4, t in 0.01..1.0f64) {
        let h = model(n, seed, which);
        let exact = fourth_order_bound(&h, t, NormMode::DenseExact).unwrap();
        let coeff = fourth_order_bound(&h, t, NormMode::Coeff1Norm).unwrap();
        prop_assert!(coeff.value >= exact.value * (1.0 - 1e-12));
        let total: f64 = exact.per_term.iter().map(|b| b.coefficient * b.norm).sum();
        prop_assert!((total - exact.value).abs() <= 1e-10 * exact.value.max(1.0));
    }

    #[test]
    fn one_norm_bound_is_looser(n in 4usize..=8, seed in any::<u64>(), xyz in any::<bool>(), r in 100u64..2000) {
        let h = model(n, seed, xyz as u8);
        let tau = n as f64 / r as f64;
        let norms: Vec<f64> = h.groups.iter().map(|g| pauli_norm(&g.op).unwrap()).collect();
        let loose = one_norm_bound(&norms, standard_upsilon(4).unwrap(), 4, tau, true).unwrap();
        prop_assert!(loose >= fourth_order_bound(&h, tau, NormMode::DenseExact).unwrap().value);
    }

    #[test]
    fn alpha_tilde_ignores_group_order(h in (2usize..=4).prop_flat_map(|n| grouped(n, 3)), p in 1usize..=2) {
        let a = alpha_tilde(&h, p, NormMode::DenseExact).unwrap().value;
        let b = alpha_tilde(&h.permuted(&[2, 0, 1]), p, NormMode::DenseExact).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn shells_of_equal_parity_commute(n in 6usize..=14, seed in any::<u64>(), site in 0usize..6, ell in 1usize..=3, gamma in 3usize..=6, alpha in prop_oneof![Just(None), Just(Some(4.0))]) {
        let h = match alpha {
            None => heisenberg_chain(n, seed).unwrap(),
            Some(a) => power_law_heisenberg(n, a, seed).unwrap(),
        };
        let d = shell_decomposition(&h, &[site].into_iter().collect(), ell, gamma).unwrap();
        let total = d.truncated().unwrap().add(&d.dropped).unwrap();
        prop_assert!(total.sub(&h.total()).unwrap().coefficient_one_norm() <= 1e-12);
        let obs = PauliSum::from_term(trotter::pauli::PauliTerm::from_ops(n, 1.0, &[(site, 'Z')]));
        for (i, gi) in d.groups.groups.iter().enumerate() {
            if i >= 1 {
                prop_assert!(commutator(&gi.op, &obs).unwrap().is_empty());
            }
            for gj in d.groups.groups.iter().skip(i + 2).step_by(2) {
                prop_assert!(commutator(&gi.op, &gj.op).unwrap().is_empty());
            }
        }
    }

    #[test]
    fn planner_is_monotone(which in 0usize..6, t in 1.0..1e3f64, eps in 1e-4..1e-1f64, n in 10.0..1e3f64) {
        let model = Model::ALL[which];
        let base = PlanParams { n, t, eps, alpha: 3.0, ..PlanParams::default() };
        let p0 = plan(model, &base).unwrap();
        prop_assert!(p0.r >= 1 && p0.gates >= p0.r as f64);
        let later = plan(model, &PlanParams { t: 2.0 * t, ..base.clone() }).unwrap();
        let tighter = plan(model, &PlanParams { eps: eps / 2.0, ..base.clone() }).unwrap();
        prop_assert!(later.r >= p0.r);
        prop_assert!(tighter.r >= p0.r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn symmetric_split_respects_eps(n in 2usize..=6, js in proptest::collection::vec(0.1..1.0f64, 6), hs in proptest::collection::vec(0.1..1.0f64, 6), beta in 0.2..2.0f64, eps in prop_oneof![Just(0.1), Just(0.01)]) {
        let couplings = (0..n - 1).map(|u| ((u, u + 1), js[u])).collect();
        let fields = (0..n).map(|u| (u, hs[u])).collect();
        let (a, b) = tfim(n, &couplings, &fields).unwrap();
        let p = tfim_trotter_number(&a, &b, beta, eps, NormMode::DenseExact).unwrap();
        prop_assert!(p.r.is_power_of_two());
        prop_assert!(p.constraints.iter().all(|c| p.r as f64 >= c.value));
        let (hi, _) = multiplicative_factor_check(&a, &b, beta, p.r).unwrap();
        prop_assert!(hi <= eps.exp());
    }
}
