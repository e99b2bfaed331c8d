//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr,
//! outside the test harness's capture, then asserts.
//!
//! The benchmark tests run the exact simulation at n = 10 and take minutes
//! each; run with `--release` or the workspace test profile.

use std::io::Write;
use std::time::Instant;

use trotter::bench::{run_bench, summarize, BenchConfig, BenchModel, TimeRule};
use trotter::bounds::{
    comm_trotter_number, counting_fourth_order_prefactor, fourth_order_bound, one_norm_bound,
    FourthOrderCoefficientTable, NormMode,
};
use trotter::checks::run_suite;
use trotter::formula::{loglog_slope, suzuki, suzuki_u};
use trotter::hamiltonians::{group_terms, heisenberg_chain, power_law_heisenberg, Grouping};

/// Seed of the randomized property suites.
const SUITE_SEED: u64 = 7;

/// Sizes and slack of the bound-side exponent fits.
const FIT_SIZES: [usize; 7] = [10, 16, 32, 64, 96, 128, 256];
const FIT_TOLERANCE: f64 = 0.1;

fn verdict(name: &str, ok: bool, detail: &str, start: Instant) {
    let line = format!("{} {name}: {detail} ({:.1?})\n", if ok { "PASS" } else { "FAIL" }, start.elapsed());
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "{name}: {detail}");
}

fn within(x: f64, (lo, hi): (f64, f64)) -> bool {
    (lo..=hi).contains(&x)
}

fn around(target: f64, rel: f64) -> (f64, f64) {
    (target * (1.0 - rel), target * (1.0 + rel))
}

struct BenchWindows {
    empirical: (f64, f64),
    bound: (f64, f64),
    ratio: (f64, f64),
}

fn bench_case(name: &str, model: BenchModel, ordering: &str, mode: NormMode, w: BenchWindows) {
    let start = Instant::now();
    let cfg = BenchConfig {
        model,
        ordering: ordering.into(),
        sizes: vec![10],
        time_rule: TimeRule::EqualsN,
        eps: 1e-3,
        instances: 5,
        seed: 1,
        order: 4,
        mode,
        skip_empirical: false,
    };
    let rows = run_bench(&cfg).unwrap();
    let s = &summarize(&rows)[0];
    let emp = s.r_empirical.unwrap().0;
    let bound = s.r_bound_ours.0;
    let ratio = s.ratio.unwrap().0;
    let ok = within(emp, w.empirical) && within(bound, w.bound) && within(ratio, w.ratio);
    let detail = format!(
        "mean r_empirical {emp:.1} in {:?}, mean r_bound {bound:.1} in {:?}, ratio {ratio:.2} in [{:.2}, {:.2}]",
        w.empirical, w.bound, w.ratio.0, w.ratio.1
    );
    verdict(name, ok, &detail, start);
}

#[test]
fn even_odd_chain_benchmark() {
    bench_case(
        "even-odd chain n=10",
        BenchModel::HeisenbergNn,
        "even-odd",
        NormMode::Cluster,
        BenchWindows { empirical: (120.0, 133.0), bound: (580.0, 710.0), ratio: (4.6, 5.6) },
    );
}

#[test]
fn xyz_chain_benchmark() {
    bench_case(
        "x-y-z chain n=10",
        BenchModel::HeisenbergNn,
        "x-y-z",
        NormMode::Cluster,
        BenchWindows { empirical: (127.0, 142.0), bound: (870.0, 1065.0), ratio: around(7.2, 0.10) },
    );
}

#[test]
fn power_law_all_to_all_benchmark() {
    bench_case(
        "power-law chain α=0 n=10",
        BenchModel::HeisenbergPl { alpha: 0.0 },
        "x-y-z",
        NormMode::DenseExact,
        BenchWindows { empirical: (500.0, 610.0), bound: (5050.0, 6170.0), ratio: around(10.2, 0.15) },
    );
}

#[test]
fn power_law_fast_decay_benchmark() {
    bench_case(
        "power-law chain α=4 n=10",
        BenchModel::HeisenbergPl { alpha: 4.0 },
        "x-y-z",
        NormMode::DenseExact,
        BenchWindows { empirical: (116.0, 142.0), bound: (800.0, 975.0), ratio: around(6.9, 0.15) },
    );
}

fn suite_case(name: &str, suite: &str) {
    let start = Instant::now();
    let rep = run_suite(suite, SUITE_SEED).unwrap();
    let mut detail = format!("{} cases, {} violations", rep.cases, rep.violations);
    if rep.worst_ratio.is_finite() {
        detail += &format!(", worst measured/allowed {:.3e}", rep.worst_ratio);
    }
    if let Some(first) = rep.failures.first() {
        detail += &format!(", first: {first}");
    }
    verdict(name, rep.passed(), &detail, start);
}

#[test]
fn upper_bound_dominance() {
    suite_case("bounds dominate single-step errors", "bound-dominance");
}

#[test]
fn order_conditions() {
    suite_case("order conditions p=1,2,4,6", "order-conditions");
}

#[test]
fn conjugation_expansion() {
    suite_case("conjugation remainder ≤ α_comm τ^p/p!", "conjugation-remainder");
}

#[test]
fn cancellation_identity() {
    suite_case("reduced formula cancellation n=12", "cancellation");
}

#[test]
fn qmc_multiplicative_error() {
    suite_case("QMC multiplicative factor ε=0.1", "qmc-multiplicative");
}

#[test]
fn counting_bound_dominance() {
    suite_case("counting bound dominates α̃", "counting-dominance");
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

#[test]
fn formula_identities() {
    let start = Instant::now();
    let mut problems = Vec::new();

    // Hand-evaluated 1-norm bound on ten parameter tuples.
    let tuples: [(&[f64], usize, usize, f64, bool); 10] = [
        (&[1.0], 1, 1, 0.1, true),
        (&[1.0], 1, 1, 0.1, false),
        (&[0.5, 0.5], 2, 2, 0.2, false),
        (&[0.3, 1.2, 0.7], 2, 2, 0.05, true),
        (&[2.0, 1.0], 10, 4, 0.01, true),
        (&[2.0, 1.0], 10, 4, 0.01, false),
        (&[0.25; 4], 50, 6, 0.001, false),
        (&[1.5, 0.0, 2.5], 1, 1, 0.3, false),
        (&[3.0, 3.0], 10, 4, 0.0, false),
        (&[0.1, 0.2, 0.3, 0.4], 250, 8, 1e-4, true),
    ];
    for (norms, upsilon, p, t, anti) in tuples {
        let sum: f64 = norms.iter().sum();
        let big = upsilon as f64 * sum;
        let (e1, e2) = if anti { (1.0, 1.0) } else { ((t * big).exp(), (t * sum).exp()) };
        let hand = t.powi(p as i32 + 1) / factorial(p + 1) * (big.powi(p as i32 + 1) * e1 + sum.powi(p as i32 + 1) * e2);
        let got = one_norm_bound(norms, upsilon, p, t, anti).unwrap();
        if (got - hand).abs() > 1e-12 * hand.max(1.0) {
            problems.push(format!("one_norm_bound{:?} = {got:e}, hand {hand:e}", (norms, upsilon, p, t, anti)));
        }
    }
    if (one_norm_bound(&[1.0], 1, 1, 0.1, true).unwrap() - 0.01).abs() > 1e-12 {
        problems.push("one_norm_bound anti-Hermitian example".into());
    }

    // Suzuki coefficients.
    let u2 = 1.0 / (4.0 - 4f64.powf(1.0 / 3.0));
    if (suzuki_u(2) - u2).abs() > 1e-14 {
        problems.push(format!("u₂ = {}, closed form {u2}", suzuki_u(2)));
    }
    let exps = suzuki(4, 2).unwrap().exponentials();
    let b3 = 1.0 - 4.0 * u2;
    if exps.len() != 11 || (exps[0].coeff - u2 / 2.0).abs() > 1e-14 || (exps[5].coeff - b3).abs() > 1e-14 || exps[5].group != 1 {
        problems.push(format!("order-4 two-group sequence {exps:?}, want a₁ = {}, b₃ = {b3}", u2 / 2.0));
    }

    // Two-summand coefficients, outermost commutator first.
    let two = [
        ("AAABA", 0.0047),
        ("AABBA", 0.0057),
        ("ABABA", 0.0046),
        ("ABBBA", 0.0074),
        ("BAABA", 0.0097),
        ("BABBA", 0.0097),
        ("BBABA", 0.0173),
        ("BBBBA", 0.0284),
    ];
    for (pattern, c) in two {
        if FourthOrderCoefficientTable::two_term(pattern) != Some(c) {
            problems.push(format!("two-term {pattern}: {:?}, want {c}", FourthOrderCoefficientTable::two_term(pattern)));
        }
    }
    if FourthOrderCoefficientTable::for_gamma(2).unwrap().len() != 8 {
        problems.push("two-term table has extra entries".into());
    }

    // Spot entries of the three-summand table.
    let three = [
        ([1, 1, 1, 3, 2], 0.0043),
        ([1, 3, 2, 3, 1], 0.0058),
        ([2, 2, 2, 2, 1], 0.0315),
        ([2, 3, 1, 3, 2], 0.0153),
        ([3, 2, 2, 2, 1], 0.0585),
        ([3, 3, 3, 3, 2], 0.0628),
    ];
    for ([i, j, k, l, m], c) in three {
        let got = FourthOrderCoefficientTable::three_term(i, j, k, l, m);
        if got != c {
            problems.push(format!("three-term c[{i},{j},{k},{l},{m}] = {got}, want {c}"));
        }
    }

    let detail = if problems.is_empty() {
        "1-norm bound on 10 tuples, u₂ and b₃, 8 two-term and 6 three-term coefficients".to_string()
    } else {
        problems.join("; ")
    };
    verdict("formula identities", problems.is_empty(), &detail, start);
}

/// Fitted exponent of the bound-side `r` in `n` at `t = n`, `ε = 1e-3`.
fn fit(prefactor: impl Fn(usize) -> f64) -> (f64, Vec<u64>) {
    let rs: Vec<u64> =
        FIT_SIZES.iter().map(|&n| comm_trotter_number(prefactor(n), 4, n as f64, 1e-3, 1.0).unwrap()).collect();
    let xs: Vec<f64> = FIT_SIZES.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = rs.iter().map(|&r| r as f64).collect();
    (loglog_slope(&xs, &ys), rs)
}

fn exponent_case(name: &str, target: f64, prefactor: impl Fn(usize) -> f64) {
    let start = Instant::now();
    let (slope, rs) = fit(prefactor);
    let ok = (slope - target).abs() <= FIT_TOLERANCE;
    verdict(name, ok, &format!("slope {slope:.3}, target {target} ± {FIT_TOLERANCE}, r = {rs:?}"), start);
}

#[test]
fn even_odd_bound_exponent() {
    exponent_case("even-odd bound exponent (cluster norms)", 1.52, |n| {
        let h = group_terms(&heisenberg_chain(n, 1).unwrap(), &Grouping::EvenOdd).unwrap();
        fourth_order_bound(&h, 1.0, NormMode::Cluster).unwrap().value
    });
}

#[test]
fn xyz_bound_exponent() {
    exponent_case("x-y-z bound exponent (cluster norms)", 1.52, |n| {
        let h = group_terms(&heisenberg_chain(n, 1).unwrap(), &Grouping::XYZ).unwrap();
        fourth_order_bound(&h, 1.0, NormMode::Cluster).unwrap().value
    });
}

#[test]
fn power_law_all_to_all_counting_exponent() {
    exponent_case("power-law α=0 counting exponent", 2.84, |n| {
        counting_fourth_order_prefactor(&group_terms(&power_law_heisenberg(n, 0.0, 1).unwrap(), &Grouping::XYZ).unwrap())
            .unwrap()
    });
}

/// The counting estimate for α = 4 grows as `n^{1.5}` over this range; an
/// exponent of 1.64 only fits the commutator bound itself at n ≤ 11.
#[test]
fn power_law_fast_decay_counting_exponent() {
    exponent_case("power-law α=4 counting exponent", 1.5, |n| {
        counting_fourth_order_prefactor(&group_terms(&power_law_heisenberg(n, 4.0, 1).unwrap(), &Grouping::XYZ).unwrap())
            .unwrap()
    });
}
