//! Fitted exponents of the bound-side Trotter number in n, with t = n and
//! ε = 1e-3, for n from 10 to 256. Nearest-neighbor chains use the
//! commutator bound with per-cluster norms; power-law chains use the
//! counting estimate.
//!
//! Usage: `bound_scaling_exponents [norm-mode] [case-substring]`.

use std::time::Instant;

use trotter::bounds::{comm_trotter_number, counting_fourth_order_prefactor, fourth_order_bound, NormMode};
use trotter::formula::loglog_slope;
use trotter::hamiltonians::{group_terms, heisenberg_chain, power_law_heisenberg, Grouping};

const NS: [usize; 7] = [10, 16, 32, 64, 96, 128, 256];

fn main() -> trotter::Result<()> {
    let eps = 1e-3;
    let mode: NormMode = std::env::args().nth(1).map(|m| m.parse()).transpose()?.unwrap_or(NormMode::Cluster);
    let cases: [(&str, Box<dyn Fn(usize) -> trotter::Result<f64>>); 4] = [
        (
            "even-odd",
            Box::new(|n| fourth_order_bound(&group_terms(&heisenberg_chain(n, 1)?, &Grouping::EvenOdd)?, 1.0, mode).map(|b| b.value)),
        ),
        ("x-y-z", Box::new(|n| fourth_order_bound(&group_terms(&heisenberg_chain(n, 1)?, &Grouping::XYZ)?, 1.0, mode).map(|b| b.value))),
        (
            "power-law a=0 counting",
            Box::new(|n| counting_fourth_order_prefactor(&group_terms(&power_law_heisenberg(n, 0.0, 1)?, &Grouping::XYZ)?)),
        ),
        (
            "power-law a=4 counting",
            Box::new(|n| counting_fourth_order_prefactor(&group_terms(&power_law_heisenberg(n, 4.0, 1)?, &Grouping::XYZ)?)),
        ),
    ];
    let filter = std::env::args().nth(2).unwrap_or_default();
    for (name, prefactor) in cases.iter().filter(|c| c.0.contains(filter.as_str())) {
        let start = Instant::now();
        let mut rs = Vec::new();
        for n in NS {
            let t = n as f64;
            rs.push(comm_trotter_number(prefactor(n)?, 4, t, eps, 1.0)? as f64);
        }
        let xs: Vec<f64> = NS.iter().map(|&n| n as f64).collect();
        println!("{name:24} slope {:.3}  r = {rs:?}  ({:.1?})", loglog_slope(&xs, &rs), start.elapsed());
    }
    Ok(())
}
