//! Trotter numbers from the fourth-order commutator bound at t = n = 10,
//! ε = 1e-3, for each norm mode, against the 1-norm bound.

use std::time::Instant;

use trotter::bounds::{fourth_order_bound, homogeneous_trotter_number, one_norm_trotter_number, NormMode};
use trotter::hamiltonians::{group_terms, heisenberg_chain, power_law_heisenberg, Grouping};

fn main() -> trotter::Result<()> {
    let n = 10;
    let (t, eps) = (n as f64, 1e-3);
    let models: Vec<(&str, Box<dyn Fn(u64) -> trotter::Result<_>>)> = vec![
        ("even-odd", Box::new(move |s| group_terms(&heisenberg_chain(n, s)?, &Grouping::EvenOdd))),
        ("x-y-z", Box::new(move |s| group_terms(&heisenberg_chain(n, s)?, &Grouping::XYZ))),
        ("power-law a=0", Box::new(move |s| group_terms(&power_law_heisenberg(n, 0.0, s)?, &Grouping::XYZ))),
        ("power-law a=4", Box::new(move |s| group_terms(&power_law_heisenberg(n, 4.0, s)?, &Grouping::XYZ))),
    ];
    let only: Option<NormMode> = std::env::args().nth(1).map(|m| m.parse()).transpose()?;
    for (name, build) in &models {
        // All-to-all groups make symbolic nested commutators expensive; the
        // power-law bound uses exact norms.
        let modes = match (only, name.starts_with("power-law")) {
            (Some(m), _) => vec![m],
            (None, true) => vec![NormMode::DenseExact],
            (None, false) => vec![NormMode::Cluster, NormMode::DenseExact],
        };
        for mode in modes {
            let start = Instant::now();
            let mut rs = Vec::new();
            let mut r1 = Vec::new();
            for seed in 1..=5 {
                let h = build(seed)?;
                let c = fourth_order_bound(&h, 1.0, mode)?.value;
                rs.push(homogeneous_trotter_number(c, 4, t, eps)?.r as f64);
                r1.push(one_norm_trotter_number(&h.group_norms()?, 4, t, eps)?.r as f64);
            }
            let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
            println!(
                "{name:14} {mode:34} r = {rs:?} mean {:.1}  1-norm mean {:.1}  ({:.1?})",
                mean(&rs),
                mean(&r1),
                start.elapsed()
            );
        }
    }
    Ok(())
}
