//! Minimal Trotter number of the fourth-order formula for 10-site random-field
//! Heisenberg chains at t = n, ε = 1e-3, under both groupings.

use std::time::Instant;

use trotter::formula::{empirical_trotter_number, suzuki};
use trotter::hamiltonians::{group_terms, heisenberg_chain, Grouping};

fn main() -> trotter::Result<()> {
    let n = 10;
    for (name, grouping) in [("even-odd", Grouping::EvenOdd), ("x-y-z", Grouping::XYZ)] {
        let mut rs = Vec::new();
        for seed in 1..=5 {
            let start = Instant::now();
            let h = group_terms(&heisenberg_chain(n, seed)?, &grouping)?;
            let s = suzuki(4, h.gamma())?;
            let found = empirical_trotter_number(&h, &s, n as f64, 1e-3)?;
            println!(
                "{name} seed {seed}: r = {} (error {:.3e}, r-1 gives {:.3e}) in {:.1?}",
                found.r,
                found.error_at_r,
                found.error_below.unwrap_or(f64::NAN),
                start.elapsed()
            );
            rs.push(found.r as f64);
        }
        let mean = rs.iter().sum::<f64>() / rs.len() as f64;
        println!("{name}: mean r = {mean:.1}");
    }
    Ok(())
}
