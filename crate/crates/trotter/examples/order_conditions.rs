//! Log-log slopes of the additive and exponentiated errors of Lie-Trotter and
//! Suzuki formulas on a random-field chain.

use trotter::formula::{lie_trotter, order_condition_check, suzuki};
use trotter::hamiltonians::{group_terms, heisenberg_chain, Grouping};

fn main() -> trotter::Result<()> {
    let h = group_terms(&heisenberg_chain(5, 2)?, &Grouping::XYZ)?;
    let mut schedules = vec![lie_trotter(h.gamma())?];
    for p in [2, 4, 6] {
        schedules.push(suzuki(p, h.gamma())?);
    }
    for s in &schedules {
        let rep = order_condition_check(&h, s)?;
        println!(
            "order {}: {} exponentials, slopes {:.3} (want {}) and {:.3} (want {}), {}",
            rep.order,
            s.exponentials().len(),
            rep.additive_slope,
            rep.order + 1,
            rep.exponentiated_slope,
            rep.order,
            if rep.passed { "ok" } else { "FAIL" }
        );
    }
    Ok(())
}
