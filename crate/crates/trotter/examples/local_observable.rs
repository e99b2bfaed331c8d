//! Shell decomposition around a single-site observable, the gap between the
//! constrained formula and its reduced form, and light-cone plans.

use trotter::hamiltonians::heisenberg_chain;
use trotter::local_obs::{cancellation_check, light_cone_planner, shell_decomposition, z_observable};

fn main() -> trotter::Result<()> {
    let n = 10;
    let site = 4;
    let h = heisenberg_chain(n, 5)?;
    for ell in 1..=3 {
        let d = shell_decomposition(&h, &[site].into_iter().collect(), ell, 3)?;
        let radii: Vec<_> = (1..=3).map(|g| d.group_radius(g)).collect();
        let diff = cancellation_check(&d, &z_observable(n, site), 0.4)?;
        println!("ℓ={ell}: group radii {radii:?}, dropped weight {:.3}, ‖S̃†BS̃ - S̋†BS̋‖ = {diff:.2e}", d.truncation_weight);
    }
    for p in [2, 4, 8] {
        let plan = light_cone_planner(6.0, 1, p, 100.0, 1e-3, 0.0)?;
        println!(
            "α=6 p={p}: r={} ℓ={} radius {:.0}, gates {:.3e} (t^{:.3}, limit t^{:.3})",
            plan.r, plan.ell, plan.radius, plan.gate_count, plan.gate_exponent, plan.gate_exponent_limit
        );
    }
    Ok(())
}
