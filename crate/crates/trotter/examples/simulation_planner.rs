//! Trotter numbers and gate counts of every model at one size and time.

use trotter::planner::{plan, Model, PlanParams};

fn main() -> trotter::Result<()> {
    let params = PlanParams { n: 1000.0, t: 1000.0, eps: 1e-3, p: 4, alpha: 4.0, ..PlanParams::default() };
    for model in Model::ALL {
        let plan = plan(model, &params)?;
        let ell = plan.ell.map_or("-".to_string(), |l| l.to_string());
        println!("{:<22} r={:<12} gates={:.3e} ℓ={ell} t^{:.3}", model.name(), plan.r, plan.gates, plan.t_exponent);
    }
    Ok(())
}
