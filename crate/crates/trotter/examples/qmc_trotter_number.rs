//! QMC Trotter numbers for a transverse-field Ising chain, verified against
//! exact eigenvalues, and the ferromagnet rule.

use trotter::bounds::NormMode;
use trotter::hamiltonians::tfim_chain;
use trotter::qmc::{ferromagnet_trotter_number, multiplicative_factor_check, partition_ratio, tfim_trotter_number};

fn main() -> trotter::Result<()> {
    let (a, b) = tfim_chain(6, 1.0, 0.7)?;
    for beta in [0.5, 1.0, 2.0] {
        let plan = tfim_trotter_number(&a, &b, beta, 0.05, NormMode::DenseExact)?;
        let (hi, lo) = multiplicative_factor_check(&a, &b, beta, plan.r)?;
        let z = partition_ratio(&a, &b, beta, plan.r)?;
        println!("β={beta}: r={} eigenvalue ratios in [{lo:.6}, {hi:.6}], Z'/Z = {z:.6}", plan.r);
        for c in &plan.constraints {
            println!("    {:<30} {:.3}", c.name, c.value);
        }
    }
    for n in [10, 100] {
        let plan = ferromagnet_trotter_number(n, 1.0, 0.01, 1.0)?;
        println!("ferromagnet n={n} β=1 ε=0.01: r={}", plan.r);
    }
    Ok(())
}
