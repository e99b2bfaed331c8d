//! Exact nested-commutator norm α̃ against the counting estimate on small
//! random-field chains, and the counting fourth-order prefactor.

use trotter::bounds::{alpha_tilde, counting_bound_klocal, counting_fourth_order_prefactor, NormMode};
use trotter::hamiltonians::{group_terms, heisenberg_chain, power_law_heisenberg, Grouping, LatticeTermTensor};

fn main() -> trotter::Result<()> {
    for n in [4, 6, 8] {
        let h = group_terms(&heisenberg_chain(n, 1)?, &Grouping::EvenOdd)?;
        let tensor = LatticeTermTensor::from_hamiltonian(&h, 2)?;
        for p in [1, 2] {
            let exact = alpha_tilde(&h, p, NormMode::DenseExact)?.value;
            let count = counting_bound_klocal(&tensor, p)?;
            println!("n={n} p={p}: α̃ = {exact:.3}, counting {count:.3} ({:.1}x)", count / exact);
        }
    }
    for alpha in [0.0, 4.0] {
        let h = group_terms(&power_law_heisenberg(10, alpha, 1)?, &Grouping::XYZ)?;
        println!("power-law α={alpha} n=10: counting prefactor {:.4e}", counting_fourth_order_prefactor(&h)?);
    }
    Ok(())
}
