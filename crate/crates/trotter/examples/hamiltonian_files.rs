//! Writes a grouped power-law chain to JSON, reads it back, and prints the
//! group sizes and norms. Pass a path to load an existing file instead.

use trotter::bounds::{group_norms, NormMode};
use trotter::hamiltonians::{group_terms, power_law_heisenberg, Grouping};
use trotter::io::{hamiltonian_from_json, hamiltonian_to_json, read_hamiltonian};

fn main() -> trotter::Result<()> {
    let h = match std::env::args().nth(1) {
        Some(path) => read_hamiltonian(path.as_ref())?,
        None => {
            let h = group_terms(&power_law_heisenberg(6, 1.0, 3)?, &Grouping::XYZ)?;
            let text = hamiltonian_to_json(&h);
            println!("{} bytes of JSON", text.len());
            let back = hamiltonian_from_json(&text)?;
            assert_eq!(back, h);
            back
        }
    };
    let norms = group_norms(&h, NormMode::DenseExact)?;
    for (g, norm) in h.groups.iter().zip(norms) {
        println!("{:>4}: {:3} strings, ‖H‖ = {norm:.6}", g.label, g.op.len());
    }
    Ok(())
}
