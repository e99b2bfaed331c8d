//! Symbolic nested commutators of Pauli sums, checked against dense matrices.

use trotter::pauli::{nested_commutator, parse_term, PauliSum};
use trotter::sectors::pauli_norm;

fn main() -> trotter::Result<()> {
    let x = PauliSum::from_term(parse_term("X")?);
    let z = PauliSum::from_term(parse_term("Z")?);
    let xxz = nested_commutator(&[&x, &x, &z])?;
    println!("[X,[X,Z]] = {xxz}");

    // Two-site pieces of a Heisenberg bond and a field.
    let bond = PauliSum::sum(3, &[
        PauliSum::from_term(parse_term("XXI")?),
        PauliSum::from_term(parse_term("YYI")?),
        PauliSum::from_term(parse_term("ZZI")?),
    ])?;
    let next = PauliSum::sum(3, &[
        PauliSum::from_term(parse_term("IXX")?),
        PauliSum::from_term(parse_term("IZI")?),
    ])?;
    let c = nested_commutator(&[&bond, &bond, &next])?;
    let dense = bond.to_dense()?.commutator(&bond.to_dense()?.commutator(&next.to_dense()?));
    println!("[A,[A,B]] has {} strings, norm {:.6}", c.len(), pauli_norm(&c)?);
    println!("dense mismatch {:.2e}", c.to_dense()?.sub(&dense).max_abs());
    Ok(())
}
