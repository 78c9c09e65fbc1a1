//! Cantor-Bendixson ranks and sequences that witness them.

use marked_groups::dsl::{parse_group, parse_marked};
use marked_groups::topology::{accumulation_witness, cb_rank, closure_characteristic, ClosureFamily};
use marked_groups::Limits;

fn main() -> marked_groups::Result<()> {
    let limits = Limits::from_env();
    for text in ["D12", "Dinf", "Dih(Z x Z/6)", "Dih(Z^2)", "Dih(Z^3 x Z/2)"] {
        let g = parse_group(text)?.into_any();
        println!("rank of {text} among limits of dihedral groups: {}", cb_rank(&g, ClosureFamily::Dihedral)?);
    }
    for m in 2..=4 {
        let c = closure_characteristic(m, ClosureFamily::Dihedral)?;
        println!("closure of dihedral groups on {m} generators: ({}, {})", c.alpha, c.n);
    }

    let m = parse_marked("Dih(Z x Z/3):a,rot(1;0),rot(0;1)")?;
    let w = accumulation_witness(&m, 5, &limits)?;
    println!("\nmarked groups approaching {m}:");
    for (x, a) in w.family.iter().zip(&w.report.radii) {
        println!("  {x}  radius {a}");
    }
    Ok(())
}
