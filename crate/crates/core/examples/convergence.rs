//! Finite dihedral and cyclic groups converging to infinite ones.

use marked_groups::dsl::parse_marked;
use marked_groups::topology::{check_convergence, ConvergenceVerdict};
use marked_groups::{Limits, MarkedGroup};

fn main() -> marked_groups::Result<()> {
    let limits = Limits::from_env();
    let indices: Vec<u64> = (3..=10).collect();

    let dinf = parse_marked("Dinf:a,b")?;
    let report = check_convergence(|n| parse_marked(&format!("D{}:a,b", 2 * n)), &dinf, &indices, None, 12, &limits)?;
    println!("D_2n -> {}: radii {:?}, {:?}", report.limit, report.radius_values(), report.verdict);

    let z = MarkedGroup::cyclic(0);
    let report = check_convergence(|k| Ok(MarkedGroup::cyclic(k)), &z, &indices, None, 12, &limits)?;
    println!("Z/k -> {}: radii {:?}, {:?}", report.limit, report.radius_values(), report.verdict);

    // A constant sequence does not approach a different group.
    let report = check_convergence(|_| parse_marked("D6:a,b"), &dinf, &indices, None, 12, &limits)?;
    if let ConvergenceVerdict::Refuted { index, witness } = &report.verdict {
        println!("D6, D6, ... -> {}: refuted at term {index} by {witness}", report.limit);
    }
    Ok(())
}
