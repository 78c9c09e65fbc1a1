//! Checking universal sentences in finite groups.

use std::path::Path;

use marked_groups::dsl::parse_sentence;
use marked_groups::logic::{builtin_sentence, holds_in, squared_sentence};
use marked_groups::{AbelianGroup, FiniteGroupTable, GenDihedralGroup, Limits};

fn main() -> marked_groups::Result<()> {
    let limits = Limits::from_env().with_evaluation_budget(100_000_000);
    let d12 = GenDihedralGroup::dihedral(6).materialize_table(limits.table_cap)?;
    for name in ["P1", "P2", "P3", "P4"] {
        let s = builtin_sentence(name)?;
        println!("{name}: {s}\n    in D12: {}", holds_in(&d12, &s, &limits)?.holds());
    }

    let t = GenDihedralGroup::new(AbelianGroup::new(0, &[4, 4])).materialize_table(limits.table_cap)?;
    let p4 = builtin_sentence("P4")?;
    if let Some(ce) = holds_in(&t, &p4, &limits)?.counterexample() {
        let labels: Vec<&str> = ce.iter().map(|&i| t.label(i)).collect();
        println!("P4 fails in Dih(Z/4 x Z/4) at {labels:?}");
    }

    let a4 = FiniteGroupTable::load(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/a4.txt"), &limits)?;
    let p1 = builtin_sentence("P1")?;
    println!("P1 in A4: {:?}", holds_in(&a4, &p1, &limits)?);

    let comm = parse_sentence("forall x y : x*y = y*x")?;
    let d16 = GenDihedralGroup::dihedral(8).materialize_table(limits.table_cap)?;
    let sq = squared_sentence(&comm);
    println!("{comm} in D16: {}", holds_in(&d16, &comm, &limits)?.holds());
    println!("{sq} in D16: {}", holds_in(&d16, &sq, &limits)?.holds());
    Ok(())
}
