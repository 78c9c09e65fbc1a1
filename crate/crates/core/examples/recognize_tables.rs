//! Loading Cayley tables and recognizing generalized dihedral groups.

use std::path::Path;

use marked_groups::tables::Recognition;
use marked_groups::{AbelianGroup, FiniteGroupTable, GenDihedralGroup, Limits};

fn main() -> marked_groups::Result<()> {
    let limits = Limits::from_env();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut tables = vec![];
    for name in ["a4.txt", "q8.txt", "d4.json", "d12.json", "dih_z4_z4.json"] {
        tables.push((name.to_string(), FiniteGroupTable::load(dir.join(name), &limits)?));
    }
    let base = AbelianGroup::new(0, &[2, 6]);
    tables.push((format!("Dih({base})"), GenDihedralGroup::new(base).materialize_table(limits.table_cap)?));

    for (name, t) in &tables {
        let auts = t.automorphism_group(&limits)?.len();
        let kind = match t.recognize_generalized_dihedral() {
            Recognition::GenDihedral { base, .. } => format!("Dih({base})"),
            Recognition::Abelian => "abelian".to_string(),
            Recognition::No => "not generalized dihedral".to_string(),
        };
        println!("{name:16} order {:3}  |Aut| = {auts:4}  {kind}", t.order());
    }
    Ok(())
}
