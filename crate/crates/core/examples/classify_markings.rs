//! Generating tuples up to automorphism.

use marked_groups::classify::{
    canonicalize, count_marking_classes, decide_marking_equivalence, enumerate_markings, free_dihedral,
};
use marked_groups::{GenDihedralGroup, Limits};

fn main() -> marked_groups::Result<()> {
    let limits = Limits::from_env();
    for n in [2u64, 3, 6] {
        let t = GenDihedralGroup::dihedral(n).materialize_table(limits.table_cap)?;
        println!("D{}:", 2 * n);
        for c in enumerate_markings(&t, 2, &limits)? {
            println!("  I = {:?}  {:?}  orbit {:?}", c.i_set, c.representative, c.orbit_size);
        }
    }

    for m in 2..=5 {
        println!("Z^{} x| Z/2 on {m} generators: {} classes", m - 1, count_marking_classes(m)?);
    }

    let g = free_dihedral(3)?;
    let show = |t: &[marked_groups::GenDihedralElement]| t.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let s = vec![g.rot_coords(&[2, 1])?, g.ref_coords(&[1, 0])?, g.ref_coords(&[4, 1])?];
    let (p, phi) = canonicalize(&s)?;
    println!("\n({}) has I = {p:?}; {phi} takes it to the canonical marking", show(&s));

    let t = vec![g.rot_coords(&[1, 1])?, g.ref_coords(&[0, 0])?, g.ref_coords(&[1, 0])?];
    println!("equivalent to ({}): {:?}", show(&t), decide_marking_equivalence(&s, &t)?.map(|f| f.to_string()));
    let u = vec![g.ref_coords(&[1, 1])?, g.rot_coords(&[0, 1])?, g.rot_coords(&[1, 0])?];
    println!("equivalent to ({}): {:?}", show(&u), decide_marking_equivalence(&s, &u)?.map(|f| f.to_string()));
    Ok(())
}
