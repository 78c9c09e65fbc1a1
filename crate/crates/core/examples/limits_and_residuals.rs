//! Deciding limits of cyclic and dihedral groups, with residual witnesses.

use marked_groups::abelian::cyclic_residual_quotient;
use marked_groups::dsl::{parse_elements, parse_group};
use marked_groups::topology::{as_abelian, dihedral_residual_witness, is_limit_of_dihedral, rank_of_limit};
use marked_groups::{AbelianGroup, AnyElement, GenDihedralGroup};

fn main() -> marked_groups::Result<()> {
    for text in ["Z x Z/6", "Z/2 x Z/4", "Dih(Z x Z/6)", "Dih(Z/2 x Z/4)", "D4", "Dih(Z^2)"] {
        let g = parse_group(text)?.into_any();
        let cyclic = as_abelian(&g).map(|a| a.is_limit_of_cyclic());
        let d = is_limit_of_dihedral(&g);
        let rank = rank_of_limit(&g).ok();
        println!(
            "{text:16} cyclic limit: {cyclic:?}, dihedral limit: {} ({}), generators: {rank:?}",
            d.holds, d.reason
        );
    }

    let a = AbelianGroup::new(1, &[6]);
    let f = vec![a.element(vec![1], vec![0])?, a.element(vec![10], vec![3])?];
    let q = cyclic_residual_quotient(&a, &f)?;
    println!("\n{a} -> Z/{} using primes {:?}", q.modulus, q.primes);
    for x in &f {
        println!("  {x} -> {}", q.apply(x));
    }

    let d = GenDihedralGroup::infinite_dihedral();
    let g = marked_groups::AnyGroup::Dihedral(d.clone());
    let survivors: Vec<_> = parse_elements(&g, "b,rot(2),ref(1),rot(4)")?
        .into_iter()
        .map(|e| match e {
            AnyElement::Dihedral(x) => x,
            _ => unreachable!(),
        })
        .collect();
    let w = dihedral_residual_witness(&d, &survivors)?;
    println!("\n{d} -> {}", w.target);
    for (x, y) in survivors.iter().zip(&w.images) {
        println!("  {x} -> {y}");
    }
    Ok(())
}
