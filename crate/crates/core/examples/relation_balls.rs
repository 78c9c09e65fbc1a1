//! Relation balls and the distance between marked groups.

use marked_groups::dsl::parse_marked;
use marked_groups::topology::{agreement_radius, relation_ball};
use marked_groups::Limits;

fn main() -> marked_groups::Result<()> {
    let limits = Limits::from_env();
    let d8 = parse_marked("D8:a,b")?;
    let dinf = parse_marked("Dinf:a,b")?;

    let ball = relation_ball(&d8, 4, &limits)?;
    println!("relations of {d8} up to length 4:");
    for w in &ball.relations {
        println!("  {w}");
    }

    let a = agreement_radius(&d8, &dinf, 10, &limits)?;
    println!("{d8} and {dinf} agree up to radius {a}, distance {}", a.distance());
    if let Some(w) = &a.separating_word {
        println!("  {w} is a relation of the first only: {}", d8.is_relation(w)? && !dinf.is_relation(w)?);
    }
    Ok(())
}
