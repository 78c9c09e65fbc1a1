//! The closure of two-generated dihedral marked groups, as DOT or JSON.
//!
//! `cargo run --example closure_map -- 3 8 | dot -Tsvg > map.svg`

use marked_groups::closure_map::closure_map;
use marked_groups::Limits;

fn main() -> marked_groups::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (lo, hi) = match args[..] {
        [lo, hi] => (lo, hi),
        _ => (3, 6),
    };
    let map = closure_map(lo, hi, &Limits::from_env())?;
    if std::env::args().any(|a| a == "--json") {
        print!("{}", map.to_json());
    } else {
        print!("{}", map.to_dot());
    }
    Ok(())
}
