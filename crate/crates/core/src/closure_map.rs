//! The closure of dihedral marked groups on two generators, as a graph.
//!
//! For each `n ≥ 3` the group `D_2n` carries three marked structures
//!
//! * `A_2n = ⟨a, b | a² = b² = (ab)^n = 1⟩`, marked by two reflections,
//! * `B_2n = ⟨a, b | a² = b^n = 1, a⁻¹ba = b⁻¹⟩`, marked by a reflection then a rotation,
//! * `B̄_2n`, the same with the generators swapped,
//!
//! which converge to `A_∞`, `B_∞`, `B̄_∞` in `D_∞`. For `n = 2` all three
//! coincide in a single node `A_4`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::config::Limits;
use crate::dihedral::GenDihedralGroup;
use crate::error::{Error, Result};
use crate::topology::{separating_word, MarkedGroup};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Family {
    A,
    B,
    Bbar,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::A, Family::B, Family::Bbar];

    fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::Bbar => "Bbar",
        }
    }

    /// The family's marking of `D_2n` (`n = 0` for `D_∞`).
    pub fn marking(self, n: u64) -> MarkedGroup {
        let d = GenDihedralGroup::dihedral(n);
        let r0 = d.a();
        let one = |refl: bool| {
            let c = if d.base().is_trivial() { vec![] } else { vec![1] };
            if refl { d.ref_coords(&c) } else { d.rot_coords(&c) }.expect("coordinate in range")
        };
        let gens = match self {
            Family::A => vec![r0, one(true)],
            Family::B => vec![r0, one(false)],
            Family::Bbar => vec![one(false), r0],
        };
        MarkedGroup::dihedral(d, gens).expect("generating")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Node {
    pub id: String,
    pub families: Vec<Family>,
    /// `None` for the limits in `D_∞`.
    pub n: Option<u64>,
    pub marking: MarkedGroup,
    #[serde(rename = "I")]
    pub i_set: Vec<usize>,
    pub accumulation: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub radius: usize,
    pub separating_word: Word,
}

#[derive(Clone, Debug, Serialize)]
pub struct Separation {
    pub left: String,
    pub right: String,
    pub word: Word,
    pub distinct_i_sets: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureMap {
    pub arity: usize,
    pub range: (u64, u64),
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
    pub separations: Vec<Separation>,
}

fn node(id: String, families: Vec<Family>, n: Option<u64>, marking: MarkedGroup) -> Node {
    let i_set = match marking.group() {
        crate::group::AnyGroup::Dihedral(d) => {
            let gens: Vec<_> = marking
                .generators()
                .iter()
                .map(|g| match g {
                    crate::group::AnyElement::Dihedral(x) => x.clone(),
                    _ => unreachable!("dihedral marking"),
                })
                .collect();
            crate::classify::reflection_index_set(d, &gens).into_iter().collect()
        }
        _ => unreachable!("dihedral marking"),
    };
    Node { id, families, n, marking, i_set, accumulation: n.is_none() }
}

fn limit_id(f: Family) -> String {
    format!("{}_inf", f.name())
}

/// Builds the closure map for `n` in `lo..=hi` (with `lo ≥ 3`) plus the node `A_4`.
pub fn closure_map(lo: u64, hi: u64, limits: &Limits) -> Result<ClosureMap> {
    if lo < 3 || hi < lo {
        return Err(Error::precondition("the range must satisfy 3 <= lo <= hi"));
    }
    let mut nodes = vec![node("A_4".to_string(), Family::ALL.to_vec(), Some(2), Family::A.marking(2))];
    for n in lo..=hi {
        for f in Family::ALL {
            nodes.push(node(format!("{}_{}", f.name(), 2 * n), vec![f], Some(n), f.marking(n)));
        }
    }
    for f in Family::ALL {
        nodes.push(node(limit_id(f), vec![f], None, f.marking(0)));
    }

    let mut edges = Vec::new();
    for nd in nodes.iter().filter(|x| !x.accumulation) {
        for &f in &nd.families {
            let limit = f.marking(0);
            let marking = if nd.families.len() > 1 { f.marking(2) } else { nd.marking.clone() };
            let w = separating_word(&marking, &limit, limits)?.expect("finite and infinite groups differ");
            edges.push(Edge { from: nd.id.clone(), to: limit_id(f), radius: w.len() - 1, separating_word: w });
        }
    }

    let mut separations = Vec::new();
    for (i, x) in nodes.iter().enumerate() {
        for y in &nodes[i + 1..] {
            let w = separating_word(&x.marking, &y.marking, limits)?
                .ok_or_else(|| Error::Precondition(format!("{} and {} coincide", x.id, y.id)))?;
            separations.push(Separation {
                left: x.id.clone(),
                right: y.id.clone(),
                word: w,
                distinct_i_sets: x.i_set != y.i_set,
            });
        }
    }
    Ok(ClosureMap { arity: 2, range: (lo, hi), nodes, edges, separations })
}

impl ClosureMap {
    pub fn accumulation_nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter().filter(|n| n.accumulation)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph closure_map {\n  rankdir=LR;\n  node [shape=box];\n");
        for n in &self.nodes {
            let names: Vec<String> = n
                .families
                .iter()
                .map(|f| match n.n {
                    Some(k) => format!("{}_{}", f.name(), 2 * k),
                    None => limit_id(*f),
                })
                .collect();
            let i: Vec<String> = n.i_set.iter().map(|x| x.to_string()).collect();
            let shape = if n.accumulation { ", shape=doublecircle" } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{}\\nI={{{}}}\"{}];",
                n.id,
                names.join(" = "),
                n.marking,
                i.join(","),
                shape
            );
        }
        for e in &self.edges {
            let _ = writeln!(out, "  \"{}\" -> \"{}\" [label=\"r={}\"];", e.from, e.to, e.radius);
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let map = closure_map(3, 5, &Limits::default()).unwrap();
        assert_eq!(map.accumulation_nodes().count(), 3);
        assert_eq!(map.nodes.len(), 1 + 3 * 3 + 3);
        let a4 = &map.nodes[0];
        assert_eq!(a4.families, Family::ALL);
        let b = map.nodes.iter().find(|n| n.id == "B_6").unwrap();
        let bbar = map.nodes.iter().find(|n| n.id == "Bbar_6").unwrap();
        assert_eq!((b.i_set.as_slice(), bbar.i_set.as_slice()), (&[1][..], &[2][..]));
        let radius = |from: &str| map.edges.iter().find(|e| e.from == from).unwrap().radius;
        assert_eq!(radius("A_6"), 5);
        assert_eq!(radius("B_8"), 3);
        assert_eq!(radius("Bbar_10"), 4);
        assert!(closure_map(2, 5, &Limits::default()).is_err());
    }
}
