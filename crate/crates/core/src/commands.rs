//! Implementations of the `mgs` subcommands. Each returns the text to print.

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::abelian::cyclic_residual_quotient;
use crate::classify::{enumerate_markings, free_dihedral_classes};
use crate::closure_map::closure_map;
use crate::config::Limits;
use crate::dsl::{parse_elements, parse_group, parse_marked, parse_sentence, GroupSpec};
use crate::error::{Error, Result};
use crate::group::{AnyElement, AnyGroup};
use crate::logic::{holds_in, Verdict};
use crate::tables::{FiniteGroupTable, Recognition};
use crate::topology::{
    agreement_radius, cb_rank, check_convergence, dihedral_residual_witness, is_limit_of_dihedral, rank_of_limit,
    relation_ball, ClosureFamily,
};

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json");
    s.push('\n');
    s
}

/// `a..b` (inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::precondition(format!("expected a range `a..b`, found `{s}`"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a, b.trim_start_matches('=')),
        None => (s, s),
    };
    let (a, b): (u64, u64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

/// A group given either as a table file or in the group syntax.
pub fn load_group(arg: &str, limits: &Limits) -> Result<AnyGroup> {
    if Path::new(arg).is_file() {
        return Ok(AnyGroup::Table(Arc::new(FiniteGroupTable::load(arg, limits)?)));
    }
    Ok(parse_group(arg)?.into_any())
}

/// A finite group as a Cayley table.
pub fn load_table(arg: &str, limits: &Limits) -> Result<Arc<FiniteGroupTable>> {
    match load_group(arg, limits)? {
        AnyGroup::Table(t) => Ok(t),
        AnyGroup::Abelian(a) => Ok(Arc::new(a.materialize_table(limits.table_cap)?)),
        AnyGroup::Dihedral(d) => Ok(Arc::new(d.materialize_table(limits.table_cap)?)),
    }
}

pub fn ball(marked: &str, radius: usize, limits: &Limits) -> Result<String> {
    let m = parse_marked(marked)?;
    let b = relation_ball(&m, radius, limits)?;
    Ok(pretty(json!({
        "marked": m,
        "radius": radius,
        "count": b.relations.len(),
        "relations": b.relations,
    })))
}

pub fn dist(left: &str, right: &str, rmax: usize, limits: &Limits) -> Result<String> {
    let (x, y) = (parse_marked(left)?, parse_marked(right)?);
    let a = agreement_radius(&x, &y, rmax, limits)?;
    Ok(pretty(json!({
        "left": x,
        "right": y,
        "rmax": rmax,
        "radius": a.radius,
        "exact": a.exact,
        "separating_word": a.separating_word,
        "distance": a.distance(),
    })))
}

/// Substitutes `{k}` and `{2k}` in a marked-group template.
pub fn instantiate(template: &str, k: u64) -> String {
    template.replace("{2k}", &(2 * k).to_string()).replace("{k}", &k.to_string())
}

pub fn converge(template: &str, limit: &str, range: (u64, u64), rmax: usize, limits: &Limits) -> Result<String> {
    if !template.contains("{k}") && !template.contains("{2k}") {
        return Err(Error::precondition("the family template needs a `{k}` or `{2k}` placeholder"));
    }
    let limit = parse_marked(limit)?;
    let indices: Vec<u64> = (range.0..=range.1).collect();
    let report = check_convergence(|k| parse_marked(&instantiate(template, k)), &limit, &indices, None, rmax, limits)?;
    Ok(pretty(json!({ "family": template, "report": report })))
}

pub fn limit_check(group: &str, limits: &Limits) -> Result<String> {
    let g = load_group(group, limits)?;
    let d = is_limit_of_dihedral(&g);
    let cyclic = crate::topology::as_abelian(&g).map(|a| a.is_limit_of_cyclic());
    Ok(pretty(json!({
        "group": describe(&g),
        "is_limit_of_cyclic": cyclic,
        "is_limit_of_dihedral": d.holds,
        "reason": d.reason,
        "rank_of_limit": rank_of_limit(&g).ok(),
    })))
}

fn describe(g: &AnyGroup) -> String {
    match g {
        AnyGroup::Abelian(a) => a.to_string(),
        AnyGroup::Dihedral(d) => d.to_string(),
        AnyGroup::Table(t) => format!("table of order {}", t.order()),
    }
}

pub fn residual(group: &str, survivors: &str, limits: &Limits) -> Result<String> {
    let spec = parse_group(group)?;
    let g = spec.clone().into_any();
    let elems = parse_elements(&g, survivors)?;
    let labels: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
    let _ = limits;
    match spec {
        GroupSpec::Abelian(a) => {
            let xs: Vec<_> = elems
                .iter()
                .map(|e| match e {
                    AnyElement::Abelian(x) => x.clone(),
                    _ => unreachable!("parsed in an abelian group"),
                })
                .collect();
            let q = cyclic_residual_quotient(&a, &xs)?;
            let images: Vec<u64> = xs.iter().map(|x| q.apply(x)).collect();
            Ok(pretty(json!({
                "group": a.to_string(),
                "target": format!("Z/{}", q.modulus),
                "map": q,
                "survivors": labels,
                "images": images,
            })))
        }
        GroupSpec::Dihedral(d) => {
            let xs: Vec<_> = elems
                .iter()
                .map(|e| match e {
                    AnyElement::Dihedral(x) => x.clone(),
                    _ => unreachable!("parsed in a dihedral group"),
                })
                .collect();
            let w = dihedral_residual_witness(&d, &xs)?;
            Ok(pretty(json!({
                "group": d.to_string(),
                "target": w.target.to_string(),
                "rotation_map": w.rotation_map,
                "survivors": labels,
                "images": w.images,
            })))
        }
    }
}

pub fn check(sentence: &str, group: &str, limits: &Limits) -> Result<String> {
    let s = parse_sentence(sentence)?;
    let t = load_table(group, limits)?;
    let verdict = holds_in(&t, &s, limits)?;
    let counterexample = match &verdict {
        Verdict::Holds => Value::Null,
        Verdict::Fails { counterexample } => {
            let pairs: serde_json::Map<String, Value> = s
                .vars()
                .iter()
                .zip(counterexample)
                .map(|(v, &i)| (v.clone(), Value::String(t.label(i).to_string())))
                .collect();
            Value::Object(pairs)
        }
    };
    Ok(pretty(json!({
        "sentence": s.to_string(),
        "group": group,
        "holds": verdict.holds(),
        "counterexample": counterexample,
    })))
}

pub fn classify(target: &str, arity: usize, limits: &Limits) -> Result<String> {
    let classes = if target == "Zm-dihedral" {
        free_dihedral_classes(arity)?
    } else {
        match load_group(target, limits)? {
            AnyGroup::Dihedral(d) if d.base().invariant_factors().is_empty() && d.base().free_rank() + 1 == arity => {
                free_dihedral_classes(arity)?
            }
            AnyGroup::Table(t) => enumerate_markings(&t, arity, limits)?,
            AnyGroup::Abelian(a) => enumerate_markings(&a.materialize_table(limits.table_cap)?, arity, limits)?,
            AnyGroup::Dihedral(d) => enumerate_markings(&d.materialize_table(limits.table_cap)?, arity, limits)?,
        }
    };
    Ok(pretty(json!({ "group": target, "arity": arity, "count": classes.len(), "classes": classes })))
}

pub fn cb_rank_cmd(group: &str, family: &str, limits: &Limits) -> Result<String> {
    let g = load_group(group, limits)?;
    let family: ClosureFamily = family.parse()?;
    let r = cb_rank(&g, family)?;
    Ok(pretty(json!({ "group": describe(&g), "family": family, "cb_rank": r })))
}

pub fn closure_map_cmd(arity: usize, range: (u64, u64), dot: bool, limits: &Limits) -> Result<String> {
    if arity != 2 {
        return Err(Error::Unsupported("the closure map is drawn for arity 2 only".to_string()));
    }
    let map = closure_map(range.0, range.1, limits)?;
    Ok(if dot { map.to_dot() } else { map.to_json() })
}

pub fn recognize(table: &str, limits: &Limits) -> Result<String> {
    let t = load_table(table, limits)?;
    let r = t.recognize_generalized_dihedral();
    let result = match &r {
        Recognition::Abelian => json!({ "kind": "abelian" }),
        Recognition::No => json!({ "kind": "no" }),
        Recognition::GenDihedral { base, rotations, reflections } => json!({
            "kind": "gen-dihedral",
            "base": base.to_string(),
            "invariant_factors": base.invariant_factors(),
            "rotations": rotations.iter().map(|&i| t.label(i)).collect::<Vec<_>>(),
            "reflections": reflections.iter().map(|&i| t.label(i)).collect::<Vec<_>>(),
        }),
    };
    Ok(pretty(json!({ "order": t.order(), "recognition": result })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_templates() {
        assert_eq!(parse_range("3..10").unwrap(), (3, 10));
        assert_eq!(parse_range("3..=10").unwrap(), (3, 10));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("5..3").is_err());
        assert_eq!(instantiate("D{2k}:a,b", 5), "D10:a,b");
        assert_eq!(instantiate("Z/{k}:1", 7), "Z/7:1");
    }

    #[test]
    fn commands_produce_json() {
        let lim = Limits::default();
        let v: Value = serde_json::from_str(&dist("D6:a,b", "Dinf:a,b", 8, &lim).unwrap()).unwrap();
        assert_eq!(v["radius"], 2);
        assert_eq!(v["separating_word"], "g2^3");
        let v: Value = serde_json::from_str(&check("@P1", "D12", &lim).unwrap()).unwrap();
        assert_eq!(v["holds"], true);
        let v: Value = serde_json::from_str(&classify("D12", 2, &lim).unwrap()).unwrap();
        assert_eq!(v["count"], 3);
        let v: Value = serde_json::from_str(&classify("Zm-dihedral", 3, &lim).unwrap()).unwrap();
        assert_eq!(v["count"], 7);
        let v: Value = serde_json::from_str(&residual("Dinf", "b,rot(2),ref(-1)", &lim).unwrap()).unwrap();
        assert_eq!(v["target"], "D6");
        let v: Value = serde_json::from_str(&limit_check("Dih(Z/2 x Z/4)", &lim).unwrap()).unwrap();
        assert_eq!(v["is_limit_of_dihedral"], false);
        let v: Value = serde_json::from_str(&converge("Z/{k}:1", "Z:1", (3, 6), 10, &lim).unwrap()).unwrap();
        assert_eq!(v["report"]["verdict"]["kind"], "consistent-with-convergence");
    }
}
