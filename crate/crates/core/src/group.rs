//! The [`Group`] abstraction shared by every concrete group in the crate.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::abelian::{AbelianElement, AbelianGroup};
use crate::dihedral::{GenDihedralElement, GenDihedralGroup};
use crate::error::{Error, Result};
use crate::tables::FiniteGroupTable;
use crate::words::Word;

/// A group with exactly representable, canonically normalized elements,
/// so that element equality is group equality.
pub trait Group {
    type Element: Clone + Eq + Ord + Hash + Debug;

    fn identity(&self) -> Self::Element;

    fn multiply(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;

    fn inverse(&self, x: &Self::Element) -> Self::Element;

    fn is_identity(&self, x: &Self::Element) -> bool {
        *x == self.identity()
    }

    /// Checks that `x` is a well-formed element of this group.
    fn validate(&self, _x: &Self::Element) -> Result<()> {
        Ok(())
    }

    fn power(&self, x: &Self::Element, exp: i64) -> Self::Element {
        let mut base = if exp < 0 { self.inverse(x) } else { x.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image of `w` under `e_i ↦ gens[i-1]`.
    fn evaluate(&self, gens: &[Self::Element], w: &Word) -> Result<Self::Element> {
        if gens.len() != w.arity() {
            return Err(Error::ArityMismatch { expected: w.arity(), found: gens.len() });
        }
        let inverses: Vec<_> = gens.iter().map(|g| self.inverse(g)).collect();
        Ok(w.letters().iter().fold(self.identity(), |acc, l| {
            let g = if l.inverse { &inverses[l.index - 1] } else { &gens[l.index - 1] };
            self.multiply(&acc, g)
        }))
    }

    fn commute(&self, x: &Self::Element, y: &Self::Element) -> bool {
        self.multiply(x, y) == self.multiply(y, x)
    }
}

/// Subgroup generated by `gens`, by breadth-first right multiplication.
///
/// Returns `None` once more than `cap` elements have been found, which is
/// how infinite subgroups are detected.
pub fn closure<G: Group>(group: &G, gens: &[G::Element], cap: usize) -> Option<BTreeSet<G::Element>> {
    let mut seen: HashSet<G::Element> = HashSet::new();
    let mut queue = VecDeque::new();
    let id = group.identity();
    seen.insert(id.clone());
    queue.push_back(id);
    let mut steps: Vec<G::Element> = gens.to_vec();
    steps.extend(gens.iter().map(|g| group.inverse(g)));
    while let Some(x) = queue.pop_front() {
        for g in &steps {
            let y = group.multiply(&x, g);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// A group of any supported kind, used where the kind is only known at run time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyGroup {
    Abelian(AbelianGroup),
    Dihedral(GenDihedralGroup),
    Table(Arc<FiniteGroupTable>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnyElement {
    Abelian(AbelianElement),
    Dihedral(GenDihedralElement),
    Table(usize),
}

impl AnyGroup {
    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        match self {
            AnyGroup::Abelian(a) => a.order(),
            AnyGroup::Dihedral(d) => d.order(),
            AnyGroup::Table(t) => Some(t.order() as u64),
        }
    }

    pub fn label(&self, x: &AnyElement) -> String {
        match (self, x) {
            (AnyGroup::Table(t), AnyElement::Table(i)) => t.label(*i).to_string(),
            (_, x) => x.to_string(),
        }
    }
}

impl fmt::Display for AnyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyElement::Abelian(a) => write!(f, "{a}"),
            AnyElement::Dihedral(d) => write!(f, "{d}"),
            AnyElement::Table(i) => write!(f, "#{i}"),
        }
    }
}

fn mismatch() -> ! {
    panic!("element kind does not match group kind")
}

impl Group for AnyGroup {
    type Element = AnyElement;

    fn identity(&self) -> AnyElement {
        match self {
            AnyGroup::Abelian(a) => AnyElement::Abelian(a.identity()),
            AnyGroup::Dihedral(d) => AnyElement::Dihedral(d.identity()),
            AnyGroup::Table(t) => AnyElement::Table(t.identity()),
        }
    }

    fn multiply(&self, x: &AnyElement, y: &AnyElement) -> AnyElement {
        match (self, x, y) {
            (AnyGroup::Abelian(a), AnyElement::Abelian(x), AnyElement::Abelian(y)) => {
                AnyElement::Abelian(a.multiply(x, y))
            }
            (AnyGroup::Dihedral(d), AnyElement::Dihedral(x), AnyElement::Dihedral(y)) => {
                AnyElement::Dihedral(d.multiply(x, y))
            }
            (AnyGroup::Table(t), AnyElement::Table(x), AnyElement::Table(y)) => AnyElement::Table(t.mul(*x, *y)),
            _ => mismatch(),
        }
    }

    fn inverse(&self, x: &AnyElement) -> AnyElement {
        match (self, x) {
            (AnyGroup::Abelian(a), AnyElement::Abelian(x)) => AnyElement::Abelian(a.inverse(x)),
            (AnyGroup::Dihedral(d), AnyElement::Dihedral(x)) => AnyElement::Dihedral(d.inverse(x)),
            (AnyGroup::Table(t), AnyElement::Table(x)) => AnyElement::Table(t.inv(*x)),
            _ => mismatch(),
        }
    }

    fn validate(&self, x: &AnyElement) -> Result<()> {
        match (self, x) {
            (AnyGroup::Abelian(a), AnyElement::Abelian(x)) => a.validate(x),
            (AnyGroup::Dihedral(d), AnyElement::Dihedral(x)) => d.validate(x),
            (AnyGroup::Table(t), AnyElement::Table(x)) => t.validate(x),
            _ => Err(Error::InvalidElement(format!("{x} does not belong to a group of this kind"))),
        }
    }
}

impl Serialize for AnyElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
