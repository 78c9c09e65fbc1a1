//! Generalized dihedral groups `Dih(A) = A ⋊ Z/2`, with `Z/2` acting on the
//! abelian group `A` by inversion.
//!
//! Elements are pairs `⟨v; ε⟩`, rendered `rot(v)` for `ε = 0` and `ref(v)` for
//! `ε = 1`, multiplied by `⟨v; ε⟩·⟨w; δ⟩ = ⟨v + (−1)^ε w; ε ⊕ δ⟩`. The
//! classical dihedral groups are `D_{2n} = Dih(Z/n)` and `D_∞ = Dih(Z)`.

use std::fmt;

use serde::Serialize;

use crate::abelian::{AbelianElement, AbelianGroup, Order};
use crate::error::{Error, Result};
use crate::group::{closure, Group};
use crate::tables::{FiniteGroupTable, RawTable};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GenDihedralGroup {
    base: AbelianGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GenDihedralElement {
    /// Reflections sort after rotations.
    pub reflection: bool,
    pub v: AbelianElement,
}

impl GenDihedralGroup {
    pub fn new(base: AbelianGroup) -> Self {
        GenDihedralGroup { base }
    }

    /// `D_{2n} = Dih(Z/n)`; `n = 0` gives `D_∞`.
    pub fn dihedral(n: u64) -> Self {
        GenDihedralGroup::new(AbelianGroup::cyclic(n))
    }

    pub fn infinite_dihedral() -> Self {
        GenDihedralGroup::new(AbelianGroup::free(1))
    }

    pub fn base(&self) -> &AbelianGroup {
        &self.base
    }

    pub fn order(&self) -> Option<u64> {
        self.base.order().map(|n| 2 * n)
    }

    /// `Dih(A)` is abelian exactly when every element of `A` has order at most 2.
    pub fn is_abelian(&self) -> bool {
        self.base.has_exponent_at_most_two()
    }

    pub fn rot(&self, v: AbelianElement) -> GenDihedralElement {
        GenDihedralElement { reflection: false, v }
    }

    pub fn refl(&self, v: AbelianElement) -> GenDihedralElement {
        GenDihedralElement { reflection: true, v }
    }

    /// `rot` from a flat coordinate vector (free coordinates first).
    pub fn rot_coords(&self, coords: &[i64]) -> Result<GenDihedralElement> {
        Ok(self.rot(self.base.element_from_coords(coords)?))
    }

    pub fn ref_coords(&self, coords: &[i64]) -> Result<GenDihedralElement> {
        Ok(self.refl(self.base.element_from_coords(coords)?))
    }

    /// The reflection `a = ref(0)`.
    pub fn a(&self) -> GenDihedralElement {
        self.refl(self.base.zero())
    }

    /// The rotation `b = rot(e_1)`, when `A` has at least one coordinate.
    pub fn b(&self) -> Option<GenDihedralElement> {
        (self.base.dimension() > 0).then(|| self.rot(self.base.basis(0)))
    }

    pub fn element_order(&self, x: &GenDihedralElement) -> Order {
        if x.reflection {
            Order::Finite(2)
        } else {
            self.base.element_order(&x.v)
        }
    }

    /// A tuple generates `Dih(A)` iff it contains a reflection and the
    /// rotation parts together with the differences of reflection parts
    /// (relative to the first reflection) generate `A`.
    pub fn is_generating(&self, tuple: &[GenDihedralElement]) -> Result<bool> {
        for x in tuple {
            self.validate(x)?;
        }
        let Some(first) = tuple.iter().find(|x| x.reflection) else {
            return Ok(false);
        };
        let base_gens: Vec<AbelianElement> = tuple
            .iter()
            .map(|x| if x.reflection { self.base.add(&x.v, &self.base.neg(&first.v)) } else { x.v.clone() })
            .collect();
        self.base.generates_full(&base_gens)
    }

    /// All elements, rotations first, each half in the order of [`AbelianGroup::elements`].
    pub fn elements(&self) -> Result<Vec<GenDihedralElement>> {
        let base = self.base.elements()?;
        let mut out: Vec<_> = base.iter().cloned().map(|v| self.rot(v)).collect();
        out.extend(base.into_iter().map(|v| self.refl(v)));
        Ok(out)
    }

    /// Cayley table of a finite `Dih(A)` with at most `cap` elements.
    pub fn materialize_table(&self, cap: u64) -> Result<FiniteGroupTable> {
        let order = self.order().ok_or(Error::InfiniteGroup)?;
        if order > cap {
            return Err(Error::cap(order as u128, cap as u128));
        }
        table_from_elements(self, self.elements()?)
    }
}

/// Cayley table of a finite group given by its element list (identity first).
pub(crate) fn table_from_elements<G: Group>(group: &G, elements: Vec<G::Element>) -> Result<FiniteGroupTable>
where
    G::Element: fmt::Display,
{
    let index: std::collections::HashMap<&G::Element, usize> =
        elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let table = elements.iter().map(|x| elements.iter().map(|y| index[&group.multiply(x, y)]).collect()).collect();
    let labels = elements.iter().map(|x| x.to_string()).collect();
    // Built from exact arithmetic, so only the cheap structural checks are needed.
    FiniteGroupTable::from_raw_unchecked_associativity(RawTable { labels: Some(labels), table }).map_err(Error::from)
}

impl AbelianGroup {
    /// Cayley table of a finite abelian group with at most `cap` elements.
    pub fn materialize_table(&self, cap: u64) -> Result<FiniteGroupTable> {
        let order = self.order().ok_or(Error::InfiniteGroup)?;
        if order > cap {
            return Err(Error::cap(order as u128, cap as u128));
        }
        table_from_elements(self, self.elements()?)
    }
}

impl Group for GenDihedralGroup {
    type Element = GenDihedralElement;

    fn identity(&self) -> GenDihedralElement {
        self.rot(self.base.zero())
    }

    fn multiply(&self, x: &GenDihedralElement, y: &GenDihedralElement) -> GenDihedralElement {
        let w = if x.reflection { self.base.neg(&y.v) } else { y.v.clone() };
        GenDihedralElement { reflection: x.reflection ^ y.reflection, v: self.base.add(&x.v, &w) }
    }

    fn inverse(&self, x: &GenDihedralElement) -> GenDihedralElement {
        if x.reflection {
            x.clone()
        } else {
            self.rot(self.base.neg(&x.v))
        }
    }

    fn is_identity(&self, x: &GenDihedralElement) -> bool {
        !x.reflection && x.v.is_zero()
    }

    fn validate(&self, x: &GenDihedralElement) -> Result<()> {
        self.base.validate(&x.v)
    }
}

impl fmt::Display for GenDihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.reflection { "ref" } else { "rot" };
        write!(f, "{kind}({})", self.v.coords_string())
    }
}

impl fmt::Display for GenDihedralGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.base;
        match (b.free_rank(), b.invariant_factors()) {
            (0, []) => f.write_str("D2"),
            (0, [n]) => write!(f, "D{}", 2 * n),
            (1, []) => f.write_str("Dinf"),
            _ => write!(f, "Dih({b})"),
        }
    }
}

/// Subgroup generated by a tuple, by brute-force closure (finite groups only).
pub fn closure_size(group: &GenDihedralGroup, tuple: &[GenDihedralElement], cap: usize) -> Option<usize> {
    closure(group, tuple, cap).map(|s| s.len())
}

impl Serialize for GenDihedralElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{Letter, Word};

    #[test]
    fn multiplication_examples() {
        let d12 = GenDihedralGroup::dihedral(6);
        let a = d12.a();
        let b = d12.b().unwrap();
        let aba = d12.multiply(&d12.multiply(&a, &b), &a);
        assert_eq!(aba, d12.rot_coords(&[5]).unwrap());
        assert_eq!(aba, d12.inverse(&b));
        let r2 = d12.ref_coords(&[2]).unwrap();
        let r3 = d12.ref_coords(&[3]).unwrap();
        assert_eq!(d12.multiply(&r2, &r3), d12.rot_coords(&[5]).unwrap());
        for r in [&a, &r2, &r3] {
            assert!(d12.is_identity(&d12.multiply(r, r)));
        }
    }

    #[test]
    fn orders() {
        let dinf = GenDihedralGroup::infinite_dihedral();
        assert_eq!(dinf.element_order(&dinf.b().unwrap()), Order::Infinite);
        assert_eq!(dinf.element_order(&dinf.a()), Order::Finite(2));
        let d12 = GenDihedralGroup::dihedral(6);
        assert_eq!(d12.element_order(&d12.rot_coords(&[2]).unwrap()), Order::Finite(3));
        assert_eq!(d12.element_order(&d12.identity()), Order::Finite(1));
    }

    #[test]
    fn word_evaluation() {
        let d12 = GenDihedralGroup::dihedral(6);
        let s = vec![d12.a(), d12.b().unwrap()];
        let abab = Word::new(2, &[Letter::pos(1), Letter::pos(2), Letter::pos(1), Letter::pos(2)]).unwrap();
        assert!(d12.is_identity(&d12.evaluate(&s, &abab).unwrap()));
        let b6 = Word::power_of(2, 2, 6).unwrap();
        assert!(d12.is_identity(&d12.evaluate(&s, &b6).unwrap()));
        let dinf = GenDihedralGroup::infinite_dihedral();
        let t = vec![dinf.a(), dinf.b().unwrap()];
        assert_eq!(dinf.evaluate(&t, &b6).unwrap(), dinf.rot_coords(&[6]).unwrap());
        assert!(dinf.is_identity(&dinf.evaluate(&t, &Word::identity(2)).unwrap()));
        assert!(dinf.evaluate(&t[..1], &b6).is_err());
    }

    #[test]
    fn generation_examples() {
        let dinf = GenDihedralGroup::infinite_dihedral();
        let a = dinf.a();
        let r = |c: i64| dinf.rot_coords(&[c]).unwrap();
        let f = |c: i64| dinf.ref_coords(&[c]).unwrap();
        assert!(dinf.is_generating(&[a.clone(), r(1)]).unwrap());
        assert!(!dinf.is_generating(&[a.clone(), r(2)]).unwrap());
        assert!(dinf.is_generating(&[a.clone(), f(1)]).unwrap());
        assert!(!dinf.is_generating(&[r(1)]).unwrap());
        // Cross-check the D∞ negative case in the quotient D_8.
        let d8 = GenDihedralGroup::dihedral(4);
        let s = [d8.a(), d8.rot_coords(&[2]).unwrap()];
        assert_eq!(closure_size(&d8, &s, 100), Some(4));
        assert!(!d8.is_generating(&s).unwrap());
    }

    #[test]
    fn tables() {
        let d6 = GenDihedralGroup::dihedral(3).materialize_table(1000).unwrap();
        assert_eq!(d6.order(), 6);
        let klein = GenDihedralGroup::dihedral(2).materialize_table(1000).unwrap();
        assert_eq!(klein.order(), 4);
        assert!(klein.is_abelian());
        let big = GenDihedralGroup::new(AbelianGroup::new(0, &[4, 4]));
        assert_eq!(big.materialize_table(1000).unwrap().order(), 32);
        assert!(matches!(big.materialize_table(10), Err(Error::CapExceeded { .. })));
        assert!(matches!(GenDihedralGroup::infinite_dihedral().materialize_table(10), Err(Error::InfiniteGroup)));
        assert_eq!(d6.label(0), "rot(0)");
        assert_eq!(d6.label(3), "ref(0)");
    }

    #[test]
    fn abelian_iff_exponent_two() {
        for factors in [vec![], vec![2], vec![2, 2], vec![3], vec![4], vec![2, 4]] {
            let g = GenDihedralGroup::new(AbelianGroup::new(0, &factors));
            let t = g.materialize_table(1000).unwrap();
            assert_eq!(g.is_abelian(), t.is_abelian(), "{g}");
        }
    }

    #[test]
    fn display() {
        assert_eq!(GenDihedralGroup::dihedral(6).to_string(), "D12");
        assert_eq!(GenDihedralGroup::infinite_dihedral().to_string(), "Dinf");
        assert_eq!(GenDihedralGroup::new(AbelianGroup::trivial()).to_string(), "D2");
        assert_eq!(GenDihedralGroup::new(AbelianGroup::new(2, &[6])).to_string(), "Dih(Z^2 x Z/6)");
        let g = GenDihedralGroup::new(AbelianGroup::new(2, &[6]));
        assert_eq!(g.rot_coords(&[3, -1, 2]).unwrap().to_string(), "rot(3,-1;2)");
    }
}
