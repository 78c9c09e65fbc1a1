//! Markings up to automorphism.
//!
//! For a generating tuple `S` the set `I(S)` of positions holding an
//! involution is invariant under automorphisms. In `Z^(m-1) ⋊ Z/2` it is a
//! complete invariant: every nonempty `P ⊆ {1..m}` is realized, so there are
//! `2^m - 1` classes. For finite tables the orbits of the diagonal
//! `Aut(G)` action are enumerated directly.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::abelian::AbelianGroup;
use crate::config::Limits;
use crate::dihedral::{GenDihedralElement, GenDihedralGroup};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::matrix::IntMatrix;
use crate::tables::FiniteGroupTable;

/// Positions `i` (1-based) with `S_i² = 1`.
pub fn reflection_index_set<G: Group>(group: &G, tuple: &[G::Element]) -> BTreeSet<usize> {
    tuple.iter().enumerate().filter(|(_, x)| group.is_identity(&group.multiply(x, x))).map(|(i, _)| i + 1).collect()
}

/// One orbit of generating tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarkingClass {
    pub arity: usize,
    #[serde(rename = "I")]
    pub i_set: Vec<usize>,
    /// Element labels of the lexicographically least tuple in the orbit.
    pub representative: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_size: Option<u64>,
}

fn generates(t: &FiniteGroupTable, tuple: &[usize], seen: &mut [bool], stack: &mut Vec<usize>) -> bool {
    seen.fill(false);
    seen[0] = true;
    stack.clear();
    stack.push(0);
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &g in tuple {
            let y = t.mul(x, g);
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    // In a finite group the monoid generated is the subgroup generated.
    count == t.order()
}

/// Orbit representatives of generating `m`-tuples under `Aut(G)`, in
/// increasing order of representative.
pub fn enumerate_markings(t: &FiniteGroupTable, m: usize, limits: &Limits) -> Result<Vec<MarkingClass>> {
    let n = t.order();
    let total = (n as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > limits.marking_budget as u128 {
        return Err(Error::cap(total, limits.marking_budget as u128));
    }
    let auts = t.automorphism_group(limits)?;
    let encode = |tuple: &[usize]| tuple.iter().fold(0usize, |acc, &x| acc * n + x);

    let mut assigned = vec![false; total as usize];
    let mut classes = Vec::new();
    let mut tuple = vec![0usize; m];
    let (mut seen, mut stack) = (vec![false; n], Vec::new());
    let mut generating_total = 0u64;
    for code in 0..total as usize {
        let mut c = code;
        for slot in tuple.iter_mut().rev() {
            *slot = c % n;
            c /= n;
        }
        if !generates(t, &tuple, &mut seen, &mut stack) {
            continue;
        }
        generating_total += 1;
        if assigned[code] {
            continue;
        }
        let mut orbit = 0u64;
        for phi in &auts {
            let image: Vec<usize> = tuple.iter().map(|&x| phi[x]).collect();
            let k = encode(&image);
            if !assigned[k] {
                assigned[k] = true;
                orbit += 1;
            }
        }
        classes.push(MarkingClass {
            arity: m,
            i_set: reflection_index_set(t, &tuple).into_iter().collect(),
            representative: tuple.iter().map(|&x| t.label(x).to_string()).collect(),
            indices: Some(tuple.clone()),
            orbit_size: Some(orbit),
        });
    }
    debug_assert_eq!(classes.iter().map(|c| c.orbit_size.unwrap()).sum::<u64>(), generating_total);
    Ok(classes)
}

// ---- Z^(m-1) ⋊ Z/2 ----

/// Automorphism `rot(w) ↦ rot(f·w)`, `ref(w) ↦ ref(f·w + v)` of `Z^d ⋊ Z/2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct DihAutomorphism {
    pub v: Vec<i64>,
    /// Rows of a matrix with determinant `±1`.
    pub f: Vec<Vec<i64>>,
}

impl DihAutomorphism {
    pub fn new(v: Vec<i64>, f: Vec<Vec<i64>>) -> Result<Self> {
        let d = v.len();
        if f.len() != d || f.iter().any(|r| r.len() != d) {
            return Err(Error::precondition(format!("f must be a {d}x{d} matrix")));
        }
        if !IntMatrix::from_rows(d, &f).is_unimodular() {
            return Err(Error::precondition("f must have determinant ±1"));
        }
        Ok(DihAutomorphism { v, f })
    }

    pub fn identity(d: usize) -> Self {
        let f = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        DihAutomorphism { v: vec![0; d], f }
    }

    pub fn rank(&self) -> usize {
        self.v.len()
    }

    fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.rank(), &self.f)
    }

    fn from_big(v: Vec<num_bigint::BigInt>, f: IntMatrix) -> Result<Self> {
        use num_traits::ToPrimitive;
        let overflow = || Error::Unsupported("automorphism entries overflow i64".to_string());
        let v = v.iter().map(|x| x.to_i64().ok_or_else(overflow)).collect::<Result<_>>()?;
        let f = f.to_i64_rows().ok_or_else(overflow)?;
        Ok(DihAutomorphism { v, f })
    }

    /// `f·w + shift`
    fn affine(&self, w: &[i64], shift: bool) -> Vec<i64> {
        (0..self.rank())
            .map(|i| {
                let s: i64 = self.f[i].iter().zip(w).map(|(a, b)| a * b).sum();
                if shift {
                    s + self.v[i]
                } else {
                    s
                }
            })
            .collect()
    }

    pub fn apply(&self, g: &GenDihedralGroup, x: &GenDihedralElement) -> Result<GenDihedralElement> {
        check_free_base(g, self.rank())?;
        let w = self.affine(&x.v.free, x.reflection);
        let v = g.base().element(w, vec![])?;
        Ok(GenDihedralElement { reflection: x.reflection, v })
    }

    /// `self ∘ other`: `(v_φ + f_φ·v_ψ, f_φ·f_ψ)`.
    pub fn compose(&self, other: &DihAutomorphism) -> Result<DihAutomorphism> {
        if self.rank() != other.rank() {
            return Err(Error::ArityMismatch { expected: self.rank(), found: other.rank() });
        }
        let f = &self.matrix() * &other.matrix();
        let fv = self.matrix().mul_vec(&other.v);
        let v = fv.into_iter().zip(&self.v).map(|(a, &b)| a + b).collect();
        Self::from_big(v, f)
    }

    pub fn inverse(&self) -> Result<DihAutomorphism> {
        let inv = self.matrix().unimodular_inverse().expect("unimodular by construction");
        let v = inv.mul_vec(&self.v).into_iter().map(|x| -x).collect();
        Self::from_big(v, inv)
    }
}

impl fmt::Display for DihAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.f.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        let v: Vec<String> = self.v.iter().map(|x| x.to_string()).collect();
        write!(f, "v=({}) f=[{}]", v.join(","), rows.join(";"))
    }
}

fn check_free_base(g: &GenDihedralGroup, d: usize) -> Result<()> {
    let base = g.base();
    if base.free_rank() != d || !base.invariant_factors().is_empty() {
        return Err(Error::precondition(format!("expected Dih(Z^{d}), found {g}")));
    }
    Ok(())
}

/// `Z^(m-1) ⋊ Z/2`
pub fn free_dihedral(m: usize) -> Result<GenDihedralGroup> {
    if m < 2 {
        return Err(Error::precondition("m must be at least 2"));
    }
    Ok(GenDihedralGroup::new(AbelianGroup::free(m - 1)))
}

fn unit(d: usize, i: usize) -> Vec<i64> {
    (0..d).map(|j| i64::from(j + 1 == i)).collect()
}

/// Canonical generating tuple with involutions exactly at the positions in `p`.
///
/// Positions outside `p` get `rot(e_1), …, rot(e_(m-|p|))`; positions in `p`
/// get `ref(0), ref(e_(m-|p|+1)), …, ref(e_(m-1))`.
pub fn canonical_marking(m: usize, p: &BTreeSet<usize>) -> Result<Vec<GenDihedralElement>> {
    let g = free_dihedral(m)?;
    if p.is_empty() {
        return Err(Error::precondition("a generating tuple of Z^(m-1) x| Z/2 contains an involution"));
    }
    if p.iter().any(|&i| i == 0 || i > m) {
        return Err(Error::precondition(format!("positions must lie in 1..={m}")));
    }
    let d = m - 1;
    let rotations = m - p.len();
    let (mut next_rot, mut next_ref) = (1, 0);
    let mut out = Vec::with_capacity(m);
    for i in 1..=m {
        if p.contains(&i) {
            let v = if next_ref == 0 { vec![0; d] } else { unit(d, rotations + next_ref) };
            out.push(g.ref_coords(&v)?);
            next_ref += 1;
        } else {
            out.push(g.rot_coords(&unit(d, next_rot))?);
            next_rot += 1;
        }
    }
    Ok(out)
}

fn check_marking(g: &GenDihedralGroup, m: usize, tuple: &[GenDihedralElement]) -> Result<()> {
    if tuple.len() != m {
        return Err(Error::ArityMismatch { expected: m, found: tuple.len() });
    }
    if tuple.iter().any(|x| g.is_identity(x)) {
        return Err(Error::precondition("markings of Z^(m-1) x| Z/2 have no trivial entries"));
    }
    if !g.is_generating(tuple)? {
        return Err(Error::NotGenerating);
    }
    Ok(())
}

/// The automorphism sending `canonical_marking(m, I(tuple))` to `tuple`:
/// `f` has the rotation parts, then the differences of reflection parts
/// from the first reflection, as columns; `v` is the first reflection part.
fn from_canonical(tuple: &[GenDihedralElement]) -> Result<DihAutomorphism> {
    let d = tuple.len() - 1;
    let first = tuple.iter().find(|x| x.reflection).expect("generating tuples contain a reflection");
    let mut columns: Vec<Vec<i64>> = tuple.iter().filter(|x| !x.reflection).map(|x| x.v.free.clone()).collect();
    columns.extend(
        tuple
            .iter()
            .filter(|x| x.reflection)
            .skip(1)
            .map(|x| x.v.free.iter().zip(&first.v.free).map(|(a, b)| a - b).collect()),
    );
    let f = IntMatrix::from_columns(d, &columns);
    let rows = f.to_i64_rows().expect("small entries");
    DihAutomorphism::new(first.v.free.clone(), rows)
}

/// An automorphism of `Z^(m-1) ⋊ Z/2` mapping `s` to `t` entrywise, if any.
/// One exists exactly when `I(s) = I(t)`.
pub fn decide_marking_equivalence(
    s: &[GenDihedralElement],
    t: &[GenDihedralElement],
) -> Result<Option<DihAutomorphism>> {
    let m = s.len();
    let g = free_dihedral(m)?;
    check_marking(&g, m, s)?;
    check_marking(&g, m, t)?;
    if reflection_index_set(&g, s) != reflection_index_set(&g, t) {
        return Ok(None);
    }
    let phi = from_canonical(t)?.compose(&from_canonical(s)?.inverse()?)?;
    for (x, y) in s.iter().zip(t) {
        if &phi.apply(&g, x)? != y {
            return Err(Error::Precondition(format!("witness {phi} does not map {x} to {y}")));
        }
    }
    Ok(Some(phi))
}

/// `I(tuple)` together with an automorphism taking `tuple` to its canonical representative.
pub fn canonicalize(tuple: &[GenDihedralElement]) -> Result<(BTreeSet<usize>, DihAutomorphism)> {
    let g = free_dihedral(tuple.len())?;
    let p = reflection_index_set(&g, tuple);
    let canonical = canonical_marking(tuple.len(), &p)?;
    let phi = decide_marking_equivalence(tuple, &canonical)?.expect("same involution pattern");
    Ok((p, phi))
}

/// Number of marked groups isomorphic to `Z^(m-1) ⋊ Z/2` on `m` generators,
/// counted as the canonical markings that are generating and pairwise
/// inequivalent.
pub fn count_marking_classes(m: usize) -> Result<u64> {
    if m < 2 {
        return Err(Error::precondition("m must be at least 2"));
    }
    if m > 16 {
        return Err(Error::Unsupported(format!("m = {m} is too large to enumerate")));
    }
    let reps: Vec<Vec<GenDihedralElement>> = (1u32..1 << m)
        .map(|mask| {
            let p: BTreeSet<usize> = (1..=m).filter(|i| mask & (1 << (i - 1)) != 0).collect();
            canonical_marking(m, &p)
        })
        .collect::<Result<_>>()?;
    for (i, s) in reps.iter().enumerate() {
        for t in &reps[i + 1..] {
            if decide_marking_equivalence(s, t)?.is_some() {
                return Err(Error::Precondition("two canonical markings are equivalent".to_string()));
            }
        }
    }
    Ok(reps.len() as u64)
}

/// Canonical representatives of all marking classes of `Z^(m-1) ⋊ Z/2`.
pub fn free_dihedral_classes(m: usize) -> Result<Vec<MarkingClass>> {
    let g = free_dihedral(m)?;
    let mut out = Vec::new();
    for mask in 1u32..1 << m {
        let p: BTreeSet<usize> = (1..=m).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        let rep = canonical_marking(m, &p)?;
        debug_assert_eq!(reflection_index_set(&g, &rep), p);
        out.push(MarkingClass {
            arity: m,
            i_set: p.into_iter().collect(),
            representative: rep.iter().map(|x| x.to_string()).collect(),
            indices: None,
            orbit_size: None,
        });
    }
    out.sort_by(|a, b| (a.i_set.len(), &a.i_set).cmp(&(b.i_set.len(), &b.i_set)));
    Ok(out)
}
