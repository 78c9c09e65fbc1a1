//! Marked groups and the topology of the space of marked groups.
//!
//! A marked group `(G, S)` with `|S| = m` is identified with the kernel of
//! `F_m → G`. Two marked groups are close when their relation balls (the
//! reduced words of length `≤ R` that are trivial) agree for a large `R`;
//! the metric used here is `d = 2^-(R+1)` for the largest agreeing `R`.
//! Word length is reduced-word length in `F_m`.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::abelian::{AbelianElement, AbelianGroup, CyclicQuotientMap};
use crate::config::Limits;
use crate::dihedral::{GenDihedralElement, GenDihedralGroup};
use crate::error::{Error, Result};
use crate::group::{closure, AnyElement, AnyGroup, Group};
use crate::tables::{FiniteGroupTable, Recognition};
use crate::words::{ball_size, Letter, Word};

/// A group with an ordered generating tuple, checked at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGroup {
    group: AnyGroup,
    gens: Vec<AnyElement>,
}

impl MarkedGroup {
    pub fn new(group: AnyGroup, gens: Vec<AnyElement>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::precondition("a marking needs at least one generator"));
        }
        for g in &gens {
            group.validate(g)?;
        }
        let generating = match &group {
            AnyGroup::Abelian(a) => a.generates_full(&abelian_parts(&gens))?,
            AnyGroup::Dihedral(d) => d.is_generating(&dihedral_parts(&gens))?,
            AnyGroup::Table(t) => closure(&group, &gens, t.order()).map(|c| c.len()) == Some(t.order()),
        };
        if !generating {
            return Err(Error::NotGenerating);
        }
        Ok(MarkedGroup { group, gens })
    }

    pub fn abelian(a: AbelianGroup, gens: Vec<AbelianElement>) -> Result<Self> {
        Self::new(AnyGroup::Abelian(a), gens.into_iter().map(AnyElement::Abelian).collect())
    }

    pub fn dihedral(d: GenDihedralGroup, gens: Vec<GenDihedralElement>) -> Result<Self> {
        Self::new(AnyGroup::Dihedral(d), gens.into_iter().map(AnyElement::Dihedral).collect())
    }

    pub fn table(t: Arc<FiniteGroupTable>, gens: Vec<usize>) -> Result<Self> {
        Self::new(AnyGroup::Table(t), gens.into_iter().map(AnyElement::Table).collect())
    }

    /// `(Z/k, (1))`, with `k = 0` giving `(Z, (1))`.
    pub fn cyclic(k: u64) -> Self {
        let a = AbelianGroup::cyclic(k);
        let one = if a.is_trivial() { a.zero() } else { a.element_from_coords(&[1]).expect("rank-one group") };
        Self::abelian(a, vec![one]).expect("1 generates a cyclic group")
    }

    /// `(D_2n, (a, b))`, with `n = 0` giving `(D_∞, (a, b))`.
    pub fn dihedral_ab(n: u64) -> Self {
        let d = GenDihedralGroup::dihedral(n);
        let b = d.b().unwrap_or_else(|| d.identity());
        Self::dihedral(d.clone(), vec![d.a(), b]).expect("a, b generate D_2n")
    }

    pub fn group(&self) -> &AnyGroup {
        &self.group
    }

    pub fn generators(&self) -> &[AnyElement] {
        &self.gens
    }

    pub fn arity(&self) -> usize {
        self.gens.len()
    }

    pub fn evaluate(&self, w: &Word) -> Result<AnyElement> {
        self.group.evaluate(&self.gens, w)
    }

    pub fn is_relation(&self, w: &Word) -> Result<bool> {
        Ok(self.group.is_identity(&self.evaluate(w)?))
    }
}

impl fmt::Display for MarkedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group = match &self.group {
            AnyGroup::Abelian(a) => a.to_string(),
            AnyGroup::Dihedral(d) => d.to_string(),
            AnyGroup::Table(t) => format!("table[{}]", t.order()),
        };
        let gens: Vec<String> = self.gens.iter().map(|g| self.group.label(g)).collect();
        write!(f, "{group}:{}", gens.join(","))
    }
}

impl Serialize for MarkedGroup {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn abelian_parts(gens: &[AnyElement]) -> Vec<AbelianElement> {
    gens.iter()
        .filter_map(|g| match g {
            AnyElement::Abelian(x) => Some(x.clone()),
            _ => None,
        })
        .collect()
}

fn dihedral_parts(gens: &[AnyElement]) -> Vec<GenDihedralElement> {
    gens.iter()
        .filter_map(|g| match g {
            AnyElement::Dihedral(x) => Some(x.clone()),
            _ => None,
        })
        .collect()
}

// ---- relation balls ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationBall {
    pub arity: usize,
    pub radius: usize,
    /// Sorted by length, then lexicographically.
    pub relations: Vec<Word>,
}

impl RelationBall {
    pub fn contains(&self, w: &Word) -> bool {
        self.relations.binary_search(w).is_ok()
    }

    /// The relations of length at most `radius`.
    pub fn truncate(&self, radius: usize) -> RelationBall {
        RelationBall {
            arity: self.arity,
            radius: radius.min(self.radius),
            relations: self.relations.iter().filter(|w| w.len() <= radius).cloned().collect(),
        }
    }
}

/// Visits the reduced words of length `1..=radius` layer by layer, in
/// increasing order, carrying the value of each word in every group.
fn walk_ball<G: Group>(
    groups: &[(&G, &[G::Element])],
    arity: usize,
    radius: usize,
    limits: &Limits,
    mut visit: impl FnMut(&Word, &[G::Element]) -> bool,
) -> Result<()> {
    if arity == 0 {
        return Err(Error::precondition("arity must be positive"));
    }
    let size = ball_size(arity, radius);
    if size > limits.ball_cap as u128 {
        return Err(Error::cap(size, limits.ball_cap as u128));
    }
    let letters: Vec<Letter> = Letter::all(arity).collect();
    let images: Vec<Vec<G::Element>> = groups
        .iter()
        .map(|(g, gens)| {
            letters
                .iter()
                .map(|l| if l.inverse { g.inverse(&gens[l.index - 1]) } else { gens[l.index - 1].clone() })
                .collect()
        })
        .collect();
    let mut layer: Vec<(Word, Vec<G::Element>)> =
        vec![(Word::identity(arity), groups.iter().map(|(g, _)| g.identity()).collect())];
    for _ in 0..radius {
        let mut next = Vec::with_capacity(layer.len() * (2 * arity - 1));
        for (w, vals) in &layer {
            for (k, &l) in letters.iter().enumerate() {
                if w.last() == Some(l.inv()) {
                    continue;
                }
                let v: Vec<G::Element> =
                    groups.iter().zip(vals).enumerate().map(|(j, ((g, _), x))| g.multiply(x, &images[j][k])).collect();
                next.push((w.push(l), v));
            }
        }
        // Extending a sorted layer letter by letter keeps it sorted.
        for (w, v) in &next {
            if !visit(w, v) {
                return Ok(());
            }
        }
        layer = next;
    }
    Ok(())
}

/// All reduced words of length `≤ radius` that are trivial in `M`.
pub fn relation_ball(m: &MarkedGroup, radius: usize, limits: &Limits) -> Result<RelationBall> {
    let mut relations = vec![Word::identity(m.arity())];
    walk_ball(&[(&m.group, &m.gens[..])], m.arity(), radius, limits, |w, v| {
        if m.group.is_identity(&v[0]) {
            relations.push(w.clone());
        }
        true
    })?;
    Ok(RelationBall { arity: m.arity(), radius, relations })
}

// ---- agreement radius and distance ----

/// How far two markings agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Agreement {
    /// Largest radius at which the relation balls agree; a lower bound when
    /// `exact` is false.
    pub radius: usize,
    pub exact: bool,
    /// Shortest (then lexicographically least) word trivial in exactly one of the two.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separating_word: Option<Word>,
}

impl Agreement {
    fn separated(w: Word) -> Self {
        Agreement { radius: w.len() - 1, exact: true, separating_word: Some(w) }
    }

    fn at_least(radius: usize) -> Self {
        Agreement { radius, exact: false, separating_word: None }
    }

    /// `2^-(R+1)`, or 0 when no separating word was found.
    pub fn distance(&self) -> f64 {
        if self.exact {
            0.5f64.powi(self.radius as i32 + 1)
        } else {
            0.0
        }
    }
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact {
            write!(f, "{}", self.radius)
        } else {
            write!(f, ">={}", self.radius)
        }
    }
}

fn check_arity(m1: &MarkedGroup, m2: &MarkedGroup) -> Result<()> {
    if m1.arity() != m2.arity() {
        return Err(Error::ArityMismatch { expected: m1.arity(), found: m2.arity() });
    }
    Ok(())
}

/// Agreement radius by comparing the two relation balls word by word.
pub fn agreement_radius_exhaustive(
    m1: &MarkedGroup,
    m2: &MarkedGroup,
    rmax: usize,
    limits: &Limits,
) -> Result<Agreement> {
    check_arity(m1, m2)?;
    let mut found = None;
    walk_ball(&[(&m1.group, &m1.gens[..]), (&m2.group, &m2.gens[..])], m1.arity(), rmax, limits, |w, v| {
        if m1.group.is_identity(&v[0]) != m2.group.is_identity(&v[1]) {
            found = Some(w.clone());
            return false;
        }
        true
    })?;
    Ok(found.map_or(Agreement::at_least(rmax), Agreement::separated))
}

/// Result of a breadth-first search for a separating word.
enum Search {
    Separated(Word),
    /// The diagonal subgroup was exhausted: the markings define the same kernel.
    Equal,
    DepthReached,
}

/// Breadth-first search over the subgroup of `G × H` generated by the
/// pairs `(s_i, t_i)`, in shortlex order of representative words.
fn search_separating(m1: &MarkedGroup, m2: &MarkedGroup, max_len: usize, limits: &Limits) -> Result<Search> {
    let (g, h) = (&m1.group, &m2.group);
    let letters: Vec<Letter> = Letter::all(m1.arity()).collect();
    let step = |m: &MarkedGroup, l: Letter| {
        let x = &m.gens[l.index - 1];
        if l.inverse {
            m.group.inverse(x)
        } else {
            x.clone()
        }
    };
    let steps: Vec<(AnyElement, AnyElement)> = letters.iter().map(|&l| (step(m1, l), step(m2, l))).collect();
    let mut seen: HashSet<(AnyElement, AnyElement)> = HashSet::new();
    let start = (g.identity(), h.identity());
    seen.insert(start.clone());
    let mut layer = vec![(Word::identity(m1.arity()), start)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, (x, y)) in &layer {
            for (k, &l) in letters.iter().enumerate() {
                if w.last() == Some(l.inv()) {
                    continue;
                }
                let pair = (g.multiply(x, &steps[k].0), h.multiply(y, &steps[k].1));
                if g.is_identity(&pair.0) != h.is_identity(&pair.1) {
                    return Ok(Search::Separated(w.push(l)));
                }
                if seen.insert(pair.clone()) {
                    if seen.len() as u64 > limits.ball_cap {
                        return Err(Error::cap(seen.len() as u128, limits.ball_cap as u128));
                    }
                    next.push((w.push(l), pair));
                }
            }
        }
        if next.is_empty() {
            return Ok(Search::Equal);
        }
        layer = next;
    }
    Ok(Search::DepthReached)
}

/// Largest `R ≤ rmax` at which the relation balls of `m1` and `m2` agree.
pub fn agreement_radius(m1: &MarkedGroup, m2: &MarkedGroup, rmax: usize, limits: &Limits) -> Result<Agreement> {
    check_arity(m1, m2)?;
    Ok(match search_separating(m1, m2, rmax, limits)? {
        Search::Separated(w) => Agreement::separated(w),
        Search::Equal | Search::DepthReached => Agreement::at_least(rmax),
    })
}

/// Shortest separating word with no radius bound, limited only by the
/// enumeration cap. `None` when the marked groups are equal.
pub fn separating_word(m1: &MarkedGroup, m2: &MarkedGroup, limits: &Limits) -> Result<Option<Word>> {
    check_arity(m1, m2)?;
    match search_separating(m1, m2, usize::MAX, limits)? {
        Search::Separated(w) => Ok(Some(w)),
        Search::Equal => Ok(None),
        Search::DepthReached => unreachable!("unbounded search"),
    }
}

pub fn distance(m1: &MarkedGroup, m2: &MarkedGroup, rmax: usize, limits: &Limits) -> Result<f64> {
    Ok(agreement_radius(m1, m2, rmax, limits)?.distance())
}

// ---- convergence ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConvergenceVerdict {
    ConsistentWithConvergence,
    /// At `index` the term separates from the limit by `witness` too early.
    Refuted {
        index: u64,
        witness: Word,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport {
    pub limit: String,
    pub indices: Vec<u64>,
    pub targets: Vec<usize>,
    pub radii: Vec<Agreement>,
    pub verdict: ConvergenceVerdict,
}

impl ConvergenceReport {
    pub fn is_consistent(&self) -> bool {
        self.verdict == ConvergenceVerdict::ConsistentWithConvergence
    }

    /// Radii as plain numbers (lower bounds included as-is).
    pub fn radius_values(&self) -> Vec<usize> {
        self.radii.iter().map(|a| a.radius).collect()
    }
}

/// Compares sampled terms of a family with a candidate limit.
///
/// The `i`-th sampled term must agree with the limit beyond `targets[i]`
/// (default: `i`), and radii must not decrease. Radii are searched up to
/// `max(rmax, target + 1)`.
pub fn check_convergence(
    family: impl Fn(u64) -> Result<MarkedGroup>,
    limit: &MarkedGroup,
    indices: &[u64],
    targets: Option<&[usize]>,
    rmax: usize,
    limits: &Limits,
) -> Result<ConvergenceReport> {
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::precondition("sampled indices must be strictly increasing"));
    }
    let targets: Vec<usize> = match targets {
        Some(t) if t.len() != indices.len() => {
            return Err(Error::precondition("one schedule target is needed per sampled index"))
        }
        Some(t) => t.to_vec(),
        None => (0..indices.len()).collect(),
    };
    let mut radii = Vec::with_capacity(indices.len());
    let mut verdict = ConvergenceVerdict::ConsistentWithConvergence;
    for (i, &n) in indices.iter().enumerate() {
        let term = family(n)?;
        let bound = rmax.max(targets[i] + 1);
        let size = ball_size(limit.arity(), bound);
        if size > limits.ball_cap as u128 {
            return Err(Error::cap(size, limits.ball_cap as u128));
        }
        let a = agreement_radius(&term, limit, bound, limits)?;
        let decreased = radii.last().is_some_and(|p: &Agreement| a.exact && a.radius < p.radius);
        if verdict == ConvergenceVerdict::ConsistentWithConvergence && (decreased || a.radius <= targets[i]) {
            if let Some(w) = &a.separating_word {
                verdict = ConvergenceVerdict::Refuted { index: n, witness: w.clone() };
            }
        }
        radii.push(a);
    }
    Ok(ConvergenceReport { limit: limit.to_string(), indices: indices.to_vec(), targets, radii, verdict })
}

// ---- limits of dihedral groups ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitDecision {
    pub holds: bool,
    pub reason: String,
}

fn decision(holds: bool, reason: impl Into<String>) -> LimitDecision {
    LimitDecision { holds, reason: reason.into() }
}

/// The abelian group `Dih(A)` is isomorphic to when `A` has exponent at most 2.
fn abelian_dih(base: &AbelianGroup) -> AbelianGroup {
    let mut twos = vec![2; base.invariant_factors().len()];
    twos.push(2);
    AbelianGroup::new(0, &twos)
}

/// The group as an abelian group, when it is abelian.
pub fn as_abelian(g: &AnyGroup) -> Option<AbelianGroup> {
    match g {
        AnyGroup::Abelian(a) => Some(a.clone()),
        AnyGroup::Dihedral(d) if d.is_abelian() => Some(abelian_dih(d.base())),
        AnyGroup::Dihedral(_) => None,
        AnyGroup::Table(t) => t.is_abelian().then(|| t.abelian_invariants(&(0..t.order()).collect::<Vec<_>>())),
    }
}

/// The rotation subgroup, when the group is a nonabelian generalized dihedral group.
pub fn dihedral_base(g: &AnyGroup) -> Option<AbelianGroup> {
    match g {
        AnyGroup::Dihedral(d) if !d.is_abelian() => Some(d.base().clone()),
        AnyGroup::Table(t) => match t.recognize_generalized_dihedral() {
            Recognition::GenDihedral { base, .. } => Some(base),
            _ => None,
        },
        _ => None,
    }
}

fn abelian_is_dihedral(a: &AbelianGroup) -> bool {
    a.free_rank() == 0 && (a.invariant_factors() == [2] || a.invariant_factors() == [2, 2])
}

/// Whether the group is a limit of dihedral groups.
///
/// A nonabelian `Dih(A)` is one iff `A` is a limit of cyclic groups; an
/// abelian group is one iff it is `D_2 ≅ Z/2` or `D_4 ≅ Z/2 × Z/2`.
pub fn is_limit_of_dihedral(g: &AnyGroup) -> LimitDecision {
    if let Some(a) = as_abelian(g) {
        return if abelian_is_dihedral(&a) {
            let name = if a.invariant_factors().len() == 1 { "D2" } else { "D4" };
            decision(true, format!("abelian and isomorphic to {name}"))
        } else {
            decision(false, format!("abelian ({a}) but not isomorphic to D2 or D4"))
        };
    }
    match dihedral_base(g) {
        Some(base) if base.is_limit_of_cyclic() => {
            decision(true, format!("Dih({base}) with {base} a limit of cyclic groups (cyclic torsion)"))
        }
        Some(base) => decision(false, format!("Dih({base}) with non-cyclic torsion {:?}", base.invariant_factors())),
        None => decision(false, "nonabelian and not a generalized dihedral group"),
    }
}

/// A map `Dih(A) → D_2M` that kills no element of a given finite set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DihedralResidualWitness {
    pub rotation_map: CyclicQuotientMap,
    pub target: GenDihedralGroup,
    pub images: Vec<GenDihedralElement>,
}

impl DihedralResidualWitness {
    /// The `n` with target `D_2n`.
    pub fn n(&self) -> u64 {
        self.rotation_map.modulus
    }

    pub fn apply(&self, x: &GenDihedralElement) -> GenDihedralElement {
        let v = self.rotation_map.apply(&x.v) as i64;
        let e = self.target.base().element_from_coords(&[v]).expect("residue in range");
        GenDihedralElement { reflection: x.reflection, v: e }
    }
}

/// Maps `⟨v; ε⟩ ↦ ⟨q(v); ε⟩` where `q` is a cyclic residual quotient of the
/// base keeping the rotation parts of `survivors` nonzero.
pub fn dihedral_residual_witness(
    g: &GenDihedralGroup,
    survivors: &[GenDihedralElement],
) -> Result<DihedralResidualWitness> {
    if g.is_abelian() {
        return Err(Error::precondition(format!("{g} is abelian")));
    }
    let decision = is_limit_of_dihedral(&AnyGroup::Dihedral(g.clone()));
    if !decision.holds {
        return Err(Error::precondition(format!("{g} is not a limit of dihedral groups: {}", decision.reason)));
    }
    for x in survivors {
        g.validate(x)?;
        if g.is_identity(x) {
            return Err(Error::precondition("the survivor set contains the identity"));
        }
    }
    let rotations: Vec<AbelianElement> = survivors.iter().filter(|x| !x.reflection).map(|x| x.v.clone()).collect();
    let q = crate::abelian::cyclic_residual_quotient(g.base(), &rotations)?;
    let target = GenDihedralGroup::dihedral(q.modulus);
    let mut w = DihedralResidualWitness { rotation_map: q, target, images: Vec::new() };
    w.images = survivors.iter().map(|x| w.apply(x)).collect();
    Ok(w)
}

/// `(A, S) ↦ (Dih(A), (ref(0), rot(s_1), …))`.
pub fn dih_embed(m: &MarkedGroup) -> Result<MarkedGroup> {
    let AnyGroup::Abelian(a) = m.group() else {
        return Err(Error::precondition("the embedding takes a marked abelian group"));
    };
    let d = GenDihedralGroup::new(a.clone());
    let mut gens = vec![d.a()];
    gens.extend(abelian_parts(&m.gens).into_iter().map(|v| d.rot(v)));
    MarkedGroup::dihedral(d, gens)
}

// ---- Cantor–Bendixson ranks ----

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureFamily {
    /// Closure of the dihedral marked groups.
    Dihedral,
    /// Closure of the cyclic marked groups.
    Cyclic,
    /// All marked abelian groups.
    Abelian,
}

impl std::str::FromStr for ClosureFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dihedral" | "dihedral-closure" => Ok(ClosureFamily::Dihedral),
            "cyclic" | "cyclic-closure" => Ok(ClosureFamily::Cyclic),
            "abelian" | "all-marked" => Ok(ClosureFamily::Abelian),
            other => Err(Error::Unsupported(format!("unknown family `{other}`"))),
        }
    }
}

/// Cantor–Bendixson rank within the family: the free rank of `A` for
/// `Dih(A)`, or of the group itself when abelian.
pub fn cb_rank(g: &AnyGroup, family: ClosureFamily) -> Result<usize> {
    match family {
        ClosureFamily::Dihedral => {
            let d = is_limit_of_dihedral(g);
            if !d.holds {
                return Err(Error::precondition(format!("not in the dihedral closure: {}", d.reason)));
            }
            Ok(match (as_abelian(g), dihedral_base(g)) {
                (Some(a), _) => a.free_rank(),
                (None, Some(base)) => base.free_rank(),
                (None, None) => unreachable!("limits of dihedral groups are abelian or generalized dihedral"),
            })
        }
        ClosureFamily::Cyclic => match as_abelian(g) {
            Some(a) if a.is_limit_of_cyclic() => Ok(a.free_rank()),
            _ => Err(Error::precondition("not in the closure of cyclic groups")),
        },
        ClosureFamily::Abelian => match as_abelian(g) {
            Some(a) => Ok(a.free_rank()),
            None => Err(Error::precondition("not abelian")),
        },
    }
}

/// Number of generators of a limit of dihedral groups: `r(A) + 1`, where
/// `r(A)` is the minimal number of generators of `A`.
pub fn rank_of_limit(g: &AnyGroup) -> Result<usize> {
    let d = is_limit_of_dihedral(g);
    if !d.holds {
        return Err(Error::precondition(format!("not a limit of dihedral groups: {}", d.reason)));
    }
    if let Some(a) = as_abelian(g) {
        return Ok(a.invariant_factors().len());
    }
    let base = dihedral_base(g).expect("nonabelian limit");
    Ok(base.min_generators() + 1)
}

/// Characteristic system `(α, n)` of a countable compact space: `n` points of maximal rank `α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicSystem {
    pub alpha: usize,
    pub n: u64,
}

/// Characteristic system of the closure of the family in the space of `m`-generated marked groups.
pub fn closure_characteristic(m: usize, family: ClosureFamily) -> Result<CharacteristicSystem> {
    match (family, m) {
        (ClosureFamily::Dihedral, m) if (2..64).contains(&m) => {
            Ok(CharacteristicSystem { alpha: m - 1, n: (1u64 << m) - 1 })
        }
        (ClosureFamily::Abelian, m) if m >= 1 => Ok(CharacteristicSystem { alpha: m, n: 1 }),
        (ClosureFamily::Cyclic, 1) => Ok(CharacteristicSystem { alpha: 1, n: 1 }),
        (family, m) => Err(Error::Unsupported(format!("no characteristic system for family {family:?} with m = {m}"))),
    }
}

// ---- accumulation witnesses ----

/// Marked groups converging to a marked group of positive rank.
#[derive(Clone, Debug, Serialize)]
pub struct AccumulationWitness {
    pub target: MarkedGroup,
    pub primes: Vec<u64>,
    pub family: Vec<MarkedGroup>,
    /// `(i, j, w)`: `w` separates members `i < j`.
    pub separations: Vec<(usize, usize, Word)>,
    pub report: ConvergenceReport,
}

/// The quotient of `A = Z^r × Z/d_1 × … × Z/d_t` by `p` times its first free
/// coordinate, as a map into invariant-factor form.
struct FirstCoordinateReduction {
    target: AbelianGroup,
    p: u64,
}

impl FirstCoordinateReduction {
    fn new(a: &AbelianGroup, p: u64) -> Result<Self> {
        let mut factors = a.invariant_factors().to_vec();
        match factors.last_mut() {
            Some(d) => *d *= p,
            None => factors.push(p),
        }
        let target = AbelianGroup::new(a.free_rank() - 1, &factors);
        if target.invariant_factors() != factors {
            return Err(Error::precondition(format!("prime {p} divides the torsion of {a}")));
        }
        Ok(FirstCoordinateReduction { target, p })
    }

    /// `(x_1, …, x_r; t_1, …, t_t) ↦ (x_2, …, x_r; t_1, …, x_1·d_t + t_t·p)`.
    fn apply(&self, x: &AbelianElement) -> AbelianElement {
        let mut torsion: Vec<i64> = x.torsion.iter().map(|&t| t as i64).collect();
        let x1 = x.free[0];
        match torsion.last_mut() {
            Some(t) => {
                let d = *self.target.invariant_factors().last().unwrap() / self.p;
                *t = x1 * d as i64 + *t * self.p as i64;
            }
            None => torsion.push(x1),
        }
        self.target.element(x.free[1..].to_vec(), torsion).expect("well-formed image")
    }
}

fn reduce_marking(m: &MarkedGroup, p: u64) -> Result<MarkedGroup> {
    match m.group() {
        AnyGroup::Abelian(a) => {
            let r = FirstCoordinateReduction::new(a, p)?;
            MarkedGroup::abelian(r.target.clone(), abelian_parts(&m.gens).iter().map(|x| r.apply(x)).collect())
        }
        AnyGroup::Dihedral(d) => {
            let r = FirstCoordinateReduction::new(d.base(), p)?;
            let target = GenDihedralGroup::new(r.target.clone());
            let gens = dihedral_parts(&m.gens)
                .iter()
                .map(|x| GenDihedralElement { reflection: x.reflection, v: r.apply(&x.v) })
                .collect();
            MarkedGroup::dihedral(target, gens)
        }
        AnyGroup::Table(_) => Err(Error::precondition("finite groups are isolated")),
    }
}

/// Replaces the first infinite cyclic factor by `Z/p` for `count` odd
/// primes `p` coprime to the torsion, giving distinct marked groups whose
/// agreement radii with `m` strictly increase.
pub fn accumulation_witness(m: &MarkedGroup, count: usize, limits: &Limits) -> Result<AccumulationWitness> {
    let base = match m.group() {
        AnyGroup::Abelian(a) => a.clone(),
        AnyGroup::Dihedral(d) => d.base().clone(),
        AnyGroup::Table(_) => return Err(Error::precondition("finite groups are isolated")),
    };
    if base.free_rank() == 0 {
        return Err(Error::precondition(format!("{m} has rank 0 and is isolated")));
    }
    let k = base.torsion_order();
    let primes: Vec<u64> = crate::abelian::primes().filter(|&p| p > 2 && k % p != 0).take(count).collect();
    let family: Vec<MarkedGroup> = primes.iter().map(|&p| reduce_marking(m, p)).collect::<Result<_>>()?;

    let mut separations = Vec::new();
    for i in 0..family.len() {
        for j in i + 1..family.len() {
            match separating_word(&family[i], &family[j], limits)? {
                Some(w) => separations.push((i, j, w)),
                None => return Err(Error::precondition(format!("members {i} and {j} coincide"))),
            }
        }
    }
    let radii: Vec<Agreement> = family
        .iter()
        .map(|f| {
            separating_word(f, m, limits)?
                .map(Agreement::separated)
                .ok_or_else(|| Error::precondition("member equals the target"))
        })
        .collect::<Result<_>>()?;
    let verdict = match radii.windows(2).position(|w| w[0].radius >= w[1].radius) {
        None => ConvergenceVerdict::ConsistentWithConvergence,
        Some(i) => ConvergenceVerdict::Refuted {
            index: primes[i + 1],
            witness: radii[i + 1].separating_word.clone().expect("exact radius"),
        },
    };
    let report = ConvergenceReport {
        limit: m.to_string(),
        indices: primes.clone(),
        targets: (0..primes.len()).collect(),
        radii,
        verdict,
    };
    Ok(AccumulationWitness { target: m.clone(), primes, family, separations, report })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(arity: usize, raw: &[(usize, i64)]) -> Word {
        raw.iter().fold(Word::identity(arity), |acc, &(i, e)| acc.concat(&Word::power_of(arity, i, e).unwrap()))
    }

    fn rendered(ball: &RelationBall) -> Vec<String> {
        ball.relations.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn relation_ball_examples() {
        let lim = Limits::default();
        assert_eq!(rendered(&relation_ball(&MarkedGroup::cyclic(2), 2, &lim).unwrap()), ["1", "g1^2", "g1^-2"]);
        let dinf = MarkedGroup::dihedral_ab(0);
        assert_eq!(rendered(&relation_ball(&dinf, 2, &lim).unwrap()), ["1", "g1^2", "g1^-2"]);
        let d12 = relation_ball(&MarkedGroup::dihedral_ab(6), 4, &lim).unwrap();
        assert!(d12.contains(&w(2, &[(1, 1), (2, 1), (1, 1), (2, 1)])));
        assert!(d12.contains(&w(2, &[(1, 1), (2, -1), (1, 1), (2, -1)])));
        assert!(!d12.contains(&w(2, &[(2, 4)])));
    }

    #[test]
    fn radius_examples() {
        let lim = Limits::default();
        let a = agreement_radius(&MarkedGroup::dihedral_ab(3), &MarkedGroup::dihedral_ab(0), 8, &lim).unwrap();
        assert_eq!((a.radius, a.exact), (2, true));
        assert_eq!(a.separating_word.unwrap().to_string(), "g2^3");
        let a = agreement_radius(&MarkedGroup::cyclic(5), &MarkedGroup::cyclic(0), 8, &lim).unwrap();
        assert_eq!((a.radius, a.exact), (4, true));
        assert_eq!(a.distance(), 1.0 / 32.0);
        let m = MarkedGroup::dihedral_ab(0);
        let a = agreement_radius(&m, &m, 8, &lim).unwrap();
        assert_eq!((a.radius, a.exact, a.distance()), (8, false, 0.0));
    }

    #[test]
    fn both_radius_methods_agree() {
        let lim = Limits::default();
        for n in [2, 3, 4, 5] {
            for k in [0, 2, 6] {
                let (x, y) = (MarkedGroup::dihedral_ab(n), MarkedGroup::dihedral_ab(k));
                assert_eq!(
                    agreement_radius(&x, &y, 7, &lim).unwrap(),
                    agreement_radius_exhaustive(&x, &y, 7, &lim).unwrap()
                );
            }
        }
    }

    #[test]
    fn arity_mismatch() {
        let lim = Limits::default();
        assert!(agreement_radius(&MarkedGroup::cyclic(3), &MarkedGroup::dihedral_ab(3), 3, &lim).is_err());
    }

    #[test]
    fn convergence_examples() {
        let lim = Limits::default();
        let ks: Vec<u64> = (3..=10).collect();
        let r =
            check_convergence(|k| Ok(MarkedGroup::cyclic(k)), &MarkedGroup::cyclic(0), &ks, None, 10, &lim).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.radius_values(), (2..=9).collect::<Vec<_>>());
        let r =
            check_convergence(|_| Ok(MarkedGroup::dihedral_ab(3)), &MarkedGroup::dihedral_ab(0), &ks, None, 10, &lim)
                .unwrap();
        match r.verdict {
            ConvergenceVerdict::Refuted { witness, .. } => assert_eq!(witness.to_string(), "g2^3"),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn limit_decisions() {
        let dih = |free, f: &[u64]| AnyGroup::Dihedral(GenDihedralGroup::new(AbelianGroup::new(free, f)));
        assert!(is_limit_of_dihedral(&dih(1, &[6])).holds);
        assert!(!is_limit_of_dihedral(&dih(0, &[2, 4])).holds);
        assert!(is_limit_of_dihedral(&dih(0, &[2])).holds);
        assert!(is_limit_of_dihedral(&dih(0, &[])).holds);
        assert!(!is_limit_of_dihedral(&dih(0, &[2, 2])).holds);
        assert!(!is_limit_of_dihedral(&AnyGroup::Abelian(AbelianGroup::trivial())).holds);
    }

    #[test]
    fn residual_witness_examples() {
        let dinf = GenDihedralGroup::infinite_dihedral();
        let b = dinf.b().unwrap();
        let ab = dinf.multiply(&dinf.a(), &b);
        let f = vec![b.clone(), dinf.power(&b, 2), ab];
        let wit = dihedral_residual_witness(&dinf, &f).unwrap();
        assert_eq!(wit.n(), 3);
        let imgs: Vec<String> = wit.images.iter().map(|x| x.to_string()).collect();
        assert_eq!(imgs, ["rot(1)", "rot(2)", "ref(2)"]);
        let wit = dihedral_residual_witness(&dinf, &[dinf.power(&b, 4)]).unwrap();
        assert_eq!(wit.n(), 3);
        let g = GenDihedralGroup::new(AbelianGroup::new(1, &[6]));
        let x = g.rot(g.base().element(vec![1], vec![0]).unwrap());
        assert_eq!(dihedral_residual_witness(&g, &[x]).unwrap().n(), 30);
        assert!(dihedral_residual_witness(&GenDihedralGroup::dihedral(2), &[]).is_err());
    }

    #[test]
    fn embedding() {
        let lim = Limits::default();
        let e = dih_embed(&MarkedGroup::cyclic(0)).unwrap();
        assert!(!agreement_radius(&e, &MarkedGroup::dihedral_ab(0), 8, &lim).unwrap().exact);
        assert_eq!(e.to_string(), "Dinf:ref(0),rot(1)");
        let e6 = dih_embed(&MarkedGroup::cyclic(6)).unwrap();
        assert_eq!(e6, MarkedGroup::dihedral_ab(6));
    }

    #[test]
    fn ranks() {
        let dih = |free, f: &[u64]| AnyGroup::Dihedral(GenDihedralGroup::new(AbelianGroup::new(free, f)));
        assert_eq!(cb_rank(&dih(0, &[6]), ClosureFamily::Dihedral).unwrap(), 0);
        assert_eq!(cb_rank(&dih(1, &[]), ClosureFamily::Dihedral).unwrap(), 1);
        assert_eq!(cb_rank(&dih(2, &[]), ClosureFamily::Dihedral).unwrap(), 2);
        assert!(cb_rank(&dih(0, &[2, 4]), ClosureFamily::Dihedral).is_err());
        assert_eq!(rank_of_limit(&dih(1, &[])).unwrap(), 2);
        assert_eq!(rank_of_limit(&dih(2, &[])).unwrap(), 3);
        assert_eq!(rank_of_limit(&dih(0, &[])).unwrap(), 1);
        assert_eq!(rank_of_limit(&dih(0, &[2])).unwrap(), 2);
        assert_eq!(
            closure_characteristic(2, ClosureFamily::Dihedral).unwrap(),
            CharacteristicSystem { alpha: 1, n: 3 }
        );
        assert_eq!(
            closure_characteristic(3, ClosureFamily::Dihedral).unwrap(),
            CharacteristicSystem { alpha: 2, n: 7 }
        );
        assert_eq!(closure_characteristic(2, ClosureFamily::Abelian).unwrap(), CharacteristicSystem { alpha: 2, n: 1 });
        assert!(closure_characteristic(1, ClosureFamily::Dihedral).is_err());
    }

    #[test]
    fn accumulation_examples() {
        let lim = Limits::default();
        let wz = accumulation_witness(&MarkedGroup::cyclic(0), 4, &lim).unwrap();
        assert_eq!(wz.primes, [3, 5, 7, 11]);
        assert_eq!(wz.report.radius_values(), [2, 4, 6, 10]);
        assert!(wz.report.is_consistent());
        let wd = accumulation_witness(&MarkedGroup::dihedral_ab(0), 3, &lim).unwrap();
        assert_eq!(wd.family[0], MarkedGroup::dihedral_ab(3));
        assert!(accumulation_witness(&MarkedGroup::dihedral_ab(4), 3, &lim).is_err());
    }
}
