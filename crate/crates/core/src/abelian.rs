//! Finitely generated abelian groups `Z^r × Z/d_1 × … × Z/d_t` in
//! invariant-factor form, generation tests and cyclic residual quotients.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::matrix::{smith_normal_form, IntMatrix};

/// Order of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// Order of a cyclic factor in a direct-product description.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CyclicOrder {
    Infinite,
    Finite(u64),
}

/// `Z^free_rank × Z/d_1 × … × Z/d_t` with `2 <= d_1 | d_2 | … | d_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    free_rank: usize,
    #[serde(rename = "invariant_factors")]
    factors: Vec<u64>,
}

/// An element: integer free coordinates and residues modulo each `d_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianElement {
    pub free: Vec<i64>,
    pub torsion: Vec<u64>,
}

/// Invariant-factor form of a direct product of cyclic groups.
///
/// `Finite(0)` is read as `Z`; `Finite(1)` factors vanish.
pub fn canonical_invariant_factors(orders: &[CyclicOrder]) -> AbelianGroup {
    let mut free_rank = 0;
    let mut finite = Vec::new();
    for o in orders {
        match *o {
            CyclicOrder::Infinite | CyclicOrder::Finite(0) => free_rank += 1,
            CyclicOrder::Finite(1) => {}
            CyclicOrder::Finite(n) => finite.push(BigInt::from(n)),
        }
    }
    let snf = smith_normal_form(&IntMatrix::diagonal(&finite));
    let factors = snf
        .diagonal()
        .iter()
        .filter(|d| !d.is_one())
        .map(|d| d.to_u64().expect("invariant factor fits in u64"))
        .collect();
    AbelianGroup { free_rank, factors }
}

impl AbelianGroup {
    /// `Z^free_rank × Z/c_1 × …` for arbitrary cyclic orders `c_i` (canonicalized).
    pub fn new(free_rank: usize, cyclic_orders: &[u64]) -> Self {
        let mut orders = vec![CyclicOrder::Infinite; free_rank];
        orders.extend(cyclic_orders.iter().map(|&n| CyclicOrder::Finite(n)));
        canonical_invariant_factors(&orders)
    }

    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, factors: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, factors: Vec::new() }
    }

    /// `Z/n`, with `n = 0` meaning `Z`.
    pub fn cyclic(n: u64) -> Self {
        AbelianGroup::new(0, &[n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    /// Number of coordinates of an element (free plus torsion).
    pub fn dimension(&self) -> usize {
        self.free_rank + self.factors.len()
    }

    /// Minimal number of generators.
    pub fn min_generators(&self) -> usize {
        self.dimension()
    }

    pub fn torsion_order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn is_trivial(&self) -> bool {
        self.dimension() == 0
    }

    /// Every element has order at most 2.
    pub fn has_exponent_at_most_two(&self) -> bool {
        self.free_rank == 0 && self.factors.iter().all(|&d| d == 2)
    }

    /// Builds an element, reducing residues into `[0, d_i)`.
    pub fn element(&self, free: Vec<i64>, torsion: Vec<i64>) -> Result<AbelianElement> {
        if free.len() != self.free_rank || torsion.len() != self.factors.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} free and {} torsion coordinates, got {} and {}",
                self.free_rank,
                self.factors.len(),
                free.len(),
                torsion.len()
            )));
        }
        let torsion = torsion.iter().zip(&self.factors).map(|(&t, &d)| t.rem_euclid(d as i64) as u64).collect();
        Ok(AbelianElement { free, torsion })
    }

    /// Element from one flat coordinate vector (free coordinates first).
    pub fn element_from_coords(&self, coords: &[i64]) -> Result<AbelianElement> {
        if coords.len() != self.dimension() {
            return Err(Error::ArityMismatch { expected: self.dimension(), found: coords.len() });
        }
        let (f, t) = coords.split_at(self.free_rank);
        self.element(f.to_vec(), t.to_vec())
    }

    /// The `i`-th coordinate generator (0-based over free then torsion coordinates).
    pub fn basis(&self, i: usize) -> AbelianElement {
        let mut coords = vec![0; self.dimension()];
        coords[i] = 1;
        self.element_from_coords(&coords).expect("basis index in range")
    }

    pub fn basis_elements(&self) -> Vec<AbelianElement> {
        (0..self.dimension()).map(|i| self.basis(i)).collect()
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement { free: vec![0; self.free_rank], torsion: vec![0; self.factors.len()] }
    }

    pub fn add(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        AbelianElement {
            free: x.free.iter().zip(&y.free).map(|(a, b)| a + b).collect(),
            torsion: x.torsion.iter().zip(&y.torsion).zip(&self.factors).map(|((a, b), d)| (a + b) % d).collect(),
        }
    }

    pub fn neg(&self, x: &AbelianElement) -> AbelianElement {
        AbelianElement {
            free: x.free.iter().map(|a| -a).collect(),
            torsion: x.torsion.iter().zip(&self.factors).map(|(a, d)| (d - a) % d).collect(),
        }
    }

    pub fn scale(&self, x: &AbelianElement, k: i64) -> AbelianElement {
        AbelianElement {
            free: x.free.iter().map(|a| a * k).collect(),
            torsion: x
                .torsion
                .iter()
                .zip(&self.factors)
                .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as u64)
                .collect(),
        }
    }

    pub fn element_order(&self, x: &AbelianElement) -> Order {
        if x.free.iter().any(|&a| a != 0) {
            return Order::Infinite;
        }
        Order::Finite(x.torsion.iter().zip(&self.factors).map(|(&a, &d)| d / a.gcd(&d)).fold(1, |acc, o| acc.lcm(&o)))
    }

    /// All elements of a finite group, residues in lexicographic order
    /// (the identity first).
    pub fn elements(&self) -> Result<Vec<AbelianElement>> {
        if !self.is_finite() {
            return Err(Error::InfiniteGroup);
        }
        let mut out = vec![self.zero()];
        for (i, &d) in self.factors.iter().enumerate().rev() {
            let prev = std::mem::take(&mut out);
            for r in 0..d {
                for x in &prev {
                    let mut y = x.clone();
                    y.torsion[i] = r;
                    out.push(y);
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// The coordinate matrix of `gens` stacked on the torsion relations.
    fn relation_matrix(&self, gens: &[AbelianElement]) -> IntMatrix {
        let n = self.dimension();
        let mut rows: Vec<Vec<i64>> =
            gens.iter().map(|g| g.free.iter().copied().chain(g.torsion.iter().map(|&t| t as i64)).collect()).collect();
        for (i, &d) in self.factors.iter().enumerate() {
            let mut row = vec![0; n];
            row[self.free_rank + i] = d as i64;
            rows.push(row);
        }
        IntMatrix::from_rows(n, &rows)
    }

    /// `A / ⟨gens⟩` in invariant-factor form.
    pub fn quotient(&self, gens: &[AbelianElement]) -> Result<AbelianGroup> {
        for g in gens {
            self.validate(g)?;
        }
        let n = self.dimension();
        let snf = smith_normal_form(&self.relation_matrix(gens));
        let diag = snf.diagonal();
        let mut orders: Vec<CyclicOrder> = (0..n)
            .map(|i| match diag.get(i) {
                Some(d) if !d.is_zero() => CyclicOrder::Finite(d.to_u64().expect("factor fits in u64")),
                _ => CyclicOrder::Infinite,
            })
            .collect();
        orders.retain(|o| *o != CyclicOrder::Finite(1));
        Ok(canonical_invariant_factors(&orders))
    }

    /// Whether `gens` generate the whole group.
    pub fn generates_full(&self, gens: &[AbelianElement]) -> Result<bool> {
        Ok(self.quotient(gens)?.is_trivial())
    }

    /// Limits of cyclic groups are exactly the groups with cyclic torsion.
    pub fn is_limit_of_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.factors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(" x ")
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl AbelianElement {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(|&a| a == 0) && self.torsion.iter().all(|&t| t == 0)
    }

    /// Coordinates as written in the DSL: `1,2;3`, `1,2`, `3`, or `0` for the
    /// empty coordinate vector.
    pub fn coords_string(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let f = join(self.free.iter().map(|a| a.to_string()).collect());
        let t = join(self.torsion.iter().map(|a| a.to_string()).collect());
        match (self.free.is_empty(), self.torsion.is_empty()) {
            (true, true) => "0".to_string(),
            (false, true) => f,
            (true, false) => t,
            (false, false) => format!("{f};{t}"),
        }
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coords_string())
    }
}

impl Group for AbelianGroup {
    type Element = AbelianElement;

    fn identity(&self) -> AbelianElement {
        self.zero()
    }

    fn multiply(&self, x: &AbelianElement, y: &AbelianElement) -> AbelianElement {
        self.add(x, y)
    }

    fn inverse(&self, x: &AbelianElement) -> AbelianElement {
        self.neg(x)
    }

    fn is_identity(&self, x: &AbelianElement) -> bool {
        x.is_zero()
    }

    fn power(&self, x: &AbelianElement, exp: i64) -> AbelianElement {
        self.scale(x, exp)
    }

    fn validate(&self, x: &AbelianElement) -> Result<()> {
        if x.free.len() != self.free_rank || x.torsion.len() != self.factors.len() {
            return Err(Error::ArityMismatch { expected: self.dimension(), found: x.free.len() + x.torsion.len() });
        }
        if x.torsion.iter().zip(&self.factors).any(|(t, d)| t >= d) {
            return Err(Error::InvalidElement(format!("residue out of range in {x}")));
        }
        Ok(())
    }
}

/// Primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// A surjection `A → Z/M`, `x ↦ Σ free_multipliers[i]·x_i + Σ torsion_multipliers[j]·t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CyclicQuotientMap {
    pub source: AbelianGroup,
    pub modulus: u64,
    /// Primes used for the free coordinates, in coordinate order.
    pub primes: Vec<u64>,
    pub free_multipliers: Vec<u64>,
    pub torsion_multipliers: Vec<u64>,
}

impl CyclicQuotientMap {
    pub fn apply(&self, x: &AbelianElement) -> u64 {
        let m = self.modulus as i128;
        let free: i128 = x.free.iter().zip(&self.free_multipliers).map(|(&a, &c)| a as i128 * c as i128).sum();
        let tors: i128 = x.torsion.iter().zip(&self.torsion_multipliers).map(|(&a, &c)| a as i128 * c as i128).sum();
        (free + tors).rem_euclid(m) as u64
    }

    /// Each torsion multiplier kills its relation: `c_j · d_j ≡ 0 (mod M)`.
    pub fn is_well_defined(&self) -> bool {
        self.torsion_multipliers
            .iter()
            .zip(self.source.invariant_factors())
            .all(|(&c, &d)| (c as u128 * d as u128).is_multiple_of(self.modulus as u128))
    }

    /// The multipliers generate `Z/M`.
    pub fn is_surjective(&self) -> bool {
        let g = self.free_multipliers.iter().chain(&self.torsion_multipliers).fold(self.modulus, |acc, &c| acc.gcd(&c));
        g == 1
    }
}

/// A map from a group with cyclic torsion onto a finite cyclic group that
/// sends no element of `survivors` to zero.
///
/// With `A = Z^r × Z/k`, distinct primes `p_1 < … < p_r` are taken
/// smallest-first among those dividing neither `k` nor any nonzero free
/// coordinate occurring in `survivors`. The map sends the `j`-th free
/// coordinate into `Z/p_j` and combines the factors into `Z/M`,
/// `M = k·p_1⋯p_r`.
pub fn cyclic_residual_quotient(a: &AbelianGroup, survivors: &[AbelianElement]) -> Result<CyclicQuotientMap> {
    if !a.is_limit_of_cyclic() {
        return Err(Error::precondition(format!("{a} does not have cyclic torsion")));
    }
    for x in survivors {
        a.validate(x)?;
        if x.is_zero() {
            return Err(Error::precondition("the survivor set contains the identity"));
        }
    }
    let k = a.torsion_order();
    let coords: BTreeSet<u64> =
        survivors.iter().flat_map(|x| x.free.iter()).filter(|&&c| c != 0).map(|c| c.unsigned_abs()).collect();
    let chosen: Vec<u64> =
        primes().filter(|p| !k.is_multiple_of(*p) && coords.iter().all(|c| c % p != 0)).take(a.free_rank()).collect();
    let modulus = chosen
        .iter()
        .try_fold(k, |acc, &p| acc.checked_mul(p))
        .ok_or_else(|| Error::Unsupported("residual quotient modulus overflows u64".to_string()))?;
    Ok(CyclicQuotientMap {
        source: a.clone(),
        modulus,
        free_multipliers: chosen.iter().map(|p| modulus / p).collect(),
        torsion_multipliers: a.invariant_factors().iter().map(|d| modulus / d).collect(),
        primes: chosen,
    })
}

impl Serialize for AbelianElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
