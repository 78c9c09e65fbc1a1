//! Finite groups given by Cayley tables.
//!
//! Tables are stored with the identity at index 0. Besides validation and
//! structural queries this module computes complete automorphism groups by
//! extension from a generating set, and recognizes generalized dihedral
//! structure: for a nonabelian `G`, the candidate rotation subgroup is
//! `A = ⟨{x : x² ≠ 1} ∪ Z(G)⟩`, and `G ≅ Dih(A)` iff `A` is abelian of index 2
//! and every element outside `A` inverts `A` by conjugation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::{closure, Group};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableViolation {
    #[error("table is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("declared order {declared} does not match the table size {actual}")]
    OrderMismatch { declared: usize, actual: usize },
    #[error("{count} labels given for a table of order {order}")]
    LabelCount { count: usize, order: usize },
    #[error("entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not the identity (row/column {index} is wrong)")]
    MissingIdentity { index: usize },
    #[error("{line} {index} repeats the value {value} (not a Latin square)")]
    NotLatin { line: &'static str, index: usize, value: usize },
    #[error("element {element} has no inverse")]
    MissingInverse { element: usize },
    #[error("associativity fails: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("order {order} exceeds the associativity bound {bound}")]
    TooLarge { order: usize, bound: usize },
    #[error("malformed table file: {0}")]
    Format(String),
}

/// An unvalidated table as read from a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTable {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub table: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    order: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
    table: Vec<Vec<usize>>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    n: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroupTable(order {})", self.n)
    }
}

impl FiniteGroupTable {
    /// Validates a raw table, checking associativity up to `limits.associativity_bound`.
    pub fn from_raw(raw: RawTable, limits: &Limits) -> std::result::Result<Self, TableViolation> {
        let t = Self::from_raw_unchecked_associativity(raw)?;
        if !limits.skip_associativity {
            if t.n > limits.associativity_bound {
                return Err(TableViolation::TooLarge { order: t.n, bound: limits.associativity_bound });
            }
            t.check_associativity()?;
        }
        Ok(t)
    }

    pub(crate) fn from_raw_unchecked_associativity(raw: RawTable) -> std::result::Result<Self, TableViolation> {
        let n = raw.table.len();
        if n == 0 {
            return Err(TableViolation::Empty);
        }
        for (row, r) in raw.table.iter().enumerate() {
            if r.len() != n {
                return Err(TableViolation::NotSquare { row, len: r.len(), expected: n });
            }
            if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(TableViolation::EntryOutOfRange { row, col, value });
            }
        }
        let labels = match raw.labels {
            Some(l) if l.len() != n => return Err(TableViolation::LabelCount { count: l.len(), order: n }),
            Some(l) => l,
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let t = &raw.table;
        for (i, row) in t.iter().enumerate() {
            if t[0][i] != i || row[0] != i {
                return Err(TableViolation::MissingIdentity { index: i });
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[t[i][j]], true) {
                    return Err(TableViolation::NotLatin { line: "row", index: i, value: t[i][j] });
                }
                if std::mem::replace(&mut seen_col[t[j][i]], true) {
                    return Err(TableViolation::NotLatin { line: "column", index: i, value: t[j][i] });
                }
            }
        }
        let mut inv = vec![0; n];
        for (i, slot) in inv.iter_mut().enumerate() {
            match (0..n).find(|&j| t[i][j] == 0 && t[j][i] == 0) {
                Some(j) => *slot = j,
                None => return Err(TableViolation::MissingInverse { element: i }),
            }
        }
        let mul = raw.table.into_iter().flatten().collect();
        Ok(FiniteGroupTable { n, mul, inv, labels })
    }

    fn check_associativity(&self) -> std::result::Result<(), TableViolation> {
        for a in 0..self.n {
            for b in 0..self.n {
                let ab = self.mul(a, b);
                for c in 0..self.n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(TableViolation::NotAssociative { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn to_raw(&self) -> RawTable {
        RawTable { labels: Some(self.labels.clone()), table: self.rows() }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a + 1..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn center(&self) -> Vec<usize> {
        (0..self.n).filter(|&z| (0..self.n).all(|x| self.mul(z, x) == self.mul(x, z))).collect()
    }

    /// Subgroup generated by `gens`, sorted.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        closure(self, gens, self.n).expect("finite group").into_iter().collect()
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.subgroup(gens).len() == self.n
    }

    /// Table of a subgroup (given as a sorted element list containing 0),
    /// with its original labels.
    pub fn subgroup_table(&self, elements: &[usize]) -> Result<FiniteGroupTable> {
        let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        if elements.first() != Some(&0) {
            return Err(Error::precondition("subgroup element list must start with the identity"));
        }
        let mut table = Vec::with_capacity(elements.len());
        for &x in elements {
            let mut row = Vec::with_capacity(elements.len());
            for &y in elements {
                match pos.get(&self.mul(x, y)) {
                    Some(&k) => row.push(k),
                    None => return Err(Error::precondition("element list is not closed under multiplication")),
                }
            }
            table.push(row);
        }
        let labels = elements.iter().map(|&x| self.labels[x].clone()).collect();
        Ok(FiniteGroupTable::from_raw_unchecked_associativity(RawTable { labels: Some(labels), table })?)
    }

    // ---- file formats ----

    pub fn from_json(text: &str, limits: &Limits) -> Result<Self> {
        let file: TableFile = serde_json::from_str(text)?;
        if file.order != file.table.len() {
            return Err(TableViolation::OrderMismatch { declared: file.order, actual: file.table.len() }.into());
        }
        Ok(Self::from_raw(RawTable { labels: file.labels, table: file.table }, limits)?)
    }

    pub fn to_json(&self) -> String {
        let file = TableFile { order: self.n, labels: Some(self.labels.clone()), table: self.rows() };
        let rows: Vec<String> = file
            .table
            .iter()
            .map(|r| format!("    [{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        format!(
            "{{\n  \"order\": {},\n  \"labels\": {},\n  \"table\": [\n{}\n  ]\n}}\n",
            file.order,
            serde_json::to_string(&file.labels).expect("labels serialize"),
            rows.join(",\n")
        )
    }

    /// Plain text: the order on the first line, then one row of indices per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn from_text(text: &str, limits: &Limits) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let order: usize = lines
            .next()
            .ok_or_else(|| TableViolation::Format("missing order line".into()))?
            .parse()
            .map_err(|e| TableViolation::Format(format!("bad order: {e}")))?;
        let table = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|x| x.parse::<usize>().map_err(|e| TableViolation::Format(format!("bad entry `{x}`: {e}"))))
                    .collect::<std::result::Result<Vec<_>, _>>()
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if table.len() != order {
            return Err(TableViolation::OrderMismatch { declared: order, actual: table.len() }.into());
        }
        Ok(Self::from_raw(RawTable { labels: None, table }, limits)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for r in self.mul.chunks(self.n) {
            out.push_str(&r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }

    /// Loads a `.json` table or a plain-text table.
    pub fn load(path: impl AsRef<Path>, limits: &Limits) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json(&text, limits)
        } else {
            Self::from_text(&text, limits)
        }
    }

    // ---- automorphisms ----

    /// Generating set found by scanning elements in order of decreasing
    /// element order and keeping those outside the current subgroup.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut by_order: Vec<usize> = (0..self.n).collect();
        let orders: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        by_order.sort_by_key(|&a| (std::cmp::Reverse(orders[a]), a));
        let mut gens = Vec::new();
        let mut current: BTreeSet<usize> = BTreeSet::from([0]);
        for a in by_order {
            if current.len() == self.n {
                break;
            }
            if !current.contains(&a) {
                gens.push(a);
                current = self.subgroup(&gens).into_iter().collect();
            }
        }
        gens
    }

    /// All automorphisms as permutations `φ` with `φ[x]` the image of `x`,
    /// sorted lexicographically.
    pub fn automorphism_group(&self, limits: &Limits) -> Result<Vec<Vec<usize>>> {
        if self.n > limits.automorphism_bound {
            return Err(Error::cap(self.n as u128, limits.automorphism_bound as u128));
        }
        let gens = self.greedy_generators();
        // Spanning tree: every element x ≠ 1 is parent(x)·gens[step(x)].
        let mut tree: Vec<(usize, usize, usize)> = Vec::with_capacity(self.n);
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut frontier = vec![0];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &x in &frontier {
                for (k, &g) in gens.iter().enumerate() {
                    let y = self.mul(x, g);
                    if !seen[y] {
                        seen[y] = true;
                        tree.push((y, x, k));
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let orders: Vec<usize> = (0..self.n).map(|a| self.element_order(a)).collect();
        let candidates: Vec<Vec<usize>> =
            gens.iter().map(|&g| (0..self.n).filter(|&c| orders[c] == orders[g]).collect()).collect();

        let mut out = Vec::new();
        let mut images = vec![0; gens.len()];
        self.extend_images(&gens, &tree, &candidates, &mut images, 0, &mut out);
        out.sort();
        Ok(out)
    }

    fn extend_images(
        &self,
        gens: &[usize],
        tree: &[(usize, usize, usize)],
        candidates: &[Vec<usize>],
        images: &mut Vec<usize>,
        depth: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == gens.len() {
            let mut phi = vec![usize::MAX; self.n];
            phi[0] = 0;
            for &(y, parent, k) in tree {
                phi[y] = self.mul(phi[parent], images[k]);
            }
            let mut hit = vec![false; self.n];
            for &p in &phi {
                if std::mem::replace(&mut hit[p], true) {
                    return;
                }
            }
            let is_hom = (0..self.n)
                .all(|x| gens.iter().zip(images.iter()).all(|(&g, &img)| phi[self.mul(x, g)] == self.mul(phi[x], img)));
            if is_hom {
                out.push(phi);
            }
            return;
        }
        for &c in &candidates[depth] {
            images[depth] = c;
            self.extend_images(gens, tree, candidates, images, depth + 1, out);
        }
    }

    // ---- structure recognition ----

    /// Invariant factors of an abelian subgroup given by its elements, read
    /// off from the number of solutions of `x^(p^j) = 1` for each prime `p`.
    pub fn abelian_invariants(&self, elements: &[usize]) -> AbelianGroup {
        let m = elements.len() as u64;
        let mut prime_powers = Vec::new();
        let mut rest = m;
        let mut p = 2;
        while rest > 1 {
            if !rest.is_multiple_of(p) {
                p += 1;
                continue;
            }
            let mut total = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                total += 1;
            }
            // counts[j] = log_p |{x : x^(p^j) = 1}|
            let mut counts = vec![0u32];
            let mut pj = 1u64;
            while *counts.last().unwrap() < total {
                pj *= p;
                let c = elements.iter().filter(|&&x| self.power(&x, pj as i64) == 0).count() as u64;
                counts.push(c.ilog(p));
            }
            // at_least[j] = number of cyclic p-factors of exponent >= j
            let at_least: Vec<u32> = counts.windows(2).map(|w| w[1] - w[0]).collect();
            for (j, &k) in at_least.iter().enumerate() {
                let exactly = k - at_least.get(j + 1).copied().unwrap_or(0);
                for _ in 0..exactly {
                    prime_powers.push(p.pow(j as u32 + 1));
                }
            }
        }
        AbelianGroup::new(0, &prime_powers)
    }

    pub fn recognize_generalized_dihedral(&self) -> Recognition {
        if self.is_abelian() {
            return Recognition::Abelian;
        }
        let mut gens: Vec<usize> = (0..self.n).filter(|&x| self.mul(x, x) != 0).collect();
        gens.extend(self.center());
        let rotations = self.subgroup(&gens);
        if 2 * rotations.len() != self.n {
            return Recognition::No;
        }
        let is_abelian = rotations.iter().all(|&x| rotations.iter().all(|&y| self.mul(x, y) == self.mul(y, x)));
        if !is_abelian {
            return Recognition::No;
        }
        let in_a: BTreeSet<usize> = rotations.iter().copied().collect();
        let reflections: Vec<usize> = (0..self.n).filter(|x| !in_a.contains(x)).collect();
        let inverts = reflections
            .iter()
            .all(|&s| rotations.iter().all(|&a| self.mul(self.mul(s, a), self.inv(s)) == self.inv(a)));
        if !inverts {
            return Recognition::No;
        }
        Recognition::GenDihedral { base: self.abelian_invariants(&rotations), rotations, reflections }
    }
}

/// Outcome of generalized dihedral recognition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Recognition {
    Abelian,
    GenDihedral { base: AbelianGroup, rotations: Vec<usize>, reflections: Vec<usize> },
    No,
}

impl Group for FiniteGroupTable {
    type Element = usize;

    fn identity(&self) -> usize {
        0
    }

    fn multiply(&self, x: &usize, y: &usize) -> usize {
        self.mul(*x, *y)
    }

    fn inverse(&self, x: &usize) -> usize {
        self.inv(*x)
    }

    fn is_identity(&self, x: &usize) -> bool {
        *x == 0
    }

    fn validate(&self, x: &usize) -> Result<()> {
        if *x < self.n {
            Ok(())
        } else {
            Err(Error::InvalidElement(format!("index {x} out of range for a table of order {}", self.n)))
        }
    }
}
