//! Words in the free group `F_m`, ball enumeration and Nielsen moves.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::group::Group;

/// A generator `e_i` (`inverse == false`) or its inverse. Indices are 1-based.
///
/// The derived order compares the index first and puts `e_i` before `e_i⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub index: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Self {
        Letter { index, inverse }
    }

    pub fn pos(index: usize) -> Self {
        Letter::new(index, false)
    }

    pub fn neg(index: usize) -> Self {
        Letter::new(index, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.index, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// All `2m` letters of `F_m` in ascending order.
    pub fn all(arity: usize) -> impl Iterator<Item = Letter> {
        (1..=arity).flat_map(|i| [Letter::pos(i), Letter::neg(i)])
    }
}

/// A freely reduced word over `e_1, …, e_m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word {
    arity: usize,
    letters: Vec<Letter>,
}

/// Free reduction of a raw letter sequence.
pub fn free_reduce(arity: usize, raw: &[Letter]) -> Result<Word> {
    let mut letters: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        if l.index == 0 || l.index > arity {
            return Err(Error::IndexOutOfRange { index: l.index, arity });
        }
        if letters.last() == Some(&l.inv()) {
            letters.pop();
        } else {
            letters.push(l);
        }
    }
    Ok(Word { arity, letters })
}

impl Word {
    pub fn new(arity: usize, raw: &[Letter]) -> Result<Self> {
        free_reduce(arity, raw)
    }

    pub fn identity(arity: usize) -> Self {
        Word { arity, letters: Vec::new() }
    }

    pub fn generator(arity: usize, index: usize) -> Result<Self> {
        Word::new(arity, &[Letter::pos(index)])
    }

    /// `e_index^exp`.
    pub fn power_of(arity: usize, index: usize, exp: i64) -> Result<Self> {
        let letter = Letter::new(index, exp < 0);
        Word::new(arity, &vec![letter; exp.unsigned_abs() as usize])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    pub fn inverse(&self) -> Word {
        Word { arity: self.arity, letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Reduced product `self · other`. The result has the larger of the two arities.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            if letters.last() == Some(&l.inv()) {
                letters.pop();
            } else {
                letters.push(l);
            }
        }
        Word { arity: self.arity.max(other.arity), letters }
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.arity);
        for _ in 0..exp.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Appends one letter, reducing against the last letter.
    pub fn push(&self, letter: Letter) -> Word {
        let mut out = self.clone();
        if out.letters.last() == Some(&letter.inv()) {
            out.letters.pop();
        } else {
            out.letters.push(letter);
        }
        out
    }

    /// Same letters viewed in `F_arity`; fails if a letter does not fit.
    pub fn with_arity(&self, arity: usize) -> Result<Word> {
        Word::new(arity, &self.letters)
    }

    /// Replaces `e_i` by `images[i-1]` (an endomorphism of the free group).
    pub fn substitute(&self, images: &[Word]) -> Result<Word> {
        if images.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: images.len() });
        }
        let arity = images.first().map_or(self.arity, Word::arity);
        let mut out = Word::identity(arity);
        for l in &self.letters {
            let img = &images[l.index - 1];
            out = out.concat(&if l.inverse { img.inverse() } else { img.clone() });
        }
        Ok(out)
    }

    /// Maximal runs `(index, exponent)` of the same generator.
    pub fn syllables(&self) -> Vec<(usize, i64)> {
        let mut out: Vec<(usize, i64)> = Vec::new();
        for l in &self.letters {
            match out.last_mut() {
                Some((i, e)) if *i == l.index && (*e > 0) == !l.inverse => *e += l.sign(),
                _ => out.push((l.index, l.sign())),
            }
        }
        out
    }

    /// Renders the word with the given generator names, e.g. `g1^2*g2^-1`.
    pub fn render(&self, names: impl Fn(usize) -> String, sep: &str) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.syllables()
            .into_iter()
            .map(|(i, e)| if e == 1 { names(i) } else { format!("{}^{}", names(i), e) })
            .collect::<Vec<_>>()
            .join(sep)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.arity.cmp(&other.arity))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|i| format!("g{i}"), "*"))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The free group `F_m` as a [`Group`] on reduced words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FreeGroup {
    pub arity: usize,
}

impl Group for FreeGroup {
    type Element = Word;

    fn identity(&self) -> Word {
        Word::identity(self.arity)
    }

    fn multiply(&self, x: &Word, y: &Word) -> Word {
        x.concat(y)
    }

    fn inverse(&self, x: &Word) -> Word {
        x.inverse()
    }

    fn validate(&self, x: &Word) -> Result<()> {
        match x.letters.iter().find(|l| l.index > self.arity) {
            Some(l) => Err(Error::IndexOutOfRange { index: l.index, arity: self.arity }),
            None => Ok(()),
        }
    }
}

/// Number of reduced words of length at most `radius` in `F_m`.
pub fn ball_size(arity: usize, radius: usize) -> u128 {
    if arity == 0 {
        return 1;
    }
    let mut total: u128 = 1;
    let mut layer: u128 = 2 * arity as u128;
    for _ in 0..radius {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(2 * arity as u128 - 1);
    }
    total
}

/// All reduced words of length `<= radius`, sorted by (length, letters).
///
/// Refuses when the ball holds more than `limits.ball_cap` words.
pub fn enumerate_ball(arity: usize, radius: usize, limits: &Limits) -> Result<Vec<Word>> {
    if arity == 0 {
        return Err(Error::precondition("arity must be at least 1"));
    }
    let size = ball_size(arity, radius);
    if size > limits.ball_cap as u128 {
        return Err(Error::cap(size, limits.ball_cap as u128));
    }
    let mut out = Vec::with_capacity(size as usize);
    out.push(Word::identity(arity));
    let mut start = 0;
    for _ in 0..radius {
        let end = out.len();
        // Extending a sorted layer by letters in ascending order keeps the next layer sorted.
        for k in start..end {
            let w = out[k].clone();
            for l in Letter::all(arity) {
                if w.last() != Some(l.inv()) {
                    let mut letters = w.letters.clone();
                    letters.push(l);
                    out.push(Word { arity, letters });
                }
            }
        }
        start = end;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Elementary Nielsen transformation on an `m`-tuple (1-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NielsenMove {
    /// Exchange entries `i` and `j`.
    Swap(usize, usize),
    /// Replace entry `i` by its inverse.
    Invert(usize),
    /// `S_target ← S_target · S_by^sign` (right) or `S_by^sign · S_target` (left).
    Multiply { target: usize, by: usize, side: Side, inverse: bool },
}

impl NielsenMove {
    pub fn multiply(target: usize, by: usize, side: Side, sign: i64) -> Self {
        NielsenMove::Multiply { target, by, side, inverse: sign < 0 }
    }

    /// The move undoing `self`.
    pub fn inverse(self) -> Self {
        match self {
            NielsenMove::Multiply { target, by, side, inverse } => {
                NielsenMove::Multiply { target, by, side, inverse: !inverse }
            }
            other => other,
        }
    }

    pub fn validate(&self, len: usize) -> Result<()> {
        let in_range = |i: usize| (1..=len).contains(&i);
        let ok = match *self {
            NielsenMove::Swap(i, j) => in_range(i) && in_range(j) && i != j,
            NielsenMove::Invert(i) => in_range(i),
            NielsenMove::Multiply { target, by, .. } => in_range(target) && in_range(by) && target != by,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidMove(format!("{self:?} on a tuple of length {len}")))
        }
    }
}

/// Applies a Nielsen move to a tuple of elements of `group`.
pub fn nielsen_apply<G: Group>(group: &G, tuple: &[G::Element], mv: NielsenMove) -> Result<Vec<G::Element>> {
    mv.validate(tuple.len())?;
    let mut out = tuple.to_vec();
    match mv {
        NielsenMove::Swap(i, j) => out.swap(i - 1, j - 1),
        NielsenMove::Invert(i) => out[i - 1] = group.inverse(&tuple[i - 1]),
        NielsenMove::Multiply { target, by, side, inverse } => {
            let factor = if inverse { group.inverse(&tuple[by - 1]) } else { tuple[by - 1].clone() };
            let current = &tuple[target - 1];
            out[target - 1] = match side {
                Side::Right => group.multiply(current, &factor),
                Side::Left => group.multiply(&factor, current),
            };
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(arity: usize, raw: &[(usize, i64)]) -> Word {
        let letters: Vec<Letter> = raw.iter().map(|&(i, s)| Letter::new(i, s < 0)).collect();
        Word::new(arity, &letters).unwrap()
    }

    #[test]
    fn reduction_examples() {
        assert!(w(1, &[(1, 1), (1, -1)]).is_empty());
        assert_eq!(w(2, &[(1, 1), (2, 1), (2, -1), (1, 1)]), w(2, &[(1, 1), (1, 1)]));
        assert_eq!(w(2, &[(2, 1), (1, -1), (1, 1), (2, 1), (2, 1)]), w(2, &[(2, 1), (2, 1), (2, 1)]));
    }

    #[test]
    fn reduction_rejects_bad_index() {
        assert!(matches!(Word::new(2, &[Letter::pos(3)]), Err(Error::IndexOutOfRange { index: 3, arity: 2 })));
        assert!(Word::new(2, &[Letter::pos(0)]).is_err());
    }

    #[test]
    fn ball_examples() {
        let lim = Limits::default();
        let b = enumerate_ball(1, 2, &lim).unwrap();
        let shown: Vec<String> = b.iter().map(|w| w.to_string()).collect();
        assert_eq!(shown, ["1", "g1", "g1^-1", "g1^2", "g1^-2"]);
        assert_eq!(enumerate_ball(2, 1, &lim).unwrap().len(), 5);
        assert_eq!(enumerate_ball(2, 3, &lim).unwrap().len(), 53);
        assert_eq!(ball_size(2, 3), 53);
    }

    #[test]
    fn ball_is_sorted_and_capped() {
        let lim = Limits::default();
        let b = enumerate_ball(3, 3, &lim).unwrap();
        assert!(b.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(b.len() as u128, ball_size(3, 3));
        let tight = Limits::default().with_ball_cap(10);
        assert!(matches!(enumerate_ball(2, 2, &tight), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn syllable_rendering() {
        let x = w(2, &[(1, 1), (2, 1), (2, 1), (2, 1), (1, -1)]);
        assert_eq!(x.to_string(), "g1*g2^3*g1^-1");
        assert_eq!(Word::identity(2).to_string(), "1");
    }

    #[test]
    fn nielsen_on_words() {
        let f = FreeGroup { arity: 2 };
        let s = vec![Word::generator(2, 1).unwrap(), Word::generator(2, 2).unwrap()];
        let swapped = nielsen_apply(&f, &s, NielsenMove::Swap(1, 2)).unwrap();
        assert_eq!(swapped, vec![s[1].clone(), s[0].clone()]);
        let twice = nielsen_apply(&f, &nielsen_apply(&f, &s, NielsenMove::Invert(1)).unwrap(), NielsenMove::Invert(1));
        assert_eq!(twice.unwrap(), s);
        let mv = NielsenMove::multiply(1, 2, Side::Left, -1);
        let moved = nielsen_apply(&f, &s, mv).unwrap();
        assert_eq!(moved[0].to_string(), "g2^-1*g1");
        assert_eq!(nielsen_apply(&f, &moved, mv.inverse()).unwrap(), s);
        assert!(nielsen_apply(&f, &s, NielsenMove::Swap(1, 1)).is_err());
        assert!(nielsen_apply(&f, &s, NielsenMove::Invert(3)).is_err());
    }
}
