//! A small text language for groups, marked groups, elements, words and
//! universal sentences.
//!
//! ```text
//! group    := product ("x" product)*        -- abelian factors only
//! factor   := "Z" ("^" int)? | "Z/" int | "1" | "Dih(" group ")" | "D" evenint | "Dinf"
//! marked   := group ":" elem ("," elem)*
//! elem     := alias | "rot(" coords ")" | "ref(" coords ")" | "(" coords ")" | int
//! coords   := ints (";" ints)?
//! word     := "1" | syllable ("*"? syllable)*,  syllable := "g" int ("^" int)?
//! sentence := "@P1".."@P4" | "forall" var* ":" formula
//! formula  := disj ("->" formula)?,  disj := conj ("|" conj)*,  conj := unary ("&" unary)*
//! unary    := "!" unary | "(" formula ")" | term ("=" | "!=") term
//! term     := power ("*" power)*,  power := (var | "1" | "(" term ")") ("^" int)?
//! ```
//!
//! In dihedral groups the aliases `a, b, c, …` stand for
//! `ref(0), rot(e_1), rot(e_2), …`. Coordinates without `;` are read as
//! free coordinates then residues when both counts add up, as all free
//! coordinates (residues zero) when only the free count matches, and a
//! lone `0` is the identity.

use std::fmt;

use crate::abelian::{canonical_invariant_factors, AbelianElement, AbelianGroup, CyclicOrder};
use crate::dihedral::GenDihedralGroup;
use crate::error::{Error, Result};
use crate::group::{AnyElement, AnyGroup};
use crate::logic::{builtin_sentence, Formula, Term, UniversalSentence};
use crate::topology::MarkedGroup;
use crate::words::{Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// Group syntax; only abelian and generalized dihedral groups have one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Abelian(AbelianGroup),
    Dihedral(GenDihedralGroup),
}

impl GroupSpec {
    pub fn into_any(self) -> AnyGroup {
        match self {
            GroupSpec::Abelian(a) => AnyGroup::Abelian(a),
            GroupSpec::Dihedral(d) => AnyGroup::Dihedral(d),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Abelian(a) => write!(f, "{a}"),
            GroupSpec::Dihedral(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Rotation,
    Reflection,
    /// An abelian element in parentheses or a bare integer.
    Plain,
}

/// Element syntax, resolved against a group by [`resolve_element`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementSpec {
    Alias(char),
    Coords { kind: ElementKind, free: Vec<i64>, torsion: Option<Vec<i64>>, bare: bool },
}

impl fmt::Display for ElementSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementSpec::Alias(c) => write!(f, "{c}"),
            ElementSpec::Coords { kind, free, torsion, bare } => {
                let join = |v: &[i64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
                let mut body = join(free);
                if let Some(t) = torsion {
                    body = format!("{body};{}", join(t));
                }
                match kind {
                    ElementKind::Rotation => write!(f, "rot({body})"),
                    ElementKind::Reflection => write!(f, "ref({body})"),
                    ElementKind::Plain if *bare => write!(f, "{body}"),
                    ElementKind::Plain => write!(f, "({body})"),
                }
            }
        }
    }
}

/// Any parsed specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpecAst {
    Group(GroupSpec),
    Marked(MarkedGroup),
    Element(ElementSpec),
    Word(Word),
    Sentence(UniversalSentence),
}

impl fmt::Display for SpecAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecAst::Group(g) => write!(f, "{g}"),
            SpecAst::Marked(m) => write!(f, "{m}"),
            SpecAst::Element(e) => write!(f, "{e}"),
            SpecAst::Word(w) => f.write_str(&print_word(w)),
            SpecAst::Sentence(s) => write!(f, "{s}"),
        }
    }
}

/// Canonical word syntax, e.g. `g1*g2^-3`.
pub fn print_word(w: &Word) -> String {
    w.to_string()
}

// ---- parser ----

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PResult<T> = std::result::Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> ParseError {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(pos, |i| pos - i - 1) + 1;
        ParseError { line, col, message: message.into() }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.pos, message)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.rest().starts_with(s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.at(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str, production: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}` in {production}")))
        }
    }

    fn finish(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing input `{}`", self.rest())))
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        let first = self.rest().chars().next()?;
        if len == 0 || !first.is_ascii_alphabetic() {
            return None;
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Some(s)
    }

    fn uint(&mut self, production: &str) -> PResult<u64> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error(format!("expected a nonnegative integer in {production}")));
        }
        let start = self.pos;
        self.pos += len;
        self.src[start..self.pos].parse().map_err(|_| self.error_at(start, "integer too large"))
    }

    fn int(&mut self, production: &str) -> PResult<i64> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let neg = self.eat("-");
        let v = self.uint(production)?;
        let v = i64::try_from(v).map_err(|_| self.error_at(start, "integer too large"))?;
        Ok(if neg { -v } else { v })
    }

    fn int_list(&mut self, production: &str) -> PResult<Vec<i64>> {
        let mut out = Vec::new();
        if matches!(self.peek(), Some(c) if c == '-' || c.is_ascii_digit()) {
            out.push(self.int(production)?);
            while self.eat(",") {
                out.push(self.int(production)?);
            }
        }
        Ok(out)
    }

    // ---- groups ----

    fn group(&mut self) -> PResult<GroupSpec> {
        let start = self.pos;
        let first = self.group_factor()?;
        if !self.at_product_sign() {
            return Ok(first);
        }
        let mut orders = Vec::new();
        let mut push = |p: &Self, g: GroupSpec, at: usize| -> PResult<()> {
            match g {
                GroupSpec::Abelian(a) => {
                    orders.extend(std::iter::repeat_n(CyclicOrder::Infinite, a.free_rank()));
                    orders.extend(a.invariant_factors().iter().map(|&d| CyclicOrder::Finite(d)));
                    Ok(())
                }
                GroupSpec::Dihedral(_) => {
                    Err(p.error_at(at, "direct products are only supported between abelian factors"))
                }
            }
        };
        push(self, first, start)?;
        while self.at_product_sign() {
            self.eat("x");
            let at = self.pos;
            let g = self.group_factor()?;
            push(self, g, at)?;
        }
        Ok(GroupSpec::Abelian(canonical_invariant_factors(&orders)))
    }

    fn at_product_sign(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        r.starts_with('x') && !r[1..].starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_')
    }

    fn group_factor(&mut self) -> PResult<GroupSpec> {
        const PROD: &str =
            "group := \"Z\" (\"^\" int)? | \"Z/\" int | \"1\" | \"Dih(\" group \")\" | \"D\" evenint | \"Dinf\"";
        self.skip_ws();
        let start = self.pos;
        if self.eat("Dih(") {
            let inner = self.group()?;
            self.expect(")", PROD)?;
            return match inner {
                GroupSpec::Abelian(a) => Ok(GroupSpec::Dihedral(GenDihedralGroup::new(a))),
                GroupSpec::Dihedral(_) => Err(self.error_at(start, "Dih(...) takes an abelian group")),
            };
        }
        if self.eat("Dinf") {
            return Ok(GroupSpec::Dihedral(GenDihedralGroup::infinite_dihedral()));
        }
        if self.rest().starts_with('D') && self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            let at = self.pos;
            let n = self.uint(PROD)?;
            if n == 0 || n % 2 == 1 {
                return Err(
                    self.error_at(at, format!("D{n}: the order of a dihedral group is a positive even integer"))
                );
            }
            return Ok(GroupSpec::Dihedral(GenDihedralGroup::dihedral(n / 2)));
        }
        if self.eat("Z/") {
            let at = self.pos;
            let n = self.uint(PROD)?;
            if n == 0 {
                return Err(self.error_at(at, "Z/0 is written Z"));
            }
            return Ok(GroupSpec::Abelian(AbelianGroup::cyclic(n)));
        }
        if self.rest().starts_with('Z') && !self.rest()[1..].starts_with(|c: char| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            let r = if self.eat("^") { self.uint(PROD)? as usize } else { 1 };
            return Ok(GroupSpec::Abelian(AbelianGroup::free(r)));
        }
        if self.rest().starts_with('1') && !self.rest()[1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            return Ok(GroupSpec::Abelian(AbelianGroup::trivial()));
        }
        Err(self.error(format!("expected a group, {PROD}")))
    }

    // ---- elements ----

    fn element(&mut self) -> PResult<ElementSpec> {
        const PROD: &str = "elem := alias | \"rot(\" coords \")\" | \"ref(\" coords \")\" | \"(\" coords \")\" | int";
        self.skip_ws();
        let kind = if self.eat("rot(") {
            Some(ElementKind::Rotation)
        } else if self.eat("ref(") {
            Some(ElementKind::Reflection)
        } else if self.eat("(") {
            Some(ElementKind::Plain)
        } else {
            None
        };
        if let Some(kind) = kind {
            let free = self.int_list(PROD)?;
            let torsion = if self.eat(";") { Some(self.int_list(PROD)?) } else { None };
            self.expect(")", PROD)?;
            return Ok(ElementSpec::Coords { kind, free, torsion, bare: false });
        }
        match self.peek() {
            Some(c) if c == '-' || c.is_ascii_digit() => {
                let v = self.int(PROD)?;
                Ok(ElementSpec::Coords { kind: ElementKind::Plain, free: vec![v], torsion: None, bare: true })
            }
            Some(c) if c.is_ascii_lowercase() => {
                let at = self.pos;
                let id = self.ident().unwrap_or_default();
                if id.len() != 1 {
                    return Err(
                        self.error_at(at, format!("unknown alias `{id}`; aliases are single letters a, b, c, ..."))
                    );
                }
                Ok(ElementSpec::Alias(c))
            }
            _ => Err(self.error(format!("expected an element, {PROD}"))),
        }
    }

    fn marked(&mut self) -> PResult<(GroupSpec, Vec<(usize, ElementSpec)>)> {
        let g = self.group()?;
        self.expect(":", "marked := group \":\" elem (\",\" elem)*")?;
        let mut elems = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            elems.push((at, self.element()?));
            if !self.eat(",") {
                break;
            }
        }
        Ok((g, elems))
    }

    // ---- words ----

    fn word(&mut self, arity: Option<usize>) -> PResult<Word> {
        const PROD: &str = "word := \"1\" | syllable (\"*\"? syllable)*";
        self.skip_ws();
        if self.at("1") {
            self.eat("1");
            return Ok(Word::identity(arity.unwrap_or(1)));
        }
        let mut letters: Vec<Letter> = Vec::new();
        loop {
            self.skip_ws();
            if !self.rest().starts_with('g') {
                if letters.is_empty() {
                    return Err(self.error(format!("expected a generator g1, g2, ... in {PROD}")));
                }
                break;
            }
            self.pos += 1;
            let at = self.pos;
            let i = self.uint(PROD)? as usize;
            if i == 0 || arity.is_some_and(|m| i > m) {
                return Err(self.error_at(at, format!("generator index {i} out of range")));
            }
            let e = if self.eat("^") { self.int(PROD)? } else { 1 };
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter::new(i, e < 0));
            }
            self.eat("*");
        }
        let m = arity.unwrap_or_else(|| letters.iter().map(|l| l.index).max().unwrap_or(1));
        Word::new(m, &letters).map_err(|e| self.error(e.to_string()))
    }

    // ---- sentences ----

    fn sentence(&mut self) -> PResult<UniversalSentence> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("@") {
            let name = self.ident().unwrap_or_default();
            return builtin_sentence(name).map_err(|e| self.error_at(start, e.to_string()));
        }
        if self.ident() != Some("forall") {
            return Err(self.error_at(start, "expected `forall` or a built-in `@P1`..`@P4` in sentence"));
        }
        let mut vars: Vec<String> = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            match self.ident() {
                Some(v) if v != "forall" => {
                    if vars.iter().any(|x| x == v) {
                        return Err(self.error_at(at, format!("variable `{v}` bound twice")));
                    }
                    vars.push(v.to_string());
                }
                _ => {
                    self.pos = at;
                    break;
                }
            }
        }
        self.expect(":", "sentence := \"forall\" var* \":\" formula")?;
        let body = self.formula(&vars)?;
        UniversalSentence::new(vars, body).map_err(|e| self.error_at(start, e.to_string()))
    }

    fn formula(&mut self, vars: &[String]) -> PResult<Formula> {
        let lhs = self.disjunction(vars)?;
        if self.eat("->") {
            let rhs = self.formula(vars)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self, vars: &[String]) -> PResult<Formula> {
        let mut parts = vec![self.conjunction(vars)?];
        while self.eat("|") {
            parts.push(self.conjunction(vars)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self, vars: &[String]) -> PResult<Formula> {
        let mut parts = vec![self.unary(vars)?];
        while self.eat("&") {
            parts.push(self.unary(vars)?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self, vars: &[String]) -> PResult<Formula> {
        if self.at("!") && !self.at("!=") {
            self.eat("!");
            return Ok(Formula::negate(self.unary(vars)?));
        }
        if self.at("(") {
            // Either a parenthesized formula or a parenthesized term.
            let save = self.pos;
            self.eat("(");
            if let Ok(f) = self.formula(vars) {
                if self.eat(")") && !(self.at("^") || self.at("*") || self.at("=") || self.at("!=")) {
                    return Ok(f);
                }
            }
            self.pos = save;
        }
        self.atom(vars)
    }

    fn atom(&mut self, vars: &[String]) -> PResult<Formula> {
        let lhs = self.term(vars)?;
        if self.eat("!=") {
            Ok(Formula::Ne(lhs, self.term(vars)?))
        } else if self.eat("=") {
            Ok(Formula::Eq(lhs, self.term(vars)?))
        } else {
            Err(self.error("expected `=` or `!=` in atom := term (\"=\" | \"!=\") term"))
        }
    }

    fn term(&mut self, vars: &[String]) -> PResult<Term> {
        let mut t = self.power(vars)?;
        while self.eat("*") {
            t = t.concat(&self.power(vars)?);
        }
        Ok(t)
    }

    fn power(&mut self, vars: &[String]) -> PResult<Term> {
        const PROD: &str = "power := (var | \"1\" | \"(\" term \")\") (\"^\" int)?";
        let k = vars.len();
        self.skip_ws();
        let base = if self.eat("(") {
            let t = self.term(vars)?;
            self.expect(")", PROD)?;
            t
        } else if self.rest().starts_with('1') {
            self.pos += 1;
            Word::identity(k)
        } else {
            let at = self.pos;
            match self.ident() {
                Some(v) => match vars.iter().position(|x| x == v) {
                    Some(i) => Word::generator(k, i + 1).expect("bound variable"),
                    None => return Err(self.error_at(at, format!("unbound variable `{v}`"))),
                },
                None => return Err(self.error(format!("expected a term, {PROD}"))),
            }
        };
        if self.eat("^") {
            let e = self.int(PROD)?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}

fn parse_all<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> Result<T> {
    let mut p = Parser::new(text);
    let v = f(&mut p)?;
    p.finish()?;
    Ok(v)
}

pub fn parse_group(text: &str) -> Result<GroupSpec> {
    parse_all(text, |p| p.group())
}

pub fn parse_element_spec(text: &str) -> Result<ElementSpec> {
    parse_all(text, |p| p.element())
}

/// Parses a word; with `arity` given, generator indices are checked against it,
/// otherwise the largest index is used.
pub fn parse_word(text: &str, arity: Option<usize>) -> Result<Word> {
    parse_all(text, |p| p.word(arity))
}

pub fn parse_sentence(text: &str) -> Result<UniversalSentence> {
    parse_all(text, |p| p.sentence())
}

/// Parses `group:elem,…` and checks that the elements generate.
pub fn parse_marked(text: &str) -> Result<MarkedGroup> {
    let mut p = Parser::new(text);
    let (g, elems) = p.marked()?;
    p.finish()?;
    let group = g.into_any();
    let gens = elems
        .into_iter()
        .map(|(at, e)| {
            resolve_element(&group, &e).map_err(|err| match err {
                Error::Parse(pe) => Error::Parse(pe),
                other => Error::Parse(p.error_at(at, other.to_string())),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MarkedGroup::new(group, gens)
}

/// Parses a comma-separated element list in the given group.
pub fn parse_elements(group: &AnyGroup, text: &str) -> Result<Vec<AnyElement>> {
    let mut p = Parser::new(text);
    let mut specs = Vec::new();
    loop {
        p.skip_ws();
        specs.push((p.pos, p.element()?));
        if !p.eat(",") {
            break;
        }
    }
    p.finish()?;
    specs
        .into_iter()
        .map(|(at, e)| resolve_element(group, &e).map_err(|err| Error::Parse(p.error_at(at, err.to_string()))))
        .collect()
}

pub fn parse_element(group: &AnyGroup, text: &str) -> Result<AnyElement> {
    resolve_element(group, &parse_element_spec(text)?)
}

fn coordinates(a: &AbelianGroup, free: &[i64], torsion: &Option<Vec<i64>>) -> Result<AbelianElement> {
    let (r, t) = (a.free_rank(), a.invariant_factors().len());
    match torsion {
        Some(tor) => a.element(free.to_vec(), tor.clone()),
        None if free.len() == r + t => a.element_from_coords(free),
        None if free.len() == r => a.element(free.to_vec(), vec![0; t]),
        None if free == [0] => Ok(a.zero()),
        None => Err(Error::InvalidElement(format!(
            "{} coordinates given; {a} takes {r} free and {t} torsion coordinates",
            free.len()
        ))),
    }
}

/// Resolves element syntax against a group.
pub fn resolve_element(group: &AnyGroup, e: &ElementSpec) -> Result<AnyElement> {
    match (group, e) {
        (AnyGroup::Dihedral(d), ElementSpec::Alias('a')) => Ok(AnyElement::Dihedral(d.a())),
        (AnyGroup::Dihedral(d), ElementSpec::Alias(c)) => {
            let k = (*c as u8 - b'a') as usize;
            if k > d.base().dimension() {
                return Err(Error::InvalidElement(format!("unknown alias `{c}` for {d}")));
            }
            Ok(AnyElement::Dihedral(d.rot(d.base().basis(k - 1))))
        }
        (AnyGroup::Dihedral(d), ElementSpec::Coords { kind, free, torsion, .. }) => {
            let v = coordinates(d.base(), free, torsion)?;
            match kind {
                ElementKind::Rotation => Ok(AnyElement::Dihedral(d.rot(v))),
                ElementKind::Reflection => Ok(AnyElement::Dihedral(d.refl(v))),
                ElementKind::Plain => Err(Error::InvalidElement(format!("elements of {d} are rot(...) or ref(...)"))),
            }
        }
        (AnyGroup::Abelian(a), ElementSpec::Coords { kind: ElementKind::Plain, free, torsion, .. }) => {
            Ok(AnyElement::Abelian(coordinates(a, free, torsion)?))
        }
        (AnyGroup::Abelian(a), e) => Err(Error::InvalidElement(format!("`{e}` is not an element of {a}"))),
        (AnyGroup::Table(t), ElementSpec::Coords { kind: ElementKind::Plain, free, torsion: None, bare: true })
            if free.len() == 1 =>
        {
            let i = usize::try_from(free[0]).map_err(|_| Error::InvalidElement("negative index".into()))?;
            if i >= t.order() {
                return Err(Error::InvalidElement(format!("index {i} out of range")));
            }
            Ok(AnyElement::Table(i))
        }
        (AnyGroup::Table(_), e) => Err(Error::InvalidElement(format!("table elements are indices, found `{e}`"))),
    }
}

/// Parses any specification, dispatching on its shape.
pub fn parse_spec(text: &str) -> Result<SpecAst> {
    let t = text.trim_start();
    if t.starts_with('@') || t.starts_with("forall") {
        return parse_sentence(text).map(SpecAst::Sentence);
    }
    if t.contains(':') {
        return parse_marked(text).map(SpecAst::Marked);
    }
    if t.starts_with('g') && t[1..].starts_with(|c: char| c.is_ascii_digit()) {
        return parse_word(text, None).map(SpecAst::Word);
    }
    if t.starts_with("rot(") || t.starts_with("ref(") || t.starts_with('(') || t.starts_with('-') {
        return parse_element_spec(text).map(SpecAst::Element);
    }
    if let Ok(g) = parse_group(text) {
        return Ok(SpecAst::Group(g));
    }
    if let Ok(e) = parse_element_spec(text) {
        return Ok(SpecAst::Element(e));
    }
    parse_group(text).map(SpecAst::Group)
}
