//! Universal sentences of group theory and exhaustive model checking.
//!
//! A sentence `∀x_1…∀x_k φ` has a quantifier-free body whose terms are words
//! in the variables, stored as [`Word`]s of arity `k`. There is no
//! existential quantifier in the AST.

use std::fmt;

use serde::Serialize;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::tables::FiniteGroupTable;
use crate::words::{Letter, Word};

pub type Term = Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Ne(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn implies(hyp: Formula, concl: Formula) -> Formula {
        Formula::Implies(Box::new(hyp), Box::new(concl))
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// `t = 1`
    pub fn is_trivial(t: Term) -> Formula {
        let one = Word::identity(t.arity());
        Formula::Eq(t, one)
    }

    /// `t ≠ 1`
    pub fn is_nontrivial(t: Term) -> Formula {
        let one = Word::identity(t.arity());
        Formula::Ne(t, one)
    }

    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.collect_terms(&mut out);
        out
    }

    fn collect_terms<'a>(&'a self, out: &mut Vec<&'a Term>) {
        match self {
            Formula::Eq(a, b) | Formula::Ne(a, b) => {
                out.push(a);
                out.push(b);
            }
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_terms(out)),
            Formula::Not(f) => f.collect_terms(out),
            Formula::Implies(a, b) => {
                a.collect_terms(out);
                b.collect_terms(out);
            }
        }
    }

    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Result<Term>) -> Result<Formula> {
        Ok(match self {
            Formula::Eq(a, b) => Formula::Eq(f(a)?, f(b)?),
            Formula::Ne(a, b) => Formula::Ne(f(a)?, f(b)?),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.map_terms(f)).collect::<Result<_>>()?),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|g| g.map_terms(f)).collect::<Result<_>>()?),
            Formula::Not(g) => Formula::negate(g.map_terms(f)?),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f)?, b.map_terms(f)?),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(_) => 2,
            Formula::And(_) => 3,
            Formula::Not(_) => 4,
            Formula::Eq(..) | Formula::Ne(..) => 5,
        }
    }

    fn render(&self, vars: &[String]) -> String {
        let term = |t: &Term| t.render(|i| vars[i - 1].clone(), "*");
        let child = |f: &Formula, parens: bool| {
            if parens {
                format!("({})", f.render(vars))
            } else {
                f.render(vars)
            }
        };
        match self {
            Formula::Eq(a, b) => format!("{} = {}", term(a), term(b)),
            Formula::Ne(a, b) => format!("{} != {}", term(a), term(b)),
            Formula::And(fs) | Formula::Or(fs) => {
                let op = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                let p = self.precedence();
                fs.iter().map(|f| child(f, f.precedence() <= p)).collect::<Vec<_>>().join(op)
            }
            Formula::Not(f) => format!("!{}", child(f, f.precedence() < 4)),
            // Compound hypotheses are parenthesized, as in the usual written form.
            Formula::Implies(a, b) => {
                format!("{} -> {}", child(a, a.precedence() < 5), child(b, b.precedence() < 1))
            }
        }
    }
}

/// `∀ vars : body`, with variable `i` (1-based) named `vars[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniversalSentence {
    vars: Vec<String>,
    body: Formula,
}

impl UniversalSentence {
    pub fn new(vars: Vec<String>, body: Formula) -> Result<Self> {
        for t in body.terms() {
            if t.arity() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), found: t.arity() });
            }
        }
        Ok(UniversalSentence { vars, body })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn body(&self) -> &Formula {
        &self.body
    }
}

impl fmt::Display for UniversalSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "forall")?;
        for v in &self.vars {
            write!(f, " {v}")?;
        }
        write!(f, " : {}", self.body.render(&self.vars))
    }
}

/// Result of model checking. Counterexamples are element indices of the table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails { counterexample: Vec<usize> },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&[usize]> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails { counterexample } => Some(counterexample),
        }
    }
}

// ---- evaluation ----

struct Atom {
    lhs: Vec<Letter>,
    rhs: Vec<Letter>,
    eq: bool,
    /// Number of leading variables needed to decide the atom.
    needs: usize,
}

enum Node {
    Atom(usize),
    And(Vec<Node>),
    Or(Vec<Node>),
    Not(Box<Node>),
    Implies(Box<Node>, Box<Node>),
}

struct Compiled {
    atoms: Vec<Atom>,
    root: Node,
}

impl Compiled {
    fn new(body: &Formula) -> Self {
        let mut atoms = Vec::new();
        let root = Self::compile(body, &mut atoms);
        Compiled { atoms, root }
    }

    fn compile(f: &Formula, atoms: &mut Vec<Atom>) -> Node {
        match f {
            Formula::Eq(a, b) | Formula::Ne(a, b) => {
                let needs = a.letters().iter().chain(b.letters()).map(|l| l.index).max().unwrap_or(0);
                atoms.push(Atom {
                    lhs: a.letters().to_vec(),
                    rhs: b.letters().to_vec(),
                    eq: matches!(f, Formula::Eq(..)),
                    needs,
                });
                Node::Atom(atoms.len() - 1)
            }
            Formula::And(fs) => Node::And(fs.iter().map(|g| Self::compile(g, atoms)).collect()),
            Formula::Or(fs) => Node::Or(fs.iter().map(|g| Self::compile(g, atoms)).collect()),
            Formula::Not(g) => Node::Not(Box::new(Self::compile(g, atoms))),
            Formula::Implies(a, b) => {
                Node::Implies(Box::new(Self::compile(a, atoms)), Box::new(Self::compile(b, atoms)))
            }
        }
    }

    fn term(t: &FiniteGroupTable, letters: &[Letter], xs: &[usize]) -> usize {
        letters.iter().fold(0, |acc, l| {
            let x = xs[l.index - 1];
            t.mul(acc, if l.inverse { t.inv(x) } else { x })
        })
    }

    /// Kleene evaluation with only the first `depth` variables assigned.
    fn eval(&self, node: &Node, t: &FiniteGroupTable, xs: &[usize], depth: usize) -> Option<bool> {
        match node {
            Node::Atom(i) => {
                let a = &self.atoms[*i];
                (a.needs <= depth).then(|| (Self::term(t, &a.lhs, xs) == Self::term(t, &a.rhs, xs)) == a.eq)
            }
            Node::And(ns) => {
                let mut all = Some(true);
                for n in ns {
                    match self.eval(n, t, xs, depth) {
                        Some(false) => return Some(false),
                        None => all = None,
                        Some(true) => {}
                    }
                }
                all
            }
            Node::Or(ns) => {
                let mut any = Some(false);
                for n in ns {
                    match self.eval(n, t, xs, depth) {
                        Some(true) => return Some(true),
                        None => any = None,
                        Some(false) => {}
                    }
                }
                any
            }
            Node::Not(n) => self.eval(n, t, xs, depth).map(|b| !b),
            Node::Implies(a, b) => match self.eval(a, t, xs, depth) {
                Some(false) => Some(true),
                ha => match (ha, self.eval(b, t, xs, depth)) {
                    (_, Some(true)) => Some(true),
                    (Some(true), Some(false)) => Some(false),
                    _ => None,
                },
            },
        }
    }

    fn search(&self, t: &FiniteGroupTable, xs: &mut Vec<usize>, depth: usize) -> bool {
        match self.eval(&self.root, t, xs, depth) {
            Some(true) => false,
            Some(false) => {
                // Falsified regardless of the remaining variables: the
                // smallest extension is all identities.
                xs[depth..].fill(0);
                true
            }
            None => {
                for v in 0..t.order() {
                    xs[depth] = v;
                    if self.search(t, xs, depth + 1) {
                        return true;
                    }
                }
                false
            }
        }
    }
}

/// Evaluates the body at a full assignment.
pub fn satisfies(table: &FiniteGroupTable, s: &UniversalSentence, assignment: &[usize]) -> Result<bool> {
    if assignment.len() != s.arity() {
        return Err(Error::ArityMismatch { expected: s.arity(), found: assignment.len() });
    }
    if let Some(&x) = assignment.iter().find(|&&x| x >= table.order()) {
        return Err(Error::InvalidElement(format!("index {x} out of range")));
    }
    let c = Compiled::new(&s.body);
    Ok(c.eval(&c.root, table, assignment, s.arity()).expect("fully assigned"))
}

/// Decides `table ⊨ s` by exhaustive search in lexicographic tuple order.
///
/// Subtrees are skipped as soon as the assigned prefix decides the body,
/// so the reported counterexample is the lexicographically first one.
pub fn holds_in(table: &FiniteGroupTable, s: &UniversalSentence, limits: &Limits) -> Result<Verdict> {
    let tuples = (table.order() as u128).checked_pow(s.arity() as u32).unwrap_or(u128::MAX);
    if tuples > limits.evaluation_budget as u128 {
        return Err(Error::cap(tuples, limits.evaluation_budget as u128));
    }
    let c = Compiled::new(&s.body);
    let mut xs = vec![0; s.arity()];
    if !c.search(table, &mut xs, 0) {
        return Ok(Verdict::Holds);
    }
    if satisfies(table, s, &xs)? {
        return Err(Error::Precondition(format!("counterexample {xs:?} does not falsify the sentence")));
    }
    Ok(Verdict::Fails { counterexample: xs })
}

// ---- built-in sentences ----

fn var(k: usize, i: usize) -> Term {
    Word::generator(k, i).expect("variable index in range")
}

fn prod(ts: &[&Term]) -> Term {
    ts.iter().fold(Word::identity(ts[0].arity()), |acc, t| acc.concat(t))
}

fn commute(a: &Term, b: &Term) -> Formula {
    Formula::Eq(prod(&[a, b]), prod(&[b, a]))
}

fn dont_commute(a: &Term, b: &Term) -> Formula {
    Formula::Ne(prod(&[a, b]), prod(&[b, a]))
}

const VAR_NAMES: [&str; 5] = ["x", "y", "z", "t", "u"];

fn names(k: usize) -> Vec<String> {
    VAR_NAMES[..k].iter().map(|s| s.to_string()).collect()
}

/// The sentences `P1`–`P4` satisfied by every nonabelian dihedral group.
///
/// * `P1`: `∀x∀y (x²≠1 ∧ y²≠1) ⇒ xy=yx`
/// * `P2`: `∀x∀y∀z (x≠1 ∧ x²=1 ∧ y²≠1 ∧ xz≠zx) ⇒ x⁻¹yx=y⁻¹`
/// * `P3`: `∀x∀y∀z∀t∀u (xz≠zx ∧ yt≠ty ∧ x²=1 ∧ y²=1 ∧ (xy)²=1) ⇒ (xy)u=u(xy)`
/// * `P4`: `∀x∀y∀z∀t (x≠1 ∧ x²=1 ∧ y≠1 ∧ y²=1 ∧ z²≠1 ∧ t²≠1 ∧ xz=zx ∧ yt=ty) ⇒ x=y`
pub fn builtin_sentence(name: &str) -> Result<UniversalSentence> {
    let name = name.trim_start_matches('@');
    let (k, body) = match name {
        "P1" => {
            let (x, y) = (var(2, 1), var(2, 2));
            let hyp = Formula::And(vec![Formula::is_nontrivial(x.pow(2)), Formula::is_nontrivial(y.pow(2))]);
            (2, Formula::implies(hyp, commute(&x, &y)))
        }
        "P2" => {
            let (x, y, z) = (var(3, 1), var(3, 2), var(3, 3));
            let hyp = Formula::And(vec![
                Formula::is_nontrivial(x.clone()),
                Formula::is_trivial(x.pow(2)),
                Formula::is_nontrivial(y.pow(2)),
                dont_commute(&x, &z),
            ]);
            (3, Formula::implies(hyp, Formula::Eq(prod(&[&x.inverse(), &y, &x]), y.inverse())))
        }
        "P3" => {
            let v: Vec<Term> = (1..=5).map(|i| var(5, i)).collect();
            let (x, y, z, t, u) = (&v[0], &v[1], &v[2], &v[3], &v[4]);
            let xy = prod(&[x, y]);
            let hyp = Formula::And(vec![
                dont_commute(x, z),
                dont_commute(y, t),
                Formula::is_trivial(x.pow(2)),
                Formula::is_trivial(y.pow(2)),
                Formula::is_trivial(xy.pow(2)),
            ]);
            (5, Formula::implies(hyp, commute(&xy, u)))
        }
        "P4" => {
            let v: Vec<Term> = (1..=4).map(|i| var(4, i)).collect();
            let (x, y, z, t) = (&v[0], &v[1], &v[2], &v[3]);
            let hyp = Formula::And(vec![
                Formula::is_nontrivial(x.clone()),
                Formula::is_trivial(x.pow(2)),
                Formula::is_nontrivial(y.clone()),
                Formula::is_trivial(y.pow(2)),
                Formula::is_nontrivial(z.pow(2)),
                Formula::is_nontrivial(t.pow(2)),
                commute(x, z),
                commute(y, t),
            ]);
            (4, Formula::implies(hyp, Formula::Eq(x.clone(), y.clone())))
        }
        other => return Err(Error::UnknownSentence(other.to_string())),
    };
    UniversalSentence::new(names(k), body)
}

pub const BUILTIN_NAMES: [&str; 4] = ["P1", "P2", "P3", "P4"];

/// Replaces every variable `x_i` by `x_i²` and reduces.
pub fn squared_sentence(s: &UniversalSentence) -> UniversalSentence {
    let k = s.arity();
    let squares: Vec<Word> = (1..=k).map(|i| var(k, i).pow(2)).collect();
    let body = s.body.map_terms(&mut |t| t.substitute(&squares)).expect("arity checked at construction");
    UniversalSentence { vars: s.vars.clone(), body }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::AbelianGroup;
    use crate::dihedral::GenDihedralGroup;
    use crate::tables::RawTable;

    fn table(g: &GenDihedralGroup) -> FiniteGroupTable {
        g.materialize_table(10_000).unwrap()
    }

    fn cyclic(n: usize) -> FiniteGroupTable {
        let raw = RawTable { labels: None, table: (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect() };
        FiniteGroupTable::from_raw(raw, &Limits::default()).unwrap()
    }

    #[test]
    fn printing() {
        let p1 = builtin_sentence("P1").unwrap();
        assert_eq!(p1.to_string(), "forall x y : (x^2 != 1 & y^2 != 1) -> x*y = y*x");
        let p2 = builtin_sentence("@P2").unwrap();
        assert_eq!(p2.to_string(), "forall x y z : (x != 1 & x^2 = 1 & y^2 != 1 & x*z != z*x) -> x^-1*y*x = y^-1");
        let p3 = builtin_sentence("P3").unwrap();
        assert!(p3.to_string().contains("x*y*x*y = 1"));
        assert!(builtin_sentence("P5").is_err());
    }

    #[test]
    fn p1_in_d12() {
        let d12 = table(&GenDihedralGroup::dihedral(6));
        assert_eq!(holds_in(&d12, &builtin_sentence("P1").unwrap(), &Limits::default()).unwrap(), Verdict::Holds);
    }

    #[test]
    fn p4_fails_in_dih_z4_z4() {
        let g = GenDihedralGroup::new(AbelianGroup::new(0, &[4, 4]));
        let t = table(&g);
        let v = holds_in(&t, &builtin_sentence("P4").unwrap(), &Limits::default()).unwrap();
        let ce = v.counterexample().unwrap();
        let labels: Vec<&str> = ce.iter().map(|&i| t.label(i)).collect();
        assert_eq!(labels, ["rot(0,2)", "rot(2,0)", "rot(0,1)", "rot(0,1)"]);
        let find = |l: &str| (0..t.order()).find(|&i| t.label(i) == l).unwrap();
        let other = ["rot(2,0)", "rot(0,2)", "rot(1,0)", "rot(0,1)"].map(find);
        assert!(!satisfies(&t, &builtin_sentence("P4").unwrap(), &other).unwrap());
    }

    #[test]
    fn squared_examples() {
        let k1 = ["x"].map(String::from).to_vec();
        let x = var(1, 1);
        let trivial = UniversalSentence::new(k1, Formula::is_trivial(x)).unwrap();
        let sq = squared_sentence(&trivial);
        assert_eq!(sq.to_string(), "forall x : x^2 = 1");
        let lim = Limits::default();
        let klein = table(&GenDihedralGroup::dihedral(2));
        assert!(holds_in(&klein, &sq, &lim).unwrap().holds());
        assert!(!holds_in(&cyclic(3), &sq, &lim).unwrap().holds());

        let (a, b) = (var(2, 1), var(2, 2));
        let comm = UniversalSentence::new(names(2), commute(&a, &b)).unwrap();
        let sq = squared_sentence(&comm);
        assert_eq!(sq.to_string(), "forall x y : x^2*y^2 = y^2*x^2");
        let d16 = table(&GenDihedralGroup::dihedral(8));
        assert!(!holds_in(&d16, &comm, &lim).unwrap().holds());
        assert!(holds_in(&d16, &sq, &lim).unwrap().holds());
    }

    #[test]
    fn tautology_stays_tautology() {
        let x = var(1, 1);
        let s = UniversalSentence::new(
            names(1),
            Formula::Or(vec![Formula::is_trivial(x.clone()), Formula::is_nontrivial(x)]),
        )
        .unwrap();
        for n in 1..6 {
            assert!(holds_in(&cyclic(n), &squared_sentence(&s), &Limits::default()).unwrap().holds());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let d12 = table(&GenDihedralGroup::dihedral(6));
        let lim = Limits::default().with_evaluation_budget(1000);
        assert!(matches!(holds_in(&d12, &builtin_sentence("P3").unwrap(), &lim), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn counterexample_is_lexicographically_first() {
        // forall x y : x*y = 1 fails first at (0, 1) in Z/3.
        let (a, b) = (var(2, 1), var(2, 2));
        let s = UniversalSentence::new(names(2), Formula::is_trivial(prod(&[&a, &b]))).unwrap();
        let v = holds_in(&cyclic(3), &s, &Limits::default()).unwrap();
        assert_eq!(v.counterexample(), Some(&[0, 1][..]));
    }
}
