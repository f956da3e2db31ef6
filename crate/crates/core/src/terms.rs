//! Abstract syntax of processes over data tuples.
//!
//! A [`Process`] is built from the unit, literals (consume, stored and
//! artefact tuples), sequential and parallel composition, choice and
//! existential quantification. Terms are immutable values; all operations
//! return fresh terms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// An opaque name (identifier or IRI). Equality is text equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    /// Panics on empty text.
    pub fn new(text: impl AsRef<str>) -> Self {
        let text = text.as_ref();
        assert!(!text.is_empty(), "names must be nonempty");
        Name(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether the name can be printed bare; otherwise it needs `<...>`.
    pub fn is_identifier(&self) -> bool {
        is_identifier(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identifier() {
            f.write_str(&self.0)
        } else {
            write!(f, "<{}>", self.0)
        }
    }
}

/// A variable. Printed with a leading `?`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable(Arc<str>);

impl Variable {
    /// Panics on empty text.
    pub fn new(text: impl AsRef<str>) -> Self {
        let text = text.as_ref();
        assert!(!text.is_empty(), "variables must be nonempty");
        Variable(Arc::from(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

pub(crate) fn is_identifier_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | ':')
}

pub(crate) fn is_identifier(text: &str) -> bool {
    !text.is_empty() && text.chars().all(is_identifier_char)
}

/// One position of a tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Atom {
    Name(Name),
    Var(Variable),
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Name(n) => n.fmt(f),
            Atom::Var(x) => x.fmt(f),
        }
    }
}

/// A nonempty data tuple of names and variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Tuple(Vec<Atom>);

impl Tuple {
    /// Panics on an empty atom list.
    pub fn new(atoms: Vec<Atom>) -> Self {
        assert!(!atoms.is_empty(), "tuples must have at least one atom");
        Tuple(atoms)
    }

    /// A ground tuple from name texts.
    pub fn ground<S: AsRef<str>>(names: &[S]) -> Self {
        Tuple::new(names.iter().map(|n| Atom::Name(Name::new(n))).collect())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn is_ground(&self) -> bool {
        self.0.iter().all(|a| matches!(a, Atom::Name(_)))
    }

    pub fn substitute(&self, x: &Variable, a: &Name) -> Tuple {
        Tuple(
            self.0
                .iter()
                .map(|atom| match atom {
                    Atom::Var(y) if y == x => Atom::Name(a.clone()),
                    other => other.clone(),
                })
                .collect(),
        )
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.0.iter().filter_map(|a| match a {
            Atom::Var(x) => Some(x),
            Atom::Name(_) => None,
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.0.iter().filter_map(|a| match a {
            Atom::Name(n) => Some(n),
            Atom::Var(_) => None,
        })
    }

    /// Replaces every variable by its value; `None` if one is unbound.
    pub fn evaluate(&self, v: &Valuation) -> Result<Tuple, Variable> {
        let atoms = self
            .0
            .iter()
            .map(|atom| match atom {
                Atom::Name(n) => Ok(Atom::Name(n.clone())),
                Atom::Var(x) => v.get(x).cloned().map(Atom::Name).ok_or_else(|| x.clone()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Tuple(atoms))
    }

    /// Simultaneous variable renaming; unmapped variables are kept.
    pub(crate) fn map_vars(&self, f: &dyn Fn(&Variable) -> Option<Variable>) -> Tuple {
        Tuple(
            self.0
                .iter()
                .map(|atom| match atom {
                    Atom::Var(y) => Atom::Var(f(y).unwrap_or_else(|| y.clone())),
                    other => other.clone(),
                })
                .collect(),
        )
    }

    pub(crate) fn rename_var(&self, from: &Variable, to: &Variable) -> Tuple {
        Tuple(
            self.0
                .iter()
                .map(|atom| match atom {
                    Atom::Var(y) if y == from => Atom::Var(to.clone()),
                    other => other.clone(),
                })
                .collect(),
        )
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, atom) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            atom.fmt(f)?;
        }
        f.write_str("]")
    }
}

/// Consume, stored or artefact. The declaration order is the canonical
/// term order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    Consume,
    Stored,
    Artefact,
}

impl Polarity {
    pub fn marker(self) -> &'static str {
        match self {
            Polarity::Consume => "",
            Polarity::Stored => "*",
            Polarity::Artefact => "#",
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label {
    pub polarity: Polarity,
    pub tuple: Tuple,
}

impl Label {
    pub fn new(polarity: Polarity, tuple: Tuple) -> Self {
        Label { polarity, tuple }
    }

    pub fn consume(tuple: Tuple) -> Self {
        Label::new(Polarity::Consume, tuple)
    }

    pub fn stored(tuple: Tuple) -> Self {
        Label::new(Polarity::Stored, tuple)
    }

    pub fn artefact(tuple: Tuple) -> Self {
        Label::new(Polarity::Artefact, tuple)
    }

    pub fn is_ground(&self) -> bool {
        self.tuple.is_ground()
    }

    /// Consume and stored labels of the same ground tuple are complements.
    pub fn complements(&self, other: &Label) -> bool {
        let pair = matches!(
            (self.polarity, other.polarity),
            (Polarity::Consume, Polarity::Stored) | (Polarity::Stored, Polarity::Consume)
        );
        pair && self.tuple == other.tuple && self.is_ground()
    }

    pub fn evaluate(&self, v: &Valuation) -> Result<Label, Variable> {
        Ok(Label::new(self.polarity, self.tuple.evaluate(v)?))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.polarity.marker(), self.tuple)
    }
}

/// A process term. Binary nodes mirror the grammar; flattening happens in
/// [`crate::congruence`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Process {
    Unit,
    Literal(Label),
    Seq(Box<Process>, Box<Process>),
    Par(Box<Process>, Box<Process>),
    Choice(Box<Process>, Box<Process>),
    Exists(Variable, Box<Process>),
}

impl Process {
    pub fn lit(label: Label) -> Self {
        Process::Literal(label)
    }

    pub fn seq(first: Process, second: Process) -> Self {
        Process::Seq(Box::new(first), Box::new(second))
    }

    pub fn par(left: Process, right: Process) -> Self {
        Process::Par(Box::new(left), Box::new(right))
    }

    pub fn choice(left: Process, right: Process) -> Self {
        Process::Choice(Box::new(left), Box::new(right))
    }

    pub fn exists(x: Variable, body: Process) -> Self {
        Process::Exists(x, Box::new(body))
    }

    /// Left-nested parallel composition; `Unit` for an empty iterator.
    pub fn par_all(parts: impl IntoIterator<Item = Process>) -> Self {
        fold_left(parts, Process::par)
    }

    /// Left-nested sequential composition; `Unit` for an empty iterator.
    pub fn seq_all(parts: impl IntoIterator<Item = Process>) -> Self {
        fold_left(parts, Process::seq)
    }

    pub fn free_vars(&self) -> BTreeSet<Variable> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Variable>, out: &mut BTreeSet<Variable>) {
        match self {
            Process::Unit => {}
            Process::Literal(l) => {
                for x in l.tuple.variables() {
                    if !bound.contains(x) {
                        out.insert(x.clone());
                    }
                }
            }
            Process::Seq(a, b) | Process::Par(a, b) | Process::Choice(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Process::Exists(x, body) => {
                bound.push(x.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Replaces free occurrences of `x` by the name `a`.
    pub fn substitute(&self, x: &Variable, a: &Name) -> Process {
        match self {
            Process::Unit => Process::Unit,
            Process::Literal(l) => Process::Literal(Label::new(l.polarity, l.tuple.substitute(x, a))),
            Process::Seq(p, q) => Process::seq(p.substitute(x, a), q.substitute(x, a)),
            Process::Par(p, q) => Process::par(p.substitute(x, a), q.substitute(x, a)),
            Process::Choice(p, q) => Process::choice(p.substitute(x, a), q.substitute(x, a)),
            Process::Exists(y, _) if y == x => self.clone(),
            Process::Exists(y, body) => Process::exists(y.clone(), body.substitute(x, a)),
        }
    }

    /// Renames free occurrences of variable `from` to `to`; the caller
    /// guarantees `to` is not captured.
    pub(crate) fn rename_var(&self, from: &Variable, to: &Variable) -> Process {
        match self {
            Process::Unit => Process::Unit,
            Process::Literal(l) => Process::Literal(Label::new(l.polarity, l.tuple.rename_var(from, to))),
            Process::Seq(p, q) => Process::seq(p.rename_var(from, to), q.rename_var(from, to)),
            Process::Par(p, q) => Process::par(p.rename_var(from, to), q.rename_var(from, to)),
            Process::Choice(p, q) => Process::choice(p.rename_var(from, to), q.rename_var(from, to)),
            Process::Exists(y, _) if y == from => self.clone(),
            Process::Exists(y, body) => Process::exists(y.clone(), body.rename_var(from, to)),
        }
    }

    /// All names occurring anywhere in the term.
    pub fn ground_names(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        self.visit_labels(&mut |l| out.extend(l.tuple.names().cloned()));
        out
    }

    pub fn visit_labels(&self, f: &mut impl FnMut(&Label)) {
        match self {
            Process::Unit => {}
            Process::Literal(l) => f(l),
            Process::Seq(a, b) | Process::Par(a, b) | Process::Choice(a, b) => {
                a.visit_labels(f);
                b.visit_labels(f);
            }
            Process::Exists(_, body) => body.visit_labels(f),
        }
    }

    pub fn literal_count(&self) -> usize {
        let mut n = 0;
        self.visit_labels(&mut |_| n += 1);
        n
    }

    pub fn binder_count(&self) -> usize {
        match self {
            Process::Unit | Process::Literal(_) => 0,
            Process::Seq(a, b) | Process::Par(a, b) | Process::Choice(a, b) => {
                a.binder_count() + b.binder_count()
            }
            Process::Exists(_, body) => 1 + body.binder_count(),
        }
    }

    /// True for terms built only from unit, literals, `;` and `|`.
    pub fn is_series_parallel(&self) -> bool {
        match self {
            Process::Unit | Process::Literal(_) => true,
            Process::Seq(a, b) | Process::Par(a, b) => a.is_series_parallel() && b.is_series_parallel(),
            Process::Choice(..) | Process::Exists(..) => false,
        }
    }

    /// Only unit, artefacts, stored data, `;` and `|`.
    pub fn is_quiescent(&self) -> bool {
        match self {
            Process::Unit => true,
            Process::Literal(l) => l.polarity != Polarity::Consume,
            Process::Seq(a, b) | Process::Par(a, b) => a.is_quiescent() && b.is_quiescent(),
            Process::Choice(..) | Process::Exists(..) => false,
        }
    }

    pub fn classify(&self) -> Sort {
        if is_data(self) {
            Sort::Data
        } else if is_query(self) {
            Sort::Query
        } else if is_update(self) {
            Sort::Update
        } else if is_system(self) {
            Sort::System
        } else {
            Sort::General
        }
    }
}

fn fold_left(parts: impl IntoIterator<Item = Process>, op: fn(Process, Process) -> Process) -> Process {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => Process::Unit,
        Some(first) => iter.fold(first, op),
    }
}

/// The sub-grammars of processes, most specific first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sort {
    Data,
    Query,
    Update,
    System,
    General,
}

impl Sort {
    /// Data, queries and updates all embed into systems (a query `Q` is
    /// the update `Q ; 1`).
    pub fn is_system(self) -> bool {
        self != Sort::General
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Sort::Data => "data",
            Sort::Query => "query",
            Sort::Update => "update",
            Sort::System => "system",
            Sort::General => "general",
        };
        f.write_str(s)
    }
}

fn is_data(p: &Process) -> bool {
    match p {
        Process::Unit => true,
        Process::Literal(l) => l.polarity == Polarity::Stored,
        Process::Par(a, b) => is_data(a) && is_data(b),
        _ => false,
    }
}

fn is_query(p: &Process) -> bool {
    match p {
        Process::Unit => true,
        Process::Literal(l) => l.polarity == Polarity::Consume,
        Process::Par(a, b) | Process::Choice(a, b) => is_query(a) && is_query(b),
        Process::Exists(_, body) => is_query(body),
        _ => false,
    }
}

// A query `Q` counts as the update `Q ; 1`.
fn is_update(p: &Process) -> bool {
    if is_query(p) {
        return true;
    }
    match p {
        Process::Seq(q, d) => is_query(q) && is_data(d),
        Process::Choice(a, b) => is_update(a) && is_update(b),
        Process::Exists(_, body) => is_update(body),
        _ => false,
    }
}

fn is_system(p: &Process) -> bool {
    match p {
        Process::Unit => true,
        Process::Literal(_) => true,
        Process::Seq(a, b) | Process::Par(a, b) => {
            is_update(p) || (is_system(a) && is_system(b))
        }
        Process::Choice(..) | Process::Exists(..) => is_update(p),
    }
}

/// A total map from variables to names: finite overrides over an optional
/// default.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Valuation {
    default: Option<Name>,
    bindings: BTreeMap<Variable, Name>,
}

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn with_default(default: Name) -> Self {
        Valuation {
            default: Some(default),
            bindings: BTreeMap::new(),
        }
    }

    /// `v[x ↦ a]`.
    pub fn bind(&self, x: Variable, a: Name) -> Valuation {
        let mut next = self.clone();
        next.bindings.insert(x, a);
        next
    }

    pub fn get(&self, x: &Variable) -> Option<&Name> {
        self.bindings.get(x).or(self.default.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn p(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    fn vars(names: &[&str]) -> BTreeSet<Variable> {
        names.iter().map(Variable::new).collect()
    }

    #[test]
    fn free_vars_examples() {
        assert!(Process::Unit.free_vars().is_empty());
        assert_eq!(p("ex ?x. [?x ?y]").free_vars(), vars(&["y"]));
        assert_eq!(p("*[a ?x] | (ex ?x. [?x])").free_vars(), vars(&["x"]));
    }

    #[test]
    fn substitute_examples() {
        let x = Variable::new("x");
        let bound = p("ex ?x. [?x]");
        assert_eq!(bound.substitute(&x, &Name::new("a")), bound);
        assert_eq!(
            p("[?x y] ; *[?x]").substitute(&x, &Name::new("tate")),
            p("[tate y] ; *[tate]")
        );
        let body = p("[mill depiction ?x] ; *[baltic depiction ?x]");
        assert_eq!(
            body.substitute(&x, &Name::new("photo")),
            p("[mill depiction photo] ; *[baltic depiction photo]")
        );
    }

    #[test]
    fn classify_examples() {
        assert_eq!(p("*[sage type hall] | *[baltic type gallery]").classify(), Sort::Data);
        assert_eq!(
            p("ex ?x. ([?x type hall] | ([?x loc newcastle] + [?x loc gateshead]))").classify(),
            Sort::Query
        );
        assert_eq!(p("#[d] ; *[e]").classify(), Sort::System);
        assert_eq!(p("ex ?x. ([mill depiction ?x] ; *[baltic depiction ?x])").classify(), Sort::Update);
        assert_eq!(p("*[a] + *[b]").classify(), Sort::General);
        assert_eq!(p("1").classify(), Sort::Data);
    }

    #[test]
    fn ground_names_examples() {
        assert!(Process::Unit.ground_names().is_empty());
        let names: Vec<String> = p("*[a b] | [c]").ground_names().iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["a", "b", "c"]);
    }

    #[test]
    fn valuation_update_changes_one_variable() {
        let v = Valuation::with_default(Name::new("d"));
        let w = v.bind(Variable::new("x"), Name::new("a"));
        assert_eq!(w.get(&Variable::new("x")), Some(&Name::new("a")));
        assert_eq!(w.get(&Variable::new("y")), Some(&Name::new("d")));
        assert_eq!(v.get(&Variable::new("x")), Some(&Name::new("d")));
    }

    #[test]
    fn complement_requires_ground_equal_tuples() {
        let d = Tuple::ground(&["d"]);
        assert!(Label::stored(d.clone()).complements(&Label::consume(d.clone())));
        assert!(!Label::stored(d.clone()).complements(&Label::artefact(d.clone())));
        let open = Tuple::new(vec![Atom::Var(Variable::new("x"))]);
        assert!(!Label::stored(open.clone()).complements(&Label::consume(open)));
    }
}
