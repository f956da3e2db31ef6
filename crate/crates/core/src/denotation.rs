//! Terms as ideals of labelled series-parallel DAGs.
//!
//! An ideal is represented by finitely many generator DAGs; it contains
//! every series-parallel DAG reachable from a generator by one homomorphism
//! of the chosen kind. Ideals are never enumerated.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::{normalize, SpTerm};
use crate::spdag::{find_hom, find_smoothing_hom, HomKind, LabelledDag, MAX_VERTICES};
use crate::terms::{Label, Name, Polarity, Process, Tuple, Valuation, Variable};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IdealKind {
    Smoothing,
    Interaction,
}

impl IdealKind {
    pub fn hom_kind(self) -> HomKind {
        match self {
            IdealKind::Smoothing => HomKind::Smoothing,
            IdealKind::Interaction => HomKind::Interaction,
        }
    }
}

impl fmt::Display for IdealKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealKind::Smoothing => "s",
            IdealKind::Interaction => "i",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DenotationError {
    #[error("variable {0} has no value")]
    UnboundVariable(Variable),
    #[error("a quantifier needs a name but the universe is empty")]
    EmptyUniverse,
    #[error("term has {0} literals; graphs are limited to {MAX_VERTICES} vertices")]
    TooLarge(usize),
}

/// The finite set of names quantifiers range over.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Universe {
    names: BTreeSet<Name>,
}

impl Universe {
    pub fn new(names: impl IntoIterator<Item = Name>) -> Self {
        Universe {
            names: names.into_iter().collect(),
        }
    }

    /// Names of `terms` and `extras`, padded with fresh names: one per
    /// binder of the most quantified term plus one per free variable.
    /// Fresh names are interchangeable, so this many suffice to tell apart
    /// every pattern of equalities the terms can observe.
    pub fn for_terms(terms: &[&Process], extras: &[Name]) -> Self {
        let mut names: BTreeSet<Name> = extras.iter().cloned().collect();
        let mut free = BTreeSet::new();
        let mut binders = 0;
        for t in terms {
            names.extend(t.ground_names());
            free.extend(t.free_vars());
            binders = binders.max(t.binder_count());
        }
        let mut u = Universe { names };
        u.add_fresh(binders + free.len());
        u
    }

    pub fn add_fresh(&mut self, k: usize) {
        let mut i = 1;
        let mut added = 0;
        while added < k {
            let candidate = Name::new(format!("fresh{i}"));
            i += 1;
            if self.names.insert(candidate) {
                added += 1;
            }
        }
    }

    pub fn names(&self) -> &BTreeSet<Name> {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// All assignments of names to `vars`, in lexicographic order, layered
    /// over `base`.
    pub fn valuations(&self, vars: &[Variable], base: &Valuation) -> Result<Vec<Valuation>, DenotationError> {
        if !vars.is_empty() && self.names.is_empty() {
            return Err(DenotationError::EmptyUniverse);
        }
        let mut out = vec![base.clone()];
        for x in vars {
            out = out
                .iter()
                .flat_map(|v| self.names.iter().map(move |a| v.bind(x.clone(), a.clone())))
                .collect();
        }
        Ok(out)
    }
}

/// Structural translation: unit to the empty graph, literals to single
/// vertices, `;` and `|` to sequential and parallel composition.
pub fn term_to_dag(t: &SpTerm, v: &Valuation) -> Result<LabelledDag, DenotationError> {
    let n = t.literal_count();
    if n > MAX_VERTICES {
        return Err(DenotationError::TooLarge(n));
    }
    build(t, v)
}

fn build(t: &SpTerm, v: &Valuation) -> Result<LabelledDag, DenotationError> {
    Ok(match t {
        SpTerm::Unit => LabelledDag::empty(),
        SpTerm::Lit(l) => LabelledDag::singleton(l.evaluate(v).map_err(DenotationError::UnboundVariable)?),
        SpTerm::Seq(parts) => {
            let mut acc = LabelledDag::empty();
            for p in parts {
                acc = LabelledDag::seq_compose(&acc, &build(p, v)?);
            }
            acc
        }
        SpTerm::Par(parts) => {
            let mut acc = LabelledDag::empty();
            for p in parts {
                acc = acc.par_compose(&build(p, v)?);
            }
            acc
        }
    })
}

/// Generators of an ideal, deduplicated up to isomorphism and sorted by
/// canonical key.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IdealRep {
    pub kind: IdealKind,
    pub generators: Vec<LabelledDag>,
}

/// How membership is decided.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum MembershipMode {
    /// One homomorphism from some generator.
    #[default]
    SingleWitness,
    /// Split artefacts of the candidate back into coherent pairs, then look
    /// for a smoothing map from a generator. Independent of whether
    /// interaction maps compose.
    MergeChain,
}

pub fn denote(p: &Process, v: &Valuation, kind: IdealKind, u: &Universe) -> Result<IdealRep, DenotationError> {
    let nf = normalize(p);
    let mut generators: BTreeMap<Vec<u8>, LabelledDag> = BTreeMap::new();
    for (i, summand) in nf.summands.iter().enumerate() {
        for w in u.valuations(&nf.binders_of(i), v)? {
            let dag = term_to_dag(summand, &w)?;
            let key = dag.canonical_key(MAX_VERTICES).expect("within bound");
            generators.entry(key).or_insert(dag);
        }
    }
    Ok(IdealRep {
        kind,
        generators: generators.into_values().collect(),
    })
}

pub fn ideal_member(d: &LabelledDag, ideal: &IdealRep) -> bool {
    ideal_member_with(d, ideal, MembershipMode::SingleWitness)
}

pub fn ideal_member_with(d: &LabelledDag, ideal: &IdealRep, mode: MembershipMode) -> bool {
    if !d.is_n_free() {
        return false;
    }
    ideal.generators.iter().any(|g| match (mode, ideal.kind) {
        (MembershipMode::MergeChain, IdealKind::Interaction) => unmerged_variants(g, d)
            .into_iter()
            .any(|split| find_smoothing_hom(g, &split).is_some()),
        _ => find_hom(g, d, ideal.kind.hom_kind()).is_some(),
    })
}

/// Copies of `d` in which enough artefacts are split into an unordered
/// stored/consume pair with the artefact's neighbours to match the label
/// counts of `g`.
fn unmerged_variants(g: &LabelledDag, d: &LabelledDag) -> Vec<LabelledDag> {
    let from = g.polarity_counts();
    let to = d.polarity_counts();
    let mut needed: Vec<(&Tuple, usize)> = Vec::new();
    for (t, [_, _, a1]) in &to {
        let a0 = from.get(t).map_or(0, |c| c[2]);
        if a1 < &a0 {
            return Vec::new();
        }
        if a1 > &a0 {
            needed.push((t, a1 - a0));
        }
    }
    let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
    for (t, k) in needed {
        let candidates: Vec<usize> = (0..d.len())
            .filter(|&w| d.label(w).polarity == Polarity::Artefact && &d.label(w).tuple == t)
            .collect();
        let subsets = k_subsets(&candidates, k);
        choices = choices
            .iter()
            .flat_map(|c| {
                subsets.iter().map(move |s| {
                    let mut c = c.clone();
                    c.extend(s);
                    c
                })
            })
            .collect();
    }
    choices
        .into_iter()
        .filter(|c| d.len() + c.len() <= MAX_VERTICES)
        .map(|chosen| split_artefacts(d, &chosen))
        .collect()
}

fn split_artefacts(d: &LabelledDag, chosen: &[usize]) -> LabelledDag {
    let mut labels: Vec<Label> = d.labels().to_vec();
    let mut edges = d.edges();
    for &w in chosen {
        let twin = labels.len();
        let tuple = labels[w].tuple.clone();
        labels[w] = Label::stored(tuple.clone());
        labels.push(Label::consume(tuple));
        let mut extra = Vec::new();
        for &(a, b) in &edges {
            if a == w {
                extra.push((twin, b));
            }
            if b == w {
                extra.push((a, twin));
            }
        }
        edges.extend(extra);
    }
    LabelledDag::from_edges(labels, &edges).expect("splitting keeps acyclicity")
}

fn k_subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in k_subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Whether the ideal of `p` is contained in that of `q` under every
/// valuation of their free variables over `u`.
pub fn ideal_included(p: &Process, q: &Process, kind: IdealKind, u: &Universe) -> Result<bool, DenotationError> {
    ideal_included_with(p, q, kind, u, MembershipMode::SingleWitness)
}

pub fn ideal_included_with(
    p: &Process,
    q: &Process,
    kind: IdealKind,
    u: &Universe,
    mode: MembershipMode,
) -> Result<bool, DenotationError> {
    let free: Vec<Variable> = p.free_vars().union(&q.free_vars()).cloned().collect();
    for v in u.valuations(&free, &Valuation::new())? {
        let ip = denote(p, &v, kind, u)?;
        let iq = denote(q, &v, kind, u)?;
        if !ip.generators.iter().all(|g| ideal_member_with(g, &iq, mode)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn p(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    fn dag(text: &str) -> LabelledDag {
        let t = SpTerm::from_process(&p(text)).unwrap();
        term_to_dag(&t, &Valuation::new()).unwrap()
    }

    #[test]
    fn unit_denotes_the_empty_graph() {
        let i = denote(&Process::Unit, &Valuation::new(), IdealKind::Interaction, &Universe::default()).unwrap();
        assert_eq!(i.generators, vec![LabelledDag::empty()]);
    }

    #[test]
    fn sequential_literal_pair_has_one_edge() {
        let t = SpTerm::from_process(&p("*[?x] ; [?x]")).unwrap();
        let v = Valuation::new().bind(Variable::new("x"), Name::new("a"));
        let d = term_to_dag(&t, &v).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.edges(), vec![(1, 0)]);
        assert_eq!(
            term_to_dag(&t, &Valuation::new()),
            Err(DenotationError::UnboundVariable(Variable::new("x")))
        );
    }

    #[test]
    fn quantifier_generators_range_over_the_universe() {
        let u = Universe::new([Name::new("a"), Name::new("b")]);
        let i = denote(&p("ex ?x. [?x]"), &Valuation::new(), IdealKind::Interaction, &u).unwrap();
        assert_eq!(i.generators.len(), 2);
        assert_eq!(
            denote(&p("ex ?x. [?x]"), &Valuation::new(), IdealKind::Interaction, &Universe::default()),
            Err(DenotationError::EmptyUniverse)
        );
    }

    #[test]
    fn interaction_membership_versus_smoothing() {
        let pair = dag("*[d] | [d]");
        let art = dag("#[d]");
        for mode in [MembershipMode::SingleWitness, MembershipMode::MergeChain] {
            let i = IdealRep {
                kind: IdealKind::Interaction,
                generators: vec![pair.clone()],
            };
            assert!(ideal_member_with(&art, &i, mode));
            assert!(ideal_member_with(&pair, &i, mode));
            assert!(ideal_member_with(&dag("*[d] ; [d]"), &i, mode));
            let s = IdealRep {
                kind: IdealKind::Smoothing,
                generators: vec![pair.clone()],
            };
            assert!(!ideal_member_with(&art, &s, mode));
        }
    }

    #[test]
    fn inclusion_examples() {
        let u = Universe::default();
        assert!(ideal_included(&p("#[d]"), &p("*[d] | [d]"), IdealKind::Interaction, &u).unwrap());
        assert!(!ideal_included(&p("*[d] | [d]"), &p("#[d]"), IdealKind::Interaction, &u).unwrap());
        assert!(ideal_included(&p("[a] ; [b]"), &p("[a] | [b]"), IdealKind::Smoothing, &u).unwrap());
        assert!(ideal_included(&p("[a]"), &p("[a] + [b]"), IdealKind::Smoothing, &u).unwrap());
        assert!(!ideal_included(&p("[a] + [b]"), &p("[a]"), IdealKind::Smoothing, &u).unwrap());
    }

    #[test]
    fn universe_padding_avoids_collisions() {
        let q = p("ex ?x. [fresh1 ?x]");
        let u = Universe::for_terms(&[&q], &[]);
        let names: Vec<&str> = u.names().iter().map(Name::as_str).collect();
        assert_eq!(names, ["fresh1", "fresh2"]);
    }
}
