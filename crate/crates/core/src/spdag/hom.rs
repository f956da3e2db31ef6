use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{bits, LabelledDag};
use crate::terms::{Label, Polarity, Tuple};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HomKind {
    /// Edge- and label-preserving.
    Labelled,
    /// Bijective labelled homomorphism: may only add edges.
    Smoothing,
    /// Onto; may merge a coherent stored/consume pair into its artefact.
    Interaction,
}

impl fmt::Display for HomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HomKind::Labelled => "labelled",
            HomKind::Smoothing => "smoothing",
            HomKind::Interaction => "interaction",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomWitness {
    pub kind: HomKind,
    /// `map[u]` is the image of source vertex `u`.
    pub map: Vec<usize>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum HomError {
    #[error("map has {got} entries for {expected} source vertices")]
    Arity { expected: usize, got: usize },
    #[error("vertex {0} maps outside the target")]
    OutOfRange(usize),
    #[error("edge ({0}, {1}) is not preserved")]
    Edge(usize, usize),
    #[error("vertex {0} changes label")]
    Label(usize),
    #[error("target vertex {0} is not covered")]
    NotOnto(usize),
    #[error("target vertex {0} has a fiber that is not a single vertex or a coherent pair onto its artefact")]
    Fiber(usize),
    #[error("vertices {0} and {1} are merged by a smoothing map")]
    NotInjective(usize, usize),
}

impl HomWitness {
    /// Number of vertices merged away.
    pub fn merges(&self) -> usize {
        let mut images = self.map.clone();
        images.sort_unstable();
        images.dedup();
        self.map.len() - images.len()
    }

    /// Checks every condition of `self.kind` from scratch.
    pub fn verify(&self, src: &LabelledDag, dst: &LabelledDag) -> Result<(), HomError> {
        let map = &self.map;
        if map.len() != src.len() {
            return Err(HomError::Arity {
                expected: src.len(),
                got: map.len(),
            });
        }
        if let Some(u) = (0..map.len()).find(|&u| map[u] >= dst.len()) {
            return Err(HomError::OutOfRange(u));
        }
        for (u, v) in src.edges() {
            if !dst.has_edge(map[u], map[v]) {
                return Err(HomError::Edge(u, v));
            }
        }
        let mut fibers = vec![Vec::new(); dst.len()];
        for (u, &w) in map.iter().enumerate() {
            fibers[w].push(u);
        }
        match self.kind {
            HomKind::Labelled | HomKind::Smoothing => {
                if let Some(u) = (0..map.len()).find(|&u| src.label(u) != dst.label(map[u])) {
                    return Err(HomError::Label(u));
                }
                if self.kind == HomKind::Smoothing {
                    if let Some(f) = fibers.iter().find(|f| f.len() > 1) {
                        return Err(HomError::NotInjective(f[0], f[1]));
                    }
                    if let Some(w) = (0..dst.len()).find(|&w| fibers[w].is_empty()) {
                        return Err(HomError::NotOnto(w));
                    }
                }
            }
            HomKind::Interaction => {
                for (w, fiber) in fibers.iter().enumerate() {
                    match fiber.as_slice() {
                        [] => return Err(HomError::NotOnto(w)),
                        [u] => {
                            if src.label(*u) != dst.label(w) {
                                return Err(HomError::Label(*u));
                            }
                        }
                        [u, v] => {
                            let target = dst.label(w);
                            let ok = target.polarity == Polarity::Artefact
                                && src.coherent(*u, *v) == Some(&target.tuple);
                            if !ok {
                                return Err(HomError::Fiber(w));
                            }
                        }
                        _ => return Err(HomError::Fiber(w)),
                    }
                }
            }
        }
        Ok(())
    }

    /// `then` after `self`. The kind is the weakest of the two that still
    /// describes the composite; callers should [`verify`](Self::verify)
    /// when composing interaction maps.
    pub fn compose(&self, then: &HomWitness) -> HomWitness {
        let kind = match (self.kind, then.kind) {
            (HomKind::Smoothing, HomKind::Smoothing) => HomKind::Smoothing,
            (HomKind::Labelled, _) | (_, HomKind::Labelled) => HomKind::Labelled,
            _ => HomKind::Interaction,
        };
        HomWitness {
            kind,
            map: self.map.iter().map(|&w| then.map[w]).collect(),
        }
    }
}

pub fn find_labelled_hom(src: &LabelledDag, dst: &LabelledDag) -> Option<HomWitness> {
    find_hom(src, dst, HomKind::Labelled)
}

pub fn find_smoothing_hom(src: &LabelledDag, dst: &LabelledDag) -> Option<HomWitness> {
    find_hom(src, dst, HomKind::Smoothing)
}

pub fn find_interaction_hom(src: &LabelledDag, dst: &LabelledDag) -> Option<HomWitness> {
    find_hom(src, dst, HomKind::Interaction)
}

/// Backtracking search with forward checking. Returns the first witness
/// found in a fixed deterministic order.
pub fn find_hom(src: &LabelledDag, dst: &LabelledDag, kind: HomKind) -> Option<HomWitness> {
    if !counts_compatible(src, dst, kind) {
        return None;
    }
    let n = src.len();
    let m = dst.len();
    let mut domains = vec![0u64; n];
    for (u, dom) in domains.iter_mut().enumerate() {
        for w in 0..m {
            if allowed(src.label(u), dst.label(w), kind) {
                *dom |= 1 << w;
            }
        }
        if *dom == 0 {
            return None;
        }
    }
    let search = Search {
        src,
        dst,
        kind,
        dst_preds: (0..m).map(|w| dst.predecessors(w)).collect(),
    };
    let mut state = State {
        map: vec![usize::MAX; n],
        domains,
        fibers: vec![0; m],
    };
    if n == 0 {
        return (m == 0 || kind == HomKind::Labelled).then(|| HomWitness { kind, map: Vec::new() });
    }
    search.extend(&mut state).then(|| HomWitness { kind, map: state.map })
}

fn allowed(from: &Label, to: &Label, kind: HomKind) -> bool {
    from == to
        || (kind == HomKind::Interaction
            && to.polarity == Polarity::Artefact
            && from.polarity != Polarity::Artefact
            && from.tuple == to.tuple
            && from.is_ground())
}

/// Merges preserve, per tuple, stored + artefact and consume + artefact;
/// every other label count is preserved exactly.
fn counts_compatible(src: &LabelledDag, dst: &LabelledDag, kind: HomKind) -> bool {
    match kind {
        HomKind::Labelled => {
            let targets: std::collections::BTreeSet<&Label> = dst.labels().iter().collect();
            src.labels().iter().all(|l| targets.contains(l))
        }
        HomKind::Smoothing => {
            let mut a: Vec<&Label> = src.labels().iter().collect();
            let mut b: Vec<&Label> = dst.labels().iter().collect();
            a.sort();
            b.sort();
            a == b && src.edge_count() <= dst.edge_count()
        }
        HomKind::Interaction => {
            let a = src.polarity_counts();
            let b = dst.polarity_counts();
            let tuples: std::collections::BTreeSet<&Tuple> = a.keys().chain(b.keys()).copied().collect();
            tuples.into_iter().all(|t| {
                let [s0, c0, a0] = a.get(t).copied().unwrap_or_default();
                let [s1, c1, a1] = b.get(t).copied().unwrap_or_default();
                if !t.is_ground() {
                    return [s0, c0, a0] == [s1, c1, a1];
                }
                a1 >= a0 && s0 + a0 == s1 + a1 && c0 + a0 == c1 + a1
            })
        }
    }
}

struct Search<'a> {
    src: &'a LabelledDag,
    dst: &'a LabelledDag,
    kind: HomKind,
    dst_preds: Vec<u64>,
}

#[derive(Clone)]
struct State {
    map: Vec<usize>,
    domains: Vec<u64>,
    /// Source vertices mapped to each target vertex.
    fibers: Vec<u64>,
}

impl Search<'_> {
    fn onto(&self) -> bool {
        self.kind != HomKind::Labelled
    }

    /// A target vertex still needs more preimages.
    fn open(&self, state: &State, w: usize) -> bool {
        let have = state.fibers[w].count_ones();
        if have == 0 {
            return true;
        }
        self.kind == HomKind::Interaction && have == 1 && self.is_merge_fiber(state, w)
    }

    fn is_merge_fiber(&self, state: &State, w: usize) -> bool {
        let u = state.fibers[w].trailing_zeros() as usize;
        self.src.label(u) != self.dst.label(w)
    }

    fn extend(&self, state: &mut State) -> bool {
        let unassigned: Vec<usize> = (0..state.map.len()).filter(|&u| state.map[u] == usize::MAX).collect();
        if unassigned.is_empty() {
            return !self.onto() || (0..self.dst.len()).all(|w| !self.open(state, w));
        }
        if self.onto() {
            let reachable = unassigned.iter().fold(0u64, |m, &u| m | state.domains[u]);
            let open: Vec<usize> = (0..self.dst.len()).filter(|&w| self.open(state, w)).collect();
            if open.len() > unassigned.len() || open.iter().any(|&w| reachable >> w & 1 == 0) {
                return false;
            }
        }
        let u = *unassigned
            .iter()
            .min_by_key(|&&u| state.domains[u].count_ones())
            .expect("nonempty");
        for w in bits(state.domains[u]) {
            let mut next = state.clone();
            if self.assign(&mut next, u, w) && self.extend(&mut next) {
                *state = next;
                return true;
            }
        }
        false
    }

    fn assign(&self, state: &mut State, u: usize, w: usize) -> bool {
        state.map[u] = w;
        state.fibers[w] |= 1 << u;
        let label_u = self.src.label(u);
        let merging = label_u != self.dst.label(w);
        let full = match self.kind {
            HomKind::Labelled => false,
            HomKind::Smoothing => true,
            HomKind::Interaction => !merging || state.fibers[w].count_ones() == 2,
        };
        let src_succ = self.src.successors(u);
        for v in 0..state.map.len() {
            if state.map[v] != usize::MAX {
                continue;
            }
            let mut dom = state.domains[v];
            if src_succ >> v & 1 == 1 {
                dom &= self.dst.successors(w);
            }
            if self.src.has_edge(v, u) {
                dom &= self.dst_preds[w];
            }
            if full {
                dom &= !(1 << w);
            } else if merging && dom >> w & 1 == 1 && self.src.coherent(u, v).is_none() {
                dom &= !(1 << w);
            }
            if dom == 0 {
                return false;
            }
            state.domains[v] = dom;
        }
        debug_assert!(state.fibers[w].count_ones() <= 2 || self.kind == HomKind::Labelled);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Tuple;

    fn d() -> Tuple {
        Tuple::ground(&["d"])
    }

    #[test]
    fn coherent_pair_merges_into_artefact() {
        let src = LabelledDag::singleton(Label::stored(d())).par_compose(&LabelledDag::singleton(Label::consume(d())));
        let dst = LabelledDag::singleton(Label::artefact(d()));
        let w = find_interaction_hom(&src, &dst).unwrap();
        assert_eq!(w.map, vec![0, 0]);
        assert_eq!(w.verify(&src, &dst), Ok(()));
        assert_eq!(w.merges(), 1);
        assert!(find_smoothing_hom(&src, &dst).is_none());
        assert!(find_interaction_hom(&dst, &src).is_none());
    }

    #[test]
    fn ordered_pair_cannot_merge() {
        let src = LabelledDag::seq_compose(
            &LabelledDag::singleton(Label::stored(d())),
            &LabelledDag::singleton(Label::consume(d())),
        );
        let dst = LabelledDag::singleton(Label::artefact(d()));
        assert!(find_interaction_hom(&src, &dst).is_none());
    }

    #[test]
    fn smoothing_adds_edges() {
        let a = LabelledDag::singleton(Label::stored(Tuple::ground(&["a"])));
        let b = LabelledDag::singleton(Label::stored(Tuple::ground(&["b"])));
        let par = a.par_compose(&b);
        let seq = LabelledDag::seq_compose(&a, &b);
        let w = find_smoothing_hom(&par, &seq).unwrap();
        assert_eq!(w.verify(&par, &seq), Ok(()));
        assert!(find_smoothing_hom(&seq, &par).is_none());
    }

    #[test]
    fn verify_rejects_triple_fibers() {
        let src = LabelledDag::from_edges(vec![Label::stored(d()), Label::consume(d()), Label::consume(d())], &[]).unwrap();
        let dst = LabelledDag::singleton(Label::artefact(d()));
        let w = HomWitness {
            kind: HomKind::Interaction,
            map: vec![0, 0, 0],
        };
        assert_eq!(w.verify(&src, &dst), Err(HomError::Fiber(0)));
        assert!(find_interaction_hom(&src, &dst).is_none());
    }
}
