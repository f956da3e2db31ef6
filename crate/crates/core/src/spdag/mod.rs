//! Labelled transitive DAGs, their series and parallel compositions,
//! recognition of series-parallel shape, canonical keys and homomorphisms.
//!
//! An edge `u -> v` reads "u was derived from v": it points from later data
//! to the earlier data it depends on. Graphs are kept transitively closed;
//! [`LabelledDag::transitive_reduction`] gives the edges worth drawing.

mod canon;
mod hom;
mod nfree;

use std::fmt;

use thiserror::Error;

use crate::terms::{Label, Polarity, Tuple};

pub use canon::{CanonError, DEFAULT_CANON_BOUND};
pub use hom::{find_hom, find_interaction_hom, find_labelled_hom, find_smoothing_hom, HomError, HomKind, HomWitness};
pub use nfree::{NotSeriesParallel, SpTree};

/// Vertex sets are `u64` bitmasks.
pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum DagError {
    #[error("graph has {0} vertices; at most {MAX_VERTICES} are supported")]
    TooLarge(usize),
    #[error("edge ({0}, {1}) refers to a missing vertex")]
    MissingVertex(usize, usize),
    #[error("graph has a directed cycle through vertex {0}")]
    Cycle(usize),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LabelledDag {
    labels: Vec<Label>,
    /// `succ[u]` has bit `v` set iff `u -> v`.
    succ: Vec<u64>,
}

pub fn bits(mut set: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if set == 0 {
            None
        } else {
            let i = set.trailing_zeros() as usize;
            set &= set - 1;
            Some(i)
        }
    })
}

pub(crate) fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl LabelledDag {
    pub fn empty() -> Self {
        LabelledDag {
            labels: Vec::new(),
            succ: Vec::new(),
        }
    }

    pub fn singleton(label: Label) -> Self {
        LabelledDag {
            labels: vec![label],
            succ: vec![0],
        }
    }

    /// Builds a graph from arbitrary edges and closes it transitively.
    pub fn from_edges(labels: Vec<Label>, edges: &[(usize, usize)]) -> Result<Self, DagError> {
        let n = labels.len();
        if n > MAX_VERTICES {
            return Err(DagError::TooLarge(n));
        }
        let mut succ = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(DagError::MissingVertex(u, v));
            }
            succ[u] |= 1 << v;
        }
        close(&mut succ);
        if let Some(u) = (0..n).find(|&u| succ[u] >> u & 1 == 1) {
            return Err(DagError::Cycle(u));
        }
        Ok(LabelledDag { labels, succ })
    }

    /// Same as [`from_edges`](Self::from_edges) for internal callers that
    /// guarantee acyclicity.
    pub(crate) fn from_succ(labels: Vec<Label>, mut succ: Vec<u64>) -> Self {
        close(&mut succ);
        debug_assert!((0..succ.len()).all(|u| succ[u] >> u & 1 == 0));
        LabelledDag { labels, succ }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, u: usize) -> &Label {
        &self.labels[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u] >> v & 1 == 1
    }

    pub fn successors(&self, u: usize) -> u64 {
        self.succ[u]
    }

    pub fn predecessors(&self, v: usize) -> u64 {
        (0..self.len()).filter(|&u| self.has_edge(u, v)).fold(0, |m, u| m | 1 << u)
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v) || self.has_edge(v, u)
    }

    /// All edges of the closure, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|u| bits(self.succ[u]).map(move |v| (u, v))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(|s| s.count_ones() as usize).sum()
    }

    /// Edges not implied by a path of length two.
    pub fn transitive_reduction(&self) -> Vec<(usize, usize)> {
        self.edges()
            .into_iter()
            .filter(|&(u, v)| bits(self.succ[u]).all(|w| !self.has_edge(w, v)))
            .collect()
    }

    /// Vertices with no incoming edge: the latest data.
    pub fn sources(&self) -> u64 {
        let targets = self.succ.iter().fold(0, |m, s| m | s);
        mask_of(self.len()) & !targets
    }

    /// Vertices with no outgoing edge: the earliest data.
    pub fn sinks(&self) -> u64 {
        (0..self.len()).filter(|&u| self.succ[u] == 0).fold(0, |m, u| m | 1 << u)
    }

    /// The tuple `d` if `u` and `v` carry `*d` and `d` (in either order)
    /// for the same ground `d` and neither depends on the other.
    pub fn coherent(&self, u: usize, v: usize) -> Option<&Tuple> {
        let (a, b) = (&self.labels[u], &self.labels[v]);
        (u != v && a.complements(b) && !self.comparable(u, v)).then_some(&a.tuple)
    }

    pub fn par_compose(&self, other: &LabelledDag) -> LabelledDag {
        let n = self.len();
        assert!(n + other.len() <= MAX_VERTICES, "graph exceeds {MAX_VERTICES} vertices");
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        let mut succ = self.succ.clone();
        succ.extend(other.succ.iter().map(|s| s << n));
        LabelledDag { labels, succ }
    }

    /// `first ; second`: every vertex of `second` derives from every vertex
    /// of `first`. Vertices of `first` keep their indices.
    pub fn seq_compose(first: &LabelledDag, second: &LabelledDag) -> LabelledDag {
        let mut out = first.par_compose(second);
        let all_first = mask_of(first.len());
        for u in first.len()..out.len() {
            out.succ[u] |= all_first;
        }
        out
    }

    /// Same as [`seq_compose`](Self::seq_compose), built from the boundary
    /// only (earliest of `second` onto latest of `first`) and closed.
    pub fn seq_compose_boundary(first: &LabelledDag, second: &LabelledDag) -> LabelledDag {
        let par = first.par_compose(second);
        let n = first.len();
        let mut succ = par.succ;
        let latest_first = first.sources();
        for u in bits(second.sinks()) {
            succ[u + n] |= latest_first;
        }
        LabelledDag::from_succ(par.labels, succ)
    }

    /// The subgraph induced by `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> LabelledDag {
        let labels = vertices.iter().map(|&u| self.labels[u].clone()).collect();
        let succ = vertices
            .iter()
            .map(|&u| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| self.has_edge(u, v))
                    .fold(0, |m, (j, _)| m | 1 << j)
            })
            .collect();
        LabelledDag { labels, succ }
    }

    /// Renumbers vertices: old vertex `u` becomes `perm[u]`.
    pub fn permute(&self, perm: &[usize]) -> LabelledDag {
        let n = self.len();
        let mut labels = vec![None; n];
        let mut succ = vec![0u64; n];
        for u in 0..n {
            labels[perm[u]] = Some(self.labels[u].clone());
            succ[perm[u]] = bits(self.succ[u]).fold(0, |m, v| m | 1 << perm[v]);
        }
        LabelledDag {
            labels: labels.into_iter().map(|l| l.expect("permutation")).collect(),
            succ,
        }
    }

    /// Adds edges and recloses; `None` if a cycle appears.
    pub fn with_edges(&self, edges: &[(usize, usize)]) -> Option<LabelledDag> {
        let mut succ = self.succ.clone();
        for &(u, v) in edges {
            succ[u] |= 1 << v;
        }
        close(&mut succ);
        (0..succ.len())
            .all(|u| succ[u] >> u & 1 == 0)
            .then(|| LabelledDag {
                labels: self.labels.clone(),
                succ,
            })
    }

    /// Per ground tuple: (stored, consume, artefact) counts.
    pub(crate) fn polarity_counts(&self) -> std::collections::BTreeMap<&Tuple, [usize; 3]> {
        let mut out = std::collections::BTreeMap::new();
        for l in &self.labels {
            let slot = match l.polarity {
                Polarity::Stored => 0,
                Polarity::Consume => 1,
                Polarity::Artefact => 2,
            };
            out.entry(&l.tuple).or_insert([0; 3])[slot] += 1;
        }
        out
    }
}

fn close(succ: &mut [u64]) {
    let n = succ.len();
    for k in 0..n {
        let bit = 1u64 << k;
        let reach = succ[k];
        for s in succ.iter_mut() {
            if *s & bit != 0 {
                *s |= reach;
            }
        }
    }
}

impl fmt::Debug for LabelledDag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelledDag {{ ")?;
        for (u, l) in self.labels.iter().enumerate() {
            write!(f, "{u}:{l} ")?;
        }
        write!(f, "| ")?;
        for (u, v) in self.transitive_reduction() {
            write!(f, "{u}->{v} ")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Tuple;

    fn art(name: &str) -> LabelledDag {
        LabelledDag::singleton(Label::artefact(Tuple::ground(&[name])))
    }

    fn stored(name: &str) -> LabelledDag {
        LabelledDag::singleton(Label::stored(Tuple::ground(&[name])))
    }

    #[test]
    fn sequential_edges_point_back_in_time() {
        let d = LabelledDag::seq_compose(&art("baltic"), &stored("tate2"));
        assert_eq!(d.edges(), vec![(1, 0)]);
    }

    #[test]
    fn d0_has_five_direct_and_two_transitive_edges() {
        let top = art("tate").par_compose(&art("london"));
        let bottom = LabelledDag::seq_compose(&art("baltic"), &stored("tate2")).par_compose(&stored("uk"));
        let d0 = LabelledDag::seq_compose(&top, &bottom);
        assert_eq!(d0.len(), 5);
        assert_eq!(d0.edge_count(), 7);
        assert_eq!(d0.transitive_reduction().len(), 5);
        assert_eq!(d0, LabelledDag::seq_compose_boundary(&top, &bottom));
    }

    #[test]
    fn units_of_composition() {
        let a = art("a");
        assert_eq!(LabelledDag::empty().par_compose(&a), a);
        assert_eq!(LabelledDag::seq_compose(&a, &LabelledDag::empty()), a);
        assert_eq!(LabelledDag::seq_compose(&LabelledDag::empty(), &a), a);
    }

    #[test]
    fn cycles_are_rejected() {
        let labels = vec![Label::stored(Tuple::ground(&["a"])); 3];
        assert_eq!(LabelledDag::from_edges(labels, &[(0, 1), (1, 2), (2, 0)]), Err(DagError::Cycle(0)));
    }
}
