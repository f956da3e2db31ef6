use thiserror::Error;

use super::{bits, mask_of, LabelledDag};
use crate::congruence::SpTerm;

/// Failure of series-parallel decomposition; `witness` lists vertices
/// `[v0, v1, v2, v3]` inducing the edges `v2->v0`, `v3->v0`, `v3->v1`.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("graph is not series-parallel{}", match .witness {
    Some(w) => format!(" (N on vertices {}, {}, {}, {})", w[0], w[1], w[2], w[3]),
    None => String::new(),
})]
pub struct NotSeriesParallel {
    pub witness: Option<[usize; 4]>,
}

/// Decomposition tree over vertex indices. `Seq` children run from
/// earliest to latest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SpTree {
    Empty,
    Leaf(usize),
    Seq(Vec<SpTree>),
    Par(Vec<SpTree>),
}

impl SpTree {
    pub fn to_term(&self, dag: &LabelledDag) -> SpTerm {
        match self {
            SpTree::Empty => SpTerm::Unit,
            SpTree::Leaf(u) => SpTerm::Lit(dag.label(*u).clone()),
            SpTree::Seq(parts) => SpTerm::seq(parts.iter().map(|p| p.to_term(dag)).collect()),
            SpTree::Par(parts) => SpTerm::par(parts.iter().map(|p| p.to_term(dag)).collect()),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            SpTree::Empty => {}
            SpTree::Leaf(u) => out.push(*u),
            SpTree::Seq(parts) | SpTree::Par(parts) => parts.iter().for_each(|p| p.collect(out)),
        }
    }

    /// Sorts parallel children by their canonical terms so that the leaf
    /// order depends only on the isomorphism class.
    pub fn canonicalize(&mut self, dag: &LabelledDag) {
        match self {
            SpTree::Empty | SpTree::Leaf(_) => {}
            SpTree::Seq(parts) => parts.iter_mut().for_each(|p| p.canonicalize(dag)),
            SpTree::Par(parts) => {
                parts.iter_mut().for_each(|p| p.canonicalize(dag));
                parts.sort_by_cached_key(|p| p.to_term(dag));
            }
        }
    }
}

impl LabelledDag {
    /// Searches for an induced N (labels ignored).
    pub fn find_n(&self) -> Option<[usize; 4]> {
        let n = self.len();
        let preds: Vec<u64> = (0..n).map(|v| self.predecessors(v)).collect();
        for v3 in 0..n {
            for v0 in bits(self.succ[v3]) {
                for v1 in bits(self.succ[v3] & !(1 << v0)) {
                    if self.comparable(v0, v1) {
                        continue;
                    }
                    for v2 in bits(preds[v0] & !(1 << v3)) {
                        if v2 != v1 && !self.comparable(v2, v3) && !self.comparable(v1, v2) {
                            return Some([v0, v1, v2, v3]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_n_free(&self) -> bool {
        self.find_n().is_none()
    }

    /// Splits the graph into parallel components and sequential layers.
    /// Independent of [`find_n`](Self::find_n), which only supplies the
    /// witness on failure.
    pub fn sp_tree(&self) -> Result<SpTree, NotSeriesParallel> {
        if self.is_empty() {
            return Ok(SpTree::Empty);
        }
        self.split(mask_of(self.len())).ok_or_else(|| NotSeriesParallel { witness: self.find_n() })
    }

    pub fn sp_decompose(&self) -> Result<SpTerm, NotSeriesParallel> {
        Ok(self.sp_tree()?.to_term(self))
    }

    /// Vertex order given by the canonical decomposition, or `None` when
    /// the graph is not series-parallel.
    pub fn canonical_order(&self) -> Option<Vec<usize>> {
        let mut tree = self.sp_tree().ok()?;
        tree.canonicalize(self);
        Some(tree.leaves())
    }

    fn split(&self, set: u64) -> Option<SpTree> {
        if set.count_ones() == 1 {
            return Some(SpTree::Leaf(set.trailing_zeros() as usize));
        }
        let parallel = self.components(set, true);
        if parallel.len() > 1 {
            let parts = parallel.into_iter().map(|c| self.split(c)).collect::<Option<_>>()?;
            return Some(SpTree::Par(parts));
        }
        let mut layers = self.components(set, false);
        if layers.len() < 2 {
            return None;
        }
        // Earlier layers have more vertices pointing into them.
        layers.sort_by_key(|&c| std::cmp::Reverse(self.later_than(c, set & !c).count_ones()));
        for (i, &early) in layers.iter().enumerate() {
            for &late in &layers[i + 1..] {
                if bits(late).any(|u| self.succ[u] & early != early) {
                    return None;
                }
            }
        }
        let parts = layers.into_iter().map(|c| self.split(c)).collect::<Option<_>>()?;
        Some(SpTree::Seq(parts))
    }

    /// Vertices of `set` with an edge into `target`.
    fn later_than(&self, target: u64, set: u64) -> u64 {
        bits(set).filter(|&u| self.succ[u] & target != 0).fold(0, |m, u| m | 1 << u)
    }

    /// Connected components of the comparability graph (or of its
    /// complement) restricted to `set`.
    fn components(&self, set: u64, comparability: bool) -> Vec<u64> {
        let mut remaining = set;
        let mut out = Vec::new();
        while remaining != 0 {
            let start = remaining.trailing_zeros() as usize;
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let u = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let related = self.succ[u] | self.predecessors(u);
                let next = if comparability { related } else { !related & !(1 << u) };
                let fresh = next & set & !comp;
                comp |= fresh;
                frontier |= fresh;
            }
            remaining &= !comp;
            out.push(comp);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Label, Tuple};

    fn plain(n: usize, edges: &[(usize, usize)]) -> LabelledDag {
        let labels = (0..n).map(|i| Label::stored(Tuple::ground(&[format!("v{i}")]))).collect();
        LabelledDag::from_edges(labels, edges).unwrap()
    }

    #[test]
    fn n_graph_is_detected() {
        let n = plain(4, &[(2, 0), (3, 0), (3, 1)]);
        assert_eq!(n.find_n(), Some([0, 1, 2, 3]));
        let err = n.sp_decompose().unwrap_err();
        assert_eq!(err.witness, Some([0, 1, 2, 3]));
    }

    #[test]
    fn small_graphs_are_n_free() {
        assert!(LabelledDag::empty().is_n_free());
        assert!(plain(3, &[(2, 1), (1, 0)]).is_n_free());
        assert!(plain(3, &[(2, 0), (1, 0)]).is_n_free());
    }

    #[test]
    fn decomposition_orders_layers_earliest_first() {
        let d = plain(3, &[(2, 1), (1, 0)]);
        assert_eq!(d.sp_tree().unwrap(), SpTree::Seq(vec![SpTree::Leaf(0), SpTree::Leaf(1), SpTree::Leaf(2)]));
        let d = plain(4, &[(2, 0), (2, 1), (3, 0), (3, 1)]);
        let tree = d.sp_tree().unwrap();
        assert_eq!(
            tree,
            SpTree::Seq(vec![
                SpTree::Par(vec![SpTree::Leaf(0), SpTree::Leaf(1)]),
                SpTree::Par(vec![SpTree::Leaf(2), SpTree::Leaf(3)])
            ])
        );
    }
}
