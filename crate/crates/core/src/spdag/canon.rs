use thiserror::Error;

use super::{bits, LabelledDag};

pub const DEFAULT_CANON_BOUND: usize = 16;

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum CanonError {
    #[error("graph has {size} vertices, above the canonical-form bound {bound}")]
    SizeExceeded { size: usize, bound: usize },
}

impl LabelledDag {
    /// A byte string equal for two graphs iff they are isomorphic as
    /// labelled graphs.
    ///
    /// Series-parallel graphs are keyed by their canonical decomposition
    /// term. Other graphs go through colour refinement with
    /// individualisation, keeping the least adjacency encoding.
    pub fn canonical_key(&self, bound: usize) -> Result<Vec<u8>, CanonError> {
        if self.len() > bound {
            return Err(CanonError::SizeExceeded { size: self.len(), bound });
        }
        if let Ok(term) = self.sp_decompose() {
            let mut out = b"sp:".to_vec();
            out.extend(term.to_string().into_bytes());
            return Ok(out);
        }
        let label_text: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        let mut distinct = label_text.clone();
        distinct.sort();
        distinct.dedup();
        let colours: Vec<usize> = label_text
            .iter()
            .map(|t| distinct.binary_search(t).expect("present"))
            .collect();
        let colours = self.refine(colours);
        let mut best: Option<Vec<u8>> = None;
        self.search(colours, &label_text, &mut best);
        let mut out = b"dag:".to_vec();
        out.extend(best.expect("at least one leaf"));
        Ok(out)
    }

    fn refine(&self, mut colours: Vec<usize>) -> Vec<usize> {
        let n = self.len();
        let preds: Vec<u64> = (0..n).map(|v| self.predecessors(v)).collect();
        loop {
            let classes = distinct_count(&colours);
            let signatures: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..n)
                .map(|u| {
                    let mut out: Vec<usize> = bits(self.succ[u]).map(|v| colours[v]).collect();
                    let mut inc: Vec<usize> = bits(preds[u]).map(|v| colours[v]).collect();
                    out.sort_unstable();
                    inc.sort_unstable();
                    (colours[u], out, inc)
                })
                .collect();
            let mut sorted = signatures.clone();
            sorted.sort();
            sorted.dedup();
            colours = signatures
                .iter()
                .map(|s| sorted.binary_search(s).expect("present"))
                .collect();
            if distinct_count(&colours) == classes {
                return colours;
            }
        }
    }

    fn search(&self, colours: Vec<usize>, label_text: &[String], best: &mut Option<Vec<u8>>) {
        let n = self.len();
        let mut sizes = vec![0usize; n];
        for &c in &colours {
            sizes[c] += 1;
        }
        let Some(cell) = (0..n).find(|&c| sizes[c] > 1) else {
            let encoding = self.encode(&colours, label_text);
            if best.as_ref().map_or(true, |b| encoding < *b) {
                *best = Some(encoding);
            }
            return;
        };
        for u in (0..n).filter(|&u| colours[u] == cell) {
            let split: Vec<usize> = (0..n)
                .map(|v| 2 * colours[v] + usize::from(colours[v] == cell && v != u))
                .collect();
            self.search(self.refine(split), label_text, best);
        }
    }

    /// Labels then adjacency rows, vertices ordered by their (distinct)
    /// colours.
    fn encode(&self, colours: &[usize], label_text: &[String]) -> Vec<u8> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&u| colours[u]);
        let mut out = Vec::new();
        for &u in &order {
            out.extend(label_text[u].as_bytes());
            out.push(0);
        }
        for &u in &order {
            for &v in &order {
                out.push(if self.has_edge(u, v) { b'1' } else { b'0' });
            }
        }
        out
    }
}

fn distinct_count(colours: &[usize]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::{Label, Tuple};

    fn lab(p: &str) -> Label {
        Label::stored(Tuple::ground(&[p]))
    }

    #[test]
    fn renamings_share_a_key() {
        let a = LabelledDag::from_edges(vec![lab("a"), lab("b"), lab("c"), lab("a")], &[(2, 0), (3, 0), (3, 1)]).unwrap();
        let perm = [3, 1, 0, 2];
        let b = a.permute(&perm);
        assert_eq!(a.canonical_key(16).unwrap(), b.canonical_key(16).unwrap());
        let c = LabelledDag::from_edges(vec![lab("a"), lab("b"), lab("c"), lab("a")], &[(2, 0), (3, 1), (2, 1)]).unwrap();
        assert_ne!(a.canonical_key(16).unwrap(), c.canonical_key(16).unwrap());
    }

    #[test]
    fn bound_is_enforced() {
        let d = LabelledDag::from_edges(vec![lab("a"); 3], &[]).unwrap();
        assert_eq!(d.canonical_key(2), Err(CanonError::SizeExceeded { size: 3, bound: 2 }));
    }
}
