//! Flattened working form of a process with stable literal identities.

use std::cmp::Ordering;

use crate::spdag::LabelledDag;
use crate::terms::{Label, Name, Process, Variable};

#[derive(Clone, Debug)]
pub(crate) enum Node {
    Unit,
    Lit(u32, Label),
    Seq(Vec<Node>),
    Par(Vec<Node>),
    Choice(Vec<Node>),
    Exists(Variable, Box<Node>),
}

pub(crate) fn cmp_shape(a: &Node, b: &Node) -> Ordering {
    fn rank(n: &Node) -> u8 {
        match n {
            Node::Unit => 0,
            Node::Lit(..) => 1,
            Node::Seq(_) => 2,
            Node::Par(_) => 3,
            Node::Choice(_) => 4,
            Node::Exists(..) => 5,
        }
    }
    fn all(a: &[Node], b: &[Node]) -> Ordering {
        for (x, y) in a.iter().zip(b) {
            let o = cmp_shape(x, y);
            if o != Ordering::Equal {
                return o;
            }
        }
        a.len().cmp(&b.len())
    }
    match (a, b) {
        (Node::Lit(_, l), Node::Lit(_, m)) => l.cmp(m),
        (Node::Seq(x), Node::Seq(y)) | (Node::Par(x), Node::Par(y)) | (Node::Choice(x), Node::Choice(y)) => all(x, y),
        (Node::Exists(x, p), Node::Exists(y, q)) => x.cmp(y).then_with(|| cmp_shape(p, q)),
        _ => rank(a).cmp(&rank(b)),
    }
}

impl Node {
    pub(crate) fn seq(parts: Vec<Node>) -> Node {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Node::Unit => {}
                Node::Seq(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Node::Unit,
            1 => out.pop().expect("one"),
            _ => Node::Seq(out),
        }
    }

    pub(crate) fn par(parts: Vec<Node>) -> Node {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Node::Unit => {}
                Node::Par(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort_by(cmp_shape);
        match out.len() {
            0 => Node::Unit,
            1 => out.pop().expect("one"),
            _ => Node::Par(out),
        }
    }

    pub(crate) fn choice(parts: Vec<Node>) -> Node {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Node::Choice(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort_by(cmp_shape);
        out.dedup_by(|a, b| cmp_shape(a, b) == Ordering::Equal);
        match out.len() {
            1 => out.pop().expect("one"),
            _ => Node::Choice(out),
        }
    }

    pub(crate) fn from_process(p: &Process) -> Node {
        let mut next = 0;
        Self::build(p, &mut next)
    }

    fn build(p: &Process, next: &mut u32) -> Node {
        match p {
            Process::Unit => Node::Unit,
            Process::Literal(l) => {
                *next += 1;
                Node::Lit(*next - 1, l.clone())
            }
            Process::Seq(a, b) => Node::seq(vec![Self::build(a, next), Self::build(b, next)]),
            Process::Par(a, b) => Node::par(vec![Self::build(a, next), Self::build(b, next)]),
            Process::Choice(a, b) => Node::choice(vec![Self::build(a, next), Self::build(b, next)]),
            Process::Exists(x, body) => Node::Exists(x.clone(), Box::new(Self::build(body, next))),
        }
    }

    pub(crate) fn to_process(&self) -> Process {
        match self {
            Node::Unit => Process::Unit,
            Node::Lit(_, l) => Process::Literal(l.clone()),
            Node::Seq(parts) => Process::seq_all(parts.iter().map(Node::to_process)),
            Node::Par(parts) => Process::par_all(parts.iter().map(Node::to_process)),
            Node::Choice(parts) => {
                let mut it = parts.iter().map(Node::to_process);
                let first = it.next().expect("choice has branches");
                it.fold(first, Process::choice)
            }
            Node::Exists(x, body) => Process::exists(x.clone(), body.to_process()),
        }
    }

    pub(crate) fn substitute(&self, x: &Variable, a: &Name) -> Node {
        match self {
            Node::Unit => Node::Unit,
            Node::Lit(id, l) => Node::Lit(*id, Label::new(l.polarity, l.tuple.substitute(x, a))),
            Node::Seq(parts) => Node::seq(parts.iter().map(|p| p.substitute(x, a)).collect()),
            Node::Par(parts) => Node::par(parts.iter().map(|p| p.substitute(x, a)).collect()),
            Node::Choice(parts) => Node::choice(parts.iter().map(|p| p.substitute(x, a)).collect()),
            Node::Exists(y, _) if y == x => self.clone(),
            Node::Exists(y, body) => Node::Exists(y.clone(), Box::new(body.substitute(x, a))),
        }
    }

    pub(crate) fn children(&self) -> &[Node] {
        match self {
            Node::Seq(parts) | Node::Par(parts) | Node::Choice(parts) => parts,
            Node::Exists(_, body) => std::slice::from_ref(body),
            Node::Unit | Node::Lit(..) => &[],
        }
    }

    pub(crate) fn at(&self, path: &[usize]) -> &Node {
        path.iter().fold(self, |n, &i| &n.children()[i])
    }

    /// Replaces the subterm at `path` and restores the flattened shape on
    /// the way up.
    pub(crate) fn replace_at(&self, path: &[usize], replacement: Node) -> Node {
        let Some((&i, rest)) = path.split_first() else {
            return replacement;
        };
        match self {
            Node::Seq(parts) | Node::Par(parts) | Node::Choice(parts) => {
                let mut parts = parts.clone();
                parts[i] = parts[i].replace_at(rest, replacement);
                match self {
                    Node::Seq(_) => Node::seq(parts),
                    Node::Par(_) => Node::par(parts),
                    _ => Node::choice(parts),
                }
            }
            Node::Exists(x, body) => Node::Exists(x.clone(), Box::new(body.replace_at(rest, replacement))),
            Node::Unit | Node::Lit(..) => unreachable!("path descends into a leaf"),
        }
    }

    /// Paths of choices and quantifiers not nested in another one.
    pub(crate) fn outer_binders(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.collect_outer(&mut Vec::new(), &mut out);
        out
    }

    fn collect_outer(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match self {
            Node::Unit | Node::Lit(..) => {}
            Node::Seq(parts) | Node::Par(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    path.push(i);
                    p.collect_outer(path, out);
                    path.pop();
                }
            }
            Node::Choice(_) | Node::Exists(..) => out.push(path.clone()),
        }
    }

    /// The order among literals outside any choice or quantifier, as a DAG
    /// whose vertex `i` is the literal with id `ids[i]`.
    pub(crate) fn skeleton(&self) -> (LabelledDag, Vec<u32>) {
        let mut labels = Vec::new();
        let mut ids = Vec::new();
        let mut succ = Vec::new();
        self.collect_skeleton(&mut labels, &mut ids, &mut succ);
        (LabelledDag::from_succ(labels, succ), ids)
    }

    /// Returns the vertex set of this subterm.
    fn collect_skeleton(&self, labels: &mut Vec<Label>, ids: &mut Vec<u32>, succ: &mut Vec<u64>) -> u64 {
        match self {
            Node::Unit | Node::Choice(_) | Node::Exists(..) => 0,
            Node::Lit(id, l) => {
                assert!(labels.len() < crate::spdag::MAX_VERTICES, "state has too many literals");
                labels.push(l.clone());
                ids.push(*id);
                succ.push(0);
                1 << (labels.len() - 1)
            }
            Node::Par(parts) => parts.iter().fold(0, |m, p| m | p.collect_skeleton(labels, ids, succ)),
            Node::Seq(parts) => {
                let mut earlier = 0u64;
                for p in parts {
                    let here = p.collect_skeleton(labels, ids, succ);
                    for u in crate::spdag::bits(here) {
                        succ[u] |= earlier;
                    }
                    earlier |= here;
                }
                earlier
            }
        }
    }

    /// Path of the parallel node with literals `a` and `b` among its direct
    /// children, with their child indices.
    pub(crate) fn find_sibling_pair(&self, a: u32, b: u32) -> Option<(Vec<usize>, usize, usize)> {
        let mut path = Vec::new();
        self.find_pair(a, b, &mut path)
    }

    fn find_pair(&self, a: u32, b: u32, path: &mut Vec<usize>) -> Option<(Vec<usize>, usize, usize)> {
        if let Node::Par(parts) = self {
            let pos = |id: u32| parts.iter().position(|p| matches!(p, Node::Lit(i, _) if *i == id));
            if let (Some(i), Some(j)) = (pos(a), pos(b)) {
                return Some((path.clone(), i, j));
            }
        }
        for (i, c) in self.children().iter().enumerate() {
            path.push(i);
            if let Some(found) = c.find_pair(a, b, path) {
                return Some(found);
            }
            path.pop();
        }
        None
    }
}
