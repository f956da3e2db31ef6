//! Series-parallel orders are exactly those without an induced N.

use provcalc::spdag::LabelledDag;
use provcalc::terms::{Label, Tuple};

fn graph(edges: &[(usize, usize)]) -> LabelledDag {
    let labels = ["a", "b", "c", "d"].iter().map(|n| Label::artefact(Tuple::ground(&[n]))).collect();
    LabelledDag::from_edges(labels, edges).expect("acyclic")
}

fn main() {
    let n = graph(&[(2, 0), (3, 0), (3, 1)]);
    let closed_n = graph(&[(2, 0), (3, 0), (3, 1), (2, 1)]);
    for (name, g) in [("N", &n), ("N plus the missing edge", &closed_n)] {
        match g.sp_decompose() {
            Ok(term) => println!("{name}: series-parallel as {}", term.to_process()),
            Err(e) => println!("{name}: not series-parallel, N on vertices {:?}", e.witness.expect("closed graph")),
        }
    }
}
