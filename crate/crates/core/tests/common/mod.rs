#![allow(dead_code)]

use proptest::prelude::*;
use provcalc::congruence::SpTerm;
use provcalc::denotation::term_to_dag;
use provcalc::generate::Generator;
use provcalc::spdag::LabelledDag;
use provcalc::terms::Valuation;
use provcalc::{parse_process, Process};

pub fn fixture(name: &str) -> Process {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_process(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn p(text: &str) -> Process {
    parse_process(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn sp_dag(p: &Process) -> LabelledDag {
    let sp = SpTerm::from_process(p).expect("series-parallel term");
    term_to_dag(&sp, &Valuation::new()).expect("ground term")
}

pub fn systems(max_literals: usize, max_binders: usize) -> impl Strategy<Value = Process> {
    any::<u64>().prop_map(move |seed| Generator::new(seed).system(max_literals, max_binders))
}

pub fn terms(max_literals: usize, max_binders: usize) -> impl Strategy<Value = Process> {
    any::<u64>().prop_map(move |seed| Generator::new(seed).term(max_literals, max_binders))
}

pub fn sp_terms(max_literals: usize) -> impl Strategy<Value = Process> {
    any::<u64>().prop_map(move |seed| Generator::new(seed).sp_term(max_literals))
}

/// Brute-force N search over all ordered 4-tuples, written independently of
/// the library's decomposition: v2 -> v0, v3 -> v0, v3 -> v1 and no other
/// comparabilities.
pub fn has_n_brute(d: &LabelledDag) -> bool {
    let n = d.len();
    let cmp = |a: usize, b: usize| d.has_edge(a, b) || d.has_edge(b, a);
    for v0 in 0..n {
        for v1 in 0..n {
            for v2 in 0..n {
                for v3 in 0..n {
                    let vs = [v0, v1, v2, v3];
                    if (0..4).any(|i| (i + 1..4).any(|j| vs[i] == vs[j])) {
                        continue;
                    }
                    if d.has_edge(v2, v0) && d.has_edge(v3, v0) && d.has_edge(v3, v1) && !cmp(v2, v1) && !cmp(v0, v1) && !cmp(v2, v3) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
