//! The Turner knowledge base before any step (D1), after sequencing (D2),
//! and after interacting (D0). Smoothing adds orderings only; interaction
//! also merges each stored/consume pair into an artefact.

use provcalc::congruence::SpTerm;
use provcalc::denotation::term_to_dag;
use provcalc::parse_process;
use provcalc::spdag::{find_interaction_hom, find_smoothing_hom, LabelledDag};
use provcalc::terms::Valuation;

fn dag(text: &str) -> LabelledDag {
    let sp = SpTerm::from_process(&parse_process(text).expect("fixture parses")).expect("series-parallel");
    term_to_dag(&sp, &Valuation::new()).expect("ground")
}

fn main() {
    let d1 = dag(include_str!("../../../fixtures/turner_init.proc"));
    let d2 = dag(include_str!("../../../fixtures/turner_mid.proc"));
    let d0 = dag(include_str!("../../../fixtures/turner_final.proc"));
    println!("D1: {} vertices, D2: {}, D0: {}", d1.len(), d2.len(), d0.len());
    let smooth = find_smoothing_hom(&d1, &d2).expect("D1 to D2");
    println!("D1 -> D2 smoothing, {} merges", smooth.merges());
    let merge = find_interaction_hom(&d2, &d0).expect("D2 to D0");
    println!("D2 -> D0 interaction, {} merges", merge.merges());
    let composed = smooth.compose(&merge);
    composed.verify(&d1, &d0).expect("composite is a witness");
    println!("composite D1 -> D0 verified, map {:?}", composed.map);
    assert!(find_interaction_hom(&d0, &d1).is_none());
    println!("no homomorphism back from D0 to D1");
}
