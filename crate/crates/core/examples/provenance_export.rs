//! Reads the provenance diagram off a quiescent state and exports it.

use provcalc::parse_process;
use provcalc::provenance::{extract, ProvenanceDiagram};
use provcalc::terms::Valuation;

fn main() {
    let terminal = parse_process(include_str!("../../../fixtures/turner_final.proc")).expect("fixture parses");
    let diagram = extract(&terminal, &Valuation::new()).expect("quiescent");
    let labels = diagram.dag().labels();
    for &(u, w) in diagram.direct_edges() {
        println!("{} was derived from {}", labels[u], labels[w]);
    }
    let indirect: Vec<_> = diagram.dag().edges().into_iter().filter(|e| !diagram.direct_edges().contains(e)).collect();
    for (u, w) in indirect {
        println!("{} was derived from {} in several steps", labels[u], labels[w]);
    }
    let json = diagram.to_json();
    assert_eq!(ProvenanceDiagram::from_json(&json).expect("own output"), diagram);
    print!("\n{json}\n{}", diagram.to_dot(true));
}
