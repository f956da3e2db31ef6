//! Loads a store from N-Triples-style lines and queries it with an update.

use provcalc::denotation::Universe;
use provcalc::engine::{run, Bounds, Strategy};
use provcalc::terms::Process;
use provcalc::{parse_process, parse_triples};

fn main() {
    let store = parse_triples(include_str!("../../../fixtures/store.nt")).expect("fixture parses");
    let update = parse_process("ex ?p. [turner location ?p] ; (*[turner location baltic] | *[turner seenat ?p])").unwrap();
    let system = Process::par(store, update);
    let u = Universe::for_terms(&[&system], &[]);
    let report = run(&system, &u, Strategy::Exhaustive, Bounds::default()).expect("within bounds");
    for t in report.terminals.iter().filter(|t| t.quiescent) {
        println!("{}", t.state);
    }
}
