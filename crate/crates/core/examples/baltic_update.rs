//! An update with a quantifier: the Baltic copies the depiction of the old
//! flour mill from whatever the mill is depicted by.

use provcalc::denotation::Universe;
use provcalc::engine::{run, Bounds, Strategy};
use provcalc::parse_process;

fn main() {
    let system = parse_process(include_str!("../../../fixtures/baltic.proc")).expect("fixture parses");
    let u = Universe::for_terms(&[&system], &[]);
    let report = run(&system, &u, Strategy::Eager, Bounds::default()).expect("within bounds");
    let t = &report.terminals[0];
    println!("{system}\n  evolves to\n{}\n", t.state);
    for step in &t.trace.steps {
        println!("  {step}");
    }
}
