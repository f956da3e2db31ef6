//! The Turner painting leaves the Tate for the Baltic and comes back.
//! Runs the knowledge base to its terminal states and draws the provenance
//! of the quiescent one.

use provcalc::denotation::Universe;
use provcalc::engine::{run, Bounds, Strategy};
use provcalc::parse_process;
use provcalc::provenance::extract;
use provcalc::terms::Valuation;

fn main() {
    let system = parse_process(include_str!("../../../fixtures/turner.proc")).expect("fixture parses");
    let u = Universe::for_terms(&[&system], &[]);
    let report = run(&system, &u, Strategy::Exhaustive, Bounds::default()).expect("within bounds");
    println!("{} states explored", report.states);
    for t in &report.terminals {
        let status = if t.quiescent { "quiescent" } else { "stuck" };
        println!("\n{status} after {} steps:\n  {}", t.trace.steps.len(), t.state);
        if t.quiescent {
            let diagram = extract(&t.state, &Valuation::new()).expect("quiescent");
            print!("{}", diagram.to_dot(false));
        }
    }
}
