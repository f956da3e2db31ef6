//! Two galleries each take a painting from the Sage. Doing so independently
//! promises less than doing so jointly; the three descriptions are ordered
//! by both derivability and denotation.

use provcalc::denotation::{ideal_included, IdealKind, Universe};
use provcalc::engine::{yields, Bounds};
use provcalc::{parse_process, Process};

fn load(text: &str) -> Process {
    parse_process(text).expect("fixture parses")
}

fn main() {
    let init = load(include_str!("../../../fixtures/sage_init.proc"));
    let indep = load(include_str!("../../../fixtures/sage_indep.proc"));
    let joint = load(include_str!("../../../fixtures/sage_joint.proc"));
    let named = [("initial", &init), ("independent", &indep), ("joint", &joint)];
    for (pn, p) in named {
        for (qn, q) in named {
            if pn == qn {
                continue;
            }
            let u = Universe::for_terms(&[p, q], &[]);
            let derivable = match yields(p, q, &u, Bounds::default()) {
                Ok(Some(t)) => format!("yes, {} steps", t.steps.len()),
                Ok(None) => "no".to_string(),
                Err(e) => e.to_string(),
            };
            let included = ideal_included(p, q, IdealKind::Interaction, &u).expect("closed terms");
            println!("{pn:>11} yields {qn:<11}: {derivable:<13} denotation included: {included}");
        }
    }
}
