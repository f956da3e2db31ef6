//! Seeded random systems, each run eagerly to a terminal state.

use provcalc::denotation::Universe;
use provcalc::engine::{run, Bounds, Strategy};
use provcalc::generate::Generator;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut g = Generator::new(seed);
    for _ in 0..8 {
        let s = g.system(6, 2);
        let u = Universe::for_terms(&[&s], &[]);
        match run(&s, &u, Strategy::Eager, Bounds::default()) {
            Ok(r) => {
                let t = &r.terminals[0];
                let status = if t.quiescent { "quiescent" } else { "stuck" };
                println!("{s}\n  -> {} [{status}, {} steps]", t.state, t.trace.steps.len());
            }
            Err(e) => println!("{s}\n  -> {e}"),
        }
    }
}
