//! Every single-step evolution of a small system, one per rule instance.

use provcalc::denotation::Universe;
use provcalc::engine::step_all;
use provcalc::parse_process;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "*[d] | ([q] ; [d]) | ([d] + [e])".to_string());
    let p = match parse_process(&text) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let u = Universe::for_terms(&[&p], &[]);
    println!("{p}  ({:?})", p.classify());
    for step in step_all(&p, &u) {
        println!("  {step}");
    }
}
