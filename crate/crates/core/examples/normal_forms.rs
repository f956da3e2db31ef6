//! Prenex sum-of-series-parallel normal forms and congruence.

use provcalc::congruence::{congruent, normalize};
use provcalc::parse_process;

fn main() {
    let terms = [
        "1 | 1",
        "([a] + [b]) ; [c]",
        "*[d] | ex ?x. [?x]",
        "ex ?x. ex ?y. [?x] | [?y]",
        "(ex ?x. [?x] ; *[b ?x]) + (ex ?y. [?y] ; *[b ?y])",
    ];
    for text in terms {
        let p = parse_process(text).expect("valid term");
        println!("{text:<52} ~> {}", normalize(&p));
    }
    let pairs = [("[a] | [b]", "[b] | [a]"), ("[a] ; [b]", "[b] ; [a]"), ("[a] | ([b] + [c])", "[a] | [b] + [a] | [c]")];
    for (l, r) in pairs {
        let same = congruent(&parse_process(l).unwrap(), &parse_process(r).unwrap());
        println!("{l}  {}  {r}", if same { "==" } else { "!=" });
    }
}
