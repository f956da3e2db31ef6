mod common;

use common::{fixture, p, terms};
use proptest::prelude::*;
use provcalc::terms::{Name, Sort, Valuation, Variable};
use provcalc::{parse_process, print_process};

#[test]
fn turner_round_trip() {
    let t = fixture("turner_init.proc");
    assert_eq!(parse_process(&print_process(&t)).unwrap(), t);
}

#[test]
fn data_stays_data_under_reassociation() {
    assert_eq!(p("*[a] | (*[b] | *[c])").classify(), Sort::Data);
    assert_eq!(p("(*[c] | *[a]) | *[b]").classify(), Sort::Data);
}

proptest! {
    #[test]
    fn parse_inverts_print(t in terms(7, 3)) {
        prop_assert_eq!(parse_process(&print_process(&t)).unwrap(), t);
    }

    #[test]
    fn print_parse_idempotent(t in terms(7, 3)) {
        let once = print_process(&t);
        let twice = print_process(&parse_process(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn substitution_removes_exactly_the_variable(t in terms(6, 2), pick in 0usize..3) {
        let x = Variable::new(["v1", "v2", "v3"][pick]);
        let open = p(&format!("[{x}] | *[a {x} ?w]"));
        let s = provcalc::Process::par(t, open.clone());
        let after = s.substitute(&x, &Name::new("tate"));
        let mut expected = s.free_vars();
        expected.remove(&x);
        prop_assert_eq!(after.free_vars(), expected);
    }

    #[test]
    fn full_valuation_grounds_every_literal(t in terms(6, 0)) {
        let open = provcalc::Process::par(t, p("[?x] ; *[?y b]"));
        let v = Valuation::with_default(Name::new("z"));
        let mut ground = open.clone();
        for x in open.free_vars() {
            ground = ground.substitute(&x, v.get(&x).unwrap());
        }
        let mut all_ground = true;
        ground.visit_labels(&mut |l| all_ground &= l.is_ground());
        prop_assert!(all_ground);
    }
}
