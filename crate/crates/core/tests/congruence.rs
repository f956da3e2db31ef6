mod common;

use common::{p, terms};
use proptest::prelude::*;
use provcalc::congruence::axioms::{applications, Axiom, Direction};
use provcalc::congruence::{canonical_key, congruent, normalize};
use provcalc::denotation::{ideal_included, IdealKind, Universe};
use provcalc::print_process;

fn both_ways(a: &provcalc::Process, b: &provcalc::Process, kind: IdealKind) -> bool {
    let u = Universe::for_terms(&[a, b], &[]);
    ideal_included(a, b, kind, &u).unwrap() && ideal_included(b, a, kind, &u).unwrap()
}

#[test]
fn idempotent_sum_collapses() {
    let t = p("(ex ?x. *[d] | [?x]) + (ex ?x. *[d] | [?x])");
    let nf = normalize(&t);
    assert_eq!(nf.prefix.len(), 1);
    assert_eq!(nf.summands.len(), 1);
    // Independent route: one idempotence rewrite at the root.
    let direct = applications(&t)
        .into_iter()
        .find(|a| a.axiom == Axiom::ChoiceIdem && a.direction == Direction::Forward && a.position.is_empty())
        .expect("idempotence applies at the root");
    assert_eq!(print_process(&direct.result), "ex ?x. *[d] | [?x]");
    assert!(congruent(&direct.result, &t));
}

#[test]
fn distribution_example() {
    let nf = normalize(&p("([a] + [b]) ; [c]"));
    assert!(nf.prefix.is_empty());
    assert_eq!(nf.summands.len(), 2);
    assert!(congruent(&nf.to_process(), &p("[a] ; [c] + [b] ; [c]")));
}

#[test]
fn order_matters_in_sequence() {
    assert!(!congruent(&p("[a] ; [b]"), &p("[b] ; [a]")));
    assert!(congruent(&p("1 ; [a] | 1"), &p("[a]")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn normalize_is_idempotent(t in terms(6, 2)) {
        let once = normalize(&t);
        prop_assert_eq!(normalize(&once.to_process()), once);
    }

    #[test]
    fn normal_form_has_the_same_denotation(t in terms(5, 2)) {
        let nf = normalize(&t).to_process();
        prop_assert!(both_ways(&t, &nf, IdealKind::Interaction));
        prop_assert!(both_ways(&t, &nf, IdealKind::Smoothing));
    }

    #[test]
    fn axioms_preserve_key(t in terms(6, 2)) {
        let key = canonical_key(&t);
        for app in applications(&t) {
            prop_assert_eq!(&canonical_key(&app.result), &key, "{:?} {:?} at {:?}", app.axiom, app.direction, app.position);
        }
    }
}
