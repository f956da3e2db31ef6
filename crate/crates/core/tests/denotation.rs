mod common;

use common::{fixture, p, systems};
use proptest::prelude::*;
use provcalc::congruence::axioms::applications;
use provcalc::denotation::{denote, ideal_included, ideal_included_with, IdealKind, MembershipMode, Universe};
use provcalc::generate::Generator;
use provcalc::terms::{Name, Valuation};
use provcalc::Process;

fn included(a: &Process, b: &Process, kind: IdealKind) -> bool {
    ideal_included(a, b, kind, &Universe::for_terms(&[a, b], &[])).unwrap()
}

#[test]
fn turner_inclusions() {
    let (init, mid, fin) = (fixture("turner_init.proc"), fixture("turner_mid.proc"), fixture("turner_final.proc"));
    assert!(included(&fin, &init, IdealKind::Interaction));
    assert!(!included(&init, &fin, IdealKind::Interaction));
    assert!(included(&mid, &init, IdealKind::Smoothing));
    assert!(!included(&fin, &init, IdealKind::Smoothing));
}

#[test]
fn quantifier_grounds_over_universe() {
    let u = Universe::new([Name::new("a"), Name::new("b")]);
    let ideal = denote(&p("ex ?x. [?x]"), &Valuation::new(), IdealKind::Smoothing, &u).unwrap();
    let mut labels: Vec<String> = ideal.generators.iter().map(|g| g.label(0).to_string()).collect();
    labels.sort();
    assert_eq!(labels, ["[a]", "[b]"]);
}

#[test]
fn interaction_ideal_contains_orderings_and_merge() {
    let s = p("*[d] | [d]");
    for member in ["*[d] ; [d]", "[d] ; *[d]", "#[d]", "*[d] | [d]"] {
        assert!(included(&p(member), &s, IdealKind::Interaction), "{member}");
    }
    assert!(!included(&p("#[d]"), &s, IdealKind::Smoothing));
    assert!(!included(&p("#[e]"), &s, IdealKind::Interaction));
}

fn related_pair(seed: u64) -> (Process, Process) {
    let mut g = Generator::new(seed);
    let q = g.system(5, 1);
    let k = (seed % 4) as usize;
    let mut p = g.evolve(&q, k);
    if seed % 3 == 0 {
        p = g.perturb(&p);
    }
    (p, q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn congruent_terms_denote_equally(t in systems(5, 2), pick in any::<usize>()) {
        let apps = applications(&t);
        prop_assume!(!apps.is_empty());
        let other = &apps[pick % apps.len()].result;
        for kind in [IdealKind::Smoothing, IdealKind::Interaction] {
            prop_assert!(included(&t, other, kind) && included(other, &t, kind));
        }
    }

    #[test]
    fn smoothing_refines_interaction(seed in any::<u64>()) {
        let (p, q) = related_pair(seed);
        if included(&p, &q, IdealKind::Smoothing) {
            prop_assert!(included(&p, &q, IdealKind::Interaction));
        }
    }

    #[test]
    fn extra_names_do_not_change_inclusion(seed in any::<u64>()) {
        let (p, q) = related_pair(seed);
        let base = Universe::for_terms(&[&p, &q], &[]);
        let mut wide = base.clone();
        wide.add_fresh(2);
        for kind in [IdealKind::Smoothing, IdealKind::Interaction] {
            prop_assert_eq!(
                ideal_included(&p, &q, kind, &base).unwrap(),
                ideal_included(&p, &q, kind, &wide).unwrap()
            );
        }
    }

    #[test]
    fn single_witness_agrees_with_merge_chains(seed in any::<u64>()) {
        let (p, q) = related_pair(seed);
        let u = Universe::for_terms(&[&p, &q], &[]);
        prop_assert_eq!(
            ideal_included_with(&p, &q, IdealKind::Interaction, &u, MembershipMode::SingleWitness).unwrap(),
            ideal_included_with(&p, &q, IdealKind::Interaction, &u, MembershipMode::MergeChain).unwrap()
        );
    }
}
