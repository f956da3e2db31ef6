mod common;

use common::{fixture, has_n_brute, p, systems};
use proptest::prelude::*;
use provcalc::denotation::Universe;
use provcalc::engine::{run, Bounds, Strategy};
use provcalc::provenance::{extract, ProvenanceDiagram, ProvenanceError};
use provcalc::spdag::LabelledDag;
use provcalc::terms::Valuation;

fn diagram(t: &provcalc::Process) -> ProvenanceDiagram {
    extract(t, &Valuation::new()).unwrap()
}

fn named_edges(d: &ProvenanceDiagram, edges: &[(usize, usize)]) -> Vec<(String, String)> {
    let l = |v: usize| d.dag().label(v).to_string();
    let mut out: Vec<_> = edges.iter().map(|&(a, b)| (l(a), l(b))).collect();
    out.sort();
    out
}

#[test]
fn turner_final_diagram_edges() {
    let d = diagram(&fixture("turner_final.proc"));
    assert_eq!(d.len(), 5);
    let direct = named_edges(&d, d.direct_edges());
    let want = [
        ("#[turner location baltic]", "#[turner location london]"),
        ("#[turner location baltic]", "#[turner location tate]"),
        ("*[turner location tate]", "#[turner location baltic]"),
        ("*[turner location uk]", "#[turner location london]"),
        ("*[turner location uk]", "#[turner location tate]"),
    ];
    assert_eq!(direct, want.map(|(a, b)| (a.to_string(), b.to_string())));
    assert_eq!(d.dag().edge_count(), 7);
    let find = |s: &str| d.dag().labels().iter().position(|l| l.to_string() == s).unwrap();
    let (tate2, tate1, uk, baltic) = (
        find("*[turner location tate]"),
        find("#[turner location tate]"),
        find("*[turner location uk]"),
        find("#[turner location baltic]"),
    );
    assert!(d.derived_from(tate2, tate1));
    assert!(!d.derived_from(tate2, tate2));
    assert!(!d.derived_from(uk, baltic) && !d.derived_from(baltic, uk));
}

#[test]
fn not_quiescent_is_an_error() {
    assert!(matches!(extract(&p("*[d] | [d]"), &Valuation::new()), Err(ProvenanceError::NotQuiescent(_))));
    assert!(matches!(extract(&p("ex ?x. *[?x]"), &Valuation::new()), Err(ProvenanceError::NotQuiescent(_))));
}

#[test]
fn isomorphic_states_export_identically() {
    let a = diagram(&p("(#[a] | #[b]) ; (*[c] | #[d] ; *[a])"));
    let b = diagram(&p("(#[b] | #[a]) ; (#[d] ; *[a] | *[c])"));
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_dot(false), b.to_dot(false));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn quiescent_terminals_give_series_parallel_diagrams(s in systems(6, 2)) {
        let u = Universe::for_terms(&[&s], &[]);
        for t in run(&s, &u, Strategy::Exhaustive, Bounds::default()).unwrap().terminals {
            if t.quiescent {
                let d = diagram(&t.state);
                prop_assert!(d.dag().is_n_free() && !has_n_brute(d.dag()));
                let again = LabelledDag::from_edges(d.dag().labels().to_vec(), d.direct_edges()).unwrap();
                prop_assert_eq!(&again, d.dag());
                prop_assert_eq!(ProvenanceDiagram::from_json(&d.to_json()).unwrap(), d);
            }
        }
    }
}
