mod common;

use common::{has_n_brute, sp_dag, sp_terms};
use proptest::prelude::*;
use provcalc::denotation::{term_to_dag, Universe};
use provcalc::engine::step_all;
use provcalc::spdag::{find_interaction_hom, HomWitness, LabelledDag};
use provcalc::terms::{Label, Tuple, Valuation};
use provcalc::Process;

fn closed(d: &LabelledDag) -> bool {
    let n = d.len();
    (0..n).all(|a| (0..n).all(|b| !d.has_edge(a, b) || (0..n).all(|c| !d.has_edge(b, c) || d.has_edge(a, c))))
}

fn distinct_labels(n: usize) -> Vec<Label> {
    (0..n).map(|i| Label::artefact(Tuple::ground(&[format!("v{i}")]))).collect()
}

/// Every strict partial order on `n` labelled vertices.
fn all_orders(n: usize) -> Vec<LabelledDag> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let has = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).is_some_and(|i| mask >> i & 1 == 1);
        let ok = pairs.iter().all(|&(a, b)| {
            !has(a, b) || (!has(b, a) && (0..n).all(|c| c == a || c == b || !has(b, c) || has(a, c)))
        });
        if ok {
            let edges: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(a, b)| has(a, b)).collect();
            out.push(LabelledDag::from_edges(distinct_labels(n), &edges).unwrap());
        }
    }
    out
}

#[test]
fn forbidden_n_characterises_small_orders() {
    // Number of labelled posets on 0..=4 points.
    let expected = [1, 1, 3, 19, 219];
    for (n, &count) in expected.iter().enumerate() {
        let orders = all_orders(n);
        assert_eq!(orders.len(), count);
        for d in orders {
            let decomposed = d.sp_decompose();
            assert_eq!(d.is_n_free(), decomposed.is_ok());
            assert_eq!(d.is_n_free(), !has_n_brute(&d));
            if let Ok(term) = decomposed {
                let rebuilt = term_to_dag(&term, &Valuation::new()).unwrap();
                assert_eq!(rebuilt.canonical_key(8).unwrap(), d.canonical_key(8).unwrap());
            }
        }
    }
}

#[test]
fn d0_from_compositions() {
    let first = sp_dag(&common::p("#[tate] | #[london]"));
    let second = sp_dag(&common::p("(#[baltic] ; *[tate]) | *[uk]"));
    let d0 = LabelledDag::seq_compose(&first, &second);
    let name = |v: usize| d0.label(v).to_string();
    let mut direct: Vec<(String, String)> = d0.transitive_reduction().into_iter().map(|(a, b)| (name(a), name(b))).collect();
    direct.sort();
    let mut want: Vec<(String, String)> = [
        ("#[baltic]", "#[london]"),
        ("#[baltic]", "#[tate]"),
        ("*[tate]", "#[baltic]"),
        ("*[uk]", "#[london]"),
        ("*[uk]", "#[tate]"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    want.sort();
    assert_eq!(direct, want);
    assert_eq!(d0.edge_count(), 7);
    assert!(!has_n_brute(&d0) && d0.is_n_free());
}

fn chain_step(p: &Process, pick: usize) -> Option<Process> {
    let steps = step_all(p, &Universe::default());
    (!steps.is_empty()).then(|| steps[pick % steps.len()].result.clone())
}

fn fibers_at_most_two(w: &HomWitness, targets: usize) -> bool {
    (0..targets).all(|t| w.map.iter().filter(|&&m| m == t).count() <= 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compositions_stay_closed_and_n_free(a in sp_terms(5), b in sp_terms(5)) {
        let (a, b) = (sp_dag(&a), sp_dag(&b));
        for d in [a.par_compose(&b), LabelledDag::seq_compose(&a, &b)] {
            prop_assert!(closed(&d));
            prop_assert!(d.is_n_free() && !has_n_brute(&d));
        }
        prop_assert_eq!(LabelledDag::seq_compose(&a, &b), LabelledDag::seq_compose_boundary(&a, &b));
    }

    #[test]
    fn reduction_then_closure_is_identity(t in sp_terms(7)) {
        let d = sp_dag(&t);
        let again = LabelledDag::from_edges(d.labels().to_vec(), &d.transitive_reduction()).unwrap();
        prop_assert_eq!(again, d);
    }

    #[test]
    fn interaction_witnesses_compose(t in sp_terms(6), i in any::<usize>(), j in any::<usize>()) {
        let Some(mid) = chain_step(&t, i) else { return Ok(()) };
        let Some(last) = chain_step(&mid, j) else { return Ok(()) };
        let (a, b, c) = (sp_dag(&t), sp_dag(&mid), sp_dag(&last));
        let f = find_interaction_hom(&a, &b).expect("a step is witnessed");
        let g = find_interaction_hom(&b, &c).expect("a step is witnessed");
        prop_assert!(fibers_at_most_two(&f, b.len()) && fibers_at_most_two(&g, c.len()));
        let h = f.compose(&g);
        prop_assert!(h.verify(&a, &c).is_ok());
    }
}
