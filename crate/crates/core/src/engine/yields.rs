use std::collections::{BTreeMap, BTreeSet};

use super::{step_all, Bounds, EngineError, Step, Trace};
use crate::congruence::{canonical_key, normalize, SpTerm};
use crate::denotation::Universe;
use crate::terms::{Label, Polarity, Process, Tuple};

/// Searches forward from `q` for a state congruent to `p`, i.e. a
/// derivation showing that `p` yields `q`. `Ok(None)` means the reachable
/// states were exhausted within the bounds.
///
/// States without choices or quantifiers only evolve by sequence and
/// interact steps, which keep per-tuple counts of stored + artefact and
/// consume + artefact; such states that cannot match `p` are not expanded.
pub fn yields(p: &Process, q: &Process, u: &Universe, bounds: Bounds) -> Result<Option<Trace>, EngineError> {
    let goal = canonical_key(p);
    let nf = normalize(p);
    let goal_counts = (nf.prefix.is_empty() && nf.summands.len() == 1).then(|| counts(nf.summands[0].labels()));
    let mut states: Vec<(Process, Option<(usize, Step)>)> = vec![(q.clone(), None)];
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::from([canonical_key(q)]);
    if seen.contains(&goal) {
        return Ok(Some(Trace::new(q.clone())));
    }
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for _depth in 0..bounds.max_depth {
        let mut next = Vec::new();
        for &i in &frontier {
            let state = states[i].0.clone();
            if let Some(sp) = SpTerm::from_process(&state) {
                let reachable = match &goal_counts {
                    Some(g) => reachable_counts(&counts(sp.labels()), g),
                    None => false,
                };
                if !reachable {
                    continue;
                }
            }
            for step in step_all(&state, u) {
                let key = canonical_key(&step.result);
                if !seen.insert(key.clone()) {
                    continue;
                }
                if seen.len() > bounds.max_states {
                    return Err(EngineError::BoundExceeded {
                        states: seen.len(),
                        partial: None,
                    });
                }
                states.push((step.result.clone(), Some((i, step))));
                let idx = states.len() - 1;
                if key == goal {
                    return Ok(Some(rebuild(&states, idx, q)));
                }
                next.push(idx);
            }
        }
        if next.is_empty() {
            frontier.clear();
            break;
        }
        frontier = next;
    }
    if !frontier.is_empty() {
        truncated = true;
    }
    if truncated {
        return Err(EngineError::BoundExceeded {
            states: seen.len(),
            partial: None,
        });
    }
    Ok(None)
}

fn rebuild(states: &[(Process, Option<(usize, Step)>)], mut idx: usize, q: &Process) -> Trace {
    let mut steps = Vec::new();
    while let Some((parent, step)) = &states[idx].1 {
        steps.push(step.clone());
        idx = *parent;
    }
    steps.reverse();
    Trace {
        initial: q.clone(),
        steps,
    }
}

type Counts = BTreeMap<Tuple, [usize; 3]>;

fn counts(labels: Vec<&Label>) -> Counts {
    let mut out = Counts::new();
    for l in labels {
        let slot = match l.polarity {
            Polarity::Stored => 0,
            Polarity::Consume => 1,
            Polarity::Artefact => 2,
        };
        out.entry(l.tuple.clone()).or_insert([0; 3])[slot] += 1;
    }
    out
}

fn reachable_counts(from: &Counts, to: &Counts) -> bool {
    let tuples: BTreeSet<&Tuple> = from.keys().chain(to.keys()).collect();
    tuples.into_iter().all(|t| {
        let [s0, c0, a0] = from.get(t).copied().unwrap_or_default();
        let [s1, c1, a1] = to.get(t).copied().unwrap_or_default();
        if !t.is_ground() {
            return [s0, c0, a0] == [s1, c1, a1];
        }
        a1 >= a0 && s0 + a0 == s1 + a1 && c0 + a0 == c1 + a1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Rule;
    use crate::syntax::parse_process;

    fn p(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    #[test]
    fn reflexive_and_single_interaction() {
        let u = Universe::default();
        let t = yields(&p("[a]"), &p("[a]"), &u, Bounds::default()).unwrap().unwrap();
        assert!(t.steps.is_empty());
        let t = yields(&p("#[d]"), &p("*[d] | [d]"), &u, Bounds::default()).unwrap().unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].rule, Rule::Interact);
        assert_eq!(yields(&p("*[d] | [d]"), &p("#[d]"), &u, Bounds::default()).unwrap(), None);
    }
}
