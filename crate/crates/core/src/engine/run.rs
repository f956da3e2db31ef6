//! Executing a system to its terminal states.
//!
//! Exploring single steps directly is hopeless even for small systems: the
//! sequence rule alone reaches every series-parallel order of the parallel
//! literals. `run` therefore moves by macro-steps:
//!
//! * resolve an outermost choice (pick a branch) or quantifier (pick a
//!   name from the universe), while any remain;
//! * otherwise pick a coherent stored/consume pair, add the fewest
//!   orderings that make the two literals interchangeable siblings, realise
//!   those orderings with sequence steps, and interact.
//!
//! A terminal is a state with no macro-step: no choice, no quantifier and
//! no unordered complementary pair. Every macro-step is recorded as the
//! single rule applications it consists of.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::node::Node;
use super::steps::{redexes, Redex};
use super::{Bounds, EngineError, Rule, StepDetail, Trace};
use crate::congruence::canonical_key;
use crate::denotation::Universe;
use crate::spdag::{bits, LabelledDag};
use crate::terms::{Label, Polarity, Process, Sort};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Breadth-first over all macro-steps, memoised up to congruence.
    #[default]
    Exhaustive,
    /// One deterministic path: binder choices that enable an interaction,
    /// then interactions needing no reordering, then the rest. Interactions
    /// adding fewer orderings go first; remaining ties are broken by the
    /// least canonical key.
    Eager,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "eager" => Ok(Strategy::Eager),
            other => Err(format!("unknown strategy `{other}` (expected exhaustive or eager)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Eager => "eager",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Terminal {
    pub state: Process,
    pub trace: Trace,
    /// Only artefacts and stored data remain.
    pub quiescent: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RunReport {
    /// Sorted by canonical key of the state.
    pub terminals: Vec<Terminal>,
    /// Distinct states visited.
    pub states: usize,
    /// Sort of the initial term; anything but a system term is unusual.
    pub sort: Sort,
}

/// Orderings added to make a pair interchangeable are searched one edge at
/// a time; this caps the candidates kept per level.
const MAX_REPAIR_CANDIDATES: usize = 20_000;

struct Macro {
    redexes: Vec<Redex>,
    result: Node,
    key: Vec<u8>,
    /// Lower is preferred by the eager strategy.
    class: u8,
    /// Orderings added before interacting.
    cost: usize,
}

pub fn run(s: &Process, u: &Universe, strategy: Strategy, bounds: Bounds) -> Result<RunReport, EngineError> {
    let start = Node::from_process(s);
    match strategy {
        Strategy::Exhaustive => exhaustive(s, start, u, bounds),
        Strategy::Eager => eager(s, start, u, bounds),
    }
}

fn terminal(node: &Node, trace: Trace) -> Terminal {
    let state = node.to_process();
    Terminal {
        quiescent: state.is_quiescent(),
        state,
        trace,
    }
}

fn extend(trace: &Trace, m: &Macro) -> Trace {
    let mut t = trace.clone();
    t.steps.extend(m.redexes.iter().map(Redex::to_step));
    t
}

fn exhaustive(s: &Process, start: Node, u: &Universe, bounds: Bounds) -> Result<RunReport, EngineError> {
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    seen.insert(canonical_key(s));
    let mut terminals: BTreeMap<Vec<u8>, Terminal> = BTreeMap::new();
    let mut queue = VecDeque::from([(start, Trace::new(s.clone()), 0usize)]);
    let mut exceeded = false;
    'search: while let Some((node, trace, depth)) = queue.pop_front() {
        let macros = macro_steps(&node, u)?;
        let own = canonical_key(&node.to_process());
        if macros.is_empty() {
            terminals.entry(own).or_insert_with(|| terminal(&node, trace));
            continue;
        }
        if depth >= bounds.max_depth {
            exceeded = true;
            continue;
        }
        for m in macros {
            // Dropping a vacuous quantifier, or choosing between congruent
            // branches, gives a congruent state that still has to be
            // expanded.
            if m.key == own {
                let t = extend(&trace, &m);
                queue.push_front((m.result, t, depth));
                continue;
            }
            if seen.contains(&m.key) {
                continue;
            }
            if seen.len() >= bounds.max_states {
                exceeded = true;
                break 'search;
            }
            seen.insert(m.key.clone());
            let t = extend(&trace, &m);
            queue.push_back((m.result, t, depth + 1));
        }
    }
    let report = RunReport {
        terminals: terminals.into_values().collect(),
        states: seen.len(),
        sort: s.classify(),
    };
    if exceeded {
        return Err(EngineError::BoundExceeded {
            states: report.states,
            partial: Some(Box::new(report)),
        });
    }
    Ok(report)
}

fn eager(s: &Process, start: Node, u: &Universe, bounds: Bounds) -> Result<RunReport, EngineError> {
    let mut node = start;
    let mut trace = Trace::new(s.clone());
    let mut states = 1;
    loop {
        let macros = macro_steps(&node, u)?;
        let Some(best) = macros.into_iter().min_by(|a, b| (a.class, a.cost, &a.key).cmp(&(b.class, b.cost, &b.key))) else {
            return Ok(RunReport {
                terminals: vec![terminal(&node, trace)],
                states,
                sort: s.classify(),
            });
        };
        if states > bounds.max_depth || states >= bounds.max_states {
            return Err(EngineError::BoundExceeded {
                states,
                partial: Some(Box::new(RunReport {
                    terminals: Vec::new(),
                    states,
                    sort: s.classify(),
                })),
            });
        }
        trace = extend(&trace, &best);
        node = best.result;
        states += 1;
    }
}

fn coherent_pairs(dag: &LabelledDag) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..dag.len() {
        if dag.label(a).polarity != Polarity::Stored {
            continue;
        }
        for b in 0..dag.len() {
            if dag.label(b).polarity == Polarity::Consume && dag.coherent(a, b).is_some() {
                out.push((a, b));
            }
        }
    }
    out
}

fn macro_steps(node: &Node, u: &Universe) -> Result<Vec<Macro>, EngineError> {
    let outer = node.outer_binders();
    let mut out: BTreeMap<Vec<u8>, Macro> = BTreeMap::new();
    let mut add = |m: Macro| {
        let keep = out.get(&m.key).map_or(true, |old| m.class < old.class);
        if keep {
            out.insert(m.key.clone(), m);
        }
    };
    if !outer.is_empty() {
        let enabled_before = coherent_pairs(&node.skeleton().0).len();
        for r in redexes(node, u, &[Rule::Choice, Rule::Exists]) {
            if !outer.contains(&r.position) {
                continue;
            }
            if matches!(&r.detail, StepDetail::Choice { kept } if kept.len() != 1) {
                continue;
            }
            let enabled_after = coherent_pairs(&r.result.skeleton().0).len();
            let key = canonical_key(&r.result.to_process());
            add(Macro {
                result: r.result.clone(),
                key,
                class: if enabled_after > enabled_before { 0 } else { 3 },
                cost: 0,
                redexes: vec![r],
            });
        }
        return Ok(out.into_values().collect());
    }
    let (dag, ids) = node.skeleton();
    let index: HashMap<u32, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    for (a, b) in coherent_pairs(&dag) {
        for target in twin_targets(&dag, a, b)? {
            let (mut steps, ordered) = sequence_to(node, &index, &target, u)?;
            let (path, i, j) = ordered
                .find_sibling_pair(ids[a], ids[b])
                .ok_or_else(|| EngineError::Invariant("interacting pair did not become siblings".into()))?;
            let Node::Par(children) = ordered.at(&path) else {
                unreachable!("sibling pair lives in a parallel node");
            };
            let tuple = dag.label(a).tuple.clone();
            let mut rest: Vec<Node> = children
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, n)| n.clone())
                .collect();
            rest.push(Node::Lit(ids[a], Label::artefact(tuple.clone())));
            let result = ordered.replace_at(&path, Node::par(rest));
            let class = if steps.is_empty() { 1 } else { 2 };
            steps.push(Redex {
                rule: Rule::Interact,
                position: path,
                detail: StepDetail::Interact {
                    tuple,
                    stored: i,
                    consume: j,
                },
                result: result.clone(),
            });
            add(Macro {
                key: canonical_key(&result.to_process()),
                result,
                redexes: steps,
                class,
                cost: target.edge_count() - dag.edge_count(),
            });
        }
    }
    Ok(out.into_values().collect())
}

/// Gives `a` and `b` the union of their predecessors and successors,
/// repeatedly, so that they become interchangeable. `None` if they become
/// ordered.
fn twin_close(dag: &LabelledDag, a: usize, b: usize) -> Option<LabelledDag> {
    let mut d = dag.clone();
    loop {
        let preds = d.predecessors(a) | d.predecessors(b);
        let succs = d.successors(a) | d.successors(b);
        if d.predecessors(a) == preds && d.predecessors(b) == preds && d.successors(a) == succs && d.successors(b) == succs {
            return Some(d);
        }
        let mut edges = Vec::new();
        for p in bits(preds) {
            edges.extend([(p, a), (p, b)]);
        }
        for s in bits(succs) {
            edges.extend([(a, s), (b, s)]);
        }
        d = d.with_edges(&edges)?;
        if d.comparable(a, b) {
            return None;
        }
    }
}

/// Least extensions of `dag` in which `a`, `b` are interchangeable and the
/// order is series-parallel.
fn twin_targets(dag: &LabelledDag, a: usize, b: usize) -> Result<Vec<LabelledDag>, EngineError> {
    let base = twin_close(dag, a, b).ok_or_else(|| EngineError::Invariant("coherent pair became ordered".into()))?;
    if base.is_n_free() {
        return Ok(vec![base]);
    }
    let mut level: BTreeMap<Vec<(usize, usize)>, LabelledDag> = BTreeMap::from([(base.edges(), base)]);
    loop {
        let mut next: BTreeMap<Vec<(usize, usize)>, LabelledDag> = BTreeMap::new();
        for d in level.values() {
            for x in 0..d.len() {
                for y in 0..d.len() {
                    if x == y || d.comparable(x, y) || (x == a && y == b) || (x == b && y == a) {
                        continue;
                    }
                    let Some(e) = d.with_edges(&[(x, y)]).and_then(|e| twin_close(&e, a, b)) else {
                        continue;
                    };
                    next.entry(e.edges()).or_insert(e);
                }
            }
            if next.len() > MAX_REPAIR_CANDIDATES {
                return Err(EngineError::Invariant("too many candidate orderings".into()));
            }
        }
        if next.is_empty() {
            return Err(EngineError::Invariant("no series-parallel ordering found".into()));
        }
        let found: Vec<LabelledDag> = next.values().filter(|d| d.is_n_free()).cloned().collect();
        if !found.is_empty() {
            return Ok(found);
        }
        level = next;
    }
}

/// Literal order of `node` indexed like the original skeleton.
fn order_by_id(node: &Node, index: &HashMap<u32, usize>) -> Vec<u64> {
    let (dag, ids) = node.skeleton();
    let mut succ = vec![0u64; index.len()];
    for (x, &id) in ids.iter().enumerate() {
        succ[index[&id]] = bits(dag.successors(x)).fold(0, |m, y| m | 1 << index[&ids[y]]);
    }
    succ
}

/// Sequence steps from `node` until its literal order equals `target`,
/// greedily taking the step that adds most edges without leaving `target`.
fn sequence_to(
    node: &Node,
    index: &HashMap<u32, usize>,
    target: &LabelledDag,
    u: &Universe,
) -> Result<(Vec<Redex>, Node), EngineError> {
    let goal: Vec<u64> = (0..target.len()).map(|x| target.successors(x)).collect();
    let mut current = node.clone();
    let mut steps = Vec::new();
    loop {
        let have = order_by_id(&current, index);
        if have == goal {
            return Ok((steps, current));
        }
        let mut best: Option<(usize, Redex)> = None;
        for r in redexes(&current, u, &[Rule::Sequence]) {
            let next = order_by_id(&r.result, index);
            let within = next.iter().zip(&goal).all(|(n, g)| n & !g == 0);
            if !within || next == have {
                continue;
            }
            let size: usize = next.iter().map(|s| s.count_ones() as usize).sum();
            if best.as_ref().map_or(true, |(b, _)| size > *b) {
                best = Some((size, r));
            }
        }
        let Some((_, r)) = best else {
            return Err(EngineError::Invariant("no sequence step towards the required order".into()));
        };
        current = r.result.clone();
        steps.push(r);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::congruent;
    use crate::syntax::parse_process;

    fn p(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    #[test]
    fn single_interaction() {
        let r = run(&p("*[d] | [d]"), &Universe::default(), Strategy::Exhaustive, Bounds::default()).unwrap();
        assert_eq!(r.terminals.len(), 1);
        assert_eq!(r.terminals[0].state, p("#[d]"));
        assert!(r.terminals[0].quiescent);
    }

    #[test]
    fn traces_replay() {
        let s = p("*[a] | *[b] | ([a] ; [b])");
        let u = Universe::for_terms(&[&s], &[]);
        for strategy in [Strategy::Exhaustive, Strategy::Eager] {
            let r = run(&s, &u, strategy, Bounds::default()).unwrap();
            for t in &r.terminals {
                let last = t.trace.replay(&u).unwrap();
                assert!(congruent(&last, &t.state));
            }
            assert!(r.terminals.iter().any(|t| congruent(&t.state, &p("#[a] ; #[b]"))));
        }
    }

    #[test]
    fn sequencing_precedes_interaction() {
        let s = p("*[d] | ([q] ; [d])");
        let r = run(&s, &Universe::default(), Strategy::Eager, Bounds::default()).unwrap();
        assert!(congruent(&r.terminals[0].state, &p("[q] ; #[d]")));
        let rules: Vec<Rule> = r.terminals[0].trace.steps.iter().map(|s| s.rule).collect();
        assert_eq!(rules, vec![Rule::Sequence, Rule::Interact]);
    }
}
