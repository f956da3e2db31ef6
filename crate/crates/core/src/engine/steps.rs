use std::collections::BTreeSet;

use super::node::Node;
use super::{Rule, Step, StepDetail};
use crate::congruence::canonical_key;
use crate::denotation::Universe;
use crate::terms::{Label, Polarity, Process};

/// A step on the working form; `result` is the whole rewritten term.
#[derive(Clone, Debug)]
pub(crate) struct Redex {
    pub rule: Rule,
    pub position: Vec<usize>,
    pub detail: StepDetail,
    pub result: Node,
}

impl Redex {
    pub(crate) fn to_step(&self) -> Step {
        Step {
            rule: self.rule,
            position: self.position.clone(),
            detail: self.detail.clone(),
            result: self.result.to_process(),
        }
    }
}

/// All single steps of the given rules, at every position.
pub(crate) fn redexes(root: &Node, u: &Universe, rules: &[Rule]) -> Vec<Redex> {
    let mut out = Vec::new();
    visit(root, root, &mut Vec::new(), u, rules, &mut out);
    out
}

fn visit(root: &Node, here: &Node, path: &mut Vec<usize>, u: &Universe, rules: &[Rule], out: &mut Vec<Redex>) {
    let mut emit = |rule: Rule, detail: StepDetail, replacement: Node| {
        out.push(Redex {
            rule,
            position: path.clone(),
            detail,
            result: root.replace_at(path, replacement),
        });
    };
    match here {
        Node::Par(children) => {
            if rules.contains(&Rule::Interact) {
                interactions(children, &mut emit);
            }
            if rules.contains(&Rule::Sequence) {
                sequences(children, &mut emit);
            }
        }
        Node::Choice(branches) if rules.contains(&Rule::Choice) => {
            for i in 0..branches.len() {
                emit(Rule::Choice, StepDetail::Choice { kept: vec![i] }, branches[i].clone());
            }
            if branches.len() > 2 {
                for i in 0..branches.len() {
                    let kept: Vec<usize> = (0..branches.len()).filter(|&j| j != i).collect();
                    let rest = kept.iter().map(|&j| branches[j].clone()).collect();
                    emit(Rule::Choice, StepDetail::Choice { kept }, Node::choice(rest));
                }
            }
        }
        Node::Exists(x, body) if rules.contains(&Rule::Exists) => {
            for a in u.names() {
                emit(
                    Rule::Exists,
                    StepDetail::Exists {
                        variable: x.clone(),
                        name: a.clone(),
                    },
                    body.substitute(x, a),
                );
            }
        }
        _ => {}
    }
    for (i, child) in here.children().iter().enumerate() {
        path.push(i);
        visit(root, child, path, u, rules, out);
        path.pop();
    }
}

fn interactions(children: &[Node], emit: &mut impl FnMut(Rule, StepDetail, Node)) {
    for (i, a) in children.iter().enumerate() {
        let Node::Lit(id, stored) = a else { continue };
        if stored.polarity != Polarity::Stored || !stored.is_ground() {
            continue;
        }
        for (j, b) in children.iter().enumerate() {
            let Node::Lit(_, consume) = b else { continue };
            if consume.polarity != Polarity::Consume || consume.tuple != stored.tuple {
                continue;
            }
            let mut rest: Vec<Node> = children
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, n)| n.clone())
                .collect();
            rest.push(Node::Lit(*id, Label::artefact(stored.tuple.clone())));
            emit(
                Rule::Interact,
                StepDetail::Interact {
                    tuple: stored.tuple.clone(),
                    stored: i,
                    consume: j,
                },
                Node::par(rest),
            );
        }
    }
}

/// A group of parallel children read as a sequence: the elements of a lone
/// sequential child, or the whole group as one element (padding with unit).
fn as_sequence(children: &[Node], group: &[usize]) -> Vec<Node> {
    if let [only] = group {
        if let Node::Seq(parts) = &children[*only] {
            return parts.clone();
        }
    }
    vec![Node::par(group.iter().map(|&i| children[i].clone()).collect())]
}

fn sequences(children: &[Node], emit: &mut impl FnMut(Rule, StepDetail, Node)) {
    let n = children.len();
    let mut assignment = vec![0u8; n];
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        for slot in assignment.iter_mut() {
            *slot = (c % 3) as u8;
            c /= 3;
        }
        let left: Vec<usize> = (0..n).filter(|&i| assignment[i] == 1).collect();
        let right: Vec<usize> = (0..n).filter(|&i| assignment[i] == 2).collect();
        // Each unordered pair of sides once.
        if left.is_empty() || right.is_empty() || left[0] > right[0] {
            continue;
        }
        let rest: Vec<Node> = (0..n).filter(|&i| assignment[i] == 0).map(|i| children[i].clone()).collect();
        let ls = as_sequence(children, &left);
        let rs = as_sequence(children, &right);
        for j in 0..=ls.len() {
            for k in 0..=rs.len() {
                if (j == 0 && k == 0) || (j == ls.len() && k == rs.len()) {
                    continue;
                }
                let first = Node::par(vec![Node::seq(ls[..j].to_vec()), Node::seq(rs[..k].to_vec())]);
                let second = Node::par(vec![Node::seq(ls[j..].to_vec()), Node::seq(rs[k..].to_vec())]);
                let mut parts = rest.clone();
                parts.push(Node::seq(vec![first, second]));
                emit(
                    Rule::Sequence,
                    StepDetail::Sequence {
                        left: left.clone(),
                        left_split: j,
                        right: right.clone(),
                        right_split: k,
                    },
                    Node::par(parts),
                );
            }
        }
    }
}

fn public(p: &Process, u: &Universe, rules: &[Rule]) -> Vec<Step> {
    redexes(&Node::from_process(p), u, rules).iter().map(Redex::to_step).collect()
}

/// Every merge of a parallel stored/consume pair of the same ground tuple.
pub fn step_interact(p: &Process) -> Vec<Step> {
    public(p, &Universe::default(), &[Rule::Interact])
}

/// Every way of splitting two groups of parallel siblings into before and
/// after parts, padding with at most one unit per side.
pub fn step_sequence(p: &Process) -> Vec<Step> {
    public(p, &Universe::default(), &[Rule::Sequence])
}

pub fn step_choice(p: &Process) -> Vec<Step> {
    public(p, &Universe::default(), &[Rule::Choice])
}

/// Instantiations of each quantifier with each name of `u`.
pub fn step_exists(p: &Process, u: &Universe) -> Vec<Step> {
    public(p, u, &[Rule::Exists])
}

const ALL_RULES: [Rule; 4] = [Rule::Interact, Rule::Sequence, Rule::Choice, Rule::Exists];

/// All steps, keeping one per (rule, result up to congruence) and dropping
/// steps whose result is congruent to the source.
pub fn step_all(p: &Process, u: &Universe) -> Vec<Step> {
    let own = canonical_key(p);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in redexes(&Node::from_process(p), u, &ALL_RULES) {
        let step = r.to_step();
        let key = canonical_key(&step.result);
        if key != own && seen.insert((step.rule, key)) {
            out.push(step);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::congruent;
    use crate::syntax::parse_process;
    use crate::terms::Name;

    fn p(text: &str) -> Process {
        parse_process(text).unwrap()
    }

    #[test]
    fn interact_examples() {
        let steps = step_interact(&p("*[d] | [d]"));
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].result, p("#[d]"));
        assert!(step_interact(&p("*[d] ; [d]")).is_empty());
        let steps = step_interact(&p("*[d] | [d] | [d]"));
        assert_eq!(steps.len(), 2);
        assert!(steps.iter().all(|s| congruent(&s.result, &p("#[d] | [d]"))));
    }

    #[test]
    fn sequence_examples() {
        let steps = step_sequence(&p("([a] ; [b]) | ([c] ; [e])"));
        assert!(steps.iter().any(|s| congruent(&s.result, &p("([a] | [c]) ; ([b] | [e])"))));
        let steps = step_sequence(&p("*[d] | ([q] ; [e])"));
        assert!(steps.iter().any(|s| congruent(&s.result, &p("(*[d] | [q]) ; [e]"))));
        assert!(step_sequence(&p("[a] ; [b]")).is_empty());
    }

    #[test]
    fn sequence_keeps_sides_sequential() {
        let got: BTreeSet<Vec<u8>> = step_sequence(&p("(*[a] ; *[b]) | [c]"))
            .iter()
            .map(|s| canonical_key(&s.result))
            .collect();
        let want: BTreeSet<Vec<u8>> = ["[c] ; *[a] ; *[b]", "*[a] ; *[b] ; [c]", "*[a] ; (*[b] | [c])", "(*[a] | [c]) ; *[b]"]
            .iter()
            .map(|t| canonical_key(&p(t)))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn choice_and_exists_examples() {
        let steps = step_choice(&p("[a] + [b]"));
        let results: Vec<Process> = steps.into_iter().map(|s| s.result).collect();
        assert_eq!(results, vec![p("[a]"), p("[b]")]);
        let u = Universe::new([Name::new("tate")]);
        let steps = step_exists(&p("ex ?x. [?x]"), &u);
        assert_eq!(steps.len(), 1);
        assert_eq!(steps[0].result, p("[tate]"));
    }

    #[test]
    fn terminal_states_have_no_steps() {
        let u = Universe::default();
        assert!(step_all(&Process::Unit, &u).is_empty());
        assert!(step_all(&p("#[d]"), &u).is_empty());
    }
}
