//! Single applications of the structural congruence laws, in either
//! direction, at any position of a term.

use std::fmt;

use crate::terms::{Process, Variable};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Axiom {
    /// `1 ; Q = Q`
    SeqUnitLeft,
    /// `Q ; 1 = Q`
    SeqUnitRight,
    /// `Q | 1 = Q`
    ParUnit,
    /// `P | (Q | R) = (P | Q) | R`
    ParAssoc,
    /// `P ; (Q ; R) = (P ; Q) ; R`
    SeqAssoc,
    /// `Q | R = R | Q`
    ParComm,
    /// `(P + Q) + R = P + (Q + R)`
    ChoiceAssoc,
    /// `P + Q = Q + P`
    ChoiceComm,
    /// `P + P = P`
    ChoiceIdem,
    /// `(P + Q) ; R = (P ; R) + (Q ; R)`
    SeqDistLeft,
    /// `P ; (Q + R) = (P ; Q) + (P ; R)`
    SeqDistRight,
    /// `(P + Q) | R = (P | R) + (Q | R)`
    ParDist,
    /// `ex x.(P + Q) = ex x.P + ex x.Q`
    ExistsDist,
    /// `ex x. 1 = 1`
    ExistsUnit,
    /// `ex x.(P | S) = (ex x.P) | S`, x not free in S
    ExtrudePar,
    /// `ex x.(S ; Q) = S ; ex x.Q`, x not free in S
    ExtrudeSeqRight,
    /// `ex x.(P ; S) = (ex x.P) ; S`, x not free in S
    ExtrudeSeqLeft,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    /// Left-hand side rewritten to right-hand side.
    Forward,
    Backward,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomApplication {
    pub axiom: Axiom,
    pub direction: Direction,
    /// Child indices from the root: 0 and 1 for binary nodes, 0 for a
    /// quantifier body.
    pub position: Vec<usize>,
    pub result: Process,
}

/// Variable used when a law introduces a binder (`1` to `ex u. 1`).
const INTRODUCED: &str = "u";

/// Every single-law rewrite of `p` at every position.
pub fn applications(p: &Process) -> Vec<AxiomApplication> {
    let mut out = Vec::new();
    collect(p, &mut Vec::new(), &mut |path, axiom, direction, result| {
        out.push(AxiomApplication {
            axiom,
            direction,
            position: path.to_vec(),
            result,
        })
    });
    out
}

fn collect(p: &Process, path: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize], Axiom, Direction, Process)) {
    for (axiom, direction, result) in root_rewrites(p) {
        emit(path, axiom, direction, result);
    }
    match p {
        Process::Unit | Process::Literal(_) => {}
        Process::Seq(a, b) | Process::Par(a, b) | Process::Choice(a, b) => {
            let rebuild = |a: Process, b: Process| match p {
                Process::Seq(..) => Process::seq(a, b),
                Process::Par(..) => Process::par(a, b),
                _ => Process::choice(a, b),
            };
            path.push(0);
            collect(a, path, &mut |at, ax, d, r| emit(at, ax, d, rebuild(r, (**b).clone())));
            path.pop();
            path.push(1);
            collect(b, path, &mut |at, ax, d, r| emit(at, ax, d, rebuild((**a).clone(), r)));
            path.pop();
        }
        Process::Exists(x, body) => {
            path.push(0);
            collect(body, path, &mut |at, ax, d, r| emit(at, ax, d, Process::exists(x.clone(), r)));
            path.pop();
        }
    }
}

/// Rewrites applicable at the root.
pub fn root_rewrites(p: &Process) -> Vec<(Axiom, Direction, Process)> {
    use Axiom::*;
    use Direction::*;
    use Process as P;
    let mut out = Vec::new();
    let free_in = |x: &Variable, q: &Process| q.free_vars().contains(x);

    // Unit introduction applies to every term.
    out.push((SeqUnitLeft, Backward, P::seq(P::Unit, p.clone())));
    out.push((SeqUnitRight, Backward, P::seq(p.clone(), P::Unit)));
    out.push((ParUnit, Backward, P::par(p.clone(), P::Unit)));
    out.push((ChoiceIdem, Backward, P::choice(p.clone(), p.clone())));

    match p {
        P::Unit => {
            out.push((ExistsUnit, Backward, P::exists(Variable::new(INTRODUCED), P::Unit)));
        }
        P::Literal(_) => {}
        P::Seq(a, b) => {
            if **a == P::Unit {
                out.push((SeqUnitLeft, Forward, (**b).clone()));
            }
            if **b == P::Unit {
                out.push((SeqUnitRight, Forward, (**a).clone()));
            }
            if let P::Seq(q, r) = &**b {
                out.push((SeqAssoc, Forward, P::seq(P::seq((**a).clone(), (**q).clone()), (**r).clone())));
            }
            if let P::Seq(pp, q) = &**a {
                out.push((SeqAssoc, Backward, P::seq((**pp).clone(), P::seq((**q).clone(), (**b).clone()))));
            }
            if let P::Choice(pp, q) = &**a {
                out.push((
                    SeqDistLeft,
                    Forward,
                    P::choice(P::seq((**pp).clone(), (**b).clone()), P::seq((**q).clone(), (**b).clone())),
                ));
            }
            if let P::Choice(q, r) = &**b {
                out.push((
                    SeqDistRight,
                    Forward,
                    P::choice(P::seq((**a).clone(), (**q).clone()), P::seq((**a).clone(), (**r).clone())),
                ));
            }
            if let P::Exists(x, body) = &**b {
                if !free_in(x, a) {
                    out.push((ExtrudeSeqRight, Backward, P::exists(x.clone(), P::seq((**a).clone(), (**body).clone()))));
                }
            }
            if let P::Exists(x, body) = &**a {
                if !free_in(x, b) {
                    out.push((ExtrudeSeqLeft, Backward, P::exists(x.clone(), P::seq((**body).clone(), (**b).clone()))));
                }
            }
        }
        P::Par(a, b) => {
            if **b == P::Unit {
                out.push((ParUnit, Forward, (**a).clone()));
            }
            out.push((ParComm, Forward, P::par((**b).clone(), (**a).clone())));
            if let P::Par(q, r) = &**b {
                out.push((ParAssoc, Forward, P::par(P::par((**a).clone(), (**q).clone()), (**r).clone())));
            }
            if let P::Par(pp, q) = &**a {
                out.push((ParAssoc, Backward, P::par((**pp).clone(), P::par((**q).clone(), (**b).clone()))));
            }
            if let P::Choice(pp, q) = &**a {
                out.push((
                    ParDist,
                    Forward,
                    P::choice(P::par((**pp).clone(), (**b).clone()), P::par((**q).clone(), (**b).clone())),
                ));
            }
            if let P::Exists(x, body) = &**a {
                if !free_in(x, b) {
                    out.push((ExtrudePar, Backward, P::exists(x.clone(), P::par((**body).clone(), (**b).clone()))));
                }
            }
        }
        P::Choice(a, b) => {
            out.push((ChoiceComm, Forward, P::choice((**b).clone(), (**a).clone())));
            if a == b {
                out.push((ChoiceIdem, Forward, (**a).clone()));
            }
            if let P::Choice(pp, q) = &**a {
                out.push((ChoiceAssoc, Forward, P::choice((**pp).clone(), P::choice((**q).clone(), (**b).clone()))));
            }
            if let P::Choice(q, r) = &**b {
                out.push((ChoiceAssoc, Backward, P::choice(P::choice((**a).clone(), (**q).clone()), (**r).clone())));
            }
            match (&**a, &**b) {
                (P::Seq(pp, r1), P::Seq(q, r2)) if r1 == r2 => {
                    out.push((SeqDistLeft, Backward, P::seq(P::choice((**pp).clone(), (**q).clone()), (**r1).clone())));
                }
                _ => {}
            }
            match (&**a, &**b) {
                (P::Seq(p1, q), P::Seq(p2, r)) if p1 == p2 => {
                    out.push((SeqDistRight, Backward, P::seq((**p1).clone(), P::choice((**q).clone(), (**r).clone()))));
                }
                _ => {}
            }
            match (&**a, &**b) {
                (P::Par(pp, r1), P::Par(q, r2)) if r1 == r2 => {
                    out.push((ParDist, Backward, P::par(P::choice((**pp).clone(), (**q).clone()), (**r1).clone())));
                }
                _ => {}
            }
            match (&**a, &**b) {
                (P::Exists(x, pp), P::Exists(y, q)) if x == y => {
                    out.push((ExistsDist, Backward, P::exists(x.clone(), P::choice((**pp).clone(), (**q).clone()))));
                }
                _ => {}
            }
        }
        P::Exists(x, body) => {
            match &**body {
                P::Unit => out.push((ExistsUnit, Forward, P::Unit)),
                P::Choice(pp, q) => out.push((
                    ExistsDist,
                    Forward,
                    P::choice(P::exists(x.clone(), (**pp).clone()), P::exists(x.clone(), (**q).clone())),
                )),
                P::Par(pp, s) if !free_in(x, s) => {
                    out.push((ExtrudePar, Forward, P::par(P::exists(x.clone(), (**pp).clone()), (**s).clone())))
                }
                _ => {}
            }
            if let P::Seq(s, q) = &**body {
                if !free_in(x, s) {
                    out.push((ExtrudeSeqRight, Forward, P::seq((**s).clone(), P::exists(x.clone(), (**q).clone()))));
                }
                if !free_in(x, q) {
                    out.push((ExtrudeSeqLeft, Forward, P::seq(P::exists(x.clone(), (**s).clone()), (**q).clone())));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::canonical_key;
    use crate::syntax::parse_process;

    #[test]
    fn every_application_preserves_the_key() {
        for text in [
            "ex ?x.([mill depiction ?x] ; *[baltic depiction ?x]) | *[mill depiction photo]",
            "([a] + [b]) ; (*[c] | 1)",
            "ex ?x. (ex ?y. [?x ?y] + [?x])",
        ] {
            let p = parse_process(text).unwrap();
            let key = canonical_key(&p);
            let apps = applications(&p);
            assert!(!apps.is_empty());
            for app in apps {
                assert_eq!(canonical_key(&app.result), key, "{:?} at {:?}", app.axiom, app.position);
            }
        }
    }

    #[test]
    fn side_condition_blocks_capture() {
        let p = parse_process("ex ?x.([?x] | *[?x])").unwrap();
        assert!(root_rewrites(&p).iter().all(|(a, _, _)| *a != Axiom::ExtrudePar));
    }
}
