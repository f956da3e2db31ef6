use std::collections::BTreeSet;
use std::fmt;

use super::sp::SpTerm;
use crate::terms::{Process, Variable};

/// `ex x1 .. xn. A1 + .. + Am` with series-parallel summands. Each summand
/// uses a prefix `x1 .. xk` of the binders it needs; the prefix is the
/// longest of those.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalForm {
    pub prefix: Vec<Variable>,
    pub summands: Vec<SpTerm>,
}

impl NormalForm {
    pub fn to_process(&self) -> Process {
        let mut summands = self.summands.iter().map(SpTerm::to_process);
        let first = summands.next().unwrap_or(Process::Unit);
        let sum = summands.fold(first, Process::choice);
        self.prefix.iter().rev().fold(sum, |body, x| Process::exists(x.clone(), body))
    }

    /// Binders of the prefix that occur in summand `i`, in prefix order.
    pub fn binders_of(&self, i: usize) -> Vec<Variable> {
        let used = self.summands[i].variables();
        self.prefix.iter().filter(|x| used.contains(*x)).cloned().collect()
    }

    pub fn key(&self) -> Vec<u8> {
        self.to_string().into_bytes()
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_process().fmt(f)
    }
}

/// Permutation search for canonical binder names is skipped above this
/// many binders in one summand; binders are then numbered by first
/// occurrence in the sorted term, which is still a normal form but no
/// longer identifies all alpha-variants.
const MAX_PERMUTED_BINDERS: usize = 6;

/// Computes the prenex sum-of-series-parallel normal form.
///
/// Quantifiers are distributed into summands, unused binders dropped and the
/// remaining ones named canonically per summand, so quantifier order is not
/// observable in the result.
pub fn normalize(p: &Process) -> NormalForm {
    let mut counter = 0;
    let raw = expand(p, &mut counter);
    let free: BTreeSet<String> = p.free_vars().iter().map(|x| x.as_str().to_string()).collect();
    let mut names = Vec::new();
    let mut next = 1;
    let mut summands: Vec<SpTerm> = Vec::new();
    let mut width = 0;
    for (binders, term) in raw {
        let used = term.variables();
        let binders: Vec<Variable> = binders.into_iter().filter(|x| used.contains(x)).collect();
        while names.len() < binders.len() {
            loop {
                let candidate = format!("x{next}");
                next += 1;
                if !free.contains(&candidate) {
                    names.push(Variable::new(candidate));
                    break;
                }
            }
        }
        width = width.max(binders.len());
        summands.push(canonical_binding(&term, &binders, &names));
    }
    summands.sort();
    summands.dedup();
    NormalForm {
        prefix: names[..width].to_vec(),
        summands,
    }
}

pub fn canonical_key(p: &Process) -> Vec<u8> {
    normalize(p).key()
}

pub fn congruent(p: &Process, q: &Process) -> bool {
    normalize(p) == normalize(q)
}

/// Distributes to a list of (binders, series-parallel term); binders are
/// fresh internal variables that cannot clash with user names.
fn expand(p: &Process, counter: &mut usize) -> Vec<(Vec<Variable>, SpTerm)> {
    let combine = |a: &Process, b: &Process, counter: &mut usize, op: fn(Vec<SpTerm>) -> SpTerm| {
        let left = expand(a, counter);
        let right = expand(b, counter);
        let mut out = Vec::with_capacity(left.len() * right.len());
        for (xa, ta) in &left {
            for (xb, tb) in &right {
                let mut xs = xa.clone();
                xs.extend(xb.iter().cloned());
                out.push((xs, op(vec![ta.clone(), tb.clone()])));
            }
        }
        out
    };
    match p {
        Process::Unit => vec![(Vec::new(), SpTerm::Unit)],
        Process::Literal(l) => vec![(Vec::new(), SpTerm::Lit(l.clone()))],
        Process::Seq(a, b) => combine(a, b, counter, SpTerm::seq),
        Process::Par(a, b) => combine(a, b, counter, SpTerm::par),
        Process::Choice(a, b) => {
            let mut out = expand(a, counter);
            out.extend(expand(b, counter));
            out
        }
        Process::Exists(x, body) => {
            let fresh = Variable::new(format!("%{counter}"));
            *counter += 1;
            let renamed = body.rename_var(x, &fresh);
            let mut out = expand(&renamed, counter);
            for (xs, _) in &mut out {
                xs.insert(0, fresh.clone());
            }
            out
        }
    }
}

/// Names `binders` with `names[..k]` in the order that minimises the
/// resulting canonical term.
fn canonical_binding(term: &SpTerm, binders: &[Variable], names: &[Variable]) -> SpTerm {
    let apply = |order: &[usize]| {
        let map = |x: &Variable| {
            binders
                .iter()
                .position(|b| b == x)
                .map(|i| names[order[i]].clone())
        };
        term.rename(&map).canonical()
    };
    let k = binders.len();
    if k == 0 {
        return term.canonical();
    }
    if k > MAX_PERMUTED_BINDERS {
        let mut order = vec![usize::MAX; k];
        let mut seen = 0;
        for l in term.canonical().labels() {
            for x in l.tuple.variables() {
                if let Some(i) = binders.iter().position(|b| b == x) {
                    if order[i] == usize::MAX {
                        order[i] = seen;
                        seen += 1;
                    }
                }
            }
        }
        return apply(&order);
    }
    let mut order: Vec<usize> = (0..k).collect();
    let mut best = apply(&order);
    while next_permutation(&mut order) {
        let candidate = apply(&order);
        if candidate < best {
            best = candidate;
        }
    }
    best
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}
