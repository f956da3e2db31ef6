//! Seeded random terms for property tests and the batch suites.
//!
//! Tuples are drawn from a deliberately small vocabulary so that stored
//! and consume literals collide often enough to interact.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::denotation::Universe;
use crate::engine::step_all;
use crate::terms::{Atom, Label, Name, Polarity, Process, Tuple, Variable};

pub struct Generator {
    rng: ChaCha8Rng,
    names: Vec<Name>,
    fresh: usize,
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator::with_names(seed, ["a", "b", "c"].map(Name::new).to_vec())
    }

    pub fn with_names(seed: u64, names: Vec<Name>) -> Self {
        assert!(!names.is_empty(), "need at least one name");
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            names,
            fresh: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn variable(&mut self) -> Variable {
        self.fresh += 1;
        Variable::new(format!("v{}", self.fresh))
    }

    fn tuple(&mut self, scope: &[Variable]) -> Tuple {
        let arity = if self.rng.gen_bool(0.8) { 1 } else { 2 };
        let atoms = (0..arity)
            .map(|_| {
                if !scope.is_empty() && self.rng.gen_bool(0.5) {
                    Atom::Var(scope.choose(&mut self.rng).expect("nonempty").clone())
                } else {
                    Atom::Name(self.names.choose(&mut self.rng).expect("nonempty").clone())
                }
            })
            .collect();
        Tuple::new(atoms)
    }

    fn literal(&mut self, polarity: Polarity, scope: &[Variable]) -> Process {
        let t = self.tuple(scope);
        Process::lit(Label::new(polarity, t))
    }

    fn polarity(&mut self) -> Polarity {
        *[Polarity::Stored, Polarity::Consume, Polarity::Artefact]
            .choose(&mut self.rng)
            .expect("nonempty")
    }

    /// Joins parts by a random binary tree of the given operators.
    fn combine(&mut self, mut parts: Vec<Process>, ops: &[fn(Process, Process) -> Process]) -> Process {
        if parts.is_empty() {
            return Process::Unit;
        }
        while parts.len() > 1 {
            let i = self.rng.gen_range(0..parts.len() - 1);
            let a = parts.remove(i);
            let b = parts.remove(i);
            let op = ops.choose(&mut self.rng).expect("nonempty");
            parts.insert(i, op(a, b));
        }
        parts.pop().expect("one part left")
    }

    /// A ground series-parallel term with 1..=`max_literals` literals.
    pub fn sp_term(&mut self, max_literals: usize) -> Process {
        let n = self.rng.gen_range(1..=max_literals.max(1));
        let parts = (0..n)
            .map(|_| {
                let p = self.polarity();
                self.literal(p, &[])
            })
            .collect();
        self.combine(parts, &[Process::seq, Process::par])
    }

    /// A closed system term: stored data, artefacts and updates composed
    /// in sequence and parallel. Counts literals in both branches of a
    /// choice.
    pub fn system(&mut self, max_literals: usize, max_binders: usize) -> Process {
        let mut budget = self.rng.gen_range(1..=max_literals.max(1));
        let mut binders = self.rng.gen_range(0..=max_binders);
        let mut parts = Vec::new();
        while budget > 0 {
            let roll = self.rng.gen_range(0..10);
            if roll < 3 {
                parts.push(self.literal(Polarity::Stored, &[]));
                budget -= 1;
            } else if roll < 4 {
                parts.push(self.literal(Polarity::Artefact, &[]));
                budget -= 1;
            } else {
                let size = self.rng.gen_range(1..=budget);
                let k = if binders > 0 { self.rng.gen_range(0..=binders.min(2)) } else { 0 };
                binders -= k;
                budget -= size;
                parts.push(self.update(size, k));
            }
        }
        self.combine(parts, &[Process::seq, Process::par])
    }

    /// `ex vs. Q ; D` with `size` literals, or a plain query when all
    /// literals go to `Q`.
    fn update(&mut self, size: usize, binders: usize) -> Process {
        let scope: Vec<Variable> = (0..binders).map(|_| self.variable()).collect();
        let body = if size >= 2 && self.rng.gen_bool(0.25) {
            let left = self.rng.gen_range(1..size);
            let a = self.update_body(left, &scope, true);
            let b = self.update_body(size - left, &scope, true);
            Process::choice(a, b)
        } else {
            self.update_body(size, &scope, false)
        };
        scope.into_iter().rev().fold(body, |acc, x| Process::exists(x, acc))
    }

    /// Under a choice both branches must be updates, so an empty data
    /// part is kept as `Q ; 1`.
    fn update_body(&mut self, size: usize, scope: &[Variable], keep_seq: bool) -> Process {
        let q = self.rng.gen_range(1..=size);
        let query: Vec<Process> = (0..q).map(|_| self.literal(Polarity::Consume, scope)).collect();
        let data: Vec<Process> = (q..size).map(|_| self.literal(Polarity::Stored, scope)).collect();
        let query = self.combine(query, &[Process::par]);
        if data.is_empty() && !keep_seq {
            query
        } else {
            Process::seq(query, Process::par_all(data))
        }
    }

    /// An arbitrary closed term over every constructor.
    pub fn term(&mut self, max_literals: usize, max_binders: usize) -> Process {
        let n = self.rng.gen_range(0..=max_literals);
        self.term_of(n, max_binders, &[])
    }

    fn term_of(&mut self, n: usize, binders: usize, scope: &[Variable]) -> Process {
        if binders > 0 && self.rng.gen_bool(0.3) {
            let x = self.variable();
            let mut inner = scope.to_vec();
            inner.push(x.clone());
            return Process::exists(x, self.term_of(n, binders - 1, &inner));
        }
        match n {
            0 => Process::Unit,
            1 if self.rng.gen_bool(0.9) => {
                let p = self.polarity();
                self.literal(p, scope)
            }
            _ => {
                let left = self.rng.gen_range(0..=n);
                let split = self.rng.gen_range(0..=binders);
                let a = self.term_of(left, split, scope);
                let b = self.term_of(n - left, binders - split, scope);
                match self.rng.gen_range(0..5) {
                    0 | 1 => Process::seq(a, b),
                    2 | 3 => Process::par(a, b),
                    _ => Process::choice(a, b),
                }
            }
        }
    }

    /// A random walk of up to `steps` evolution steps from `q`. The last
    /// state `p` then yields `q`.
    pub fn evolve(&mut self, q: &Process, steps: usize) -> Process {
        let u = Universe::for_terms(&[q], &[]);
        let mut p = q.clone();
        for _ in 0..steps {
            let next = step_all(&p, &u);
            match next.choose(&mut self.rng) {
                Some(s) => p = s.result.clone(),
                None => break,
            }
        }
        p
    }

    /// Small local edit: flips a literal's polarity, swaps `;` and `|`,
    /// or renames a tuple.
    pub fn perturb(&mut self, p: &Process) -> Process {
        let sites = count_sites(p);
        if sites == 0 {
            return p.clone();
        }
        let target = self.rng.gen_range(0..sites);
        let mut seen = 0;
        self.edit(p, target, &mut seen)
    }

    fn edit(&mut self, p: &Process, target: usize, seen: &mut usize) -> Process {
        let here = *seen;
        let site = matches!(p, Process::Literal(_) | Process::Seq(..) | Process::Par(..));
        if site {
            *seen += 1;
        }
        if site && here == target {
            return match p {
                Process::Literal(l) => {
                    if self.rng.gen_bool(0.5) {
                        let others: Vec<Polarity> = [Polarity::Stored, Polarity::Consume, Polarity::Artefact]
                            .into_iter()
                            .filter(|&q| q != l.polarity)
                            .collect();
                        let polarity = *others.choose(&mut self.rng).expect("two others");
                        Process::lit(Label::new(polarity, l.tuple.clone()))
                    } else {
                        let scope: Vec<Variable> = l.tuple.variables().cloned().collect();
                        let t = self.tuple(&scope);
                        Process::lit(Label::new(l.polarity, t))
                    }
                }
                Process::Seq(a, b) => Process::par((**a).clone(), (**b).clone()),
                Process::Par(a, b) => Process::seq((**a).clone(), (**b).clone()),
                _ => unreachable!(),
            };
        }
        match p {
            Process::Unit | Process::Literal(_) => p.clone(),
            Process::Seq(a, b) => Process::seq(self.edit(a, target, seen), self.edit(b, target, seen)),
            Process::Par(a, b) => Process::par(self.edit(a, target, seen), self.edit(b, target, seen)),
            Process::Choice(a, b) => Process::choice(self.edit(a, target, seen), self.edit(b, target, seen)),
            Process::Exists(x, body) => Process::exists(x.clone(), self.edit(body, target, seen)),
        }
    }
}

fn count_sites(p: &Process) -> usize {
    match p {
        Process::Unit => 0,
        Process::Literal(_) => 1,
        Process::Seq(a, b) | Process::Par(a, b) => 1 + count_sites(a) + count_sites(b),
        Process::Choice(a, b) => count_sites(a) + count_sites(b),
        Process::Exists(_, body) => count_sites(body),
    }
}
