use std::fmt;

use crate::terms::{Label, Process, Valuation, Variable};

/// A choice-free, quantifier-free term in flattened form. Values built with
/// [`SpTerm::seq`] and [`SpTerm::par`] are canonical: no units inside
/// compositions, no directly nested `Seq` in `Seq` or `Par` in `Par`, at
/// least two children per composition, and `Par` children sorted by the
/// derived order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SpTerm {
    Unit,
    Lit(Label),
    Seq(Vec<SpTerm>),
    Par(Vec<SpTerm>),
}

impl SpTerm {
    pub fn seq(parts: Vec<SpTerm>) -> SpTerm {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                SpTerm::Unit => {}
                SpTerm::Seq(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => SpTerm::Unit,
            1 => out.pop().expect("one element"),
            _ => SpTerm::Seq(out),
        }
    }

    pub fn par(parts: Vec<SpTerm>) -> SpTerm {
        let mut out = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                SpTerm::Unit => {}
                SpTerm::Par(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort();
        match out.len() {
            0 => SpTerm::Unit,
            1 => out.pop().expect("one element"),
            _ => SpTerm::Par(out),
        }
    }

    /// `None` if the term contains a choice or a quantifier.
    pub fn from_process(p: &Process) -> Option<SpTerm> {
        Some(match p {
            Process::Unit => SpTerm::Unit,
            Process::Literal(l) => SpTerm::Lit(l.clone()),
            Process::Seq(a, b) => SpTerm::seq(vec![Self::from_process(a)?, Self::from_process(b)?]),
            Process::Par(a, b) => SpTerm::par(vec![Self::from_process(a)?, Self::from_process(b)?]),
            Process::Choice(..) | Process::Exists(..) => return None,
        })
    }

    pub fn to_process(&self) -> Process {
        match self {
            SpTerm::Unit => Process::Unit,
            SpTerm::Lit(l) => Process::Literal(l.clone()),
            SpTerm::Seq(parts) => Process::seq_all(parts.iter().map(SpTerm::to_process)),
            SpTerm::Par(parts) => Process::par_all(parts.iter().map(SpTerm::to_process)),
        }
    }

    /// Re-establishes the canonical shape after an arbitrary edit.
    pub fn canonical(&self) -> SpTerm {
        match self {
            SpTerm::Unit | SpTerm::Lit(_) => self.clone(),
            SpTerm::Seq(parts) => SpTerm::seq(parts.iter().map(SpTerm::canonical).collect()),
            SpTerm::Par(parts) => SpTerm::par(parts.iter().map(SpTerm::canonical).collect()),
        }
    }

    pub fn labels(&self) -> Vec<&Label> {
        let mut out = Vec::new();
        self.collect_labels(&mut out);
        out
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a Label>) {
        match self {
            SpTerm::Unit => {}
            SpTerm::Lit(l) => out.push(l),
            SpTerm::Seq(parts) | SpTerm::Par(parts) => parts.iter().for_each(|p| p.collect_labels(out)),
        }
    }

    pub fn literal_count(&self) -> usize {
        self.labels().len()
    }

    pub fn variables(&self) -> std::collections::BTreeSet<Variable> {
        self.labels().into_iter().flat_map(|l| l.tuple.variables().cloned()).collect()
    }

    /// Applies a variable-to-variable renaming to every literal; the result
    /// is not re-sorted.
    pub(crate) fn rename(&self, map: &dyn Fn(&Variable) -> Option<Variable>) -> SpTerm {
        match self {
            SpTerm::Unit => SpTerm::Unit,
            SpTerm::Lit(l) => SpTerm::Lit(Label::new(l.polarity, l.tuple.map_vars(map))),
            SpTerm::Seq(parts) => SpTerm::Seq(parts.iter().map(|p| p.rename(map)).collect()),
            SpTerm::Par(parts) => SpTerm::Par(parts.iter().map(|p| p.rename(map)).collect()),
        }
    }

    /// Grounds every literal under `v`.
    pub fn evaluate(&self, v: &Valuation) -> Result<SpTerm, Variable> {
        Ok(match self {
            SpTerm::Unit => SpTerm::Unit,
            SpTerm::Lit(l) => SpTerm::Lit(l.evaluate(v)?),
            SpTerm::Seq(parts) => SpTerm::seq(parts.iter().map(|p| p.evaluate(v)).collect::<Result<_, _>>()?),
            SpTerm::Par(parts) => SpTerm::par(parts.iter().map(|p| p.evaluate(v)).collect::<Result<_, _>>()?),
        })
    }
}

impl fmt::Display for SpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_process().fmt(f)
    }
}
