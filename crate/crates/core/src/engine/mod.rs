//! Operational semantics. A step rewrites a rule's conclusion into its
//! premise, so every state reached from `q` entails `q`; `run` explores
//! evolutions of a system and `yields` searches for a derivation.

mod node;
mod run;
mod steps;
mod yields;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::canonical_key;
use crate::denotation::Universe;
use crate::terms::{Name, Process, Tuple, Variable};

pub use run::{run, RunReport, Strategy, Terminal};
pub use steps::{step_all, step_choice, step_exists, step_interact, step_sequence};
pub use yields::yields;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Interact,
    Sequence,
    Choice,
    Exists,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Interact => "interact",
            Rule::Sequence => "sequence",
            Rule::Choice => "choice",
            Rule::Exists => "exists",
        })
    }
}

/// Rule-specific data. Indices refer to the children of the node at the
/// step's position, in the flattened form where nested `|`, `;` and `+`
/// are merged and units dropped.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StepDetail {
    /// Children `stored` and `consume` of a parallel node become `#d`.
    Interact { tuple: Tuple, stored: usize, consume: usize },
    /// `(P;P') | (Q;Q')` to `(P|Q);(P'|Q')`: `left` and `right` are the
    /// parallel children forming the two sides, each read as a sequence
    /// and cut after `left_split` and `right_split` elements.
    Sequence {
        left: Vec<usize>,
        left_split: usize,
        right: Vec<usize>,
        right_split: usize,
    },
    /// The branches of the sum that are kept.
    Choice { kept: Vec<usize> },
    Exists { variable: Variable, name: Name },
}

impl fmt::Display for StepDetail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[usize]| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        match self {
            StepDetail::Interact { tuple, stored, consume } => write!(f, "{tuple} stored={stored} consume={consume}"),
            StepDetail::Sequence {
                left,
                left_split,
                right,
                right_split,
            } => write!(f, "left={{{}}}/{left_split} right={{{}}}/{right_split}", list(left), list(right)),
            StepDetail::Choice { kept } => write!(f, "kept={{{}}}", list(kept)),
            StepDetail::Exists { variable, name } => write!(f, "{variable}:={name}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub rule: Rule,
    /// Child indices from the root of the flattened term.
    pub position: Vec<usize>,
    pub detail: StepDetail,
    pub result: Process,
}

pub fn format_position(position: &[usize]) -> String {
    if position.is_empty() {
        "root".to_string()
    } else {
        position.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {} [{}] => {}",
            self.rule,
            format_position(&self.position),
            self.detail,
            self.result
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub initial: Process,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn new(initial: Process) -> Self {
        Trace {
            initial,
            steps: Vec::new(),
        }
    }

    pub fn last_state(&self) -> &Process {
        self.steps.last().map_or(&self.initial, |s| &s.result)
    }

    /// Re-derives every step from its predecessor and returns the final
    /// state.
    pub fn replay(&self, u: &Universe) -> Result<Process, EngineError> {
        let mut current = self.initial.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let key = canonical_key(&step.result);
            // `step_all` omits steps that end where they start, such as
            // instantiating a vacuous quantifier.
            let found = key == canonical_key(&current)
                || step_all(&current, u)
                .into_iter()
                .any(|s| s.rule == step.rule && canonical_key(&s.result) == key);
            if !found {
                return Err(EngineError::Invariant(format!("step {i} ({}) does not follow from its source", step.rule)));
            }
            current = step.result.clone();
        }
        Ok(current)
    }
}

/// Search limits.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Bounds {
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_states: 10_000,
            max_depth: 64,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum EngineError {
    #[error("search bound exceeded after {states} states")]
    BoundExceeded {
        states: usize,
        /// Terminals found before the bound was hit, for `run`.
        partial: Option<Box<RunReport>>,
    },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
