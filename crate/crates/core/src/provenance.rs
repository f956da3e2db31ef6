//! Provenance diagrams read off quiescent states.
//!
//! A quiescent state holds only artefacts and stored data; the order of its
//! literals is the "was derived from" relation. An edge `u -> w` means `u`
//! was derived from `w`. The graph keeps the transitive closure, while
//! drawings show the direct edges (the transitive reduction).

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::congruence::SpTerm;
use crate::denotation::{term_to_dag, DenotationError};
use crate::spdag::LabelledDag;
use crate::terms::{Label, Polarity, Process, Tuple, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProvenanceError {
    #[error("state is not quiescent: {0}")]
    NotQuiescent(String),
    #[error(transparent)]
    Denotation(#[from] DenotationError),
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProvenanceDiagram {
    dag: LabelledDag,
    direct: Vec<(usize, usize)>,
}

pub fn extract(terminal: &Process, v: &Valuation) -> Result<ProvenanceDiagram, ProvenanceError> {
    let sp = SpTerm::from_process(terminal)
        .ok_or_else(|| ProvenanceError::NotQuiescent("choice or quantifier remains".into()))?;
    if let Some(l) = sp.labels().into_iter().find(|l| l.polarity == Polarity::Consume) {
        return Err(ProvenanceError::NotQuiescent(format!("consume literal {l} remains")));
    }
    let dag = term_to_dag(&sp, v)?;
    let order = dag.canonical_order().expect("terms denote series-parallel graphs");
    Ok(ProvenanceDiagram::from_dag(reorder(&dag, &order)))
}

/// Renumbers so that `order[k]` becomes vertex `k`.
fn reorder(dag: &LabelledDag, order: &[usize]) -> LabelledDag {
    let mut perm = vec![0; order.len()];
    for (k, &old) in order.iter().enumerate() {
        perm[old] = k;
    }
    dag.permute(&perm)
}

#[derive(Serialize, Deserialize)]
struct JsonDiagram {
    nodes: Vec<JsonNode>,
    edges: Vec<JsonEdge>,
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: usize,
    kind: String,
    tuple: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    src: usize,
    dst: usize,
    direct: bool,
}

impl ProvenanceDiagram {
    fn from_dag(dag: LabelledDag) -> Self {
        let direct = dag.transitive_reduction();
        ProvenanceDiagram { dag, direct }
    }

    pub fn dag(&self) -> &LabelledDag {
        &self.dag
    }

    pub fn len(&self) -> usize {
        self.dag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dag.is_empty()
    }

    pub fn direct_edges(&self) -> &[(usize, usize)] {
        &self.direct
    }

    /// Transitive "was derived from".
    pub fn derived_from(&self, u: usize, w: usize) -> bool {
        self.dag.has_edge(u, w)
    }

    pub fn to_dot(&self, transitive: bool) -> String {
        let mut out = String::from("digraph provenance {\n  rankdir=LR;\n");
        for (i, l) in self.dag.labels().iter().enumerate() {
            let shape = if l.polarity == Polarity::Artefact { "box" } else { "ellipse" };
            let text = l.to_string().replace('\\', "\\\\").replace('"', "\\\"");
            writeln!(out, "  n{i} [shape={shape}, label=\"{text}\"];").unwrap();
        }
        let edges = if transitive { self.dag.edges() } else { self.direct.clone() };
        for (u, w) in edges {
            writeln!(out, "  n{u} -> n{w};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        let nodes = self
            .dag
            .labels()
            .iter()
            .enumerate()
            .map(|(id, l)| JsonNode {
                id,
                kind: match l.polarity {
                    Polarity::Artefact => "artefact",
                    _ => "stored",
                }
                .to_string(),
                tuple: l.tuple.atoms().iter().map(|a| a.to_string()).collect(),
            })
            .collect();
        let edges = self
            .dag
            .edges()
            .into_iter()
            .map(|(src, dst)| JsonEdge {
                src,
                dst,
                direct: self.direct.contains(&(src, dst)),
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&JsonDiagram { nodes, edges }).expect("serializable");
        s.push('\n');
        s
    }

    /// Reads the format written by [`ProvenanceDiagram::to_json`]. Direct
    /// flags are recomputed rather than trusted.
    pub fn from_json(text: &str) -> Result<Self, ProvenanceError> {
        let raw: JsonDiagram = serde_json::from_str(text).map_err(|e| ProvenanceError::Malformed(e.to_string()))?;
        let mut labels = vec![None; raw.nodes.len()];
        for node in raw.nodes {
            let polarity = match node.kind.as_str() {
                "artefact" => Polarity::Artefact,
                "stored" => Polarity::Stored,
                other => return Err(ProvenanceError::Malformed(format!("unknown node kind `{other}`"))),
            };
            if node.tuple.is_empty() || node.tuple.iter().any(|a| !crate::terms::is_identifier(a)) {
                return Err(ProvenanceError::Malformed(format!("bad tuple on node {}", node.id)));
            }
            let slot = labels
                .get_mut(node.id)
                .ok_or_else(|| ProvenanceError::Malformed(format!("node id {} out of range", node.id)))?;
            *slot = Some(Label::new(polarity, Tuple::ground(&node.tuple)));
        }
        let labels: Vec<Label> = labels
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| ProvenanceError::Malformed("duplicate node id".into()))?;
        let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e.src, e.dst)).collect();
        if edges.iter().any(|&(s, d)| s >= labels.len() || d >= labels.len()) {
            return Err(ProvenanceError::Malformed("edge endpoint out of range".into()));
        }
        let dag = LabelledDag::from_edges(labels, &edges).map_err(|e| ProvenanceError::Malformed(e.to_string()))?;
        Ok(ProvenanceDiagram::from_dag(dag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_process;

    fn diagram(text: &str) -> ProvenanceDiagram {
        extract(&parse_process(text).unwrap(), &Valuation::new()).unwrap()
    }

    #[test]
    fn single_artefact() {
        let d = diagram("#[d]");
        assert_eq!(d.len(), 1);
        assert!(d.direct_edges().is_empty());
        assert!(!d.derived_from(0, 0));
    }

    #[test]
    fn rejects_live_states() {
        let p = parse_process("#[a] | [b]").unwrap();
        assert!(matches!(extract(&p, &Valuation::new()), Err(ProvenanceError::NotQuiescent(_))));
        let p = parse_process("#[a] + *[b]").unwrap();
        assert!(matches!(extract(&p, &Valuation::new()), Err(ProvenanceError::NotQuiescent(_))));
    }

    #[test]
    fn baltic_terminal() {
        let d = diagram("#[mill depiction photo] ; *[baltic depiction photo]");
        assert_eq!(d.len(), 2);
        assert_eq!(d.direct_edges().len(), 1);
        let (src, dst) = d.direct_edges()[0];
        assert_eq!(d.dag().label(src).to_string(), "*[baltic depiction photo]");
        assert_eq!(d.dag().label(dst).to_string(), "#[mill depiction photo]");
    }

    #[test]
    fn empty_json() {
        let d = diagram("1");
        assert_eq!(d.to_json(), "{\n  \"nodes\": [],\n  \"edges\": []\n}\n");
    }

    #[test]
    fn json_round_trip_and_dot_shapes() {
        let d = diagram("(#[a] | *[b]) ; #[c] ; *[e]");
        let back = ProvenanceDiagram::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        let dot = d.to_dot(false);
        assert_eq!(dot.matches("shape=box").count(), 2);
        assert_eq!(dot.matches("shape=ellipse").count(), 2);
        assert_eq!(dot.matches("->").count(), 3);
        assert_eq!(d.to_dot(true).matches("->").count(), 5);
    }
}
