use std::collections::HashMap;

use crate::rdf::{BlankNode, Graph, Term};

/// Output labels `b0, b1, ...` assigned in order of first appearance in the
/// graph's sorted triple order. Writers use these instead of the stored
/// labels, which may not be valid in every syntax.
pub(crate) struct BlankLabels<'g> {
    labels: HashMap<&'g BlankNode, String>,
}

impl<'g> BlankLabels<'g> {
    pub(crate) fn new(graph: &'g Graph) -> Self {
        let mut labels = HashMap::new();
        for t in graph.iter() {
            for term in [t.subject(), t.object()] {
                if let Term::Blank(b) = term {
                    let next = labels.len();
                    labels.entry(b).or_insert_with(|| format!("b{next}"));
                }
            }
        }
        BlankLabels { labels }
    }

    pub(crate) fn get(&self, b: &BlankNode) -> &str {
        &self.labels[b]
    }
}
