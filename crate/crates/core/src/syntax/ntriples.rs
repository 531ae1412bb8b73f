use std::fmt::Write;

use super::labels::BlankLabels;
use crate::rdf::{Graph, Term};

pub(crate) fn write(graph: &Graph) -> String {
    let labels = BlankLabels::new(graph);
    let term = |t: &Term| match t {
        Term::Blank(b) => format!("_:{}", labels.get(b)),
        other => other.to_string(),
    };
    let mut out = String::new();
    for t in graph {
        writeln!(out, "{} <{}> {} .", term(t.subject()), t.predicate(), term(t.object())).expect("write to String");
    }
    out
}
