use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write;

use super::escape_string;
use super::labels::BlankLabels;
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};

const INDENT: &str = "    ";

pub(crate) fn write(graph: &Graph) -> String {
    let writer = TurtleWriter::new(graph);
    let mut out = String::new();
    for (prefix, ns) in graph.prefixes() {
        writeln!(out, "@prefix {prefix}: <{ns}> .").expect("write to String");
    }
    if !graph.prefixes().is_empty() && !graph.is_empty() {
        out.push('\n');
    }
    for subject in writer.subjects.keys() {
        if let Term::Blank(b) = subject {
            if writer.inline.contains(b) {
                continue;
            }
        }
        out.push_str(&writer.term(subject));
        writer.predicate_list(&mut out, subject, 1);
        out.push_str(" .\n");
    }
    out
}

struct TurtleWriter<'g> {
    graph: &'g Graph,
    labels: BlankLabels<'g>,
    /// Triples grouped by subject, in sorted subject order.
    subjects: BTreeMap<&'g Term, Vec<&'g Triple>>,
    /// Blank nodes written inline as `[ ... ]` at their single use site.
    inline: HashSet<&'g BlankNode>,
}

impl<'g> TurtleWriter<'g> {
    fn new(graph: &'g Graph) -> Self {
        let mut subjects: BTreeMap<&Term, Vec<&Triple>> = BTreeMap::new();
        let mut object_refs: HashMap<&BlankNode, Vec<&Triple>> = HashMap::new();
        for t in graph {
            subjects.entry(t.subject()).or_default().push(t);
            if let Term::Blank(b) = t.object() {
                object_refs.entry(b).or_default().push(t);
            }
        }

        // A blank node can be inlined when it is the object of exactly one
        // triple and following that reference upwards ends at a node that is
        // written normally.
        let parent: HashMap<&BlankNode, &Term> = object_refs
            .iter()
            .filter(|(b, refs)| refs.len() == 1 && refs[0].subject().as_blank() != Some(**b))
            .map(|(b, refs)| (*b, refs[0].subject()))
            .collect();
        let mut in_cycle: HashSet<&BlankNode> = HashSet::new();
        for start in parent.keys() {
            let mut path: Vec<&BlankNode> = vec![start];
            let mut current = *start;
            while let Some(Term::Blank(up)) = parent.get(current) {
                if let Some(idx) = path.iter().position(|p| p == &up) {
                    in_cycle.extend(&path[idx..]);
                    break;
                }
                if !parent.contains_key(up) {
                    break;
                }
                path.push(up);
                current = up;
            }
        }
        let inline = parent.keys().copied().filter(|b| !in_cycle.contains(b)).collect();

        TurtleWriter {
            graph,
            labels: BlankLabels::new(graph),
            subjects,
            inline,
        }
    }

    /// Writes ` p o, o ;\n p o` for `subject`. `depth` is the indentation
    /// level of predicate lines.
    fn predicate_list(&self, out: &mut String, subject: &Term, depth: usize) {
        let Some(triples) = self.subjects.get(subject) else {
            return;
        };
        let mut by_predicate: Vec<(&Iri, Vec<&Term>)> = Vec::new();
        for t in triples {
            match by_predicate.last_mut() {
                Some((p, objects)) if *p == t.predicate() => objects.push(t.object()),
                _ => by_predicate.push((t.predicate(), vec![t.object()])),
            }
        }
        // rdf:type first, then the sorted remainder.
        by_predicate.sort_by_key(|(p, _)| p.as_str() != rdf::TYPE);

        let pad = INDENT.repeat(depth);
        for (i, (predicate, objects)) in by_predicate.iter().enumerate() {
            if i == 0 {
                out.push(' ');
            } else {
                out.push_str(" ;\n");
                out.push_str(&pad);
            }
            if predicate.as_str() == rdf::TYPE {
                out.push('a');
            } else {
                out.push_str(&self.iri(predicate));
            }
            for (j, object) in objects.iter().enumerate() {
                out.push_str(if j == 0 { " " } else { " , " });
                self.object(out, object, depth);
            }
        }
    }

    fn object(&self, out: &mut String, object: &Term, depth: usize) {
        match object {
            Term::Blank(b) if self.inline.contains(b) => {
                if !self.subjects.contains_key(object) {
                    out.push_str("[]");
                    return;
                }
                out.push('[');
                let inner = depth + 1;
                out.push('\n');
                out.push_str(&INDENT.repeat(inner));
                let mut body = String::new();
                self.predicate_list(&mut body, object, inner);
                out.push_str(body.trim_start());
                out.push('\n');
                out.push_str(&INDENT.repeat(depth));
                out.push(']');
            }
            other => out.push_str(&self.term(other)),
        }
    }

    fn term(&self, term: &Term) -> String {
        match term {
            Term::Iri(iri) => self.iri(iri),
            Term::Blank(b) => format!("_:{}", self.labels.get(b)),
            Term::Literal(lit) => self.literal(lit),
        }
    }

    fn iri(&self, iri: &Iri) -> String {
        self.graph
            .prefixes()
            .iter()
            .filter_map(|(prefix, ns)| {
                let local = iri.as_str().strip_prefix(ns.as_str())?;
                is_simple_local(local).then(|| (ns.as_str().len(), prefix, local))
            })
            .max_by_key(|(len, prefix, _)| (*len, std::cmp::Reverse(*prefix)))
            .map(|(_, prefix, local)| format!("{prefix}:{local}"))
            .unwrap_or_else(|| format!("<{iri}>"))
    }

    fn literal(&self, lit: &Literal) -> String {
        let lexical = lit.lexical();
        if let Some(dt) = lit.datatype() {
            let bare = match dt.as_str() {
                xsd::INTEGER => is_canonical_integer(lexical),
                xsd::BOOLEAN => lexical == "true" || lexical == "false",
                _ => false,
            };
            if bare {
                return lexical.to_owned();
            }
            return format!("\"{}\"^^{}", escape_string(lexical), self.iri(dt));
        }
        match lit.language() {
            Some(lang) => format!("\"{}\"@{lang}", escape_string(lexical)),
            None => format!("\"{}\"", escape_string(lexical)),
        }
    }
}

fn is_canonical_integer(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

/// Local names that need no escaping in a prefixed name.
fn is_simple_local(local: &str) -> bool {
    let bytes = local.as_bytes();
    let ok_char = |b: &u8| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'-';
    match (bytes.first(), bytes.last()) {
        (None, _) => true,
        (Some(first), Some(last)) => {
            (first.is_ascii_alphanumeric() || *first == b'_')
                && ok_char(last)
                && bytes.iter().all(|b| ok_char(b) || *b == b'.')
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::isomorphic;
    use crate::syntax::parse_turtle;

    fn round_trip(src: &str) -> String {
        let g = parse_turtle(src, None).unwrap();
        let out = write(&g);
        let back = parse_turtle(&out, None).unwrap_or_else(|d| panic!("{out}\n{d:?}"));
        assert!(isomorphic(&g, &back).unwrap(), "{out}");
        out
    }

    #[test]
    fn restriction_is_written_inline() {
        let out = round_trip(
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
             @prefix : <http://x/> .
             :A a owl:Class ; rdfs:subClassOf :B , [ a owl:Restriction ; owl:onProperty :partOf ; owl:someValuesFrom :R ] .",
        );
        assert!(out.contains(":A a owl:Class ;"), "{out}");
        assert!(out.contains("rdfs:subClassOf :B , [\n"), "{out}");
        assert!(!out.contains("_:"), "{out}");
    }

    #[test]
    fn blank_cycles_use_labels() {
        let out = round_trip("_:a <http://x/p> _:b . _:b <http://x/p> _:a .");
        assert!(out.contains("_:b"), "{out}");
        round_trip("_:a <http://x/p> _:a .");
        round_trip("_:a <http://x/p> _:b . _:b <http://x/p> _:c . _:c <http://x/p> _:b .");
    }

    #[test]
    fn literal_forms() {
        let out = round_trip(
            r#"@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
               <http://x/s> <http://x/p> 42 , -7 , true , "4.5"^^xsd:decimal , "a\nb"@en , "007"^^xsd:integer , "plain" ."#,
        );
        assert!(out.contains(" 42"), "{out}");
        assert!(out.contains("\"4.5\"^^xsd:decimal"), "{out}");
    }

    #[test]
    fn deterministic() {
        let src = "@prefix : <http://x/> . :a :p [ :q :r ] , ( 1 2 ) ; :s \"t\" .";
        let g = parse_turtle(src, None).unwrap();
        assert_eq!(write(&g), write(&g.clone()));
        round_trip(src);
    }

    #[test]
    fn local_name_checks() {
        assert!(is_simple_local("ModelCardReport"));
        assert!(is_simple_local("BFO_0000050"));
        assert!(is_simple_local(""));
        assert!(!is_simple_local("a."));
        assert!(!is_simple_local("a/b"));
        assert!(!is_simple_local("-a"));
    }
}
