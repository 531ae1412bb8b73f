//! Flattened JSON-LD: one `@context` built from the graph's prefixes and a
//! `@graph` array holding one node object per subject.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde_json::{json, Map, Value};

use super::labels::BlankLabels;
use super::SyntaxError;
use crate::rdf::vocab::rdf;
use crate::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};

pub(crate) fn write(graph: &Graph) -> String {
    let labels = BlankLabels::new(graph);
    let context = Context::for_graph(graph);

    let mut nodes: BTreeMap<&Term, Map<String, Value>> = BTreeMap::new();
    for t in graph {
        let node = nodes.entry(t.subject()).or_insert_with(|| {
            let mut m = Map::new();
            m.insert("@id".into(), Value::String(context.node_ref(t.subject(), &labels)));
            m
        });
        let (key, value) = match t.object() {
            Term::Iri(_) | Term::Blank(_) if t.predicate().as_str() == rdf::TYPE => {
                ("@type".to_owned(), Value::String(context.node_ref(t.object(), &labels)))
            }
            Term::Iri(_) | Term::Blank(_) => (
                context.compact(t.predicate()),
                json!({ "@id": context.node_ref(t.object(), &labels) }),
            ),
            Term::Literal(lit) => (context.compact(t.predicate()), literal_value(lit, &context)),
        };
        match node.entry(key).or_insert_with(|| Value::Array(Vec::new())) {
            Value::Array(values) => values.push(value),
            _ => unreachable!("values are always arrays"),
        }
    }

    let doc = json!({
        "@context": Value::Object(context.terms.iter().map(|(p, ns)| (p.clone(), Value::String(ns.clone()))).collect()),
        "@graph": nodes.into_values().map(Value::Object).collect::<Vec<_>>(),
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
    out.push('\n');
    out
}

fn literal_value(lit: &Literal, context: &Context) -> Value {
    let mut m = Map::new();
    m.insert("@value".into(), Value::String(lit.lexical().to_owned()));
    if let Some(lang) = lit.language() {
        m.insert("@language".into(), Value::String(lang.to_owned()));
    } else if let Some(dt) = lit.datatype() {
        m.insert("@type".into(), Value::String(context.compact(dt)));
    }
    Value::Object(m)
}

struct Context {
    terms: BTreeMap<String, String>,
}

impl Context {
    /// Prefixes usable as JSON-LD compact-IRI prefixes. A prefix that equals
    /// the scheme of some IRI in the graph is dropped, since that IRI written
    /// in full would otherwise be read back as a compact IRI.
    fn for_graph(graph: &Graph) -> Self {
        let schemes: BTreeSet<&str> = graph
            .iter()
            .flat_map(Triple::terms)
            .filter_map(|t| match t {
                Term::Iri(iri) => Some(iri),
                Term::Literal(lit) => lit.datatype(),
                Term::Blank(_) => None,
            })
            .filter_map(|iri| iri.as_str().split_once(':').map(|(scheme, _)| scheme))
            .collect();
        let terms = graph
            .prefixes()
            .iter()
            .filter(|(p, _)| {
                !p.is_empty() && *p != "_" && !p.starts_with('@') && !p.contains(':') && !schemes.contains(p.as_str())
            })
            .map(|(p, ns)| (p.clone(), ns.as_str().to_owned()))
            .collect();
        Context { terms }
    }

    fn compact(&self, iri: &Iri) -> String {
        self.terms
            .iter()
            .filter_map(|(prefix, ns)| {
                let local = iri.as_str().strip_prefix(ns.as_str())?;
                (!local.starts_with("//")).then_some((ns.len(), prefix, local))
            })
            .max_by_key(|(len, prefix, _)| (*len, std::cmp::Reverse(*prefix)))
            .map(|(_, prefix, local)| format!("{prefix}:{local}"))
            .unwrap_or_else(|| iri.as_str().to_owned())
    }

    fn node_ref(&self, term: &Term, labels: &BlankLabels<'_>) -> String {
        match term {
            Term::Iri(iri) => self.compact(iri),
            Term::Blank(b) => format!("_:{}", labels.get(b)),
            Term::Literal(_) => unreachable!("literals are not node references"),
        }
    }
}

// ---- reader -----------------------------------------------------------------

fn unsupported(msg: impl Into<String>) -> SyntaxError {
    SyntaxError::Unsupported(msg.into())
}

struct Reader {
    context: HashMap<String, String>,
    blanks: HashMap<String, BlankNode>,
    graph: Graph,
}

/// Reads the flattened shape produced by [`write`].
pub(crate) fn read(source: &str) -> Result<Graph, SyntaxError> {
    let doc: Value = serde_json::from_str(source).map_err(|e| unsupported(format!("invalid JSON: {e}")))?;
    let Value::Object(doc) = doc else {
        return Err(unsupported("top-level JSON-LD value must be an object"));
    };
    let mut reader = Reader {
        context: HashMap::new(),
        blanks: HashMap::new(),
        graph: Graph::new(),
    };
    for key in doc.keys() {
        if key != "@context" && key != "@graph" {
            return Err(unsupported(format!("top-level key {key:?}")));
        }
    }
    if let Some(ctx) = doc.get("@context") {
        let Value::Object(ctx) = ctx else {
            return Err(unsupported("@context must be an object"));
        };
        for (prefix, ns) in ctx {
            let Value::String(ns) = ns else {
                return Err(unsupported(format!("context term {prefix:?} must map to a string")));
            };
            let iri = Iri::new(ns.clone()).map_err(|e| unsupported(e.to_string()))?;
            reader.context.insert(prefix.clone(), ns.clone());
            reader.graph.set_prefix(prefix.clone(), iri);
        }
    }
    let nodes = match doc.get("@graph") {
        Some(Value::Array(nodes)) => nodes.as_slice(),
        Some(_) => return Err(unsupported("@graph must be an array")),
        None => &[],
    };
    for node in nodes {
        reader.node(node)?;
    }
    Ok(reader.graph)
}

impl Reader {
    fn expand(&self, value: &str) -> Result<Iri, SyntaxError> {
        if let Some((prefix, local)) = value.split_once(':') {
            if let Some(ns) = self.context.get(prefix) {
                if !local.starts_with("//") {
                    return Iri::new(format!("{ns}{local}")).map_err(|e| unsupported(e.to_string()));
                }
            }
        }
        Iri::new(value).map_err(|e| unsupported(e.to_string()))
    }

    fn node_ref(&mut self, value: &str) -> Result<Term, SyntaxError> {
        if let Some(label) = value.strip_prefix("_:") {
            let next = self.blanks.len();
            let b = self
                .blanks
                .entry(label.to_owned())
                .or_insert_with(|| BlankNode::new(format!("j{next}")).expect("non-empty label"));
            return Ok(Term::Blank(b.clone()));
        }
        self.expand(value).map(Term::Iri)
    }

    fn emit(&mut self, s: &Term, p: Iri, o: Term) -> Result<(), SyntaxError> {
        let t = Triple::new(s.clone(), p, o).map_err(|e| unsupported(e.to_string()))?;
        self.graph.insert(t);
        Ok(())
    }

    fn node(&mut self, node: &Value) -> Result<(), SyntaxError> {
        let Value::Object(node) = node else {
            return Err(unsupported("@graph entries must be node objects"));
        };
        let Some(Value::String(id)) = node.get("@id") else {
            return Err(unsupported("node object without a string @id"));
        };
        let subject = self.node_ref(id)?;
        for (key, values) in node {
            if key == "@id" {
                continue;
            }
            let values = match values {
                Value::Array(v) => v.as_slice(),
                single => std::slice::from_ref(single),
            };
            if key == "@type" {
                for v in values {
                    let Value::String(ty) = v else {
                        return Err(unsupported("@type values must be strings"));
                    };
                    let object = self.node_ref(ty)?;
                    self.emit(&subject, Iri::from_static(rdf::TYPE), object)?;
                }
                continue;
            }
            if key.starts_with('@') {
                return Err(unsupported(format!("keyword {key:?} in node object")));
            }
            let predicate = self.expand(key)?;
            for v in values {
                let object = self.value(v)?;
                self.emit(&subject, predicate.clone(), object)?;
            }
        }
        Ok(())
    }

    fn value(&mut self, value: &Value) -> Result<Term, SyntaxError> {
        let Value::Object(obj) = value else {
            return Err(unsupported(format!("property value {value} is not a value or node reference")));
        };
        if let Some(Value::String(id)) = obj.get("@id") {
            if obj.len() != 1 {
                return Err(unsupported("embedded node objects"));
            }
            return self.node_ref(id);
        }
        let Some(Value::String(lexical)) = obj.get("@value") else {
            return Err(unsupported("value object without a string @value"));
        };
        let literal = match (obj.get("@language"), obj.get("@type")) {
            (Some(Value::String(lang)), None) => Literal::lang(lexical.clone(), lang),
            (None, Some(Value::String(dt))) => Literal::typed(lexical.clone(), self.expand(dt)?),
            (None, None) => Literal::plain(lexical.clone()),
            _ => return Err(unsupported("value object with unsupported @language/@type combination")),
        };
        if obj.keys().any(|k| !matches!(k.as_str(), "@value" | "@language" | "@type")) {
            return Err(unsupported("extra keys in value object"));
        }
        Ok(Term::Literal(literal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::isomorphic;
    use crate::syntax::parse_turtle;

    #[test]
    fn flattened_shape() {
        let g = parse_turtle(
            "@prefix ex: <http://x/> . ex:a a ex:C ; ex:p [ ex:q \"v\"@en ] ; ex:n 3 .",
            None,
        )
        .unwrap();
        let out = write(&g);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["@context"]["ex"], "http://x/");
        let nodes = doc["@graph"].as_array().unwrap();
        assert_eq!(nodes.len(), 2);
        assert_eq!(nodes[0]["@id"], "ex:a");
        assert_eq!(nodes[0]["@type"][0], "ex:C");
        assert_eq!(nodes[0]["ex:p"][0]["@id"], "_:b0");
        assert_eq!(nodes[0]["ex:n"][0]["@type"], "http://www.w3.org/2001/XMLSchema#integer");
        assert!(isomorphic(&g, &read(&out).unwrap()).unwrap());
    }

    #[test]
    fn prefix_colliding_with_scheme_is_not_used() {
        let mut g = parse_turtle("<urn:a> <http://x/p> <urn:b> .", None).unwrap();
        g.set_prefix("urn", Iri::new("http://y/").unwrap());
        let out = write(&g);
        assert!(!out.contains("\"urn\":"), "{out}");
        assert!(isomorphic(&g, &read(&out).unwrap()).unwrap());
    }

    #[test]
    fn rejects_foreign_shapes() {
        assert!(read("[]").is_err());
        assert!(read(r#"{"@graph": [{"@id": "http://x/a", "http://x/p": "bare string"}]}"#).is_err());
        assert!(read(r#"{"@graph": [{"@id": "http://x/a", "http://x/p": [{"@id": "http://x/b", "http://x/q": []}]}]}"#).is_err());
        assert!(read(r#"{"@graph": [], "@id": "x"}"#).is_err());
    }
}
