//! RDF/XML.
//!
//! The writer emits one `rdf:Description` per subject with flat property
//! elements. The reader covers the striped syntax commonly produced by
//! ontology editors: typed node elements, nested nodes, property
//! attributes, `rdf:parseType="Resource"` and `"Collection"`, `xml:base`,
//! `xml:lang` and internal DTD entity declarations.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::NsReader;

use super::labels::BlankLabels;
use super::SyntaxError;
use crate::rdf::vocab::rdf;
use crate::rdf::{is_absolute_iri, BlankNode, Graph, Iri, Literal, Term, Triple};

const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

// ---- writer -----------------------------------------------------------------

pub(crate) fn write(graph: &Graph) -> Result<String, SyntaxError> {
    let labels = BlankLabels::new(graph);
    let namespaces = Namespaces::assign(graph)?;

    let mut out = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n<rdf:RDF");
    for (ns, prefix) in namespaces.sorted() {
        write!(out, "\n    xmlns:{prefix}=\"{}\"", escape_attr(ns)).expect("write to String");
    }
    out.push_str(">\n");

    let mut current: Option<&Term> = None;
    for t in graph {
        if current != Some(t.subject()) {
            if current.is_some() {
                out.push_str("  </rdf:Description>\n");
            }
            match t.subject() {
                Term::Iri(iri) => writeln!(out, "  <rdf:Description rdf:about=\"{}\">", escape_attr(iri.as_str())),
                Term::Blank(b) => writeln!(out, "  <rdf:Description rdf:nodeID=\"{}\">", labels.get(b)),
                Term::Literal(_) => unreachable!("literal subject"),
            }
            .expect("write to String");
            current = Some(t.subject());
        }
        let qname = namespaces.qname(t.predicate());
        match t.object() {
            Term::Iri(iri) => writeln!(out, "    <{qname} rdf:resource=\"{}\"/>", escape_attr(iri.as_str())),
            Term::Blank(b) => writeln!(out, "    <{qname} rdf:nodeID=\"{}\"/>", labels.get(b)),
            Term::Literal(lit) => {
                if !lit.lexical().chars().all(is_xml_char) {
                    return Err(SyntaxError::UnrepresentableXml(lit.lexical().to_owned()));
                }
                let attr = match (lit.language(), lit.datatype()) {
                    (Some(lang), _) => format!(" xml:lang=\"{}\"", escape_attr(lang)),
                    (None, Some(dt)) => format!(" rdf:datatype=\"{}\"", escape_attr(dt.as_str())),
                    (None, None) => String::new(),
                };
                writeln!(out, "    <{qname}{attr}>{}</{qname}>", escape_text(lit.lexical()))
            }
        }
        .expect("write to String");
    }
    if current.is_some() {
        out.push_str("  </rdf:Description>\n");
    }
    out.push_str("</rdf:RDF>\n");
    Ok(out)
}

struct Namespaces {
    by_ns: HashMap<String, String>,
}

impl Namespaces {
    fn assign(graph: &Graph) -> Result<Self, SyntaxError> {
        let mut needed: Vec<&str> = Vec::new();
        for t in graph {
            let (ns, _) = split_predicate(t.predicate())?;
            needed.push(ns);
        }
        needed.sort_unstable();
        needed.dedup();

        let mut by_ns = HashMap::from([(rdf::NS.to_owned(), "rdf".to_owned())]);
        let mut used: Vec<String> = vec!["rdf".to_owned()];
        for (prefix, ns) in graph.prefixes() {
            let usable = is_ncname(prefix) && !prefix.to_ascii_lowercase().starts_with("xml") && !used.contains(prefix);
            if usable && needed.contains(&ns.as_str()) && !by_ns.contains_key(ns.as_str()) {
                by_ns.insert(ns.as_str().to_owned(), prefix.clone());
                used.push(prefix.clone());
            }
        }
        let mut counter = 0;
        for ns in needed {
            if by_ns.contains_key(ns) {
                continue;
            }
            let prefix = loop {
                let candidate = format!("ns{counter}");
                counter += 1;
                if !used.contains(&candidate) {
                    break candidate;
                }
            };
            used.push(prefix.clone());
            by_ns.insert(ns.to_owned(), prefix);
        }
        Ok(Namespaces { by_ns })
    }

    fn sorted(&self) -> Vec<(&str, &str)> {
        let sorted: BTreeMap<&str, &str> = self.by_ns.iter().map(|(ns, p)| (p.as_str(), ns.as_str())).collect();
        sorted.into_iter().map(|(p, ns)| (ns, p)).collect()
    }

    fn qname(&self, predicate: &Iri) -> String {
        let (ns, local) = split_predicate(predicate).expect("checked during assignment");
        format!("{}:{local}", self.by_ns[ns])
    }
}

/// Splits a predicate IRI into a namespace and the longest NCName suffix.
fn split_predicate(iri: &Iri) -> Result<(&str, &str), SyntaxError> {
    let s = iri.as_str();
    let mut start = s.len();
    for (idx, c) in s.char_indices().rev() {
        if is_name_char(c) {
            start = idx;
        } else {
            break;
        }
    }
    // The local name must begin with a letter or underscore.
    while let Some(c) = s[start..].chars().next() {
        if is_name_start(c) {
            break;
        }
        start += c.len_utf8();
    }
    if start == s.len() || start == 0 {
        return Err(SyntaxError::UnsplittablePredicate(iri.clone()));
    }
    Ok(s.split_at(start))
}

fn is_name_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '\u{B7}')
}

fn is_ncname(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_name_start) && chars.all(is_name_char)
}

fn is_xml_char(c: char) -> bool {
    matches!(c, '\t' | '\n' | '\r') || (c >= ' ' && c != '\u{FFFE}' && c != '\u{FFFF}')
}

/// XML 1.0 end-of-line handling: `\r\n` and lone `\r` become `\n`.
fn normalize_eol(s: &str) -> String {
    s.replace("\r\n", "\n").replace('\r', "\n")
}

fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\r' => out.push_str("&#13;"),
            '\n' => out.push_str("&#10;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

// ---- reader -----------------------------------------------------------------

/// Parses an RDF/XML document. `base` resolves relative `rdf:about` and
/// `rdf:resource` values when the document declares no `xml:base`.
pub fn parse_rdf_xml(source: &str, base: Option<&str>) -> Result<Graph, SyntaxError> {
    let mut reader = RdfXmlReader {
        graph: Graph::new(),
        entities: HashMap::new(),
        blank_ids: HashMap::new(),
        next_blank: 0,
        stack: Vec::new(),
        base: base.map(str::to_owned),
    };
    reader.run(source)?;
    Ok(reader.graph)
}

#[derive(Debug)]
enum Frame {
    /// Inside `rdf:RDF`.
    Root,
    /// Inside a node element; children are property elements.
    Node { subject: Term },
    /// Inside a property element that may hold text or one node element.
    Property {
        subject: Term,
        predicate: Iri,
        datatype: Option<Iri>,
        text: String,
        has_node: bool,
    },
    /// Property element whose object was given by attributes; must be empty.
    Closed,
    /// `rdf:parseType="Collection"`.
    Collection {
        subject: Term,
        predicate: Iri,
        items: Vec<Term>,
    },
}

struct Scope {
    frame: Frame,
    lang: Option<String>,
    base: Option<String>,
}

struct RdfXmlReader {
    graph: Graph,
    entities: HashMap<String, String>,
    blank_ids: HashMap<String, BlankNode>,
    next_blank: usize,
    stack: Vec<Scope>,
    base: Option<String>,
}

fn unsupported(msg: impl Into<String>) -> SyntaxError {
    SyntaxError::Unsupported(msg.into())
}

struct Attr {
    ns: Option<String>,
    local: String,
    value: String,
}

impl RdfXmlReader {
    fn run(&mut self, source: &str) -> Result<(), SyntaxError> {
        let mut reader = NsReader::from_str(source);
        loop {
            let pos = reader.buffer_position();
            let (ns, event) = reader
                .read_resolved_event()
                .map_err(|e| unsupported(format!("malformed XML after byte {pos}: {e}")))?;
            let ns = match ns {
                ResolveResult::Bound(ns) => Some(String::from_utf8_lossy(ns.as_ref()).into_owned()),
                ResolveResult::Unbound => None,
                ResolveResult::Unknown(p) => {
                    return Err(unsupported(format!("undeclared XML prefix {:?}", String::from_utf8_lossy(&p))))
                }
            };
            match event {
                Event::Start(e) => {
                    let (local, attrs) = self.element_parts(&reader, &e)?;
                    self.open(ns, local, attrs)?;
                }
                Event::Empty(e) => {
                    let (local, attrs) = self.element_parts(&reader, &e)?;
                    self.open(ns, local, attrs)?;
                    self.close()?;
                }
                Event::End(_) => self.close()?,
                Event::Text(t) => {
                    let text = t.decode().map_err(|e| unsupported(e.to_string()))?;
                    self.text(&normalize_eol(&text))?;
                }
                Event::CData(t) => {
                    let text = t.decode().map_err(|e| unsupported(e.to_string()))?;
                    self.text(&normalize_eol(&text))?;
                }
                Event::GeneralRef(r) => {
                    let resolved = match r.resolve_char_ref().map_err(|e| unsupported(e.to_string()))? {
                        Some(c) => c.to_string(),
                        None => {
                            let name = r.decode().map_err(|e| unsupported(e.to_string()))?;
                            self.entity(&name)?
                        }
                    };
                    self.text(&resolved)?;
                }
                Event::DocType(d) => {
                    let body = d.decode().map_err(|e| unsupported(e.to_string()))?;
                    self.entities.extend(parse_entity_decls(&body));
                }
                Event::Eof => break,
                Event::Decl(_) | Event::Comment(_) | Event::PI(_) => {}
            }
        }
        if !self.stack.is_empty() {
            return Err(unsupported("document ended inside an element"));
        }
        Ok(())
    }

    fn entity(&self, name: &str) -> Result<String, SyntaxError> {
        if let Some(v) = quick_xml::escape::resolve_predefined_entity(name) {
            return Ok(v.to_owned());
        }
        self.entities
            .get(name)
            .cloned()
            .ok_or_else(|| unsupported(format!("undeclared entity &{name};")))
    }

    fn element_parts(&self, reader: &NsReader<&[u8]>, e: &BytesStart<'_>) -> Result<(String, Vec<Attr>), SyntaxError> {
        let (_, local) = reader.resolve_element(e.name());
        let local = String::from_utf8_lossy(local.as_ref()).into_owned();
        let mut attrs = Vec::new();
        for attr in e.attributes() {
            let attr = attr.map_err(|err| unsupported(format!("bad attribute: {err}")))?;
            let key = attr.key;
            if key.as_ref().starts_with(b"xmlns") {
                continue;
            }
            let (ns, attr_local) = reader.resolve_attribute(key);
            let ns = match ns {
                ResolveResult::Bound(ns) => Some(String::from_utf8_lossy(ns.as_ref()).into_owned()),
                ResolveResult::Unbound => None,
                ResolveResult::Unknown(p) => {
                    return Err(unsupported(format!("undeclared XML prefix {:?}", String::from_utf8_lossy(&p))))
                }
            };
            let value = attr
                .decode_and_unescape_value_with(reader.decoder(), |name| {
                    quick_xml::escape::resolve_predefined_entity(name).or_else(|| self.entities.get(name).map(String::as_str))
                })
                .map_err(|err| unsupported(format!("bad attribute value: {err}")))?;
            attrs.push(Attr {
                ns,
                local: String::from_utf8_lossy(attr_local.as_ref()).into_owned(),
                value: value.into_owned(),
            });
        }
        Ok((local, attrs))
    }

    fn fresh_blank(&mut self) -> Term {
        let b = BlankNode::new(format!("x{}", self.next_blank)).expect("non-empty label");
        self.next_blank += 1;
        Term::Blank(b)
    }

    fn node_id(&mut self, id: &str) -> Term {
        if let Some(b) = self.blank_ids.get(id) {
            return Term::Blank(b.clone());
        }
        let Term::Blank(b) = self.fresh_blank() else { unreachable!() };
        self.blank_ids.insert(id.to_owned(), b.clone());
        Term::Blank(b)
    }

    fn current_base(&self) -> Option<&str> {
        self.stack
            .iter()
            .rev()
            .find_map(|s| s.base.as_deref())
            .or(self.base.as_deref())
    }

    fn current_lang(&self) -> Option<&str> {
        self.stack.iter().rev().find_map(|s| s.lang.as_deref())
    }

    fn resolve(&self, value: &str) -> Result<Iri, SyntaxError> {
        if is_absolute_iri(value) {
            return Iri::new(value).map_err(|e| unsupported(e.to_string()));
        }
        let base = self
            .current_base()
            .ok_or_else(|| unsupported(format!("relative IRI {value:?} with no base")))?;
        let joined = url::Url::parse(base)
            .and_then(|b| b.join(value))
            .map_err(|e| unsupported(format!("cannot resolve {value:?} against {base:?}: {e}")))?;
        Iri::new(String::from(joined)).map_err(|e| unsupported(e.to_string()))
    }

    fn emit(&mut self, s: Term, p: Iri, o: Term) -> Result<(), SyntaxError> {
        let t = Triple::new(s, p, o).map_err(|e| unsupported(e.to_string()))?;
        self.graph.insert(t);
        Ok(())
    }

    fn open(&mut self, ns: Option<String>, local: String, attrs: Vec<Attr>) -> Result<(), SyntaxError> {
        let mut lang = None;
        let mut base = None;
        let mut rest = Vec::new();
        for a in attrs {
            match (a.ns.as_deref(), a.local.as_str()) {
                (Some(XML_NS), "lang") => lang = Some(a.value),
                (Some(XML_NS), "base") => base = Some(a.value),
                (Some(XML_NS), _) => {}
                _ => rest.push(a),
            }
        }
        let base = match base {
            Some(b) => Some(self.resolve(&b)?.into_string()),
            None => None,
        };
        // Scope attributes apply to the element itself.
        self.stack.push(Scope {
            frame: Frame::Closed,
            lang,
            base,
        });
        let element = element_iri(ns.as_deref(), &local)?;

        let parent = self.stack.len().checked_sub(2).map(|i| &self.stack[i].frame);
        let frame = match parent {
            None if element.as_str() == format!("{}RDF", rdf::NS) => Frame::Root,
            None | Some(Frame::Root) => Frame::Node {
                subject: self.node_element(&element, rest)?,
            },
            Some(Frame::Property { .. }) => {
                let subject = self.node_element(&element, rest)?;
                let idx = self.stack.len() - 2;
                let Frame::Property {
                    subject: parent_subject,
                    predicate,
                    has_node,
                    text,
                    ..
                } = &mut self.stack[idx].frame
                else {
                    unreachable!()
                };
                if *has_node || !text.trim().is_empty() {
                    return Err(unsupported("property element with mixed or multiple node children"));
                }
                *has_node = true;
                let (s, p) = (parent_subject.clone(), predicate.clone());
                self.emit(s, p, subject.clone())?;
                Frame::Node { subject }
            }
            Some(Frame::Collection { .. }) => {
                let subject = self.node_element(&element, rest)?;
                let idx = self.stack.len() - 2;
                if let Frame::Collection { items, .. } = &mut self.stack[idx].frame {
                    items.push(subject.clone());
                }
                Frame::Node { subject }
            }
            Some(Frame::Node { subject }) => {
                let subject = subject.clone();
                self.property_element(subject, element, rest)?
            }
            Some(Frame::Closed) => return Err(unsupported("content inside a property element that already has an object")),
        };
        self.stack.last_mut().expect("pushed above").frame = frame;
        Ok(())
    }

    fn node_element(&mut self, element: &Iri, attrs: Vec<Attr>) -> Result<Term, SyntaxError> {
        let rdf_attr = |a: &Attr, name: &str| a.ns.as_deref() == Some(rdf::NS) && a.local == name;
        let mut subject = None;
        let mut props = Vec::new();
        for a in &attrs {
            if rdf_attr(a, "about") {
                subject = Some(Term::Iri(self.resolve(&a.value)?));
            } else if rdf_attr(a, "nodeID") {
                subject = Some(self.node_id(&a.value));
            } else if rdf_attr(a, "ID") {
                subject = Some(Term::Iri(self.resolve(&format!("#{}", a.value))?));
            } else {
                props.push(a);
            }
        }
        let subject = match subject {
            Some(s) => s,
            None => self.fresh_blank(),
        };
        if element.as_str() != format!("{}Description", rdf::NS) {
            self.emit(subject.clone(), Iri::from_static(rdf::TYPE), Term::Iri(element.clone()))?;
        }
        self.property_attributes(&subject, props)?;
        Ok(subject)
    }

    fn property_attributes(&mut self, subject: &Term, attrs: Vec<&Attr>) -> Result<(), SyntaxError> {
        for a in attrs {
            let predicate = element_iri(a.ns.as_deref(), &a.local)?;
            let object = if predicate.as_str() == rdf::TYPE {
                Term::Iri(self.resolve(&a.value)?)
            } else {
                match self.current_lang() {
                    Some(lang) => Term::Literal(Literal::lang(a.value.clone(), lang)),
                    None => Term::Literal(Literal::plain(a.value.clone())),
                }
            };
            self.emit(subject.clone(), predicate, object)?;
        }
        Ok(())
    }

    fn property_element(&mut self, subject: Term, predicate: Iri, attrs: Vec<Attr>) -> Result<Frame, SyntaxError> {
        if predicate.as_str() == format!("{}li", rdf::NS) {
            return Err(unsupported("rdf:li container membership"));
        }
        let rdf_attr = |a: &Attr, name: &str| a.ns.as_deref() == Some(rdf::NS) && a.local == name;
        let mut object = None;
        let mut datatype = None;
        let mut parse_type = None;
        let mut props = Vec::new();
        for a in &attrs {
            if rdf_attr(a, "resource") {
                object = Some(Term::Iri(self.resolve(&a.value)?));
            } else if rdf_attr(a, "nodeID") {
                object = Some(self.node_id(&a.value));
            } else if rdf_attr(a, "datatype") {
                datatype = Some(self.resolve(&a.value)?);
            } else if rdf_attr(a, "parseType") {
                parse_type = Some(a.value.clone());
            } else if rdf_attr(a, "ID") {
                return Err(unsupported("reification via rdf:ID on property elements"));
            } else {
                props.push(a);
            }
        }
        match parse_type.as_deref() {
            Some("Resource") => {
                let node = self.fresh_blank();
                self.emit(subject, predicate, node.clone())?;
                return Ok(Frame::Node { subject: node });
            }
            Some("Collection") => {
                return Ok(Frame::Collection {
                    subject,
                    predicate,
                    items: Vec::new(),
                })
            }
            Some(other) => return Err(unsupported(format!("rdf:parseType=\"{other}\""))),
            None => {}
        }
        if object.is_some() || !props.is_empty() {
            let node = match object {
                Some(o) => o,
                None => self.fresh_blank(),
            };
            self.property_attributes(&node, props)?;
            self.emit(subject, predicate, node)?;
            return Ok(Frame::Closed);
        }
        Ok(Frame::Property {
            subject,
            predicate,
            datatype,
            text: String::new(),
            has_node: false,
        })
    }

    fn text(&mut self, text: &str) -> Result<(), SyntaxError> {
        match self.stack.last_mut().map(|s| &mut s.frame) {
            Some(Frame::Property { text: buf, has_node, .. }) => {
                if *has_node && !text.trim().is_empty() {
                    return Err(unsupported("mixed text and node content in a property element"));
                }
                buf.push_str(text);
                Ok(())
            }
            _ if text.trim().is_empty() => Ok(()),
            _ => Err(unsupported(format!("unexpected text {:?}", text.trim()))),
        }
    }

    fn close(&mut self) -> Result<(), SyntaxError> {
        let lang = self.current_lang().map(str::to_owned);
        let scope = self.stack.pop().ok_or_else(|| unsupported("unbalanced end tag"))?;
        match scope.frame {
            Frame::Property {
                subject,
                predicate,
                datatype,
                text,
                has_node: false,
            } => {
                let literal = match (datatype, lang) {
                    (Some(dt), _) => Literal::typed(text, dt),
                    (None, Some(lang)) => Literal::lang(text, &lang),
                    (None, None) => Literal::plain(text),
                };
                self.emit(subject, predicate, Term::Literal(literal))
            }
            Frame::Collection {
                subject,
                predicate,
                items,
            } => {
                let mut head = Term::Iri(Iri::from_static(rdf::NIL));
                for item in items.into_iter().rev() {
                    let cell = self.fresh_blank();
                    self.emit(cell.clone(), Iri::from_static(rdf::FIRST), item)?;
                    self.emit(cell.clone(), Iri::from_static(rdf::REST), head)?;
                    head = cell;
                }
                self.emit(subject, predicate, head)
            }
            _ => Ok(()),
        }
    }
}

fn element_iri(ns: Option<&str>, local: &str) -> Result<Iri, SyntaxError> {
    let ns = ns.ok_or_else(|| unsupported(format!("element or attribute {local:?} has no namespace")))?;
    Iri::new(format!("{ns}{local}")).map_err(|e| unsupported(e.to_string()))
}

/// Extracts `<!ENTITY name "value">` declarations from a DOCTYPE body.
fn parse_entity_decls(doctype: &str) -> HashMap<String, String> {
    let mut entities = HashMap::new();
    let mut rest = doctype;
    while let Some(idx) = rest.find("<!ENTITY") {
        rest = &rest[idx + "<!ENTITY".len()..];
        let trimmed = rest.trim_start();
        let name: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let after_name = trimmed[name.len()..].trim_start();
        let Some(quote) = after_name.chars().next().filter(|c| *c == '"' || *c == '\'') else {
            continue;
        };
        if let Some(end) = after_name[1..].find(quote) {
            entities.insert(name, after_name[1..1 + end].to_owned());
        }
    }
    entities
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::isomorphic;
    use crate::syntax::parse_turtle;

    #[test]
    fn predicate_splitting() {
        let split = |s: &str| split_predicate(&Iri::new(s).unwrap()).map(|(a, b)| (a.to_owned(), b.to_owned()));
        assert_eq!(split("http://x/p").unwrap(), ("http://x/".into(), "p".into()));
        assert_eq!(
            split("http://purl.obolibrary.org/obo/BFO_0000050").unwrap(),
            ("http://purl.obolibrary.org/obo/".into(), "BFO_0000050".into())
        );
        assert_eq!(split("http://x/a1b").unwrap().1, "a1b");
        assert_eq!(split("http://x/9lives").unwrap().1, "lives");
        assert!(matches!(split("http://x/123"), Err(SyntaxError::UnsplittablePredicate(_))));
        assert!(split("http://x/").is_err());
    }

    #[test]
    fn unsplittable_predicate_is_reported() {
        let g = parse_turtle("<http://x/a> <http://x/123> <http://x/b> .", None).unwrap();
        let err = write(&g).unwrap_err();
        assert_eq!(
            err.to_string(),
            "predicate <http://x/123> cannot be split into an XML namespace and local name"
        );
    }

    #[test]
    fn own_output_round_trips() {
        let g = parse_turtle(
            "@prefix ex: <http://x/> . ex:a ex:p [ ex:q \"v & <w>\"@en ], \"line\\r\\nbreak\" , 7 ; ex:r ex:b .",
            None,
        )
        .unwrap();
        let xml = write(&g).unwrap();
        assert!(xml.contains("xmlns:ex=\"http://x/\""), "{xml}");
        let back = parse_rdf_xml(&xml, None).unwrap();
        assert!(isomorphic(&g, &back).unwrap(), "{xml}");
    }

    #[test]
    fn protege_style_document() {
        let xml = r##"<?xml version="1.0"?>
<!DOCTYPE rdf:RDF [
    <!ENTITY owl "http://www.w3.org/2002/07/owl#" >
    <!ENTITY mcro "http://example.org/m#" >
]>
<rdf:RDF xmlns="http://example.org/m#"
     xml:base="http://example.org/m"
     xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
     xmlns:owl="http://www.w3.org/2002/07/owl#"
     xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#">
    <owl:Class rdf:about="&mcro;Section">
        <rdfs:subClassOf>
            <owl:Restriction>
                <owl:onProperty rdf:resource="http://purl.obolibrary.org/obo/BFO_0000050"/>
                <owl:someValuesFrom rdf:resource="#Report"/>
            </owl:Restriction>
        </rdfs:subClassOf>
        <rdfs:comment xml:lang="en">A section.</rdfs:comment>
        <rdfs:label rdf:datatype="&owl;string-ish">sec</rdfs:label>
    </owl:Class>
    <owl:Class rdf:ID="Report" rdfs:label="report"/>
    <rdf:Description rdf:about="#Union">
        <owl:unionOf rdf:parseType="Collection">
            <rdf:Description rdf:about="#Section"/>
            <rdf:Description rdf:about="#Report"/>
        </owl:unionOf>
        <rdfs:seeAlso rdf:parseType="Resource"><rdfs:label>nested</rdfs:label></rdfs:seeAlso>
    </rdf:Description>
</rdf:RDF>"##;
        let g = parse_rdf_xml(xml, None).unwrap();
        let expected = parse_turtle(
            r#"@prefix owl: <http://www.w3.org/2002/07/owl#> .
               @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
               @prefix m: <http://example.org/m#> .
               m:Section a owl:Class ;
                   rdfs:subClassOf [ a owl:Restriction ;
                       owl:onProperty <http://purl.obolibrary.org/obo/BFO_0000050> ;
                       owl:someValuesFrom m:Report ] ;
                   rdfs:comment "A section."@en ;
                   rdfs:label "sec"^^<http://www.w3.org/2002/07/owl#string-ish> .
               m:Report a owl:Class ; rdfs:label "report" .
               m:Union owl:unionOf ( m:Section m:Report ) ;
                   rdfs:seeAlso [ rdfs:label "nested" ] ."#,
            None,
        )
        .unwrap();
        assert!(isomorphic(&g, &expected).unwrap());
    }

    #[test]
    fn rejects_parse_type_literal() {
        let xml = r#"<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#" xmlns:ex="http://x/">
            <rdf:Description rdf:about="http://x/a"><ex:p rdf:parseType="Literal"><b>x</b></ex:p></rdf:Description></rdf:RDF>"#;
        assert!(matches!(parse_rdf_xml(xml, None), Err(SyntaxError::Unsupported(_))));
    }
}
