use std::fmt;

use super::vocab::{rdf, xsd};
use super::RdfError;

/// An absolute IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, RdfError> {
        let value = value.into();
        if is_absolute_iri(&value) {
            Ok(Iri(value))
        } else {
            Err(RdfError::RelativeIri(value))
        }
    }

    /// Builds an IRI from a compile-time constant known to be absolute.
    pub(crate) fn from_static(value: &'static str) -> Self {
        debug_assert!(is_absolute_iri(value));
        Iri(value.to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// Splits the IRI after its last `#`, `/` or `:`. The local part may be empty.
    pub fn split_local(&self) -> (&str, &str) {
        match self.0.rfind(['#', '/', ':']) {
            Some(idx) => self.0.split_at(idx + 1),
            None => ("", &self.0),
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl serde::Serialize for Iri {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// True when `value` starts with a URI scheme followed by `:` and holds no
/// whitespace or characters forbidden inside `<...>`.
pub fn is_absolute_iri(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    let scheme_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'));
    scheme_ok
        && !value
            .chars()
            .any(|c| c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

/// A blank node label, scoped to one graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlankNode(String);

impl BlankNode {
    pub fn new(label: impl Into<String>) -> Result<Self, RdfError> {
        let label = label.into();
        if label.is_empty() {
            Err(RdfError::EmptyBlankLabel)
        } else {
            Ok(BlankNode(label))
        }
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// An RDF literal.
///
/// `xsd:string` typed literals are stored without a datatype and language
/// tags are lower-cased, so two literals denoting the same RDF 1.1 value
/// compare equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    language: Option<String>,
    datatype: Option<Iri>,
}

impl Literal {
    pub fn plain(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            language: None,
            datatype: None,
        }
    }

    pub fn lang(lexical: impl Into<String>, language: &str) -> Self {
        Literal {
            lexical: lexical.into(),
            language: Some(language.to_ascii_lowercase()),
            datatype: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        let datatype = (datatype.as_str() != xsd::STRING).then_some(datatype);
        Literal {
            lexical: lexical.into(),
            language: None,
            datatype,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    /// The explicit datatype, `None` for simple strings and language-tagged strings.
    pub fn datatype(&self) -> Option<&Iri> {
        self.datatype.as_ref()
    }

    /// The datatype IRI RDF assigns to this literal, explicit or implied.
    pub fn effective_datatype(&self) -> &str {
        match (&self.datatype, &self.language) {
            (Some(dt), _) => dt.as_str(),
            (None, Some(_)) => rdf::LANG_STRING,
            (None, None) => xsd::STRING,
        }
    }
}

/// Any RDF term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, RdfError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, RdfError> {
        BlankNode::new(label).map(Term::Blank)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_blank(&self) -> Option<&BlankNode> {
        match self {
            Term::Blank(b) => Some(b),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::Blank(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

impl fmt::Display for Term {
    /// N-Triples rendering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Blank(b) => write!(f, "{b}"),
            Term::Literal(lit) => {
                write!(f, "\"{}\"", crate::syntax::escape_string(lit.lexical()))?;
                if let Some(lang) = lit.language() {
                    write!(f, "@{lang}")
                } else if let Some(dt) = lit.datatype() {
                    write!(f, "^^<{dt}>")
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A subject-predicate-object statement. Subjects are IRIs or blank nodes,
/// predicates are IRIs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Term,
    object: Term,
}

impl Triple {
    pub fn new(
        subject: impl Into<Term>,
        predicate: impl Into<Term>,
        object: impl Into<Term>,
    ) -> Result<Self, RdfError> {
        let (subject, predicate, object) = (subject.into(), predicate.into(), object.into());
        if let Term::Literal(lit) = &subject {
            return Err(RdfError::LiteralSubject(lit.lexical().to_owned()));
        }
        if !matches!(predicate, Term::Iri(_)) {
            return Err(RdfError::NonIriPredicate(predicate.to_string()));
        }
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        match &self.predicate {
            Term::Iri(iri) => iri,
            _ => unreachable!("predicate is always an IRI"),
        }
    }

    pub fn predicate_term(&self) -> &Term {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn has_blank(&self) -> bool {
        self.subject.is_blank() || self.object.is_blank()
    }

    /// Rewrites both blank-node positions through `f`.
    pub(crate) fn map_blanks(&self, mut f: impl FnMut(&BlankNode) -> BlankNode) -> Triple {
        let mut remap = |t: &Term| match t {
            Term::Blank(b) => Term::Blank(f(b)),
            other => other.clone(),
        };
        Triple {
            subject: remap(&self.subject),
            predicate: self.predicate.clone(),
            object: remap(&self.object),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
