//! Concrete RDF syntaxes: a Turtle reader and writers for the four export
//! formats, plus readers for the shapes those writers produce.

use std::fmt;
use std::str::FromStr;

use crate::rdf::{Graph, Iri};

mod jsonld;
mod labels;
mod ntriples;
mod rdfxml;
mod turtle;
mod turtle_writer;

pub use rdfxml::parse_rdf_xml;
pub use turtle::{parse_turtle, parse_turtle_document, ParseOutcome};

/// The export formats offered to users, keyed by the tokens the CLI and
/// HTTP API accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExportFormat {
    Turtle,
    /// Offered as "rdf".
    NTriples,
    /// Offered as "owl".
    RdfXml,
    /// Offered as "json".
    JsonLd,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 4] = [
        ExportFormat::Turtle,
        ExportFormat::NTriples,
        ExportFormat::RdfXml,
        ExportFormat::JsonLd,
    ];

    pub fn token(self) -> &'static str {
        match self {
            ExportFormat::Turtle => "turtle",
            ExportFormat::NTriples => "rdf",
            ExportFormat::RdfXml => "owl",
            ExportFormat::JsonLd => "json",
        }
    }

    pub fn media_type(self) -> &'static str {
        match self {
            ExportFormat::Turtle => "text/turtle",
            ExportFormat::NTriples => "application/n-triples",
            ExportFormat::RdfXml => "application/rdf+xml",
            ExportFormat::JsonLd => "application/ld+json",
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Turtle => "ttl",
            ExportFormat::NTriples => "nt",
            ExportFormat::RdfXml => "owl",
            ExportFormat::JsonLd => "jsonld",
        }
    }

    /// Comma-separated list of accepted tokens, for error messages.
    pub fn valid_tokens() -> String {
        Self::ALL.map(ExportFormat::token).join(", ")
    }
}

impl FromStr for ExportFormat {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.token() == s)
            .ok_or_else(|| SyntaxError::UnknownFormat(s.to_owned()))
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A located parser message. Lines and columns are 1-based; columns count
/// characters, not bytes.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl ParseDiagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            column,
            message: message.into(),
            severity: Severity::Error,
        }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {level}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{}", render_diagnostics(.0))]
    Parse(Vec<ParseDiagnostic>),
    #[error("predicate <{0}> cannot be split into an XML namespace and local name")]
    UnsplittablePredicate(Iri),
    #[error("literal {0:?} contains characters XML 1.0 cannot represent")]
    UnrepresentableXml(String),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("unknown format {0:?}; expected one of: {tokens}", tokens = ExportFormat::valid_tokens())]
    UnknownFormat(String),
}

fn render_diagnostics(diags: &[ParseDiagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

/// Writes `graph` in `format`. Output is a pure function of the graph.
pub fn serialize(graph: &Graph, format: ExportFormat) -> Result<String, SyntaxError> {
    match format {
        ExportFormat::Turtle => Ok(turtle_writer::write(graph)),
        ExportFormat::NTriples => Ok(ntriples::write(graph)),
        ExportFormat::RdfXml => rdfxml::write(graph),
        ExportFormat::JsonLd => Ok(jsonld::write(graph)),
    }
}

/// Reads a document produced by [`serialize`] back into a graph.
///
/// Turtle and N-Triples go through the full Turtle reader; the RDF/XML
/// reader handles the common striped syntax; the JSON-LD reader accepts
/// only the flattened shape this crate writes.
pub fn reparse_any(source: &str, format: ExportFormat) -> Result<Graph, SyntaxError> {
    match format {
        ExportFormat::Turtle | ExportFormat::NTriples => parse_turtle(source, None).map_err(SyntaxError::Parse),
        ExportFormat::RdfXml => parse_rdf_xml(source, None),
        ExportFormat::JsonLd => jsonld::read(source),
    }
}

/// Escapes a string for a double-quoted Turtle or N-Triples literal.
pub(crate) fn escape_string(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    for c in value.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => out.push_str(&format!("\\u{:04X}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_tokens_round_trip() {
        for f in ExportFormat::ALL {
            assert_eq!(f.token().parse::<ExportFormat>().unwrap(), f);
        }
        let err = "xml".parse::<ExportFormat>().unwrap_err();
        assert_eq!(
            err.to_string(),
            "unknown format \"xml\"; expected one of: turtle, rdf, owl, json"
        );
    }

    #[test]
    fn escapes() {
        assert_eq!(escape_string("a\"b\\c\nd\u{1}"), "a\\\"b\\\\c\\nd\\u0001");
    }
}
