//! Turtle reader.
//!
//! Supports `@prefix`/`@base` (and their SPARQL-style forms), the `a`
//! keyword, predicate lists, object lists, `[...]` blank nodes, `(...)`
//! collections, strings (short and long forms), language tags, `^^`
//! datatypes, integers and booleans. Decimal and double shorthand are
//! rejected with a diagnostic. N-Triples documents are valid input.

use std::collections::HashMap;

use super::{ParseDiagnostic, Severity};
use crate::rdf::vocab::{rdf, xsd};
use crate::rdf::{is_absolute_iri, BlankNode, Graph, Iri, Literal, Term, Triple};

/// Stop collecting after this many errors; later ones are usually cascades.
const MAX_ERRORS: usize = 20;

/// Result of a parse that never aborts: whatever statements parsed cleanly,
/// plus every diagnostic raised.
#[derive(Debug, Clone)]
pub struct ParseOutcome {
    pub graph: Graph,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl ParseOutcome {
    pub fn has_errors(&self) -> bool {
        self.diagnostics.iter().any(|d| d.severity == Severity::Error)
    }
}

/// Parses a Turtle document. Blank nodes receive fresh labels.
pub fn parse_turtle(source: &str, base: Option<&str>) -> Result<Graph, Vec<ParseDiagnostic>> {
    let outcome = parse_turtle_document(source, base);
    if outcome.has_errors() {
        Err(outcome.diagnostics)
    } else {
        Ok(outcome.graph)
    }
}

pub fn parse_turtle_document(source: &str, base: Option<&str>) -> ParseOutcome {
    let mut parser = Parser::new(source, base);
    parser.run();
    ParseOutcome {
        graph: parser.graph,
        diagnostics: parser.diagnostics,
    }
}

struct Fail {
    line: usize,
    column: usize,
    message: String,
}

type PResult<T> = Result<T, Fail>;

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    base: Option<String>,
    prefixes: HashMap<String, String>,
    blank_labels: HashMap<String, BlankNode>,
    next_blank: usize,
    pending: Vec<Triple>,
    graph: Graph,
    diagnostics: Vec<ParseDiagnostic>,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '-' | '\u{B7}')
}

impl Parser {
    fn new(source: &str, base: Option<&str>) -> Self {
        Parser {
            chars: source.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            base: base.map(str::to_owned),
            prefixes: HashMap::new(),
            blank_labels: HashMap::new(),
            next_blank: 0,
            pending: Vec::new(),
            graph: Graph::new(),
            diagnostics: Vec::new(),
        }
    }

    fn run(&mut self) {
        loop {
            self.skip_ws();
            if self.at_end() {
                break;
            }
            match self.statement() {
                Ok(()) => {
                    let pending = std::mem::take(&mut self.pending);
                    self.graph.extend(pending);
                }
                Err(fail) => {
                    self.pending.clear();
                    self.diagnostics.push(ParseDiagnostic {
                        line: fail.line,
                        column: fail.column,
                        message: fail.message,
                        severity: Severity::Error,
                    });
                    if self.diagnostics.len() >= MAX_ERRORS {
                        break;
                    }
                    self.recover();
                }
            }
        }
    }

    // ---- character level -------------------------------------------------

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn fail<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(Fail {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }

    fn fail_at<T>(&self, at: (usize, usize), message: impl Into<String>) -> PResult<T> {
        Err(Fail {
            line: at.0,
            column: at.1,
            message: message.into(),
        })
    }

    fn here(&self) -> (usize, usize) {
        (self.line, self.column)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, expected: char, what: &str) -> PResult<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == expected => {
                self.bump();
                Ok(())
            }
            Some(c) => self.fail(format!("expected {what}, found {c:?}")),
            None => self.fail(format!("expected {what}, found end of input")),
        }
    }

    /// Skips to just past the next `.` that ends a statement.
    fn recover(&mut self) {
        while let Some(c) = self.bump() {
            if c == '.' && self.peek().is_none_or(|n| n.is_whitespace() || n == '#') {
                break;
            }
        }
    }

    fn looking_at_keyword(&self, word: &str) -> bool {
        let n = word.chars().count();
        let matches = word
            .chars()
            .enumerate()
            .all(|(i, w)| self.peek_at(i).is_some_and(|c| c.eq_ignore_ascii_case(&w)));
        matches && self.peek_at(n).is_none_or(|c| c.is_whitespace() || c == '<')
    }

    // ---- statements --------------------------------------------------------

    fn statement(&mut self) -> PResult<()> {
        if self.peek() == Some('@') {
            let at = self.here();
            self.bump();
            let word = self.read_word();
            return match word.as_str() {
                "prefix" => {
                    self.prefix_body()?;
                    self.expect('.', "'.' after @prefix directive")
                }
                "base" => {
                    self.base_body()?;
                    self.expect('.', "'.' after @base directive")
                }
                other => self.fail_at(at, format!("unknown directive @{other}")),
            };
        }
        if self.looking_at_keyword("PREFIX") {
            self.read_word();
            return self.prefix_body();
        }
        if self.looking_at_keyword("BASE") {
            self.read_word();
            return self.base_body();
        }
        self.triples()?;
        self.skip_ws();
        if self.at_end() {
            return self.fail("expected '.' at end of statement, found end of input");
        }
        self.expect('.', "'.' at end of statement")
    }

    fn read_word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
            word.push(c);
            self.bump();
        }
        word
    }

    fn prefix_body(&mut self) -> PResult<()> {
        self.skip_ws();
        let at = self.here();
        let token = self.read_name_token()?;
        let Some(prefix) = token.prefix.filter(|_| token.local.is_empty()) else {
            return self.fail_at(at, "expected a prefix name ending in ':'");
        };
        self.skip_ws();
        let ns_at = self.here();
        let ns = self.iriref()?;
        let iri = Iri::new(ns.clone()).or_else(|_| self.fail_at(ns_at, format!("invalid namespace IRI <{ns}>")))?;
        self.prefixes.insert(prefix.clone(), ns);
        self.graph.set_prefix(prefix, iri);
        Ok(())
    }

    fn base_body(&mut self) -> PResult<()> {
        self.skip_ws();
        let base = self.iriref()?;
        self.base = Some(base);
        Ok(())
    }

    fn triples(&mut self) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some('[') {
            let subject = self.blank_node_property_list()?;
            self.skip_ws();
            if self.peek() == Some('.') {
                return Ok(());
            }
            return self.predicate_object_list(&subject);
        }
        let subject = self.subject()?;
        self.predicate_object_list(&subject)
    }

    fn subject(&mut self) -> PResult<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_term()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => self.fail("a literal cannot be a subject"),
            Some(_) => {
                let at = self.here();
                let token = self.read_name_token()?;
                if token.prefix.is_none() {
                    return self.fail_at(at, format!("expected subject, found {:?}", token.local));
                }
                Ok(Term::Iri(self.resolve_pname(&token, at)?))
            }
            None => self.fail("expected subject, found end of input"),
        }
    }

    fn predicate_object_list(&mut self, subject: &Term) -> PResult<()> {
        loop {
            let verb = self.verb()?;
            self.object_list(subject, &verb)?;
            self.skip_ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.bump();
                self.skip_ws();
            }
            if matches!(self.peek(), None | Some('.') | Some(']')) {
                return Ok(());
            }
        }
    }

    fn object_list(&mut self, subject: &Term, verb: &Iri) -> PResult<()> {
        loop {
            let object = self.object()?;
            self.emit(subject.clone(), verb.clone(), object)?;
            self.skip_ws();
            if self.peek() == Some(',') {
                self.bump();
            } else {
                return Ok(());
            }
        }
    }

    fn emit(&mut self, s: Term, p: Iri, o: Term) -> PResult<()> {
        match Triple::new(s, p, o) {
            Ok(t) => {
                self.pending.push(t);
                Ok(())
            }
            Err(e) => self.fail(e.to_string()),
        }
    }

    fn verb(&mut self) -> PResult<Iri> {
        self.skip_ws();
        if self.peek() == Some('a') && self.peek_at(1).is_none_or(|c| !(is_name_char(c) || c == ':' || c == '.')) {
            self.bump();
            return Ok(Iri::from_static(rdf::TYPE));
        }
        match self.peek() {
            Some('<') => self.iri_term(),
            Some(c) if is_name_char(c) || c == ':' => {
                let at = self.here();
                let token = self.read_name_token()?;
                if token.prefix.is_none() {
                    return self.fail_at(at, format!("expected predicate, found {:?}", token.local));
                }
                self.resolve_pname(&token, at)
            }
            Some(c) => self.fail(format!("expected predicate, found {c:?}")),
            None => self.fail("expected predicate, found end of input"),
        }
    }

    fn object(&mut self) -> PResult<Term> {
        self.skip_ws();
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iri_term()?)),
            Some('_') if self.peek_at(1) == Some(':') => self.blank_label(),
            Some('[') => self.blank_node_property_list(),
            Some('(') => self.collection(),
            Some('"') | Some('\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || c == '+' || c == '-' || (c == '.' && self.peek_at(1).is_some_and(|d| d.is_ascii_digit())) => {
                self.number()
            }
            Some(c) if is_name_char(c) || c == ':' => {
                let at = self.here();
                let token = self.read_name_token()?;
                match (&token.prefix, token.local.as_str()) {
                    (None, "true") | (None, "false") => {
                        Ok(Term::Literal(Literal::typed(token.local.clone(), Iri::from_static(xsd::BOOLEAN))))
                    }
                    (None, other) => self.fail_at(at, format!("expected object, found {other:?}")),
                    (Some(_), _) => Ok(Term::Iri(self.resolve_pname(&token, at)?)),
                }
            }
            Some(c) => self.fail(format!("expected object, found {c:?}")),
            None => self.fail("expected object, found end of input"),
        }
    }

    fn fresh_blank(&mut self) -> BlankNode {
        let b = BlankNode::new(format!("b{}", self.next_blank)).expect("non-empty label");
        self.next_blank += 1;
        b
    }

    fn blank_label(&mut self) -> PResult<Term> {
        let at = self.here();
        self.bump();
        self.bump();
        let mut label = String::new();
        while let Some(c) = self.peek() {
            if is_name_char(c) || (c == '.' && self.peek_at(1).is_some_and(is_name_char)) {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if label.is_empty() {
            return self.fail_at(at, "empty blank node label");
        }
        if let Some(b) = self.blank_labels.get(&label) {
            return Ok(Term::Blank(b.clone()));
        }
        let b = self.fresh_blank();
        self.blank_labels.insert(label, b.clone());
        Ok(Term::Blank(b))
    }

    fn blank_node_property_list(&mut self) -> PResult<Term> {
        self.bump();
        self.skip_ws();
        let node = Term::Blank(self.fresh_blank());
        if self.peek() == Some(']') {
            self.bump();
            return Ok(node);
        }
        self.predicate_object_list(&node)?;
        self.expect(']', "']' closing blank node")?;
        Ok(node)
    }

    fn collection(&mut self) -> PResult<Term> {
        self.bump();
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(')') => {
                    self.bump();
                    break;
                }
                None => return self.fail("expected ')' closing collection, found end of input"),
                _ => items.push(self.object()?),
            }
        }
        let mut head = Term::Iri(Iri::from_static(rdf::NIL));
        for item in items.into_iter().rev() {
            let cell = Term::Blank(self.fresh_blank());
            self.emit(cell.clone(), Iri::from_static(rdf::FIRST), item)?;
            self.emit(cell.clone(), Iri::from_static(rdf::REST), head)?;
            head = cell;
        }
        Ok(head)
    }

    // ---- IRIs --------------------------------------------------------------

    fn iri_term(&mut self) -> PResult<Iri> {
        let at = self.here();
        let raw = self.iriref()?;
        Iri::new(raw.clone()).or_else(|_| self.fail_at(at, format!("invalid IRI <{raw}>")))
    }

    /// Reads `<...>` and resolves it against the base.
    fn iriref(&mut self) -> PResult<String> {
        let at = self.here();
        if self.peek() != Some('<') {
            return self.fail("expected '<'");
        }
        self.bump();
        let mut value = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some('\\') => match self.bump() {
                    Some('u') => value.push(self.hex_escape(4)?),
                    Some('U') => value.push(self.hex_escape(8)?),
                    _ => return self.fail("invalid escape in IRI"),
                },
                Some(c) if c.is_whitespace() || c.is_control() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return self.fail(format!("character {c:?} not allowed in IRI"));
                }
                Some(c) => value.push(c),
                None => return self.fail_at(at, "unterminated IRI"),
            }
        }
        self.resolve(&value, at)
    }

    fn resolve(&self, value: &str, at: (usize, usize)) -> PResult<String> {
        if is_absolute_iri(value) {
            return Ok(value.to_owned());
        }
        let Some(base) = &self.base else {
            return self.fail_at(at, format!("relative IRI <{value}> used with no base IRI"));
        };
        url::Url::parse(base)
            .and_then(|b| b.join(value))
            .map(String::from)
            .or_else(|e| self.fail_at(at, format!("cannot resolve <{value}> against <{base}>: {e}")))
    }

    fn resolve_pname(&self, token: &NameToken, at: (usize, usize)) -> PResult<Iri> {
        let prefix = token.prefix.as_deref().unwrap_or_default();
        let Some(ns) = self.prefixes.get(prefix) else {
            return self.fail_at(at, format!("undefined prefix {prefix:?}"));
        };
        let full = format!("{ns}{}", token.local);
        Iri::new(full.clone()).or_else(|_| self.fail_at(at, format!("invalid IRI <{full}>")))
    }

    fn read_name_token(&mut self) -> PResult<NameToken> {
        let mut text = String::new();
        let mut colon = None;
        loop {
            match self.peek() {
                Some(c) if is_name_char(c) => {
                    text.push(c);
                    self.bump();
                }
                Some(':') => {
                    if colon.is_none() {
                        colon = Some(text.len());
                    }
                    text.push(':');
                    self.bump();
                }
                Some('.') if self.peek_at(1).is_some_and(|n| is_name_char(n) || matches!(n, ':' | '%' | '\\')) => {
                    text.push('.');
                    self.bump();
                }
                Some('%') => {
                    let ok = [1, 2].iter().all(|&i| self.peek_at(i).is_some_and(|c| c.is_ascii_hexdigit()));
                    if !ok {
                        return self.fail("'%' must be followed by two hex digits");
                    }
                    for _ in 0..3 {
                        text.push(self.bump().expect("checked"));
                    }
                }
                Some('\\') => {
                    self.bump();
                    match self.bump() {
                        Some(c) if "_~.-!$&'()*+,;=/?#@%".contains(c) => text.push(c),
                        _ => return self.fail("invalid escape in prefixed name"),
                    }
                }
                _ => break,
            }
        }
        Ok(match colon {
            Some(idx) => NameToken {
                prefix: Some(text[..idx].to_owned()),
                local: text[idx + 1..].to_owned(),
            },
            None => NameToken {
                prefix: None,
                local: text,
            },
        })
    }

    // ---- literals ----------------------------------------------------------

    fn hex_escape(&mut self, digits: usize) -> PResult<char> {
        let mut code = 0u32;
        for _ in 0..digits {
            match self.bump().and_then(|c| c.to_digit(16)) {
                Some(d) => code = code * 16 + d,
                None => return self.fail("invalid hex digit in escape"),
            }
        }
        char::from_u32(code).map_or_else(|| self.fail(format!("invalid code point U+{code:X}")), Ok)
    }

    fn literal(&mut self) -> PResult<Term> {
        let at = self.here();
        let quote = self.bump().expect("caller checked quote");
        let long = self.peek() == Some(quote) && self.peek_at(1) == Some(quote);
        if long {
            self.bump();
            self.bump();
        }
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return self.fail_at(at, "unterminated string literal"),
                Some(c) if c == quote => {
                    if !long {
                        break;
                    }
                    if self.peek() == Some(quote) && self.peek_at(1) == Some(quote) {
                        // Quotes adjacent to the closing delimiter belong to the content.
                        while self.peek_at(2) == Some(quote) {
                            value.push(quote);
                            self.bump();
                        }
                        self.bump();
                        self.bump();
                        break;
                    }
                    value.push(c);
                }
                Some('\\') => {
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4)?,
                        Some('U') => self.hex_escape(8)?,
                        _ => return self.fail("invalid escape sequence in string"),
                    };
                    value.push(c);
                }
                Some('\n' | '\r') if !long => return self.fail("line break in short string literal"),
                Some(c) => value.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let lang = self.language_tag()?;
                Ok(Term::Literal(Literal::lang(value, &lang)))
            }
            Some('^') if self.peek_at(1) == Some('^') => {
                self.bump();
                self.bump();
                let datatype = match self.peek() {
                    Some('<') => self.iri_term()?,
                    _ => {
                        let at = self.here();
                        let token = self.read_name_token()?;
                        if token.prefix.is_none() {
                            return self.fail_at(at, "expected datatype IRI after '^^'");
                        }
                        self.resolve_pname(&token, at)?
                    }
                };
                Ok(Term::Literal(Literal::typed(value, datatype)))
            }
            _ => Ok(Term::Literal(Literal::plain(value))),
        }
    }

    fn language_tag(&mut self) -> PResult<String> {
        let mut tag = String::new();
        while let Some(c) = self.peek().filter(|c| c.is_ascii_alphabetic()) {
            tag.push(c);
            self.bump();
        }
        if tag.is_empty() {
            return self.fail("empty language tag");
        }
        while self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            tag.push('-');
            self.bump();
            while let Some(c) = self.peek().filter(|c| c.is_ascii_alphanumeric()) {
                tag.push(c);
                self.bump();
            }
        }
        Ok(tag)
    }

    fn number(&mut self) -> PResult<Term> {
        let at = self.here();
        let mut lexical = String::new();
        if let Some(sign) = self.peek().filter(|c| matches!(c, '+' | '-')) {
            lexical.push(sign);
            self.bump();
        }
        while let Some(d) = self.peek().filter(char::is_ascii_digit) {
            lexical.push(d);
            self.bump();
        }
        let decimal = self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit());
        if decimal || matches!(self.peek(), Some('e' | 'E')) {
            return self.fail_at(at, "decimal and double literals are not supported; use a typed string");
        }
        if !lexical.chars().any(|c| c.is_ascii_digit()) {
            return self.fail_at(at, "expected digits");
        }
        Ok(Term::Literal(Literal::typed(lexical, Iri::from_static(xsd::INTEGER))))
    }
}

struct NameToken {
    prefix: Option<String>,
    local: String,
}
