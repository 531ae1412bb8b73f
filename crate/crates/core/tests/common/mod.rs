#![allow(dead_code, clippy::needless_range_loop)]

pub mod api;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;

use mcforge::ontology::{extract, OntologyModel};
use mcforge::rdf::{Graph, Iri, Literal, Term, Triple};
use mcforge::report::{open_session, ReportSession, SessionConfig};
use mcforge::syntax::parse_turtle;

pub const MCRO: &str = "http://example.org/mini-mcro#";
pub const PART_OF: &str = "http://purl.obolibrary.org/obo/BFO_0000050";
pub const HAS_PART: &str = "http://purl.obolibrary.org/obo/BFO_0000051";
pub const SAMPLE_BASE: &str = "http://example.org/cards/sample";

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn fixture_graph() -> Graph {
    let text = std::fs::read_to_string(fixture_path("mini-mcro.ttl")).unwrap();
    parse_turtle(&text, None).unwrap()
}

pub fn fixture_model() -> Arc<OntologyModel> {
    Arc::new(extract(&fixture_graph()))
}

pub fn mcro(local: &str) -> Iri {
    Iri::new(format!("{MCRO}{local}")).unwrap()
}

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn fixture_session(base: &str) -> ReportSession {
    open_session(
        fixture_model(),
        &SessionConfig {
            base_iri: Some(base.to_owned()),
            ..SessionConfig::default()
        },
    )
    .unwrap()
}

/// The three section snippets used by the CLI/service equivalence checks.
pub const THREE_SNIPPETS: [(&str, &str); 3] = [
    ("Intended for triage support only.", "mcro:IntendedUseSection"),
    ("Not validated on pediatric images.", "mcro:LimitationSection"),
    ("AUROC 0.91 on the held-out set.", "mcro:PerformanceSection"),
];

pub fn three_snippet_manifest(base: &str) -> String {
    let snippets: Vec<_> = THREE_SNIPPETS
        .iter()
        .map(|(text, class)| serde_json::json!({ "text": text, "class": class }))
        .collect();
    serde_json::json!({
        "ontology": fixture_path("mini-mcro.ttl"),
        "baseIri": base,
        "prefixes": { "mcro": MCRO },
        "snippets": snippets,
    })
    .to_string()
}

// ---- random graphs --------------------------------------------------------

fn arb_iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        (0..6u8).prop_map(|i| format!("http://example.org/r{i}")),
        (0..4u8).prop_map(|i| format!("http://example.org/ns#Thing{i}")),
        Just("urn:isbn:0451450523".to_owned()),
        Just("http://example.org/path/with%20escape?q=1&r=2".to_owned()),
        Just("http://example.org/caf\u{e9}/\u{1F600}".to_owned()),
        Just("https://example.org/a.b".to_owned()),
        Just("mailto:someone@example.org".to_owned()),
    ]
    .prop_map(|s| Iri::new(s).unwrap())
}

/// Predicates end in an XML name so every format can carry them.
fn arb_predicate() -> impl Strategy<Value = Iri> {
    prop_oneof![
        (0..5u8).prop_map(|i| format!("http://example.org/p{i}")),
        Just("http://www.w3.org/1999/02/22-rdf-syntax-ns#type".to_owned()),
        Just("http://www.w3.org/2000/01/rdf-schema#label".to_owned()),
        Just("http://example.org/ns#has-part".to_owned()),
        Just("urn:x:prop_1".to_owned()),
    ]
    .prop_map(|s| Iri::new(s).unwrap())
}

fn arb_text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zA-Z0-9 ]{0,12}",
        Just(String::new()),
        Just("quote \" and backslash \\".to_owned()),
        Just("line\nbreak\r\ttab".to_owned()),
        Just("<xml> & 'apos' ]]>".to_owned()),
        Just("caf\u{e9} \u{1F600} \u{7f}\u{85}".to_owned()),
        Just("  leading and trailing  ".to_owned()),
        Just("\"\"\"triple\"\"\"".to_owned()),
        // Any character XML 1.0 can carry.
        proptest::collection::vec(
            prop_oneof![
                Just('\t'),
                Just('\n'),
                Just('\r'),
                proptest::char::range(' ', '\u{d7ff}'),
                proptest::char::range('\u{e000}', '\u{fffd}'),
                proptest::char::range('\u{10000}', '\u{10ffff}'),
            ],
            0..8
        )
        .prop_map(|cs| cs.into_iter().collect()),
    ]
}

fn arb_literal() -> impl Strategy<Value = Literal> {
    let xsd = |l: &str| Iri::new(format!("http://www.w3.org/2001/XMLSchema#{l}")).unwrap();
    prop_oneof![
        arb_text().prop_map(Literal::plain),
        (arb_text(), prop_oneof![Just("en"), Just("en-GB"), Just("de"), Just("zh-Hant-TW")])
            .prop_map(|(t, l)| Literal::lang(t, l)),
        any::<i32>().prop_map(move |n| Literal::typed(n.to_string(), xsd("integer"))),
        Just(Literal::typed("007", xsd("integer"))),
        Just(Literal::typed("+5", xsd("integer"))),
        any::<bool>().prop_map(move |b| Literal::typed(b.to_string(), xsd("boolean"))),
        Just(Literal::typed("1.50", xsd("decimal"))),
        Just(Literal::typed("1e3", xsd("double"))),
        (arb_text(), arb_iri()).prop_map(|(t, dt)| Literal::typed(t, dt)),
    ]
}

#[derive(Debug, Clone)]
enum NodeSpec {
    Iri(Iri),
    Blank(u8),
}

fn arb_node() -> impl Strategy<Value = NodeSpec> {
    prop_oneof![
        3 => arb_iri().prop_map(NodeSpec::Iri),
        2 => (0..5u8).prop_map(NodeSpec::Blank),
    ]
}

fn node_term(n: NodeSpec) -> Term {
    match n {
        NodeSpec::Iri(i) => Term::Iri(i),
        NodeSpec::Blank(b) => Term::blank(format!("g{b}")).unwrap(),
    }
}

/// Graphs of up to 50 triples over at most five blank nodes, with an
/// optional prefix map.
pub fn arb_graph() -> impl Strategy<Value = Graph> {
    let object = prop_oneof![
        2 => arb_node().prop_map(node_term),
        2 => arb_literal().prop_map(Term::Literal),
    ];
    let triple = (arb_node(), arb_predicate(), object)
        .prop_map(|(s, p, o)| Triple::new(node_term(s), p, o).unwrap());
    let prefixes = proptest::collection::btree_map(
        prop_oneof![Just("ex"), Just("ns"), Just(""), Just("urn"), Just("rdf"), Just("p0")],
        prop_oneof![
            Just("http://example.org/"),
            Just("http://example.org/ns#"),
            Just("http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
            Just("urn:x:"),
        ],
        0..4,
    );
    (proptest::collection::vec(triple, 0..=50), prefixes).prop_map(|(triples, prefixes)| {
        let mut g: Graph = triples.into_iter().collect();
        for (p, ns) in prefixes {
            g.set_prefix(p, Iri::new(ns).unwrap());
        }
        g
    })
}

// ---- random ontologies ----------------------------------------------------

/// A random acyclic ontology in index form: class `i` may only be a
/// subclass of classes with a smaller rank.
#[derive(Debug, Clone)]
pub struct RandomOntology {
    pub classes: usize,
    pub named: BTreeSet<(usize, usize)>,
    /// `(sub, property index, filler)`; property 0 is part-of, 1 is has-part,
    /// 2 is an unrelated property.
    pub restrictions: BTreeSet<(usize, u8, usize)>,
}

pub fn arb_ontology() -> impl Strategy<Value = RandomOntology> {
    (1..=15usize)
        .prop_flat_map(|n| {
            (
                Just(n),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
                proptest::collection::vec((0..n, 0..n), 0..=20),
                proptest::collection::vec((0..n, prop_oneof![3 => Just(0u8), 1 => Just(1u8), 1 => Just(2u8)], 0..n), 0..=10),
            )
        })
        .prop_map(|(n, rank, pairs, restrictions)| RandomOntology {
            classes: n,
            named: pairs
                .into_iter()
                .filter(|(a, b)| rank[*a] > rank[*b])
                .collect(),
            restrictions: restrictions.into_iter().collect(),
        })
}

impl RandomOntology {
    pub fn class(i: usize) -> Iri {
        Iri::new(format!("http://example.org/o#C{i}")).unwrap()
    }

    pub fn property(p: u8) -> &'static str {
        match p {
            0 => PART_OF,
            1 => HAS_PART,
            _ => "http://example.org/o#relatedTo",
        }
    }

    pub fn turtle(&self) -> String {
        let mut out = String::from(
            "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
             @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n\
             @prefix o: <http://example.org/o#> .\n",
        );
        for i in 0..self.classes {
            out.push_str(&format!("o:C{i} a owl:Class .\n"));
        }
        for (a, b) in &self.named {
            out.push_str(&format!("o:C{a} rdfs:subClassOf o:C{b} .\n"));
        }
        for (a, p, f) in &self.restrictions {
            out.push_str(&format!(
                "o:C{a} rdfs:subClassOf [ a owl:Restriction ; owl:onProperty <{}> ; owl:someValuesFrom o:C{f} ] .\n",
                Self::property(*p)
            ));
        }
        out
    }

    pub fn model(&self) -> OntologyModel {
        extract(&parse_turtle(&self.turtle(), None).unwrap())
    }

    /// Reflexive-transitive subclass relation by repeated squaring of
    /// `I ∪ A`, where `A` is the direct subclass adjacency.
    pub fn reach(&self) -> Vec<Vec<bool>> {
        let n = self.classes;
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in &self.named {
            r[*a][*b] = true;
        }
        loop {
            let mut sq = vec![vec![false; n]; n];
            for i in 0..n {
                for k in 0..n {
                    if r[i][k] {
                        for j in 0..n {
                            sq[i][j] |= r[k][j];
                        }
                    }
                }
            }
            if sq == r {
                return r;
            }
            r = sq;
        }
    }

    /// Children of `parent` by checking every (class, axiom) pair.
    pub fn meronymy_oracle(&self, parent: usize, has_part: bool, inherit_inverse: bool) -> BTreeSet<usize> {
        let r = self.reach();
        let mut out = BTreeSet::new();
        for c in 0..self.classes {
            for (sub, p, filler) in &self.restrictions {
                let part_of = *p == 0 && r[*filler][parent] && r[c][*sub];
                let inverse = has_part
                    && *p == 1
                    && (*sub == parent || (inherit_inverse && r[parent][*sub]))
                    && r[c][*filler];
                if part_of || inverse {
                    out.insert(c);
                }
            }
        }
        out
    }

    pub fn index_of(iri: &Iri) -> usize {
        iri.as_str().rsplit_once("#C").unwrap().1.parse().unwrap()
    }
}

pub fn indices(set: &BTreeSet<Iri>) -> BTreeSet<usize> {
    set.iter().map(RandomOntology::index_of).collect()
}

/// Every blank-node star of `part` (a restriction written as triples) is
/// matched by some blank node of `whole` with the same outgoing triples, and
/// every ground triple of `part` is in `whole`.
pub fn star_subgraph(part: &Graph, whole: &Graph) -> bool {
    let mut stars: BTreeMap<&Term, Vec<&Triple>> = BTreeMap::new();
    for t in part {
        if let Term::Blank(_) = t.subject() {
            stars.entry(t.subject()).or_default().push(t);
        }
    }
    for t in part {
        match (t.subject(), t.object()) {
            (Term::Blank(_), _) => {}
            (_, Term::Blank(_)) => {
                let star = &stars[t.object()];
                let found = whole.matching(Some(t.subject()), Some(&Term::Iri(t.predicate().clone())), None).any(|w| {
                    w.object().is_blank()
                        && star.iter().all(|s| {
                            whole.contains(
                                &Triple::new(w.object().clone(), s.predicate().clone(), s.object().clone()).unwrap(),
                            )
                        })
                });
                if !found {
                    return false;
                }
            }
            _ if !whole.contains(t) => return false,
            _ => {}
        }
    }
    true
}
