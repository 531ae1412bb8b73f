use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::OntologyError;
use crate::rdf::vocab::{owl, rdf, rdfs};
use crate::rdf::{BlankNode, Graph, Iri, Literal, Term, Triple};

/// Named classes are identified by their IRI.
pub type ClassId = Iri;

/// `∃property.filler`
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExistentialRestriction {
    pub property: Iri,
    pub filler: ClassId,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuperClass {
    Named(ClassId),
    Restriction(ExistentialRestriction),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubClassAxiom {
    pub sub: ClassId,
    pub sup: SuperClass,
}

impl SubClassAxiom {
    pub fn named(sub: ClassId, sup: ClassId) -> Self {
        SubClassAxiom { sub, sup: SuperClass::Named(sup) }
    }

    pub fn some_values_from(sub: ClassId, property: Iri, filler: ClassId) -> Self {
        SubClassAxiom {
            sub,
            sup: SuperClass::Restriction(ExistentialRestriction { property, filler }),
        }
    }

    pub fn restriction(&self) -> Option<&ExistentialRestriction> {
        match &self.sup {
            SuperClass::Restriction(r) => Some(r),
            SuperClass::Named(_) => None,
        }
    }
}

impl std::fmt::Display for SubClassAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.sup {
            SuperClass::Named(c) => write!(f, "<{}> SubClassOf <{}>", self.sub, c),
            SuperClass::Restriction(r) => {
                write!(f, "<{}> SubClassOf <{}> some <{}>", self.sub, r.property, r.filler)
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClassAnnotations {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

/// Indexed, read-only view of an ontology graph.
#[derive(Debug, Clone, Default)]
pub struct OntologyModel {
    classes: BTreeSet<ClassId>,
    axioms: BTreeSet<SubClassAxiom>,
    object_properties: BTreeSet<Iri>,
    annotations: BTreeMap<ClassId, ClassAnnotations>,
    individuals: BTreeMap<ClassId, BTreeSet<Iri>>,
    imports: BTreeSet<Iri>,
    source: Graph,
    warnings: Vec<String>,
}

impl OntologyModel {
    pub fn classes(&self) -> &BTreeSet<ClassId> {
        &self.classes
    }

    pub fn contains_class(&self, c: &Iri) -> bool {
        self.classes.contains(c)
    }

    pub fn axioms(&self) -> &BTreeSet<SubClassAxiom> {
        &self.axioms
    }

    pub fn object_properties(&self) -> &BTreeSet<Iri> {
        &self.object_properties
    }

    pub fn individuals(&self) -> &BTreeMap<ClassId, BTreeSet<Iri>> {
        &self.individuals
    }

    /// Targets of `owl:imports` statements.
    pub fn imports(&self) -> &BTreeSet<Iri> {
        &self.imports
    }

    pub fn source_graph(&self) -> &Graph {
        &self.source
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn class_annotations(&self, c: &Iri) -> Result<ClassAnnotations, OntologyError> {
        if !self.classes.contains(c) {
            return Err(OntologyError::UnknownClass(c.clone()));
        }
        Ok(self.annotations.get(c).cloned().unwrap_or_default())
    }

    /// The indexed axioms written back as triples, restrictions on fresh
    /// blank nodes.
    pub fn axiom_triples(&self) -> Graph {
        let mut g = Graph::new();
        let sub_class_of = Iri::from_static(rdfs::SUB_CLASS_OF);
        for (i, axiom) in self.axioms.iter().enumerate() {
            let add = |g: &mut Graph, s: Term, p: &'static str, o: Term| {
                g.insert(Triple::new(s, Iri::from_static(p), o).expect("IRI predicate"));
            };
            match &axiom.sup {
                SuperClass::Named(c) => add(&mut g, axiom.sub.clone().into(), rdfs::SUB_CLASS_OF, c.clone().into()),
                SuperClass::Restriction(r) => {
                    let b = Term::Blank(BlankNode::new(format!("r{i}")).expect("non-empty label"));
                    g.insert(Triple::new(axiom.sub.clone(), sub_class_of.clone(), b.clone()).expect("IRI predicate"));
                    add(&mut g, b.clone(), rdf::TYPE, Iri::from_static(owl::RESTRICTION).into());
                    add(&mut g, b.clone(), owl::ON_PROPERTY, r.property.clone().into());
                    add(&mut g, b, owl::SOME_VALUES_FROM, r.filler.clone().into());
                }
            }
        }
        g
    }
}

/// Builds the indexed view of `graph`. Triples outside the supported
/// construct set are reported in [`OntologyModel::warnings`].
pub fn extract(graph: &Graph) -> OntologyModel {
    Extractor::new(graph).run()
}

struct Extractor<'g> {
    graph: &'g Graph,
    model: OntologyModel,
    consumed: BTreeSet<&'g Triple>,
    restrictions: BTreeMap<&'g Term, ExistentialRestriction>,
}

impl<'g> Extractor<'g> {
    fn new(graph: &'g Graph) -> Self {
        Extractor {
            graph,
            model: OntologyModel {
                source: graph.clone(),
                ..OntologyModel::default()
            },
            consumed: BTreeSet::new(),
            restrictions: BTreeMap::new(),
        }
    }

    fn warn(&mut self, msg: String) {
        self.model.warnings.push(msg);
    }

    fn run(mut self) -> OntologyModel {
        let graph = self.graph;
        for t in graph {
            if t.predicate().as_str() != rdf::TYPE {
                continue;
            }
            let Some(ty) = t.object().as_iri() else { continue };
            match (ty.as_str(), t.subject()) {
                (owl::CLASS, Term::Iri(c)) => {
                    self.model.classes.insert(c.clone());
                }
                (owl::OBJECT_PROPERTY, Term::Iri(p)) => {
                    self.model.object_properties.insert(p.clone());
                }
                (owl::ONTOLOGY | owl::NAMED_INDIVIDUAL, Term::Iri(_)) => {}
                (owl::CLASS, Term::Blank(_)) => {
                    // Anonymous class expressions are outside the supported set.
                    continue;
                }
                (owl::RESTRICTION, subject) => {
                    self.restriction(subject);
                    continue;
                }
                _ => continue,
            }
            self.consumed.insert(t);
        }

        for t in graph {
            if t.predicate().as_str() == rdfs::SUB_CLASS_OF {
                self.sub_class_of(t);
            }
        }

        let mut annotation_candidates: BTreeMap<(&Iri, bool), (u8, &str)> = BTreeMap::new();
        for t in graph {
            let p = t.predicate().as_str();
            if p == owl::IMPORTS {
                if let (Term::Iri(_), Term::Iri(target)) = (t.subject(), t.object()) {
                    self.model.imports.insert(target.clone());
                    self.consumed.insert(t);
                }
            } else if p == rdfs::LABEL || p == rdfs::COMMENT {
                let Term::Literal(lit) = t.object() else { continue };
                self.consumed.insert(t);
                if let Term::Iri(c) = t.subject() {
                    if self.model.classes.contains(c) {
                        let rank = literal_rank(lit);
                        let best = annotation_candidates.entry((c, p == rdfs::LABEL)).or_insert(rank);
                        if rank < *best {
                            *best = rank;
                        }
                    }
                }
            } else if p == rdf::TYPE {
                if let (Term::Iri(x), Term::Iri(c)) = (t.subject(), t.object()) {
                    if self.model.classes.contains(c) {
                        self.model.individuals.entry(c.clone()).or_default().insert(x.clone());
                        self.consumed.insert(t);
                    }
                }
            }
        }

        for ((c, is_label), (_, text)) in annotation_candidates {
            let entry = self.model.annotations.entry(c.clone()).or_default();
            let slot = if is_label { &mut entry.label } else { &mut entry.comment };
            *slot = Some(text.to_owned());
        }

        let mut ignored: BTreeMap<String, usize> = BTreeMap::new();
        for t in graph {
            if self.consumed.contains(t) {
                continue;
            }
            let key = match (t.predicate().as_str(), t.object()) {
                (rdf::TYPE, Term::Iri(ty)) => format!("rdf:type <{ty}>"),
                (p, _) => format!("<{p}>"),
            };
            *ignored.entry(key).or_default() += 1;
        }
        for (key, n) in ignored {
            self.warn(format!("ignored {n} triple(s) using unsupported construct {key}"));
        }
        self.model
    }

    fn restriction(&mut self, node: &'g Term) {
        let graph = self.graph;
        let mut on_property = Vec::new();
        let mut some_values_from = Vec::new();
        let mut triples = Vec::new();
        for t in graph.matching(Some(node), None, None) {
            match t.predicate().as_str() {
                rdf::TYPE if t.object().as_iri().is_some_and(|o| o.as_str() == owl::RESTRICTION) => triples.push(t),
                owl::ON_PROPERTY => {
                    on_property.push(t.object());
                    triples.push(t);
                }
                owl::SOME_VALUES_FROM => {
                    some_values_from.push(t.object());
                    triples.push(t);
                }
                _ => {}
            }
        }
        let restriction = match (node, on_property.as_slice(), some_values_from.as_slice()) {
            (Term::Blank(_), [Term::Iri(p)], [Term::Iri(f)]) => ExistentialRestriction {
                property: p.clone(),
                filler: f.clone(),
            },
            _ => {
                self.warn(format!(
                    "malformed restriction {node}: expected a blank node with exactly one owl:onProperty and one \
                     owl:someValuesFrom naming IRIs (found {} and {})",
                    on_property.len(),
                    some_values_from.len()
                ));
                self.consumed.extend(triples);
                return;
            }
        };
        self.consumed.extend(triples);
        self.restrictions.insert(node, restriction);
    }

    fn sub_class_of(&mut self, t: &'g Triple) {
        let Term::Iri(sub) = t.subject() else {
            self.warn(format!("subclass axiom with non-IRI subject {} skipped", t.subject()));
            self.consumed.insert(t);
            return;
        };
        let sup = match t.object() {
            Term::Iri(c) => SuperClass::Named(c.clone()),
            blank @ Term::Blank(_) => match self.restrictions.get(blank) {
                Some(r) => SuperClass::Restriction(r.clone()),
                None => {
                    let typed_restriction = self.graph.objects(blank, rdf::TYPE).any(|o| {
                        o.as_iri().is_some_and(|o| o.as_str() == owl::RESTRICTION)
                    });
                    if !typed_restriction {
                        self.warn(format!("unsupported superclass expression {} for <{sub}> skipped", t.object()));
                    }
                    self.consumed.insert(t);
                    return;
                }
            },
            Term::Literal(_) => {
                self.warn(format!("subclass axiom for <{sub}> has a literal superclass; skipped"));
                self.consumed.insert(t);
                return;
            }
        };
        self.model.classes.insert(sub.clone());
        match &sup {
            SuperClass::Named(c) => self.model.classes.insert(c.clone()),
            SuperClass::Restriction(r) => self.model.classes.insert(r.filler.clone()),
        };
        self.model.axioms.insert(SubClassAxiom { sub: sub.clone(), sup });
        self.consumed.insert(t);
    }
}

/// English wins over other languages, untagged over tagged, then the
/// lexically smallest value.
fn literal_rank(lit: &Literal) -> (u8, &str) {
    let lang_rank = match lit.language() {
        Some(l) if l == "en" || l.starts_with("en-") => 0,
        None => 1,
        Some(_) => 2,
    };
    (lang_rank, lit.lexical())
}
