use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use super::ReportError;
use crate::ontology::{ClassId, OntologyModel};
use crate::rdf::vocab::{owl, rdf, rdfs, xsd};
use crate::rdf::{Graph, Iri, Literal, Term, Triple};
use crate::reasoner::{self, ClosureIndex, ReasonerConfig};
use crate::syntax::{self, ExportFormat};

/// Local name of the snippet-text property under `<baseIri>/vocab#`.
pub const TEXT_CONTENT_LOCAL: &str = "textContent";

#[derive(Debug, Clone, Default)]
pub struct SessionConfig {
    pub reasoner: ReasonerConfig,
    /// Class typing the report individual. When absent the ontology's
    /// model-card-report class is looked up by label or local name.
    pub root_class: Option<Iri>,
    /// Namespace for minted individuals; a fresh `urn:mcforge:session:<uuid>`
    /// when absent.
    pub base_iri: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnotatedSnippet {
    pub id: String,
    pub text: String,
    pub class_iri: ClassId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SnippetRow {
    pub id: String,
    pub text: String,
    pub class_iri: ClassId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassInfo {
    pub iri: ClassId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
}

/// `(child partOf parent)` between two individuals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LinkedPair {
    pub parent: Iri,
    pub child: Iri,
    pub property: Iri,
}

#[derive(Debug, Clone)]
pub struct PublishResult {
    pub graph: Graph,
    pub pairs: Vec<LinkedPair>,
    /// Snippet ids with no part-of path to the report individual.
    pub orphans: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ReportSession {
    ontology: Arc<OntologyModel>,
    closure: Arc<ClosureIndex>,
    reasoner: ReasonerConfig,
    root_class: ClassId,
    base_iri: String,
    report_iri: Iri,
    snippets: Vec<AnnotatedSnippet>,
    next_ordinal: usize,
    extra_prefixes: BTreeMap<String, String>,
    last_result: Option<PublishResult>,
}

pub fn open_session(ontology: Arc<OntologyModel>, config: &SessionConfig) -> Result<ReportSession, ReportError> {
    let closure = Arc::new(reasoner::build_closure(&ontology)?);
    let root_class = match &config.root_class {
        Some(c) if ontology.contains_class(c) => c.clone(),
        Some(c) => {
            return Err(ReportError::Configuration(format!("root class <{c}> is not a class of the ontology")));
        }
        None => find_report_class(&ontology)?,
    };
    let base_iri = match &config.base_iri {
        Some(base) => base.trim_end_matches('/').to_owned(),
        None => format!("urn:mcforge:session:{}", uuid::Uuid::new_v4()),
    };
    let report_iri = Iri::new(format!("{base_iri}/report"))
        .map_err(|_| ReportError::Configuration(format!("base IRI {base_iri:?} is not an absolute IRI")))?;
    Ok(ReportSession {
        ontology,
        closure,
        reasoner: config.reasoner.clone(),
        root_class,
        base_iri,
        report_iri,
        snippets: Vec::new(),
        next_ordinal: 1,
        extra_prefixes: BTreeMap::new(),
        last_result: None,
    })
}

fn find_report_class(ontology: &OntologyModel) -> Result<ClassId, ReportError> {
    let normalize = |s: &str| s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
    let candidates: Vec<&ClassId> = ontology
        .classes()
        .iter()
        .filter(|c| {
            let label = ontology.class_annotations(c).ok().and_then(|a| a.label);
            label.is_some_and(|l| normalize(&l) == "modelcardreport") || c.split_local().1 == "ModelCardReport"
        })
        .collect();
    match candidates.as_slice() {
        [one] => Ok((*one).clone()),
        [] => Err(ReportError::Configuration(
            "the ontology has no model card report class; set root_class_iri".into(),
        )),
        many => Err(ReportError::Configuration(format!(
            "several candidate report classes ({}); set root_class_iri",
            many.iter().map(|c| format!("<{c}>")).collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn valid_snippet_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

impl ReportSession {
    pub fn ontology(&self) -> &OntologyModel {
        &self.ontology
    }

    pub fn closure(&self) -> &ClosureIndex {
        &self.closure
    }

    pub fn reasoner_config(&self) -> &ReasonerConfig {
        &self.reasoner
    }

    pub fn root_class(&self) -> &ClassId {
        &self.root_class
    }

    pub fn base_iri(&self) -> &str {
        &self.base_iri
    }

    pub fn report_iri(&self) -> &Iri {
        &self.report_iri
    }

    pub fn snippets(&self) -> &[AnnotatedSnippet] {
        &self.snippets
    }

    pub fn last_result(&self) -> Option<&PublishResult> {
        self.last_result.as_ref()
    }

    pub fn individual_iri(&self, snippet_id: &str) -> Iri {
        Iri::new(format!("{}/{snippet_id}", self.base_iri)).expect("base IRI is absolute and ids are IRI-safe")
    }

    pub fn text_content_property(&self) -> Iri {
        Iri::new(format!("{}/vocab#{TEXT_CONTENT_LOCAL}", self.base_iri)).expect("base IRI is absolute")
    }

    /// Extra prefixes for resolving prefixed class names, consulted before
    /// the ontology's own.
    pub fn set_prefixes(&mut self, prefixes: BTreeMap<String, String>) {
        self.extra_prefixes = prefixes;
    }

    /// Resolves an absolute or prefixed class name to a class of the ontology.
    pub fn resolve_class(&self, name: &str) -> Result<ClassId, ReportError> {
        let name = name.trim();
        let expanded = name.split_once(':').and_then(|(prefix, local)| {
            if let Some(ns) = self.extra_prefixes.get(prefix) {
                return Iri::new(format!("{ns}{local}")).ok();
            }
            self.ontology.source_graph().expand_curie(name)
        });
        let iri = match expanded {
            Some(iri) => iri,
            None => Iri::new(name).map_err(|_| ReportError::UnknownClass(name.to_owned()))?,
        };
        if self.ontology.contains_class(&iri) {
            Ok(iri)
        } else {
            Err(ReportError::UnknownClass(name.to_owned()))
        }
    }

    /// Appends a snippet and returns its id (`s1`, `s2`, ...).
    pub fn add_snippet(&mut self, text: &str, class: &str) -> Result<String, ReportError> {
        self.add_snippet_with_id(None, text, class)
    }

    pub fn add_snippet_with_id(&mut self, id: Option<&str>, text: &str, class: &str) -> Result<String, ReportError> {
        if text.trim().is_empty() {
            return Err(ReportError::Validation("snippet text must not be empty".into()));
        }
        let class_iri = self.resolve_class(class)?;
        let id = match id {
            Some(id) if !valid_snippet_id(id) => {
                return Err(ReportError::Validation(format!(
                    "snippet id {id:?} must be non-empty and use only ASCII letters, digits, '-', '_' or '.'"
                )));
            }
            Some(id) if self.snippets.iter().any(|s| s.id == id) => {
                return Err(ReportError::Validation(format!("duplicate snippet id {id:?}")));
            }
            Some(id) => id.to_owned(),
            None => loop {
                let candidate = format!("s{}", self.next_ordinal);
                self.next_ordinal += 1;
                if !self.snippets.iter().any(|s| s.id == candidate) {
                    break candidate;
                }
            },
        };
        self.snippets.push(AnnotatedSnippet {
            id: id.clone(),
            text: text.to_owned(),
            class_iri,
        });
        self.last_result = None;
        Ok(id)
    }

    pub fn remove_snippet(&mut self, id: &str) -> Result<AnnotatedSnippet, ReportError> {
        let pos = self
            .snippets
            .iter()
            .position(|s| s.id == id)
            .ok_or_else(|| ReportError::UnknownSnippet(id.to_owned()))?;
        self.last_result = None;
        Ok(self.snippets.remove(pos))
    }

    pub fn list_snippets(&self) -> Vec<SnippetRow> {
        self.snippets
            .iter()
            .map(|s| SnippetRow {
                id: s.id.clone(),
                text: s.text.clone(),
                class_iri: s.class_iri.clone(),
                class_label: self.ontology.class_annotations(&s.class_iri).ok().and_then(|a| a.label),
            })
            .collect()
    }

    pub fn class_info(&self, c: &ClassId) -> Result<ClassInfo, ReportError> {
        let a = self
            .ontology
            .class_annotations(c)
            .map_err(|_| ReportError::UnknownClass(c.to_string()))?;
        Ok(ClassInfo {
            iri: c.clone(),
            label: a.label,
            comment: a.comment,
        })
    }

    /// Annotation categories: the root class, its direct subclasses, the
    /// other top-level classes of the hierarchy, then `auxiliary`.
    pub fn categories(&self, auxiliary: &[Iri]) -> Vec<ClassInfo> {
        let mut seen = BTreeSet::new();
        let direct = reasoner::subclasses_of(&self.closure, &self.root_class, true).unwrap_or_default();
        std::iter::once(&self.root_class)
            .chain(direct.iter())
            .chain(self.closure.roots())
            .chain(auxiliary.iter().filter(|c| self.ontology.contains_class(c)))
            .filter(|c| seen.insert((*c).clone()))
            .filter_map(|c| self.class_info(c).ok())
            .collect()
    }

    /// Transitive subclasses of `category`.
    pub fn classes_in(&self, category: &ClassId) -> Result<Vec<ClassInfo>, ReportError> {
        let subs = reasoner::subclasses_of(&self.closure, category, false)
            .map_err(|_| ReportError::UnknownClass(category.to_string()))?;
        subs.iter().map(|c| self.class_info(c)).collect()
    }

    /// Mints one individual per snippet, links them along the inferred
    /// part-of relation and adds everything to a copy of the ontology graph.
    pub fn encode(&mut self) -> Result<PublishResult, ReportError> {
        if self.snippets.is_empty() {
            return Err(ReportError::EmptySession);
        }
        let ontology = &*self.ontology;
        let part_of = self.reasoner.part_of.clone();
        let mut graph = ontology.source_graph().clone();
        for (prefix, ns) in [("rdf", rdf::NS), ("rdfs", rdfs::NS), ("owl", owl::NS), ("xsd", xsd::NS)] {
            let taken = graph.prefixes().contains_key(prefix) || graph.prefixes().values().any(|v| v.as_str() == ns);
            if !taken {
                graph.set_prefix(prefix, Iri::new(ns).expect("vocabulary namespaces are absolute"));
            }
        }
        for (prefix, ns) in [("card", format!("{}/", self.base_iri)), ("mcf", format!("{}/vocab#", self.base_iri))] {
            if !graph.prefixes().contains_key(prefix) {
                if let Ok(ns) = Iri::new(ns) {
                    graph.set_prefix(prefix, ns);
                }
            }
        }

        let rdf_type = Iri::new(rdf::TYPE).expect("absolute");
        let label = Iri::new(rdfs::LABEL).expect("absolute");
        let text_content = self.text_content_property();
        let xsd_string = Iri::new(xsd::STRING).expect("absolute");
        let mut add = |s: &Iri, p: &Iri, o: Term| {
            graph.insert(Triple::new(s.clone(), p.clone(), o).expect("IRI subject and predicate"));
        };

        add(&self.report_iri, &rdf_type, self.root_class.clone().into());
        let mut instances: BTreeMap<&ClassId, Vec<(&AnnotatedSnippet, Iri)>> = BTreeMap::new();
        let mut annotated_order: Vec<&ClassId> = Vec::new();
        for s in &self.snippets {
            let individual = self.individual_iri(&s.id);
            add(&individual, &rdf_type, s.class_iri.clone().into());
            add(&individual, &label, Literal::plain(s.text.clone()).into());
            add(&individual, &text_content, Literal::typed(s.text.clone(), xsd_string.clone()).into());
            let entry = instances.entry(&s.class_iri).or_default();
            if entry.is_empty() {
                annotated_order.push(&s.class_iri);
            }
            entry.push((s, individual));
        }

        let mut pairs = Vec::new();
        let mut warnings = Vec::new();
        let root = reasoner::meronymy_of(ontology, &self.closure, &self.root_class, &self.reasoner)?;
        for s in &self.snippets {
            if root.children.contains(&s.class_iri) {
                pairs.push(LinkedPair {
                    parent: self.report_iri.clone(),
                    child: self.individual_iri(&s.id),
                    property: part_of.clone(),
                });
            }
        }
        for class in &annotated_order {
            let parents = &instances[class];
            let meronymy = reasoner::meronymy_of(ontology, &self.closure, class, &self.reasoner)?;
            for child_class in &meronymy.children {
                match instances.get(child_class) {
                    Some(children) => {
                        for (_, parent) in parents {
                            for (_, child) in children {
                                if parent != child {
                                    pairs.push(LinkedPair {
                                        parent: parent.clone(),
                                        child: child.clone(),
                                        property: part_of.clone(),
                                    });
                                }
                            }
                        }
                    }
                    None if **class != self.root_class => warnings.push(format!(
                        "<{child_class}> is part of <{class}> but no snippet is annotated with it"
                    )),
                    None => {}
                }
            }
        }

        // Snippets reach the report by following child -> parent links.
        let mut children_of: HashMap<&Iri, Vec<&Iri>> = HashMap::new();
        for p in &pairs {
            children_of.entry(&p.parent).or_default().push(&p.child);
        }
        let mut reachable: BTreeSet<&Iri> = BTreeSet::new();
        let mut queue = VecDeque::from([&self.report_iri]);
        while let Some(node) = queue.pop_front() {
            for child in children_of.get(node).into_iter().flatten() {
                if reachable.insert(child) {
                    queue.push_back(child);
                }
            }
        }
        let mut orphans = Vec::new();
        for (s, individual) in instances.values().flatten() {
            if !reachable.contains(individual) {
                orphans.push((s.id.clone(), s.class_iri.clone()));
            }
        }
        let position: HashMap<&str, usize> =
            self.snippets.iter().enumerate().map(|(i, s)| (s.id.as_str(), i)).collect();
        orphans.sort_by_key(|(id, _)| position[id.as_str()]);
        for (id, class) in &orphans {
            warnings.push(format!("snippet {id} (<{class}>) has no part-of path to the report"));
        }

        for p in &pairs {
            graph.insert(Triple::new(p.child.clone(), p.property.clone(), p.parent.clone()).expect("IRI terms"));
        }
        let result = PublishResult {
            graph,
            pairs,
            orphans: orphans.into_iter().map(|(id, _)| id).collect(),
            warnings,
        };
        self.last_result = Some(result.clone());
        Ok(result)
    }

    /// Serializes the result of the most recent [`encode`](Self::encode).
    pub fn export(&self, format: ExportFormat) -> Result<String, ReportError> {
        let result = self.last_result.as_ref().ok_or(ReportError::NotEncoded)?;
        Ok(syntax::serialize(&result.graph, format)?)
    }
}
