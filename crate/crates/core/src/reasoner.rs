//! Structural subclass closure and part-of (meronymy) queries over
//! existential restrictions.

use std::collections::{BTreeMap, BTreeSet};

use crate::ontology::{ClassId, OntologyModel, SubClassAxiom, SuperClass};
use crate::rdf::vocab::BFO_PART_OF;
use crate::rdf::Iri;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReasonerError {
    #[error("subclass cycle: {}", render_cycle(.0))]
    Cycle(Vec<ClassId>),
    #[error("unknown class <{0}>")]
    UnknownClass(ClassId),
}

fn render_cycle(cycle: &[ClassId]) -> String {
    let mut parts: Vec<String> = cycle.iter().map(|c| format!("<{c}>")).collect();
    if let Some(first) = parts.first().cloned() {
        parts.push(first);
    }
    parts.join(" ⊑ ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReasonerConfig {
    pub part_of: Iri,
    pub has_part: Option<Iri>,
    /// Let `P′ ⊑ ∃hasPart.C` contribute to queries for subclasses of `P′`.
    pub inherit_inverse: bool,
}

impl Default for ReasonerConfig {
    fn default() -> Self {
        ReasonerConfig {
            part_of: Iri::from_static(BFO_PART_OF),
            has_part: None,
            inherit_inverse: false,
        }
    }
}

/// Transitive, non-reflexive subclass relation over named classes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureIndex {
    direct_sup: BTreeMap<ClassId, BTreeSet<ClassId>>,
    direct_sub: BTreeMap<ClassId, BTreeSet<ClassId>>,
    sup: BTreeMap<ClassId, BTreeSet<ClassId>>,
    sub: BTreeMap<ClassId, BTreeSet<ClassId>>,
}

impl ClosureIndex {
    pub fn contains(&self, c: &ClassId) -> bool {
        self.sup.contains_key(c)
    }

    pub fn classes(&self) -> impl Iterator<Item = &ClassId> {
        self.sup.keys()
    }

    pub fn strict_superclasses(&self, c: &ClassId) -> Option<&BTreeSet<ClassId>> {
        self.sup.get(c)
    }

    pub fn strict_subclasses(&self, c: &ClassId) -> Option<&BTreeSet<ClassId>> {
        self.sub.get(c)
    }

    pub fn direct_superclasses(&self, c: &ClassId) -> Option<&BTreeSet<ClassId>> {
        self.direct_sup.get(c)
    }

    /// `a ⊑* b`
    pub fn is_subclass_or_equal(&self, a: &ClassId, b: &ClassId) -> bool {
        a == b || self.sup.get(a).is_some_and(|s| s.contains(b))
    }

    /// Classes without a named superclass.
    pub fn roots(&self) -> impl Iterator<Item = &ClassId> {
        self.direct_sup.iter().filter(|(_, s)| s.is_empty()).map(|(c, _)| c)
    }
}

pub fn build_closure(model: &OntologyModel) -> Result<ClosureIndex, ReasonerError> {
    let mut idx = ClosureIndex::default();
    for c in model.classes() {
        idx.direct_sup.insert(c.clone(), BTreeSet::new());
        idx.direct_sub.insert(c.clone(), BTreeSet::new());
    }
    for axiom in model.axioms() {
        if let SuperClass::Named(sup) = &axiom.sup {
            if sup == &axiom.sub {
                return Err(ReasonerError::Cycle(vec![sup.clone()]));
            }
            idx.direct_sup.entry(axiom.sub.clone()).or_default().insert(sup.clone());
            idx.direct_sub.entry(sup.clone()).or_default().insert(axiom.sub.clone());
            idx.direct_sup.entry(sup.clone()).or_default();
            idx.direct_sub.entry(axiom.sub.clone()).or_default();
        }
    }

    // Depth-first post-order: a class's closure is the union of its direct
    // superclasses' closures.
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&ClassId, Mark> = BTreeMap::new();
    let mut sup: BTreeMap<ClassId, BTreeSet<ClassId>> = BTreeMap::new();
    for start in idx.direct_sup.keys() {
        if marks.contains_key(start) {
            continue;
        }
        let mut stack: Vec<(&ClassId, std::collections::btree_set::Iter<'_, ClassId>)> =
            vec![(start, idx.direct_sup[start].iter())];
        marks.insert(start, Mark::Active);
        while let Some((node, children)) = stack.last_mut() {
            let node = *node;
            match children.next() {
                Some(next) => match marks.get(next) {
                    Some(Mark::Done) => {}
                    Some(Mark::Active) => {
                        let pos = stack.iter().position(|(n, _)| *n == next).expect("active node on stack");
                        return Err(ReasonerError::Cycle(stack[pos..].iter().map(|(n, _)| (*n).clone()).collect()));
                    }
                    None => {
                        marks.insert(next, Mark::Active);
                        stack.push((next, idx.direct_sup[next].iter()));
                    }
                },
                None => {
                    let mut all = BTreeSet::new();
                    for d in &idx.direct_sup[node] {
                        all.insert(d.clone());
                        all.extend(sup[d].iter().cloned());
                    }
                    sup.insert(node.clone(), all);
                    marks.insert(node, Mark::Done);
                    stack.pop();
                }
            }
        }
    }

    let mut sub: BTreeMap<ClassId, BTreeSet<ClassId>> = sup.keys().map(|c| (c.clone(), BTreeSet::new())).collect();
    for (c, supers) in &sup {
        for s in supers {
            sub.get_mut(s).expect("every class has an entry").insert(c.clone());
        }
    }
    idx.sup = sup;
    idx.sub = sub;
    Ok(idx)
}

/// Subclasses of `c`: one step when `direct`, otherwise transitive.
pub fn subclasses_of(idx: &ClosureIndex, c: &ClassId, direct: bool) -> Result<BTreeSet<ClassId>, ReasonerError> {
    let map = if direct { &idx.direct_sub } else { &idx.sub };
    map.get(c).cloned().ok_or_else(|| ReasonerError::UnknownClass(c.clone()))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MeronymyResult {
    pub children: BTreeSet<ClassId>,
    /// The axiom that licensed each child.
    pub justification: BTreeMap<ClassId, SubClassAxiom>,
}

impl MeronymyResult {
    fn add(&mut self, child: &ClassId, axiom: &SubClassAxiom) {
        if self.children.insert(child.clone()) {
            self.justification.insert(child.clone(), axiom.clone());
        }
    }
}

/// Named classes whose instances are necessarily part of some `parent`.
///
/// `C` is a child when an axiom `C′ ⊑ ∃partOf.P` exists with `P ⊑* parent`
/// and `C ⊑* C′`. With a has-part property configured, `parent ⊑ ∃hasPart.F`
/// adds `F` and its subclasses (for any `parent′` with `parent ⊑* parent′`
/// when `inherit_inverse` is set).
pub fn meronymy_of(
    model: &OntologyModel,
    idx: &ClosureIndex,
    parent: &ClassId,
    cfg: &ReasonerConfig,
) -> Result<MeronymyResult, ReasonerError> {
    if !model.contains_class(parent) || !idx.contains(parent) {
        return Err(ReasonerError::UnknownClass(parent.clone()));
    }
    let mut result = MeronymyResult::default();
    let add_with_subclasses = |result: &mut MeronymyResult, c: &ClassId, axiom: &SubClassAxiom| {
        result.add(c, axiom);
        for d in idx.strict_subclasses(c).into_iter().flatten() {
            result.add(d, axiom);
        }
    };
    for axiom in model.axioms() {
        let Some(r) = axiom.restriction() else { continue };
        if r.property == cfg.part_of && idx.is_subclass_or_equal(&r.filler, parent) {
            add_with_subclasses(&mut result, &axiom.sub, axiom);
        }
        if cfg.has_part.as_ref() == Some(&r.property) {
            let applies = if cfg.inherit_inverse {
                idx.is_subclass_or_equal(parent, &axiom.sub)
            } else {
                &axiom.sub == parent
            };
            if applies {
                add_with_subclasses(&mut result, &r.filler, axiom);
            }
        }
    }
    Ok(result)
}
