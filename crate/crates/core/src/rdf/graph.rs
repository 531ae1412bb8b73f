use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::term::{BlankNode, Iri, Term, Triple};

/// A set of triples plus the prefix map used when serializing it.
///
/// IRIs are always stored in absolute form; prefixes only affect output.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, Iri>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a triple. Returns `false` if it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    /// Consuming variant of [`Graph::insert`].
    pub fn with(mut self, triple: Triple) -> Self {
        self.insert(triple);
        self
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Triples in their stable (sorted) order.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    /// Triples agreeing with every bound position; `None` is a wildcard.
    pub fn matching<'a>(
        &'a self,
        subject: Option<&'a Term>,
        predicate: Option<&'a Term>,
        object: Option<&'a Term>,
    ) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples.iter().filter(move |t| {
            subject.is_none_or(|s| t.subject() == s)
                && predicate.is_none_or(|p| t.predicate_term() == p)
                && object.is_none_or(|o| t.object() == o)
        })
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(&'a self, subject: &'a Term, predicate: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        self.triples
            .iter()
            .filter(move |t| t.subject() == subject && t.predicate().as_str() == predicate)
            .map(Triple::object)
    }

    pub fn prefixes(&self) -> &BTreeMap<String, Iri> {
        &self.prefixes
    }

    /// Binds `prefix` to `namespace`, returning the previous binding.
    pub fn set_prefix(&mut self, prefix: impl Into<String>, namespace: Iri) -> Option<Iri> {
        self.prefixes.insert(prefix.into(), namespace)
    }

    /// Expands `prefix:local` using this graph's prefixes.
    pub fn expand_curie(&self, curie: &str) -> Option<Iri> {
        let (prefix, local) = curie.split_once(':')?;
        let ns = self.prefixes.get(prefix)?;
        Iri::new(format!("{ns}{local}")).ok()
    }

    pub fn blank_nodes(&self) -> BTreeSet<&BlankNode> {
        self.triples
            .iter()
            .flat_map(|t| [t.subject(), t.object()])
            .filter_map(Term::as_blank)
            .collect()
    }

    /// Adds every triple of `other`, renaming its blank nodes so they cannot
    /// collide with blank nodes already present. Prefixes of `other` are
    /// added where they do not clash with existing bindings.
    pub fn merge(&mut self, other: &Graph) {
        let ours: BTreeSet<String> = self.blank_nodes().into_iter().map(|b| b.label().to_owned()).collect();
        let mut taken = ours.clone();
        taken.extend(other.blank_nodes().into_iter().map(|b| b.label().to_owned()));
        let mut renames: HashMap<BlankNode, BlankNode> = HashMap::new();
        let mut counter = 0usize;
        for b in other.blank_nodes() {
            if !ours.contains(b.label()) {
                continue;
            }
            let label = loop {
                let candidate = format!("m{counter}");
                counter += 1;
                if !taken.contains(&candidate) {
                    break candidate;
                }
            };
            taken.insert(label.clone());
            renames.insert(b.clone(), BlankNode::new(label).expect("non-empty label"));
        }
        for t in &other.triples {
            let t = if t.has_blank() {
                t.map_blanks(|b| renames.get(b).cloned().unwrap_or_else(|| b.clone()))
            } else {
                t.clone()
            };
            self.triples.insert(t);
        }
        for (prefix, ns) in &other.prefixes {
            self.prefixes.entry(prefix.clone()).or_insert_with(|| ns.clone());
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter);
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}
