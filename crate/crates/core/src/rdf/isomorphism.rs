//! Blank-node isomorphism between graphs.
//!
//! Blank nodes are first partitioned by iterated colour refinement: each
//! node's colour is replaced by an interned signature of its previous colour
//! and the multiset of `(position, predicate, neighbour)` edges it takes part
//! in, where ground neighbours contribute themselves and blank neighbours
//! contribute their colour. Colours are interned in a table shared by both
//! graphs, so an isomorphism can only map a node onto a node of the same
//! colour. A backtracking search over those candidates then looks for an
//! explicit bijection; every answer of `true` is backed by one.

use std::collections::{BTreeSet, HashMap};

use super::graph::Graph;
use super::term::{BlankNode, Term, Triple};
use super::RdfError;

/// Default cap on tentative node assignments during the search.
pub const DEFAULT_MAPPING_BOUND: usize = 10_000;

/// Checks `a` and `b` for isomorphism with the default search bound.
pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool, RdfError> {
    IsomorphismChecker::default().check(a, b)
}

#[derive(Debug, Clone, Copy)]
pub struct IsomorphismChecker {
    bound: usize,
}

impl Default for IsomorphismChecker {
    fn default() -> Self {
        IsomorphismChecker {
            bound: DEFAULT_MAPPING_BOUND,
        }
    }
}

impl IsomorphismChecker {
    pub fn with_bound(bound: usize) -> Self {
        IsomorphismChecker { bound }
    }

    pub fn check(&self, a: &Graph, b: &Graph) -> Result<bool, RdfError> {
        Ok(self.find_mapping(a, b)?.is_some())
    }

    /// Returns a blank-node bijection mapping `a` onto `b`, if one exists.
    pub fn find_mapping(&self, a: &Graph, b: &Graph) -> Result<Option<HashMap<BlankNode, BlankNode>>, RdfError> {
        if a.len() != b.len() {
            return Ok(None);
        }
        let ground_a: BTreeSet<&Triple> = a.iter().filter(|t| !t.has_blank()).collect();
        let ground_b: BTreeSet<&Triple> = b.iter().filter(|t| !t.has_blank()).collect();
        if ground_a != ground_b {
            return Ok(None);
        }
        let side_a = Side::new(a);
        let side_b = Side::new(b);
        if side_a.nodes.len() != side_b.nodes.len() {
            return Ok(None);
        }
        if side_a.nodes.is_empty() {
            return Ok(Some(HashMap::new()));
        }

        let (colors_a, colors_b) = refine(&side_a, &side_b);
        let mut sorted_a = colors_a.clone();
        let mut sorted_b = colors_b.clone();
        sorted_a.sort_unstable();
        sorted_b.sort_unstable();
        if sorted_a != sorted_b {
            return Ok(None);
        }

        let mut search = Search {
            a: &side_a,
            b: &side_b,
            b_triples: b,
            colors_a: &colors_a,
            colors_b: &colors_b,
            mapping: vec![None; side_a.nodes.len()],
            used: vec![false; side_b.nodes.len()],
            attempts: 0,
            bound: self.bound,
        };
        let mut class_size: HashMap<u32, usize> = HashMap::new();
        for c in &colors_a {
            *class_size.entry(*c).or_default() += 1;
        }
        let mut order: Vec<usize> = (0..side_a.nodes.len()).collect();
        order.sort_by_key(|&i| (class_size[&colors_a[i]], i));

        if search.assign(&order)? {
            let mapping = search
                .mapping
                .iter()
                .enumerate()
                .map(|(i, j)| (side_a.nodes[i].clone(), side_b.nodes[j.expect("complete mapping")].clone()))
                .collect();
            Ok(Some(mapping))
        } else {
            Ok(None)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Position {
    Subject,
    Object,
    Both,
}

#[derive(Debug, Clone, Copy)]
enum Neighbour<'g> {
    Ground(&'g Term),
    Node(usize),
    Itself,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum NeighbourColor<'g> {
    Ground(&'g Term),
    Color(u32),
    Itself,
}

/// Blank-node index of one graph.
struct Side<'g> {
    nodes: Vec<BlankNode>,
    edges: Vec<Vec<(Position, &'g Term, Neighbour<'g>)>>,
    triples_of: Vec<Vec<&'g Triple>>,
    index: HashMap<&'g BlankNode, usize>,
}

impl<'g> Side<'g> {
    fn new(graph: &'g Graph) -> Self {
        let blanks = graph.blank_nodes();
        let nodes: Vec<BlankNode> = blanks.iter().map(|b| (*b).clone()).collect();
        let index: HashMap<&'g BlankNode, usize> = blanks.into_iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut edges = vec![Vec::new(); nodes.len()];
        let mut triples_of = vec![Vec::new(); nodes.len()];
        for t in graph.iter().filter(|t| t.has_blank()) {
            let s = t.subject().as_blank().map(|b| index[b]);
            let o = t.object().as_blank().map(|b| index[b]);
            let p = t.predicate_term();
            match (s, o) {
                (Some(s), Some(o)) if s == o => {
                    edges[s].push((Position::Both, p, Neighbour::Itself));
                    triples_of[s].push(t);
                }
                (Some(s), Some(o)) => {
                    edges[s].push((Position::Subject, p, Neighbour::Node(o)));
                    edges[o].push((Position::Object, p, Neighbour::Node(s)));
                    triples_of[s].push(t);
                    triples_of[o].push(t);
                }
                (Some(s), None) => {
                    edges[s].push((Position::Subject, p, Neighbour::Ground(t.object())));
                    triples_of[s].push(t);
                }
                (None, Some(o)) => {
                    edges[o].push((Position::Object, p, Neighbour::Ground(t.subject())));
                    triples_of[o].push(t);
                }
                (None, None) => {}
            }
        }
        Side {
            nodes,
            edges,
            triples_of,
            index,
        }
    }
}

type Signature<'g> = (u32, Vec<(u8, &'g Term, NeighbourColor<'g>)>);

fn position_code(p: Position) -> u8 {
    match p {
        Position::Subject => 0,
        Position::Object => 1,
        Position::Both => 2,
    }
}

fn refine<'g>(a: &Side<'g>, b: &Side<'g>) -> (Vec<u32>, Vec<u32>) {
    let mut colors_a = vec![0u32; a.nodes.len()];
    let mut colors_b = vec![0u32; b.nodes.len()];
    let mut distinct = 1usize;
    // Each productive round adds at least one class, so n rounds suffice.
    for _ in 0..=a.nodes.len() {
        let mut table: HashMap<Signature<'g>, u32> = HashMap::new();
        let next_a = recolor(a, &colors_a, &mut table);
        let next_b = recolor(b, &colors_b, &mut table);
        colors_a = next_a;
        colors_b = next_b;
        if table.len() <= distinct {
            break;
        }
        distinct = table.len();
    }
    (colors_a, colors_b)
}

fn recolor<'g>(side: &Side<'g>, colors: &[u32], table: &mut HashMap<Signature<'g>, u32>) -> Vec<u32> {
    (0..side.nodes.len())
        .map(|i| {
            let mut edges: Vec<(u8, &'g Term, NeighbourColor<'g>)> = side.edges[i]
                .iter()
                .map(|(pos, p, n)| {
                    let n = match n {
                        Neighbour::Ground(t) => NeighbourColor::Ground(t),
                        Neighbour::Node(j) => NeighbourColor::Color(colors[*j]),
                        Neighbour::Itself => NeighbourColor::Itself,
                    };
                    (position_code(*pos), *p, n)
                })
                .collect();
            edges.sort_unstable();
            let next = table.len() as u32;
            *table.entry((colors[i], edges)).or_insert(next)
        })
        .collect()
}

struct Search<'s, 'g> {
    a: &'s Side<'g>,
    b: &'s Side<'g>,
    b_triples: &'g Graph,
    colors_a: &'s [u32],
    colors_b: &'s [u32],
    mapping: Vec<Option<usize>>,
    used: Vec<bool>,
    attempts: usize,
    bound: usize,
}

impl Search<'_, '_> {
    fn assign(&mut self, order: &[usize]) -> Result<bool, RdfError> {
        let Some((&i, rest)) = order.split_first() else {
            return Ok(true);
        };
        for j in 0..self.b.nodes.len() {
            if self.used[j] || self.colors_b[j] != self.colors_a[i] {
                continue;
            }
            self.attempts += 1;
            if self.attempts > self.bound {
                return Err(RdfError::IsomorphismCapacity { bound: self.bound });
            }
            self.mapping[i] = Some(j);
            self.used[j] = true;
            if self.consistent(i) && self.assign(rest)? {
                return Ok(true);
            }
            self.mapping[i] = None;
            self.used[j] = false;
        }
        Ok(false)
    }

    /// Every triple touching `i` whose blank nodes are all mapped must exist in `b`.
    fn consistent(&self, i: usize) -> bool {
        self.a.triples_of[i].iter().all(|t| {
            let mut complete = true;
            let mapped = t.map_blanks(|bn| match self.mapping[self.a.index[bn]] {
                Some(j) => self.b.nodes[j].clone(),
                None => {
                    complete = false;
                    bn.clone()
                }
            });
            !complete || self.b_triples.contains(&mapped)
        })
    }
}
