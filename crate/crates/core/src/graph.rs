//! Simple undirected graphs, vertex subsets and domination predicates.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Neighbor lists are sorted and symmetric. Construction rejects self-loops and
/// out-of-range endpoints; repeated edges (in either orientation) collapse to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub min_degree: usize,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut degree_sum = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            degree_sum += list.len();
        }
        Ok(Graph {
            adjacency,
            edge_count: degree_sum / 2,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::from_edges(n, edges).expect("complete graph edges are valid")
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star edges are valid")
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// `N[v]`: `v` followed by its neighbors.
    pub fn closed_neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::once(v).chain(self.adjacency[v].iter().copied())
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            n: self.n(),
            edges: self.edge_count,
            max_degree: self.max_degree(),
            min_degree: self.min_degree(),
        }
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n())?;
        Graph::from_edges(self.n(), self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: perm.len(),
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n {
            return Err(Error::VertexOutOfRange { vertex: p, n });
        }
        if std::mem::replace(&mut seen[p], true) {
            return Err(Error::DuplicateVertex(p));
        }
    }
    Ok(())
}

/// Subset of the vertices of a graph with `n` vertices.
///
/// Members keep insertion order; a bitmap answers membership in O(1).
/// Equality is set equality.
#[derive(Clone, Debug)]
pub struct VertexSet {
    members: Vec<usize>,
    bitmap: Vec<bool>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            members: Vec::new(),
            bitmap: vec![false; n],
        }
    }

    pub fn full(n: usize) -> Self {
        VertexSet {
            members: (0..n).collect(),
            bitmap: vec![true; n],
        }
    }

    /// Builds a set from ids in the given order, rejecting out-of-range and repeated ids.
    pub fn from_slice(n: usize, ids: &[usize]) -> Result<Self> {
        let mut set = VertexSet::new(n);
        for &v in ids {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if !set.insert(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Ok(set)
    }

    /// Size of the universe `0..n`.
    pub fn universe(&self) -> usize {
        self.bitmap.len()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bitmap.get(v).copied().unwrap_or(false)
    }

    /// Returns false if `v` was already a member.
    pub fn insert(&mut self, v: usize) -> bool {
        if self.bitmap[v] {
            return false;
        }
        self.bitmap[v] = true;
        self.members.push(v);
        true
    }

    /// Removes `v`, keeping the relative order of the other members.
    pub fn remove(&mut self, v: usize) -> bool {
        if !self.contains(v) {
            return false;
        }
        self.bitmap[v] = false;
        let pos = self.members.iter().position(|&m| m == v).expect("bitmap and list agree");
        self.members.remove(pos);
        true
    }

    /// Members in insertion order.
    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.members.iter().all(|&v| other.contains(v))
    }

    pub fn to_btree(&self) -> BTreeSet<usize> {
        self.members.iter().copied().collect()
    }
}

impl PartialEq for VertexSet {
    fn eq(&self, other: &Self) -> bool {
        self.bitmap == other.bitmap
    }
}

impl Eq for VertexSet {}

/// `N[S]` as a vertex set (members in ascending order).
pub fn closed_neighborhood(g: &Graph, s: &VertexSet) -> VertexSet {
    let covered = covered_bitmap(g, s);
    let members = (0..g.n()).filter(|&v| covered[v]).collect();
    VertexSet {
        members,
        bitmap: covered,
    }
}

pub fn is_dominating(g: &Graph, s: &VertexSet) -> bool {
    covered_bitmap(g, s).iter().all(|&c| c)
}

fn covered_bitmap(g: &Graph, s: &VertexSet) -> Vec<bool> {
    let mut covered = vec![false; g.n()];
    for v in s.iter() {
        for u in g.closed_neighbors(v) {
            covered[u] = true;
        }
    }
    covered
}

/// Per-vertex count of how many members of a set dominate it.
#[derive(Clone, Debug)]
pub(crate) struct Coverage {
    counts: Vec<u32>,
    undominated: usize,
}

impl Coverage {
    pub fn new(n: usize) -> Self {
        Coverage {
            counts: vec![0; n],
            undominated: n,
        }
    }

    pub fn of(g: &Graph, s: &VertexSet) -> Self {
        let mut cov = Coverage::new(g.n());
        for v in s.iter() {
            cov.add(g, v);
        }
        cov
    }

    pub fn add(&mut self, g: &Graph, v: usize) {
        for u in g.closed_neighbors(v) {
            if self.counts[u] == 0 {
                self.undominated -= 1;
            }
            self.counts[u] += 1;
        }
    }

    pub fn remove(&mut self, g: &Graph, v: usize) {
        for u in g.closed_neighbors(v) {
            self.counts[u] -= 1;
            if self.counts[u] == 0 {
                self.undominated += 1;
            }
        }
    }

    pub fn count(&self, v: usize) -> u32 {
        self.counts[v]
    }

    pub fn is_dominated(&self, v: usize) -> bool {
        self.counts[v] > 0
    }

    pub fn undominated(&self) -> usize {
        self.undominated
    }

    pub fn is_complete(&self) -> bool {
        self.undominated == 0
    }

    /// True if removing member `v` keeps every vertex dominated.
    pub fn is_redundant(&self, g: &Graph, v: usize) -> bool {
        g.closed_neighbors(v).all(|u| self.counts[u] >= 2)
    }

    /// `|N[v] \ N[S]|`.
    pub fn gain(&self, g: &Graph, v: usize) -> usize {
        g.closed_neighbors(v).filter(|&u| self.counts[u] == 0).count()
    }
}
