//! Trees whose edges carry the coordinate blocks of a model polytope.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected tree given by its edge list.
///
/// The order of `edges` is the order of the coordinate blocks. Endpoints of
/// each edge are stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeRecord", into = "TreeRecord")]
pub struct Tree {
    edges: Vec<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct TreeRecord {
    edges: Vec<[u32; 2]>,
}

impl TryFrom<TreeRecord> for Tree {
    type Error = Error;
    fn try_from(r: TreeRecord) -> Result<Self> {
        Tree::with_edge_order(r.edges.into_iter().map(|[a, b]| (a, b)).collect())
    }
}

impl From<Tree> for TreeRecord {
    fn from(t: Tree) -> Self {
        TreeRecord {
            edges: t.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl Tree {
    /// Tree with edges sorted by `(min endpoint, max endpoint)`.
    pub fn new(edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut t = Self::with_edge_order(edges)?;
        t.edges.sort_unstable();
        Ok(t)
    }

    /// Tree keeping the given edge order.
    pub fn with_edge_order(edges: Vec<(u32, u32)>) -> Result<Self> {
        let edges: Vec<(u32, u32)> = edges
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        if edges.is_empty() {
            return Err(Error::InvalidTree("a tree needs at least one edge".into()));
        }
        if let Some(&(a, _)) = edges.iter().find(|(a, b)| a == b) {
            return Err(Error::InvalidTree(format!("loop at node {a}")));
        }
        let nodes: BTreeSet<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        if nodes.len() != edges.len() + 1 {
            return Err(Error::InvalidTree(format!(
                "{} edges on {} nodes cannot form a tree",
                edges.len(),
                nodes.len()
            )));
        }
        let t = Self { edges };
        // n - 1 edges plus connectivity rules out cycles
        let adj = t.adjacency();
        let start = *nodes.iter().next().expect("nonempty");
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            for &(m, _) in &adj[&n] {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        if seen.len() != nodes.len() {
            return Err(Error::InvalidTree("edge list is not connected".into()));
        }
        Ok(t)
    }

    /// The star with centre `0` and leaves `1..=m` (`m` edges).
    pub fn claw(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidTree(format!(
                "a claw needs at least 2 edges, got {m}"
            )));
        }
        Self::new((1..=m as u32).map(|l| (0, l)).collect())
    }

    /// Trivalent caterpillar with `leaves >= 3` leaves.
    ///
    /// Internal nodes are `0..leaves-2` along a path; leaves are numbered from
    /// `leaves - 2` upwards.
    pub fn caterpillar(leaves: usize) -> Result<Self> {
        if leaves < 3 {
            return Err(Error::InvalidTree(format!(
                "a caterpillar needs 3 leaves, got {leaves}"
            )));
        }
        let internal = (leaves - 2) as u32;
        let mut next = internal;
        let mut edges = Vec::new();
        for i in 0..internal {
            if i + 1 < internal {
                edges.push((i, i + 1));
            }
            let hanging = if internal == 1 {
                3
            } else if i == 0 || i + 1 == internal {
                2
            } else {
                1
            };
            for _ in 0..hanging {
                edges.push((i, next));
                next += 1;
            }
        }
        Self::new(edges)
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> Vec<u32> {
        let set: BTreeSet<u32> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        set.into_iter().collect()
    }

    /// For each node, its neighbours paired with the connecting edge index.
    pub fn adjacency(&self) -> BTreeMap<u32, Vec<(u32, usize)>> {
        let mut adj: BTreeMap<u32, Vec<(u32, usize)>> = BTreeMap::new();
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            adj.entry(a).or_default().push((b, e));
            adj.entry(b).or_default().push((a, e));
        }
        adj
    }

    pub fn degree(&self, node: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == node || b == node)
            .count()
    }

    pub fn leaves(&self) -> Vec<u32> {
        self.nodes()
            .into_iter()
            .filter(|&n| self.degree(n) == 1)
            .collect()
    }

    /// Nodes of degree at least two, each with its incident edge indices.
    pub fn internal_nodes(&self) -> Vec<(u32, Vec<usize>)> {
        self.adjacency()
            .into_iter()
            .filter(|(_, nb)| nb.len() >= 2)
            .map(|(n, nb)| (n, nb.into_iter().map(|(_, e)| e).collect()))
            .collect()
    }

    /// Index of the edge joining a leaf to the rest of the tree.
    pub fn leaf_edge(&self, leaf: u32) -> Result<usize> {
        match self.adjacency().get(&leaf).map(Vec::as_slice) {
            Some([(_, e)]) => Ok(*e),
            _ => Err(Error::InvalidTree(format!("node {leaf} is not a leaf"))),
        }
    }

    /// Star trees (a single internal node) and single edges.
    pub fn is_claw(&self) -> bool {
        self.internal_nodes().len() <= 1
    }

    /// Parses one `a b` edge per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let ids: Vec<&str> = line.split_whitespace().collect();
            let [a, b] = ids.as_slice() else {
                return Err(Error::Parse(format!(
                    "line {}: expected two node ids",
                    no + 1
                )));
            };
            let parse = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| Error::Parse(format!("line {}: bad node id {s:?}", no + 1)))
            };
            edges.push((parse(a)?, parse(b)?));
        }
        Self::new(edges)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (a, b) in &self.edges {
            let _ = writeln!(s, "{a} {b}");
        }
        s
    }

    /// Joins two trees along leaf edges, as in a fiber product of their
    /// polytopes.
    ///
    /// `(a1, l1)` is the leaf edge of `self` with leaf `l1`; `(a2, l2)` the one
    /// of `other`. The two edges become one edge `a1 - a2`. Edge order of the
    /// result: the other edges of `self`, the shared edge, then the other edges
    /// of `other`. Node ids of `other` are shifted past those of `self`.
    pub fn glue(&self, l1: u32, other: &Tree, l2: u32) -> Result<GluedTree> {
        let e1 = self.leaf_edge(l1)?;
        let e2 = other.leaf_edge(l2)?;
        let (p, q) = self.edges[e1];
        let a1 = if p == l1 { q } else { p };
        let (p, q) = other.edges[e2];
        let a2 = if p == l2 { q } else { p };
        let offset = self.nodes().last().copied().unwrap_or(0) + 1;
        let map = |n: u32| -> u32 {
            if n == l2 {
                a1
            } else if n == a2 {
                l1
            } else {
                n + offset
            }
        };
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut left = Vec::new();
        for (i, &e) in self.edges.iter().enumerate() {
            if i != e1 {
                edges.push(e);
                left.push(i);
            }
        }
        edges.push(self.edges[e1]);
        let mut right = Vec::new();
        for (i, &(a, b)) in other.edges.iter().enumerate() {
            if i != e2 {
                edges.push((map(a), map(b)));
                right.push(i);
            }
        }
        Ok(GluedTree {
            tree: Tree::with_edge_order(edges)?,
            left_edges: left,
            shared: (e1, e2),
            right_edges: right,
        })
    }
}

/// Result of [`Tree::glue`] with the provenance of every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedTree {
    pub tree: Tree,
    /// Edge indices of the first tree, in output order (excluding the shared one).
    pub left_edges: Vec<usize>,
    /// Shared edge index in the first and in the second tree.
    pub shared: (usize, usize),
    pub right_edges: Vec<usize>,
}
