//! Undirected multigraph with stable edge ids, bridge/block decomposition and
//! contraction into quotient multigraphs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::FapError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Forest,
    Link,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub id: usize,
    pub kind: EdgeKind,
}

impl Edge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Multigraph over vertices `0..n`. Parallel edges are fine, self-loops are not.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    // (neighbour, position in `edges`), kept sorted by edge id
    adj: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    /// Adds an edge. Ids must be unique and inserted in increasing order so
    /// that adjacency scans are ordered by id.
    pub fn add_edge(&mut self, u: usize, v: usize, id: usize, kind: EdgeKind) -> Result<(), FapError> {
        if u >= self.n || v >= self.n {
            return Err(FapError::MalformedEdge(format!("edge {id}: endpoint out of range")));
        }
        if u == v {
            return Err(FapError::MalformedEdge(format!("edge {id}: self-loop at {}", u + 1)));
        }
        if let Some(last) = self.edges.last() {
            if last.id >= id {
                return Err(FapError::MalformedEdge(format!("edge id {id} not increasing")));
            }
        }
        let pos = self.edges.len();
        self.edges.push(Edge { u, v, id, kind });
        self.adj[u].push((v, pos));
        self.adj[v].push((u, pos));
        Ok(())
    }

    /// Builds a graph from `(u, v, kind)` triples, numbering edges by position.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, EdgeKind)>) -> Result<Self, FapError> {
        let mut g = Graph::new(n);
        for (i, (u, v, k)) in edges.into_iter().enumerate() {
            g.add_edge(u, v, i, k)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Looks an edge up by id.
    pub fn edge(&self, id: usize) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|p| &self.edges[p])
    }

    /// Incident edges of `v` in ascending id order.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = &Edge> + '_ {
        self.adj[v].iter().map(move |&(_, p)| &self.edges[p])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Subgraph on the same vertex set keeping the edges accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Edge) -> bool) -> Graph {
        let mut g = Graph::new(self.n);
        for e in &self.edges {
            if keep(e) {
                let pos = g.edges.len();
                g.edges.push(*e);
                g.adj[e.u].push((e.v, pos));
                g.adj[e.v].push((e.u, pos));
            }
        }
        g
    }

    /// Connected component label per vertex, labels numbered by smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut stack = Vec::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            stack.push(s);
            while let Some(x) = stack.pop() {
                for &(y, _) in &self.adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Positions (not ids) of bridge edges, via an iterative lowpoint DFS.
    fn bridge_positions(&self) -> Vec<bool> {
        let n = self.n;
        let mut is_bridge = vec![false; self.edges.len()];
        let mut tin = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0;
        // frame: (vertex, position of entering edge, next adjacency index)
        let mut stack: Vec<(usize, usize, usize)> = Vec::new();
        for root in 0..n {
            if tin[root] != usize::MAX {
                continue;
            }
            tin[root] = timer;
            low[root] = timer;
            timer += 1;
            stack.push((root, usize::MAX, 0));
            while let Some(top) = stack.last_mut() {
                let (x, pe, i) = *top;
                if i < self.adj[x].len() {
                    top.2 += 1;
                    let (y, p) = self.adj[x][i];
                    if p == pe {
                        continue;
                    }
                    if tin[y] == usize::MAX {
                        tin[y] = timer;
                        low[y] = timer;
                        timer += 1;
                        stack.push((y, p, 0));
                    } else {
                        low[x] = low[x].min(tin[y]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[x]);
                        if low[x] > tin[parent] {
                            is_bridge[pe] = true;
                        }
                    }
                }
            }
        }
        is_bridge
    }

    /// Ids of all bridges.
    pub fn bridges(&self) -> BTreeSet<usize> {
        self.bridge_positions()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(p, _)| self.edges[p].id)
            .collect()
    }

    /// BFS distances (in edges) from `s`; `usize::MAX` when unreachable.
    pub fn bfs_dist(&self, s: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut q = std::collections::VecDeque::new();
        dist[s] = 0;
        q.push_back(s);
        while let Some(x) = q.pop_front() {
            for &(y, _) in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    q.push_back(y);
                }
            }
        }
        dist
    }
}

/// Bridges, nontrivial 2-edge-connected blocks, lonely vertices and
/// connected components of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    pub bridges: BTreeSet<usize>,
    pub blocks: Vec<Vec<usize>>,
    pub lonely: Vec<usize>,
    pub components: Vec<Vec<usize>>,
    /// component index per vertex
    pub comp_of: Vec<usize>,
    /// 2-edge-connected class per vertex; blocks first (same order as
    /// `blocks`), then one singleton class per lonely vertex
    pub class_of: Vec<usize>,
}

impl BlockDecomposition {
    pub fn block_of(&self, v: usize) -> Option<usize> {
        let c = self.class_of[v];
        (c < self.blocks.len()).then_some(c)
    }

    pub fn is_lonely(&self, v: usize) -> bool {
        self.class_of[v] >= self.blocks.len()
    }

    pub fn class_count(&self) -> usize {
        self.blocks.len() + self.lonely.len()
    }
}

pub fn decompose(g: &Graph) -> BlockDecomposition {
    let is_bridge = g.bridge_positions();
    let bridges: BTreeSet<usize> =
        is_bridge.iter().enumerate().filter(|(_, &b)| b).map(|(p, _)| g.edges[p].id).collect();
    let comp_of = g.component_labels();
    let ncomp = comp_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut components = vec![Vec::new(); ncomp];
    for v in 0..g.n {
        components[comp_of[v]].push(v);
    }

    // 2-edge-connected classes: components after deleting bridges
    let mut pos = 0;
    let no_bridges = g.filter(|_| {
        let keep = !is_bridge[pos];
        pos += 1;
        keep
    });
    let cls = no_bridges.component_labels();
    let ncls = cls.iter().copied().max().map_or(0, |m| m + 1);
    let mut members = vec![Vec::new(); ncls];
    for v in 0..g.n {
        members[cls[v]].push(v);
    }
    let mut blocks = Vec::new();
    let mut lonely = Vec::new();
    let mut remap = vec![0; ncls];
    for (c, m) in members.iter().enumerate() {
        if m.len() >= 2 {
            remap[c] = blocks.len();
            blocks.push(m.clone());
        }
    }
    for (c, m) in members.iter().enumerate() {
        if m.len() == 1 {
            remap[c] = blocks.len() + lonely.len();
            lonely.push(m[0]);
        }
    }
    let class_of = (0..g.n).map(|v| remap[cls[v]]).collect();
    BlockDecomposition { bridges, blocks, lonely, components, comp_of, class_of }
}

/// Connected, at least one vertex, and bridgeless.
pub fn is_two_edge_connected(g: &Graph) -> bool {
    if g.n == 0 {
        return false;
    }
    let labels = g.component_labels();
    if labels.iter().any(|&c| c != 0) {
        return false;
    }
    !g.bridge_positions().iter().any(|&b| b)
}

/// A quotient multigraph. Quotient edges keep the id of the base edge they
/// came from, so lifting is a lookup in the base graph.
#[derive(Clone, Debug)]
pub struct ContractedView {
    pub super_vertices: Vec<Vec<usize>>,
    pub part: Vec<usize>,
    pub quotient: Graph,
}

impl ContractedView {
    /// Base edge for a quotient edge id.
    pub fn lift<'a>(&self, base: &'a Graph, qid: usize) -> Option<&'a Edge> {
        base.edge(qid)
    }
}

/// Contracts each part into one super-vertex. Super-vertices are numbered by
/// their smallest member; self-loops vanish, parallel edges stay.
pub fn contract(g: &Graph, parts: &[Vec<usize>]) -> Result<ContractedView, FapError> {
    let mut label = vec![usize::MAX; g.n];
    for (i, p) in parts.iter().enumerate() {
        if p.is_empty() {
            return Err(FapError::InvalidPartition("empty part".into()));
        }
        for &v in p {
            if v >= g.n {
                return Err(FapError::InvalidPartition(format!("vertex {} out of range", v + 1)));
            }
            if label[v] != usize::MAX {
                return Err(FapError::InvalidPartition(format!("vertex {} in two parts", v + 1)));
            }
            label[v] = i;
        }
    }
    if let Some(v) = label.iter().position(|&l| l == usize::MAX) {
        return Err(FapError::InvalidPartition(format!("vertex {} not covered", v + 1)));
    }
    Ok(contract_labels(g, &label))
}

/// Same as [`contract`] but with a label per vertex (labels need not be dense).
pub fn contract_labels(g: &Graph, label: &[usize]) -> ContractedView {
    let mut seen = std::collections::HashMap::new();
    for &l in &label[..g.n] {
        let next = seen.len();
        seen.entry(l).or_insert(next);
    }
    let part: Vec<usize> = (0..g.n).map(|v| seen[&label[v]]).collect();
    let mut super_vertices = vec![Vec::new(); seen.len()];
    for (v, &p) in part.iter().enumerate() {
        super_vertices[p].push(v);
    }
    let mut quotient = Graph::new(seen.len());
    for e in &g.edges {
        let (a, b) = (part[e.u], part[e.v]);
        if a != b {
            let p = quotient.edges.len();
            quotient.edges.push(Edge { u: a, v: b, id: e.id, kind: e.kind });
            quotient.adj[a].push((b, p));
            quotient.adj[b].push((a, p));
        }
    }
    ContractedView { super_vertices, part, quotient }
}
