//! Maximum-cardinality matching on general graphs (Edmonds' blossom
//! algorithm) and the matching start of the path solver.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::instance::Instance;

const NONE: usize = usize::MAX;

/// Maximum matching of the simple graph on `n` vertices given by `edges`.
/// Returns indices into `edges`, ascending. A greedy pass in edge order seeds
/// the matching; free vertices are then grown in ascending id.
pub fn max_matching(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut mate = vec![NONE; n];
    for &(u, v) in edges {
        if u != v && mate[u] == NONE && mate[v] == NONE {
            mate[u] = v;
            mate[v] = u;
        }
    }
    let mut b = Blossom { adj: &adj, mate, parent: vec![NONE; n], base: (0..n).collect(), used: vec![false; n], in_blossom: vec![false; n] };
    for root in 0..n {
        if b.mate[root] == NONE {
            if let Some(end) = b.grow(root) {
                b.augment(end);
            }
        }
    }
    pairs_to_indices(edges, &b.mate)
}

/// Matching built by one scan in edge order; maximal, not maximum.
pub fn greedy_matching(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut mate = vec![NONE; n];
    let mut out = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u != v && mate[u] == NONE && mate[v] == NONE {
            mate[u] = v;
            mate[v] = u;
            out.push(i);
        }
    }
    out
}

fn pairs_to_indices(edges: &[(usize, usize)], mate: &[usize]) -> Vec<usize> {
    let mut taken = vec![false; mate.len()];
    let mut out = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if u != v && mate[u] == v && !taken[u] {
            taken[u] = true;
            taken[v] = true;
            out.push(i);
        }
    }
    out
}

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, base: usize, mut child: usize) {
        while self.base[v] != base {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// BFS of the alternating tree from `root`; returns a free vertex ending
    /// an augmenting path.
    fn grow(&mut self, root: usize) -> Option<usize> {
        let n = self.mate.len();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for k in 0..self.adj[v].len() {
                let to = self.adj[v][k];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                q.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    q.push_back(next);
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        while v != NONE {
            let pv = self.parent[v];
            let next = self.mate[pv];
            self.mate[v] = pv;
            self.mate[pv] = v;
            v = next;
        }
    }
}

/// Candidate graph of the matching start: forest leaves, joined by links
/// whose ends are both leaves and lie on different paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafLinkGraph {
    pub nodes: Vec<usize>,
    /// link indices, one per leaf pair, lowest index kept
    pub edges: Vec<usize>,
    /// leaf-leaf links joining the two ends of one path
    pub bad: BTreeSet<usize>,
}

impl LeafLinkGraph {
    pub fn new(inst: &Instance) -> Self {
        let nodes = inst.leaves();
        let leaf: BTreeSet<usize> = nodes.iter().copied().collect();
        let comp = inst.forest_components();
        let mut edges = Vec::new();
        let mut bad = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for (i, &(u, v)) in inst.links.iter().enumerate() {
            if !leaf.contains(&u) || !leaf.contains(&v) {
                continue;
            }
            if comp[u] == comp[v] {
                bad.insert(i);
            } else if seen.insert((u.min(v), u.max(v))) {
                edges.push(i);
            }
        }
        LeafLinkGraph { nodes, edges, bad }
    }
}

/// Matching start for a path instance: returns (M as link indices, number of
/// unmatched leaves). `greedy` swaps the blossom algorithm for one greedy
/// scan, which is only useful to show what breaks without it.
pub fn initial_partial_solution(inst: &Instance, greedy: bool) -> (Vec<usize>, usize) {
    let g = LeafLinkGraph::new(inst);
    let index: BTreeMap<usize, usize> = g.nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let local: Vec<(usize, usize)> = g.edges.iter().map(|&l| (index[&inst.links[l].0], index[&inst.links[l].1])).collect();
    let picked = if greedy { greedy_matching(g.nodes.len(), &local) } else { max_matching(g.nodes.len(), &local) };
    let mut m: Vec<usize> = picked.into_iter().map(|i| g.edges[i]).collect();
    m.sort_unstable();
    let unmatched = g.nodes.len() - 2 * m.len();
    (m, unmatched)
}
