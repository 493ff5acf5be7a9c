//! Tree track: a minimum-weight arc set entering every root-free vertex set
//! twice, a spanning tree inside it, up-links derived from the remaining
//! arcs, and a bounded-width relative greedy that improves them.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{FapError, Result};
use crate::graph::EdgeKind;
use crate::instance::{Dsu, Instance};

const NONE: usize = usize::MAX;

/// Directed copy of an edge. `origin` is the edge id in the instance graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: u64,
    pub origin: usize,
}

/// Both orientations of every edge of `F ∪ L`; forest arcs weigh 0, link
/// arcs 1. Ordered by edge id, `(u,v)` before `(v,u)`.
pub fn arcs_of(inst: &Instance) -> Vec<Arc> {
    inst.graph()
        .edges()
        .iter()
        .flat_map(|e| {
            let w = u64::from(e.kind == EdgeKind::Link);
            [Arc { tail: e.u, head: e.v, weight: w, origin: e.id }, Arc { tail: e.v, head: e.u, weight: w, origin: e.id }]
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSet {
    pub root: usize,
    pub arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn weight(&self) -> u64 {
        self.arcs.iter().map(|a| a.weight).sum()
    }

    /// Every nonempty `R ⊆ V \ {root}` has two entering arcs. Exhaustive,
    /// so only for small `n`.
    pub fn covers_every_cut_twice(&self, n: usize) -> bool {
        let others: Vec<usize> = (0..n).filter(|&v| v != self.root).collect();
        let mut bit = vec![0u64; n];
        for (i, &v) in others.iter().enumerate() {
            bit[v] = 1 << i;
        }
        (1u64..1 << others.len()).all(|r| {
            self.arcs.iter().filter(|a| r & bit[a.head] != 0 && r & bit[a.tail] == 0).take(2).count() == 2
        })
    }
}

/// Minimum-weight doubly-entering arc set, as a minimum-weight common
/// independent set of size `2(n-1)` of two matroids on two copies of the
/// arcs: a graphic matroid per copy (arcs read as undirected edges), and a
/// laminar matroid allowing one copy per arc, in-degree at most 2 at every
/// non-root vertex and nothing into the root. Common bases are exactly the
/// unions of two arc-disjoint spanning arborescences. Forest arcs are added
/// afterwards; they weigh nothing.
pub fn min_double_cover(inst: &Instance, root: usize) -> Result<ArcSet> {
    let arcs = arcs_of(inst);
    let n = inst.n;
    let target = 2 * (n - 1);
    let mut mi = Intersection { n, root, arcs: &arcs, member: vec![false; 2 * arcs.len()] };
    let mut size = 0;
    while size < target {
        if !mi.augment() {
            return Err(FapError::Infeasible);
        }
        size += 1;
    }
    let mut chosen = vec![false; arcs.len()];
    for (e, &m) in mi.member.iter().enumerate() {
        if m {
            chosen[e / 2] = true;
        }
    }
    let out = arcs.iter().enumerate().filter(|&(i, a)| chosen[i] || a.weight == 0).map(|(_, a)| *a).collect();
    Ok(ArcSet { root, arcs: out })
}

/// Ground element `e` is copy `e % 2` of arc `e / 2`.
struct Intersection<'a> {
    n: usize,
    root: usize,
    arcs: &'a [Arc],
    member: Vec<bool>,
}

impl Intersection<'_> {
    fn arc(&self, e: usize) -> &Arc {
        &self.arcs[e / 2]
    }

    fn cost(&self, e: usize) -> i64 {
        let w = self.arc(e).weight as i64;
        if self.member[e] {
            -w
        } else {
            w
        }
    }

    /// Graphic matroids on each copy for `I - out + inn`.
    fn indep_graphic(&self, out: usize, inn: usize) -> bool {
        let copy = inn % 2;
        let mut dsu = Dsu::new(self.n);
        for (e, &m) in self.member.iter().enumerate() {
            if m && e != out && e % 2 == copy {
                let a = self.arc(e);
                dsu.union(a.tail, a.head);
            }
        }
        let a = self.arc(inn);
        dsu.union(a.tail, a.head)
    }

    /// Laminar matroid for `I - out + inn`.
    fn indep_laminar(&self, out: usize, inn: usize) -> bool {
        let a = self.arc(inn);
        if a.head == self.root {
            return false;
        }
        let twin = inn ^ 1;
        if self.member[twin] && twin != out {
            return false;
        }
        let indeg = self
            .member
            .iter()
            .enumerate()
            .filter(|&(e, &m)| m && e != out && self.arc(e).head == a.head)
            .count();
        indeg < 2
    }

    /// One augmentation along a shortest path of the exchange graph, lengths
    /// on vertices, ties by fewer arcs.
    fn augment(&mut self) -> bool {
        let m = self.member.len();
        let inside: Vec<usize> = (0..m).filter(|&e| self.member[e]).collect();
        let outside: Vec<usize> = (0..m).filter(|&e| !self.member[e]).collect();
        // exchange arcs: y -> x if I - y + x in graphic; x -> y if in laminar
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); m];
        for &y in &inside {
            for &x in &outside {
                if self.indep_graphic(y, x) {
                    succ[y].push(x);
                }
                if self.indep_laminar(y, x) {
                    succ[x].push(y);
                }
            }
        }
        let mut dist = vec![(i64::MAX, usize::MAX); m];
        let mut pred = vec![NONE; m];
        for &x in &outside {
            if self.indep_graphic(NONE, x) {
                dist[x] = (self.cost(x), 0);
            }
        }
        for _ in 0..m {
            let mut changed = false;
            for p in 0..m {
                if dist[p].0 == i64::MAX {
                    continue;
                }
                for &q in &succ[p] {
                    let cand = (dist[p].0 + self.cost(q), dist[p].1 + 1);
                    if cand < dist[q] {
                        dist[q] = cand;
                        pred[q] = p;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let Some(&end) = outside.iter().filter(|&&x| dist[x].0 != i64::MAX && self.indep_laminar(NONE, x)).min_by_key(|&&x| dist[x])
        else {
            return false;
        };
        let mut cur = end;
        while cur != NONE {
            self.member[cur] = !self.member[cur];
            cur = pred[cur];
        }
        true
    }
}

/// Spanning tree `F ∪ S_tree` rooted at `root`, with naive LCA by climbing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    pub root: usize,
    pub s_tree: Vec<usize>,
    pub parent: Vec<usize>,
    pub depth: Vec<usize>,
}

impl RootedTree {
    pub fn new(inst: &Instance, s_tree: Vec<usize>, root: usize) -> Self {
        let n = inst.n;
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in inst.forest.iter().chain(s_tree.iter().map(|&l| &inst.links[l])) {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut parent = vec![NONE; n];
        let mut depth = vec![NONE; n];
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if depth[w] == NONE {
                    depth[w] = depth[v] + 1;
                    parent[w] = v;
                    stack.push(w);
                }
            }
        }
        RootedTree { root, s_tree, parent, depth }
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        a
    }

    /// Tree edges on the `a`-`b` path, each named by its lower endpoint.
    pub fn path(&self, a: usize, b: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n());
        let (mut a, mut b) = (a, b);
        while a != b {
            if self.depth[a] < self.depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            out.insert(a);
            a = self.parent[a];
        }
        out
    }

    /// All tree edges (by lower endpoint).
    pub fn edges(&self) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n());
        for v in 0..self.n() {
            if v != self.root {
                out.insert(v);
            }
        }
        out
    }

    pub fn is_ancestor(&self, a: usize, mut b: usize) -> bool {
        while self.depth[b] > self.depth[a] {
            b = self.parent[b];
        }
        a == b
    }
}

/// Links with an arc in `D`, then a spanning tree grown from the forest by
/// adding those links in ascending index while they join two components.
pub fn extract_spanning_tree(inst: &Instance, d: &ArcSet) -> Result<(RootedTree, Vec<usize>)> {
    let s: BTreeSet<usize> = d.arcs.iter().filter_map(|a| inst.link_of_edge(a.origin)).collect();
    let mut dsu = Dsu::new(inst.n);
    for &(a, b) in &inst.forest {
        dsu.union(a, b);
    }
    let mut s_tree = Vec::new();
    for &l in &s {
        let (a, b) = inst.links[l];
        if dsu.union(a, b) {
            s_tree.push(l);
        }
    }
    if s_tree.len() + 1 != inst.n_comp() {
        return Err(FapError::Assertion("double cover does not span".into()));
    }
    let s_tap = s.iter().copied().filter(|l| !s_tree.contains(l)).collect();
    Ok((RootedTree::new(inst, s_tree, d.root), s_tap))
}

/// Up-link `{top, bottom}` with `top` a proper ancestor of `bottom`, and the
/// link it is a shadow of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UpLink {
    pub top: usize,
    pub bottom: usize,
    pub origin: usize,
}

/// Replaces each arc `(a,b)` of `D` on a link of `s_tap` by `{lca(a,b), b}`,
/// dropping arcs with `lca = b`. Identical up-links are merged; the result
/// must cover every tree edge.
pub fn directed_to_uplinks(inst: &Instance, tree: &RootedTree, d: &ArcSet, s_tap: &[usize]) -> Result<Vec<UpLink>> {
    let tap: BTreeSet<usize> = s_tap.iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in &d.arcs {
        let Some(l) = inst.link_of_edge(a.origin) else { continue };
        if !tap.contains(&l) {
            continue;
        }
        let c = tree.lca(a.tail, a.head);
        if c == a.head {
            continue;
        }
        if seen.insert((c, a.head)) {
            out.push(UpLink { top: c, bottom: a.head, origin: l });
        }
    }
    if !covered(tree, &out).is_superset(&tree.edges()) {
        return Err(FapError::Assertion("up-links leave a tree edge uncovered".into()));
    }
    Ok(out)
}

/// Drops up-links whose edges the others already cover, latest first.
pub fn prune_uplinks(tree: &RootedTree, u: &[UpLink]) -> Vec<UpLink> {
    let mut keep: Vec<UpLink> = u.to_vec();
    for i in (0..u.len()).rev() {
        let trial: Vec<UpLink> = keep.iter().copied().filter(|x| *x != u[i]).collect();
        if covered(tree, &trial).is_superset(&tree.edges()) {
            keep = trial;
        }
    }
    keep
}

pub fn covered(tree: &RootedTree, u: &[UpLink]) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(tree.n());
    for x in u {
        out.union_with(&tree.path(x.top, x.bottom));
    }
    out
}

/// Truncates up-links so their paths become pairwise disjoint: shallowest
/// top first, each keeps the part below the first edge already covered.
pub fn disjointify(tree: &RootedTree, u: &[UpLink]) -> Vec<UpLink> {
    let mut order = u.to_vec();
    order.sort_by_key(|x| (tree.depth[x.top], x.bottom, x.origin));
    let mut cov = FixedBitSet::with_capacity(tree.n());
    let mut out = Vec::new();
    for x in order {
        let mut top = x.bottom;
        while top != x.top && !cov.contains(top) {
            cov.insert(top);
            top = tree.parent[top];
        }
        if top != x.bottom {
            out.push(UpLink { top, bottom: x.bottom, origin: x.origin });
        }
    }
    out
}

/// Relative greedy on a disjoint up-link solution `u` (unit weights):
/// repeatedly add at most `width` candidate links so that a strictly larger
/// number of up-links becomes redundant, taking the best ratio. Returns the
/// added candidates and the surviving up-links.
pub fn wtap_relative_greedy(tree: &RootedTree, candidates: &[(usize, FixedBitSet)], u: &[UpLink], width: usize) -> (Vec<usize>, Vec<UpLink>) {
    let paths: Vec<FixedBitSet> = u.iter().map(|x| tree.path(x.top, x.bottom)).collect();
    let mut alive = vec![true; u.len()];
    let mut added: Vec<usize> = Vec::new();
    let mut cover = FixedBitSet::with_capacity(tree.n());
    loop {
        let free: Vec<usize> = (0..candidates.len()).filter(|&i| !added.contains(&candidates[i].0)).collect();
        // best (|A|, |drop|) by ratio |A| / |drop|, then fewer links
        let mut best: Option<(Vec<usize>, usize)> = None;
        for k in 1..=width.min(free.len()) {
            for combo in free.iter().copied().combinations(k) {
                let mut c = cover.clone();
                for &i in &combo {
                    c.union_with(&candidates[i].1);
                }
                let drop = (0..u.len()).filter(|&j| alive[j] && paths[j].is_subset(&c)).count();
                if drop <= k {
                    continue;
                }
                let better = match &best {
                    None => true,
                    Some((b, bd)) => k * bd < b.len() * drop,
                };
                if better {
                    best = Some((combo, drop));
                }
            }
        }
        let Some((combo, _)) = best else { break };
        for i in combo {
            cover.union_with(&candidates[i].1);
            added.push(candidates[i].0);
        }
        for j in 0..u.len() {
            if alive[j] && paths[j].is_subset(&cover) {
                alive[j] = false;
            }
        }
    }
    added.sort_unstable();
    let rest = u.iter().zip(&alive).filter(|(_, &a)| a).map(|(x, _)| *x).collect();
    (added, rest)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TapOptions {
    pub root: usize,
    pub eps: f64,
    pub width: usize,
}

impl Default for TapOptions {
    fn default() -> Self {
        TapOptions { root: 0, eps: 0.01, width: 3 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TapRun {
    pub solution: Vec<usize>,
    pub double_cover: ArcSet,
    pub s_tree: Vec<usize>,
    pub s_tap: Vec<usize>,
    /// arcs of `D` on `S_tap` links
    pub d_tap: usize,
    /// up-links straight from the arcs, before pruning
    pub raw_uplinks: Vec<UpLink>,
    /// pruned and disjoint up-links handed to the greedy
    pub uplinks: Vec<UpLink>,
    pub greedy_added: Vec<usize>,
    pub greedy_kept: Vec<UpLink>,
    pub eps: f64,
}

impl TapRun {
    /// Weight of the WTAP part of the answer.
    pub fn wtap_weight(&self) -> usize {
        self.greedy_added.len() + self.greedy_kept.len()
    }
}

pub fn solve_tap_track(inst: &Instance, opts: TapOptions) -> Result<TapRun> {
    let d = min_double_cover(inst, opts.root)?;
    let (tree, s_tap) = extract_spanning_tree(inst, &d)?;
    let tap: BTreeSet<usize> = s_tap.iter().copied().collect();
    let d_tap = d.arcs.iter().filter(|a| inst.link_of_edge(a.origin).is_some_and(|l| tap.contains(&l))).count();
    let raw = directed_to_uplinks(inst, &tree, &d, &s_tap)?;
    let uplinks = disjointify(&tree, &prune_uplinks(&tree, &raw));
    // a shadow never beats its parent at equal weight, so parents suffice
    let candidates: Vec<(usize, FixedBitSet)> = (0..inst.links.len())
        .filter(|l| !tree.s_tree.contains(l))
        .map(|l| (l, tree.path(inst.links[l].0, inst.links[l].1)))
        .filter(|(_, p)| !p.is_clear())
        .collect();
    let (added, kept) = wtap_relative_greedy(&tree, &candidates, &uplinks, opts.width);
    let mut sol: BTreeSet<usize> = tree.s_tree.iter().copied().collect();
    sol.extend(added.iter().copied());
    sol.extend(kept.iter().map(|x| x.origin));
    let solution: Vec<usize> = sol.into_iter().collect();
    if !inst.is_feasible(&solution) {
        return Err(FapError::Assertion("tree track returned an infeasible solution".into()));
    }
    Ok(TapRun {
        solution,
        double_cover: d,
        s_tree: tree.s_tree.clone(),
        s_tap,
        d_tap,
        raw_uplinks: raw,
        uplinks,
        greedy_added: added,
        greedy_kept: kept,
        eps: opts.eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{min_double_cover_exact, Budget};

    fn triangle() -> Instance {
        Instance::new(3, vec![], vec![(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn triangle_weight_four() {
        let d = min_double_cover(&triangle(), 0).unwrap();
        assert_eq!(d.weight(), 4);
        assert!(d.covers_every_cut_twice(3));
        let arcs = arcs_of(&triangle());
        assert_eq!(min_double_cover_exact(3, &arcs, 0, &Budget::default()).unwrap().0, 4);
    }

    #[test]
    fn four_cycle_track() {
        let inst = fixtures::four_cycle();
        let run = solve_tap_track(&inst, TapOptions::default()).unwrap();
        assert_eq!(run.solution.len(), 2);
        assert_eq!(run.s_tree.len(), 1);
    }

    #[test]
    fn pure_tree_has_no_tree_links() {
        let inst = fixtures::figure3(4);
        let run = solve_tap_track(&inst, TapOptions::default()).unwrap();
        assert!(run.s_tree.is_empty());
        assert!(inst.is_feasible(&run.solution));
    }

    #[test]
    fn ancestor_arc_is_kept() {
        // path 0-1-2 rooted at 0, link {0,2}
        let inst = Instance::new(3, vec![(0, 1), (1, 2)], vec![(0, 2)]);
        let d = min_double_cover(&inst, 0).unwrap();
        let (tree, s_tap) = extract_spanning_tree(&inst, &d).unwrap();
        let u = directed_to_uplinks(&inst, &tree, &d, &s_tap).unwrap();
        assert_eq!(u, vec![UpLink { top: 0, bottom: 2, origin: 0 }]);
    }

    #[test]
    fn middle_root_needs_two_uplinks() {
        let inst = Instance::new(3, vec![(0, 1), (1, 2)], vec![(0, 2)]);
        let d = min_double_cover(&inst, 1).unwrap();
        let (tree, s_tap) = extract_spanning_tree(&inst, &d).unwrap();
        let u = directed_to_uplinks(&inst, &tree, &d, &s_tap).unwrap();
        assert_eq!((s_tap.len(), u.len()), (1, 2));
    }

    #[test]
    fn shadow_collapse() {
        // path a-b-c rooted at a; U = {a,b},{b,c}; candidate {a,c}
        let inst = Instance::new(3, vec![(0, 1), (1, 2)], vec![(0, 1), (1, 2), (0, 2)]);
        let tree = RootedTree::new(&inst, vec![], 0);
        let u = vec![UpLink { top: 0, bottom: 1, origin: 0 }, UpLink { top: 1, bottom: 2, origin: 1 }];
        let cand = vec![(2, tree.path(0, 2))];
        let (added, kept) = wtap_relative_greedy(&tree, &cand, &u, 3);
        assert_eq!((added, kept.len()), (vec![2], 0));
    }

    #[test]
    fn irreducible_stays() {
        let inst = Instance::new(3, vec![(0, 1), (1, 2)], vec![(0, 2)]);
        let tree = RootedTree::new(&inst, vec![], 0);
        let u = vec![UpLink { top: 0, bottom: 2, origin: 0 }];
        let (added, kept) = wtap_relative_greedy(&tree, &[(0, tree.path(0, 2))], &u, 1);
        assert!(added.is_empty());
        assert_eq!(kept, u);
    }

    #[test]
    fn disjoint_paths_after_truncation() {
        // path 0-1-2-3 rooted at 0 with two overlapping up-links
        let inst = Instance::new(4, vec![(0, 1), (1, 2), (2, 3)], vec![]);
        let tree = RootedTree::new(&inst, vec![], 0);
        let u = vec![UpLink { top: 1, bottom: 3, origin: 1 }, UpLink { top: 0, bottom: 2, origin: 0 }];
        let d = disjointify(&tree, &u);
        assert_eq!(d, vec![UpLink { top: 0, bottom: 2, origin: 0 }, UpLink { top: 2, bottom: 3, origin: 1 }]);
        assert_eq!(covered(&tree, &d), covered(&tree, &u));
    }
}
