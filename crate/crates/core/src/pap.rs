//! The path solver: a matching start, bridge covering by alternating trails,
//! then gluing components along good cycles (or plain cycles when none
//! exists). Every step is logged so the credit auditor can replay the run.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{FapError, Result};
use crate::graph::{contract_labels, decompose, BlockDecomposition, ContractedView, EdgeKind, Graph};
use crate::instance::Instance;
use crate::matching::initial_partial_solution;

const NONE: usize = usize::MAX;

/// Switches that deliberately break the algorithm, for mutation testing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PapOptions {
    /// glue along good cycles without removing the two links of `C`
    pub skip_link_removal: bool,
    /// start from a greedy matching instead of a maximum one
    pub greedy_matching: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Init,
    Augment,
    GlueGood,
    GluePlain,
}

/// One logged step. `links` is `S` after the step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub kind: StepKind,
    pub added: Vec<usize>,
    pub removed: Vec<usize>,
    pub links: Vec<usize>,
    pub bridges: usize,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PapRun {
    pub solution: Vec<usize>,
    /// the matching `M` of the initialization
    pub matching: Vec<usize>,
    pub unmatched_leaves: usize,
    pub steps: Vec<StepRecord>,
}

/// Partial solution `S` and the graph `H = (V, F ∪ S)` it induces.
#[derive(Clone, Debug)]
pub struct WorkingState<'a> {
    pub inst: &'a Instance,
    pub s: BTreeSet<usize>,
}

impl<'a> WorkingState<'a> {
    pub fn new(inst: &'a Instance, s: impl IntoIterator<Item = usize>) -> Self {
        WorkingState { inst, s: s.into_iter().collect() }
    }

    pub fn h(&self) -> Graph {
        self.inst.graph_with(self.s.iter().copied())
    }

    pub fn decomposition(&self) -> BlockDecomposition {
        decompose(&self.h())
    }

    fn link(&self, edge_id: usize) -> Option<usize> {
        self.inst.link_of_edge(edge_id)
    }
}

pub fn solve_pap(inst: &Instance) -> Result<PapRun> {
    solve_pap_with(inst, PapOptions::default())
}

pub fn solve_pap_with(inst: &Instance, opts: PapOptions) -> Result<PapRun> {
    if !inst.is_pap_without_isolated() {
        return Err(FapError::NotPaths);
    }
    if !inst.is_feasible(&(0..inst.links.len()).collect::<Vec<_>>()) {
        return Err(FapError::Infeasible);
    }
    let (matching, unmatched_leaves) = initial_partial_solution(inst, opts.greedy_matching);
    let mut state = WorkingState::new(inst, matching.iter().copied());
    let mut steps = Vec::new();
    log(&mut steps, &state, StepKind::Init, matching.clone(), Vec::new());

    while let Some(view) = BridgeView::new(&state) {
        let x = view.leaf();
        let z = view.choose_target(x)?;
        let trail = view.find_alternating_trail(x, z).expect("target was reachable");
        let before = state.s.clone();
        augment_trail(&mut state, &view, &trail)?;
        let (added, removed) = diff(&before, &state.s);
        log(&mut steps, &state, StepKind::Augment, added, removed);
    }

    loop {
        let dec = state.decomposition();
        if dec.components.len() <= 1 {
            break;
        }
        let before = state.s.clone();
        let kind = match find_good_cycle(&state) {
            Some(cycle) => {
                glue(&mut state, &cycle, opts.skip_link_removal)?;
                StepKind::GlueGood
            }
            None => {
                let q = plain_cycle(&state)?;
                glue_plain(&mut state, &q)?;
                StepKind::GluePlain
            }
        };
        let (added, removed) = diff(&before, &state.s);
        log(&mut steps, &state, kind, added, removed);
    }

    let solution: Vec<usize> = state.s.iter().copied().collect();
    if !inst.is_feasible(&solution) {
        return Err(FapError::Assertion("path solver returned an infeasible solution".into()));
    }
    Ok(PapRun { solution, matching, unmatched_leaves, steps })
}

fn diff(before: &BTreeSet<usize>, after: &BTreeSet<usize>) -> (Vec<usize>, Vec<usize>) {
    (after.difference(before).copied().collect(), before.difference(after).copied().collect())
}

fn log(steps: &mut Vec<StepRecord>, state: &WorkingState, kind: StepKind, added: Vec<usize>, removed: Vec<usize>) {
    let dec = state.decomposition();
    steps.push(StepRecord {
        step: steps.len(),
        kind,
        added,
        removed,
        links: state.s.iter().copied().collect(),
        bridges: dec.bridges.len(),
        components: dec.components.len(),
    });
}

// ---------------------------------------------------------------------------
// bridge covering

/// `G^C` for the component `C` of `H` with a bridge and the smallest vertex: other components and the 2EC classes of `C` are contracted.
pub struct BridgeView {
    pub component: usize,
    pub view: ContractedView,
    pub in_tree: Vec<bool>,
    /// `T^C` adjacency: (neighbour, edge id)
    pub tree: Vec<Vec<(usize, usize)>>,
    /// per source tree vertex: BFS parents (vertex, edge id) of outside paths
    paths: Vec<Vec<(usize, usize)>>,
    s: BTreeSet<usize>,
    forest_len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrailSegment {
    /// quotient vertices and the link indices joining them
    Outside { vertices: Vec<usize>, links: Vec<usize> },
    /// an `S`-link of the tree path, walked from `v_i` to `u_i`
    Back { link: usize, v: usize, u: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingTrail {
    pub x: usize,
    pub z: usize,
    /// vertices of `P^{xz}` from `x` to `z`
    pub tree_path: Vec<usize>,
    /// `S`-links on `P^{xz}` as (link, u_i, v_i), ordered from `x`
    pub path_links: Vec<(usize, usize, usize)>,
    pub segments: Vec<TrailSegment>,
}

impl AlternatingTrail {
    /// Links of the trail that are not in `S`.
    pub fn new_links(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .segments
            .iter()
            .flat_map(|s| match s {
                TrailSegment::Outside { links, .. } => links.clone(),
                TrailSegment::Back { .. } => Vec::new(),
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// `S`-links the trail walks backwards.
    pub fn used_links(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .segments
            .iter()
            .filter_map(|s| match s {
                TrailSegment::Back { link, .. } => Some(*link),
                TrailSegment::Outside { .. } => None,
            })
            .collect();
        out.sort_unstable();
        out
    }
}

impl BridgeView {
    /// `None` once `H` is bridgeless.
    pub fn new(state: &WorkingState) -> Option<Self> {
        let inst = state.inst;
        let h = state.h();
        let dec = decompose(&h);
        // components are numbered by smallest member
        let c = dec.bridges.iter().map(|&b| dec.comp_of[h.edge(b).unwrap().u]).min()?;
        let label: Vec<usize> =
            (0..inst.n).map(|v| if dec.comp_of[v] == c { dec.class_of[v] } else { inst.n + dec.comp_of[v] }).collect();
        let view = contract_labels(&inst.graph(), &label);
        let q = &view.quotient;
        let in_tree: Vec<bool> = view.super_vertices.iter().map(|m| dec.comp_of[m[0]] == c).collect();
        let mut tree = vec![Vec::new(); q.n()];
        for e in q.edges() {
            let in_h = match e.kind {
                EdgeKind::Forest => true,
                EdgeKind::Link => state.s.contains(&state.link(e.id).unwrap()),
            };
            if in_h {
                tree[e.u].push((e.v, e.id));
                tree[e.v].push((e.u, e.id));
            }
        }
        let mut bv = BridgeView { component: c, view, in_tree, tree, paths: Vec::new(), s: state.s.clone(), forest_len: inst.forest.len() };
        bv.paths = (0..bv.view.quotient.n()).map(|s| if bv.in_tree[s] { bv.outside_bfs(s) } else { Vec::new() }).collect();
        Some(bv)
    }

    fn link_of(&self, id: usize) -> Option<usize> {
        id.checked_sub(self.forest_len)
    }

    /// BFS over links outside `S`; tree vertices other than the source are
    /// reached but never expanded.
    fn outside_bfs(&self, s: usize) -> Vec<(usize, usize)> {
        let q = &self.view.quotient;
        let mut parent = vec![(NONE, NONE); q.n()];
        let mut seen = vec![false; q.n()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v != s && self.in_tree[v] {
                continue;
            }
            for e in q.incident(v) {
                let Some(l) = self.link_of(e.id) else { continue };
                if self.s.contains(&l) {
                    continue;
                }
                let w = e.other(v);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = (v, e.id);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    fn reaches(&self, a: usize, b: usize) -> bool {
        a != b && self.paths[a][b].0 != NONE
    }

    fn outside_path(&self, a: usize, b: usize) -> TrailSegment {
        let mut vertices = vec![b];
        let mut links = Vec::new();
        let mut cur = b;
        while cur != a {
            let (p, id) = self.paths[a][cur];
            links.push(self.link_of(id).unwrap());
            vertices.push(p);
            cur = p;
        }
        vertices.reverse();
        links.reverse();
        TrailSegment::Outside { vertices, links }
    }

    /// Leaf of `T^C` holding the smallest original vertex.
    pub fn leaf(&self) -> usize {
        (0..self.tree.len()).find(|&v| self.in_tree[v] && self.tree[v].len() == 1).expect("a tree with an edge has leaves")
    }

    /// BFS in `T^C` from `x`: (parent, edge id) and distance per vertex.
    fn tree_bfs(&self, x: usize) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut parent = vec![(NONE, NONE); self.tree.len()];
        let mut dist = vec![NONE; self.tree.len()];
        dist[x] = 0;
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &(w, id) in &self.tree[v] {
                if dist[w] == NONE {
                    dist[w] = dist[v] + 1;
                    parent[w] = (v, id);
                    queue.push_back(w);
                }
            }
        }
        (parent, dist)
    }

    /// Tree vertex at maximum `T^C` distance from `x` reachable by an
    /// alternating trail; ties go to the smallest id.
    pub fn choose_target(&self, x: usize) -> Result<usize> {
        let (_, dist) = self.tree_bfs(x);
        let mut best: Option<usize> = None;
        for z in 0..self.tree.len() {
            if z == x || !self.in_tree[z] || self.find_alternating_trail(x, z).is_none() {
                continue;
            }
            if best.is_none_or(|b| dist[z] > dist[b]) {
                best = Some(z);
            }
        }
        best.ok_or_else(|| FapError::Assertion("no vertex of the tree is reachable by an alternating trail".into()))
    }

    /// Shortest path in the auxiliary digraph on x, ℓ_1..ℓ_l, z, expanded
    /// into outside paths.
    pub fn find_alternating_trail(&self, x: usize, z: usize) -> Option<AlternatingTrail> {
        if x == z || !self.in_tree[x] || !self.in_tree[z] {
            return None;
        }
        let (parent, _) = self.tree_bfs(x);
        let mut tree_path = vec![z];
        let mut edges = Vec::new();
        let mut cur = z;
        while cur != x {
            let (p, id) = parent[cur];
            edges.push((p, cur, id));
            tree_path.push(p);
            cur = p;
        }
        tree_path.reverse();
        edges.reverse();
        let path_links: Vec<(usize, usize, usize)> =
            edges.iter().filter_map(|&(a, b, id)| self.link_of(id).map(|l| (l, a, b))).collect();
        let l = path_links.len();
        // aux nodes: 0 = x, 1..=l = links, l+1 = z
        let arc = |i: usize, j: usize| -> bool {
            if j <= i {
                return false;
            }
            let from = if i == 0 { x } else { path_links[i - 1].1 };
            let to = if j == l + 1 { z } else { path_links[j - 1].2 };
            self.reaches(from, to)
        };
        let mut prev = vec![NONE; l + 2];
        let mut seen = vec![false; l + 2];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for j in i + 1..l + 2 {
                if !seen[j] && arc(i, j) {
                    seen[j] = true;
                    prev[j] = i;
                    queue.push_back(j);
                }
            }
        }
        if !seen[l + 1] {
            return None;
        }
        let mut nodes = vec![l + 1];
        while *nodes.last().unwrap() != 0 {
            nodes.push(prev[*nodes.last().unwrap()]);
        }
        nodes.reverse();
        let mut segments = Vec::new();
        for w in nodes.windows(2) {
            let (i, j) = (w[0], w[1]);
            let from = if i == 0 { x } else { path_links[i - 1].1 };
            let to = if j == l + 1 { z } else { path_links[j - 1].2 };
            segments.push(self.outside_path(from, to));
            if j != l + 1 {
                let (link, u, v) = path_links[j - 1];
                segments.push(TrailSegment::Back { link, v, u });
            }
        }
        Some(AlternatingTrail { x, z, tree_path, path_links, segments })
    }
}

/// `S := S △ P`, checking that `P △ P^{xz}` is one cycle through every
/// vertex either visits and that the bridge count drops.
pub fn augment_trail(state: &mut WorkingState, view: &BridgeView, trail: &AlternatingTrail) -> Result<()> {
    let fail = |m: &str| Err(FapError::Assertion(m.into()));
    let q = &view.view.quotient;
    let used: BTreeSet<usize> = trail.used_links().into_iter().collect();
    let added = trail.new_links();
    // edges of P △ P^{xz} in the quotient
    let mut cycle: Vec<(usize, usize)> = Vec::new();
    for w in trail.tree_path.windows(2) {
        let id = view.tree[w[0]].iter().find(|&&(y, _)| y == w[1]).unwrap().1;
        if view.link_of(id).is_some_and(|l| used.contains(&l)) {
            continue;
        }
        cycle.push((w[0], w[1]));
    }
    let mut visited: BTreeSet<usize> = trail.tree_path.iter().copied().collect();
    for seg in &trail.segments {
        if let TrailSegment::Outside { vertices, .. } = seg {
            visited.extend(vertices.iter().copied());
            cycle.extend(vertices.windows(2).map(|w| (w[0], w[1])));
        }
    }
    let mut deg = vec![0usize; q.n()];
    for &(a, b) in &cycle {
        deg[a] += 1;
        deg[b] += 1;
    }
    if visited.iter().any(|&v| deg[v] != 2) || deg.iter().any(|&d| d != 0 && d != 2) {
        return fail("trail and tree path do not form a cycle");
    }
    let verts: Vec<usize> = visited.iter().copied().collect();
    let pos = |v: usize| verts.binary_search(&v).unwrap();
    let mut dsu = crate::instance::Dsu::new(verts.len());
    for &(a, b) in &cycle {
        dsu.union(pos(a), pos(b));
    }
    let root = dsu.find(0);
    if (0..verts.len()).any(|i| dsu.find(i) != root) {
        return fail("trail cycle is disconnected");
    }

    let before = state.decomposition().bridges.len();
    for l in &used {
        state.s.remove(l);
    }
    for l in added {
        if !state.s.insert(l) {
            return fail("trail reuses a link of S");
        }
    }
    if state.decomposition().bridges.len() >= before {
        return fail("augmentation did not reduce the number of bridges");
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gluing

/// A good cycle affecting the simple component `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodCycle {
    pub component: Vec<usize>,
    pub p1: Vec<usize>,
    pub p2: Vec<usize>,
    /// (u1, v1, u2, v2); link A = {u1,u2} has the smaller index
    pub corners: (usize, usize, usize, usize),
    /// links of C, (A, B)
    pub c_links: (usize, usize),
    /// links of the cycle
    pub links: Vec<usize>,
    /// vertices of the cycle outside C (quotient ids of G_{H|C})
    pub outside: Vec<usize>,
}

impl GoodCycle {
    pub fn removed(&self) -> Vec<usize> {
        [self.c_links.0, self.c_links.1].into_iter().filter(|l| !self.links.contains(l)).collect()
    }
}

/// Components of `H` that are a cycle with exactly two links, as (vertices,
/// the two links in ascending order).
pub fn simple_components(state: &WorkingState) -> Vec<(Vec<usize>, (usize, usize))> {
    let inst = state.inst;
    let h = state.h();
    let dec = decompose(&h);
    let mut out = Vec::new();
    for comp in &dec.components {
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        let forest = inst.forest.iter().filter(|(u, _)| members.contains(u)).count();
        let links: Vec<usize> = state.s.iter().copied().filter(|&l| members.contains(&inst.links[l].0)).collect();
        if links.len() == 2 && forest + 2 == comp.len() && dec.bridges.iter().all(|&b| !members.contains(&h.edge(b).unwrap().u)) {
            out.push((comp.clone(), (links[0], links[1])));
        }
    }
    out
}

/// Scans simple components in order of their smallest vertex and returns the
/// first good cycle found.
pub fn find_good_cycle(state: &WorkingState) -> Option<GoodCycle> {
    simple_components(state).into_iter().find_map(|(comp, links)| good_cycle_for(state, &comp, links))
}

fn forest_path(inst: &Instance, start: usize) -> Vec<usize> {
    let mut adj = vec![Vec::new(); inst.n];
    for &(a, b) in &inst.forest {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut out = vec![start];
    let mut prev = NONE;
    let mut cur = start;
    while let Some(&nx) = adj[cur].iter().find(|&&y| y != prev) {
        out.push(nx);
        prev = cur;
        cur = nx;
    }
    out
}

/// `G_{H|C}`: every component but `comp` contracted.
fn glue_view(state: &WorkingState, comp: &[usize]) -> ContractedView {
    let inst = state.inst;
    let dec = state.decomposition();
    let inside: BTreeSet<usize> = comp.iter().copied().collect();
    let label: Vec<usize> = (0..inst.n).map(|v| if inside.contains(&v) { v } else { inst.n + dec.comp_of[v] }).collect();
    contract_labels(&inst.graph(), &label)
}

fn good_cycle_for(state: &WorkingState, comp: &[usize], (la, lb): (usize, usize)) -> Option<GoodCycle> {
    let inst = state.inst;
    let comps = inst.forest_components();
    let c1 = comps[comp[0]];
    let side = |l: usize| {
        let (a, b) = inst.links[l];
        if comps[a] == c1 {
            (a, b)
        } else {
            (b, a)
        }
    };
    let (u1, u2) = side(la);
    let (v1, v2) = side(lb);
    let p1 = forest_path(inst, u1);
    let p2 = forest_path(inst, u2);
    let view = glue_view(state, comp);
    let qv = |v: usize| view.part[v];
    let inside: BTreeSet<usize> = comp.iter().map(|&v| qv(v)).collect();
    let search = |a: usize, b: usize, long: bool| good_path(&view, &inside, qv(a), qv(b), long, inst.forest.len());

    let make = |paths: Vec<(Vec<usize>, Vec<usize>)>, keep: Option<usize>| {
        let mut links: Vec<usize> = paths.iter().flat_map(|p| p.1.iter().copied()).collect();
        links.extend(keep);
        links.sort_unstable();
        let mut outside: Vec<usize> =
            paths.iter().flat_map(|p| p.0[1..p.0.len() - 1].iter().copied()).collect();
        outside.sort_unstable();
        GoodCycle {
            component: comp.to_vec(),
            p1: p1.clone(),
            p2: p2.clone(),
            corners: (u1, v1, u2, v2),
            c_links: (la, lb),
            links,
            outside,
        }
    };

    if let Some(p) = search(v1, v2, true) {
        return Some(make(vec![p], Some(la)));
    }
    if let Some(p) = search(u1, u2, true) {
        return Some(make(vec![p], Some(lb)));
    }
    let a = search(v1, u2, true).or_else(|| search(v1, u2, false));
    let b = search(u1, v2, true).or_else(|| search(u1, v2, false));
    match (a, b) {
        (Some(a), Some(b)) if a.1.len() >= 2 || b.1.len() >= 2 => {
            let ia: BTreeSet<usize> = a.0[1..a.0.len() - 1].iter().copied().collect();
            assert!(b.0[1..b.0.len() - 1].iter().all(|v| !ia.contains(v)), "good paths of a crossed cycle must be disjoint");
            Some(make(vec![a, b], None))
        }
        _ => None,
    }
}

/// Good `a`-`b` path in `G_{H|C}`: interior avoids `C`. With `long`, direct
/// `a`-`b` edges are skipped. Returns (quotient vertices, link indices).
fn good_path(view: &ContractedView, inside: &BTreeSet<usize>, a: usize, b: usize, long: bool, forest_len: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let q = &view.quotient;
    let mut parent = vec![(NONE, NONE); q.n()];
    let mut seen = vec![false; q.n()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for e in q.incident(v) {
            if e.kind != EdgeKind::Link {
                continue;
            }
            let w = e.other(v);
            if seen[w] || (inside.contains(&w) && w != b) || (long && v == a && w == b) {
                continue;
            }
            seen[w] = true;
            parent[w] = (v, e.id);
            queue.push_back(w);
        }
    }
    if !seen[b] {
        return None;
    }
    let mut vertices = vec![b];
    let mut links = Vec::new();
    let mut cur = b;
    while cur != a {
        let (p, id) = parent[cur];
        links.push(id - forest_len);
        vertices.push(p);
        cur = p;
    }
    vertices.reverse();
    links.reverse();
    Some((vertices, links))
}

/// Glues along a good cycle. With `skip_removal` the two links of `C` stay,
/// which is wrong and only used to check that the auditor notices.
pub fn glue(state: &mut WorkingState, cycle: &GoodCycle, skip_removal: bool) -> Result<()> {
    let before = state.decomposition().components.len();
    if !skip_removal {
        state.s.remove(&cycle.c_links.0);
        state.s.remove(&cycle.c_links.1);
    }
    state.s.extend(cycle.links.iter().copied());
    check_glued(state, before)
}

fn check_glued(state: &WorkingState, before: usize) -> Result<()> {
    let dec = state.decomposition();
    if !dec.bridges.is_empty() {
        return Err(FapError::Assertion("gluing left a bridge".into()));
    }
    if dec.components.len() >= before {
        return Err(FapError::Assertion("gluing did not merge components".into()));
    }
    Ok(())
}

/// Shortest cycle of `G_H` through the quotient vertex holding vertex 0,
/// as link indices.
pub fn plain_cycle(state: &WorkingState) -> Result<Vec<usize>> {
    let inst = state.inst;
    let dec = state.decomposition();
    let view = contract_labels(&inst.graph(), &dec.comp_of);
    let q = &view.quotient;
    let mut best: Option<Vec<usize>> = None;
    for e0 in q.incident(0) {
        let y = e0.other(0);
        let mut parent = vec![(NONE, NONE); q.n()];
        let mut seen = vec![false; q.n()];
        seen[y] = true;
        let mut queue = VecDeque::from([y]);
        while let Some(v) = queue.pop_front() {
            if v == 0 {
                break;
            }
            for e in q.incident(v) {
                let w = e.other(v);
                if e.id == e0.id || seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = (v, e.id);
                queue.push_back(w);
            }
        }
        if !seen[0] {
            continue;
        }
        let mut ids = vec![e0.id];
        let mut cur = 0;
        while cur != y {
            let (p, id) = parent[cur];
            ids.push(id);
            cur = p;
        }
        if best.as_ref().is_none_or(|b| ids.len() < b.len()) {
            best = Some(ids);
        }
    }
    let ids = best.ok_or_else(|| FapError::Assertion("no cycle through the first component".into()))?;
    let mut links: Vec<usize> = ids.into_iter().map(|id| inst.link_of_edge(id).expect("G_H edges are links")).collect();
    links.sort_unstable();
    Ok(links)
}

pub fn glue_plain(state: &mut WorkingState, links: &[usize]) -> Result<()> {
    let before = state.decomposition().components.len();
    state.s.extend(links.iter().copied());
    check_glued(state, before)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{solve_exact_fap, Budget};

    #[test]
    fn four_cycle_is_solved_by_the_matching() {
        let run = solve_pap(&fixtures::four_cycle()).unwrap();
        assert_eq!(run.solution, vec![0, 1]);
        assert_eq!(run.steps.len(), 1);
    }

    #[test]
    fn figure2_within_bound() {
        let inst = fixtures::figure2(5, false);
        let run = solve_pap(&inst).unwrap();
        assert!(run.solution.len() <= 17, "{}", run.solution.len());
        assert_eq!(run.steps[1].kind, StepKind::GlueGood);
    }

    #[test]
    fn figure4_trail_gives_figure5() {
        let (inst, s) = fixtures::figure4_state();
        let mut state = WorkingState::new(&inst, s);
        let view = BridgeView::new(&state).unwrap();
        let x = view.leaf();
        assert_eq!(view.view.super_vertices[x], vec![0]);
        let z = view.choose_target(x).unwrap();
        assert!(view.view.super_vertices[z].contains(&8));
        let trail = view.find_alternating_trail(x, z).unwrap();
        // skips l2 = {3,4}
        assert_eq!(trail.used_links(), vec![0, 2, 3]);
        augment_trail(&mut state, &view, &trail).unwrap();
        assert_eq!(state.s.iter().copied().collect::<Vec<_>>(), fixtures::figure5_links());
    }

    #[test]
    fn single_link_trail() {
        // T^C is one forest edge and the only link closes it
        let inst = Instance::new(2, vec![(0, 1)], vec![(0, 1)]);
        let mut state = WorkingState::new(&inst, []);
        let view = BridgeView::new(&state).unwrap();
        let z = view.choose_target(0).unwrap();
        assert_eq!(z, 1);
        let trail = view.find_alternating_trail(0, 1).unwrap();
        assert_eq!(trail.new_links(), vec![0]);
        augment_trail(&mut state, &view, &trail).unwrap();
        assert!(state.decomposition().bridges.is_empty());
    }

    #[test]
    fn figure6_good_cycles() {
        let (inst, s) = fixtures::figure6_state(false);
        let state = WorkingState::new(&inst, s);
        let c = find_good_cycle(&state).unwrap();
        assert_eq!(c.component, vec![0, 1, 2, 3, 4, 5]);
        // keeps {u1,u2}
        assert_eq!(c.removed().len(), 1);

        let (inst, s) = fixtures::figure6_state(true);
        let mut state = WorkingState::new(&inst, s);
        let c = find_good_cycle(&state).unwrap();
        assert_eq!(c.removed().len(), 2);
        let size = state.s.len();
        glue(&mut state, &c, false).unwrap();
        assert_eq!(state.s.len(), size + c.links.len() - 2);
    }

    #[test]
    fn no_simple_components_no_good_cycle() {
        // two 4-cycles each made of a path and... three links: not simple
        let inst = Instance::new(
            6,
            vec![(0, 1), (1, 2), (3, 4), (4, 5)],
            vec![(0, 2), (3, 5), (2, 3), (0, 5)],
        );
        let state = WorkingState::new(&inst, [0, 1]);
        assert!(simple_components(&state).is_empty());
        assert!(find_good_cycle(&state).is_none());
        let q = plain_cycle(&state).unwrap();
        assert_eq!(q, vec![2, 3]);
    }

    #[test]
    fn pap_bound_on_small_figures() {
        for inst in [fixtures::figure2(2, false), fixtures::figure2(3, true), fixtures::four_cycle()] {
            let opt = solve_exact_fap(&inst, &Budget::default()).unwrap().opt_value as usize;
            let run = solve_pap(&inst).unwrap();
            assert!(4 * run.solution.len() <= 7 * (2 * opt - inst.n_comp()) + 3);
        }
    }
}
