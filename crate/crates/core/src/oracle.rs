//! Exact solvers by bounded exhaustive search. They are the ground truth the
//! approximation tracks and the credit auditor are checked against.

use crate::error::{FapError, Result};
use crate::graph::Graph;
use crate::instance::Instance;
use crate::tap::Arc;

#[derive(Clone, Debug)]
pub struct Budget {
    /// refuse FAP instances with more links than this
    pub max_links: usize,
    /// subsets / search nodes before giving up
    pub max_nodes: u64,
    /// collect every optimal solution (up to `cap`)
    pub all_optimal: bool,
    pub cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_links: 22, max_nodes: 200_000_000, all_optimal: false, cap: 10_000 }
    }
}

impl Budget {
    pub fn all(cap: usize) -> Self {
        Budget { all_optimal: true, cap, ..Budget::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_value: u64,
    pub witness: Vec<usize>,
    pub all_optimal: Option<Vec<Vec<usize>>>,
    pub explored: u64,
}

/// Minimum number of links making `F ∪ S` 2-edge-connected, by increasing
/// subset size starting from the trivial lower bounds.
pub fn solve_exact_fap(inst: &Instance, budget: &Budget) -> Result<OracleResult> {
    let m = inst.links.len();
    if m > budget.max_links {
        return Err(FapError::BudgetExceeded { lower: inst.lower_bound(), upper: reverse_delete(inst).len() });
    }
    let deg = inst.forest_degrees();
    let need: Vec<usize> = deg.iter().map(|&d| 2usize.saturating_sub(d)).collect();
    let mut search = Search {
        inst,
        need,
        have: vec![0; inst.n],
        chosen: Vec::new(),
        explored: 0,
        max_nodes: budget.max_nodes,
        found: Vec::new(),
        cap: if budget.all_optimal { budget.cap } else { 1 },
    };
    for k in inst.lower_bound()..=m {
        let deficit: usize = search.need.iter().sum();
        search.layer(0, k, deficit)?;
        if !search.found.is_empty() {
            let witness = search.found[0].clone();
            return Ok(OracleResult {
                opt_value: k as u64,
                witness,
                all_optimal: budget.all_optimal.then(|| search.found.clone()),
                explored: search.explored,
            });
        }
        if search.explored > budget.max_nodes {
            return Err(FapError::BudgetExceeded { lower: k, upper: reverse_delete(inst).len() });
        }
    }
    Err(FapError::Infeasible)
}

struct Search<'a> {
    inst: &'a Instance,
    // link endpoints each vertex needs in total
    need: Vec<usize>,
    // chosen link endpoints at each vertex
    have: Vec<usize>,
    chosen: Vec<usize>,
    explored: u64,
    max_nodes: u64,
    found: Vec<Vec<usize>>,
    cap: usize,
}

impl Search<'_> {
    fn layer(&mut self, from: usize, left: usize, deficit: usize) -> Result<()> {
        if self.found.len() >= self.cap || 2 * left < deficit {
            return Ok(());
        }
        if left == 0 {
            self.explored += 1;
            if self.explored > self.max_nodes {
                return Err(FapError::BudgetExceeded { lower: self.chosen.len(), upper: self.inst.links.len() });
            }
            if self.inst.is_feasible(&self.chosen) {
                self.found.push(self.chosen.clone());
            }
            return Ok(());
        }
        let m = self.inst.links.len();
        for i in from..=m - left {
            let (u, v) = self.inst.links[i];
            let mut gain = 0;
            for x in [u, v] {
                if self.have[x] < self.need[x] {
                    gain += 1;
                }
                self.have[x] += 1;
            }
            self.chosen.push(i);
            let r = self.layer(i + 1, left - 1, deficit - gain);
            self.chosen.pop();
            self.have[u] -= 1;
            self.have[v] -= 1;
            r?;
            if self.found.len() >= self.cap {
                break;
            }
        }
        Ok(())
    }
}

/// Any inclusion-minimal feasible solution, by deleting links in reverse order.
pub fn reverse_delete(inst: &Instance) -> Vec<usize> {
    let mut keep: Vec<usize> = (0..inst.links.len()).collect();
    for i in (0..inst.links.len()).rev() {
        let trial: Vec<usize> = keep.iter().copied().filter(|&l| l != i).collect();
        if inst.is_feasible(&trial) {
            keep = trial;
        }
    }
    keep
}

/// Minimum-weight set of links covering every tree edge, where link `{a,b}`
/// covers the edges of the tree path between `a` and `b`. Weights are
/// arbitrary nonnegative integers.
pub fn solve_exact_wtap(tree: &Graph, links: &[(usize, usize, u64)], budget: &Budget) -> Result<OracleResult> {
    let paths = tree_path_masks(tree, links)?;
    let all: u128 = if tree.edge_count() == 128 { u128::MAX } else { (1u128 << tree.edge_count()) - 1 };
    if paths.iter().fold(0, |acc, p| acc | p) != all {
        return Err(FapError::Infeasible);
    }
    let mut best = (u64::MAX, Vec::new());
    let mut explored = 0u64;
    let mut chosen = Vec::new();
    cover_branch(&paths, links, all, 0, 0, &mut chosen, &mut best, &mut explored, budget.max_nodes)?;
    let mut witness = best.1;
    witness.sort_unstable();
    Ok(OracleResult { opt_value: best.0, witness, all_optimal: None, explored })
}

#[allow(clippy::too_many_arguments)]
fn cover_branch(
    paths: &[u128],
    links: &[(usize, usize, u64)],
    all: u128,
    covered: u128,
    weight: u64,
    chosen: &mut Vec<usize>,
    best: &mut (u64, Vec<usize>),
    explored: &mut u64,
    max_nodes: u64,
) -> Result<()> {
    *explored += 1;
    if *explored > max_nodes {
        return Err(FapError::BudgetExceeded { lower: 0, upper: best.0 as usize });
    }
    if weight >= best.0 {
        return Ok(());
    }
    if covered == all {
        *best = (weight, chosen.clone());
        return Ok(());
    }
    let e = (!covered & all).trailing_zeros();
    for (i, &p) in paths.iter().enumerate() {
        if p >> e & 1 == 1 {
            chosen.push(i);
            cover_branch(paths, links, all, covered | p, weight + links[i].2, chosen, best, explored, max_nodes)?;
            chosen.pop();
        }
    }
    Ok(())
}

/// Bitmask of tree edges (by position in `tree.edges()`) on each link's path.
pub fn tree_path_masks(tree: &Graph, links: &[(usize, usize, u64)]) -> Result<Vec<u128>> {
    let n = tree.n();
    if tree.edge_count() + 1 != n || tree.component_labels().iter().any(|&c| c != 0) {
        return Err(FapError::NotAForest);
    }
    if tree.edge_count() > 128 {
        return Err(FapError::BudgetExceeded { lower: 0, upper: 0 });
    }
    // parent pointers from vertex 0
    let mut parent = vec![(usize::MAX, 0usize); n];
    let mut depth = vec![0usize; n];
    let mut order = vec![0];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for (pos, e) in tree.edges().iter().enumerate() {
            if e.u == x || e.v == x {
                let y = e.other(x);
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = (x, pos);
                    depth[y] = depth[x] + 1;
                    order.push(y);
                }
            }
        }
    }
    Ok(links
        .iter()
        .map(|&(a, b, _)| {
            let (mut a, mut b) = (a, b);
            let mut mask = 0u128;
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                mask |= 1u128 << parent[a].1;
                a = parent[a].0;
            }
            mask
        })
        .collect())
}

/// Minimum-weight arc set entering every nonempty `R ⊆ V \ {root}` at least
/// twice. Zero-weight arcs are always taken; the rest is a branch and bound
/// over the most constrained cut. Returns (weight, arc indices).
pub fn min_double_cover_exact(n: usize, arcs: &[Arc], root: usize, budget: &Budget) -> Result<(u64, Vec<usize>)> {
    if n > 12 {
        return Err(FapError::BudgetExceeded { lower: 0, upper: arcs.iter().map(|a| a.weight).sum::<u64>() as usize });
    }
    let others: Vec<usize> = (0..n).filter(|&v| v != root).collect();
    let ncuts = 1usize << others.len();
    let mut bit = vec![usize::MAX; n];
    for (i, &v) in others.iter().enumerate() {
        bit[v] = i;
    }
    // cuts entered by each arc
    let enters: Vec<Vec<usize>> = arcs
        .iter()
        .map(|a| {
            if a.head == root || a.tail == a.head {
                return Vec::new();
            }
            let hb = 1usize << bit[a.head];
            let tb = if a.tail == root { 0 } else { 1usize << bit[a.tail] };
            (1..ncuts).filter(|&r| r & hb != 0 && r & tb == 0).collect()
        })
        .collect();
    let mut st = CoverState {
        arcs,
        enters,
        count: vec![0u32; ncuts],
        avail: vec![0u32; ncuts],
        state: vec![0u8; arcs.len()],
        weight: 0,
        best: (u64::MAX, Vec::new()),
        explored: 0,
        max_nodes: budget.max_nodes,
        bit,
    };
    for (i, a) in arcs.iter().enumerate() {
        for &r in &st.enters[i] {
            st.avail[r] += 1;
        }
        if a.weight == 0 {
            st.take(i);
        }
    }
    if (1..ncuts).any(|r| st.avail[r] + st.count[r] < 2) {
        return Err(FapError::Infeasible);
    }
    st.branch()?;
    let mut chosen = st.best.1.clone();
    chosen.sort_unstable();
    Ok((st.best.0, chosen))
}

struct CoverState<'a> {
    arcs: &'a [Arc],
    enters: Vec<Vec<usize>>,
    // chosen arcs entering each cut
    count: Vec<u32>,
    // undecided arcs entering each cut
    avail: Vec<u32>,
    // 0 undecided, 1 chosen, 2 excluded
    state: Vec<u8>,
    weight: u64,
    best: (u64, Vec<usize>),
    explored: u64,
    max_nodes: u64,
    bit: Vec<usize>,
}

impl CoverState<'_> {
    fn take(&mut self, i: usize) {
        self.state[i] = 1;
        self.weight += self.arcs[i].weight;
        for &r in &self.enters[i] {
            self.count[r] += 1;
            self.avail[r] -= 1;
        }
    }

    fn untake(&mut self, i: usize) {
        self.state[i] = 0;
        self.weight -= self.arcs[i].weight;
        for &r in &self.enters[i] {
            self.count[r] -= 1;
            self.avail[r] += 1;
        }
    }

    fn exclude(&mut self, i: usize) {
        self.state[i] = 2;
        for &r in &self.enters[i] {
            self.avail[r] -= 1;
        }
    }

    fn include_back(&mut self, i: usize) {
        self.state[i] = 0;
        for &r in &self.enters[i] {
            self.avail[r] += 1;
        }
    }

    /// Each arc enters exactly one singleton cut, so the singleton deficits
    /// filled with their cheapest available arcs bound the remaining cost.
    fn lower_bound(&self) -> u64 {
        let mut lb = 0;
        for (v, &b) in self.bit.iter().enumerate() {
            if b == usize::MAX {
                continue;
            }
            let r = 1usize << b;
            let deficit = 2u32.saturating_sub(self.count[r]) as usize;
            if deficit == 0 {
                continue;
            }
            let mut w: Vec<u64> =
                (0..self.arcs.len()).filter(|&i| self.state[i] == 0 && self.arcs[i].head == v && !self.enters[i].is_empty()).map(|i| self.arcs[i].weight).collect();
            w.sort_unstable();
            lb += w.iter().take(deficit).sum::<u64>();
        }
        lb
    }

    fn branch(&mut self) -> Result<()> {
        self.explored += 1;
        if self.explored > self.max_nodes {
            return Err(FapError::BudgetExceeded { lower: 0, upper: self.best.0 as usize });
        }
        if self.weight + self.lower_bound() >= self.best.0 {
            return Ok(());
        }
        // most constrained unsatisfied cut
        let mut pick = None;
        for r in 1..self.count.len() {
            if self.count[r] >= 2 {
                continue;
            }
            let deficit = 2 - self.count[r];
            if self.avail[r] < deficit {
                return Ok(());
            }
            let slack = self.avail[r] - deficit;
            if pick.is_none_or(|(s, _)| slack < s) {
                pick = Some((slack, r));
            }
        }
        let Some((_, r)) = pick else {
            self.best = (self.weight, (0..self.arcs.len()).filter(|&i| self.state[i] == 1).collect());
            return Ok(());
        };
        let mut cand: Vec<usize> = (0..self.arcs.len()).filter(|&i| self.state[i] == 0 && self.enters[i].contains(&r)).collect();
        cand.sort_by_key(|&i| (self.arcs[i].weight, i));
        let mut excluded = Vec::new();
        let mut result = Ok(());
        for &c in &cand {
            self.take(c);
            result = self.branch();
            self.untake(c);
            if result.is_err() {
                break;
            }
            self.exclude(c);
            excluded.push(c);
        }
        for c in excluded {
            self.include_back(c);
        }
        result
    }
}
