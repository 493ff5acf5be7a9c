//! Instance model, validation and the line-oriented text format.
//!
//! ```text
//! # comment
//! fap <n> <|F|> <|L|>
//! e <u> <v>      forest edge, 1-based
//! l <u> <v>      link
//! ```
//!
//! Solutions are written as `sol <k>` followed by `k` link lines.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{FapError, Result};
use crate::graph::{is_two_edge_connected, EdgeKind, Graph};

/// Forest `F` plus candidate links `L` on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Instance {
    pub n: usize,
    pub forest: Vec<(usize, usize)>,
    pub links: Vec<(usize, usize)>,
}

impl Instance {
    pub fn new(n: usize, forest: Vec<(usize, usize)>, links: Vec<(usize, usize)>) -> Self {
        Instance { n, forest, links }
    }

    /// Number of forest components, `|V| - |F|`.
    pub fn n_comp(&self) -> usize {
        self.n - self.forest.len()
    }

    /// Edge id of link `i` in [`Instance::graph`].
    pub fn link_edge_id(&self, i: usize) -> usize {
        self.forest.len() + i
    }

    /// Link index of an edge id, if the edge is a link.
    pub fn link_of_edge(&self, id: usize) -> Option<usize> {
        id.checked_sub(self.forest.len()).filter(|&i| i < self.links.len())
    }

    /// `(V, F ∪ L)`; forest edges get ids `0..|F|`, link `i` gets `|F| + i`.
    pub fn graph(&self) -> Graph {
        self.graph_with(0..self.links.len())
    }

    /// `(V, F ∪ S)` for a set of link indices.
    pub fn graph_with(&self, links: impl IntoIterator<Item = usize>) -> Graph {
        let mut chosen: Vec<usize> = links.into_iter().collect();
        chosen.sort_unstable();
        chosen.dedup();
        let mut g = Graph::new(self.n);
        for (i, &(u, v)) in self.forest.iter().enumerate() {
            g.add_edge(u, v, i, EdgeKind::Forest).expect("validated forest edge");
        }
        for i in chosen {
            let (u, v) = self.links[i];
            g.add_edge(u, v, self.link_edge_id(i), EdgeKind::Link).expect("validated link");
        }
        g
    }

    /// `(V, F)` alone.
    pub fn forest_graph(&self) -> Graph {
        self.graph_with(std::iter::empty())
    }

    pub fn is_feasible(&self, links: &[usize]) -> bool {
        is_two_edge_connected(&self.graph_with(links.iter().copied()))
    }

    pub fn forest_degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.forest {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Vertices of forest degree 1.
    pub fn leaves(&self) -> Vec<usize> {
        self.forest_degrees().iter().enumerate().filter(|(_, &d)| d == 1).map(|(v, _)| v).collect()
    }

    /// Vertices of forest degree 0.
    pub fn isolated(&self) -> Vec<usize> {
        self.forest_degrees().iter().enumerate().filter(|(_, &d)| d == 0).map(|(v, _)| v).collect()
    }

    /// True when every forest component is a path with at least one edge.
    pub fn is_pap_without_isolated(&self) -> bool {
        self.forest_degrees().iter().all(|&d| d == 1 || d == 2)
    }

    /// Forest component label per vertex.
    pub fn forest_components(&self) -> Vec<usize> {
        self.forest_graph().component_labels()
    }

    /// Lower bound on `opt` for `n >= 2`: at least `n_comp`, and every leaf
    /// needs one link endpoint (an isolated vertex two).
    pub fn lower_bound(&self) -> usize {
        let ends: usize = self.forest_degrees().iter().map(|&d| 2usize.saturating_sub(d)).sum();
        self.n_comp().max(ends.div_ceil(2))
    }

    /// Link index per unordered endpoint pair.
    pub fn link_index(&self) -> HashMap<(usize, usize), usize> {
        self.links.iter().enumerate().map(|(i, &(u, v))| ((u.min(v), u.max(v)), i)).collect()
    }
}

/// Checks the structural invariants and 2-edge-connectivity of `F ∪ L`.
pub fn validate(raw: Instance) -> Result<Instance> {
    if raw.n < 2 {
        return Err(FapError::MalformedEdge("an instance needs at least two vertices".into()));
    }
    check_pairs(raw.n, &raw.forest, "forest edge")?;
    check_pairs(raw.n, &raw.links, "link")?;
    let mut dsu = Dsu::new(raw.n);
    for &(u, v) in &raw.forest {
        if !dsu.union(u, v) {
            return Err(FapError::NotAForest);
        }
    }
    if !is_two_edge_connected(&raw.graph()) {
        return Err(FapError::Infeasible);
    }
    Ok(raw)
}

fn check_pairs(n: usize, pairs: &[(usize, usize)], what: &str) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &(u, v) in pairs {
        if u >= n || v >= n {
            return Err(FapError::MalformedEdge(format!("{what} {} {} out of range", u + 1, v + 1)));
        }
        if u == v {
            return Err(FapError::MalformedEdge(format!("{what} {} {} is a self-loop", u + 1, v + 1)));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(FapError::MalformedEdge(format!("duplicate {what} {} {}", u + 1, v + 1)));
        }
    }
    Ok(())
}

/// Parses the text format. Performs syntax checks only; call [`validate`]
/// for the semantic ones.
pub fn parse(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut inst = Instance::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| FapError::MalformedEdge(format!("line {}: {msg}", lineno + 1));
        let tok: Vec<&str> = line.split_whitespace().collect();
        let nums = |t: &[&str]| -> Result<Vec<usize>> {
            t.iter().map(|s| s.parse::<usize>().map_err(|_| bad(&format!("bad number `{s}`")))).collect()
        };
        match (tok[0], header) {
            ("fap", None) => {
                if tok.len() != 4 {
                    return Err(bad("header must be `fap <n> <|F|> <|L|>`"));
                }
                let h = nums(&tok[1..])?;
                header = Some((h[0], h[1], h[2]));
                inst.n = h[0];
            }
            ("fap", Some(_)) => return Err(bad("repeated header")),
            (_, None) => return Err(bad("missing header")),
            (kind @ ("e" | "l"), Some(_)) => {
                if tok.len() != 3 {
                    return Err(bad("edge lines need two endpoints"));
                }
                let p = nums(&tok[1..])?;
                if p[0] == 0 || p[1] == 0 || p[0] > inst.n || p[1] > inst.n {
                    return Err(bad("vertex out of range"));
                }
                let e = (p[0] - 1, p[1] - 1);
                if kind == "e" {
                    inst.forest.push(e);
                } else {
                    inst.links.push(e);
                }
            }
            (t, Some(_)) => return Err(bad(&format!("unknown record `{t}`"))),
        }
    }
    let (_, f, l) = header.ok_or_else(|| FapError::MalformedEdge("empty input".into()))?;
    if inst.forest.len() != f || inst.links.len() != l {
        return Err(FapError::MalformedEdge(format!(
            "header announces {f} edges and {l} links, found {} and {}",
            inst.forest.len(),
            inst.links.len()
        )));
    }
    check_pairs(inst.n, &inst.forest, "forest edge")?;
    check_pairs(inst.n, &inst.links, "link")?;
    Ok(inst)
}

pub fn render(inst: &Instance) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "fap {} {} {}", inst.n, inst.forest.len(), inst.links.len());
    for &(u, v) in &inst.forest {
        let _ = writeln!(s, "e {} {}", u + 1, v + 1);
    }
    for &(u, v) in &inst.links {
        let _ = writeln!(s, "l {} {}", u + 1, v + 1);
    }
    s
}

/// Writes a link set as a `sol` block.
pub fn render_solution(inst: &Instance, links: &[usize]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "sol {}", links.len());
    for &i in links {
        let (u, v) = inst.links[i];
        let _ = writeln!(s, "l {} {}", u + 1, v + 1);
    }
    s
}

/// Reads a `sol` block back into link indices of `inst`.
pub fn parse_solution(inst: &Instance, text: &str) -> Result<Vec<usize>> {
    let index = inst.link_index();
    let mut expected = None;
    let mut out = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let tok: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| FapError::MalformedEdge(format!("bad number `{s}`")));
        match tok.as_slice() {
            ["sol", k] => expected = Some(num(k)?),
            ["l", u, v] => {
                let (u, v) = (num(u)?, num(v)?);
                if u == 0 || v == 0 {
                    return Err(FapError::MalformedEdge("vertices are 1-based".into()));
                }
                let key = ((u - 1).min(v - 1), (u - 1).max(v - 1));
                let i = index.get(&key).ok_or_else(|| FapError::MalformedEdge(format!("no link {u} {v}")))?;
                out.push(*i);
            }
            _ => return Err(FapError::MalformedEdge(format!("unexpected line `{line}`"))),
        }
    }
    if expected != Some(out.len()) {
        return Err(FapError::MalformedEdge("solution size does not match `sol` header".into()));
    }
    out.sort_unstable();
    Ok(out)
}

/// Minimal union-find.
#[derive(Clone, Debug)]
pub struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_feasible() {
        let inst = validate(Instance::new(2, vec![(0, 1)], vec![(0, 1)])).unwrap();
        assert_eq!(inst.n_comp(), 1);
    }

    #[test]
    fn path_without_links_is_infeasible() {
        let r = validate(Instance::new(3, vec![(0, 1), (1, 2)], vec![]));
        assert_eq!(r, Err(FapError::Infeasible));
    }

    #[test]
    fn forest_cycle_rejected() {
        let r = validate(Instance::new(3, vec![(0, 1), (1, 2), (2, 0)], vec![(0, 1)]));
        assert_eq!(r, Err(FapError::NotAForest));
    }

    #[test]
    fn round_trip_with_comments() {
        let text = "# four cycle\nfap 4 2 2\ne 1 2\ne 3 4\n\nl 2 3\nl 4 1\n";
        let inst = parse(text).unwrap();
        assert_eq!(inst.links, vec![(1, 2), (3, 0)]);
        assert_eq!(parse(&render(&inst)).unwrap(), inst);
    }

    #[test]
    fn duplicate_pair_only_rejected_within_kind() {
        assert!(parse("fap 2 1 1\ne 1 2\nl 2 1\n").is_ok());
        assert!(parse("fap 3 0 2\nl 1 2\nl 2 1\n").is_err());
    }

    #[test]
    fn header_count_mismatch() {
        assert!(parse("fap 2 1 1\ne 1 2\n").is_err());
        assert!(parse("e 1 2\n").is_err());
    }

    #[test]
    fn solution_round_trip() {
        let inst = parse("fap 4 2 2\ne 1 2\ne 3 4\nl 2 3\nl 4 1\n").unwrap();
        let text = render_solution(&inst, &[0, 1]);
        assert_eq!(parse_solution(&inst, &text).unwrap(), vec![0, 1]);
    }
}
