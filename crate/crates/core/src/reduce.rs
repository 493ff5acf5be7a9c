//! Preprocessing reductions, each paired with a lift that turns a feasible
//! solution of the reduced instance back into one of the original.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{FapError, Result};
use crate::graph::{decompose, is_two_edge_connected, EdgeKind, Graph};
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionRecord {
    /// 2-edge-connected pieces of the forest part were shrunk to single
    /// vertices. `link_origin[i]` is the edge id (in the input graph) of
    /// reduced link `i`.
    ContractBlocks { part: Vec<usize>, link_origin: Vec<usize> },
    /// Every isolated vertex `v` became an edge `{v, v'}`; links at `v` were
    /// copied to both ends.
    SplitIsolated { original: Instance, vertex_origin: Vec<usize>, link_origin: Vec<usize> },
    /// Branches were cut off trees and reattached through dummy vertices.
    PathSplit { original_links: usize, dummy_vertices: Vec<usize>, dummy_links: BTreeSet<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduced {
    pub inst: Instance,
    pub record: ReductionRecord,
}

/// Shrinks each 2-edge-connected piece of the forest part of `g` to one
/// vertex. Links that become loops disappear; parallel links collapse to the
/// lowest id.
pub fn contract_blocks(g: &Graph) -> Reduced {
    let forest = g.filter(|e| e.kind == EdgeKind::Forest);
    let dec = decompose(&forest);
    // classes numbered by smallest member
    let mut remap = BTreeMap::new();
    let mut part = vec![0; g.n()];
    for v in 0..g.n() {
        let next = remap.len();
        part[v] = *remap.entry(dec.class_of[v]).or_insert(next);
    }
    let mut inst = Instance { n: remap.len(), ..Instance::default() };
    let mut link_origin = Vec::new();
    let mut seen_links = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (part[e.u], part[e.v]);
        if a == b {
            continue;
        }
        match e.kind {
            EdgeKind::Forest => inst.forest.push((a, b)),
            EdgeKind::Link => {
                if seen_links.insert((a.min(b), a.max(b))) {
                    inst.links.push((a, b));
                    link_origin.push(e.id);
                }
            }
        }
    }
    Reduced { inst, record: ReductionRecord::ContractBlocks { part, link_origin } }
}

/// Maps reduced links back to edge ids of the contracted graph.
pub fn lift_contracted(sol: &[usize], rec: &ReductionRecord) -> Vec<usize> {
    let ReductionRecord::ContractBlocks { link_origin, .. } = rec else {
        panic!("lift_contracted needs a ContractBlocks record");
    };
    let mut out: Vec<usize> = sol.iter().map(|&i| link_origin[i]).collect();
    out.sort_unstable();
    out
}

/// Replaces every isolated vertex by a forest edge and duplicates its links.
pub fn split_isolated_nodes(inst: &Instance) -> Reduced {
    let isolated = inst.isolated();
    let mut copies: Vec<Vec<usize>> = (0..inst.n).map(|v| vec![v]).collect();
    let mut vertex_origin: Vec<usize> = (0..inst.n).collect();
    let mut out = Instance { n: inst.n, forest: inst.forest.clone(), links: Vec::new() };
    for &v in &isolated {
        let twin = out.n;
        out.n += 1;
        vertex_origin.push(v);
        copies[v].push(twin);
        out.forest.push((v, twin));
    }
    let mut link_origin = Vec::new();
    for (i, &(a, b)) in inst.links.iter().enumerate() {
        for &x in &copies[a] {
            for &y in &copies[b] {
                out.links.push((x, y));
                link_origin.push(i);
            }
        }
    }
    Reduced { inst: out, record: ReductionRecord::SplitIsolated { original: inst.clone(), vertex_origin, link_origin } }
}

/// Lifts a solution through [`split_isolated_nodes`]. Copies of the same
/// original link collapse to one; whenever that leaves a bridge, a link
/// across it is added back, so the size never grows.
pub fn lift_isolated(sol: &[usize], rec: &ReductionRecord) -> Result<Vec<usize>> {
    let ReductionRecord::SplitIsolated { original, link_origin, .. } = rec else {
        panic!("lift_isolated needs a SplitIsolated record");
    };
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in sol {
        *count.entry(link_origin[l]).or_default() += 1;
    }
    let multigraph = |count: &BTreeMap<usize, usize>| {
        let mut edges: Vec<(usize, usize, EdgeKind)> = original.forest.iter().map(|&(u, v)| (u, v, EdgeKind::Forest)).collect();
        let mut owner = Vec::new();
        for (&l, &c) in count {
            for _ in 0..c {
                let (u, v) = original.links[l];
                edges.push((u, v, EdgeKind::Link));
                owner.push(l);
            }
        }
        (Graph::from_edges(original.n, edges).expect("valid original"), owner)
    };
    let mut added = 0;
    let mut removed = 0;
    let dups: Vec<usize> = count.iter().filter(|(_, &c)| c > 1).map(|(&l, _)| l).collect();
    for l in dups {
        while count[&l] > 1 {
            *count.get_mut(&l).unwrap() -= 1;
            removed += 1;
            loop {
                let (g, _) = multigraph(&count);
                let bridges = g.bridges();
                let Some(&b) = bridges.iter().next() else { break };
                let side = g.filter(|e| e.id != b).component_labels();
                let e = g.edge(b).expect("bridge id");
                let (su, sv) = (side[e.u], side[e.v]);
                let repair = original.links.iter().enumerate().position(|(i, &(x, y))| {
                    !count.contains_key(&i) && {
                        let (a, c) = (side[x], side[y]);
                        (a == su && c == sv) || (a == sv && c == su)
                    }
                });
                let Some(r) = repair else {
                    return Err(FapError::Assertion("no link crosses the cut left by a collapsed copy".into()));
                };
                count.insert(r, 1);
                added += 1;
            }
        }
    }
    if added > removed {
        return Err(FapError::Assertion("lifting isolated vertices grew the solution".into()));
    }
    let out: Vec<usize> = count.keys().copied().collect();
    let (g, _) = multigraph(&count);
    if !is_two_edge_connected(&g) {
        return Err(FapError::Assertion("lifted solution is infeasible".into()));
    }
    Ok(out)
}

/// Cuts pendant branches off trees with three or more leaves until every
/// forest component is a path. Needs an instance without isolated vertices.
pub fn forest_to_paths(inst: &Instance) -> Reduced {
    let mut out = inst.clone();
    let mut dummy_vertices = Vec::new();
    let mut dummy_links = BTreeSet::new();
    while let Some((pos, v, u)) = next_split(&out) {
        let w = out.n;
        out.n += 1;
        out.forest[pos] = (w, u);
        dummy_links.insert(out.links.len());
        out.links.push((v, w));
        dummy_vertices.push(w);
    }
    Reduced {
        inst: out,
        record: ReductionRecord::PathSplit { original_links: inst.links.len(), dummy_vertices, dummy_links },
    }
}

/// Lowest vertex of forest degree >= 3 with a pendant path hanging off it;
/// returns (forest edge position, v, u).
fn next_split(inst: &Instance) -> Option<(usize, usize, usize)> {
    let deg = inst.forest_degrees();
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); inst.n];
    for (p, &(a, b)) in inst.forest.iter().enumerate() {
        inc[a].push((p, b));
        inc[b].push((p, a));
    }
    for v in 0..inst.n {
        if deg[v] < 3 {
            continue;
        }
        for &(p, u) in &inc[v] {
            // walk away from v while degrees stay <= 2
            let (mut prev, mut cur) = (v, u);
            let pendant = loop {
                if deg[cur] == 1 {
                    break true;
                }
                if deg[cur] != 2 {
                    break false;
                }
                let next = inc[cur].iter().map(|&(_, y)| y).find(|&y| y != prev).unwrap();
                (prev, cur) = (cur, next);
            };
            if pendant {
                return Some((p, v, u));
            }
        }
    }
    None
}

/// Drops the dummy links added by [`forest_to_paths`].
pub fn lift_paths(sol: &[usize], rec: &ReductionRecord) -> Vec<usize> {
    let ReductionRecord::PathSplit { original_links, .. } = rec else {
        panic!("lift_paths needs a PathSplit record");
    };
    sol.iter().copied().filter(|&l| l < *original_links).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::validate;

    #[test]
    fn forest_contracts_to_itself() {
        let inst = validate(Instance::new(4, vec![(0, 1), (2, 3)], vec![(1, 2), (3, 0)])).unwrap();
        let r = contract_blocks(&inst.graph());
        assert_eq!(r.inst, inst);
    }

    #[test]
    fn triangle_with_pendant() {
        let g = Graph::from_edges(
            4,
            [
                (0, 1, EdgeKind::Forest),
                (1, 2, EdgeKind::Forest),
                (2, 0, EdgeKind::Forest),
                (2, 3, EdgeKind::Forest),
                (3, 0, EdgeKind::Link),
                (0, 1, EdgeKind::Link),
            ],
        )
        .unwrap();
        let r = contract_blocks(&g);
        assert_eq!(r.inst.n, 2);
        assert_eq!(r.inst.forest, vec![(0, 1)]);
        assert_eq!(r.inst.links, vec![(1, 0)]);
        assert_eq!(lift_contracted(&[0], &r.record), vec![4]);
    }

    #[test]
    fn split_single_isolated_vertex() {
        // u - x forest edge, v isolated with links to u and x
        let inst = validate(Instance::new(3, vec![(0, 1)], vec![(0, 2), (1, 2)])).unwrap();
        let r = split_isolated_nodes(&inst);
        assert_eq!(r.inst.n, 4);
        assert_eq!(r.inst.forest, vec![(0, 1), (2, 3)]);
        assert_eq!(r.inst.links, vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(r.inst.n_comp(), inst.n_comp());
    }

    #[test]
    fn no_isolated_is_identity() {
        let inst = validate(Instance::new(4, vec![(0, 1), (2, 3)], vec![(1, 2), (3, 0)])).unwrap();
        let r = split_isolated_nodes(&inst);
        assert_eq!(r.inst, inst);
    }

    #[test]
    fn star_needs_one_split() {
        let inst = validate(Instance::new(4, vec![(0, 1), (0, 2), (0, 3)], vec![(1, 2), (2, 3), (3, 1)])).unwrap();
        let r = forest_to_paths(&inst);
        let ReductionRecord::PathSplit { dummy_vertices, .. } = &r.record else { unreachable!() };
        assert_eq!(dummy_vertices.len(), 1);
        assert!(r.inst.is_pap_without_isolated());
        assert_eq!(r.inst.n_comp(), 2);
    }
}
