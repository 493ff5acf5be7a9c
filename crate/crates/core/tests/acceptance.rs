//! Acceptance run: one PASS/FAIL line per criterion. A criterion whose
//! stated bound provably cannot hold on some inputs fails as "known
//! unattainable" when every failure is of that kind; any other failure makes
//! the run exit nonzero.

use std::process::ExitCode;
use std::time::Instant;

use fapkit::audit::audit_run;
use fapkit::driver::pap_pipeline;
use fapkit::fixtures;
use fapkit::generate::{generate, ForestShape, Profile};
use fapkit::instance::Dsu;
use fapkit::matching::max_matching;
use fapkit::oracle::{min_double_cover_exact, solve_exact_fap, solve_exact_wtap, Budget};
use fapkit::pap::{solve_pap, solve_pap_with, PapOptions};
use fapkit::tap::{arcs_of, solve_tap_track, RootedTree, TapOptions, UpLink};
use fapkit::{solve_combined, FapError, Instance};

struct Outcome {
    name: &'static str,
    ok: bool,
    /// failed, but only on cases where the stated bound cannot hold; the
    /// detail line names the bound that does hold
    known: bool,
    detail: String,
}

fn report(out: &mut Vec<Outcome>, name: &'static str, ok: bool, known: bool, detail: String) {
    let tag = if ok { "PASS" } else if known { "FAIL (known unattainable)" } else { "FAIL" };
    println!("{tag} {name}: {detail}");
    out.push(Outcome { name, ok, known: !ok && known, detail });
}

/// With one forest component a single bad link can be the whole optimum:
/// the path 0-1-2 with link {0,2} has opt = n_comp = 1 and two unmatched
/// leaves, so neither the matching bound nor the initial credit budget can
/// hold there. The matching-bound and credit checks split their failures on this.
fn split_single(fails: &[(usize, String)]) -> (usize, Vec<String>) {
    let single = fails.iter().filter(|(c, _)| *c == 1).count();
    (single, fails.iter().filter(|(c, _)| *c != 1).map(|(_, s)| s.clone()).collect())
}

fn sweep() -> Vec<(String, Instance)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    for n in 3..=8usize {
        for comps in 1..=n {
            for links in n.saturating_sub(1).max(2)..=12.min(n * (n - 1) / 2) {
                for _ in 0..8 {
                    seed += 1;
                    if let Ok(inst) = generate(seed, &Profile::random(n, comps, links, ForestShape::Any)) {
                        out.push((format!("any-{n}-{comps}-{links}-{seed}"), inst));
                    }
                }
            }
        }
        for comps in 1..=n / 2 {
            for links in n.saturating_sub(1).max(2)..=12.min(n * (n - 1) / 2) {
                for _ in 0..8 {
                    seed += 1;
                    if let Ok(inst) = generate(seed, &Profile::random(n, comps, links, ForestShape::Paths)) {
                        out.push((format!("paths-{n}-{comps}-{links}-{seed}"), inst));
                    }
                }
            }
        }
    }
    let fixed = [
        ("two-vertex", fixtures::two_vertex()),
        ("four-cycle", fixtures::four_cycle()),
        ("figure1-2", fixtures::figure1(2)),
        ("figure2-1", fixtures::figure2(1, false)),
        ("figure2-2", fixtures::figure2(2, false)),
        ("figure2-1-decoy", fixtures::figure2(1, true)),
        ("figure2-2-decoy", fixtures::figure2(2, true)),
        ("figure3-2", fixtures::figure3(2)),
        ("figure3-3", fixtures::figure3(3)),
        ("figure3-4", fixtures::figure3(4)),
    ];
    out.extend(fixed.into_iter().map(|(s, i)| (s.to_string(), i)));
    out.retain(|(_, i)| i.n <= 8 && i.links.len() <= 12);
    out
}

/// Every tree edge `{v, parent(v)}` separates the tree into two sides; some
/// up-link must have one end on each.
fn uplinks_cover_all_cuts(tree: &RootedTree, u: &[UpLink]) -> bool {
    let n = tree.n();
    (0..n).filter(|&v| v != tree.root).all(|cut| {
        let mut dsu = Dsu::new(n);
        for v in (0..n).filter(|&v| v != tree.root && v != cut) {
            dsu.union(v, tree.parent[v]);
        }
        u.iter().any(|x| dsu.find(x.top) != dsu.find(x.bottom))
    })
}

fn brute_matching(n: usize, edges: &[(usize, usize)], used: u32, from: usize) -> usize {
    let mut best = 0;
    for i in from..edges.len() {
        let (a, b) = edges[i];
        if used >> a & 1 == 0 && used >> b & 1 == 0 {
            best = best.max(1 + brute_matching(n, edges, used | 1 << a | 1 << b, i + 1));
            if 2 * (best + 1) > n {
                break;
            }
        }
    }
    best
}

/// Canonical adjacency mask: vertices are first sorted by an invariant
/// (degree, sorted neighbour degrees), then every order within equal
/// invariant classes is tried and the smallest mask wins.
fn canonical(n: usize, adj: &[u8]) -> u64 {
    let deg: Vec<u32> = adj.iter().map(|a| a.count_ones()).collect();
    let inv: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| deg[w]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| inv[a].cmp(&inv[b]));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match cells.last_mut() {
            Some(c) if inv[c[0]] == inv[v] => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    permute_cells(&cells, 0, &mut perm, &mut |p: &[usize]| {
        let mut mask = 0u64;
        let mut bit = 0;
        for i in 0..n {
            for j in i + 1..n {
                if adj[p[i]] >> p[j] & 1 == 1 {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(mask);
    });
    best
}

fn permute_cells(cells: &[Vec<usize>], i: usize, perm: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if i == cells.len() {
        f(perm);
        return;
    }
    let mut cell = cells[i].clone();
    let k = cell.len();
    heap_permutations(&mut cell, k, &mut |c: &[usize]| {
        let len = perm.len();
        perm.extend_from_slice(c);
        permute_cells(cells, i + 1, perm, f);
        perm.truncate(len);
    });
}

fn heap_permutations(a: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        f(a);
        return;
    }
    for i in 0..k {
        heap_permutations(a, k - 1, f);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        a.swap(j, k - 1);
    }
}

/// One representative per isomorphism class, built by adding a vertex to
/// every representative on one fewer vertex.
fn graph_classes(max_n: usize) -> Vec<Vec<Vec<u8>>> {
    let mut levels: Vec<Vec<Vec<u8>>> = vec![vec![vec![]]];
    for n in 1..=max_n {
        let mut seen = std::collections::HashSet::new();
        let mut next = Vec::new();
        for g in &levels[n - 1] {
            for nb in 0u32..1 << (n - 1) {
                let mut adj: Vec<u8> = g.clone();
                adj.push(nb as u8);
                for (v, a) in adj.iter_mut().enumerate().take(n - 1) {
                    if nb >> v & 1 == 1 {
                        *a |= 1 << (n - 1);
                    }
                }
                if seen.insert(canonical(n, &adj)) {
                    next.push(adj);
                }
            }
        }
        levels.push(next);
    }
    levels
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut out = Vec::new();
    let instances = sweep();

    let mut feasibility_fail = Vec::new();
    let mut ratio_fail = Vec::new();
    let mut pap_checked = 0;
    let mut pap_fail = Vec::new();
    let mut audited = 0;
    let mut audit_fail = Vec::new();
    let mut rich_miss = 0;
    let mut leaf_bound_checked = 0;
    let mut leaf_bound_fail = Vec::new();
    let mut dc_exact = 0;
    let mut dc_fail = Vec::new();
    let mut uplink_cover_fail = Vec::new();
    let mut uplink_size_fail = 0;
    let mut uplink_dtap_fail = Vec::new();
    let mut structural = Vec::new();
    let mut worst_ratio = 0.0f64;

    for (id, inst) in &instances {
        let is_pap = inst.is_pap_without_isolated();
        let budget = if is_pap { Budget::all(10_000) } else { Budget::default() };
        let oracle = solve_exact_fap(inst, &budget).expect("oracle within budget");
        let opt = oracle.opt_value as usize;
        let n_comp = inst.n_comp();

        match solve_combined(inst, 0.01) {
            Ok(c) => {
                if !inst.is_feasible(&c.solution) || c.solution.len() > 2 * opt {
                    feasibility_fail.push(id.clone());
                }
                if c.solution.len() as f64 > 1.9973 * opt as f64 + 2.0 {
                    ratio_fail.push(id.clone());
                }
                worst_ratio = worst_ratio.max(c.solution.len() as f64 / opt as f64);
            }
            Err(FapError::Assertion(m)) => structural.push(format!("{id}: {m}")),
            Err(e) => feasibility_fail.push(format!("{id}: {e}")),
        }

        // the path solver runs directly on path instances and on the reduced
        // instance otherwise; either way its run is audited
        let (pinst, popt, pws, run) = if is_pap {
            let run = match solve_pap(inst) {
                Ok(r) => r,
                Err(e) => {
                    structural.push(format!("{id}: {e}"));
                    continue;
                }
            };
            (inst.clone(), opt, oracle.all_optimal.clone().unwrap_or_default(), Some(run))
        } else {
            match pap_pipeline(inst, PapOptions::default()) {
                Ok(p) if p.reduced.links.len() <= 16 && p.reduced.n >= 2 => {
                    match solve_exact_fap(&p.reduced, &Budget::all(10_000)) {
                        Ok(r) => (p.reduced, r.opt_value as usize, r.all_optimal.unwrap_or_default(), Some(p.run)),
                        Err(_) => (p.reduced, 0, Vec::new(), None),
                    }
                }
                Ok(p) => (p.reduced, 0, Vec::new(), None),
                Err(FapError::Assertion(m)) => {
                    structural.push(format!("{id}: {m}"));
                    continue;
                }
                Err(e) => {
                    structural.push(format!("{id}: {e}"));
                    continue;
                }
            }
        };
        if let Some(run) = run {
            let pn = pinst.n_comp();
            leaf_bound_checked += 1;
            if run.unmatched_leaves > 4 * (popt - pn) {
                leaf_bound_fail.push((pn, id.clone()));
            }
            pap_checked += 1;
            if 4 * run.solution.len() > 7 * (2 * popt - pn) + 3 {
                pap_fail.push(id.clone());
            }
            audited += 1;
            let rep = audit_run(&pinst, &run, &pws);
            if !rep.passes() {
                audit_fail.push((pn, format!("{id}: {:?}", rep.violations())));
            }
            if !rep.rich_ok() {
                rich_miss += 1;
            }
        }

        match solve_tap_track(inst, TapOptions::default()) {
            Ok(t) => {
                let w = t.double_cover.weight();
                if w > 2 * opt as u64 {
                    dc_fail.push(format!("{id}: weight {w} > 2 opt"));
                }
                if inst.n <= 6 {
                    dc_exact += 1;
                    let (ex, _) = min_double_cover_exact(inst.n, &arcs_of(inst), 0, &Budget::default()).unwrap();
                    if ex != w {
                        dc_fail.push(format!("{id}: {w} != exact {ex}"));
                    }
                }
                let tree = RootedTree::new(inst, t.s_tree.clone(), 0);
                if !uplinks_cover_all_cuts(&tree, &t.raw_uplinks) {
                    uplink_cover_fail.push(id.clone());
                }
                if t.raw_uplinks.len() > t.s_tap.len() {
                    uplink_size_fail += 1;
                }
                if t.raw_uplinks.len() > t.d_tap || t.d_tap + n_comp > 2 * opt + 1 {
                    uplink_dtap_fail.push(id.clone());
                }
            }
            Err(FapError::Assertion(m)) => structural.push(format!("{id}: {m}")),
            Err(e) => dc_fail.push(format!("{id}: {e}")),
        }
    }
    let total = instances.len();

    report(
        &mut out,
        "oracle sweep",
        total >= 2000 && feasibility_fail.is_empty() && ratio_fail.is_empty(),
        false,
        format!(
            "{total} instances, {} over 2opt or infeasible, {} over 1.9973 opt + 2, worst |S|/opt {worst_ratio:.3}{}",
            feasibility_fail.len(),
            ratio_fail.len(),
            first(&feasibility_fail, &ratio_fail)
        ),
    );
    report(
        &mut out,
        "path guarantee",
        pap_fail.is_empty(),
        false,
        format!("{pap_checked} path runs, {} with 4|S| > 7(2opt - n_comp) + 3{}", pap_fail.len(), first(&pap_fail, &[])),
    );

    // mutations on the drawn families
    let mut skip_flagged = 0;
    let mut greedy_flagged = 0;
    let mut families = Vec::new();
    for k in 1..=3 {
        families.push(fixtures::figure2(k, false));
        families.push(fixtures::figure2(k, true));
    }
    for k in 2..=5 {
        families.push(fixtures::figure3(k));
    }
    for inst in &families {
        let ws = solve_exact_fap(inst, &Budget::all(10_000)).unwrap().all_optimal.unwrap();
        if let Ok(bad) = solve_pap_with(inst, PapOptions { skip_link_removal: true, ..Default::default() }) {
            if !audit_run(inst, &bad, &ws).passes() {
                skip_flagged += 1;
            }
        }
        if let Ok(bad) = solve_pap_with(inst, PapOptions { greedy_matching: true, ..Default::default() }) {
            let rep = audit_run(inst, &bad, &ws);
            if !rep.passes() || !rep.matching_bound_ok {
                greedy_flagged += 1;
            }
        }
    }
    let mutations_ok = skip_flagged >= 1 && greedy_flagged >= 1;
    let (audit_single, audit_multi) = split_single(&audit_fail);
    report(
        &mut out,
        "credit audit",
        audit_fail.is_empty() && mutations_ok,
        audit_multi.is_empty() && mutations_ok,
        format!(
            "{audited} runs audited, {} violations ({audit_single} with one forest component, {} with several); mutations flagged: skip removal {skip_flagged}, greedy matching {greedy_flagged} of {} fixtures; {rich_miss} runs without a rich-vertex witness at some plain gluing{}",
            audit_fail.len(),
            audit_multi.len(),
            families.len(),
            first(&audit_multi, &[])
        ),
    );
    let (lb_single, lb_multi) = split_single(&leaf_bound_fail);
    report(
        &mut out,
        "matching bound",
        leaf_bound_fail.is_empty(),
        lb_multi.is_empty(),
        format!(
            "{leaf_bound_checked} runs, {} with 2 n_comp - 2|M| > 4(opt - n_comp): {lb_single} with one forest component, {} with several{}",
            leaf_bound_fail.len(),
            lb_multi.len(),
            first(&lb_multi, &[])
        ),
    );
    report(
        &mut out,
        "double cover",
        dc_fail.is_empty(),
        false,
        format!("{dc_exact} compared with the exact cover, {} failures{}", dc_fail.len(), first(&dc_fail, &[])),
    );
    report(
        &mut out,
        "up-link conversion",
        uplink_cover_fail.is_empty() && uplink_size_fail == 0,
        // forest 1-0-2 rooted at 0 with the link {1,2}: two up-links, |S_tap| = 1
        uplink_cover_fail.is_empty() && uplink_dtap_fail.is_empty(),
        format!(
            "{} instances miss a tree cut; {uplink_size_fail} have |U| > |S_tap|; {} break |U| <= |D_tap| <= 2opt - n_comp + 1",
            uplink_cover_fail.len(),
            uplink_dtap_fail.len()
        ),
    );

    // greedy on random unit-weight trees
    let mut wtap_runs = 0;
    let mut wtap_over_u = Vec::new();
    let mut wtap_ln_gap = 0;
    for seed in 0..600u64 {
        let n = 3 + (seed % 7) as usize;
        let links = (n + 1 + (seed as usize / 7) % 6).min(n * (n - 1) / 2);
        let Ok(inst) = generate(10_000 + seed, &Profile::random(n, 1, links, ForestShape::Any)) else { continue };
        let Ok(t) = solve_tap_track(&inst, TapOptions::default()) else {
            structural.push(format!("wtap seed {seed}"));
            continue;
        };
        let weighted: Vec<(usize, usize, u64)> = inst.links.iter().map(|&(a, b)| (a, b, 1)).collect();
        let opt = solve_exact_wtap(&inst.forest_graph(), &weighted, &Budget::default()).unwrap().opt_value as f64;
        let (w, wu) = (t.wtap_weight(), t.uplinks.len());
        wtap_runs += 1;
        if w > wu {
            wtap_over_u.push(format!("seed {seed}: {w} > {wu}"));
        }
        if w as f64 > (1.0 + (wu as f64 / opt).ln() + 0.01) * opt + 1e-9 {
            wtap_ln_gap += 1;
        }
    }
    report(
        &mut out,
        "relative greedy",
        wtap_over_u.is_empty(),
        false,
        format!(
            "{wtap_runs} trees, {} above w(U); log-ratio bound missed in {wtap_ln_gap} (width 3){}",
            wtap_over_u.len(),
            first(&wtap_over_u, &[])
        ),
    );
    report(&mut out, "structural assertions", structural.is_empty(), false, format!("{} fired{}", structural.len(), first(&structural, &[])));

    let t = Instant::now();
    let classes = graph_classes(8);
    let mut graphs = 0;
    let mut match_fail = Vec::new();
    for (n, level) in classes.iter().enumerate().skip(1) {
        for adj in level {
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v))).collect();
            let m = max_matching(n, &edges);
            let mut used = vec![false; n];
            let valid = m.iter().all(|&e| {
                let (a, b) = edges[e];
                !std::mem::replace(&mut used[a], true) && !std::mem::replace(&mut used[b], true)
            });
            if !valid || m.len() != brute_matching(n, &edges, 0, 0) {
                match_fail.push(format!("n={n} {edges:?}"));
            }
            graphs += 1;
        }
    }
    let counts: Vec<usize> = classes.iter().map(|l| l.len()).collect();
    let secs = t.elapsed().as_secs_f64();
    report(
        &mut out,
        "matching",
        match_fail.is_empty() && counts == [1, 1, 2, 4, 11, 34, 156, 1044, 12346] && secs < 60.0,
        false,
        format!("{graphs} graphs (classes per size {counts:?}), {} mismatches, {secs:.1}s{}", match_fail.len(), first(&match_fail, &[])),
    );

    let unexpected: Vec<&Outcome> = out.iter().filter(|o| !o.ok && !o.known).collect();
    let known = out.iter().filter(|o| o.known).count();
    println!(
        "{} criteria, {} passed, {known} known unattainable, {} unexpected failures, {:.1}s",
        out.len(),
        out.iter().filter(|o| o.ok).count(),
        unexpected.len(),
        start.elapsed().as_secs_f64()
    );
    for o in &unexpected {
        eprintln!("unexpected failure in {}: {}", o.name, o.detail);
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn first(a: &[String], b: &[String]) -> String {
    a.first().or(b.first()).map_or(String::new(), |s| format!("; first: {s}"))
}
