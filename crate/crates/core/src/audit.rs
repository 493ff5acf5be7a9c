//! Credit bookkeeping for path-solver runs. All amounts are integer quarter
//! credits, so `ε = 1/4` never meets floating point.
//!
//! Rule A2 depends on an optimal solution nobody knows in advance, so a run
//! is replayed once per optimal witness and passes if some witness satisfies
//! every check.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{FapError, Result};
use crate::graph::decompose;
use crate::instance::Instance;
use crate::pap::{simple_components, PapRun, StepKind, WorkingState};

/// Quarter credits per rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CreditLedger {
    pub a1: i64,
    pub a2: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CreditLedger {
    pub fn total(&self) -> i64 {
        self.a1 + self.a2 + self.b + self.c + self.d
    }
}

/// The part of the ledger that does not depend on the witness, plus the
/// vertices rule A2 applies to.
#[derive(Clone, Debug)]
struct StepCredits {
    base: CreditLedger,
    implicit: Vec<usize>,
    s_len: usize,
}

fn step_credits(inst: &Instance, s: &[usize]) -> StepCredits {
    let state = WorkingState::new(inst, s.iter().copied());
    let h = state.h();
    let dec = decompose(&h);
    let mut base = CreditLedger::default();
    for v in 0..inst.n {
        if h.degree(v) == 1 {
            base.a1 += 4;
        }
    }
    for &b in &dec.bridges {
        if inst.link_of_edge(b).is_some() {
            base.b += 3;
        }
    }
    let simple: Vec<Vec<usize>> = simple_components(&state).into_iter().map(|(c, _)| c).collect();
    let bridged: BTreeSet<usize> = dec.bridges.iter().map(|&b| dec.comp_of[h.edge(b).unwrap().u]).collect();
    for (i, comp) in dec.components.iter().enumerate() {
        base.c += if bridged.contains(&i) {
            4
        } else if simple.contains(comp) {
            6
        } else {
            8
        };
    }
    for block in &dec.blocks {
        if bridged.contains(&dec.comp_of[block[0]]) {
            base.d += 4;
        }
    }
    let in_simple: BTreeSet<usize> = simple.iter().flatten().copied().collect();
    let implicit = (0..inst.n).filter(|&v| dec.is_lonely(v) || in_simple.contains(&v)).collect();
    StepCredits { base, implicit, s_len: s.len() }
}

/// `|δ_{OPT ∪ F}(v)|` for every vertex.
fn witness_degrees(inst: &Instance, witness: &[usize]) -> Vec<i64> {
    let mut deg: Vec<i64> = inst.forest_degrees().into_iter().map(|d| d as i64).collect();
    for &l in witness {
        let (u, v) = inst.links[l];
        deg[u] += 1;
        deg[v] += 1;
    }
    deg
}

/// Full ledger of `H = (V, F ∪ S)` against one optimal witness.
pub fn compute_credits(inst: &Instance, s: &[usize], witness: &[usize]) -> Result<CreditLedger> {
    if !inst.is_feasible(witness) {
        return Err(FapError::InfeasibleWitness);
    }
    let sc = step_credits(inst, s);
    let deg = witness_degrees(inst, witness);
    let mut ledger = sc.base;
    ledger.a2 = sc.implicit.iter().map(|&v| 2 * (deg[v] - 2)).sum();
    Ok(ledger)
}

/// Right-hand side of the credit invariant in quarters:
/// `4 * ((7/4) opt + (7/4)(opt - n_comp))`.
pub fn invariant_budget(opt: usize, n_comp: usize) -> i64 {
    7 * opt as i64 + 7 * (opt as i64 - n_comp as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessAudit {
    pub witness: Vec<usize>,
    /// budget minus (credits + 4|S|) per step; negative is a violation
    pub slack: Vec<i64>,
    pub init_ok: bool,
    pub invariant_ok: bool,
    pub monotone_ok: bool,
    /// a rich vertex in every simple component at each plain gluing, and
    /// those components hold at least 2 credits with their rich vertices
    pub rich_ok: bool,
    pub first_failure: Option<String>,
}

impl WitnessAudit {
    pub fn passes(&self) -> bool {
        self.init_ok && self.monotone_ok
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub opt: usize,
    pub n_comp: usize,
    pub steps: usize,
    pub unmatched_leaves: usize,
    /// unmatched leaves at most 4 (opt - n_comp)
    pub matching_bound_ok: bool,
    /// (step, vertex) of the first lonely vertex with degree above 2
    pub lonely_degree_failure: Option<(usize, usize)>,
    pub witnesses: Vec<WitnessAudit>,
}

impl AuditReport {
    /// Some witness keeps the invariant at initialization and the potential
    /// never rises; lonely vertices stay at degree 2 or less.
    pub fn passes(&self) -> bool {
        self.lonely_degree_failure.is_none() && self.witnesses.iter().any(|w| w.passes())
    }

    pub fn rich_ok(&self) -> bool {
        self.witnesses.iter().any(|w| w.rich_ok)
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.matching_bound_ok {
            out.push(format!("matching bound: {} unmatched leaves > 4(opt - n_comp) = {}", self.unmatched_leaves, 4 * (self.opt - self.n_comp)));
        }
        if let Some((s, v)) = self.lonely_degree_failure {
            out.push(format!("step {s}: lonely vertex {} has degree above 2", v + 1));
        }
        if !self.witnesses.iter().any(|w| w.passes()) {
            let first = self.witnesses.first().and_then(|w| w.first_failure.clone()).unwrap_or_default();
            out.push(format!("credit invariant fails for all {} witnesses; first: {first}", self.witnesses.len()));
        }
        out
    }
}

/// Replays a path-solver run against every witness.
pub fn audit_run(inst: &Instance, run: &PapRun, witnesses: &[Vec<usize>]) -> AuditReport {
    let opt = witnesses.first().map_or(0, |w| w.len());
    let n_comp = inst.n_comp();
    let budget = invariant_budget(opt, n_comp);
    let credits: Vec<StepCredits> = run.steps.iter().map(|s| step_credits(inst, &s.links)).collect();

    let mut lonely_degree_failure = None;
    'steps: for rec in &run.steps {
        let h = inst.graph_with(rec.links.iter().copied());
        let dec = decompose(&h);
        for &v in &dec.lonely {
            if h.degree(v) > 2 {
                lonely_degree_failure = Some((rec.step, v));
                break 'steps;
            }
        }
    }

    // simple components before each plain gluing
    let plain: Vec<(usize, Vec<Vec<usize>>)> = run
        .steps
        .iter()
        .filter(|r| r.kind == StepKind::GluePlain)
        .map(|r| {
            let before = &run.steps[r.step - 1].links;
            let state = WorkingState::new(inst, before.iter().copied());
            (r.step, simple_components(&state).into_iter().map(|(c, _)| c).collect())
        })
        .collect();

    let witnesses = witnesses
        .iter()
        .map(|w| {
            let deg = witness_degrees(inst, w);
            let mut slack = Vec::new();
            let mut first_failure = None;
            let mut invariant_ok = true;
            let mut monotone_ok = true;
            let mut prev = i64::MAX;
            for (i, sc) in credits.iter().enumerate() {
                let a2: i64 = sc.implicit.iter().map(|&v| 2 * (deg[v] - 2)).sum();
                let total = sc.base.total() + a2 + 4 * sc.s_len as i64;
                slack.push(budget - total);
                if total > budget {
                    invariant_ok = false;
                    first_failure.get_or_insert(format!("step {i}: credits + |S| = {total}/4 > {budget}/4"));
                }
                if total > prev {
                    monotone_ok = false;
                    first_failure.get_or_insert(format!("step {i}: credits + |S| rose from {prev}/4 to {total}/4"));
                }
                prev = total;
            }
            let rich_ok = plain.iter().all(|(_, comps)| {
                comps.iter().all(|c| {
                    let rich: Vec<usize> = c.iter().copied().filter(|&v| deg[v] >= 3).collect();
                    let extra: i64 = rich.iter().map(|&v| 2 * (deg[v] - 2)).sum();
                    !rich.is_empty() && 6 + extra >= 8
                })
            });
            WitnessAudit { witness: w.clone(), init_ok: slack.first().is_some_and(|&s| s >= 0), slack, invariant_ok, monotone_ok, rich_ok, first_failure }
        })
        .collect();

    AuditReport {
        opt,
        n_comp,
        steps: run.steps.len(),
        unmatched_leaves: run.unmatched_leaves,
        matching_bound_ok: run.unmatched_leaves <= 4 * (opt - n_comp),
        lonely_degree_failure,
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::{solve_exact_fap, Budget};
    use crate::pap::{solve_pap, solve_pap_with, PapOptions};

    #[test]
    fn four_cycle_is_tight() {
        let inst = fixtures::four_cycle();
        let l = compute_credits(&inst, &[0, 1], &[0, 1]).unwrap();
        assert_eq!(l, CreditLedger { c: 6, ..Default::default() });
        assert_eq!(l.total() + 4 * 2, invariant_budget(2, 2));
        let run = solve_pap(&inst).unwrap();
        let report = audit_run(&inst, &run, &[vec![0, 1]]);
        assert!(report.passes());
        assert_eq!(report.witnesses[0].slack, vec![0]);
    }

    #[test]
    fn single_path_component() {
        // paths 0-1-2 and 3-4 joined by S = {2,3} into one bridged path
        let inst = Instance::new(5, vec![(0, 1), (1, 2), (3, 4)], vec![(2, 3), (4, 0)]);
        let l = compute_credits(&inst, &[0], &[0, 1]).unwrap();
        assert_eq!((l.a1, l.b, l.c, l.d), (8, 3, 4, 0));
        // lonely vertices have witness degree 2
        assert_eq!(l.a2, 0);
    }

    #[test]
    fn implicit_credits_follow_the_witness() {
        let inst = fixtures::figure3(5);
        let opt = solve_exact_fap(&inst, &Budget::default()).unwrap();
        let l = compute_credits(&inst, &[], &opt.witness).unwrap();
        // S empty: every vertex lonely, so A2 = 2 * sum(deg - 2) = 4 (opt - n_comp)
        assert_eq!(l.a2, 4 * (opt.opt_value as i64 - 1));
    }

    #[test]
    fn bad_witness_rejected() {
        let inst = fixtures::four_cycle();
        assert_eq!(compute_credits(&inst, &[], &[0]), Err(FapError::InfeasibleWitness));
    }

    #[test]
    fn skipping_removal_is_flagged() {
        let inst = fixtures::figure2(3, false);
        let opt = solve_exact_fap(&inst, &Budget::all(10_000)).unwrap();
        let ws = opt.all_optimal.unwrap();
        let good = solve_pap(&inst).unwrap();
        assert!(audit_run(&inst, &good, &ws).passes());
        let bad = solve_pap_with(&inst, PapOptions { skip_link_removal: true, ..Default::default() }).unwrap();
        assert!(!audit_run(&inst, &bad, &ws).passes());
    }
}
