//! Runs both tracks and keeps the smaller answer; also the reduction
//! pipeline that feeds general forests to the path solver, and the bench
//! table.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::{FapError, Result};
use crate::generate::{generate, Profile};
use crate::instance::Instance;
use crate::oracle::{solve_exact_fap, Budget};
use crate::pap::{solve_pap_with, PapOptions, PapRun};
use crate::reduce::{contract_blocks, forest_to_paths, lift_contracted, lift_isolated, lift_paths, split_isolated_nodes, Reduced};
use crate::tap::{solve_tap_track, TapOptions, TapRun};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Track {
    Pap,
    Tap,
}

/// Result of the path pipeline with the reduced instance it ran on.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub solution: Vec<usize>,
    pub reduced: Instance,
    pub run: PapRun,
}

/// contract 2EC pieces, split isolated vertices, cut trees into paths, solve,
/// then lift back through each step in reverse.
pub fn pap_pipeline(inst: &Instance, opts: PapOptions) -> Result<PipelineRun> {
    let contracted = contract_blocks(&inst.graph());
    let split = split_isolated_nodes(&contracted.inst);
    let paths: Reduced = forest_to_paths(&split.inst);
    let run = solve_pap_with(&paths.inst, opts)?;
    let s = lift_paths(&run.solution, &paths.record);
    let s = lift_isolated(&s, &split.record)?;
    let ids = lift_contracted(&s, &contracted.record);
    let solution: Vec<usize> = ids.into_iter().map(|id| inst.link_of_edge(id).expect("lifted ids are links")).collect();
    if !inst.is_feasible(&solution) {
        return Err(FapError::Assertion("lifted path solution is infeasible".into()));
    }
    Ok(PipelineRun { solution, reduced: paths.inst, run })
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    pub opt: usize,
    pub alpha: f64,
    /// n_comp + (1 + ln(2 - n_comp/opt) + eps) opt
    pub tap_bound: f64,
    /// (7/4) opt + (13/4)(opt - n_comp)
    pub pap_bound: f64,
    /// min of the two, the guarantee of the combination
    pub ratio_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CombinedSolution {
    pub solution: Vec<usize>,
    pub chosen: Track,
    pub pap_size: usize,
    pub tap_size: usize,
    pub n_comp: usize,
    pub eps: f64,
    pub bounds: Option<Bounds>,
}

impl CombinedSolution {
    /// Fills in the bound ledger once `opt` is known.
    pub fn with_opt(mut self, opt: usize) -> Self {
        let o = opt as f64;
        let alpha = self.n_comp as f64 / o;
        let tap_bound = self.n_comp as f64 + (1.0 + (2.0 - alpha).ln() + self.eps) * o;
        let pap_bound = 1.75 * o + 3.25 * (o - self.n_comp as f64);
        let ratio_bound = (alpha + 1.0 + (2.0 - alpha).ln()).min(1.75 + 3.25 * (1.0 - alpha)) + self.eps;
        self.bounds = Some(Bounds { opt, alpha, tap_bound, pap_bound, ratio_bound });
        self
    }
}

pub fn solve_combined(inst: &Instance, eps: f64) -> Result<CombinedSolution> {
    let tap = solve_tap_track(inst, TapOptions { eps, ..TapOptions::default() })?;
    let pap = pap_pipeline(inst, PapOptions::default())?;
    Ok(combine(inst, &pap.solution, &tap, eps))
}

fn combine(inst: &Instance, pap: &[usize], tap: &TapRun, eps: f64) -> CombinedSolution {
    let (solution, chosen) =
        if pap.len() <= tap.solution.len() { (pap.to_vec(), Track::Pap) } else { (tap.solution.clone(), Track::Tap) };
    CombinedSolution { solution, chosen, pap_size: pap.len(), tap_size: tap.solution.len(), n_comp: inst.n_comp(), eps, bounds: None }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub id: String,
    pub seed: u64,
    pub n: usize,
    pub n_comp: usize,
    pub links: usize,
    pub opt: Option<usize>,
    pub s_pap: usize,
    pub s_tap: usize,
    pub s_combined: usize,
    pub ratio: Option<f64>,
    pub pap_ms: f64,
    pub tap_ms: f64,
}

/// One row per seed. The oracle runs when `oracle` is set and the instance
/// has at most `Budget::default().max_links` links. Timing columns are wall
/// clock and so differ between runs; pass `timings = false` for a
/// reproducible table.
pub fn bench(profile: &Profile, seeds: &[u64], oracle: bool, timings: bool) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &seed in seeds {
        let inst = generate(seed, profile)?;
        let t = Instant::now();
        let pap = pap_pipeline(&inst, PapOptions::default())?;
        let pap_ms = t.elapsed().as_secs_f64() * 1e3;
        let t = Instant::now();
        let tap = solve_tap_track(&inst, TapOptions::default())?;
        let tap_ms = t.elapsed().as_secs_f64() * 1e3;
        let combined = combine(&inst, &pap.solution, &tap, TapOptions::default().eps);
        let opt = if oracle && inst.links.len() <= Budget::default().max_links {
            solve_exact_fap(&inst, &Budget::default()).ok().map(|r| r.opt_value as usize)
        } else {
            None
        };
        rows.push(BenchRow {
            id: format!("{:?}-{}-{seed}", profile.family, profile.size.max(profile.n)).to_lowercase(),
            seed,
            n: inst.n,
            n_comp: inst.n_comp(),
            links: inst.links.len(),
            opt,
            s_pap: combined.pap_size,
            s_tap: combined.tap_size,
            s_combined: combined.solution.len(),
            ratio: opt.map(|o| combined.solution.len() as f64 / o as f64),
            pap_ms: if timings { pap_ms } else { 0.0 },
            tap_ms: if timings { tap_ms } else { 0.0 },
        });
    }
    Ok(rows)
}

/// Writes rows as CSV with a header, also when there are no rows.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| FapError::MalformedEdge(e.to_string());
    w.write_record(["id", "seed", "n", "n_comp", "links", "opt", "s_pap", "s_tap", "s_combined", "ratio", "pap_ms", "tap_ms"]).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush().map_err(|e| FapError::MalformedEdge(e.to_string()))?;
    Ok(())
}
