use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fapkit::audit::{audit_run, AuditReport};
use fapkit::driver::{bench, pap_pipeline, write_csv};
use fapkit::generate::{generate, Family, ForestShape, Profile};
use fapkit::matching::initial_partial_solution;
use fapkit::oracle::{solve_exact_fap, Budget};
use fapkit::pap::PapOptions;
use fapkit::tap::{solve_tap_track, TapOptions};
use fapkit::{parse, render, render_solution, solve_combined, validate, CombinedSolution, FapError, Instance};

/// Forest augmentation: make a forest plus few links 2-edge-connected.
#[derive(Parser)]
#[command(name = "fapkit", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run both tracks and print the smaller solution.
    Solve {
        /// instance file, `-` for stdin
        file: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        /// compute opt with the exact solver and audit the path-track credits
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        json: bool,
    },
    /// Path track only (general forests go through the reductions first).
    Pap {
        file: PathBuf,
        /// write one JSON record per step of the path solver
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Tree track only.
    Tap {
        file: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[arg(long, default_value_t = 1)]
        root: usize,
    },
    /// Exact optimum by enumeration (small instances only).
    Exact {
        file: PathBuf,
        /// print every optimal solution
        #[arg(long)]
        all_optimal: bool,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
    },
    /// Initial leaf matching of a path instance.
    Match { file: PathBuf },
    /// Print a generated instance.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// CSV table over a range of seeds.
    Bench {
        /// first seed
        #[arg(long, default_value_t = 0)]
        from: u64,
        /// number of seeds
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[command(flatten)]
        profile: ProfileArgs,
        /// fill in opt and ratio with the exact solver
        #[arg(long)]
        oracle: bool,
        /// include wall-clock columns (otherwise zero, so output is reproducible)
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Args)]
struct ProfileArgs {
    /// random, figure1, figure2, figure3, figure5, figure6
    #[arg(long, default_value = "random")]
    family: Family,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    comps: usize,
    #[arg(long, default_value_t = 10)]
    links: usize,
    /// forest components are paths
    #[arg(long)]
    paths: bool,
    #[arg(long, default_value_t = 2)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    variant: u32,
}

impl ProfileArgs {
    fn profile(&self) -> Profile {
        let shape = if self.paths { ForestShape::Paths } else { ForestShape::Any };
        Profile { family: self.family, n: self.n, comps: self.comps, links: self.links, shape, size: self.size, variant: self.variant }
    }
}

#[derive(Serialize)]
struct SolveOutput<'a> {
    #[serde(flatten)]
    combined: &'a CombinedSolution,
    links: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditReport>,
}

enum Failure {
    Io(String),
    Fap(FapError),
}

impl From<FapError> for Failure {
    fn from(e: FapError) -> Self {
        Failure::Fap(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn load(path: &PathBuf) -> Result<Instance, Failure> {
    let mut text = String::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_string(&mut text)
    } else {
        File::open(path).and_then(|mut f| f.read_to_string(&mut text))
    };
    res.map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(validate(parse(&text)?)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.cmd {
        Cmd::Solve { file, eps, audit, json } => {
            let inst = load(&file)?;
            let mut c = solve_combined(&inst, eps)?;
            let mut report = None;
            if audit {
                let opt = solve_exact_fap(&inst, &Budget::default())?;
                c = c.with_opt(opt.opt_value as usize);
                let p = pap_pipeline(&inst, PapOptions::default())?;
                let ws = solve_exact_fap(&p.reduced, &Budget::all(10_000))?.all_optimal.unwrap_or_default();
                report = Some(audit_run(&p.reduced, &p.run, &ws));
            }
            if json {
                let links = c.solution.iter().map(|&l| (inst.links[l].0 + 1, inst.links[l].1 + 1)).collect();
                let o = SolveOutput { combined: &c, links, audit: report };
                serde_json::to_writer_pretty(&mut out, &o).map_err(|e| Failure::Io(e.to_string()))?;
                writeln!(out)?;
            } else {
                writeln!(out, "# track {} pap {} tap {}", serde_json::to_string(&c.chosen).unwrap().trim_matches('"'), c.pap_size, c.tap_size)?;
                if let Some(b) = &c.bounds {
                    writeln!(out, "# opt {} ratio {:.4} bound {:.4}", b.opt, c.solution.len() as f64 / b.opt as f64, b.ratio_bound)?;
                }
                if let Some(r) = &report {
                    let v = r.violations();
                    writeln!(out, "# audit {}", if v.is_empty() { "ok".to_string() } else { v.join("; ") })?;
                }
                write!(out, "{}", render_solution(&inst, &c.solution))?;
            }
        }
        Cmd::Pap { file, log } => {
            let inst = load(&file)?;
            let p = pap_pipeline(&inst, PapOptions::default())?;
            if let Some(path) = log {
                let mut w = BufWriter::new(File::create(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?);
                for s in &p.run.steps {
                    serde_json::to_writer(&mut w, s).map_err(|e| Failure::Io(e.to_string()))?;
                    writeln!(w)?;
                }
            }
            write!(out, "{}", render_solution(&inst, &p.solution))?;
        }
        Cmd::Tap { file, eps, width, root } => {
            let inst = load(&file)?;
            if root == 0 || root > inst.n {
                return Err(FapError::MalformedEdge(format!("root {root} out of range")).into());
            }
            let t = solve_tap_track(&inst, TapOptions { root: root - 1, eps, width })?;
            writeln!(out, "# tree links {} up-links {} greedy added {}", t.s_tree.len(), t.uplinks.len(), t.greedy_added.len())?;
            write!(out, "{}", render_solution(&inst, &t.solution))?;
        }
        Cmd::Exact { file, all_optimal, cap } => {
            let inst = load(&file)?;
            let budget = if all_optimal { Budget::all(cap) } else { Budget::default() };
            let r = solve_exact_fap(&inst, &budget)?;
            writeln!(out, "opt {}", r.opt_value)?;
            match r.all_optimal {
                Some(all) => {
                    for w in all {
                        write!(out, "{}", render_solution(&inst, &w))?;
                    }
                }
                None => write!(out, "{}", render_solution(&inst, &r.witness))?,
            }
        }
        Cmd::Match { file } => {
            let inst = load(&file)?;
            if !inst.is_pap_without_isolated() {
                return Err(FapError::NotPaths.into());
            }
            let (m, unmatched) = initial_partial_solution(&inst, false);
            writeln!(out, "# unmatched leaves {unmatched}")?;
            write!(out, "{}", render_solution(&inst, &m))?;
        }
        Cmd::Gen { seed, profile } => {
            let inst = generate(seed, &profile.profile())?;
            write!(out, "{}", render(&inst))?;
        }
        Cmd::Bench { from, count, profile, oracle, timings } => {
            let seeds: Vec<u64> = (from..from + count).collect();
            let rows = bench(&profile.profile(), &seeds, oracle, timings)?;
            write_csv(&rows, &mut out)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Fap(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
