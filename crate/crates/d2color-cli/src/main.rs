//! `d2color`: reduce NAE-3SAT instances to distance-2 edge colouring, solve,
//! verify and inspect the results.
//!
//! Exit statuses: 0 success (SAT, valid, passed, AGREE), 1 a negative
//! answer (UNSAT, invalid colouring, failed certification), 2 usage, input
//! or structural errors, 3 solver budget exhausted, 4 DISAGREE in a round
//! trip.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use d2color::coloring::brute::{brute_force_index_guarded, IndexBound};
use d2color::coloring::{
    conflict_relation, encode_cnf, hints_of, solve_with, verify, D2Coloring, Hints, Palette, SolveOptions,
    SolveOutcome, UnsatWitness,
};
use d2color::dot::to_dot;
use d2color::gadget::{certify, CertOutcome, Gadget, GadgetSet};
use d2color::graph::{structural_report, Graph};
use d2color::reduction::{compile, parse_nae, roundtrip, RoundTrip, RoundTripError, RoundTripOptions};

use config::RunConfig;

const EXIT_NO: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_DISAGREE: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "d2color", version, about = "Distance-2 edge colouring and the NAE-3SAT reduction")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Configuration file with `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for commands that take several inputs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Solver decision limit.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Largest edge count accepted by the brute-force index.
    #[arg(long, global = true)]
    edge_guard: Option<usize>,
    /// Largest variable count accepted by the brute-force NAE check.
    #[arg(long, global = true)]
    nae_guard: Option<usize>,
    /// Directory holding gadget and certificate files.
    #[arg(long, global = true)]
    gadget_dir: Option<PathBuf>,
    /// Solver engine: `learning` or `backjump`.
    #[arg(long, global = true)]
    engine: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the graph for a NAE-3SAT instance.
    Reduce {
        input: PathBuf,
        graph_out: PathBuf,
        provenance_out: PathBuf,
        /// Where to write the pinned hints; defaults to the graph path with
        /// a `.hints` extension.
        #[arg(long)]
        hints_out: Option<PathBuf>,
    },
    /// Decide k-colourability, optionally extending a partial colouring.
    Solve {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        hints: Option<PathBuf>,
        /// Write the colouring here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a colouring against a graph.
    Verify {
        graph: PathBuf,
        coloring: PathBuf,
        /// Palette size; defaults to the size of the colouring's palette.
        #[arg(short)]
        k: Option<usize>,
    },
    /// Certify a gadget against its declared role.
    CertifyGadget {
        gadget: PathBuf,
        /// Also write the certificate (with completion templates) here.
        #[arg(long)]
        write_cert: Option<PathBuf>,
    },
    /// Structural report: bipartiteness, girth, degree, inductiveness.
    Props {
        graph: PathBuf,
        /// Also compute the strong chromatic index by brute force, up to
        /// this many colours.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Reduce, solve, read back and compare with brute force.
    Roundtrip {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Graphviz rendering of a graph and optionally a colouring.
    ExportDot { graph: PathBuf, coloring: Option<PathBuf> },
    /// DIMACS CNF encoding of k-colourability.
    EncodeCnf {
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long)]
        hints: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn settings(g: &Global) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if g.budget.is_some() {
        cfg.node_budget = g.budget;
    }
    if let Some(v) = g.edge_guard {
        cfg.edge_guard = v;
    }
    if let Some(v) = g.nae_guard {
        cfg.nae_guard = v;
    }
    if let Some(v) = &g.gadget_dir {
        cfg.gadget_dir = Some(v.clone());
    }
    if let Some(v) = &g.engine {
        cfg.engine = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn read_graph(path: &Path) -> Result<Graph> {
    Graph::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn gadgets(cfg: &RunConfig) -> Result<GadgetSet> {
    match &cfg.gadget_dir {
        Some(dir) => GadgetSet::load_dir(dir).with_context(|| format!("loading gadgets from {}", dir.display())),
        None => Ok(GadgetSet::shipped()),
    }
}

fn solver_options(cfg: &RunConfig) -> Result<SolveOptions> {
    Ok(SolveOptions { node_budget: cfg.node_budget, engine: cfg.engine()? })
}

fn run(cli: Cli) -> Result<u8> {
    let cfg = settings(&cli.global)?;
    match cli.command {
        Command::Reduce { input, graph_out, provenance_out, hints_out } => {
            let inst = parse_nae(&read(&input)?).with_context(|| format!("parsing {}", input.display()))?;
            let set = gadgets(&cfg)?;
            let art = compile(&inst, &set);
            let hints_out = hints_out.unwrap_or_else(|| graph_out.with_extension("hints"));
            write(&graph_out, &art.graph.to_text())?;
            write(&provenance_out, &art.provenance_text())?;
            write(&hints_out, &art.hints_text())?;
            println!(
                "fanout={} variable={} clause={}",
                art.fanout_count(),
                art.variable_count(),
                art.clause_count()
            );
            println!("n={} m={}", inst.n, inst.m());
            println!("|V|={} |E|={}", art.graph.vertex_count(), art.graph.edge_count());
            Ok(0)
        }
        Command::Solve { graph, k, hints, out } => {
            let g = read_graph(&graph)?;
            let palette = Palette::standard(k.max(1));
            let hints = match hints {
                Some(p) => hints_of(
                    &D2Coloring::parse(&g, palette, &read(&p)?).with_context(|| format!("parsing {}", p.display()))?,
                ),
                None => Hints::new(),
            };
            let rel = conflict_relation(&g);
            let (outcome, stats) = solve_with(&g, &rel, k, &hints, &solver_options(&cfg)?)?;
            match outcome {
                SolveOutcome::Sat(c) => {
                    println!("SAT");
                    eprintln!("nodes={} conflicts={}", stats.nodes, stats.conflicts);
                    let text = c.to_text(&g);
                    match out {
                        Some(p) => write(&p, &text)?,
                        None => print!("{text}"),
                    }
                    Ok(0)
                }
                SolveOutcome::Unsat(w) => {
                    println!("UNSAT");
                    match w {
                        Some(UnsatWitness::HintClash(e, f)) => {
                            let (a, b) = g.edge_names(e);
                            let (c, d) = g.edge_names(f);
                            println!("hinted edges {a}-{b} and {c}-{d} clash");
                        }
                        Some(UnsatWitness::HintWipeout(e)) => {
                            let (a, b) = g.edge_names(e);
                            println!("hints leave edge {a}-{b} without a colour");
                        }
                        None => {}
                    }
                    Ok(EXIT_NO)
                }
                SolveOutcome::BudgetExceeded => {
                    println!("BUDGET EXCEEDED after {} nodes", stats.nodes);
                    Ok(EXIT_BUDGET)
                }
            }
        }
        Command::Verify { graph, coloring, k } => {
            let g = read_graph(&graph)?;
            let c = D2Coloring::parse_auto(&g, &read(&coloring)?)
                .with_context(|| format!("parsing {}", coloring.display()))?;
            let k = k.unwrap_or(c.palette().len());
            let report = verify(&g, &c, k);
            print!("{}", report.render(&g, &c));
            Ok(if report.is_valid() { 0 } else { EXIT_NO })
        }
        Command::CertifyGadget { gadget, write_cert } => {
            let gd = Gadget::parse(&read(&gadget)?).with_context(|| format!("parsing {}", gadget.display()))?;
            let report = certify(&gd);
            println!("{}: {}", report.role, report.summary());
            if let Some(cx) = report.counterexample() {
                if let Some(col) = &cx.coloring {
                    print!("{col}");
                }
            }
            if let Some(p) = write_cert {
                write(&p, &report.to_text())?;
            }
            Ok(match report.outcome {
                CertOutcome::Passed => 0,
                CertOutcome::BehavioralFailure(_) => EXIT_NO,
                CertOutcome::StructuralFailure(_) | CertOutcome::WrongRole { .. } => EXIT_ERROR,
            })
        }
        Command::Props { graph, index } => {
            let g = read_graph(&graph)?;
            println!("{}", structural_report(&g));
            if let Some(k_max) = index {
                match brute_force_index_guarded(&g, k_max, cfg.edge_guard)? {
                    IndexBound::Exactly(k) => println!("strong_index: {k}"),
                    IndexBound::Above(k) => println!("strong_index: > {k}"),
                }
            }
            Ok(0)
        }
        Command::Roundtrip { inputs } => roundtrip_files(&inputs, &cfg, cli.global.jobs.max(1)),
        Command::ExportDot { graph, coloring } => {
            let g = read_graph(&graph)?;
            let c = match coloring {
                Some(p) => Some(
                    D2Coloring::parse_auto(&g, &read(&p)?).with_context(|| format!("parsing {}", p.display()))?,
                ),
                None => None,
            };
            print!("{}", to_dot(&g, c.as_ref()));
            Ok(0)
        }
        Command::EncodeCnf { graph, k, hints, out } => {
            let g = read_graph(&graph)?;
            let hints = match hints {
                Some(p) => hints_of(
                    &D2Coloring::parse(&g, Palette::standard(k.max(1)), &read(&p)?)
                        .with_context(|| format!("parsing {}", p.display()))?,
                ),
                None => Hints::new(),
            };
            let mut cnf = encode_cnf(&g, k, &hints);
            if !cfg.cnf_comments {
                cnf.comments.clear();
            }
            match out {
                Some(p) => write(&p, &cnf.to_dimacs())?,
                None => print!("{}", cnf.to_dimacs()),
            }
            Ok(0)
        }
    }
}

type Item = Result<RoundTrip>;

fn roundtrip_one(path: &Path, set: &GadgetSet, opts: &RoundTripOptions) -> Item {
    let inst = parse_nae(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
    Ok(roundtrip(&inst, set, opts)?)
}

fn roundtrip_files(inputs: &[PathBuf], cfg: &RunConfig, jobs: usize) -> Result<u8> {
    let set = gadgets(cfg)?;
    let opts = RoundTripOptions { solver: solver_options(cfg)?, nae_guard: cfg.nae_guard };
    let mut results: Vec<Option<Item>> = (0..inputs.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs.min(inputs.len()))
            .map(|t| {
                let (set, opts) = (&set, &opts);
                s.spawn(move || {
                    (t..inputs.len())
                        .step_by(jobs)
                        .map(|i| (i, roundtrip_one(&inputs[i], set, opts)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                results[i] = Some(r);
            }
        }
    });

    let mut code = 0;
    for (path, r) in inputs.iter().zip(results) {
        match r.expect("every input processed") {
            Ok(rt) => {
                println!("== {}", path.display());
                println!("{rt}");
                if !rt.agrees() {
                    code = code.max(EXIT_DISAGREE);
                }
            }
            Err(e) => {
                println!("== {}", path.display());
                let budget = matches!(e.downcast_ref::<RoundTripError>(), Some(RoundTripError::BudgetExceeded));
                println!("{}", if budget { "BUDGET EXCEEDED".to_string() } else { format!("error: {e:#}") });
                code = code.max(if budget { EXIT_BUDGET } else { EXIT_ERROR });
            }
        }
    }
    Ok(code)
}
