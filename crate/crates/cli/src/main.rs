//! `exchci`: conditional-independence models, graphs and exchangeable
//! distributions from the command line.

mod formats;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use exchci::dist::{TableOracle, DEFAULT_CI_TOL};
use exchci::exchange::{
    characterization_check, classify_regime, faithfulness_report, orbit_closure,
    structured_assumption_check, RegimeTag, Semantics,
};
use exchci::graphs::{enumerate_separators, separates, GraphFamily, SeparatorMode};
use exchci::imodel::{
    check_property, closure_with, dual, semigraphoid_closure, skeleton_of_model, IndependenceModel,
    Property, Rule,
};
use exchci::verify::{self, Suite, VerifyConfig};
use exchci::Kind;

use formats::{load_graph, parse_dist, parse_model, print_graph, print_model, to_dot};

#[derive(Parser)]
#[command(
    name = "exchci",
    version,
    about = "Conditional independence for exchangeable vectors and networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the Markov regime of an exchangeable network distribution.
    Classify {
        /// Distribution file (`dist` or `orbits` format).
        file: PathBuf,
        /// Absolute tolerance of the independence test.
        #[arg(long, default_value_t = DEFAULT_CI_TOL)]
        tol: f64,
    },
    /// Close a model under the semi-graphoid axioms and optional rules.
    Closure {
        #[arg(long)]
        model: PathBuf,
        /// Extra rules, comma separated (intersection, composition,
        /// upward-stability, downward-stability).
        #[arg(long, value_delimiter = ',')]
        with: Vec<Rule>,
        /// Add all node-relabeled images first.
        #[arg(long)]
        orbit: bool,
    },
    /// Check one of the nine properties.
    Check {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        property: Property,
        /// Take the semi-graphoid closure before checking.
        #[arg(long)]
        close: bool,
    },
    /// Print the dual model.
    Dual {
        #[arg(long)]
        model: PathBuf,
    },
    /// Print the skeleton of a model.
    Skeleton {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dot: bool,
    },
    /// Decide a separation statement in a graph.
    Sep {
        /// `<family>:<n>` or a graph file.
        #[arg(long)]
        graph: String,
        #[arg(long = "A")]
        a: String,
        #[arg(long = "B")]
        b: String,
        /// Conditioning set; may be given empty.
        #[arg(long = "C", num_args = 0..=1, default_value = "", default_missing_value = "")]
        c: String,
        /// List the minimal, maximal or all separators of the single
        /// vertices given as A and B instead.
        #[arg(long)]
        list: Option<SeparatorMode>,
    },
    /// Generate a canonical graph.
    Gen {
        #[arg(long)]
        family: GraphFamily,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        dot: bool,
    },
    /// Compare a model with a graph, or with its own skeleton.
    Faithful {
        #[arg(long)]
        model: PathBuf,
        /// `<family>:<n>` or a graph file; defaults to the skeleton.
        #[arg(long)]
        graph: Option<String>,
        /// How to read the skeleton when no graph is given.
        #[arg(long, default_value = "undirected")]
        semantics: Semantics,
    },
    /// Check the structured hypotheses of a regime on an exchangeable model.
    Assumptions {
        #[arg(long)]
        model: PathBuf,
        /// Empty, UndirectedIncidence, BidirectedIncidence,
        /// UndirectedComplement or BidirectedComplement.
        #[arg(long)]
        case: String,
    },
    /// Run the built-in verification checks.
    Verify {
        /// all, vector, network or appendix.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = verify::DEFAULT_NMAX)]
        nmax: usize,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        /// Run a single check by id.
        #[arg(long)]
        only: Option<String>,
        /// Print a tab-separated summary instead of the report.
        #[arg(long)]
        tsv: bool,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_model(path: &PathBuf) -> Result<IndependenceModel> {
    parse_model(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn parse_case(s: &str) -> Result<RegimeTag> {
    let tags = [
        RegimeTag::Empty,
        RegimeTag::UndirectedIncidence,
        RegimeTag::BidirectedIncidence,
        RegimeTag::UndirectedComplement,
        RegimeTag::BidirectedComplement,
        RegimeTag::Complete,
    ];
    match tags.into_iter().find(|t| t.name().eq_ignore_ascii_case(s)) {
        Some(t) => Ok(t),
        None => bail!("unknown regime {s:?}"),
    }
}

/// Runs a command; the value is the exit code.
fn run(command: Command, out: &mut impl std::io::Write) -> Result<u8> {
    match command {
        Command::Classify { file, tol } => {
            let table =
                parse_dist(&read(&file)?).with_context(|| format!("in {}", file.display()))?;
            let g = table.ground().clone();
            if g.kind() != Kind::Network {
                bail!("the classifier needs a network distribution");
            }
            let regime = classify_regime(&TableOracle { table, tol }, g.n())?;
            writeln!(out, "{}", regime.tag)?;
            if let Some(s) = &regime.disjoint_witness {
                writeln!(out, "disjoint witness: {}", s.display(&g))?;
            }
            if let Some(s) = &regime.shared_witness {
                writeln!(out, "shared witness: {}", s.display(&g))?;
            }
            if let Some((x, y)) = &regime.conflict {
                writeln!(out, "conflict: {} versus {}", x.display(&g), y.display(&g))?;
                return Ok(1);
            }
            Ok(0)
        }
        Command::Closure { model, with, orbit } => {
            let mut m = load_model(&model)?;
            if orbit {
                m = orbit_closure(&m)?;
            }
            let c = closure_with(&m, &with)?;
            write!(out, "{}", print_model(&c))?;
            Ok(0)
        }
        Command::Check {
            model,
            property,
            close,
        } => {
            let mut m = load_model(&model)?;
            if close {
                m = semigraphoid_closure(&m);
            }
            let r = check_property(&m, property)?;
            let g = m.ground();
            if r.holds {
                writeln!(out, "holds")?;
            } else {
                writeln!(out, "fails")?;
                if let Some(w) = &r.witness {
                    for s in &w.antecedents {
                        writeln!(out, "  given  {}", s.display(g))?;
                    }
                    for s in &w.absent {
                        writeln!(out, "  absent {}", s.display(g))?;
                    }
                }
            }
            Ok(0)
        }
        Command::Dual { model } => {
            write!(out, "{}", print_model(&dual(&load_model(&model)?)))?;
            Ok(0)
        }
        Command::Skeleton { model, dot } => {
            let sk = skeleton_of_model(&load_model(&model)?);
            write!(out, "{}", if dot { to_dot(&sk) } else { print_graph(&sk) })?;
            Ok(0)
        }
        Command::Sep {
            graph,
            a,
            b,
            c,
            list,
        } => {
            let g = load_graph(&graph)?;
            let d = g.ground();
            let (a, b, c) = (d.parse_set(&a)?, d.parse_set(&b)?, d.parse_set(&c)?);
            if let Some(mode) = list {
                if a.len() != 1 || b.len() != 1 {
                    bail!("--list needs single vertices as A and B");
                }
                let r = enumerate_separators(&g, a.first().unwrap(), b.first().unwrap(), mode)?;
                if r.adjacent {
                    writeln!(out, "adjacent")?;
                }
                for s in r.sets {
                    writeln!(out, "{}", d.format_set(s))?;
                }
                return Ok(0);
            }
            if a.is_empty() || b.is_empty() {
                bail!("A and B must be non-empty");
            }
            let s = separates(&g, a, b, c)?;
            writeln!(out, "{}", if s { "separated" } else { "connected" })?;
            Ok(0)
        }
        Command::Gen { family, n, dot } => {
            let g = family.build(n)?;
            write!(out, "{}", if dot { to_dot(&g) } else { print_graph(&g) })?;
            Ok(0)
        }
        Command::Faithful {
            model,
            graph,
            semantics,
        } => {
            let m = load_model(&model)?;
            let g = match graph {
                Some(arg) => load_graph(&arg)?,
                None => {
                    let c = characterization_check(&m, semantics)?;
                    for r in &c.reports {
                        writeln!(
                            out,
                            "{}: {}",
                            r.property,
                            if r.holds { "holds" } else { "fails" }
                        )?;
                    }
                    let kind = match semantics {
                        Semantics::Undirected => exchci::graphs::EdgeKind::Line,
                        Semantics::Bidirected => exchci::graphs::EdgeKind::Arc,
                    };
                    skeleton_of_model(&m).with_kind(kind)?
                }
            };
            let r = faithfulness_report(&m, &g)?;
            writeln!(out, "markovian: {}", r.markovian)?;
            writeln!(out, "faithful: {}", r.faithful)?;
            if let Some(t) = &r.failing_triple {
                writeln!(
                    out,
                    "first disagreement: {} (separated: {}, independent: {})",
                    t.statement.display(m.ground()),
                    t.separated,
                    t.independent
                )?;
            }
            Ok(0)
        }
        Command::Assumptions { model, case } => {
            let m = load_model(&model)?;
            let r = structured_assumption_check(&m, parse_case(&case)?)?;
            let g = m.ground();
            for h in &r.hypotheses {
                writeln!(
                    out,
                    "{}: {}",
                    h.name,
                    if h.holds { "holds" } else { "fails" }
                )?;
                if let Some(w) = &h.witness {
                    writeln!(out, "  witness {}", g.format_set(w.set))?;
                }
            }
            writeln!(
                out,
                "{}",
                if r.satisfied {
                    "satisfied"
                } else {
                    "not satisfied"
                }
            )?;
            Ok(0)
        }
        Command::Verify {
            suite,
            nmax,
            seed,
            only,
            tsv,
        } => {
            let suite = match suite.as_str() {
                "all" => None,
                s => Some(s.parse::<Suite>()?),
            };
            let results = verify::run_checks(suite, only.as_deref(), &VerifyConfig { nmax, seed })?;
            if tsv {
                write!(out, "{}", verify::results_tsv(&results))?;
            } else {
                for r in &results {
                    writeln!(
                        out,
                        "{} {:<28} {:>9.3}s  {}",
                        if r.passed { "pass" } else { "FAIL" },
                        r.id,
                        r.elapsed.as_secs_f64(),
                        r.detail
                    )?;
                    if !r.passed {
                        writeln!(out, "     reproduce: {}", r.repro)?;
                    }
                }
                let failed = results.iter().filter(|r| !r.passed).count();
                writeln!(out, "{} checks, {failed} failed", results.len())?;
            }
            Ok(if results.iter().all(|r| r.passed) {
                0
            } else {
                1
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("EXCHCI_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: EXCHCI_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(code) => {
            let _ = out.flush();
            ExitCode::from(code)
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
