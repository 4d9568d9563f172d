use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use collinear_core::classify::classify;
use collinear_core::curve::CurveEvent;
use collinear_core::cycles::{
    long_cycle_heuristic, longest_cycle_exact, orient_and_partition, CycleFile, SearchBudget,
};
use collinear_core::dual::dualize;
use collinear_core::embedding::{max_degree, parse_triangulation, Triangulation};
use collinear_core::generate::{generate, Kind};
use collinear_core::pipeline::{run_pipeline, CycleMethod, PipelineOptions};
use collinear_core::render::{render_svg, Overlay};
use collinear_core::surgery::surgery_loop;
use collinear_core::{auxtrees, Error};

#[derive(Parser)]
#[command(
    name = "collinear",
    about = "Collinear sets in planar triangulations via long dual cycles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InArg {
    /// Instance file (JSON rotation system).
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct CycleArg {
    /// Cycle file (JSON `{"cycle": [...]}`).
    #[arg(long)]
    cycle: PathBuf,
}

#[derive(Args)]
struct OutArg {
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate an instance.
    Validate(InArg),
    /// Emit the dual graph with the edge correspondence.
    Dualize {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Find a long simple cycle in the dual.
    Cycle {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        out: OutArg,
        /// Exact branch-and-bound search.
        #[arg(long, conflicts_with = "heuristic")]
        exact: bool,
        /// Local-improvement heuristic.
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Wall-clock limit for the exact search, in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
    },
    /// Classify dual faces against a cycle.
    Classify {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        cycle: CycleArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Emit the side trees with node statistics and badness levels.
    Trees {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        cycle: CycleArg,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the surgery loop on a cycle.
    Surgery {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        cycle: CycleArg,
        #[command(flatten)]
        out: OutArg,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        /// Write the per-step log to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Full pipeline: emit the collinear-set certificate.
    Collinear {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        out: OutArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exact: bool,
    },
    /// Generate a named instance.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        flips: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutArg,
        /// Also write the family's canonical dual cycle.
        #[arg(long)]
        cycle_out: Option<PathBuf>,
    },
    /// Render an SVG drawing.
    Render {
        #[command(flatten)]
        input: InArg,
        /// Cycle to draw; the pipeline's final cycle when omitted.
        #[arg(long)]
        cycle: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Run the pipeline and emit the full report.
    Report {
        #[command(flatten)]
        input: InArg,
        #[command(flatten)]
        out: OutArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        exact: bool,
        /// Include wall-clock timings (breaks byte determinism).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tetrahedron,
    Octahedron,
    Icosahedron,
    Serpentine,
    Pinwheel,
    RandomStacked,
    RandomFlip,
}

fn read_instance(path: &PathBuf) -> Result<Triangulation, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Syntax(format!("{}: {e}", path.display())))?;
    parse_triangulation(&text)
}

fn read_cycle(path: &PathBuf) -> Result<Vec<usize>, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Syntax(format!("{}: {e}", path.display())))?;
    let f: CycleFile =
        serde_json::from_str(&text).map_err(|e| Error::Syntax(e.to_string()))?;
    Ok(f.cycle)
}

fn emit(out: &OutArg, content: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => fs::write(path, content)?,
        None => println!("{content}"),
    }
    Ok(())
}

fn pipeline_options(seed: u64, exact: bool) -> PipelineOptions {
    PipelineOptions {
        cycle: if exact {
            CycleMethod::Exact(SearchBudget::unlimited())
        } else {
            CycleMethod::Heuristic { seed }
        },
        ..Default::default()
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Validate(input) => {
            let t = read_instance(&input.input)?;
            println!(
                "{}",
                serde_json::json!({
                    "ok": true,
                    "n": t.n(),
                    "edges": t.edge_count(),
                    "faces": t.face_count(),
                    "max_degree": max_degree(&t),
                })
            );
            Ok(())
        }
        Command::Dualize { input, out } => {
            let t = read_instance(&input.input)?;
            let d = dualize(&t)?;
            let text = serde_json::to_string_pretty(&d.to_file())
                .map_err(|e| Error::Internal(e.to_string()))?;
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Cycle {
            input,
            out,
            exact,
            heuristic,
            seed,
            time_limit,
        } => {
            let t = read_instance(&input.input)?;
            let d = dualize(&t)?;
            let (cycle, optimal) = if exact || !heuristic && d.vertex_count() <= 24 {
                let budget = match time_limit {
                    Some(s) => SearchBudget::with_time_limit(s),
                    None => SearchBudget::unlimited(),
                };
                let res = longest_cycle_exact(&d, budget)?;
                (res.cycle, Some(res.optimal))
            } else {
                (long_cycle_heuristic(&d, seed)?, None)
            };
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "cycle": cycle.vertex_seq(),
                "length": cycle.len(),
                "optimal": optimal,
            }))
            .map_err(|e| Error::Internal(e.to_string()))?;
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Classify { input, cycle, out } => {
            let t = read_instance(&input.input)?;
            let d = dualize(&t)?;
            let c = orient_and_partition(&d, &read_cycle(&cycle.cycle)?)?;
            let cls = classify(&d, &c);
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "tau": cls.tau,
                "rho": cls.rho,
                "kappa": cls.kappa,
                "per_side": {
                    "interior": cls.per_side[0],
                    "exterior": cls.per_side[1],
                },
                "status": cls.status,
            }))
            .map_err(|e| Error::Internal(e.to_string()))?;
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Trees { input, cycle, out } => {
            let t = read_instance(&input.input)?;
            let d = dualize(&t)?;
            let c = orient_and_partition(&d, &read_cycle(&cycle.cycle)?)?;
            let cls = classify(&d, &c);
            let aux = auxtrees::build_aux(&d, &c, &cls)?;
            let mut trees = auxtrees::build_side_trees(&d, &c, &aux, &cls)?;
            auxtrees::badness_levels(&mut trees, 2);
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "keepers": aux.keepers,
                "interior": trees.sides[0],
                "exterior": trees.sides[1],
            }))
            .map_err(|e| Error::Internal(e.to_string()))?;
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Surgery {
            input,
            cycle,
            out,
            max_iters,
            trace,
        } => {
            let t = read_instance(&input.input)?;
            let d = dualize(&t)?;
            let c = orient_and_partition(&d, &read_cycle(&cycle.cycle)?)?;
            let (c_out, log) = surgery_loop(&t, &d, &c, max_iters)?;
            if let Some(path) = trace {
                let text = serde_json::to_string_pretty(&log)
                    .map_err(|e| Error::Internal(e.to_string()))?;
                fs::write(path, text).map_err(|e| Error::Internal(e.to_string()))?;
            }
            let text = serde_json::to_string_pretty(&serde_json::json!({
                "cycle": c_out.vertex_seq(),
                "length": c_out.len(),
                "steps": log.steps.len(),
                "stop": log.stop,
            }))
            .map_err(|e| Error::Internal(e.to_string()))?;
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Collinear {
            input,
            out,
            seed,
            exact,
        } => {
            let t = read_instance(&input.input)?;
            let output = run_pipeline(&t, &pipeline_options(seed, exact))?;
            let text = serde_json::to_string_pretty(&output.certificate)
                .map_err(|e| Error::Internal(e.to_string()))?;
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Gen {
            kind,
            k,
            n,
            flips,
            seed,
            out,
            cycle_out,
        } => {
            let kind = match kind {
                GenKind::Tetrahedron => Kind::Tetrahedron,
                GenKind::Octahedron => Kind::Octahedron,
                GenKind::Icosahedron => Kind::Icosahedron,
                GenKind::Serpentine => Kind::Serpentine {
                    k: k.ok_or_else(|| Error::InvalidParams("--k required".into()))?,
                },
                GenKind::Pinwheel => Kind::Pinwheel {
                    k: k.ok_or_else(|| Error::InvalidParams("--k required".into()))?,
                },
                GenKind::RandomStacked => Kind::RandomStacked {
                    n: n.ok_or_else(|| Error::InvalidParams("--n required".into()))?,
                    seed,
                },
                GenKind::RandomFlip => {
                    let n = n.ok_or_else(|| Error::InvalidParams("--n required".into()))?;
                    Kind::RandomFlip {
                        n,
                        flips: flips.unwrap_or(2 * n),
                        seed,
                    }
                }
            };
            let gen = generate(kind)?;
            emit(&out, &gen.triangulation.to_json())
                .map_err(|e| Error::Internal(e.to_string()))?;
            if let Some(path) = cycle_out {
                let cycle = gen.canonical_cycle.ok_or_else(|| {
                    Error::InvalidParams("this family has no canonical cycle".into())
                })?;
                let text = serde_json::to_string(&CycleFile { cycle })
                    .map_err(|e| Error::Internal(e.to_string()))?;
                fs::write(path, text).map_err(|e| Error::Internal(e.to_string()))?;
            }
            Ok(())
        }
        Command::Render { input, cycle, out } => {
            let t = read_instance(&input.input)?;
            let d = dualize(&t)?;
            let c = match cycle {
                Some(path) => orient_and_partition(&d, &read_cycle(&path)?)?,
                None => {
                    run_pipeline(&t, &PipelineOptions::default())?.final_cycle
                }
            };
            let cls = classify(&d, &c);
            let svg = render_svg(&t, &d, Overlay::Cycle(&c), Some(&cls))?;
            emit(&out, &svg).map_err(|e| Error::Internal(e.to_string()))
        }
        Command::Report {
            input,
            out,
            seed,
            exact,
            timings,
        } => {
            let t = read_instance(&input.input)?;
            let output = run_pipeline(&t, &pipeline_options(seed, exact))?;
            let text = if timings {
                serde_json::to_string_pretty(&output.report)
                    .map_err(|e| Error::Internal(e.to_string()))?
            } else {
                output.report.deterministic_json()
            };
            emit(&out, &text).map_err(|e| Error::Internal(e.to_string()))?;
            // the certificate's vertex events double as a quick sanity line
            let s: Vec<usize> = output
                .certificate
                .events
                .iter()
                .filter_map(|e| match e {
                    CurveEvent::AtVertex(v) => Some(*v),
                    _ => None,
                })
                .collect();
            eprintln!(
                "collinear set of size {} (kappa = {})",
                s.len(),
                output.report.kappa_final
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!(
                "{}",
                serde_json::json!({ "error": e.to_string(), "exit_code": e.exit_code() })
            );
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
