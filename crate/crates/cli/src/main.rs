//! `fatgraph`: build intersection graphs of fat objects, compute slab
//! separators and alpha-modulator decompositions, solve 2-Subcoloring and
//! Two Sets Cut-Uncut over them, and compile Monotone NAE-3-SAT formulas
//! into hard instances.
//!
//! Exit codes: 0 success / yes, 1 no (decision problems), 2 usage or parse
//! error, 3 exact-search cap exceeded.

mod bench;
mod formats;
mod gen;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fatgraph_core::error::Error as CoreError;
use fatgraph_core::geometry::build_intersection_graph_threads;
use fatgraph_core::modulator::{amod_exact, decomposition_from_geometry};
use fatgraph_core::reduction::{self, ReductionVariant};
use fatgraph_core::{cutuncut, embed, subcoloring};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fatgraph", version, about)]
struct Cli {
    /// Seed for all randomized steps (env: FATGRAPH_SEED).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Machine-readable output where applicable.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for geometric pair testing.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the intersection graph of an object set.
    BuildGraph {
        objects: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Compute the slab separator decomposition of an object set.
    Separator {
        objects: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Exact alpha-modulator number of a small graph (XP search).
    Amod { graph: PathBuf },
    /// Decomposition from geometry (slab separator + certificates).
    Decompose {
        objects: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve a problem over a modulator decomposition.
    Solve {
        #[command(subcommand)]
        problem: SolveCommand,
    },
    /// Compile a Monotone NAE-3-SAT formula into a hard instance.
    Reduce {
        formula: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        embed: Option<EmbedArg>,
        /// Output prefix; emits <prefix>.graph.txt and friends.
        #[arg(short, long)]
        output: String,
    },
    /// Generate a seeded random object set.
    Gen {
        #[arg(long, value_enum, default_value_t = KindArg::UnitBalls)]
        kind: KindArg,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4.0)]
        density: f64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a benchmark suite and emit CSV.
    Bench {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a brute-force oracle (for solver diffing).
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand)]
enum SolveCommand {
    /// Decide 2-Subcoloring; exit 0 = yes, 1 = no.
    Subcoloring {
        graph: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Solve Two Sets Cut-Uncut; exit 0 = feasible, 1 = infeasible.
    Cutuncut {
        instance: PathBuf,
        #[arg(long)]
        decomp: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        steiner_cap: Option<usize>,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exact independence number (branch and bound).
    Alpha { graph: PathBuf },
    /// Exhaustive 2-subcoloring decision.
    Subcoloring { graph: PathBuf },
    /// Exhaustive cut-uncut optimum.
    Cutuncut { instance: PathBuf },
    /// Exhaustive NAE assignment search.
    Nae { formula: PathBuf },
    /// Weight-zero cut feasibility by class contraction.
    ZeroCut { instance: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Subcoloring,
    Cutuncut,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbedArg {
    Polygons,
    Balls,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    UnitBalls,
    FatBoxes,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Separator,
    Subcoloring,
    Cutuncut,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // Cap violations get their own exit code so CI can tell them
            // from bad input.
            let capped = e
                .downcast_ref::<CoreError>()
                .map_or(false, |c| matches!(c, CoreError::CapExceeded { .. }));
            if capped {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn resolve_seed(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| std::env::var("FATGRAPH_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let seed = resolve_seed(cli.seed);
    match cli.command {
        Command::BuildGraph { objects, output } => {
            let set = formats::parse_object_set(&read(&objects)?)?;
            let g = build_intersection_graph_threads(&set, cli.threads.max(1))
                .map_err(core_err)?;
            fs::write(&output, formats::write_graph(&g))?;
            eprintln!("{} vertices, {} edges -> {}", g.vertex_count(), g.edge_count(), output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Separator { objects, output } | Command::Decompose { objects, output: Some(output) } => {
            let set = formats::parse_object_set(&read(&objects)?)?;
            let decomp = decomposition_from_geometry(&set).map_err(core_err)?;
            fs::write(&output, formats::write_decomposition(&decomp))?;
            report_decomposition(&decomp, cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { objects, output: None } => {
            let set = formats::parse_object_set(&read(&objects)?)?;
            let decomp = decomposition_from_geometry(&set).map_err(core_err)?;
            report_decomposition(&decomp, cli.json);
            Ok(ExitCode::SUCCESS)
        }
        Command::Amod { graph } => {
            let g = formats::parse_graph(&read(&graph)?)?;
            let (k, witness) = amod_exact(&g).map_err(core_err)?;
            if cli.json {
                println!("{}", serde_json::json!({ "amod": k, "modulator": witness }));
            } else {
                println!("amod = {k}, modulator = {witness:?}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { problem } => run_solve(problem, cli.json),
        Command::Reduce { formula, dim, variant, embed: emb, output } => {
            run_reduce(&formula, dim, variant, emb, &output, cli.json)
        }
        Command::Gen { kind, dim, n, density, output } => {
            let kind = match kind {
                KindArg::UnitBalls => gen::InstanceKind::UnitBalls,
                KindArg::FatBoxes => gen::InstanceKind::FatBoxes,
            };
            let set = gen::gen_random_instance(kind, dim, n, density, seed);
            set.validate().map_err(core_err)?;
            fs::write(&output, formats::write_object_set(&set))?;
            eprintln!("wrote {n} objects to {}", output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { suite, sizes, seeds, dim, output } => {
            let suite = match suite {
                SuiteArg::Separator => bench::Suite::Separator,
                SuiteArg::Subcoloring => bench::Suite::Subcoloring,
                SuiteArg::Cutuncut => bench::Suite::CutUncut,
            };
            let csv = bench::run_bench(suite, dim, &sizes, &seeds)?;
            match output {
                Some(path) => fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { which } => run_oracle(which, cli.json),
    }
}

fn run_solve(problem: SolveCommand, json: bool) -> Result<ExitCode> {
    match problem {
        SolveCommand::Subcoloring { graph, decomp, witness } => {
            let g = formats::parse_graph(&read(&graph)?)?;
            let d = formats::parse_decomposition(&read(&decomp)?, g)?;
            let answer = subcoloring::solve_subcoloring(&d).map_err(core_err)?;
            match answer {
                Some(coloring) => {
                    if let Some(path) = witness {
                        fs::write(path, formats::write_subcoloring_witness(&coloring))?;
                    }
                    if json {
                        println!("{}", serde_json::json!({ "subcolorable": true }));
                    } else {
                        println!("yes");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    if json {
                        println!("{}", serde_json::json!({ "subcolorable": false }));
                    } else {
                        println!("no");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        SolveCommand::Cutuncut { instance, decomp, witness, steiner_cap } => {
            let inst = formats::parse_instance(&read(&instance)?)?;
            let d = formats::parse_decomposition(&read(&decomp)?, inst.graph.clone())?;
            let answer = cutuncut::solve_cutuncut(&inst, &d, steiner_cap).map_err(core_err)?;
            match answer {
                Some(sol) => {
                    if let Some(path) = witness {
                        fs::write(path, formats::write_cut_witness(&sol))?;
                    }
                    if json {
                        println!("{}", serde_json::json!({ "feasible": true, "weight": sol.weight }));
                    } else {
                        println!("weight {}", sol.weight);
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    if json {
                        println!("{}", serde_json::json!({ "feasible": false }));
                    } else {
                        println!("infeasible");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

fn run_reduce(
    formula: &Path,
    dim: usize,
    variant: VariantArg,
    emb: Option<EmbedArg>,
    prefix: &str,
    json: bool,
) -> Result<ExitCode> {
    let f = reduction::parse_nae3sat(&read(formula)?).map_err(core_err)?;
    let variant = match variant {
        VariantArg::Subcoloring => ReductionVariant::Subcoloring,
        VariantArg::Cutuncut => ReductionVariant::CutUncut,
    };
    let out = reduction::build_abstract_graph(&f, dim, variant).map_err(core_err)?;
    fs::write(format!("{prefix}.graph.txt"), formats::write_graph(&out.graph))?;
    if variant == ReductionVariant::CutUncut {
        let inst = out.instance().map_err(core_err)?;
        fs::write(format!("{prefix}.inst.json"), formats::write_instance(&inst))?;
    }
    if let Some(emb) = emb {
        let set = match emb {
            EmbedArg::Polygons => {
                if dim != 2 {
                    bail!("polygon embedding needs --dim 2");
                }
                embed::embed_2d(&out).map_err(core_err)?
            }
            EmbedArg::Balls => {
                if dim < 3 {
                    bail!("ball embedding needs --dim >= 3");
                }
                embed::embed_balls(&out).map_err(core_err)?
            }
        };
        fs::write(format!("{prefix}.objects.json"), formats::write_object_set(&set))?;
    }
    if json {
        println!(
            "{}",
            serde_json::json!({
                "variables": f.var_count,
                "clauses": f.clauses.len(),
                "vertices": out.graph.vertex_count(),
                "edges": out.graph.edge_count(),
                "grid_side": out.grid.p,
            })
        );
    } else {
        println!(
            "compiled {} vars / {} clauses into {} vertices, {} edges (grid side {})",
            f.var_count,
            f.clauses.len(),
            out.graph.vertex_count(),
            out.graph.edge_count(),
            out.grid.p
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run_oracle(which: OracleCommand, json: bool) -> Result<ExitCode> {
    match which {
        OracleCommand::Alpha { graph } => {
            let g = formats::parse_graph(&read(&graph)?)?;
            let result = fatgraph_core::graph::independence_number(&g).map_err(core_err)?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({ "alpha": result.size, "witness": result.witness })
                );
            } else {
                println!("alpha = {}, witness = {:?}", result.size, result.witness);
            }
            Ok(ExitCode::SUCCESS)
        }
        OracleCommand::Subcoloring { graph } => {
            let g = formats::parse_graph(&read(&graph)?)?;
            let answer = subcoloring::brute_subcoloring(&g).map_err(core_err)?;
            println!("{}", if answer.is_some() { "yes" } else { "no" });
            Ok(if answer.is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        OracleCommand::Cutuncut { instance } => {
            let inst = formats::parse_instance(&read(&instance)?)?;
            let answer = cutuncut::brute_cutuncut(&inst).map_err(core_err)?;
            match answer {
                Some(sol) => {
                    println!("weight {}", sol.weight);
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("infeasible");
                    Ok(ExitCode::from(1))
                }
            }
        }
        OracleCommand::Nae { formula } => {
            let f = reduction::parse_nae3sat(&read(&formula)?).map_err(core_err)?;
            let answer = reduction::solve_nae_brute(&f).map_err(core_err)?;
            println!("{}", if answer.is_some() { "satisfiable" } else { "unsatisfiable" });
            Ok(if answer.is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        OracleCommand::ZeroCut { instance } => {
            let inst = formats::parse_instance(&read(&instance)?)?;
            let answer = cutuncut::zero_weight_cut(&inst).map_err(core_err)?;
            println!("{}", if answer.is_some() { "feasible" } else { "infeasible" });
            Ok(if answer.is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn report_decomposition(decomp: &fatgraph_core::modulator::ModulatorDecomposition, json: bool) {
    if json {
        println!(
            "{}",
            serde_json::json!({
                "separator": decomp.modulator.len(),
                "components": decomp.components.len(),
                "k": decomp.k,
            })
        );
    } else {
        println!(
            "separator {} vertices, {} components, width k = {}",
            decomp.modulator.len(),
            decomp.components.len(),
            decomp.k
        );
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn core_err(e: CoreError) -> anyhow::Error {
    anyhow!(e)
}
