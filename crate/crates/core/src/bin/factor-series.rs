use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use factor_series::io::{
    bipartite_hash, graph_hash, parse_bipartite_edge_list, read_edge_list, reconstruct_graph, to_dot,
    write_bipartite_edge_list, write_decomposition, write_edge_list, DecompositionDocument, DocumentMeta,
};
use factor_series::oracle::{
    intersection_family, size_bound, verify_bijection, verify_neighbourhood_formula,
};
use factor_series::oracle::{CharacterisingSequence, IntersectionPoset};
use factor_series::{
    anti_matching, default_max_levels, maximal_cliques, run_series, run_series_from_bipartite, Error, Graph,
    OperatorKind, SeriesStatus, VertexSet,
};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "factor-series",
    version,
    about = "Factor-series decompositions of graphs"
)]
struct Cli {
    /// Worker threads for candidate enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a factor series and write the decomposition document.
    Decompose {
        #[arg(long)]
        operator: OperatorKind,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        max_levels: Option<usize>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Read `upper bottom` pairs and start the series from that graph.
        #[arg(long)]
        bipartite: bool,
    },
    /// Check a clean decomposition against the chains of its input graph.
    Verify {
        #[arg(long)]
        decomposition: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the maximal cliques, one per line.
    Cliques {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print the non-simple clique intersections, or the chains of a given length.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        chains: Option<usize>,
    },
    /// Generate a bipartite instance.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Print the edge list encoded by a decomposition.
    Reconstruct {
        #[arg(long)]
        decomposition: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Bipartite complement of a perfect matching on n + n vertices.
    AntiMatching { n: usize },
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn show_set(g: &Graph, set: &VertexSet) -> String {
    g.labels_of(set).join(" ")
}

fn show_chain(g: &Graph, chain: &CharacterisingSequence) -> String {
    let parts: Vec<String> = chain.sets().iter().map(|o| g.labels_of(o).join(",")).collect();
    parts.join(" < ")
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn decompose(
    op: OperatorKind,
    input: &Path,
    output: &Path,
    max_levels: Option<usize>,
    dot: Option<&Path>,
    bipartite: bool,
) -> Result<(), Failure> {
    let (series, source_hash) = if bipartite {
        let h = parse_bipartite_edge_list(&fs::read_to_string(input).map_err(Error::from)?)?;
        let max = max_levels.unwrap_or_else(|| default_max_levels(op, h.level(0).len()));
        (run_series_from_bipartite(&h, op, max)?, bipartite_hash(&h))
    } else {
        let g = read_edge_list(input)?;
        let max = max_levels.unwrap_or_else(|| default_max_levels(op, g.vertex_count()));
        (run_series(&g, op, max)?, graph_hash(&g))
    };
    let meta = DocumentMeta {
        operator: op,
        status: series.status,
        source_hash,
    };
    write_file(output, &write_decomposition(&series.graph, &meta)?)?;
    if let Some(path) = dot {
        write_file(path, &to_dot(&series.graph))?;
    }
    let status = match series.status {
        SeriesStatus::Terminated => "terminated",
        SeriesStatus::BudgetExceeded => "budget exceeded",
    };
    eprintln!(
        "{op}: {status} after {} steps, level sizes {:?}",
        series.steps, series.level_sizes
    );
    Ok(())
}

fn verify(decomposition: &Path, input: &Path) -> Result<(), Failure> {
    let doc = DecompositionDocument::read(decomposition)?;
    let g = read_edge_list(input)?;
    if doc.source_hash != graph_hash(&g) {
        return Err(Failure::Verification(
            "decomposition was not built from this input".into(),
        ));
    }
    if doc.operator != OperatorKind::Clean || doc.status != SeriesStatus::Terminated {
        return Err(Failure::Verification(format!(
            "expected a terminated clean decomposition, found {} with status {:?}",
            doc.operator, doc.status
        )));
    }
    let m = doc.to_multipartite()?;
    if reconstruct_graph(&doc)? != g {
        return Err(Failure::Verification(
            "level 1 does not encode the input graph".into(),
        ));
    }
    let bijection = verify_bijection(&g, &m).map_err(|e| Failure::Verification(e.to_string()))?;
    if let Some(c) = bijection.counterexample {
        return Err(Failure::Verification(format!("bijection: {c}")));
    }
    for lc in &bijection.level_counts {
        println!(
            "level {}: {} vertices, {} chains",
            lc.level, lc.vertices, lc.chains
        );
    }
    let formula = verify_neighbourhood_formula(&m);
    if let Some(c) = formula.counterexample {
        return Err(Failure::Verification(format!("neighbourhood formula: {c}")));
    }
    let bound = size_bound(&g)?;
    let actual = m.vertex_count();
    if actual as u128 > bound.bound || !bound.holds() {
        return Err(Failure::Verification(format!(
            "size bound: {actual} vertices exceed {}",
            bound.bound
        )));
    }
    println!(
        "size: {actual} <= {} (k={}, c={}, n={})",
        bound.bound, bound.k, bound.c, bound.n
    );
    println!(
        "verified: {} bijection checks, {} neighbourhood checks",
        bijection.checks, formula.checks
    );
    Ok(())
}

fn cliques(input: &Path) -> Result<(), Failure> {
    let g = read_edge_list(input)?;
    for c in maximal_cliques(&g)?.cliques() {
        println!("{}", show_set(&g, c));
    }
    Ok(())
}

fn oracle(input: &Path, chains: Option<usize>) -> Result<(), Failure> {
    let g = read_edge_list(input)?;
    let family = intersection_family(&g)?;
    match chains {
        None => {
            for o in family.nonsimple() {
                println!("{}", show_set(&g, o));
            }
        }
        Some(0) => return Err(Failure::Usage("--chains must be at least 1".into())),
        Some(len) => {
            for chain in IntersectionPoset::from_family(&family).chains_of_length(len) {
                println!("{}", show_chain(&g, &chain));
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Decompose {
            operator,
            input,
            output,
            max_levels,
            dot,
            bipartite,
        } => decompose(operator, &input, &output, max_levels, dot.as_deref(), bipartite),
        Command::Verify { decomposition, input } => verify(&decomposition, &input),
        Command::Cliques { input } => cliques(&input),
        Command::Oracle { input, chains } => oracle(&input, chains),
        Command::Gen {
            family: GenFamily::AntiMatching { n },
        } => {
            print!("{}", write_bipartite_edge_list(&anti_matching(n)?));
            Ok(())
        }
        Command::Reconstruct { decomposition } => {
            let doc = DecompositionDocument::read(&decomposition)?;
            print!("{}", write_edge_list(&reconstruct_graph(&doc)?));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_FAILED)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
