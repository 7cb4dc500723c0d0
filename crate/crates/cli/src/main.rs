//! `biregular`: decide distance-biregularity of bipartite graphs from the
//! spectrum, and cross-check against direct counting.
//!
//! Exit codes: 0 distance-biregular, 1 not, 2 input error. For `corpus`,
//! 1 means a spectral/oracle disagreement and 2 an unreadable or invalid
//! file.

mod corpus;
mod input;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use biregular::graphs::{default_families, to_edge_list, to_graph6};
use biregular::spectra::default_solvers;
use biregular::{CaseCVariant, Config};
use clap::{Args, Parser, Subcommand, ValueEnum};

use input::Format;
use report::{Failure, Options};

#[derive(Parser)]
#[command(
    name = "biregular",
    version,
    about = "Spectral excess test for distance-biregular graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one graph.
    Analyze(AnalyzeArgs),
    /// Analyze every file in a directory and compare with the oracle.
    Corpus(CorpusArgs),
    /// Write a graph from a named family.
    Generate(GenerateArgs),
    /// List graph families and eigensolvers.
    List,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[value(alias = "paper")]
    Literal,
    Derived,
    Both,
}

impl VariantArg {
    fn label(self) -> &'static str {
        match self {
            VariantArg::Literal => "literal",
            VariantArg::Derived => "derived",
            VariantArg::Both => "both",
        }
    }
}

#[derive(Args)]
struct PipelineArgs {
    /// Relative eigenvalue grouping tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol_eig: f64,
    /// Tolerance for the excess equalities.
    #[arg(long, default_value_t = 1e-6)]
    tol_eq: f64,
    /// Side-2 condition used for the verdict in case iv; `both` reports
    /// both and decides with `derived`.
    #[arg(long, value_enum, default_value = "both")]
    case_c_variant: VariantArg,
    /// Eigensolver (see `list`).
    #[arg(long, default_value = "jacobi")]
    solver: String,
    /// Emit JSON.
    #[arg(long)]
    json: bool,
    /// Include the local excess inequality for every vertex.
    #[arg(long)]
    local: bool,
    /// Include wall-clock time in reports.
    #[arg(long)]
    timing: bool,
    /// Input format; guessed from extension and content when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl PipelineArgs {
    fn options(&self) -> Result<Options, Failure> {
        if !(self.tol_eig > 0.0 && self.tol_eq > 0.0) {
            return Err(Failure::new("BadTolerance", "tolerances must be positive"));
        }
        if default_solvers().get(&self.solver).is_none() {
            return Err(Failure::new(
                "UnknownSolver",
                format!("unknown solver `{}`", self.solver),
            ));
        }
        let variant = match self.case_c_variant {
            VariantArg::Literal => CaseCVariant::Literal,
            VariantArg::Derived | VariantArg::Both => CaseCVariant::Derived,
        };
        Ok(Options {
            config: Config {
                grouping_tol: self.tol_eig,
                equality_tol: self.tol_eq,
                case_c_variant: variant,
                solver: self.solver.clone(),
                ..Config::default()
            },
            variant_label: self.case_c_variant.label().to_string(),
            local: self.local,
            timing: self.timing,
        })
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graph file (graph6 or edge list); `-` reads stdin.
    #[arg(required_unless_present = "gen", conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Generate the graph instead: family name then parameters.
    #[arg(long, num_args = 1.., value_names = ["FAMILY", "PARAMS"])]
    gen: Option<Vec<String>>,
    /// Subdivide every edge; may be repeated.
    #[arg(long, action = clap::ArgAction::Count)]
    subdivide: u8,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct CorpusArgs {
    directory: PathBuf,
    /// Worker threads; defaults to available parallelism.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct GenerateArgs {
    family: String,
    params: Vec<usize>,
    /// Subdivide every edge; may be repeated.
    #[arg(long, action = clap::ArgAction::Count)]
    subdivide: u8,
    #[arg(long, value_enum, default_value = "graph6")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new("IoError", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("error: {}: {}", f.kind, f.message);
    ExitCode::from(2)
}

fn analyze(args: &AnalyzeArgs) -> Result<ExitCode, Failure> {
    let opts = args.pipeline.options()?;
    let (g, source) = match (&args.gen, &args.input) {
        (Some(spec), _) => {
            let mut source = spec.join(" ");
            for _ in 0..args.subdivide {
                source.push_str(" --subdivide");
            }
            (input::generated(spec, args.subdivide)?, source)
        }
        (None, Some(path)) => {
            let mut g = input::read_graph(path, args.pipeline.format)?;
            for _ in 0..args.subdivide {
                g = biregular::graphs::subdivide(&g);
            }
            (g, path.display().to_string())
        }
        (None, None) => return Err(Failure::new("Usage", "no input")),
    };
    let r = report::build(&g, &source, &opts)?;
    let text = if args.pipeline.json {
        serde_json::to_string_pretty(&r).expect("reports serialize") + "\n"
    } else {
        report::render_text(&r)
    };
    emit(&text, args.out.as_ref())?;
    Ok(ExitCode::from(if r.distance_biregular { 0 } else { 1 }))
}

fn run_corpus(args: &CorpusArgs) -> Result<ExitCode, Failure> {
    let opts = args.pipeline.options()?;
    let files = corpus::list(&args.directory)?;
    let jobs = args
        .jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1);
    let entries = corpus::run(&files, args.pipeline.format, &opts, jobs);
    let summary = corpus::summarize(&entries);
    let text = if args.pipeline.json {
        let value = serde_json::json!({ "entries": entries, "summary": summary });
        serde_json::to_string_pretty(&value).expect("reports serialize") + "\n"
    } else {
        corpus::render_table(&entries, &summary)
    };
    emit(&text, args.out.as_ref())?;
    Ok(ExitCode::from(summary.exit_code()))
}

fn generate(args: &GenerateArgs) -> Result<ExitCode, Failure> {
    let mut spec = vec![args.family.clone()];
    spec.extend(args.params.iter().map(|p| p.to_string()));
    let g = input::generated(&spec, args.subdivide)?;
    let text = match args.format {
        Format::Graph6 => to_graph6(&g) + "\n",
        Format::Edgelist => to_edge_list(&g),
    };
    emit(&text, args.out.as_ref())?;
    Ok(ExitCode::SUCCESS)
}

fn list() -> ExitCode {
    println!("families:");
    let families = default_families();
    for name in families.names() {
        println!("  {name} {}", families.get(name).unwrap().usage());
    }
    println!("solvers:");
    for name in default_solvers().names() {
        println!("  {name}");
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Corpus(c) => run_corpus(c),
        Command::Generate(g) => generate(g),
        Command::List => Ok(list()),
    };
    result.unwrap_or_else(|f| fail(&f))
}
