//! `dsp`: solve, check and generate dissimilar shortest path instances.
//!
//! Exit codes: 0 YES / certificate accepted, 1 NO / certificate rejected,
//! 2 usage or input error, 3 probabilistic NO, 4 instance too large for the
//! oracle.

use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dsp_core::colorcode::FamilyMode;
use dsp_core::generators::{gen_binpack, gen_grid, gen_layered, BinPackingInstance, Sidecar};
use dsp_core::oracle::OracleError;
use dsp_core::{solve, verify_certificate, ArcWeightedDigraph, Certificate, Decision, SolveConfig, SolveError, SolveMode};

#[derive(Parser)]
#[command(name = "dsp", version, about = "Dissimilar shortest paths solver")]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether k shortest paths pairwise at distance >= d exist.
    Solve(SolveArgs),
    /// Exact brute-force answer; exits 4 when the path catalog is too large.
    Oracle(SolveArgs),
    /// Write a generated graph and its sidecar JSON.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Check a certificate against a graph.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Fpt,
    Oracle,
    Hybrid,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Small families checked against every subset; wider instances fall
    /// back to injective colorings.
    Exhaustive,
    /// Seeded random colorings; failures report probabilistic NO.
    Seeded,
}

#[derive(Args)]
struct SolveArgs {
    /// Graph file.
    #[arg(short = 'g', long)]
    graph: PathBuf,
    /// Number of paths.
    #[arg(short = 'k')]
    k: usize,
    /// Minimum pairwise distance.
    #[arg(short = 'd')]
    d: usize,
    /// Solver pipeline (ignored by `oracle`).
    #[arg(long, value_enum, default_value = "hybrid")]
    mode: ModeArg,
    /// Hash family construction for color coding.
    #[arg(long, value_enum, default_value = "exhaustive")]
    family: FamilyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Colorings per ball search in seeded mode.
    #[arg(long, default_value_t = 64)]
    coloring_budget: usize,
    /// Largest number of s-t paths the oracle enumerates.
    #[arg(long = "enum-budget", default_value_t = 100_000)]
    enum_budget: usize,
    /// Write the certificate here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// (w+1) x (h+1) lattice with unit arcs east and south.
    Grid {
        #[arg(long)]
        w: usize,
        #[arg(long)]
        h: usize,
        #[command(flatten)]
        out: GenOut,
    },
    /// Random layered DAG.
    Layered {
        #[arg(long)]
        layers: usize,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value_t = 0.5)]
        arc_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: GenOut,
    },
    /// Unary Bin Packing reduction.
    Binpack {
        /// Comma-separated item sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        items: Vec<u64>,
        /// Number of bins k.
        #[arg(long)]
        bins: usize,
        /// Bin capacity M.
        #[arg(long)]
        capacity: u64,
        #[command(flatten)]
        out: GenOut,
    },
}

#[derive(Args)]
struct GenOut {
    /// Graph file to write.
    #[arg(short = 'o', long)]
    out: PathBuf,
    /// Sidecar JSON path (default: graph path with `.json` appended).
    #[arg(long)]
    sidecar: Option<PathBuf>,
    /// k recorded in the sidecar of grid and layered graphs.
    #[arg(long, default_value_t = 2)]
    ask_k: usize,
    /// d recorded in the sidecar of grid and layered graphs.
    #[arg(long, default_value_t = 2)]
    ask_d: usize,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(short = 'g', long)]
    graph: PathBuf,
    /// Certificate JSON.
    #[arg(short = 'c', long)]
    cert: PathBuf,
    #[arg(short = 'k')]
    k: usize,
    #[arg(short = 'd')]
    d: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Solve(args) => {
            let mode = match args.mode {
                ModeArg::Fpt => SolveMode::Fpt,
                ModeArg::Oracle => SolveMode::Oracle,
                ModeArg::Hybrid => SolveMode::Hybrid,
            };
            run_solve(&args, mode)
        }
        Command::Oracle(args) => run_solve(&args, SolveMode::Oracle),
        Command::Gen(gen) => run_gen(gen).map(|()| 0),
        Command::Verify(args) => run_verify(&args),
    }
}

fn read_graph(path: &FsPath) -> Result<ArcWeightedDigraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    text.parse()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_file(path: &FsPath, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn run_solve(args: &SolveArgs, mode: SolveMode) -> Result<u8, Failure> {
    let g = read_graph(&args.graph)?;
    let cfg = SolveConfig {
        mode,
        family: match args.family {
            FamilyArg::Exhaustive => FamilyMode::ExhaustiveVerified,
            FamilyArg::Seeded => FamilyMode::SeededMonteCarlo,
        },
        seed: args.seed,
        coloring_budget: args.coloring_budget,
        enumeration_budget: args.enum_budget,
        ..SolveConfig::default()
    };
    let cert = solve(&g, args.k, args.d, &cfg).map_err(|e| match e {
        SolveError::Oracle(err @ OracleError::TooLarge { .. }) => Failure {
            code: 4,
            message: err.to_string(),
        },
        other => Failure::input(other.to_string()),
    })?;
    let json = cert.to_json();
    match &args.json {
        Some(path) => write_file(path, &format!("{json}\n"))?,
        None => println!("{json}"),
    }
    eprintln!(
        "{} ({} greedy paths, {} compositions, {} ms)",
        decision_name(cert.decision),
        cert.stats.greedy_paths,
        cert.stats.compositions_tried,
        cert.stats.elapsed_ms
    );
    Ok(match cert.decision {
        Decision::Yes => 0,
        Decision::No => 1,
        Decision::ProbabilisticNo => 3,
    })
}

fn decision_name(d: Decision) -> &'static str {
    match d {
        Decision::Yes => "yes",
        Decision::No => "no",
        Decision::ProbabilisticNo => "probabilistic no",
    }
}

fn run_gen(gen: GenCommand) -> Result<(), Failure> {
    let (graph, sidecar, out) = match gen {
        GenCommand::Grid { w, h, out } => {
            let g = gen_grid(w, h).map_err(|e| Failure::input(e.to_string()))?;
            let sidecar = plain_sidecar(&out, (w + h) as u64);
            (g, sidecar, out)
        }
        GenCommand::Layered {
            layers,
            width,
            arc_prob,
            seed,
            out,
        } => {
            let g = gen_layered(layers, width, arc_prob, seed).map_err(|e| Failure::input(e.to_string()))?;
            let sidecar = plain_sidecar(&out, layers as u64 + 1);
            (g, sidecar, out)
        }
        GenCommand::Binpack {
            items,
            bins,
            capacity,
            out,
        } => {
            let inst = gen_binpack(&BinPackingInstance::new(items, bins, capacity))
                .map_err(|e| Failure::input(e.to_string()))?;
            let sidecar = inst.sidecar();
            (inst.graph, sidecar, out)
        }
    };
    write_file(&out.out, &graph.to_dsp_string())?;
    let sidecar_path = out.sidecar.clone().unwrap_or_else(|| {
        let mut p = out.out.clone().into_os_string();
        p.push(".json");
        p.into()
    });
    let json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    write_file(&sidecar_path, &format!("{json}\n"))?;
    eprintln!(
        "wrote {} ({} vertices, {} arcs) and {}",
        out.out.display(),
        graph.vertex_count(),
        graph.arc_count(),
        sidecar_path.display()
    );
    Ok(())
}

fn plain_sidecar(out: &GenOut, ell: u64) -> Sidecar {
    Sidecar {
        ask_k: out.ask_k,
        ask_d: out.ask_d,
        ell,
        doubled: false,
        decomposition: Vec::new(),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<u8, Failure> {
    let g = read_graph(&args.graph)?;
    let text = fs::read_to_string(&args.cert).map_err(|e| Failure::input(format!("{}: {e}", args.cert.display())))?;
    let cert: Certificate =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", args.cert.display())))?;
    let report = match verify_certificate(&g, &cert, args.k, args.d) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("rejected: {e}");
            return Ok(1);
        }
    };
    match report.violation {
        None => {
            eprintln!("certificate ok");
            Ok(0)
        }
        Some(v) => {
            eprintln!("rejected: {v}");
            Ok(1)
        }
    }
}
