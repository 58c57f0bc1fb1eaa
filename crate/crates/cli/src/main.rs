//! `graphot` command-line front end: generate benchmarks, cluster graphs,
//! run Monte-Carlo sweeps and summarize their results.

mod commands;
mod config;
mod error;
mod results;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{ClusterArgs, GenerateArgs, SweepArgs};
use error::Result;

#[derive(Parser)]
#[command(name = "graphot", version, about = "Optimal-transport partitioning of attributed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic SBM graph and write graph.json and labels.csv.
    Generate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        shape: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        level: Option<u8>,
    },
    /// Partition a graph file and write partition.csv and run.json.
    Cluster {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Method label, e.g. `srgw-mean`, `embedded-srfgw-max@on-d1`, `frechet-kmeans`.
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        dtw_cost: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Ground-truth labels CSV; the ARI is added to the run record.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Run a Monte-Carlo experiment grid and write a results CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "results.csv")]
        out: PathBuf,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        reps: Option<usize>,
        /// Keep settings already complete in the output table.
        #[arg(long)]
        resume: bool,
        /// Mean runtimes per setting and method, as a separate CSV.
        #[arg(long)]
        timings: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print a results CSV as a table, optionally plotting it.
    Report {
        results: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate {
            config,
            out_dir,
            seed,
            shape,
            t,
            level,
        } => {
            for path in commands::generate(GenerateArgs {
                config,
                out_dir,
                seed,
                shape,
                t,
                level,
            })? {
                println!("{}", path.display());
            }
        }
        Command::Cluster {
            graph,
            config,
            out_dir,
            method,
            k,
            alpha,
            beta,
            dtw_cost,
            seed,
            truth,
        } => {
            let record = commands::cluster(ClusterArgs {
                graph,
                config,
                out_dir,
                method,
                k,
                alpha,
                beta,
                dtw_cost,
                seed,
                truth,
            })?;
            let sizes = record.outcome.partition.cluster_sizes();
            print!("{} clusters {sizes:?}", record.outcome.method);
            match record.ari {
                Some(a) => println!(" ari {a:.4}"),
                None => println!(),
            }
        }
        Command::Sweep {
            config,
            seed,
            out,
            jobs,
            reps,
            resume,
            timings,
            svg,
        } => {
            let rows = commands::sweep(SweepArgs {
                config,
                seed,
                out: out.clone(),
                jobs,
                reps,
                resume,
                timings,
                svg,
            })?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
        Command::Report { results, svg } => {
            print!("{}", commands::report(&results, svg.as_deref())?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let message = e.kind().as_str().map_or_else(|| e.to_string(), str::to_string);
            eprintln!("{}", serde_json::json!({ "error": "UsageError", "message": message }));
            eprint!("{}", e.render());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}
