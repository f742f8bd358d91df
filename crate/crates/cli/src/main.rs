use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frustra::pipeline::OracleConfig;
use frustra::{
    build_graph, count_spanning_trees, read_edge_list, run_oracle, run_pipeline, ComponentPolicy,
    Error, RunConfig, SamplerKind, SymmetrizationPolicy, TieAgreement,
};

/// Frustration-cloud consensus metrics for signed graphs.
#[derive(Debug, Parser)]
#[command(name = "frustra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample spanning trees and write status, agreement and influence tables.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "random-mst")]
        sampler: SamplerKind,
        #[arg(long, default_value_t = 1000)]
        trees: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Label of the vertex that wins every tie (adds vertical status).
        #[arg(long)]
        tie_break: Option<String>,
        #[arg(long, default_value = "largest", value_parser = ["largest", "all"])]
        component: String,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        /// Report the sum of incident agreement instead of the mean.
        #[arg(long)]
        raw_influence: bool,
        #[arg(long, default_value = "zero-cut")]
        tie_agreement: TieAgreement,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate every spanning tree and balanced state (small graphs only).
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        tie_break: Option<String>,
        #[arg(long)]
        raw_influence: bool,
        #[arg(long, default_value = "zero-cut")]
        tie_agreement: TieAgreement,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the exact number of spanning trees.
    CountTrees {
        #[arg(long)]
        input: PathBuf,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run {
            input,
            sampler,
            trees,
            seed,
            tie_break,
            component,
            workers,
            raw_influence,
            tie_agreement,
            out,
        } => {
            let cfg = RunConfig {
                input,
                sampler,
                trees,
                seed,
                tie_break,
                component: component.parse::<ComponentPolicy>()?,
                workers,
                normalized_influence: !raw_influence,
                tie_agreement,
                out_dir: out,
            };
            let result = run_pipeline(&cfg)?;
            for run in &result.components {
                println!(
                    "{} vertices, {} edges, controversy {}",
                    run.graph.vertex_count(),
                    run.graph.edge_count(),
                    run.report.controversy
                );
            }
        }
        Command::Oracle {
            input,
            tie_break,
            raw_influence,
            tie_agreement,
            out,
        } => {
            let result = run_oracle(&OracleConfig {
                input,
                tie_break,
                normalized_influence: !raw_influence,
                tie_agreement,
                out_dir: out,
            })?;
            println!(
                "{} trees, {} cloud states of {} balanced, controversy {}",
                result.cloud.tree_count,
                result.cloud.len(),
                result.cloud.balanced_state_count,
                result.report.controversy
            );
        }
        Command::CountTrees { input } => {
            let raw = read_edge_list(&input)?;
            let g = build_graph(&raw, SymmetrizationPolicy::SumThenSign)?.graph;
            println!("{}", count_spanning_trees(&g)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() {
                2
            } else if e.is_capacity() {
                3
            } else {
                1
            })
        }
    }
}
