use std::path::PathBuf;
use std::process;

use clap::{Parser, Subcommand};

use grasp_core::load_tudataset;
use grasp_core::metrics::MetricKind;
use grasp_core::pipeline::{self, format_cell, PipelineConfig, RunReport};

#[derive(Debug, Parser)]
#[command(name = "grasp", about = "Graph rewiring and structural comparison")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the dataset x method matrix described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the config's global seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        quiet: bool,
    },
    /// Print dataset characteristics.
    Inspect { directory: PathBuf, name: String },
    Version,
}

fn print_summary(report: &RunReport) {
    for d in &report.datasets {
        println!("{} ({} graphs)", d.name, d.stats.graphs);
        print!("{:<18}{:>18}", "metric", "original");
        for m in &d.methods {
            print!("{:>18}", m.label);
        }
        println!();
        for kind in MetricKind::ALL {
            let cell = |s: &grasp_core::metrics::MetricStat| format!("{} ± {}", format_cell(s.mean), format_cell(s.std));
            print!("{:<18}{:>18}", kind.name(), cell(&d.original.summary.stats[&kind]));
            for m in &d.methods {
                print!("{:>18}", cell(&m.rewired.summary.stats[&kind]));
            }
            println!();
        }
        for m in &d.methods {
            println!(
                "{}: {}% edges added, {}% removed, {} graph(s) excluded",
                m.label,
                format_cell(Some(m.edges.added_pct)),
                format_cell(Some(m.edges.removed_pct)),
                m.exceptions.len()
            );
        }
        println!();
    }
}

fn run(config: PathBuf, seed: Option<u64>, quiet: bool) -> i32 {
    let mut cfg = match PipelineConfig::from_file(&config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("grasp: {e}");
            return pipeline::exit_code(&e);
        }
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    match pipeline::run_pipeline(&cfg) {
        Ok(report) => {
            if !quiet {
                print_summary(&report);
                println!("wrote {}", cfg.output_dir.display());
            }
            0
        }
        Err(e) => {
            eprintln!("grasp: {e}");
            pipeline::exit_code(&e)
        }
    }
}

fn inspect(directory: PathBuf, name: String) -> i32 {
    match load_tudataset(&directory, &name) {
        Ok(bundle) => {
            let s = bundle.stats();
            println!("dataset              {}", s.name);
            println!("graphs               {}", s.graphs);
            println!("classes              {}", s.classes);
            println!("avg nodes            {:.2}", s.avg_nodes);
            println!("avg edges            {:.2}", s.avg_edges);
            println!("isolated nodes       {}", s.isolated_nodes);
            println!("disconnected graphs  {}", s.disconnected_graphs);
            0
        }
        Err(e) => {
            eprintln!("grasp: {e}");
            pipeline::exit_code(&e)
        }
    }
}

fn main() {
    // usage errors are configuration errors; keep exit code 2 for ingest
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Run { config, seed, quiet } => run(config, seed, quiet),
        Command::Inspect { directory, name } => inspect(directory, name),
        Command::Version => {
            println!("grasp {}", pipeline::VERSION);
            0
        }
    };
    process::exit(code);
}
