use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

mod commands;

/// Exact maximum-leaf nets of polyhedral shells.
#[derive(Parser, Debug)]
#[command(name = "optinet", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all optimal cuts and their non-isomorphic representatives.
    Enumerate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Enumerate, unfold and rank the optimal nets by radius of gyration.
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Ranks to render as SVG, e.g. `1,2,10`.
        #[arg(long, value_delimiter = ',')]
        svg_ranks: Vec<usize>,
    },
    /// Check counts and optimal cuts against brute-force enumeration.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Largest spanning-tree count the brute-force oracle will enumerate.
        #[arg(long, default_value_t = optinet::DEFAULT_TREE_CAP)]
        tree_cap: u64,
    },
    /// Closed-form estimates against exact values, for one shell or the catalog.
    Estimate {
        #[command(flatten)]
        input: OptionalInputArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Spanning-tree and automorphism counts.
    Count {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Render nets as SVG, either a given cut or ranked optimal nets.
    ExportSvg {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Cut as space-separated edge indices (see edges.tsv).
        #[arg(long)]
        cut: Option<String>,
        /// Ranks to render when no cut is given.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        svg_ranks: Vec<usize>,
    },
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct InputSource {
    /// Polyhedron JSON document.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Built-in solid, e.g. `cube` or `snub-cube`.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct InputArgs {
    #[command(flatten)]
    source: InputSource,
    /// Faces to remove, comma separated; they must form one edge-connected patch.
    #[arg(long, value_delimiter = ',')]
    hole: Vec<usize>,
}

#[derive(Args, Debug, Clone)]
struct OptionalInputArgs {
    #[arg(long, conflicts_with = "builtin")]
    input: Option<PathBuf>,
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    /// Maximum search nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Allow solids whose exact enumeration takes hours.
    #[arg(long)]
    long_run: bool,
    /// Directory for result files.
    #[arg(long, default_value = "optinet-out")]
    out_dir: PathBuf,
}

impl RunArgs {
    fn search_config(&self) -> anyhow::Result<optinet::SearchConfig> {
        let mut config = optinet::SearchConfig::default();
        if let Some(b) = self.budget_nodes {
            if b == 0 {
                bail!("--budget-nodes must be positive");
            }
            config.node_budget = b;
        }
        if let Some(t) = self.time_limit {
            if !(t > 0.0) {
                bail!("--time-limit must be positive");
            }
            config.time_limit = Some(Duration::from_secs_f64(t));
        }
        config.parallel = self.workers != Some(1);
        Ok(config)
    }

    fn init_workers(&self) -> anyhow::Result<()> {
        if let Some(w) = self.workers {
            if w == 0 {
                bail!("--workers must be positive");
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build_global()
                .context("configuring worker threads")?;
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::EXIT_ERROR)
        }
    }
}
