use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use phylotope::cli::{
    configure_threads, exit_code, run, Command, DecomposeMode, FacetMode, FiberMode, Format,
    RunConfig, Suite, DEFAULT_SEED,
};
use phylotope::group::GroupSpec;
use phylotope::kernel::HullBounds;
use phylotope::model::Tree;

/// Lattice polytopes of group-based phylogenetic models.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Group as a product of cyclic factors, e.g. Z2xZ2 or Z6.
    #[arg(long, global = true)]
    group: Option<GroupSpec>,
    /// Number of edges of the claw tree.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Tree file with one edge `a b` per line.
    #[arg(long, global = true)]
    tree: Option<PathBuf>,
    #[arg(long, global = true)]
    k: Option<i64>,
    #[arg(long, global = true)]
    kmax: Option<i64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, default_value_t = HullBounds::default().max_vertices)]
    max_vertices: usize,
    #[arg(long, global = true, default_value_t = HullBounds::default().max_dim)]
    max_dim: usize,
}

#[derive(Subcommand)]
enum Sub {
    /// List the vertices.
    Vertices,
    /// Describe the lattice generated by the vertices.
    Lattice,
    /// Facets in closed form, by enumeration, or both compared.
    Facets {
        #[arg(long, default_value = "brute")]
        mode: FacetMode,
    },
    /// Exhaustive normality sweep up to --kmax.
    Normality,
    /// Decompose every point of kP into k vertices.
    Decompose {
        #[arg(long, default_value = "brute")]
        mode: DecomposeMode,
    },
    /// Build and check the non-normality witness.
    Witness,
    /// Decide the Gorenstein property.
    Gorenstein,
    /// Fiber product of the polytope with a claw.
    Fiber {
        #[arg(long, default_value = "build")]
        mode: FiberMode,
    },
    /// Neighbours of a vertex with edge certificates.
    Adjacency {
        #[arg(long, default_value_t = 0)]
        vertex: usize,
    },
    /// Replay a named result.
    Replay { suite: Suite },
}

fn config(cli: Cli) -> anyhow::Result<RunConfig> {
    let command = match cli.command {
        Sub::Vertices => Command::Vertices,
        Sub::Lattice => Command::Lattice,
        Sub::Facets { mode } => Command::Facets(mode),
        Sub::Normality => Command::Normality,
        Sub::Decompose { mode } => Command::Decompose(mode),
        Sub::Witness => Command::Witness,
        Sub::Gorenstein => Command::Gorenstein,
        Sub::Fiber { mode } => Command::Fiber(mode),
        Sub::Adjacency { vertex } => Command::Adjacency { vertex },
        Sub::Replay { suite } => Command::Replay(suite),
    };
    let c = cli.common;
    let tree = match c.tree {
        Some(path) => {
            let text = std::fs::read_to_string(&path)
                .with_context(|| format!("reading {}", path.display()))?;
            Some(Tree::parse(&text)?)
        }
        None => None,
    };
    Ok(RunConfig {
        command,
        group: c.group,
        m: c.m,
        tree,
        k: c.k,
        k_max: c.kmax,
        bounds: HullBounds {
            max_vertices: c.max_vertices,
            max_dim: c.max_dim,
        },
        format: c.format,
        seed: c.seed,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.common.out.clone();
    let result = (|| -> anyhow::Result<i32> {
        configure_threads()?;
        let cfg = config(cli)?;
        let mut sink: Box<dyn Write> = match &out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        let status = run(&cfg, &mut sink);
        if let Err(e) = &status {
            eprintln!("error: {e}");
        }
        Ok(exit_code(&status))
    })();
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
