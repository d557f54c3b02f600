use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use polybench::generators::FamilyId;
use polybench::vem::ModelProblem;
use polybench::Result;
use polybench_cli::dataset::{generate, Manifest};
use polybench_cli::{analyze, measure, report, solve, BenchmarkConfig};

#[derive(Debug, Parser)]
#[command(name = "polybench", version, about = "Polygon quality benchmark for the lowest-order virtual element method")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Comma-separated families; `random` adds the random polygons.
    #[arg(long, global = true, value_delimiter = ',', default_values_t = FamilyId::ALL.to_vec())]
    families: Vec<FamilyId>,

    /// Parameter samples per family, `t_i = i / (n - 1)`.
    #[arg(long, global = true, default_value_t = 20)]
    t_samples: usize,

    #[arg(long, global = true, default_value_t = 100)]
    random_count: usize,

    /// Mesh levels per polygon, the base mesh included.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=5))]
    levels: u8,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; all cores when omitted.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, default_value = "polybench-out")]
    out: PathBuf,

    #[arg(long, global = true, default_value_t = ModelProblem::SinSin)]
    problem: ModelProblem,

    /// Write the polygons only, without canvas meshes.
    #[arg(long, global = true)]
    no_canvas: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate polygons and mesh hierarchies.
    Generate,
    /// Compute mesh metrics of a generated dataset.
    Measure,
    /// Solve the model problem on every mesh and fit convergence rates.
    Solve,
    /// Correlate metrics with solver performance.
    Analyze,
    /// Bundle every output into report.json.
    Report,
}

impl Cli {
    fn config(&self) -> BenchmarkConfig {
        BenchmarkConfig {
            families: self.families.clone(),
            t_samples: self.t_samples,
            random_count: self.random_count,
            levels: self.levels as usize,
            seed: self.seed,
            out: self.out.clone(),
            problem: self.problem,
            canvas: !self.no_canvas,
        }
    }
}

/// Runs one stage and returns the number of failed rows.
fn run(cli: &Cli) -> Result<usize> {
    let config = cli.config();
    let root = config.out.as_path();
    match cli.command {
        Command::Generate => {
            let m = generate(&config)?;
            eprintln!("generated {} polygons in {}", m.entries.len(), root.display());
            Ok(m.failures.len())
        }
        Command::Measure => {
            let manifest = Manifest::load(root)?;
            let (rows, failures) = measure::measure(root, &manifest);
            measure::write_metrics(root, &rows, &failures)?;
            eprintln!("measured {} rows", rows.len());
            Ok(failures.len())
        }
        Command::Solve => {
            let manifest = Manifest::load(root)?;
            let out = solve::solve(root, &manifest, config.problem)?;
            solve::write_solve(root, &out, config.problem)?;
            eprintln!("solved {} rows", out.rows.len());
            Ok(out.failures.len())
        }
        Command::Analyze => {
            let a = analyze::analyze(root)?;
            analyze::write_analysis(root, &a)?;
            eprintln!("analyzed {} meshes at level {}, dropped {}", a.rows, a.level, a.geometry.dropped_rows);
            Ok(0)
        }
        Command::Report => {
            let r = report::write_report(root)?;
            let failures = &r["failures"];
            let count = ["generate", "measure", "solve"]
                .iter()
                .map(|k| failures[k].as_array().map_or(0, Vec::len))
                .sum();
            Ok(count)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs
        && let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global()
    {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(0) => ExitCode::SUCCESS,
        Ok(n) => {
            eprintln!("{n} failed rows");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
