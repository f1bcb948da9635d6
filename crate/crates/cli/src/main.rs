use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use polyg::bench::{self, parse_hood, parse_pen, BenchConfig, BenchRecord};
use polyg::format::{objective_name, read_instance, read_solution, write_instance, write_solution, SolutionFile};
use polyg::generate::{generate, Distribution};
use polyg::{plot, run};
use polyg_core::model::{brute_force_optimum, score_cycle};
use polyg_core::solve::{DNC_GRID, DNC_THRESHOLD};
use polyg_core::{Hood, Objective, SolveParams, WeightVariant};

#[derive(Parser)]
#[command(name = "polyg", version, about = "Area-optimal polygonalization of planar point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a polygon through every point.
    Solve(SolveArgs),
    /// Check a solution independently of the solver.
    Verify { instance: PathBuf, solution: PathBuf },
    /// Print the score of a solution, or the exact optimum of a tiny instance.
    Score(ScoreArgs),
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Render an instance and optionally a solution as SVG.
    Plot(PlotArgs),
    /// Run benchmark experiments.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Obj {
    Max,
    Min,
}

impl From<Obj> for Objective {
    fn from(o: Obj) -> Objective {
        match o {
            Obj::Max => Objective::Max,
            Obj::Min => Objective::Min,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Minus,
    Plus,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "max")]
    obj: Obj,
    /// Inverse edge penalty 1/alpha; `inf` disables the penalty.
    #[arg(long, default_value = "90", value_parser = parse_pen)]
    pen: f64,
    /// Longest vertex path moved by local search.
    #[arg(long, default_value_t = 10)]
    hops: usize,
    /// Neighborhood radius in grid cells, or `inf`. Small instances search
    /// everything unless this is given.
    #[arg(long, value_parser = parse_hood)]
    hood: Option<Hood>,
    /// Standard deviation of multiplicative weight noise.
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Randomized attempts; the best is kept.
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, value_enum, default_value = "minus")]
    weight_variant: Variant,
    /// Solution file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cells per side when splitting large instances.
    #[arg(long, default_value_t = DNC_GRID)]
    dnc_grid: usize,
    /// Instances with more points than this are split.
    #[arg(long, default_value_t = DNC_THRESHOLD)]
    dnc_threshold: usize,
}

#[derive(Args)]
struct ScoreArgs {
    instance: PathBuf,
    solution: Option<PathBuf>,
    /// Enumerate every polygon (at most 10 points).
    #[arg(long)]
    brute_force: bool,
    #[arg(long, value_enum, default_value = "max")]
    obj: Obj,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    distribution: Distribution,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    instance: PathBuf,
    solution: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Experiment {
    AlphaSweep,
    SigmaSweep,
    Scaling,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Jsonl,
    Table,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML file listing instances and a parameter grid.
    #[arg(long, conflicts_with = "experiment")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    /// Instance size for the sweeps.
    #[arg(long, default_value_t = 500)]
    n: usize,
    /// Instance seed for the sweeps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Noisy runs per sigma in the sigma sweep.
    #[arg(long, default_value_t = 20)]
    runs: u64,
    #[arg(long, value_enum, default_value = "max")]
    obj: Obj,
    /// Sizes for the scaling experiment.
    #[arg(long, value_delimiter = ',', default_values_t = [1000, 2000, 4000])]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value = "jsonl")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let instance = read_instance(&a.instance).with_context(|| format!("reading {}", a.instance.display()))?;
    let params = SolveParams {
        alpha: a.pen,
        hops: a.hops,
        hood: a.hood.unwrap_or(Hood::Cells(2)),
        hood_pinned: a.hood.is_some(),
        sigma: a.sigma,
        objective: a.obj.into(),
        seed: a.seed,
        weight_variant: match a.weight_variant {
            Variant::Minus => WeightVariant::Minus,
            Variant::Plus => WeightVariant::Plus,
        },
        ..Default::default()
    };
    params.validate()?;
    if a.dnc_grid == 0 {
        bail!("--dnc-grid must be positive");
    }
    let start = Instant::now();
    let (cycle, score) = if instance.len() > a.dnc_threshold {
        let merged = run::solve_dnc(&instance, &params, a.dnc_grid)?;
        eprintln!("split {g}x{g}: {} bridges", merged.bridges.len(), g = a.dnc_grid);
        let mut poly = merged.polygon;
        if poly.area2() < 0 {
            poly.reverse();
        }
        let hull = instance.hull_area2()?;
        (poly.canonical_cycle(), poly.area2() as f64 / hull as f64)
    } else {
        let sol = run::solve_restarts(&instance, &params, a.restarts)?;
        eprintln!(
            "greedy {:.6} (attempt {}), local search {} rounds {} moves",
            sol.greedy_score(),
            sol.greedy_attempt,
            sol.ls_rounds,
            sol.ls_moves
        );
        (sol.cycle(), sol.score())
    };
    eprintln!("score {score:.6} in {:.3}s", start.elapsed().as_secs_f64());
    let file = SolutionFile { instance: instance.name.clone(), objective: params.objective, score, cycle };
    emit(a.out.as_deref(), &write_solution(&file))
}

fn cmd_verify(instance: &Path, solution: &Path) -> Result<()> {
    let inst = read_instance(instance).with_context(|| format!("reading {}", instance.display()))?;
    let sol = read_solution(solution).with_context(|| format!("reading {}", solution.display()))?;
    let report = score_cycle(&inst, &sol.cycle)?;
    println!("objective {}", objective_name(sol.objective));
    println!("simple {}", report.simple);
    println!("uses_all_points {}", report.uses_all_points);
    println!("polygon_area2 {}", report.polygon_area2);
    println!("hull_area2 {}", report.hull_area2);
    println!("score {}", report.score);
    if sol.instance != inst.name {
        eprintln!("warning: solution names instance `{}`, file is `{}`", sol.instance, inst.name);
    }
    if !report.uses_all_points {
        bail!("solution does not visit every point exactly once");
    }
    if !report.simple {
        bail!("polygon is not simple");
    }
    if (report.score - sol.score).abs() > 1e-9 {
        bail!("stored score {} does not match recomputed {}", sol.score, report.score);
    }
    Ok(())
}

fn cmd_score(a: ScoreArgs) -> Result<()> {
    let inst = read_instance(&a.instance).with_context(|| format!("reading {}", a.instance.display()))?;
    if a.brute_force {
        let (report, cycle) = brute_force_optimum(&inst, a.obj.into())?;
        println!("optimum {}", report.score);
        println!("polygon_area2 {}", report.polygon_area2);
        println!("cycle {}", cycle.iter().map(u32::to_string).collect::<Vec<_>>().join(" "));
        return Ok(());
    }
    let Some(path) = a.solution else { bail!("a solution file is required unless --brute-force is given") };
    let sol = read_solution(&path).with_context(|| format!("reading {}", path.display()))?;
    let report = score_cycle(&inst, &sol.cycle)?;
    println!("{}", report.score);
    if !report.simple || !report.uses_all_points {
        bail!("solution is not a simple polygon through every point");
    }
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> Result<()> {
    let inst = generate(a.n, a.distribution, a.seed)?;
    emit(a.out.as_deref(), &write_instance(&inst))
}

fn cmd_plot(a: PlotArgs) -> Result<()> {
    let inst = read_instance(&a.instance).with_context(|| format!("reading {}", a.instance.display()))?;
    let svg = match a.solution {
        Some(path) => {
            let sol = read_solution(&path).with_context(|| format!("reading {}", path.display()))?;
            if sol.cycle.is_empty() {
                plot::render(&inst, None, None)
            } else {
                let report = score_cycle(&inst, &sol.cycle)?;
                plot::render(&inst, Some(&sol.cycle), Some(report.score))
            }
        }
        None => plot::render(&inst, None, None),
    };
    emit(a.out.as_deref(), &svg)
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let jobs = match (&a.config, a.experiment) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            BenchConfig::parse(&text).and_then(|c| c.jobs()).map_err(anyhow::Error::msg)?
        }
        (None, Some(Experiment::AlphaSweep)) => bench::alpha_sweep(a.n, a.seed),
        (None, Some(Experiment::SigmaSweep)) => {
            bench::sigma_sweep(a.n, a.seed, a.obj.into(), &[0.1, 0.2, 0.3, 0.5], a.runs)
        }
        (None, Some(Experiment::Scaling)) => bench::scaling(&a.sizes, 1),
        (None, None) => bail!("give --config or --experiment"),
    };
    let records: Vec<BenchRecord> = bench::run_jobs(&jobs, &run::pool());
    let mut text = match a.format {
        Format::Jsonl => {
            let mut s = String::new();
            for r in &records {
                s.push_str(&serde_json::to_string(r)?);
                s.push('\n');
            }
            s
        }
        Format::Table => bench::table(&records),
    };
    if a.format == Format::Table && a.experiment == Some(Experiment::SigmaSweep) {
        text.push('\n');
        text.push_str(&bench::histogram(&records, 10));
    }
    emit(a.out.as_deref(), &text)?;
    let failed = records.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        eprintln!("{failed} of {} runs failed", records.len());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Verify { instance, solution } => cmd_verify(&instance, &solution),
        Command::Score(a) => cmd_score(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Plot(a) => cmd_plot(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
