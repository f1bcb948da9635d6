//! Benchmark harness: runs the pipeline over instances and parameter grids
//! and emits one [`BenchRecord`] per run.
//!
//! Jobs run concurrently on the [`crate::run::pool`]; each job is sequential
//! and records come back in job order.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use polyg_core::greedy::run_greedy;
use polyg_core::localsearch::run_local_search;
use polyg_core::{Hood, Instance, Objective, SolveParams, WeightVariant};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::format::{objective_name, parse_objective, read_instance};
use crate::generate::{generate, Distribution};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub name: String,
    pub n: usize,
    pub objective: String,
    /// `1 / alpha`; `null` when alpha is 0.
    pub pen: Option<f64>,
    pub alpha: f64,
    pub hops: usize,
    pub hood: String,
    pub sigma: f64,
    pub seed: u64,
    pub weight_variant: String,
    pub greedy_ms: f64,
    pub ls_ms: f64,
    pub total_ms: f64,
    pub greedy_score: f64,
    pub final_score: f64,
    pub error: Option<String>,
}

impl BenchRecord {
    /// True when local search did not make the score worse.
    pub fn monotone(&self) -> bool {
        match self.objective.as_str() {
            "min" => self.final_score <= self.greedy_score,
            _ => self.final_score >= self.greedy_score,
        }
    }
}

pub fn hood_name(h: Hood) -> String {
    match h {
        Hood::Cells(k) => k.to_string(),
        Hood::Infinite => "inf".to_string(),
    }
}

pub fn parse_hood(s: &str) -> Result<Hood, String> {
    match s {
        "inf" | "infinite" => Ok(Hood::Infinite),
        _ => s.parse().map(Hood::Cells).map_err(|_| format!("invalid hood `{s}`, expected a cell count or `inf`")),
    }
}

/// Parses `pen = 1 / alpha`; `inf` means no penalty.
pub fn parse_pen(s: &str) -> Result<f64, String> {
    let pen: f64 = s.parse().map_err(|_| format!("invalid pen `{s}`"))?;
    if pen.is_nan() || pen <= 0.0 {
        return Err(format!("pen must be positive, got `{s}`"));
    }
    Ok(1.0 / pen)
}

pub fn variant_name(v: WeightVariant) -> &'static str {
    match v {
        WeightVariant::Minus => "minus",
        WeightVariant::Plus => "plus",
    }
}

pub fn parse_variant(s: &str) -> Result<WeightVariant, String> {
    match s {
        "minus" => Ok(WeightVariant::Minus),
        "plus" => Ok(WeightVariant::Plus),
        _ => Err(format!("invalid weight variant `{s}`, expected `minus` or `plus`")),
    }
}

/// One pipeline run.
#[derive(Clone, Debug)]
pub struct Job {
    pub instance: Arc<Instance>,
    pub params: SolveParams,
}

pub fn run_job(job: &Job) -> BenchRecord {
    let p = &job.params;
    let mut rec = BenchRecord {
        name: job.instance.name.clone(),
        n: job.instance.len(),
        objective: objective_name(p.objective).to_string(),
        pen: (p.alpha > 0.0).then(|| 1.0 / p.alpha),
        alpha: p.alpha,
        hops: p.hops,
        hood: hood_name(p.hood),
        sigma: p.sigma,
        seed: p.seed,
        weight_variant: variant_name(p.weight_variant).to_string(),
        greedy_ms: 0.0,
        ls_ms: 0.0,
        total_ms: 0.0,
        greedy_score: 0.0,
        final_score: 0.0,
        error: None,
    };
    let start = Instant::now();
    let hull = match job.instance.hull_area2() {
        Ok(h) => h,
        Err(e) => {
            rec.error = Some(e.to_string());
            return rec;
        }
    };
    let greedy = match run_greedy(&job.instance, p) {
        Ok(g) => g,
        Err(e) => {
            rec.error = Some(e.to_string());
            rec.greedy_ms = ms(start);
            rec.total_ms = rec.greedy_ms;
            return rec;
        }
    };
    rec.greedy_ms = ms(start);
    rec.greedy_score = greedy.polygon.area2().abs() as f64 / hull as f64;
    let ls_start = Instant::now();
    let ls = run_local_search(&job.instance, greedy.polygon, hull, p);
    rec.ls_ms = ms(ls_start);
    rec.total_ms = ms(start);
    rec.final_score = ls.polygon.area2().abs() as f64 / hull as f64;
    rec
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1000.0
}

pub fn run_jobs(jobs: &[Job], pool: &rayon::ThreadPool) -> Vec<BenchRecord> {
    pool.install(|| jobs.par_iter().map(run_job).collect())
}

/// Penalty sensitivity: every penalty in {1/10, 1/30, 1/90, 1/270} with both
/// weight variants on one uniform instance, maximizing.
pub fn alpha_sweep(n: usize, seed: u64) -> Vec<Job> {
    let instance = Arc::new(generate(n, Distribution::Uniform, seed).expect("n >= 3"));
    let mut jobs = Vec::new();
    for variant in [WeightVariant::Minus, WeightVariant::Plus] {
        for pen in [10.0, 30.0, 90.0, 270.0] {
            let params = SolveParams { alpha: 1.0 / pen, weight_variant: variant, seed, ..Default::default() };
            jobs.push(Job { instance: Arc::clone(&instance), params });
        }
    }
    jobs
}

/// Repeated noisy runs on one instance for each sigma, seeds `0..runs`.
pub fn sigma_sweep(n: usize, seed: u64, objective: Objective, sigmas: &[f64], runs: u64) -> Vec<Job> {
    let instance = Arc::new(generate(n, Distribution::Uniform, seed).expect("n >= 3"));
    let mut jobs = Vec::new();
    for &sigma in sigmas {
        for s in 0..runs {
            let params = SolveParams { sigma, seed: s, ..SolveParams::new(objective) };
            jobs.push(Job { instance: Arc::clone(&instance), params });
        }
    }
    jobs
}

/// Default MAX solves on uniform instances of each size.
pub fn scaling(sizes: &[usize], seeds: u64) -> Vec<Job> {
    let mut jobs = Vec::new();
    for &n in sizes {
        for seed in 0..seeds {
            let instance = Arc::new(generate(n, Distribution::Uniform, seed).expect("n >= 3"));
            jobs.push(Job { instance, params: SolveParams { seed, ..Default::default() } });
        }
    }
    jobs
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Counts of final scores per sigma in `bins` equal buckets spanning the
/// observed range.
pub fn histogram(records: &[BenchRecord], bins: usize) -> String {
    let ok: Vec<&BenchRecord> = records.iter().filter(|r| r.error.is_none()).collect();
    let mut out = String::new();
    if ok.is_empty() || bins == 0 {
        return out;
    }
    let lo = ok.iter().map(|r| r.final_score).fold(f64::INFINITY, f64::min);
    let hi = ok.iter().map(|r| r.final_score).fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::EPSILON);
    let mut sigmas: Vec<f64> = ok.iter().map(|r| r.sigma).collect();
    sigmas.sort_by(f64::total_cmp);
    sigmas.dedup();
    for sigma in sigmas {
        writeln!(out, "sigma {sigma}").unwrap();
        let mut counts = vec![0usize; bins];
        for r in ok.iter().filter(|r| r.sigma == sigma) {
            let b = (((r.final_score - lo) / width) as usize).min(bins - 1);
            counts[b] += 1;
        }
        for (b, c) in counts.iter().enumerate() {
            let from = lo + b as f64 * width;
            writeln!(out, "  [{from:.5}, {:.5}) {c:4} {}", from + width, "#".repeat(*c)).unwrap();
        }
    }
    out
}

/// Fixed-width table of records.
pub fn table(records: &[BenchRecord]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<24} {:>7} {:>4} {:>6} {:>4} {:>4} {:>5} {:>6} {:>10} {:>10} {:>8} {:>8}",
        "name", "n", "obj", "pen", "hops", "hood", "sigma", "var", "greedy_ms", "ls_ms", "greedy", "final"
    )
    .unwrap();
    for r in records {
        let pen = r.pen.map_or("inf".to_string(), |p| format!("{p}"));
        write!(
            out,
            "{:<24} {:>7} {:>4} {:>6} {:>4} {:>4} {:>5} {:>6} {:>10.1} {:>10.1} {:>8.5} {:>8.5}",
            r.name,
            r.n,
            r.objective,
            pen,
            r.hops,
            r.hood,
            r.sigma,
            r.weight_variant,
            r.greedy_ms,
            r.ls_ms,
            r.greedy_score,
            r.final_score
        )
        .unwrap();
        if let Some(e) = &r.error {
            write!(out, "  error: {e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// TOML harness configuration: instances crossed with a parameter grid.
///
/// ```toml
/// files = ["data/a.txt"]
///
/// [[generate]]
/// n = 500
/// seeds = [0, 1, 2]
///
/// [grid]
/// objective = ["max", "min"]
/// pen = [30, 90]
/// hood = ["2", "inf"]
/// ```
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub files: Vec<PathBuf>,
    #[serde(default)]
    pub generate: Vec<GenerateSpec>,
    #[serde(default)]
    pub grid: ParamGrid,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateSpec {
    pub n: usize,
    #[serde(default = "uniform")]
    pub distribution: String,
    #[serde(default = "zero")]
    pub seeds: Vec<u64>,
}

fn uniform() -> String {
    "uniform".into()
}

fn zero() -> Vec<u64> {
    vec![0]
}

/// Every field is a list; runs cover the cartesian product. An empty `hood`
/// list keeps the solver default, which searches everything on small inputs.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamGrid {
    pub objective: Vec<String>,
    pub pen: Vec<f64>,
    pub hops: Vec<usize>,
    pub hood: Vec<String>,
    pub sigma: Vec<f64>,
    pub weight_variant: Vec<String>,
    pub seed: Vec<u64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        ParamGrid {
            objective: vec!["max".into()],
            pen: vec![90.0],
            hops: vec![10],
            hood: Vec::new(),
            sigma: vec![0.0],
            weight_variant: vec!["minus".into()],
            seed: vec![0],
        }
    }
}

impl ParamGrid {
    pub fn params(&self) -> Result<Vec<SolveParams>, String> {
        let mut out = Vec::new();
        for o in &self.objective {
            let objective = parse_objective(o).ok_or_else(|| format!("invalid objective `{o}`"))?;
            for &pen in &self.pen {
                let alpha = parse_pen(&pen.to_string())?;
                for &hops in &self.hops {
                    let hoods: Vec<Option<Hood>> = if self.hood.is_empty() {
                        vec![None]
                    } else {
                        self.hood.iter().map(|h| parse_hood(h).map(Some)).collect::<Result<_, _>>()?
                    };
                    for hood in hoods {
                        for &sigma in &self.sigma {
                            for v in &self.weight_variant {
                                let weight_variant = parse_variant(v)?;
                                for &seed in &self.seed {
                                    let params = SolveParams {
                                        alpha,
                                        hops,
                                        hood: hood.unwrap_or(Hood::Cells(2)),
                                        hood_pinned: hood.is_some(),
                                        sigma,
                                        objective,
                                        seed,
                                        weight_variant,
                                        ..Default::default()
                                    };
                                    params.validate().map_err(|e| e.to_string())?;
                                    out.push(params);
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<BenchConfig, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn jobs(&self) -> Result<Vec<Job>, String> {
        let mut instances = Vec::new();
        for f in &self.files {
            instances.push(Arc::new(read_instance(f).map_err(|e| format!("{}: {e}", f.display()))?));
        }
        for g in &self.generate {
            let dist = match g.distribution.as_str() {
                "uniform" => Distribution::Uniform,
                "clustered" => Distribution::Clustered,
                d => return Err(format!("invalid distribution `{d}`")),
            };
            for &seed in &g.seeds {
                instances.push(Arc::new(generate(g.n, dist, seed).map_err(|e| e.to_string())?));
            }
        }
        let params = self.grid.params()?;
        let mut jobs = Vec::new();
        for inst in &instances {
            for p in &params {
                jobs.push(Job { instance: Arc::clone(inst), params: p.clone() });
            }
        }
        Ok(jobs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let s = loglog_slope(&[(1000.0, 2.0), (2000.0, 8.0), (4000.0, 32.0)]);
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn config_grid() {
        let cfg = BenchConfig::parse(
            "[[generate]]\nn = 40\nseeds = [1, 2]\n[grid]\nobjective = [\"max\", \"min\"]\npen = [inf, 90]\nhood = [\"inf\"]\n",
        )
        .unwrap();
        let jobs = cfg.jobs().unwrap();
        assert_eq!(jobs.len(), 8);
        assert_eq!(jobs[0].params.alpha, 0.0);
        assert_eq!(jobs[0].params.hood, Hood::Infinite);
        assert!(BenchConfig::parse("bogus = 1\n").is_err());
        let bad =
            BenchConfig { grid: ParamGrid { hood: vec!["x".into()], ..Default::default() }, ..Default::default() };
        assert!(bad.jobs().is_err());
    }

    #[test]
    fn names_round_trip() {
        for h in [Hood::Cells(3), Hood::Infinite] {
            assert_eq!(parse_hood(&hood_name(h)), Ok(h));
        }
        for v in [WeightVariant::Minus, WeightVariant::Plus] {
            assert_eq!(parse_variant(variant_name(v)), Ok(v));
        }
        assert_eq!(parse_pen("inf"), Ok(0.0));
        assert!(parse_pen("0").is_err());
        assert!(parse_pen("-3").is_err());
    }

    #[test]
    fn histogram_counts_every_run() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        let recs = run_jobs(&sigma_sweep(60, 1, Objective::Max, &[0.1, 0.3], 3), &pool);
        let h = histogram(&recs, 4);
        assert_eq!(h.lines().filter(|l| l.starts_with("sigma")).count(), 2);
        let total: usize = h
            .lines()
            .filter(|l| l.starts_with("  ["))
            .map(|l| l.split_whitespace().nth(2).unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(total, 6);
    }
}
