//! The `linkprop` command line.
//!
//! Every setting can come from a flag or from a flat `key = value` config
//! file passed with `--config`; flags win over the file, the file wins over
//! defaults. Config keys are the flag names with `-` replaced by `_`.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::classify::{self, Population};
use crate::error::{Error, Result};
use crate::evaluation::{self, GroundTruth, DEFAULT_K_GRID};
use crate::graph::{self, BipartiteGraph, ClusterMap, HostingExceptions, IngestOptions};
use crate::io;
use crate::propagation::{self, PropagationConfig, SeedLabels};
use crate::synth::{self, PlantedParams};

pub const SNAPSHOT_FILE: &str = "graph.snapshot";
pub const SUMMARY_FILE: &str = "ingest_summary.txt";
pub const SCORES_FILE: &str = "scores.tsv";
pub const TRACE_FILE: &str = "trace.tsv";
pub const VERDICTS_FILE: &str = "verdicts.tsv";
pub const REPORT_FILE: &str = "report.txt";
pub const CURVE_FILE: &str = "pr_curve.tsv";
pub const SWEEP_FILE: &str = "sweep.tsv";
pub const EDGES_FILE: &str = "edges.tsv";
pub const SEEDS_FILE: &str = "seeds.tsv";
pub const TRUTH_FILE: &str = "truth.tsv";

const CONFIG_KEYS: &[&str] = &[
    "edges", "clusters", "exceptions", "seeds", "truth", "snapshot", "scores", "out_dir",
    "min_area", "alpha", "iterations", "tolerance", "epsilon", "k", "population", "k_grid",
    "match_grid", "n_grid", "alpha_grid", "objective", "adult_sites", "decent_sites",
    "adult_images", "decent_images", "p_in", "p_out", "label_noise", "rng_seed", "edge_cap",
];

#[derive(Debug, Parser)]
#[command(name = "linkprop", version, about = "Label propagation over site-image link graphs")]
pub struct Cli {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a graph snapshot from an edge file.
    Ingest(IngestArgs),
    /// Propagate seed labels; writes scores and an iteration trace.
    Propagate(PropagateArgs),
    /// Rank scored vertices and label the top k fraction adult.
    Classify(ClassifyArgs),
    /// Precision/recall, PR curve and baseline comparison against ground truth.
    Evaluate(EvaluateArgs),
    /// Generate a planted-partition dataset.
    Gen(GenArgs),
    /// Evaluate a grid of (iterations, alpha, k) settings.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory (default: current directory).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Edge file: `site_url<TAB>image_key[<TAB>width<TAB>height]`.
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Cluster map: `image_key<TAB>cluster_id`.
    #[arg(long)]
    clusters: Option<PathBuf>,
    /// Hosting exceptions, one domain per line.
    #[arg(long)]
    exceptions: Option<PathBuf>,
    /// Images with a known pixel area below this are dropped.
    #[arg(long)]
    min_area: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct GraphInputArgs {
    /// Graph snapshot (default: <out-dir>/graph.snapshot).
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Site seed labels: `site<TAB>adult|decent`.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Hosting exceptions used to normalize seed site keys.
    #[arg(long)]
    exceptions: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Propagation weight in (0, 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of propagation iterations.
    #[arg(long)]
    iterations: Option<usize>,
    /// Stop once an update norm falls to this value.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Ranking smoother.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Fraction of the population labeled adult.
    #[arg(long)]
    k: Option<f64>,
    /// `images` or `all`.
    #[arg(long)]
    population: Option<String>,
}

#[derive(Debug, Args)]
struct PropagateArgs {
    #[command(flatten)]
    input: GraphInputArgs,
    #[command(flatten)]
    model: ModelArgs,
    /// Also record the objective per iteration.
    #[arg(long)]
    objective: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    /// Graph snapshot (default: <out-dir>/graph.snapshot).
    #[arg(long)]
    snapshot: Option<PathBuf>,
    /// Score file (default: <out-dir>/scores.tsv).
    #[arg(long)]
    scores: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct EvalInputArgs {
    /// Image ground truth: `image_key<TAB>adult|decent`.
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Cluster map used to resolve ground-truth image keys.
    #[arg(long)]
    clusters: Option<PathBuf>,
    /// Comma-separated k values for the PR curve.
    #[arg(long)]
    k_grid: Option<String>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[command(flatten)]
    input: GraphInputArgs,
    #[command(flatten)]
    eval: EvalInputArgs,
    /// Comma-separated k values searched for the baseline's precision.
    #[arg(long)]
    match_grid: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: GraphInputArgs,
    #[command(flatten)]
    eval: EvalInputArgs,
    /// Iteration counts: comma list or inclusive range `a..b`.
    #[arg(long)]
    n_grid: Option<String>,
    /// Comma-separated alpha values.
    #[arg(long)]
    alpha_grid: Option<String>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Sites in the adult community.
    #[arg(long)]
    adult_sites: Option<usize>,
    /// Sites in the decent community.
    #[arg(long)]
    decent_sites: Option<usize>,
    /// Images in the adult community.
    #[arg(long)]
    adult_images: Option<usize>,
    /// Images in the decent community.
    #[arg(long)]
    decent_images: Option<usize>,
    /// Within-community edge probability.
    #[arg(long)]
    p_in: Option<f64>,
    /// Cross-community edge probability.
    #[arg(long)]
    p_out: Option<f64>,
    /// Probability a site's seed label is flipped.
    #[arg(long)]
    label_noise: Option<f64>,
    /// Generator seed.
    #[arg(long)]
    rng_seed: Option<u64>,
    /// Refuse instances whose expected edge count exceeds this.
    #[arg(long)]
    edge_cap: Option<u64>,
    #[command(flatten)]
    out: OutArgs,
}

/// Resolved settings: flag, then config file, then default.
struct Settings {
    file: HashMap<String, String>,
    path: Option<PathBuf>,
}

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self> {
        let mut file = HashMap::new();
        if let Some(path) = path {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(Error::parse(path, n + 1, "expected `key = value`"));
                };
                let key = key.trim().replace('-', "_");
                if !CONFIG_KEYS.contains(&key.as_str()) {
                    return Err(Error::parse(path, n + 1, format!("unknown config key `{key}`")));
                }
                file.insert(key, value.trim().to_string());
            }
        }
        Ok(Self {
            file,
            path: path.map(Path::to_path_buf),
        })
    }

    fn get<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse().map(Some).map_err(|e| {
                Error::InvalidParameter(format!(
                    "config key `{key}` in {}: {e}",
                    self.path.as_deref().unwrap_or(Path::new("?")).display()
                ))
            }),
        }
    }

    fn or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }

    fn out_dir(&self, out: &OutArgs) -> Result<PathBuf> {
        let dir = self.or(out.out_dir.clone(), "out_dir", PathBuf::from("."))?;
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(dir)
    }

    /// An input path that must exist.
    fn input(&self, flag: Option<PathBuf>, key: &str) -> Result<Option<PathBuf>> {
        let path = self.get(flag, key)?;
        match path {
            Some(p) if !p.is_file() => Err(Error::InvalidParameter(format!(
                "input `{key}` does not exist: {}",
                p.display()
            ))),
            other => Ok(other),
        }
    }

    fn required(&self, flag: Option<PathBuf>, key: &str) -> Result<PathBuf> {
        self.input(flag, key)?
            .ok_or_else(|| Error::InvalidParameter(format!("missing required input `{key}`")))
    }

    fn input_or(&self, flag: Option<PathBuf>, key: &str, default: PathBuf) -> Result<PathBuf> {
        let path = self.get(flag, key)?.unwrap_or(default);
        if path.is_file() {
            Ok(path)
        } else {
            Err(Error::InvalidParameter(format!(
                "input `{key}` does not exist: {}",
                path.display()
            )))
        }
    }

    fn model(&self, m: &ModelArgs) -> Result<(PropagationConfig, Population)> {
        let cfg = PropagationConfig {
            alpha: self.or(m.alpha, "alpha", propagation::DEFAULT_ALPHA)?,
            iterations: self.or(m.iterations, "iterations", propagation::DEFAULT_ITERATIONS)?,
            residual_tolerance: self.get(m.tolerance, "tolerance")?,
            epsilon: self.or(m.epsilon, "epsilon", propagation::DEFAULT_EPSILON)?,
            k: self.or(m.k, "k", propagation::DEFAULT_K)?,
        };
        cfg.validate()?;
        let population = self
            .or(m.population.clone(), "population", "images".to_string())?
            .parse()?;
        Ok((cfg, population))
    }

    fn exceptions(&self, flag: Option<PathBuf>) -> Result<HostingExceptions> {
        match self.input(flag, "exceptions")? {
            Some(path) => io::read_exceptions(&path),
            None => Ok(HostingExceptions::new()),
        }
    }

    fn clusters(&self, flag: Option<PathBuf>) -> Result<Option<ClusterMap>> {
        self.input(flag, "clusters")?
            .map(|p| io::read_cluster_map(&p))
            .transpose()
    }

    fn f64_grid(&self, flag: Option<String>, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.get(flag, key)? {
            None => Ok(default.to_vec()),
            Some(raw) => parse_list(&raw, key),
        }
    }
}

fn parse_list<T>(raw: &str, key: &str) -> Result<Vec<T>>
where
    T: FromStr,
{
    let values: Vec<T> = raw
        .split(',')
        .map(|v| v.trim().parse::<T>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::InvalidParameter(format!("`{key}` must be a comma-separated list, got {raw:?}")))?;
    if values.is_empty() {
        return Err(Error::InvalidParameter(format!("`{key}` is empty")));
    }
    Ok(values)
}

/// `"1..30"` (inclusive) or `"1,5,10"`.
fn parse_counts(raw: &str, key: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = raw.split_once("..") {
        let bound = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad range {raw:?} for `{key}`")))
        };
        let (lo, hi) = (bound(lo)?, bound(hi)?);
        if lo > hi {
            return Err(Error::InvalidParameter(format!("empty range {raw:?} for `{key}`")));
        }
        return Ok((lo..=hi).collect());
    }
    parse_list(raw, key)
}

struct Inputs {
    graph: BipartiteGraph,
    seeds: SeedLabels,
}

fn load_inputs(settings: &Settings, input: &GraphInputArgs, out_dir: &Path) -> Result<Inputs> {
    let snapshot = settings.input_or(input.snapshot.clone(), "snapshot", out_dir.join(SNAPSHOT_FILE))?;
    let seeds_path = settings.required(input.seeds.clone(), "seeds")?;
    let exceptions = settings.exceptions(input.exceptions.clone())?;
    let graph = io::load_snapshot(&snapshot)?;
    let mut labels = Vec::new();
    for (key, label) in io::read_labels(&seeds_path)? {
        let key = graph::normalize_site_url(&key, &exceptions)?;
        labels.push((key.into_string(), label));
    }
    let (seeds, unknown) = SeedLabels::from_site_labels(&graph, labels.iter().map(|(k, l)| (k.as_str(), *l)));
    if unknown > 0 {
        eprintln!("seed_sites_not_in_graph={unknown}");
    }
    Ok(Inputs { graph, seeds })
}

fn load_truth(settings: &Settings, eval: &EvalInputArgs) -> Result<GroundTruth> {
    let truth = io::read_truth(&settings.required(eval.truth.clone(), "truth")?)?;
    Ok(match settings.clusters(eval.clusters.clone())? {
        Some(map) => truth.with_clusters(map),
        None => truth,
    })
}

fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut std::io::BufWriter<fs::File>) -> std::io::Result<()>,
{
    let mut w = io::create(path)?;
    body(&mut w).map_err(|e| Error::io(path, e))
}

fn cmd_ingest(settings: &Settings, args: IngestArgs) -> Result<()> {
    let edges = settings.required(args.edges, "edges")?;
    let options = IngestOptions {
        exceptions: settings.exceptions(args.exceptions)?,
        clusters: settings.clusters(args.clusters)?.unwrap_or_default(),
        min_area: settings.or(args.min_area, "min_area", graph::DEFAULT_MIN_AREA)?,
    };
    let out_dir = settings.out_dir(&args.out)?;
    let (graph, mut summary) = io::ingest_edge_file(&edges, &options)?;
    if summary.records_read == 0 {
        return Err(Error::EmptyInput(format!("no records in {}", edges.display())));
    }
    let pruned = graph::drop_imageless_sites(&graph);
    summary.imageless_sites_dropped = (graph.site_count() - pruned.site_count()) as u64;
    summary.record_graph(&pruned);
    pruned.check_invariants()?;
    if pruned.edge_count() == 0 {
        return Err(Error::EmptyInput(format!("no usable edges in {}", edges.display())));
    }
    io::save_snapshot(&out_dir.join(SNAPSHOT_FILE), &pruned)?;
    write_file(&out_dir.join(SUMMARY_FILE), |w| {
        use std::io::Write;
        writeln!(w, "{summary}")
    })?;
    eprintln!("{summary}");
    Ok(())
}

fn cmd_propagate(settings: &Settings, args: PropagateArgs) -> Result<()> {
    let out_dir = settings.out_dir(&args.out)?;
    let inputs = load_inputs(settings, &args.input, &out_dir)?;
    let (cfg, _) = settings.model(&args.model)?;
    let with_objective = args.objective || settings.or(None, "objective", false)?;
    let (scores, trace) = if with_objective {
        propagation::propagate_with_objective(&inputs.graph, &inputs.seeds, &cfg)?
    } else {
        propagation::propagate(&inputs.graph, &inputs.seeds, &cfg)?
    };
    write_file(&out_dir.join(SCORES_FILE), |w| io::write_scores(w, &inputs.graph, &scores))?;
    write_file(&out_dir.join(TRACE_FILE), |w| io::write_trace(w, &trace))?;
    eprintln!("iterations={}", trace.len());
    Ok(())
}

fn cmd_classify(settings: &Settings, args: ClassifyArgs) -> Result<()> {
    let out_dir = settings.out_dir(&args.out)?;
    let snapshot = settings.input_or(args.snapshot, "snapshot", out_dir.join(SNAPSHOT_FILE))?;
    let scores_path = settings.input_or(args.scores, "scores", out_dir.join(SCORES_FILE))?;
    let (cfg, population) = settings.model(&args.model)?;
    let graph = io::load_snapshot(&snapshot)?;
    let scores = io::read_scores(&scores_path, &graph)?;
    let ranked = classify::rank(&scores, &population.vertices(&graph), cfg.epsilon)?;
    let verdicts = classify::classify_top_k(&ranked, cfg.k)?;
    write_file(&out_dir.join(VERDICTS_FILE), |w| io::write_verdicts(w, &graph, &ranked, &verdicts))?;
    eprintln!(
        "population={} adult={}",
        ranked.len(),
        classify::adult_count(ranked.len(), cfg.k)
    );
    Ok(())
}

fn cmd_evaluate(settings: &Settings, args: EvaluateArgs) -> Result<()> {
    let out_dir = settings.out_dir(&args.out)?;
    let inputs = load_inputs(settings, &args.input, &out_dir)?;
    let truth = load_truth(settings, &args.eval)?;
    let (cfg, population) = settings.model(&args.model)?;
    let k_grid = settings.f64_grid(args.eval.k_grid, "k_grid", &DEFAULT_K_GRID)?;
    let match_grid = settings.f64_grid(args.match_grid, "match_grid", &evaluation::fine_k_grid())?;

    let (scores, _) = propagation::propagate(&inputs.graph, &inputs.seeds, &cfg)?;
    let at_k = evaluation::pr_sweep(&inputs.graph, &scores, population, &truth, &[cfg.k], cfg.epsilon)?[0];
    let curve = evaluation::pr_sweep(&inputs.graph, &scores, population, &truth, &k_grid, cfg.epsilon)?;
    let cmp = evaluation::compare_to_baseline(&inputs.graph, &inputs.seeds, &truth, &cfg, population, &match_grid)?;

    let report = render_report(&cfg, population, &at_k, &cmp);
    fs::write(out_dir.join(REPORT_FILE), &report).map_err(|e| Error::io(out_dir.join(REPORT_FILE), e))?;
    write_file(&out_dir.join(CURVE_FILE), |w| io::write_curve(w, &curve))?;
    eprint!("{report}");
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(io::fmt_f64).unwrap_or_else(|| "NA".into())
}

fn render_report(
    cfg: &PropagationConfig,
    population: Population,
    at_k: &evaluation::SweepPoint,
    cmp: &evaluation::BaselineComparison,
) -> String {
    let counts = |prefix: &str, r: &evaluation::EvalReport| {
        format!(
            "{prefix}_tp={}\n{prefix}_fp={}\n{prefix}_fn={}\n{prefix}_tn={}\n{prefix}_precision={}\n{prefix}_recall={}\n",
            r.true_positives,
            r.false_positives,
            r.false_negatives,
            r.true_negatives,
            opt(r.precision),
            opt(r.recall)
        )
    };
    let mut out = format!(
        "alpha={}\niterations={}\nepsilon={}\nk={}\npopulation={}\n",
        cfg.alpha,
        cfg.iterations,
        cfg.epsilon,
        cfg.k,
        population.as_str()
    );
    out += &counts("propagation", &at_k.report);
    out += &counts("baseline", &cmp.baseline);
    out += &format!("matched_k={}\n", cmp.matched.k);
    out += &counts("matched", &cmp.matched.report);
    out += &format!(
        "recall_delta={}\nrelative_recall_gain={}\n",
        io::fmt_f64(cmp.recall_delta),
        opt(cmp.relative_recall_gain)
    );
    out
}

fn cmd_gen(settings: &Settings, args: GenArgs) -> Result<()> {
    let d = PlantedParams::default();
    let params = PlantedParams {
        adult_sites: settings.or(args.adult_sites, "adult_sites", d.adult_sites)?,
        decent_sites: settings.or(args.decent_sites, "decent_sites", d.decent_sites)?,
        adult_images: settings.or(args.adult_images, "adult_images", d.adult_images)?,
        decent_images: settings.or(args.decent_images, "decent_images", d.decent_images)?,
        p_in: settings.or(args.p_in, "p_in", d.p_in)?,
        p_out: settings.or(args.p_out, "p_out", d.p_out)?,
        label_noise: settings.or(args.label_noise, "label_noise", d.label_noise)?,
        rng_seed: settings.or(args.rng_seed, "rng_seed", d.rng_seed)?,
        edge_cap: settings.or(args.edge_cap, "edge_cap", d.edge_cap)?,
    };
    let out_dir = settings.out_dir(&args.out)?;
    let inst = synth::generate(&params)?;
    write_dataset(&out_dir, &inst)?;
    eprintln!(
        "sites={} images={} edges={}",
        inst.graph.site_count(),
        inst.graph.image_count(),
        inst.graph.edge_count()
    );
    Ok(())
}

/// Writes `edges.tsv`, `seeds.tsv` and `truth.tsv` for a generated instance.
pub fn write_dataset(dir: &Path, inst: &synth::PlantedInstance) -> Result<()> {
    let g = &inst.graph;
    write_file(&dir.join(EDGES_FILE), |w| {
        use std::io::Write;
        for (s, i) in g.edges() {
            writeln!(w, "{}\t{}", g.site_keys()[s], g.image_keys()[i])?;
        }
        w.flush()
    })?;
    let seeds = (0..g.site_count()).filter_map(|s| {
        let label = match inst.seeds.get(g.site_vertex(s)) {
            propagation::Seed::Adult => classify::Label::Adult,
            propagation::Seed::Decent => classify::Label::Decent,
            propagation::Seed::Unlabeled => return None,
        };
        Some((g.site_keys()[s].as_str(), label))
    });
    write_file(&dir.join(SEEDS_FILE), |w| io::write_labels(w, seeds))?;
    write_file(&dir.join(TRUTH_FILE), |w| io::write_labels(w, inst.truth.iter()))
}

fn cmd_sweep(settings: &Settings, args: SweepArgs) -> Result<()> {
    let out_dir = settings.out_dir(&args.out)?;
    let inputs = load_inputs(settings, &args.input, &out_dir)?;
    let truth = load_truth(settings, &args.eval)?;
    let (base, population) = settings.model(&args.model)?;
    let n_grid = match settings.get(args.n_grid, "n_grid")? {
        Some(raw) => parse_counts(&raw, "n_grid")?,
        None => vec![base.iterations],
    };
    let alpha_grid = settings.f64_grid(args.alpha_grid, "alpha_grid", &[base.alpha])?;
    let k_grid = settings.f64_grid(args.eval.k_grid, "k_grid", &[base.k])?;
    if n_grid.contains(&0) {
        return Err(Error::InvalidParameter("`n_grid` values must be at least 1".into()));
    }

    let rows = sweep(&inputs.graph, &inputs.seeds, &truth, &base, population, &n_grid, &alpha_grid, &k_grid)?;
    write_file(&out_dir.join(SWEEP_FILE), |w| {
        use std::io::Write;
        writeln!(w, "# n\talpha\tk\tprecision\trecall\ttp\tfp\tfn\ttn")?;
        for r in &rows {
            let rep = &r.point.report;
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.iterations,
                r.alpha,
                r.point.k,
                opt(rep.precision),
                opt(rep.recall),
                rep.true_positives,
                rep.false_positives,
                rep.false_negatives,
                rep.true_negatives
            )?;
        }
        w.flush()
    })?;
    eprintln!("grid_size={}", rows.len());
    Ok(())
}

/// One evaluated grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub iterations: usize,
    pub alpha: f64,
    pub point: evaluation::SweepPoint,
}

/// Evaluates every `(n, alpha, k)` combination. Each alpha is propagated once
/// up to the largest n, evaluating the intermediate iterates on the way.
#[allow(clippy::too_many_arguments)]
pub fn sweep(
    graph: &BipartiteGraph,
    seeds: &SeedLabels,
    truth: &GroundTruth,
    base: &PropagationConfig,
    population: Population,
    n_grid: &[usize],
    alpha_grid: &[f64],
    k_grid: &[f64],
) -> Result<Vec<SweepRow>> {
    let max_n = n_grid.iter().copied().max().unwrap_or(0);
    let mut rows = Vec::with_capacity(n_grid.len() * alpha_grid.len() * k_grid.len());
    for &alpha in alpha_grid {
        let cfg = PropagationConfig {
            alpha,
            iterations: max_n,
            residual_tolerance: None,
            ..*base
        };
        let mut by_n: HashMap<usize, Vec<evaluation::SweepPoint>> = HashMap::new();
        let mut failure = None;
        propagation::propagate_each(graph, seeds, &cfg, |n, scores| {
            if failure.is_none() && n_grid.contains(&n) {
                match evaluation::pr_sweep(graph, scores, population, truth, k_grid, cfg.epsilon) {
                    Ok(points) => {
                        by_n.insert(n, points);
                    }
                    Err(e) => failure = Some(e),
                }
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        for &n in n_grid {
            for &point in &by_n[&n] {
                rows.push(SweepRow {
                    iterations: n,
                    alpha,
                    point,
                });
            }
        }
    }
    Ok(rows)
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    dispatch(cli)
}

fn dispatch(cli: Cli) -> Result<()> {
    let settings = Settings::load(cli.config.as_deref())?;
    match cli.command {
        Command::Ingest(a) => cmd_ingest(&settings, a),
        Command::Propagate(a) => cmd_propagate(&settings, a),
        Command::Classify(a) => cmd_classify(&settings, a),
        Command::Evaluate(a) => cmd_evaluate(&settings, a),
        Command::Gen(a) => cmd_gen(&settings, a),
        Command::Sweep(a) => cmd_sweep(&settings, a),
    }
}

/// Entry point for the binary: 0 on success, 2 validation, 3 I/O, 4 numeric.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_grids() {
        assert_eq!(parse_counts("1..4", "n").unwrap(), [1, 2, 3, 4]);
        assert_eq!(parse_counts("5, 10", "n").unwrap(), [5, 10]);
        assert!(parse_counts("4..1", "n").is_err());
        assert!(parse_counts("a", "n").is_err());
        assert_eq!(parse_list::<f64>("0.2,0.4", "a").unwrap(), [0.2, 0.4]);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg");
        fs::write(&path, "alpha = 0.3\nalhpa = 0.4\n").unwrap();
        let err = Settings::load(Some(&path)).err().unwrap();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg");
        fs::write(&path, "# comment\nalpha = 0.3\nk-grid = 0.1,0.2\n").unwrap();
        let s = Settings::load(Some(&path)).unwrap();
        assert_eq!(s.or(Some(0.7), "alpha", 0.5).unwrap(), 0.7);
        assert_eq!(s.or(None, "alpha", 0.5).unwrap(), 0.3);
        assert_eq!(s.or(None, "epsilon", 0.001).unwrap(), 0.001);
        assert_eq!(s.f64_grid(None, "k_grid", &[]).unwrap(), [0.1, 0.2]);
        fs::write(&path, "alpha = lots\n").unwrap();
        let s = Settings::load(Some(&path)).unwrap();
        assert!(s.or::<f64>(None, "alpha", 0.5).is_err());
    }
}
