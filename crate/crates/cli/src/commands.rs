use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use annokit::confidence::score_pool;
use annokit::datamodel::{load_result, pool_to_jsonl, save_pool_binmat, save_pool_jsonl, save_result};
use annokit::metrics::synthetic::SyntheticSpec;
use annokit::metrics::{compute_report, run_trials, Metric, TrialOptions, TrialSummary};
use annokit::retrieval::{retrieve, ByteHeuristic};
use annokit::{
    build_knn_graph, run_selection, DataError, Demonstration, Error, Method, PoolFormat, PromptTemplate, Query,
    Result, RetrievalOptions, SelectionConfig,
};
use clap::Args;
use serde::{Deserialize, Serialize};

use crate::config::{PoolArgs, RunArgs, ScorerArgs};

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.into(), source }
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(io_err(Path::new("<stdout>")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Summary line: stderr when the payload itself went to stdout.
fn summary(to_stdout: bool, line: String) {
    if to_stdout {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

fn parse_metrics(list: &[String]) -> Result<Vec<Metric>> {
    list.iter()
        .map(|m| Metric::parse(m).ok_or_else(|| Error::config(format!("unknown metric {m:?}"))))
        .collect()
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub pool: PoolArgs,
}

pub fn ingest_validate(args: &ValidateArgs) -> Result<()> {
    let pool = args.pool.load()?;
    let labeled = pool.instances().iter().filter(|i| i.label.is_some()).count();
    let texts = pool.instances().iter().filter(|i| i.text.is_some()).count();
    println!("ok: {} instances, dim {}, {labeled} labeled, {texts} with text", pool.len(), pool.dim());
    Ok(())
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub pool: PoolArgs,
    /// Out-degree.
    #[arg(long, default_value_t = 150)]
    pub k: usize,
    /// Output file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Neighbor<'a> {
    id: &'a str,
    similarity: f64,
}

#[derive(Serialize)]
struct Node<'a> {
    id: &'a str,
    neighbors: Vec<Neighbor<'a>>,
}

#[derive(Serialize)]
struct GraphDump<'a> {
    k: usize,
    nodes: Vec<Node<'a>>,
}

pub fn graph(args: &GraphArgs) -> Result<()> {
    if args.k == 0 {
        return Err(Error::config("k must be ≥ 1"));
    }
    let pool = args.pool.load()?;
    let g = build_knn_graph(&pool, args.k);
    let dump = GraphDump {
        k: g.k(),
        nodes: (0..pool.len())
            .map(|v| Node {
                id: &pool.get(v).id,
                neighbors: g
                    .out_edges(v)
                    .iter()
                    .map(|e| Neighbor { id: &pool.get(e.target).id, similarity: e.similarity })
                    .collect(),
            })
            .collect(),
    };
    emit(args.out.as_deref(), &to_json(&dump))?;
    summary(args.out.is_some(), format!("graph: {} nodes, k = {}", pool.len(), g.k()));
    Ok(())
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Result file (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn select(args: &SelectArgs) -> Result<()> {
    let cfg = args.run.resolve()?;
    let scorer = cfg.scorer.build()?;
    let pool = cfg.pool.load()?;
    cfg.selection.validate(pool.len())?;
    let start = Instant::now();
    let result = run_selection(&pool, &cfg.selection, scorer.as_deref())?;
    let elapsed = start.elapsed();
    match &args.out {
        Some(p) => save_result(&result, p)?,
        None => emit(None, &(result.to_json() + "\n"))?,
    }
    summary(
        args.out.is_some(),
        format!(
            "{} M={} selected {} of {} in {:.3}s",
            result.method,
            cfg.selection.budget,
            result.selected.len(),
            pool.len(),
            elapsed.as_secs_f64()
        ),
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct RetrieveArgs {
    /// Annotated pool (labels and text required).
    #[command(flatten)]
    pub pool: PoolArgs,
    /// Restrict the annotated pool to the ids of this selection result.
    #[arg(long)]
    pub selection: Option<PathBuf>,
    /// Queries as JSONL: {"id", "embedding", "text"?}.
    #[arg(long)]
    pub queries: PathBuf,
    /// Prompt token budget.
    #[arg(long, default_value_t = annokit::retrieval::DEFAULT_TOKEN_BUDGET)]
    pub token_budget: usize,
    /// Cap on demonstrations per prompt.
    #[arg(long)]
    pub max_examples: Option<usize>,
    /// Prompt template (TOML or JSON).
    #[arg(long)]
    pub template: Option<PathBuf>,
    /// Output JSONL (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryLine {
    id: String,
    #[serde(default)]
    text: Option<String>,
    embedding: Vec<f64>,
}

fn read_queries(path: &Path) -> Result<Vec<QueryLine>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let q: QueryLine = serde_json::from_str(&line)
            .map_err(|e| DataError::Parse { line: n + 1, message: e.to_string() })?;
        out.push(q);
    }
    Ok(out)
}

pub fn retrieve_cmd(args: &RetrieveArgs) -> Result<()> {
    let template = match &args.template {
        Some(p) => PromptTemplate::load(p)?,
        None => PromptTemplate::default(),
    };
    template.validate()?;
    if args.max_examples == Some(0) {
        return Err(Error::config("max-examples must be ≥ 1"));
    }
    let options = RetrievalOptions {
        token_budget: args.token_budget,
        max_examples: args.max_examples,
        template,
    };
    let mut pool = args.pool.load()?;
    if let Some(sel) = &args.selection {
        let result = load_result(sel)?;
        pool = pool.select(&pool.positions(&result.selected)?);
    }
    let queries = read_queries(&args.queries)?;

    let mut lines = String::new();
    let mut admitted = 0;
    for q in &queries {
        let mut r = retrieve(&pool, &q.embedding, q.text.as_deref().unwrap_or(""), &options, &ByteHeuristic)
            .map_err(|e| match e {
                Error::Data(DataError::DimensionMismatch { expected, found, .. }) => {
                    DataError::DimensionMismatch { id: q.id.clone(), expected, found }.into()
                }
                Error::Data(DataError::ZeroNorm { .. }) => DataError::ZeroNorm { id: q.id.clone() }.into(),
                other => other,
            })?;
        r.query_id = Some(q.id.clone());
        admitted += r.demonstrations.len();
        lines.push_str(&serde_json::to_string(&r).expect("serializable"));
        lines.push('\n');
    }
    emit(args.out.as_deref(), &lines)?;
    summary(
        args.out.is_some(),
        format!("retrieved for {} queries, {admitted} demonstrations total", queries.len()),
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub pool: PoolArgs,
    /// Selection result whose ids serve as demonstrations; those ids are
    /// not scored.
    #[arg(long)]
    pub demos: Option<PathBuf>,
    #[command(flatten)]
    pub scorer: ScorerArgs,
    /// Confidence table output (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn score(args: &ScoreArgs) -> Result<()> {
    let scorer = args
        .scorer
        .build()?
        .ok_or_else(|| Error::config("no scorer given (use --scorer)"))?;
    let pool = args.pool.load()?;
    let demo_positions = match &args.demos {
        Some(p) => pool.positions(&load_result(p)?.selected)?,
        None => Vec::new(),
    };
    let strict = scorer.requires_labels();
    let mut demos = Vec::with_capacity(demo_positions.len());
    for &p in &demo_positions {
        let inst = pool.get(p);
        let (text, label) = match (inst.text.as_deref(), inst.label.as_deref()) {
            (Some(t), Some(l)) => (t, l),
            (None, _) if strict => return Err(DataError::MissingText { id: inst.id.clone() }.into()),
            (_, None) if strict => return Err(DataError::MissingLabel { id: inst.id.clone() }.into()),
            (t, l) => (t.unwrap_or(""), l.unwrap_or("")),
        };
        demos.push(Demonstration { id: &inst.id, input_text: text, output_text: label, embedding: pool.embedding(p) });
    }
    let queries: Vec<Query<'_>> = (0..pool.len())
        .filter(|p| !demo_positions.contains(p))
        .map(|p| Query::from_instance(pool.get(p)))
        .collect();
    let table = score_pool(scorer.as_ref(), &demos, &queries)?;
    match &args.out {
        Some(p) => table.save(p)?,
        None => emit(None, &to_json(&table))?,
    }
    summary(args.out.is_some(), format!("scored {} instances against {} demonstrations", table.len(), demos.len()));
    Ok(())
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub pool: PoolArgs,
    /// Selection result to evaluate.
    #[arg(long)]
    pub selection: PathBuf,
    /// Metrics to compute.
    #[arg(long, value_delimiter = ',', default_values_t = ["div_i".to_string(), "div_f".into(), "repr".into(), "cluster_coverage".into()])]
    pub metrics: Vec<String>,
    /// Report output (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn metrics(args: &MetricsArgs) -> Result<()> {
    let wanted = parse_metrics(&args.metrics)?;
    let pool = args.pool.load()?;
    let result = load_result(&args.selection)?;
    let positions = pool.positions(&result.selected)?;
    let report = compute_report(&pool, &positions, &wanted)?;
    emit(args.out.as_deref(), &to_json(&report))?;
    let parts: Vec<String> = wanted
        .iter()
        .filter_map(|&m| report.value(m).map(|v| format!("{}={v:.4}", m.as_str())))
        .collect();
    summary(args.out.is_some(), format!("{} M={}: {}", result.method, positions.len(), parts.join(" ")));
    Ok(())
}

#[derive(Debug, Args)]
pub struct TrialsArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Number of subsample-and-select repetitions.
    #[arg(long, default_value_t = 3)]
    pub trials: usize,
    /// Subsample size per trial.
    #[arg(long, default_value_t = 3000)]
    pub subsample_n: usize,
    /// Seed of trial 0; trial t uses base + t.
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    /// Metrics to summarize.
    #[arg(long, value_delimiter = ',', default_values_t = ["div_f".to_string(), "repr".into(), "cluster_coverage".into()])]
    pub metrics: Vec<String>,
    /// Budgets to sweep (replaces --budget).
    #[arg(long, value_delimiter = ',')]
    pub budgets: Vec<usize>,
    /// Methods to sweep (replaces --method).
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<String>,
    /// Summary JSON (default stdout). A single run writes one TrialSummary,
    /// a sweep writes an array.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Long-format CSV: budget,method,metric,mean,min,max.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

pub fn trials(args: &TrialsArgs) -> Result<()> {
    let metrics = parse_metrics(&args.metrics)?;
    let mut run = args.run.clone();
    // A sweep supplies method and budget itself.
    if run.method.is_none() {
        run.method = args.methods.first().cloned();
    }
    if run.budget.is_none() {
        run.budget = args.budgets.first().copied();
    }
    let cfg = run.resolve()?;
    let methods: Vec<Method> = if args.methods.is_empty() {
        vec![cfg.selection.method]
    } else {
        args.methods.iter().map(|m| m.parse()).collect::<Result<_>>()?
    };
    let budgets = if args.budgets.is_empty() { vec![cfg.selection.budget] } else { args.budgets.clone() };
    let configs: Vec<SelectionConfig> = budgets
        .iter()
        .flat_map(|&b| methods.iter().map(move |&m| (b, m)))
        .map(|(budget, method)| SelectionConfig { method, budget, ..cfg.selection.clone() })
        .collect();
    for c in &configs {
        c.validate(usize::MAX)?;
    }
    if configs.iter().any(|c| c.method.needs_scorer()) && cfg.scorer.scorer.is_none() {
        return Err(Error::config("a swept method needs a scorer (use --scorer)"));
    }
    let scorer = cfg.scorer.build()?;
    let pool = cfg.pool.load()?;
    let options = TrialOptions {
        trials: args.trials,
        subsample_n: args.subsample_n,
        base_seed: args.base_seed,
        metrics,
    };

    let start = Instant::now();
    let mut summaries: Vec<TrialSummary> = Vec::with_capacity(configs.len());
    for (i, c) in configs.iter().enumerate() {
        eprintln!("[{}/{}] {} M={}", i + 1, configs.len(), c.method, c.budget);
        summaries.push(run_trials(&pool, c, &options, scorer.as_deref())?);
    }
    let json = if summaries.len() == 1 { to_json(&summaries[0]) } else { to_json(&summaries) };
    emit(args.out.as_deref(), &json)?;
    if let Some(path) = &args.csv {
        write_csv(path, &summaries)?;
    }
    summary(
        args.out.is_some(),
        format!(
            "{} configurations x {} trials on subsamples of {} in {:.3}s",
            summaries.len(),
            args.trials,
            args.subsample_n,
            start.elapsed().as_secs_f64()
        ),
    );
    Ok(())
}

fn write_csv(path: &Path, summaries: &[TrialSummary]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    let mut body = String::from("budget,method,metric,mean,min,max\n");
    for s in summaries {
        for (metric, st) in &s.summary {
            body.push_str(&format!("{},{},{metric},{},{},{}\n", s.budget, s.method, st.mean, st.min, st.max));
        }
    }
    w.write_all(body.as_bytes()).and_then(|_| w.flush()).map_err(io_err(path))
}

#[derive(Debug, Args)]
pub struct SyntheticArgs {
    #[arg(long)]
    pub clusters: usize,
    #[arg(long)]
    pub per_cluster: usize,
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub seed: u64,
    /// Standard deviation of points around their center.
    #[arg(long, default_value_t = 0.35)]
    pub spread: f64,
    /// Scale of the standard-normal cluster centers.
    #[arg(long, default_value_t = 1.0)]
    pub separation: f64,
    /// Output format.
    #[arg(long, value_name = "jsonl|binmat", default_value = "jsonl")]
    pub format: String,
    /// Output file (default stdout, JSONL only).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn gen_synthetic(args: &SyntheticArgs) -> Result<()> {
    let format: PoolFormat = args.format.parse()?;
    let spec = SyntheticSpec {
        spread: args.spread,
        separation: args.separation,
        ..SyntheticSpec::new(args.clusters, args.per_cluster, args.dim, args.seed)
    };
    let instances = spec.generate()?;
    match (&args.out, format) {
        (Some(p), PoolFormat::Jsonl) => save_pool_jsonl(p, &instances)?,
        (Some(p), PoolFormat::Binmat) => save_pool_binmat(p, &instances)?,
        (None, PoolFormat::Jsonl) => emit(None, &pool_to_jsonl(&instances))?,
        (None, PoolFormat::Binmat) => return Err(Error::config("binmat output needs --out")),
    }
    summary(
        args.out.is_some(),
        format!("generated {} instances in {} clusters, dim {}", instances.len(), args.clusters, args.dim),
    );
    Ok(())
}

