use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use graphot::attributes::DtwCost;
use graphot::eval::{ari, run_setting, ExperimentConfig, Setting};
use graphot::pipeline::{run_method, Instance, Method, Outcome, RunParams};
use graphot::synth::{Shape, Structure, SyntheticSpec};
use graphot::{AttributedGraph, Partition};
use serde::{Deserialize, Serialize};

use crate::config::{self, ClusterConfig, GenerateConfig};
use crate::error::{CliError, Result};
use crate::results::{read_rows, write_rows, ResultRow, TimingRow};
use crate::svg;

pub struct GenerateArgs {
    pub config: PathBuf,
    pub out_dir: PathBuf,
    pub seed: Option<u64>,
    pub shape: Option<String>,
    pub t: Option<f64>,
    pub level: Option<u8>,
}

#[derive(Debug, Serialize, Deserialize)]
struct LabelRow {
    node_id: usize,
    group: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ClusterRow {
    node_id: usize,
    cluster: usize,
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush().map_err(CliError::io(path))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

pub fn generate(args: GenerateArgs) -> Result<Vec<PathBuf>> {
    let mut cfg: GenerateConfig = config::load(&args.config)?;
    if let Some(s) = args.shape {
        cfg.shape = config::parse_label::<Shape>("shape", &s)?;
    }
    cfg.t = args.t.unwrap_or(cfg.t);
    cfg.level = args.level.or(cfg.level);
    let seed = args
        .seed
        .or(cfg.seed)
        .ok_or_else(|| CliError::Config("a seed is required (config `seed` or --seed)".into()))?;
    if cfg.sizes.is_empty() || cfg.sizes.contains(&0) {
        return Err(CliError::Config("sizes must be nonempty and positive".into()));
    }
    let spec = SyntheticSpec {
        sizes: cfg.sizes,
        shape: cfg.shape,
        b: cfg.b,
        t: cfg.t,
        level: cfg.level,
        structure: Structure::Graph,
        noise_sigma: None,
    };
    let synthetic = spec.generate(seed)?;
    let graph = synthetic.graph.expect("graph structure yields a graph");

    create_dir(&args.out_dir)?;
    let graph_path = args.out_dir.join("graph.json");
    let labels_path = args.out_dir.join("labels.csv");
    graph.save(&graph_path)?;
    write_csv(
        &labels_path,
        synthetic
            .truth
            .assign()
            .iter()
            .enumerate()
            .map(|(node_id, &group)| LabelRow { node_id, group }),
    )?;
    Ok(vec![graph_path, labels_path])
}

pub struct ClusterArgs {
    pub graph: PathBuf,
    pub config: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub method: Option<String>,
    pub k: Option<usize>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub dtw_cost: Option<String>,
    pub seed: Option<u64>,
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunRecord {
    pub graph: String,
    pub seed: u64,
    pub k: usize,
    pub beta: f64,
    pub dtw_cost: DtwCost,
    pub params: RunParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ari: Option<f64>,
    pub outcome: Outcome,
}

fn read_truth(path: &Path) -> Result<Partition> {
    let rows: Vec<LabelRow> = read_rows(path)?;
    if rows.iter().enumerate().any(|(i, r)| r.node_id != i) {
        return Err(CliError::Config(format!("{}: node ids must be 0..N in order", path.display())));
    }
    Ok(Partition::from_labels(rows.into_iter().map(|r| r.group).collect()))
}

pub fn cluster(args: ClusterArgs) -> Result<RunRecord> {
    let mut cfg = match &args.config {
        Some(path) => config::load(path)?,
        None => ClusterConfig::default(),
    };
    cfg.method = args.method.or(cfg.method);
    cfg.k = args.k.or(cfg.k);
    cfg.alpha = args.alpha.unwrap_or(cfg.alpha);
    cfg.beta = args.beta.unwrap_or(cfg.beta);
    if let Some(c) = args.dtw_cost {
        cfg.dtw_cost = config::parse_label("dtw cost", &c)?;
    }
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let label = cfg.method.ok_or_else(|| CliError::Config("no method given".into()))?;
    let method: Method = label.parse().map_err(|e: graphot::Error| CliError::Config(e.to_string()))?;
    let k = cfg.k.ok_or_else(|| CliError::Config("no k given".into()))?;

    let graph = AttributedGraph::load(&args.graph)?;
    let instance = Instance::from_graph(&graph, k, cfg.beta, cfg.dtw_cost)?;
    let params = RunParams {
        alpha: cfg.alpha,
        cg: cfg.cg,
        max_outer: cfg.max_outer,
        ..RunParams::default()
    };
    let outcome = run_method(&instance, method, &params, seed)?;
    let ari = match &args.truth {
        Some(path) => Some(ari(&outcome.partition, &read_truth(path)?)?),
        None => None,
    };

    create_dir(&args.out_dir)?;
    write_csv(
        &args.out_dir.join("partition.csv"),
        outcome
            .partition
            .assign()
            .iter()
            .enumerate()
            .map(|(node_id, &cluster)| ClusterRow { node_id, cluster }),
    )?;
    let record = RunRecord {
        graph: args.graph.display().to_string(),
        seed,
        k,
        beta: cfg.beta,
        dtw_cost: cfg.dtw_cost,
        params,
        ari,
        outcome,
    };
    let run_path = args.out_dir.join("run.json");
    let json = serde_json::to_string_pretty(&record).map_err(graphot::Error::from)?;
    fs::write(&run_path, json + "\n").map_err(CliError::io(&run_path))?;
    Ok(record)
}

pub struct SweepArgs {
    pub config: PathBuf,
    pub seed: u64,
    pub out: PathBuf,
    pub jobs: Option<usize>,
    pub reps: Option<usize>,
    pub resume: bool,
    pub timings: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

fn setting_key(s: &Setting) -> String {
    format!("{}|{}|{:?}|{}", s.shape.label(), s.t, s.level, s.alpha)
}

pub fn sweep(args: SweepArgs) -> Result<Vec<ResultRow>> {
    let mut cfg: ExperimentConfig = config::load(&args.config)?;
    if let Some(reps) = args.reps {
        cfg.reps = reps;
    }
    cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
    let methods: Vec<String> = cfg.parsed_methods()?.iter().map(Method::to_string).collect();

    let mut done: HashMap<(String, String), ResultRow> = HashMap::new();
    if args.resume && args.out.exists() {
        for row in read_rows::<ResultRow>(&args.out)? {
            if row.seed == args.seed && row.reps == cfg.reps {
                done.insert((setting_key(&row.setting()), row.method.clone()), row);
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let settings = cfg.settings();
    let mut rows: Vec<Vec<ResultRow>> = vec![Vec::new(); settings.len()];
    let mut timings = Vec::new();
    // Settings already complete in the table are reused verbatim; the rest are
    // recomputed in grid order, rewriting the table after each one.
    let mut todo = Vec::new();
    for (i, setting) in settings.iter().enumerate() {
        let key = setting_key(setting);
        let found: Option<Vec<ResultRow>> = methods.iter().map(|m| done.get(&(key.clone(), m.clone())).cloned()).collect();
        match found {
            Some(found) => rows[i] = found,
            None => todo.push(i),
        }
    }
    for (n, &i) in todo.iter().enumerate() {
        let results = pool.install(|| run_setting(&cfg, &settings[i], args.seed))?;
        rows[i] = results.iter().map(|r| ResultRow::new(r, args.seed)).collect();
        timings.extend(results.iter().map(TimingRow::new));
        let flat: Vec<ResultRow> = rows.iter().flatten().cloned().collect();
        write_rows(&args.out, &flat)?;
        eprintln!("[{}/{}] {}", n + 1, todo.len(), rows[i][0].setting_label());
    }
    let flat: Vec<ResultRow> = rows.into_iter().flatten().collect();
    if todo.is_empty() {
        write_rows(&args.out, &flat)?;
    }
    if let Some(path) = &args.timings {
        write_rows(path, &timings)?;
    }
    if let Some(path) = &args.svg {
        fs::write(path, svg::ari_plot(&flat)).map_err(CliError::io(path))?;
    }
    Ok(flat)
}

pub fn report(results: &Path, svg_path: Option<&Path>) -> Result<String> {
    let rows: Vec<ResultRow> = read_rows(results)?;
    let mut out = String::from("| setting | method | reps | mean ARI | std ARI |\n|---|---|---|---|---|\n");
    for r in &rows {
        out += &format!(
            "| {} | {} | {} | {:.3} | {:.3} |\n",
            r.setting_label(),
            r.method,
            r.reps,
            r.mean_ari,
            r.std_ari
        );
    }
    if let Some(path) = svg_path {
        fs::write(path, svg::ari_plot(&rows)).map_err(CliError::io(path))?;
    }
    Ok(out)
}
