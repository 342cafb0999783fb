//! The `orchid` command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage and input errors, 3 for numerical
//! failures inside the solvers.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::analysis::{
    bonferroni_adjust, expw_kernel_matrix, feature_distribution, kpca_embed, mmd_test, nmi, quantile_vector,
    rbf_kernel_matrix, spectral_cluster, wcc, FeatureDistribution, FeatureKind, FeatureSource, KernelMatrix,
    NmiNormalizer, DEFAULT_QUANTILES,
};
use crate::curvature::{Aggregator, Curvature, CurvatureConfig, CurvatureOptions, CurvatureResult, Selection};
use crate::error::Error;
use crate::generators::{
    gen_configuration_counted, gen_erdos_renyi, gen_hsbm, make_hyperclique, make_hypergrid, make_hypertree,
};
use crate::hypergraph::{parse_hypergraph, Hypergraph};
use crate::measures::MeasureKind;
use crate::transport::SupportMode;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "orchid", version, about = "Ollivier-Ricci curvature for hypergraphs")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "ORCHID_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute curvatures of edge-list hypergraphs.
    Curvature(CurvatureArgs),
    /// Write a synthetic hypergraph in edge-list format.
    Generate(GenerateArgs),
    /// Kernels, embeddings, clusterings and tests over a collection.
    Analyze(AnalyzeArgs),
    /// Print the structural profile of a hypergraph.
    Profile(ProfileArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurvatureType {
    Edge,
    Directional,
    NodeEdges,
    NodeNeighborhood,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SupportArg {
    TwoHop,
    Full,
}

#[derive(Debug, Args)]
struct CurvatureArgs {
    /// Edge-list files.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Walk measures: en, ee, we.
    #[arg(long, value_delimiter = ',', default_value = "en")]
    measure: Vec<MeasureKind>,
    /// Aggregators: mean, barycenter, max.
    #[arg(long, value_delimiter = ',', default_value = "mean")]
    agg: Vec<Aggregator>,
    /// Laziness values.
    #[arg(long, value_delimiter = ',', conflicts_with = "alpha_grid")]
    alpha: Vec<f64>,
    /// Inclusive grid start:stop:step, e.g. 0:0.5:0.1.
    #[arg(long)]
    alpha_grid: Option<String>,
    /// Curvature families to compute.
    #[arg(long, value_delimiter = ',', value_enum, default_value = "edge,directional,node-edges,node-neighborhood")]
    types: Vec<CurvatureType>,
    /// Average node curvature over all incident edges, singletons included.
    #[arg(long)]
    strict_degree: bool,
    /// Candidate support of barycenters.
    #[arg(long, value_enum, default_value = "two-hop")]
    barycenter_support: SupportArg,
    /// Output directory; required unless exactly one result is produced.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock timings in the manifest (output then varies run to run).
    #[arg(long)]
    timings: bool,
    /// csv writes a flat `family,a,b,value` table without the manifest.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(subcommand)]
    model: ModelArgs,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout if omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ModelArgs {
    /// Configuration model from degree and cardinality sequences.
    Hcm {
        #[arg(long, value_delimiter = ',', required = true)]
        degrees: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        cards: Vec<usize>,
    },
    /// Erdos-Renyi incidence model.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: f64,
    },
    /// Stochastic block model; affinity rows separated by ';'.
    Hsbm {
        #[arg(long, value_delimiter = ',', required = true)]
        node_sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        edge_sizes: Vec<usize>,
        #[arg(long)]
        affinity: String,
        /// Write planted communities as JSON to this file.
        #[arg(long)]
        communities: Option<PathBuf>,
    },
    /// All r-subsets of n nodes.
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Windows of r consecutive nodes on a cycle.
    Grid {
        #[arg(long)]
        cycle_len: usize,
        #[arg(long)]
        r: usize,
    },
    /// r-uniform k-regular hypertree around a central edge.
    Tree {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KernelArg {
    Rbf,
    Expw,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Curvature results (`.json`) or edge lists (any other file), given
    /// directly or as directories whose visible files are read in name order.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// edge_curvature, directional_curvature, node_curvature_edges,
    /// node_curvature_neighborhood, edge_cardinality, edge_neighborhood_size,
    /// node_degree or node_neighborhood_size.
    #[arg(long)]
    feature: FeatureKind,
    #[arg(long, value_enum, default_value = "rbf")]
    kernel: KernelArg,
    /// Kernel bandwidth; median heuristic if omitted.
    #[arg(long)]
    gamma: Option<f64>,
    /// Quantile vector length for the RBF kernel.
    #[arg(long, default_value_t = DEFAULT_QUANTILES)]
    quantiles: usize,
    /// kPCA dimensions.
    #[arg(long, default_value_t = 2)]
    dims: usize,
    /// Number of spectral clusters.
    #[arg(long)]
    k: Option<usize>,
    /// Pairwise permutation MMD tests.
    #[arg(long)]
    mmd: bool,
    #[arg(long, default_value_t = 200)]
    replicates: usize,
    /// Wasserstein clustering coefficient of --labels or the spectral clusters.
    #[arg(long)]
    wcc: bool,
    /// JSON object mapping source id to cluster label.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// NMI matrix between all sources (samples must align).
    #[arg(long)]
    nmi: bool,
    #[arg(long, default_value_t = 10)]
    bins: usize,
    #[arg(long, default_value = "max")]
    normalizer: NmiNormalizer,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ProfileArgs {
    input: PathBuf,
    /// Compute the exact diameter (one BFS per node).
    #[arg(long)]
    exact_diameter: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfiniteCost | Error::InfiniteDistance(..) | Error::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

/// Runs the command line given in `args` (program name first) and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        pool = pool.num_threads(t);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INPUT;
        }
    };
    let recorded = recorded_args(&args);
    let outcome = pool.install(|| match cli.command {
        Command::Curvature(a) => cmd_curvature(a, recorded),
        Command::Generate(a) => cmd_generate(a),
        Command::Analyze(a) => cmd_analyze(a, recorded),
        Command::Profile(a) => cmd_profile(a, recorded),
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Arguments as typed, minus those that must not change the output bytes.
fn recorded_args(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args.iter().skip(1) {
        let a = a.to_string_lossy().into_owned();
        if skip {
            skip = false;
            continue;
        }
        if a == "--threads" || a == "--out" {
            skip = true;
            continue;
        }
        if a.starts_with("--threads=") || a.starts_with("--out=") {
            continue;
        }
        out.push(a);
    }
    out
}

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_hypergraph(path: &Path) -> CliResult<(Hypergraph, String)> {
    let text = read_input(path)?;
    let h = parse_hypergraph(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((h, sha256(text.as_bytes())))
}

fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn manifest(command: &str, args: Vec<String>, extra: Map<String, Value>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("tool".into(), json!("orchid"));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("args".into(), json!(args));
    m.extend(extra);
    m
}

/// Inclusive `start:stop:step` grid, rounded to 12 decimals.
fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::input(format!("alpha grid '{spec}' is not start:stop:step")))?;
    let [start, stop, step] = parts[..] else {
        return Err(Failure::input(format!("alpha grid '{spec}' is not start:stop:step")));
    };
    if !(step > 0.0) || stop < start {
        return Err(Failure::input(format!("alpha grid '{spec}' is empty")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

fn cmd_curvature(a: CurvatureArgs, args: Vec<String>) -> CliResult {
    let alphas = match &a.alpha_grid {
        Some(g) => parse_grid(g)?,
        None if a.alpha.is_empty() => vec![0.0],
        None => a.alpha.clone(),
    };
    let mut configs = Vec::new();
    for &m in &a.measure {
        for &g in &a.agg {
            for &al in &alphas {
                configs.push(CurvatureConfig::new(m, g, al));
            }
        }
    }
    let selection = Selection {
        edges: a.types.contains(&CurvatureType::Edge),
        directional: a.types.contains(&CurvatureType::Directional),
        node_edges: a.types.contains(&CurvatureType::NodeEdges),
        node_neighborhood: a.types.contains(&CurvatureType::NodeNeighborhood),
    };
    let options = CurvatureOptions {
        strict_degree_denominator: a.strict_degree,
        barycenter_support: match a.barycenter_support {
            SupportArg::TwoHop => SupportMode::TwoHop,
            SupportArg::Full => SupportMode::Full,
        },
    };
    let single = a.inputs.len() == 1 && configs.len() == 1;
    if !single && a.out.is_none() {
        return Err(Failure::input("several results requested; pass --out DIR"));
    }
    if let (Some(dir), false) = (&a.out, single) {
        fs::create_dir_all(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    }
    let grid: Vec<Value> = configs
        .iter()
        .map(|c| json!({"measure": c.measure.short_name(), "agg": c.aggregator.name(), "alpha": c.alpha}))
        .collect();

    for input in &a.inputs {
        let (h, digest) = load_hypergraph(input)?;
        let stem = input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "input".into());
        let mut warned = false;
        for cfg in &configs {
            let started = Instant::now();
            let engine = Curvature::with_options(&h, *cfg, options)?;
            let isolated = engine.measures().isolated();
            if !isolated.is_empty() && !warned {
                let names: Vec<&str> = isolated.iter().map(|&i| h.label(i)).collect();
                log::warn!("{}: isolated nodes without curvature: {}", input.display(), names.join(" "));
                warned = true;
            }
            let result = engine.all(selection)?;
            let mut extra = Map::new();
            extra.insert("config_grid".into(), json!(grid));
            extra.insert("seeds".into(), json!([]));
            extra.insert(
                "inputs".into(),
                json!([{"path": input.display().to_string(), "sha256": digest}]),
            );
            if a.timings {
                extra.insert("timings_ms".into(), json!({"curvature": started.elapsed().as_secs_f64() * 1e3}));
            }
            let mut doc = match result.to_json() {
                Value::Object(m) => m,
                _ => unreachable!(),
            };
            doc.insert("manifest".into(), Value::Object(manifest("curvature", args.clone(), extra)));
            let text = match a.format {
                Format::Json => to_pretty(&Value::Object(doc)),
                Format::Csv => result.to_csv(),
            };
            let name = match a.format {
                Format::Json => result_name(&stem, cfg),
                Format::Csv => format!("{}.csv", result_name(&stem, cfg).trim_end_matches(".json")),
            };
            if single && a.out.is_none() {
                write_output(None, &text)?;
            } else if single {
                let out = a.out.as_deref().unwrap();
                let target = if out.is_dir() { out.join(&name) } else { out.to_path_buf() };
                write_output(Some(&target), &text)?;
            } else {
                let target = a.out.as_ref().unwrap().join(&name);
                write_output(Some(&target), &text)?;
            }
        }
    }
    Ok(())
}

/// `{stem}__{measure}_{agg}_a{alpha}.json`
pub fn result_name(stem: &str, cfg: &CurvatureConfig) -> String {
    format!(
        "{stem}__{}_{}_a{}.json",
        cfg.measure.short_name(),
        cfg.aggregator.name(),
        cfg.alpha
    )
}

fn cmd_generate(a: GenerateArgs) -> CliResult {
    let seed = a.seed;
    let mut header = Vec::new();
    let h = match &a.model {
        ModelArgs::Hcm { degrees, cards } => {
            let s = gen_configuration_counted(degrees, cards, seed)?;
            header.push(format!("hcm seed={seed} discarded={}", s.discarded));
            eprintln!("discarded {} duplicate incidences", s.discarded);
            s.hypergraph
        }
        ModelArgs::Er { n, m, p } => {
            header.push(format!("er n={n} m={m} p={p} seed={seed}"));
            gen_erdos_renyi(*n, *m, *p, seed)?
        }
        ModelArgs::Hsbm {
            node_sizes,
            edge_sizes,
            affinity,
            communities,
        } => {
            let matrix = parse_affinity(affinity)?;
            let s = gen_hsbm(node_sizes, edge_sizes, &matrix, seed)?;
            header.push(format!("hsbm seed={seed}"));
            if let Some(path) = communities {
                let doc = json!({
                    "node_communities": s.node_communities,
                    "edge_communities": s.edge_communities,
                });
                write_output(Some(path), &to_pretty(&doc))?;
            }
            s.hypergraph
        }
        ModelArgs::Clique { n, r } => {
            header.push(format!("clique n={n} r={r}"));
            make_hyperclique(*n, *r)?
        }
        ModelArgs::Grid { cycle_len, r } => {
            header.push(format!("grid cycle_len={cycle_len} r={r}"));
            make_hypergrid(*cycle_len, *r)?
        }
        ModelArgs::Tree { r, k, depth } => {
            let t = make_hypertree(*r, *k, *depth)?;
            header.push(format!("tree r={r} k={k} depth={depth}"));
            header.push(format!("central_edge {}", t.central_edge));
            eprintln!("central edge index {}", t.central_edge);
            t.hypergraph
        }
    };
    let mut text: String = header.iter().map(|l| format!("# {l}\n")).collect();
    text.push_str(&h.to_edge_list());
    write_output(a.out.as_deref(), &text)
}

fn parse_affinity(spec: &str) -> CliResult<Vec<Vec<f64>>> {
    spec.split(';')
        .map(|row| {
            row.split(',')
                .map(|v| v.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<f64>, _>>()
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::input(format!("affinity '{spec}' is not rows of numbers separated by ';'")))
}

struct Source {
    id: String,
    path: PathBuf,
    digest: String,
    dist: FeatureDistribution,
}

fn expand_inputs(inputs: &[PathBuf]) -> CliResult<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut inside: Vec<PathBuf> = fs::read_dir(p)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && !f.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
                .collect();
            inside.sort();
            files.extend(inside);
        } else {
            files.push(p.clone());
        }
    }
    if files.is_empty() {
        return Err(Failure::input("no input files found"));
    }
    Ok(files)
}

fn load_source(path: &Path, kind: FeatureKind) -> CliResult<Source> {
    let text = read_input(path)?;
    let digest = sha256(text.as_bytes());
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let wrap = |e: Error| Failure::input(format!("{}: {e}", path.display()));
    let dist = if path.extension().is_some_and(|x| x == "json") {
        let doc: Value =
            serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let result = CurvatureResult::from_json(&doc).map_err(wrap)?;
        feature_distribution(id.clone(), FeatureSource::Curvature(&result), kind).map_err(wrap)?
    } else {
        let h = parse_hypergraph(&text).map_err(wrap)?;
        feature_distribution(id.clone(), FeatureSource::Hypergraph(&h), kind).map_err(wrap)?
    };
    Ok(Source {
        id,
        path: path.to_path_buf(),
        digest,
        dist,
    })
}

fn pair_matrix(n: usize, entries: &[(usize, usize, f64)]) -> Vec<Vec<Option<f64>>> {
    let mut m = vec![vec![None; n]; n];
    for &(i, j, v) in entries {
        m[i][j] = Some(v);
        m[j][i] = Some(v);
    }
    m
}

fn cmd_analyze(a: AnalyzeArgs, args: Vec<String>) -> CliResult {
    let files = expand_inputs(&a.inputs)?;
    let sources: Vec<Source> = files.iter().map(|f| load_source(f, a.feature)).collect::<CliResult<_>>()?;
    let mut ids: Vec<&str> = sources.iter().map(|s| s.id.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    if ids.len() != sources.len() {
        return Err(Failure::input("source ids (file stems) must be unique"));
    }
    let dists: Vec<FeatureDistribution> = sources.iter().map(|s| s.dist.clone()).collect();
    let n = dists.len();

    let mut doc = Map::new();
    doc.insert("feature".into(), json!(a.feature.name()));
    doc.insert("sources".into(), json!(sources.iter().map(|s| &s.id).collect::<Vec<_>>()));

    let kernel: Option<KernelMatrix> = if n >= 2 {
        Some(match a.kernel {
            KernelArg::Rbf => {
                let feats: Vec<Vec<f64>> = dists.iter().map(|d| quantile_vector(d, a.quantiles)).collect();
                rbf_kernel_matrix(dists.iter().map(|d| d.source_id.clone()).collect(), &feats, a.gamma)?
            }
            KernelArg::Expw => expw_kernel_matrix(&dists, a.gamma)?,
        })
    } else {
        None
    };
    let mut clusters = None;
    if let Some(k) = &kernel {
        doc.insert(
            "kernel".into(),
            serde_json::to_value(k).expect("kernel serializes"),
        );
        doc.insert("kpca".into(), json!(kpca_embed(k, a.dims.min(n))?));
        if let Some(count) = a.k {
            let labels = spectral_cluster(k, count, a.seed)?;
            doc.insert("clusters".into(), json!(labels));
            clusters = Some(labels);
        }
    }

    if a.mmd {
        let mut raw = Vec::new();
        let mut stats = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let out = mmd_test(&dists[i], &dists[j], a.replicates, a.seed)?;
                raw.push((i, j, out.p_value));
                stats.push((i, j, out.mmd2));
            }
        }
        let pvals: Vec<f64> = raw.iter().map(|t| t.2).collect();
        let adjusted: Vec<(usize, usize, f64)> = raw
            .iter()
            .zip(bonferroni_adjust(&pvals))
            .map(|(&(i, j, _), p)| (i, j, p))
            .collect();
        doc.insert(
            "mmd".into(),
            json!({
                "replicates": a.replicates,
                "tests": raw.len(),
                "mmd2": pair_matrix(n, &stats),
                "p_values": pair_matrix(n, &raw),
                "p_adjusted": pair_matrix(n, &adjusted),
            }),
        );
    }

    if a.wcc {
        let labels = match (&a.labels, clusters) {
            (Some(path), _) => read_labels(path, &sources)?,
            (None, Some(l)) => l,
            (None, None) => return Err(Failure::input("--wcc needs --labels or --k")),
        };
        doc.insert("wcc".into(), json!(wcc(&labels, &dists)?));
    }

    if a.nmi {
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i..n {
                entries.push((i, j, nmi(&dists[i].samples, &dists[j].samples, a.bins, a.normalizer)?));
            }
        }
        doc.insert(
            "nmi".into(),
            json!({
                "bins": a.bins,
                "normalizer": a.normalizer.to_string(),
                "matrix": pair_matrix(n, &entries),
            }),
        );
    }

    let mut extra = Map::new();
    extra.insert("seeds".into(), json!([a.seed]));
    extra.insert(
        "inputs".into(),
        json!(sources
            .iter()
            .map(|s| json!({"path": s.path.display().to_string(), "sha256": s.digest}))
            .collect::<Vec<_>>()),
    );
    doc.insert("manifest".into(), Value::Object(manifest("analyze", args, extra)));
    write_output(a.out.as_deref(), &to_pretty(&Value::Object(doc)))
}

fn read_labels(path: &Path, sources: &[Source]) -> CliResult<Vec<usize>> {
    let text = read_input(path)?;
    let map: std::collections::HashMap<String, usize> =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    sources
        .iter()
        .map(|s| {
            map.get(&s.id)
                .copied()
                .ok_or_else(|| Failure::input(format!("no label for source '{}'", s.id)))
        })
        .collect()
}

fn cmd_profile(a: ProfileArgs, args: Vec<String>) -> CliResult {
    let (h, digest) = load_hypergraph(&a.input)?;
    let profile = h.structural_profile(a.exact_diameter);
    let mut doc = match serde_json::to_value(profile).expect("profile serializes") {
        Value::Object(m) => m,
        _ => unreachable!(),
    };
    let mut extra = Map::new();
    extra.insert(
        "inputs".into(),
        json!([{"path": a.input.display().to_string(), "sha256": digest}]),
    );
    doc.insert("manifest".into(), Value::Object(manifest("profile", args, extra)));
    write_output(a.out.as_deref(), &to_pretty(&Value::Object(doc)))
}
