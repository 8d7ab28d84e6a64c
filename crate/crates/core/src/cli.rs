//! Command-line front end. Every command reads and writes the JSON/CSV
//! formats of the library modules; with `-o` it also writes a run manifest
//! next to the output.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::{choi_bound_global, raymond_lambda, torque_compensation, BoundResult, TORQUE_PREFACTOR};
use crate::embedding::{
    avg_chain_break_rate, chain_length_histogram, coupler_corruption_stats, embed_model, greedy_embed, read_embedding,
    validate, ChainStrength, Embedding, EmbeddingFile, GreedyOptions,
};
use crate::error::{invalid, Result};
use crate::io::to_json_string;
use crate::ising::{
    gen_d_regular, gen_erdos_renyi, maxcut_to_ising, read_model, Graph, IsingModel, ModelFile, DEFAULT_H_RANGE,
    DEFAULT_J_RANGE,
};
use crate::sampler::{gibbs_sample, replay_sample, sa_sample, Annealer, SamplerConfig};
use crate::samples::{read_sample_set, SampleSetFile};
use crate::spectral::{
    gap_profile, min_gap, qubit_cap_from_env, refine_min_gap, rescale_model, rescaling_deviation, Schedule, DEFAULT_DEGENERACY_TOL,
    DEFAULT_GRID_POINTS,
};
use crate::topology::{chimera, chimera_clique_embedding, read_topology, remove_qubits, Topology, TopologyFile};
use crate::tuner::{binary_search_chain_strength, chain_scan, embedding_builder, scan_to_csv, TunerConfig};

#[derive(Debug, Parser)]
#[command(name = "chaingauge", version, about = "Chain-strength analysis for minor-embedded Ising problems")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a max-cut instance.
    Gen(GenArgs),
    /// Build or mask a hardware topology.
    Topo(TopoArgs),
    /// Find, construct or check an embedding.
    Embed(EmbedArgs),
    /// Analytic chain-strength bounds.
    Bounds(BoundsArgs),
    /// Spectral gap profile along the anneal.
    Gap(GapArgs),
    /// Draw samples from a model.
    Sample(SampleArgs),
    /// Chain scan over a list of strengths.
    Scan(ScanArgs),
    /// Break-rate-driven chain-strength search.
    Tune(TuneArgs),
    /// Embedding and sample statistics.
    Stats(StatsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum GraphKind {
    Er,
    Regular,
    Complete,
}

#[derive(Debug, Args, Serialize)]
struct GenArgs {
    #[arg(long = "type", value_enum)]
    kind: GraphKind,
    #[arg(long)]
    n: usize,
    /// Edge probability (er).
    #[arg(long)]
    p: Option<f64>,
    /// Degree (regular).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct TopoArgs {
    #[command(subcommand)]
    action: TopoAction,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum TopoAction {
    /// Chimera grid of m×m unit cells with l qubits per side.
    Chimera {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 4)]
        l: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Drop qubits (and their couplers) from a topology.
    RemoveQubits {
        #[arg(long)]
        topology: PathBuf,
        /// Comma-separated qubit ids.
        #[arg(long, value_delimiter = ',')]
        qubits: Vec<usize>,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Serialize)]
struct EmbedArgs {
    #[command(subcommand)]
    action: EmbedAction,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum EmbedAction {
    /// Randomized greedy chain growth.
    Greedy {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        topology: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        max_tries: usize,
        #[arg(long)]
        max_qubits: Option<usize>,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Deterministic K_{4m} embedding on chimera(m, 4).
    Clique {
        #[arg(long)]
        m: usize,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
    /// Validity report; exits 1 when the embedding is invalid.
    Validate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        topology: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(short = 'o', long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum BoundMethod {
    Choi,
    Torque,
    Raymond,
}

#[derive(Debug, Args, Serialize)]
struct BoundsArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = BoundMethod::Choi)]
    method: BoundMethod,
    #[arg(long, default_value_t = TORQUE_PREFACTOR)]
    prefactor: f64,
    #[arg(long, default_value_t = 1.0)]
    lambda0: f64,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct GapArgs {
    #[arg(long)]
    model: PathBuf,
    /// Schedule CSV (`s,a,b`); linear when omitted.
    #[arg(long)]
    schedule: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    points: usize,
    /// Number of lowest levels to record.
    #[arg(long, default_value_t = 2)]
    levels: usize,
    /// Divide all weights by this factor first.
    #[arg(long)]
    alpha: Option<f64>,
    /// Refine the minimum gap by golden-section search.
    #[arg(long)]
    refine: bool,
    #[arg(long, default_value_t = DEFAULT_DEGENERACY_TOL)]
    degeneracy_tol: f64,
    /// Report the largest deviation from the rescaling correspondence for
    /// this factor in the summary (linear schedule).
    #[arg(long)]
    rescale_check: Option<f64>,
    /// Also write the minimum-gap summary JSON here.
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Backend {
    Sa,
    Gibbs,
    Replay,
}

#[derive(Debug, Args, Serialize, Clone)]
struct AnnealArgs {
    #[arg(long, default_value_t = 128)]
    sweeps: usize,
    #[arg(long, default_value_t = 0.1)]
    beta_hot: f64,
    #[arg(long, default_value_t = 10.0)]
    beta_cold: f64,
}

impl AnnealArgs {
    fn annealer(&self) -> Annealer {
        Annealer {
            config: SamplerConfig {
                sweeps: self.sweeps,
                beta_hot: self.beta_hot,
                beta_cold: self.beta_cold,
                ..SamplerConfig::default()
            },
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SampleArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long, value_enum, default_value_t = Backend::Sa)]
    backend: Backend,
    #[arg(long, default_value_t = 1000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inverse temperature (gibbs).
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Stored sample set (replay).
    #[arg(long)]
    replay: Option<PathBuf>,
    #[command(flatten)]
    anneal: AnnealArgs,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct EmbeddedArgs {
    /// Logical model.
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    topology: PathBuf,
    #[arg(long)]
    embedding: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct ScanArgs {
    #[command(flatten)]
    inputs: EmbeddedArgs,
    /// Comma-separated chain strengths.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
    cs: Vec<f64>,
    /// First strength of an evenly spaced scan.
    #[arg(long, requires = "to")]
    from: Option<f64>,
    #[arg(long, requires = "from")]
    to: Option<f64>,
    #[arg(long, default_value_t = 12)]
    points: usize,
    #[arg(long, default_value_t = 1000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    anneal: AnnealArgs,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct TuneArgs {
    #[command(flatten)]
    inputs: EmbeddedArgs,
    #[arg(long)]
    cb_lo: f64,
    #[arg(long)]
    cb_hi: f64,
    /// Lower end of the chain-strength interval (default 0).
    #[arg(long, requires = "cs_hi")]
    cs_lo: Option<f64>,
    /// Upper end (default: global node bound of the model).
    #[arg(long, requires = "cs_lo")]
    cs_hi: Option<f64>,
    #[arg(long, default_value_t = 128)]
    shots: usize,
    #[arg(long)]
    width_tol: Option<f64>,
    #[arg(long, default_value_t = 30)]
    max_steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    anneal: AnnealArgs,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
struct StatsArgs {
    #[command(flatten)]
    inputs: EmbeddedArgs,
    /// Sample set over physical qubit ids.
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Chain strength used to rebuild the physical model (default: the
    /// embedding file's value, else 1).
    #[arg(long)]
    cs: Option<f64>,
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code: 0 success, 1 domain error, 2 usage error.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(invalid("--threads must be at least 1")),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))
            .and_then(|pool| pool.install(|| run(&cli.command))),
        None => run(&cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

/// What a command produced, before it is written.
struct Output {
    body: String,
    inputs: Vec<PathBuf>,
    seeds: Vec<u64>,
}

impl Output {
    fn new(body: String) -> Self {
        Self { body, inputs: Vec::new(), seeds: Vec::new() }
    }

    fn json(value: &impl Serialize) -> Result<Self> {
        Ok(Self::new(to_json_string(value)?))
    }

    fn inputs<'a>(mut self, paths: impl IntoIterator<Item = &'a PathBuf>) -> Self {
        self.inputs.extend(paths.into_iter().cloned());
        self
    }

    fn seed(mut self, seed: u64) -> Self {
        self.seeds.push(seed);
        self
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: &'a str,
    params: Value,
    seeds: &'a [u64],
    inputs: BTreeMap<String, String>,
    version: &'a str,
}

fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

/// Manifest path for an output file: `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn emit(command: &str, params: &impl Serialize, out: Option<&PathBuf>, output: Output) -> Result<()> {
    let Some(path) = out else {
        print!("{}", output.body);
        return Ok(());
    };
    fs::write(path, &output.body)?;
    let inputs = output
        .inputs
        .iter()
        .map(|p| Ok((p.display().to_string(), sha256_file(p)?)))
        .collect::<Result<_>>()?;
    let manifest = RunManifest {
        command,
        params: serde_json::to_value(params)?,
        seeds: &output.seeds,
        inputs,
        version: env!("CARGO_PKG_VERSION"),
    };
    fs::write(manifest_path(path), to_json_string(&manifest)?)?;
    Ok(())
}

fn run(command: &Command) -> Result<()> {
    match command {
        Command::Gen(a) => emit("gen", a, a.out.as_ref(), gen(a)?),
        Command::Topo(a) => {
            let out = match &a.action {
                TopoAction::Chimera { out, .. } | TopoAction::RemoveQubits { out, .. } => out,
            };
            emit("topo", a, out.as_ref(), topo(&a.action)?)
        }
        Command::Embed(a) => embed(a),
        Command::Bounds(a) => emit("bounds", a, a.out.as_ref(), bounds(a)?),
        Command::Gap(a) => gap(a),
        Command::Sample(a) => emit("sample", a, a.out.as_ref(), sample(a)?),
        Command::Scan(a) => emit("scan", a, a.out.as_ref(), scan(a)?),
        Command::Tune(a) => emit("tune", a, a.out.as_ref(), tune(a)?),
        Command::Stats(a) => emit("stats", a, a.out.as_ref(), stats(a)?),
    }
}

fn gen(a: &GenArgs) -> Result<Output> {
    let g = match a.kind {
        GraphKind::Er => {
            let p = a.p.ok_or_else(|| invalid("--p is required for --type er"))?;
            gen_erdos_renyi(a.n, p, a.seed)?
        }
        GraphKind::Regular => {
            let d = a.d.ok_or_else(|| invalid("--d is required for --type regular"))?;
            gen_d_regular(a.n, d, a.seed)?
        }
        GraphKind::Complete => Graph::complete(a.n),
    };
    Ok(Output::json(&ModelFile::from_model(&maxcut_to_ising(&g)))?.seed(a.seed))
}

fn topo(action: &TopoAction) -> Result<Output> {
    match action {
        TopoAction::Chimera { m, l, .. } => Output::json(&TopologyFile::from(&chimera(*m, *l)?)),
        TopoAction::RemoveQubits { topology, qubits, .. } => {
            let t = read_topology(topology)?;
            let dead: BTreeSet<usize> = qubits.iter().copied().collect();
            Ok(Output::json(&TopologyFile::from(&remove_qubits(&t, &dead)?))?.inputs([topology]))
        }
    }
}

fn embedding_output(e: &Embedding) -> Result<Output> {
    Output::json(&EmbeddingFile::from(e))
}

fn embed(a: &EmbedArgs) -> Result<()> {
    match &a.action {
        EmbedAction::Greedy { model, topology, seed, max_tries, max_qubits, out } => {
            let m = read_model(model)?;
            let t = read_topology(topology)?;
            let opts = GreedyOptions { max_tries: *max_tries, max_qubits: *max_qubits, ..GreedyOptions::default() };
            let e = greedy_embed(m.graph(), &t, *seed, &opts)?;
            emit("embed", a, out.as_ref(), embedding_output(&e)?.inputs([model, topology]).seed(*seed))
        }
        EmbedAction::Clique { m, out } => emit("embed", a, out.as_ref(), embedding_output(&chimera_clique_embedding(*m)?)?),
        EmbedAction::Validate { model, topology, embedding, out } => {
            let m = read_model(model)?;
            let t = read_topology(topology)?;
            let e = read_embedding(embedding)?;
            let report = validate(&e, m.graph(), &t);
            let valid = report.is_valid();
            let body = json!({ "valid": valid, "report": report });
            emit("embed", a, out.as_ref(), Output::json(&body)?.inputs([model, topology, embedding]))?;
            if valid {
                Ok(())
            } else {
                Err(invalid("embedding is not valid"))
            }
        }
    }
}

fn bounds(a: &BoundsArgs) -> Result<Output> {
    let m = read_model(&a.model)?;
    let result = match a.method {
        BoundMethod::Choi => choi_bound_global(&m)?,
        BoundMethod::Torque => BoundResult {
            method: "torque".into(),
            magnitude: torque_compensation(&m, a.prefactor)?,
            per_node: None,
        },
        BoundMethod::Raymond => BoundResult {
            method: "raymond".into(),
            magnitude: raymond_lambda(&m, a.lambda0)?,
            per_node: None,
        },
    };
    Ok(Output::json(&result)?.inputs([&a.model]))
}

fn gap(a: &GapArgs) -> Result<()> {
    let cap = qubit_cap_from_env()?;
    let mut m = read_model(&a.model)?;
    if let Some(alpha) = a.alpha {
        m = rescale_model(&m, alpha)?;
    }
    let schedule = match &a.schedule {
        Some(p) => Schedule::read_csv(p)?,
        None => Schedule::linear(),
    };
    let profile = gap_profile(&m, &schedule, a.points, a.levels.max(2), cap)?;
    let mut summary = min_gap(&profile, a.degeneracy_tol)?;
    if a.refine {
        let (delta, s) = refine_min_gap(&m, &schedule, &profile, cap, 1e-9)?;
        summary.delta_min = delta;
        summary.s_star = s;
    }
    let mut inputs = vec![a.model.clone()];
    inputs.extend(a.schedule.clone());
    if let Some(path) = &a.summary {
        let mut body = serde_json::to_value(&summary)?;
        if let Some(check) = a.rescale_check {
            let deviation = rescaling_deviation(&m, check, a.points, a.levels.max(2), cap)?;
            body["rescaling"] = json!({ "alpha": check, "max_deviation": deviation });
        }
        fs::write(path, to_json_string(&body)?)?;
    }
    emit("gap", a, a.out.as_ref(), Output::new(profile.to_csv()).inputs(&inputs))
}

fn sample(a: &SampleArgs) -> Result<Output> {
    let m = read_model(&a.model)?;
    let ss = match a.backend {
        Backend::Sa => {
            let config = SamplerConfig { shots: a.shots, seed: a.seed, ..a.anneal.annealer().config };
            sa_sample(&m, &config)?
        }
        Backend::Gibbs => gibbs_sample(&m, a.beta, a.shots, a.seed)?,
        Backend::Replay => {
            let path = a.replay.as_ref().ok_or_else(|| invalid("--replay is required for --backend replay"))?;
            let ss = replay_sample(path, Some(&m))?;
            return Ok(Output::json(&SampleSetFile::from(&ss))?.inputs([&a.model, path]));
        }
    };
    Ok(Output::json(&SampleSetFile::from(&ss))?.inputs([&a.model]).seed(a.seed))
}

struct Loaded {
    model: IsingModel,
    topology: Topology,
    embedding: Embedding,
}

fn load(inputs: &EmbeddedArgs) -> Result<Loaded> {
    Ok(Loaded {
        model: read_model(&inputs.model)?,
        topology: read_topology(&inputs.topology)?,
        embedding: read_embedding(&inputs.embedding)?,
    })
}

fn input_paths(inputs: &EmbeddedArgs) -> [&PathBuf; 3] {
    [&inputs.model, &inputs.topology, &inputs.embedding]
}

fn scan(a: &ScanArgs) -> Result<Output> {
    let cs_list: Vec<f64> = match (a.from, a.to) {
        (Some(from), Some(to)) => {
            if a.points < 2 {
                return Err(invalid("--points must be at least 2"));
            }
            let step = (to - from) / (a.points - 1) as f64;
            (0..a.points).map(|i| from + step * i as f64).collect()
        }
        _ => a.cs.clone(),
    };
    let l = load(&a.inputs)?;
    let builder = embedding_builder(&l.model, &l.embedding, &l.topology, DEFAULT_H_RANGE, DEFAULT_J_RANGE);
    let records = chain_scan(builder, &a.anneal.annealer(), &cs_list, a.shots, l.model.graph(), a.seed)?;
    Ok(Output::new(scan_to_csv(&records)).inputs(input_paths(&a.inputs)).seed(a.seed))
}

fn tune(a: &TuneArgs) -> Result<Output> {
    let l = load(&a.inputs)?;
    let config = TunerConfig {
        cb_interval: [a.cb_lo, a.cb_hi],
        cs_interval: a.cs_lo.zip(a.cs_hi).map(|(lo, hi)| [lo, hi]),
        shots_per_step: a.shots,
        width_tol: a.width_tol,
        max_steps: a.max_steps,
        seed: a.seed,
    };
    let default_hi = choi_bound_global(&l.model)?.magnitude;
    let builder = embedding_builder(&l.model, &l.embedding, &l.topology, DEFAULT_H_RANGE, DEFAULT_J_RANGE);
    let trace = binary_search_chain_strength(builder, &a.anneal.annealer(), &config, default_hi)?;
    Ok(Output::new(trace.to_csv()).inputs(input_paths(&a.inputs)).seed(a.seed))
}

fn stats(a: &StatsArgs) -> Result<Output> {
    let l = load(&a.inputs)?;
    let report = validate(&l.embedding, l.model.graph(), &l.topology);
    let mut body = json!({
        "valid": report.is_valid(),
        "chain_lengths": chain_length_histogram(&l.embedding),
    });
    let mut inputs: Vec<PathBuf> = input_paths(&a.inputs).into_iter().cloned().collect();
    if let Some(path) = &a.samples {
        let strength = match (a.cs, l.embedding.chain_strength()) {
            (Some(cs), _) => ChainStrength::Uniform(cs),
            (None, Some(s)) => s.clone(),
            (None, None) => ChainStrength::Uniform(1.0),
        };
        let em = embed_model(&l.model, &l.embedding, &l.topology, &strength)?;
        let ss = read_sample_set(path)?;
        body["avg_chain_break_rate"] = json!(avg_chain_break_rate(&ss, &em)?);
        body["corruption"] = serde_json::to_value(coupler_corruption_stats(&ss, &em)?)?;
        inputs.push(path.clone());
    }
    Ok(Output::json(&body)?.inputs(&inputs))
}
