use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use lectern::baselines::{fsm, randseg, ranking, BaselineParams};
use lectern::benchmark::{default_methods, evaluate, optimize, run_pipeline, PipelineOutput};
use lectern::detectors::{detect_scenario, DetectorParams};
use lectern::io::{
    load_config, load_edl, load_scenario, read_json_file, save_edl, save_scenario, to_canonical_json, write_canonical,
    write_text,
};
use lectern::metrics::{compare_csv, compare_text, timeline_svg, CompareRow, MetricsReport, Summary};
use lectern::model::{EditConfig, LookAhead, Scenario};
use lectern::scoring::semantic_scores;
use lectern::simgen::{benchmark_scripts, generate, EventScript, FeatureDetail, NoiseLevels};
use lectern::solver::SolverChoice;

/// Semantics-driven multi-camera lecture editing.
#[derive(Parser)]
#[command(name = "lectern", version, about)]
struct Cli {
    /// Also record wall-clock stage timings in the output manifest (makes the
    /// manifest differ between runs).
    #[arg(long, global = true)]
    record_timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the event detectors on a scenario's feature streams and write the
    /// scenario back with detected indicators.
    Detect(DetectArgs),
    /// Write the semantic score matrix as CSV (one row per camera).
    Score(ScoreArgs),
    /// Optimize the camera sequence and write an edit decision list.
    Edit(EditArgs),
    /// Produce an edit decision list with a comparison editor.
    Baseline(BaselineArgs),
    /// Compute edit statistics for an edit decision list.
    Evaluate(EvaluateArgs),
    /// Tabulate several metrics reports.
    Compare(CompareArgs),
    /// Generate synthetic scenarios from an event script or the benchmark suite.
    Simulate(SimulateArgs),
    /// Run every method on every scenario and write the comparison table.
    Benchmark(BenchmarkArgs),
    /// Write the default edit configuration.
    DefaultConfig(OutArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Detector parameters (JSON); flags below override individual fields.
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    ar_window: Option<usize>,
    #[arg(long)]
    ar_threshold: Option<f64>,
    #[arg(long)]
    entropy_bins: Option<usize>,
    #[arg(long)]
    drop_window: Option<usize>,
    /// Fixed drop threshold; by default half the series standard deviation.
    #[arg(long)]
    drop_threshold: Option<f64>,
    #[arg(long)]
    count_min: Option<u32>,
    #[arg(long)]
    position_low: Option<f64>,
    #[arg(long)]
    position_high: Option<f64>,
    #[arg(long)]
    prob_threshold: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    scenario: PathBuf,
    /// Edit configuration (JSON); defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// Look-ahead of one instance.
    Online,
    /// Look-ahead of `--look-ahead` instances.
    Lookahead,
    /// Whole timeline at once.
    Offline,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Paper,
    Exact,
}

#[derive(Args)]
struct EditArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Defaults to the configuration's look_ahead.
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    /// Look-ahead in instances for `--mode lookahead`.
    #[arg(long)]
    look_ahead: Option<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    solver: SolverArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaselineMethod {
    Randseg,
    Ranking,
    Fsm,
}

#[derive(Args)]
struct BaselineArgs {
    #[arg(long, value_enum)]
    method: BaselineMethod,
    #[arg(long)]
    scenario: PathBuf,
    /// Edit configuration, used by `ranking` for the semantic scores.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Baseline parameters (JSON).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Overrides the parameters' rng_seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
    Text,
    Svg,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    edl: PathBuf,
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    /// `svg` draws the camera-selection timeline instead of the statistics.
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct CompareArgs {
    /// Metrics reports as `PATH` or `NAME=PATH`; the name defaults to the file stem.
    #[arg(required = true)]
    reports: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Event script (JSON); writes one scenario to `--out`.
    #[arg(long, conflicts_with = "suite")]
    script: Option<PathBuf>,
    /// Generate the ten-scenario benchmark suite into the `--out` directory.
    #[arg(long)]
    suite: bool,
    /// Root seed of the suite.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep full slide frames and flow fields (large) instead of their score series.
    #[arg(long)]
    raw_features: bool,
    /// Generate the suite without noise.
    #[arg(long)]
    zero_noise: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchmarkArgs {
    /// Directory of scenario files (`*.json`, sorted by name).
    #[arg(long, conflicts_with = "suite")]
    scenarios: Option<PathBuf>,
    /// Use the synthetic benchmark suite generated from `--seed`.
    #[arg(long)]
    suite: bool,
    /// Root seed for the suite and the baselines.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Baseline parameters (JSON).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Maximum number of cells run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

/// Provenance written next to every output.
struct Manifest {
    command: &'static str,
    inputs: Vec<(String, PathBuf)>,
    config: Option<Value>,
    seed: Option<u64>,
    outputs: Vec<PathBuf>,
    timings: Vec<(String, f64)>,
    record_timings: bool,
    started: Instant,
}

impl Manifest {
    fn new(command: &'static str, record_timings: bool) -> Self {
        Manifest {
            command,
            inputs: Vec::new(),
            config: None,
            seed: None,
            outputs: Vec::new(),
            timings: Vec::new(),
            record_timings,
            started: Instant::now(),
        }
    }

    fn input(&mut self, role: &str, path: &Path) {
        self.inputs.push((role.to_string(), path.to_path_buf()));
    }

    fn config<T: Serialize>(&mut self, cfg: &T) -> Result<()> {
        self.config = Some(serde_json::to_value(cfg)?);
        Ok(())
    }

    fn stage(&mut self, name: &str) {
        let now = Instant::now();
        self.timings.push((name.to_string(), now.duration_since(self.started).as_secs_f64()));
        self.started = now;
    }

    fn write(&self, path: &Path) -> Result<()> {
        let inputs: Vec<Value> = self
            .inputs
            .iter()
            .map(|(role, p)| Ok(json!({ "role": role, "path": p.display().to_string(), "sha256": file_sha256(p)? })))
            .collect::<Result<_>>()?;
        let mut doc = json!({
            "tool": "lectern",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": inputs,
            "outputs": self.outputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        });
        if let Some(cfg) = &self.config {
            let text = to_canonical_json(cfg)?;
            doc["config_sha256"] = Value::String(hex(&Sha256::digest(text.as_bytes())));
        }
        if let Some(seed) = self.seed {
            doc["seed"] = json!(seed);
        }
        if self.record_timings {
            doc["timings_s"] = Value::Object(self.timings.iter().map(|(k, v)| (k.clone(), json!(v))).collect());
        }
        write_canonical(&doc, path)?;
        Ok(())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn file_sha256(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(hex(&Sha256::digest(&bytes)))
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn config_from(path: Option<&Path>, m: &mut Manifest) -> Result<EditConfig> {
    let cfg = match path {
        Some(p) => {
            m.input("config", p);
            load_config(p)?
        }
        None => EditConfig::default(),
    };
    m.config(&cfg)?;
    Ok(cfg)
}

fn scenario_from(path: &Path, m: &mut Manifest) -> Result<Scenario> {
    m.input("scenario", path);
    Ok(load_scenario(path)?)
}

fn baseline_params_from(path: Option<&Path>, m: &mut Manifest) -> Result<BaselineParams> {
    let params = match path {
        Some(p) => {
            m.input("params", p);
            read_json_file::<BaselineParams>(p)?
        }
        None => BaselineParams::default(),
    };
    params.validate()?;
    Ok(params)
}

fn detect(a: DetectArgs, m: &mut Manifest) -> Result<()> {
    let s = scenario_from(&a.scenario, m)?;
    let mut p = match &a.params {
        Some(path) => {
            m.input("params", path);
            read_json_file::<DetectorParams>(path)?
        }
        None => DetectorParams::default(),
    };
    macro_rules! set {
        ($($f:ident),*) => { $(if let Some(v) = a.$f { p.$f = v; })* };
    }
    set!(ar_window, ar_threshold, entropy_bins, drop_window, count_min, prob_threshold);
    if a.drop_threshold.is_some() {
        p.drop_threshold = a.drop_threshold;
    }
    if let Some(lo) = a.position_low {
        p.position_bounds.0 = lo;
    }
    if let Some(hi) = a.position_high {
        p.position_bounds.1 = hi;
    }
    m.config(&p)?;
    m.stage("load");
    let detected = detect_scenario(&s, &p)?;
    m.stage("detect");
    save_scenario(&detected, &a.out)?;
    m.outputs.push(a.out.clone());
    m.write(&sidecar(&a.out))
}

fn score(a: ScoreArgs, m: &mut Manifest) -> Result<()> {
    let s = scenario_from(&a.scenario, m)?;
    let cfg = config_from(a.config.as_deref(), m)?;
    let scores = semantic_scores(&s, &cfg);
    write_text(&a.out, &scores.to_csv(&s.camera_ids()))?;
    m.outputs.push(a.out.clone());
    m.write(&sidecar(&a.out))
}

fn edit(a: EditArgs, m: &mut Manifest) -> Result<()> {
    let s = scenario_from(&a.scenario, m)?;
    let cfg = config_from(a.config.as_deref(), m)?;
    let look_ahead = match (a.mode, a.look_ahead) {
        (Some(Mode::Online), _) => LookAhead::Finite(1),
        (Some(Mode::Offline), _) => LookAhead::Infinite,
        (Some(Mode::Lookahead), Some(0)) => bail!("--look-ahead must be at least 1"),
        (Some(Mode::Lookahead), Some(l)) => LookAhead::Finite(l),
        (Some(Mode::Lookahead), None) => bail!("--mode lookahead requires --look-ahead N"),
        (None, Some(_)) => bail!("--look-ahead is only used with --mode lookahead"),
        (None, None) => cfg.look_ahead,
    };
    let solver = match a.solver {
        SolverArg::Paper => SolverChoice::Paper,
        SolverArg::Exact => SolverChoice::Exact,
    };
    m.stage("load");
    let (result, edl) = optimize(&s, &cfg, look_ahead, solver)?;
    m.stage("solve");
    save_edl(&edl, &a.out)?;
    m.outputs.push(a.out.clone());
    m.write(&sidecar(&a.out))?;
    println!("total_reward {}", result.total_reward);
    Ok(())
}

fn baseline(a: BaselineArgs, m: &mut Manifest) -> Result<()> {
    let s = scenario_from(&a.scenario, m)?;
    let cfg = config_from(a.config.as_deref(), m)?;
    let mut params = baseline_params_from(a.params.as_deref(), m)?;
    if let Some(seed) = a.seed {
        params.rng_seed = seed;
    }
    m.seed = Some(params.rng_seed);
    let edl = match a.method {
        BaselineMethod::Randseg => randseg(&s, &params)?,
        BaselineMethod::Ranking => ranking(&s, &semantic_scores(&s, &cfg), &params)?,
        BaselineMethod::Fsm => fsm(&s, &params)?,
    };
    save_edl(&edl, &a.out)?;
    m.outputs.push(a.out.clone());
    m.write(&sidecar(&a.out))
}

fn report_csv(r: &MetricsReport) -> String {
    format!(
        "R_avg,r_max,r_trans,n_sw,L_avg,T,total_reward\n{},{},{},{},{},{},{}\n",
        r.r_avg, r.r_max, r.r_trans, r.n_sw, r.l_avg, r.len, r.total_reward
    )
}

fn report_text(r: &MetricsReport) -> String {
    format!(
        "R_avg    {}\nr_max    {}\nr_trans  {}\nn_sw     {}\nL_avg    {}\nT        {}\ntotal    {}\n",
        r.r_avg, r.r_max, r.r_trans, r.n_sw, r.l_avg, r.len, r.total_reward
    )
}

fn evaluate_cmd(a: EvaluateArgs, m: &mut Manifest) -> Result<()> {
    let s = scenario_from(&a.scenario, m)?;
    let cfg = config_from(a.config.as_deref(), m)?;
    m.input("edl", &a.edl);
    let edl = load_edl(&a.edl)?;
    let report = evaluate(&s, &cfg, &edl)?;
    let text = match a.format {
        ReportFormat::Json => to_canonical_json(&report)?,
        ReportFormat::Csv => report_csv(&report),
        ReportFormat::Text => report_text(&report),
        ReportFormat::Svg => timeline_svg(&edl, &s.camera_ids())?,
    };
    write_text(&a.out, &text)?;
    m.outputs.push(a.out.clone());
    m.write(&sidecar(&a.out))
}

fn compare(a: CompareArgs, m: &mut Manifest) -> Result<()> {
    let mut rows = Vec::new();
    for spec in &a.reports {
        let (name, path) = match spec.split_once('=') {
            Some((n, p)) => (n.to_string(), PathBuf::from(p)),
            None => {
                let p = PathBuf::from(spec);
                let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| spec.clone());
                (stem, p)
            }
        };
        m.input("report", &path);
        let report: MetricsReport = read_json_file(&path)?;
        rows.push(CompareRow::ok(name, Summary::from(&report)));
    }
    write_text(&a.out, &render_table(&rows, a.format)?)?;
    m.outputs.push(a.out.clone());
    m.write(&sidecar(&a.out))
}

fn render_table(rows: &[CompareRow], format: TableFormat) -> Result<String> {
    Ok(match format {
        TableFormat::Text => compare_text(rows),
        TableFormat::Csv => compare_csv(rows),
        TableFormat::Json => to_canonical_json(&rows)?,
    })
}

fn detail(raw: bool) -> FeatureDetail {
    if raw {
        FeatureDetail::Raw
    } else {
        FeatureDetail::Scores
    }
}

fn simulate(a: SimulateArgs, m: &mut Manifest) -> Result<()> {
    match (&a.script, a.suite) {
        (Some(path), false) => {
            m.input("script", path);
            let mut script: EventScript = read_json_file(path)?;
            if a.raw_features {
                script.features = FeatureDetail::Raw;
            }
            m.seed = Some(script.rng_seed);
            let s = generate(&script)?;
            save_scenario(&s, &a.out)?;
            m.outputs.push(a.out.clone());
            m.write(&sidecar(&a.out))
        }
        (None, true) => {
            let noise = if a.zero_noise { NoiseLevels::zero() } else { NoiseLevels::default() };
            m.seed = Some(a.seed);
            for (i, script) in benchmark_scripts(a.seed, noise, detail(a.raw_features)).iter().enumerate() {
                let script_path = a.out.join(format!("script_{i:02}.json"));
                write_canonical(script, &script_path)?;
                let path = a.out.join(format!("scenario_{i:02}.json"));
                save_scenario(&generate(script)?, &path)?;
                m.outputs.push(script_path);
                m.outputs.push(path);
            }
            m.write(&a.out.join("manifest.json"))
        }
        _ => bail!("pass either --script FILE or --suite"),
    }
}

fn benchmark(a: BenchmarkArgs, m: &mut Manifest) -> Result<bool> {
    let cfg = config_from(a.config.as_deref(), m)?;
    let params = baseline_params_from(a.params.as_deref(), m)?;
    m.seed = Some(a.seed);
    let scenarios: Vec<(String, Scenario)> = match (&a.scenarios, a.suite) {
        (Some(dir), false) => {
            let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
                .with_context(|| format!("reading {}", dir.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json") && !p.to_string_lossy().ends_with("manifest.json"))
                .collect();
            paths.sort();
            let mut out = Vec::new();
            for p in paths {
                let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                // event scripts and other documents in the directory are skipped
                if let Ok(s) = load_scenario(&p) {
                    m.input("scenario", &p);
                    out.push((name, s.without_features()));
                }
            }
            if out.is_empty() {
                bail!("no scenario files in {}", dir.display());
            }
            out
        }
        (None, true) => benchmark_scripts(a.seed, NoiseLevels::default(), FeatureDetail::None)
            .iter()
            .enumerate()
            .map(|(i, s)| Ok((format!("scenario_{i:02}"), generate(s)?)))
            .collect::<Result<_>>()?,
        _ => bail!("pass either --scenarios DIR or --suite"),
    };
    m.stage("load");
    let methods = default_methods(&cfg, &params);
    let out: PipelineOutput = run_pipeline(&scenarios, &cfg, &params, &methods, a.seed, a.jobs)?;
    m.stage("run");
    let files = [
        ("table.txt", compare_text(&out.table)),
        ("table.csv", compare_csv(&out.table)),
        ("cells.json", to_canonical_json(&out.cells)?),
    ];
    for (name, text) in files {
        let p = a.out.join(name);
        write_text(&p, &text)?;
        m.outputs.push(p);
    }
    m.write(&a.out.join("manifest.json"))?;
    print!("{}", compare_text(&out.table));
    Ok(out.all_ok())
}

fn run(cli: Cli) -> Result<bool> {
    let t = cli.record_timings;
    match cli.command {
        Command::Detect(a) => detect(a, &mut Manifest::new("detect", t))?,
        Command::Score(a) => score(a, &mut Manifest::new("score", t))?,
        Command::Edit(a) => edit(a, &mut Manifest::new("edit", t))?,
        Command::Baseline(a) => baseline(a, &mut Manifest::new("baseline", t))?,
        Command::Evaluate(a) => evaluate_cmd(a, &mut Manifest::new("evaluate", t))?,
        Command::Compare(a) => compare(a, &mut Manifest::new("compare", t))?,
        Command::Simulate(a) => simulate(a, &mut Manifest::new("simulate", t))?,
        Command::Benchmark(a) => return benchmark(a, &mut Manifest::new("benchmark", t)),
        Command::DefaultConfig(a) => {
            let mut m = Manifest::new("default-config", t);
            let cfg = EditConfig::default();
            m.config(&cfg)?;
            write_canonical(&cfg, &a.out)?;
            m.outputs.push(a.out.clone());
            m.write(&sidecar(&a.out))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some benchmark cells failed; see the table");
            ExitCode::from(1)
        }
        Err(e) => {
            // library errors already embed their source in the message
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let c = cause.to_string();
                if !msg.contains(&c) {
                    msg = format!("{msg}: {c}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
