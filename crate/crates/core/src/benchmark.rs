//! End-to-end comparison of editing methods over a set of scenarios.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{fsm, randseg, ranking, BaselineParams};
use crate::error::Error;
use crate::metrics::{compute_metrics, CompareRow, MetricsReport, Summary};
use crate::model::{EditConfig, EditDecisionList, LookAhead, Scenario};
use crate::scoring::{semantic_scores, Objective};
use crate::solver::{initial_state, run_online, SolveResult, SolverChoice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Method {
    Randseg,
    Ranking,
    Fsm,
    Optim { look_ahead: LookAhead, solver: SolverChoice },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSpec {
    pub name: String,
    #[serde(flatten)]
    pub method: Method,
}

impl MethodSpec {
    pub fn new(name: impl Into<String>, method: Method) -> Self {
        MethodSpec { name: name.into(), method }
    }
}

/// Half of `l_min`, rounded, at least one instance.
pub fn half_l_min(cfg: &EditConfig) -> usize {
    ((cfg.l_min / 2.0).round() as usize).max(1)
}

/// The eight comparison rows: three baselines, the exact optimizer at four
/// look-ahead settings, and the single-run-length DP offline.
pub fn default_methods(cfg: &EditConfig, params: &BaselineParams) -> Vec<MethodSpec> {
    let optim = |l| Method::Optim { look_ahead: l, solver: SolverChoice::Exact };
    let l_min = (cfg.l_min.round() as usize).max(1);
    vec![
        MethodSpec::new(format!("Randseg({})", params.randseg_n), Method::Randseg),
        MethodSpec::new("Ranking", Method::Ranking),
        MethodSpec::new("FSM", Method::Fsm),
        MethodSpec::new("Optim(1)", optim(LookAhead::Finite(1))),
        MethodSpec::new(format!("Optim({})", half_l_min(cfg)), optim(LookAhead::Finite(half_l_min(cfg)))),
        MethodSpec::new(format!("Optim({l_min})"), optim(LookAhead::Finite(l_min))),
        MethodSpec::new("Optim(inf)", optim(LookAhead::Infinite)),
        MethodSpec::new(
            "PaperDP(inf)",
            Method::Optim { look_ahead: LookAhead::Infinite, solver: SolverChoice::Paper },
        ),
    ]
}

/// Solves `s` with the configured objective at the given look-ahead.
pub fn optimize(
    s: &Scenario,
    cfg: &EditConfig,
    look_ahead: LookAhead,
    solver: SolverChoice,
) -> Result<(SolveResult, EditDecisionList), Error> {
    cfg.validate()?;
    let scores = semantic_scores(s, cfg);
    let obj = Objective::new(&scores, s.kinds(), cfg)?;
    let ids = s.camera_ids();
    let init = initial_state(&obj, &ids)?;
    let result = run_online(&obj, init, look_ahead, solver)?;
    let edl = EditDecisionList::from_sequence(&ids, &result.sequence);
    Ok((result, edl))
}

/// Produces the edit for one method.
pub fn run_method(s: &Scenario, cfg: &EditConfig, params: &BaselineParams, method: Method) -> Result<EditDecisionList, Error> {
    Ok(match method {
        Method::Randseg => randseg(s, params)?,
        Method::Ranking => ranking(s, &semantic_scores(s, cfg), params)?,
        Method::Fsm => fsm(s, params)?,
        Method::Optim { look_ahead, solver } => optimize(s, cfg, look_ahead, solver)?.1,
    })
}

/// Metrics of `edl` under the configured objective for `s`.
pub fn evaluate(s: &Scenario, cfg: &EditConfig, edl: &EditDecisionList) -> Result<MetricsReport, Error> {
    cfg.validate()?;
    let scores = semantic_scores(s, cfg);
    let obj = Objective::new(&scores, s.kinds(), cfg)?;
    let ids = s.camera_ids();
    let init = initial_state(&obj, &ids)?;
    compute_metrics(edl, &ids, &obj, init)
}

/// Seed for scenario `index` derived from the root seed.
pub fn scenario_seed(root: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(index as u64);
    rng.next_u64()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub scenario: String,
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<MetricsReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edl: Option<EditDecisionList>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Cell {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineOutput {
    /// Scenario-major, in input order.
    pub cells: Vec<Cell>,
    /// One row per method, averaged over scenarios.
    pub table: Vec<CompareRow>,
}

impl PipelineOutput {
    pub fn all_ok(&self) -> bool {
        self.cells.iter().all(Cell::ok)
    }

    pub fn report(&self, scenario: &str, method: &str) -> Option<&MetricsReport> {
        self.cells.iter().find(|c| c.scenario == scenario && c.method == method).and_then(|c| c.report.as_ref())
    }
}

/// Runs every (scenario, method) cell on up to `jobs` threads. Baselines for
/// scenario `i` use seed [`scenario_seed`]`(root_seed, i)`. A failing cell is
/// recorded and the remaining cells still run.
pub fn run_pipeline(
    scenarios: &[(String, Scenario)],
    cfg: &EditConfig,
    params: &BaselineParams,
    methods: &[MethodSpec],
    root_seed: u64,
    jobs: usize,
) -> Result<PipelineOutput, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("cannot start worker pool: {e}")))?;
    let tasks: Vec<(usize, &MethodSpec)> =
        (0..scenarios.len()).flat_map(|i| methods.iter().map(move |m| (i, m))).collect();
    let cells: Vec<Cell> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, m)| {
                let (name, s) = &scenarios[i];
                let p = BaselineParams { rng_seed: scenario_seed(root_seed, i), ..params.clone() };
                let result = run_method(s, cfg, &p, m.method).and_then(|edl| Ok((evaluate(s, cfg, &edl)?, edl)));
                match result {
                    Ok((report, edl)) => Cell {
                        scenario: name.clone(),
                        method: m.name.clone(),
                        report: Some(report),
                        edl: Some(edl),
                        error: None,
                    },
                    Err(e) => Cell {
                        scenario: name.clone(),
                        method: m.name.clone(),
                        report: None,
                        edl: None,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    let table = methods
        .iter()
        .map(|m| {
            let mine: Vec<&Cell> = cells.iter().filter(|c| c.method == m.name).collect();
            let failed = mine.iter().filter(|c| !c.ok()).count();
            if failed > 0 {
                let first = mine.iter().find_map(|c| c.error.as_deref()).unwrap_or_default();
                return CompareRow::failed(&m.name, format!("{failed} of {} cells failed ({first})", mine.len()));
            }
            let reports: Vec<MetricsReport> = mine.iter().filter_map(|c| c.report.clone()).collect();
            match Summary::mean(&reports) {
                Some(s) => CompareRow::ok(&m.name, s),
                None => CompareRow::failed(&m.name, "no scenarios"),
            }
        })
        .collect();
    Ok(PipelineOutput { cells, table })
}
