//! Reference editors the optimizer is compared against.
//!
//! * [`randseg`]: fixed-length segments, each on a uniformly drawn camera.
//! * [`ranking`]: holds a shot for a normally distributed duration, then cuts
//!   to the best-scoring camera.
//! * [`fsm`]: a data-driven state machine whose states are cameras and whose
//!   transitions are triggered by indicators or by dwell timeouts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::BaselineError;
use crate::model::{EditDecisionList, Scenario, ShotKind};
use crate::scoring::ScoreMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineParams {
    #[serde(default = "default_randseg_n")]
    pub randseg_n: usize,
    #[serde(default = "default_ranking_mean")]
    pub ranking_mean: f64,
    #[serde(default = "default_ranking_std")]
    pub ranking_std: f64,
    /// State machine for [`fsm`]; `None` uses [`default_fsm_spec`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fsm_spec: Option<FsmSpec>,
    #[serde(default)]
    pub rng_seed: u64,
}

fn default_randseg_n() -> usize {
    30
}

fn default_ranking_mean() -> f64 {
    40.0
}

fn default_ranking_std() -> f64 {
    10.0
}

impl Default for BaselineParams {
    fn default() -> Self {
        BaselineParams {
            randseg_n: default_randseg_n(),
            ranking_mean: default_ranking_mean(),
            ranking_std: default_ranking_std(),
            fsm_spec: None,
            rng_seed: 0,
        }
    }
}

impl BaselineParams {
    pub fn validate(&self) -> Result<(), BaselineError> {
        if self.randseg_n == 0 {
            return Err(BaselineError::Param { name: "randseg_n", msg: "must be at least 1".into() });
        }
        if !(self.ranking_mean.is_finite() && self.ranking_mean > 0.0) {
            return Err(BaselineError::Param { name: "ranking_mean", msg: "must be finite and > 0".into() });
        }
        if !(self.ranking_std.is_finite() && self.ranking_std >= 0.0) {
            return Err(BaselineError::Param { name: "ranking_std", msg: "must be finite and >= 0".into() });
        }
        Ok(())
    }
}

/// One state of the machine; states are identified by camera id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsmState {
    pub camera: String,
    /// Instances the state must be held before any rule may leave it.
    #[serde(default)]
    pub min_dwell: usize,
    /// Once the state has been held this many instances and no rule fires,
    /// the default transition is taken.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dwell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_next: Option<String>,
}

/// Indicator-triggered transition: when camera `when` is marked, go to
/// `target`, optionally only from the listed states.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsmRule {
    pub when: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub from: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsmSpec {
    pub initial: String,
    #[serde(default)]
    pub states: Vec<FsmState>,
    /// Checked in order; the first firing rule wins.
    #[serde(default)]
    pub rules: Vec<FsmRule>,
}

/// Rules for every event camera (blackboards first, student shot last), and
/// a medium/overview/medium cycle while nothing happens.
pub fn default_fsm_spec(s: &Scenario) -> FsmSpec {
    let id_of = |kind: ShotKind| s.cameras.iter().find(|c| c.kind == kind).map(|c| c.id.clone());
    let priority = [
        ShotKind::LeftBlackboardCloseUp,
        ShotKind::RightBlackboardCloseUp,
        ShotKind::SlideCloseUp,
        ShotKind::LeftMedium,
        ShotKind::RightMedium,
        ShotKind::OverviewLong,
        ShotKind::StudentLong,
    ];
    let rules = priority
        .iter()
        .filter_map(|&k| id_of(k))
        .map(|id| FsmRule { when: id.clone(), target: id, from: Vec::new() })
        .collect();

    let cycle: Vec<String> = [ShotKind::LeftMedium, ShotKind::OverviewLong, ShotKind::RightMedium, ShotKind::StudentLong]
        .iter()
        .filter_map(|&k| id_of(k))
        .collect();
    let home = cycle.first().cloned().unwrap_or_else(|| s.cameras[0].id.clone());
    let states = s
        .cameras
        .iter()
        .map(|c| {
            let next = match cycle.iter().position(|id| *id == c.id) {
                Some(i) => cycle[(i + 1) % cycle.len()].clone(),
                None => home.clone(),
            };
            let max_dwell = match c.kind {
                ShotKind::StudentLong | ShotKind::OverviewLong => 15,
                ShotKind::SlideCloseUp => 20,
                _ => 40,
            };
            FsmState {
                camera: c.id.clone(),
                min_dwell: 3,
                max_dwell: Some(max_dwell),
                default_next: (next != c.id).then_some(next),
            }
        })
        .collect();
    FsmSpec { initial: home, states, rules }
}

fn check_scenario(s: &Scenario) -> Result<(), BaselineError> {
    if s.len == 0 || s.cameras.is_empty() {
        return Err(BaselineError::EmptyScenario);
    }
    Ok(())
}

pub fn randseg(s: &Scenario, params: &BaselineParams) -> Result<EditDecisionList, BaselineError> {
    params.validate()?;
    check_scenario(s)?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let cams = s.num_cameras();
    let mut seq = Vec::with_capacity(s.len);
    while seq.len() < s.len {
        let c = rng.random_range(0..cams);
        let n = params.randseg_n.min(s.len - seq.len());
        seq.extend(std::iter::repeat_n(c, n));
    }
    Ok(EditDecisionList::from_sequence(&s.camera_ids(), &seq))
}

fn sample_duration(dist: Option<&Normal<f64>>, mean: f64, rng: &mut ChaCha8Rng, len: usize) -> usize {
    let d = match dist {
        Some(n) => n.sample(rng),
        None => mean,
    };
    (d.round().max(1.0) as usize).min(len)
}

pub fn ranking(s: &Scenario, scores: &ScoreMatrix, params: &BaselineParams) -> Result<EditDecisionList, BaselineError> {
    let mut seq = Vec::with_capacity(s.len);
    for (c, d) in ranking_shots(s, scores, params)? {
        seq.extend(std::iter::repeat_n(c, d));
    }
    Ok(EditDecisionList::from_sequence(&s.camera_ids(), &seq))
}

/// The `(camera, duration)` shots chosen by [`ranking`] before adjacent
/// shots on the same camera are merged.
pub fn ranking_shots(
    s: &Scenario,
    scores: &ScoreMatrix,
    params: &BaselineParams,
) -> Result<Vec<(usize, usize)>, BaselineError> {
    params.validate()?;
    check_scenario(s)?;
    if scores.cameras() != s.num_cameras() || scores.len() != s.len {
        return Err(BaselineError::Param {
            name: "scores",
            msg: format!("score matrix is {}x{}, scenario is {}x{}", scores.cameras(), scores.len(), s.num_cameras(), s.len),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    let normal = if params.ranking_std > 0.0 {
        Some(Normal::new(params.ranking_mean, params.ranking_std).expect("validated normal parameters"))
    } else {
        None
    };
    let mut shots = Vec::new();
    let mut t = 0;
    while t < s.len {
        let d = sample_duration(normal.as_ref(), params.ranking_mean, &mut rng, s.len - t);
        shots.push((scores.argmax_at(t), d));
        t += d;
    }
    Ok(shots)
}

struct CompiledState {
    min_dwell: usize,
    max_dwell: Option<usize>,
    default_next: Option<usize>,
}

struct CompiledRule {
    when: usize,
    target: usize,
    from: Vec<usize>,
}

fn resolve(s: &Scenario, id: &str) -> Result<usize, BaselineError> {
    s.camera_index(id).ok_or_else(|| BaselineError::UnknownCamera(id.to_string()))
}

/// Camera index per instance produced by running `spec` over the
/// scenario's indicators.
pub fn fsm_sequence(s: &Scenario, spec: &FsmSpec) -> Result<Vec<usize>, BaselineError> {
    check_scenario(s)?;
    let mut states: Vec<CompiledState> =
        (0..s.num_cameras()).map(|_| CompiledState { min_dwell: 0, max_dwell: None, default_next: None }).collect();
    for st in &spec.states {
        let i = resolve(s, &st.camera)?;
        states[i] = CompiledState {
            min_dwell: st.min_dwell,
            max_dwell: st.max_dwell,
            default_next: st.default_next.as_deref().map(|id| resolve(s, id)).transpose()?,
        };
    }
    let rules = spec
        .rules
        .iter()
        .map(|r| {
            Ok(CompiledRule {
                when: resolve(s, &r.when)?,
                target: resolve(s, &r.target)?,
                from: r.from.iter().map(|id| resolve(s, id)).collect::<Result<_, _>>()?,
            })
        })
        .collect::<Result<Vec<_>, BaselineError>>()?;

    let mut current = resolve(s, &spec.initial)?;
    // instances the current state has been on air before `t`
    let mut dwell = 0usize;
    let mut seq = Vec::with_capacity(s.len);
    for t in 0..s.len {
        let st = &states[current];
        let fired = rules
            .iter()
            .find(|r| s.cameras[r.when].indicator[t] == 1 && (r.from.is_empty() || r.from.contains(&current)));
        let next = match fired {
            Some(_) if t > 0 && dwell < st.min_dwell => current,
            Some(r) => r.target,
            None => match (st.max_dwell, st.default_next) {
                (Some(m), Some(n)) if dwell >= m => n,
                _ => current,
            },
        };
        if next == current && t > 0 {
            dwell += 1;
        } else {
            current = next;
            dwell = 1;
        }
        seq.push(current);
    }
    Ok(seq)
}

pub fn fsm(s: &Scenario, params: &BaselineParams) -> Result<EditDecisionList, BaselineError> {
    params.validate()?;
    check_scenario(s)?;
    let seq = match &params.fsm_spec {
        Some(spec) => fsm_sequence(s, spec)?,
        None => fsm_sequence(s, &default_fsm_spec(s))?,
    };
    Ok(EditDecisionList::from_sequence(&s.camera_ids(), &seq))
}
