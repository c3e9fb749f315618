//! Semantic focus scores and the cinematographic rule terms.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::ConfigError;
use crate::model::{EditConfig, Scenario, ShotKind};

/// Semantic focus score per camera and instance.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreMatrix {
    cameras: usize,
    len: usize,
    values: Vec<f64>,
}

impl ScoreMatrix {
    /// `rows[c][t]`; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let cameras = rows.len();
        let len = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == len), "ragged score rows");
        ScoreMatrix { cameras, len, values: rows.into_iter().flatten().collect() }
    }

    pub fn cameras(&self) -> usize {
        self.cameras
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, camera: usize, t: usize) -> f64 {
        self.values[camera * self.len + t]
    }

    pub fn row(&self, camera: usize) -> &[f64] {
        &self.values[camera * self.len..(camera + 1) * self.len]
    }

    /// Camera with the highest score at `t`, lowest index on ties.
    pub fn argmax_at(&self, t: usize) -> usize {
        let mut best = 0;
        for c in 1..self.cameras {
            if self.get(c, t) > self.get(best, t) {
                best = c;
            }
        }
        best
    }

    /// CSV with one row per camera: `camera,0,1,...` header then values.
    pub fn to_csv(&self, camera_ids: &[String]) -> String {
        let mut out = String::from("camera");
        for t in 0..self.len {
            out.push(',');
            out.push_str(&t.to_string());
        }
        out.push('\n');
        for (c, id) in camera_ids.iter().enumerate().take(self.cameras) {
            out.push_str(id);
            for v in self.row(c) {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// `r_e[c][t] = s_kind + I_c[t] * w_kind`.
pub fn semantic_scores(s: &Scenario, cfg: &EditConfig) -> ScoreMatrix {
    let rows = s
        .cameras
        .iter()
        .map(|cam| {
            let (base, weight) = (cfg.defaults.get(cam.kind), cfg.weights.get(cam.kind));
            cam.indicator.iter().map(|&i| base + f64::from(i) * weight).collect()
        })
        .collect();
    ScoreMatrix::from_rows(rows)
}

/// Transition suitability between shot kinds: `-epsilon` for cuts that break
/// a rule, `+epsilon` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct TransitionMatrix {
    epsilon: f64,
    entries: [[f64; 7]; 7],
}

impl TransitionMatrix {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn get(&self, from: ShotKind, to: ShotKind) -> f64 {
        self.entries[from.index()][to.index()]
    }

    pub fn is_favorable(&self, from: ShotKind, to: ShotKind) -> bool {
        self.get(from, to) > 0.0
    }
}

pub fn build_transition_matrix(
    violations: &BTreeMap<ShotKind, BTreeSet<ShotKind>>,
    epsilon: f64,
) -> Result<TransitionMatrix, ConfigError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(ConfigError::Field { field: "epsilon".into(), msg: format!("must be finite and > 0, got {epsilon}") });
    }
    let mut entries = [[epsilon; 7]; 7];
    for (from, targets) in violations {
        for to in targets {
            if from == to {
                return Err(ConfigError::Field {
                    field: "violation_sets".into(),
                    msg: format!("`{from}` cannot violate a transition to itself"),
                });
            }
            entries[from.index()][to.index()] = -epsilon;
        }
    }
    Ok(TransitionMatrix { epsilon, entries })
}

/// Soft penalty on the current run length `run_len`, always in `(-c_sw, 0)`.
/// Staying is penalized as the run grows past `l_max`; switching is penalized
/// while the run is shorter than `l_min`.
pub fn switch_penalty(run_len: f64, switched: bool, cfg: &EditConfig) -> f64 {
    let sigmoid = |x: f64| 1.0 / (1.0 + x.exp());
    if switched {
        cfg.c_sw * (sigmoid(cfg.l_min - run_len) - 1.0)
    } else {
        cfg.c_sw * (sigmoid(run_len - cfg.l_max) - 1.0)
    }
}

/// B-roll bonus for picking an insert shot after a long-held view.
pub fn broll_incentive(run_len: f64, target: ShotKind, cfg: &EditConfig) -> f64 {
    if run_len > cfg.l_mean() / 2.0 && cfg.broll_set.contains(&target) {
        cfg.c_broll
    } else {
        0.0
    }
}

/// The full editing objective over one scenario: semantic, B-roll and
/// switch terms of every step.
#[derive(Clone, Debug)]
pub struct Objective<'a> {
    scores: &'a ScoreMatrix,
    kinds: Vec<ShotKind>,
    tmat: TransitionMatrix,
    cfg: EditConfig,
    // switch_penalty and broll_incentive tabulated for run lengths below the table size
    stay_pen: Vec<f64>,
    switch_pen: Vec<f64>,
    broll: Vec<[f64; 7]>,
}

impl<'a> Objective<'a> {
    pub fn new(scores: &'a ScoreMatrix, kinds: Vec<ShotKind>, cfg: &EditConfig) -> Result<Self, ConfigError> {
        cfg.validate()?;
        assert_eq!(kinds.len(), scores.cameras(), "one shot kind per score row");
        let tmat = build_transition_matrix(&cfg.violation_sets, cfg.epsilon)?;
        let table = cfg.l_cap() + 2;
        let stay_pen = (0..table).map(|l| switch_penalty(l as f64, false, cfg)).collect();
        let switch_pen = (0..table).map(|l| switch_penalty(l as f64, true, cfg)).collect();
        let broll = (0..table)
            .map(|l| {
                let mut row = [0.0; 7];
                for k in ShotKind::ALL {
                    row[k.index()] = broll_incentive(l as f64, k, cfg);
                }
                row
            })
            .collect();
        Ok(Objective { scores, kinds, tmat, cfg: cfg.clone(), stay_pen, switch_pen, broll })
    }

    pub fn scores(&self) -> &ScoreMatrix {
        self.scores
    }

    pub fn cameras(&self) -> usize {
        self.kinds.len()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn kinds(&self) -> &[ShotKind] {
        &self.kinds
    }

    pub fn transitions(&self) -> &TransitionMatrix {
        &self.tmat
    }

    pub fn config(&self) -> &EditConfig {
        &self.cfg
    }

    /// Reward of putting camera `next` on air at `t` when camera `prev` has
    /// been on air for `run_len` instances.
    pub fn step_reward(&self, prev: usize, next: usize, t: usize, run_len: u32) -> f64 {
        let (kp, kn) = (self.kinds[prev], self.kinds[next]);
        let semantic = self.cfg.lambda_e * self.tmat.get(kp, kn) * self.scores.get(next, t);
        let l = run_len as usize;
        let (broll, sw) = if l < self.stay_pen.len() {
            let sw = if prev == next { self.stay_pen[l] } else { self.switch_pen[l] };
            (self.broll[l][kn.index()], sw)
        } else {
            let lf = f64::from(run_len);
            (broll_incentive(lf, kn, &self.cfg), switch_penalty(lf, prev != next, &self.cfg))
        };
        semantic + self.cfg.lambda_b * broll + self.cfg.lambda_sw * sw
    }
}
