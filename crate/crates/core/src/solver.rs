//! Camera sequence optimization.
//!
//! Every solver maximizes the same objective: starting from a carried
//! `(camera, run length)` state, the sum over a window of
//! [`Objective::step_reward`] where each step sees the run length of the shot
//! it continues or cuts away from.
//!
//! * [`solve_paper_dp`] keeps one `(R, P, L)` record per `(camera, instance)`
//!   node and costs `C^2` relaxations per instance. It is exact whenever the
//!   objective does not depend on run length, but not in general: the
//!   run length of the best path into a node is not always the one the best
//!   continuation needs.
//! * [`solve_exact_dp`] runs the same forward pass over the expanded state
//!   `(camera, min(run length, cap))` and returns the true optimum.
//! * [`brute_force`] enumerates every sequence; it is the oracle for small
//!   instances.
//!
//! Rewards are accumulated in the same order as [`rescore`], so the total a
//! solver reports is bit-identical to rescoring its sequence.

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::model::LookAhead;
use crate::scoring::Objective;

/// State carried into a solve: the camera on air just before the window and
/// how many instances it has been on air.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitState {
    pub camera: usize,
    pub run_length: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    PaperDp,
    ExactDp,
    BruteForce,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::PaperDp => "paper_dp",
            SolverKind::ExactDp => "exact_dp",
            SolverKind::BruteForce => "brute_force",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    /// Camera index per instance of the window.
    pub sequence: Vec<usize>,
    pub total_reward: f64,
    pub mode: SolverKind,
    /// Predecessor evaluations performed (`R + D` candidates examined).
    pub node_updates: u64,
}

/// Upper bound on sequences [`brute_force`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

fn check_window(obj: &Objective, init: InitState, start: usize, horizon: usize) -> Result<(), SolveError> {
    if horizon == 0 {
        return Err(SolveError::EmptyHorizon);
    }
    if start + horizon > obj.len() {
        return Err(SolveError::OutOfRange { start, end: start + horizon, len: obj.len() });
    }
    if init.camera >= obj.cameras() {
        return Err(SolveError::BadInitialCamera { camera: init.camera, cameras: obj.cameras() });
    }
    Ok(())
}

fn next_run(prev: usize, next: usize, run: u32) -> u32 {
    if prev == next {
        run.saturating_add(1)
    } else {
        1
    }
}

/// Objective value of `sequence` over `start..start + sequence.len()`.
pub fn rescore(obj: &Objective, sequence: &[usize], init: InitState, start: usize) -> Result<f64, SolveError> {
    if start + sequence.len() > obj.len() {
        return Err(SolveError::OutOfRange { start, end: start + sequence.len(), len: obj.len() });
    }
    if init.camera >= obj.cameras() {
        return Err(SolveError::BadInitialCamera { camera: init.camera, cameras: obj.cameras() });
    }
    let (mut prev, mut run) = (init.camera, init.run_length);
    let mut total = 0.0;
    for (i, &c) in sequence.iter().enumerate() {
        if c >= obj.cameras() {
            return Err(SolveError::BadCamera { index: i, value: c });
        }
        total += obj.step_reward(prev, c, start + i, run);
        run = next_run(prev, c, run);
        prev = c;
    }
    Ok(total)
}

/// [`rescore`] for a whole-timeline sequence, checking its length.
pub fn rescore_full(obj: &Objective, sequence: &[usize], init: InitState) -> Result<f64, SolveError> {
    if sequence.len() != obj.len() {
        return Err(SolveError::LengthMismatch { expected: obj.len(), found: sequence.len() });
    }
    rescore(obj, sequence, init, 0)
}

/// Run length at the end of `sequence` when entered from `init`.
pub fn final_state(sequence: &[usize], init: InitState) -> InitState {
    sequence.iter().fold(init, |s, &c| InitState { camera: c, run_length: next_run(s.camera, c, s.run_length) })
}

/// Forward pass with one `(R, P, L)` record per node, then backtrack from the
/// best final node. Ties go to the lowest camera index.
pub fn solve_paper_dp(obj: &Objective, init: InitState, start: usize, horizon: usize) -> Result<SolveResult, SolveError> {
    check_window(obj, init, start, horizon)?;
    let cams = obj.cameras();
    let mut reward = vec![f64::NEG_INFINITY; cams];
    let mut run = vec![0u32; cams];
    reward[init.camera] = 0.0;
    run[init.camera] = init.run_length;
    let mut parent = vec![0usize; horizon * cams];
    let mut updates = 0u64;
    let mut next_reward = vec![0.0; cams];
    let mut next_len = vec![0u32; cams];

    for i in 0..horizon {
        let t = start + i;
        for c in 0..cams {
            let mut best = f64::NEG_INFINITY;
            let mut best_k = 0;
            for k in 0..cams {
                updates += 1;
                if reward[k] == f64::NEG_INFINITY {
                    continue;
                }
                let cand = reward[k] + obj.step_reward(k, c, t, run[k]);
                if cand > best {
                    best = cand;
                    best_k = k;
                }
            }
            next_reward[c] = best;
            next_len[c] = next_run(best_k, c, run[best_k]);
            parent[i * cams + c] = best_k;
        }
        std::mem::swap(&mut reward, &mut next_reward);
        std::mem::swap(&mut run, &mut next_len);
    }

    let mut last = 0;
    for c in 1..cams {
        if reward[c] > reward[last] {
            last = c;
        }
    }
    let mut sequence = vec![0; horizon];
    let mut c = last;
    for i in (0..horizon).rev() {
        sequence[i] = c;
        c = parent[i * cams + c];
    }
    Ok(SolveResult { sequence, total_reward: reward[last], mode: SolverKind::PaperDp, node_updates: updates })
}

/// Exact optimum over the expanded state `(camera, min(run length, cap))`.
///
/// `cap` must be large enough that every run-length dependent term is
/// constant beyond it; see [`crate::model::min_l_cap`].
pub fn solve_exact_dp(
    obj: &Objective,
    init: InitState,
    start: usize,
    horizon: usize,
    cap: usize,
) -> Result<SolveResult, SolveError> {
    check_window(obj, init, start, horizon)?;
    let min = crate::model::min_l_cap(obj.config()) as usize;
    if cap < min {
        return Err(SolveError::BadCap { cap, min });
    }
    let cams = obj.cameras();
    // state index = camera * cap + (run length - 1)
    let states = cams * cap;
    let clamp = |l: u32| (l as usize).min(cap);
    let mut value = vec![f64::NEG_INFINITY; states];
    value[init.camera * cap + clamp(init.run_length) - 1] = 0.0;
    let mut next = vec![f64::NEG_INFINITY; states];
    let mut parent = vec![u32::MAX; horizon * states];
    let mut updates = 0u64;

    for i in 0..horizon {
        let t = start + i;
        next.fill(f64::NEG_INFINITY);
        let back = &mut parent[i * states..(i + 1) * states];
        for k in 0..cams {
            for l in 1..=cap {
                let from = k * cap + l - 1;
                let r = value[from];
                if r == f64::NEG_INFINITY {
                    continue;
                }
                for c in 0..cams {
                    updates += 1;
                    let cand = r + obj.step_reward(k, c, t, l as u32);
                    let to = if c == k { k * cap + (l + 1).min(cap) - 1 } else { c * cap };
                    if cand > next[to] {
                        next[to] = cand;
                        back[to] = from as u32;
                    }
                }
            }
        }
        std::mem::swap(&mut value, &mut next);
    }

    let mut last = 0;
    for s in 1..states {
        if value[s] > value[last] {
            last = s;
        }
    }
    let total = value[last];
    let mut sequence = vec![0; horizon];
    let mut s = last;
    for i in (0..horizon).rev() {
        sequence[i] = s / cap;
        s = parent[i * states + s] as usize;
    }
    Ok(SolveResult { sequence, total_reward: total, mode: SolverKind::ExactDp, node_updates: updates })
}

/// Exhaustive search; ties resolve to the lexicographically smallest
/// sequence.
pub fn brute_force(obj: &Objective, init: InitState, start: usize, horizon: usize) -> Result<SolveResult, SolveError> {
    check_window(obj, init, start, horizon)?;
    let cams = obj.cameras();
    let count = (cams as u64).checked_pow(horizon as u32).filter(|&n| n <= BRUTE_FORCE_LIMIT);
    let Some(count) = count else {
        return Err(SolveError::TooLarge { cameras: cams, horizon, limit: BRUTE_FORCE_LIMIT });
    };
    let mut seq = vec![0usize; horizon];
    let mut best_seq = seq.clone();
    let mut best = f64::NEG_INFINITY;
    for n in 0..count {
        if n > 0 {
            // odometer increment, last position fastest
            let mut pos = horizon - 1;
            loop {
                seq[pos] += 1;
                if seq[pos] < cams {
                    break;
                }
                seq[pos] = 0;
                pos -= 1;
            }
        }
        let r = rescore(obj, &seq, init, start)?;
        if r > best {
            best = r;
            best_seq.copy_from_slice(&seq);
        }
    }
    Ok(SolveResult { sequence: best_seq, total_reward: best, mode: SolverKind::BruteForce, node_updates: count })
}

/// Which solver the online driver calls per chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverChoice {
    Paper,
    Exact,
}

impl std::str::FromStr for SolverChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(SolverChoice::Paper),
            "exact" => Ok(SolverChoice::Exact),
            other => Err(format!("unknown solver `{other}` (expected paper|exact)")),
        }
    }
}

/// Solves the timeline chunk by chunk: each chunk covers the next
/// `look_ahead` instances, is solved from the carried state and committed in
/// full. An infinite (or long enough) look-ahead is a single offline solve.
pub fn run_online(
    obj: &Objective,
    init: InitState,
    look_ahead: LookAhead,
    solver: SolverChoice,
) -> Result<SolveResult, SolveError> {
    let len = obj.len();
    if len == 0 {
        return Err(SolveError::EmptyHorizon);
    }
    let chunk = look_ahead.chunk(len);
    let cap = obj.config().l_cap();
    let mut state = init;
    let mut sequence = Vec::with_capacity(len);
    let mut updates = 0;
    let mut t = 0;
    while t < len {
        let h = chunk.min(len - t);
        let part = match solver {
            SolverChoice::Paper => solve_paper_dp(obj, state, t, h)?,
            SolverChoice::Exact => solve_exact_dp(obj, state, t, h, cap)?,
        };
        updates += part.node_updates;
        state = final_state(&part.sequence, state);
        sequence.extend_from_slice(&part.sequence);
        t += h;
    }
    let total_reward = rescore(obj, &sequence, init, 0)?;
    let mode = match solver {
        SolverChoice::Paper => SolverKind::PaperDp,
        SolverChoice::Exact => SolverKind::ExactDp,
    };
    Ok(SolveResult { sequence, total_reward, mode, node_updates: updates })
}

/// Resolves the configured initial policy against a score matrix: the named
/// camera, or the best-scoring camera at instance 0.
pub fn initial_state(obj: &Objective, camera_ids: &[String]) -> Result<InitState, crate::error::Error> {
    let policy = &obj.config().initial;
    let camera = match &policy.camera {
        Some(id) => camera_ids
            .iter()
            .position(|c| c == id)
            .ok_or_else(|| crate::error::Error::Invalid(format!("initial camera `{id}` is not in the scenario")))?,
        None if obj.is_empty() => 0,
        None => obj.scores().argmax_at(0),
    };
    Ok(InitState { camera, run_length: policy.run_length })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{EditConfig, ShotKind};
    use crate::scoring::ScoreMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn objective<'a>(m: &'a ScoreMatrix, kinds: &[ShotKind], cfg: &EditConfig) -> Objective<'a> {
        Objective::new(m, kinds.to_vec(), cfg).unwrap()
    }

    const INIT: InitState = InitState { camera: 0, run_length: 1 };

    #[test]
    fn single_camera_is_constant() {
        let cfg = EditConfig::default();
        let m = ScoreMatrix::from_rows(vec![vec![1.0, 2.0, 1.0, 1.0, 2.0]]);
        let obj = objective(&m, &[ShotKind::SlideCloseUp], &cfg);
        let expected: f64 = (0..5).fold(0.0, |acc, t| acc + obj.step_reward(0, 0, t, 1 + t as u32));
        for r in [
            solve_paper_dp(&obj, INIT, 0, 5).unwrap(),
            solve_exact_dp(&obj, INIT, 0, 5, cfg.l_cap()).unwrap(),
            brute_force(&obj, INIT, 0, 5).unwrap(),
        ] {
            assert_eq!(r.sequence, vec![0; 5]);
            assert_eq!(r.total_reward, expected);
        }
    }

    #[test]
    fn separable_objective_gives_per_instance_argmax() {
        let cfg = EditConfig {
            lambda_sw: 0.0,
            lambda_b: 0.0,
            violation_sets: Default::default(),
            ..EditConfig::default()
        };
        let m = ScoreMatrix::from_rows(vec![vec![1.0, 0.2, 0.9, 0.1], vec![0.5, 0.7, 0.2, 0.8]]);
        let obj = objective(&m, &[ShotKind::LeftMedium, ShotKind::OverviewLong], &cfg);
        let r = solve_paper_dp(&obj, INIT, 0, 4).unwrap();
        assert_eq!(r.sequence, vec![0, 1, 0, 1]);
        let e = solve_exact_dp(&obj, INIT, 0, 4, cfg.l_cap()).unwrap();
        assert_eq!(e.sequence, vec![0, 1, 0, 1]);
    }

    #[test]
    fn horizon_one_brute_force_is_argmax() {
        let cfg = EditConfig::default();
        let m = ScoreMatrix::from_rows(vec![vec![0.5], vec![1.5], vec![1.0]]);
        let kinds = [ShotKind::LeftMedium, ShotKind::SlideCloseUp, ShotKind::OverviewLong];
        let obj = objective(&m, &kinds, &cfg);
        let init = InitState { camera: 0, run_length: 70 };
        let r = brute_force(&obj, init, 0, 1).unwrap();
        let best = (0..3).max_by(|&a, &b| obj.step_reward(0, a, 0, 70).total_cmp(&obj.step_reward(0, b, 0, 70))).unwrap();
        assert_eq!(r.sequence, vec![best]);
    }

    #[test]
    fn paper_dp_is_suboptimal_on_adversarial_instance() {
        // Found by search: with a heavy switch penalty the single
        // run-length per node commits to the wrong predecessor.
        let cfg = EditConfig { c_sw: 3.0, l_min: 2.0, l_max: 4.0, ..EditConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let kinds = [ShotKind::LeftMedium, ShotKind::OverviewLong];
        let mut found = false;
        for _ in 0..2000 {
            let rows: Vec<Vec<f64>> = (0..2).map(|_| (0..6).map(|_| rng.random_range(0.0..2.0)).collect()).collect();
            let m = ScoreMatrix::from_rows(rows);
            let obj = objective(&m, &kinds, &cfg);
            let init = InitState { camera: rng.random_range(0..2), run_length: rng.random_range(1..6) };
            let p = solve_paper_dp(&obj, init, 0, 6).unwrap();
            let e = solve_exact_dp(&obj, init, 0, 6, cfg.l_cap()).unwrap();
            let b = brute_force(&obj, init, 0, 6).unwrap();
            assert_eq!(e.total_reward, b.total_reward);
            assert!(p.total_reward <= e.total_reward);
            if p.total_reward < e.total_reward {
                found = true;
            }
        }
        assert!(found, "no instance separates the single-run-length DP from the exact optimum");
    }

    #[test]
    fn reported_totals_equal_rescore() {
        let cfg = EditConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kinds = [ShotKind::LeftBlackboardCloseUp, ShotKind::RightBlackboardCloseUp, ShotKind::StudentLong];
        let rows: Vec<Vec<f64>> = (0..3).map(|_| (0..40).map(|_| rng.random_range(0.0..2.0)).collect()).collect();
        let m = ScoreMatrix::from_rows(rows);
        let obj = objective(&m, &kinds, &cfg);
        let init = InitState { camera: 2, run_length: 15 };
        for r in [solve_paper_dp(&obj, init, 5, 30).unwrap(), solve_exact_dp(&obj, init, 5, 30, 100).unwrap()] {
            assert_eq!(rescore(&obj, &r.sequence, init, 5).unwrap(), r.total_reward);
        }
    }

    #[test]
    fn rescore_constant_sequence_by_hand() {
        // lambda_e = lambda_b = 0: three stay terms at run lengths 5, 6, 7.
        let cfg = EditConfig { lambda_e: 0.0, lambda_b: 0.0, lambda_sw: 1.0, ..EditConfig::default() };
        let m = ScoreMatrix::from_rows(vec![vec![1.0; 3]]);
        let obj = objective(&m, &[ShotKind::OverviewLong], &cfg);
        let init = InitState { camera: 0, run_length: 5 };
        let pen = |l: f64| 1.0 / (1.0 + (l - 60.0f64).exp()) - 1.0;
        let hand = pen(5.0) + pen(6.0) + pen(7.0);
        assert!((rescore(&obj, &[0, 0, 0], init, 0).unwrap() - hand).abs() < 1e-15);
        let none = EditConfig { lambda_sw: 0.0, ..cfg };
        let obj = objective(&m, &[ShotKind::OverviewLong], &none);
        assert_eq!(rescore(&obj, &[0, 0, 0], init, 0).unwrap(), 0.0);
    }

    #[test]
    fn errors() {
        let cfg = EditConfig::default();
        let m = ScoreMatrix::from_rows(vec![vec![1.0; 4]; 3]);
        let obj = objective(&m, &[ShotKind::LeftMedium; 3], &cfg);
        assert_eq!(solve_paper_dp(&obj, INIT, 0, 0).unwrap_err(), SolveError::EmptyHorizon);
        assert!(matches!(solve_paper_dp(&obj, INIT, 2, 3), Err(SolveError::OutOfRange { .. })));
        assert!(matches!(solve_exact_dp(&obj, INIT, 0, 4, 61), Err(SolveError::BadCap { .. })));
        assert!(matches!(rescore_full(&obj, &[0, 0], INIT), Err(SolveError::LengthMismatch { .. })));
        assert!(matches!(rescore(&obj, &[0, 5], INIT, 0), Err(SolveError::BadCamera { index: 1, .. })));
        let big = ScoreMatrix::from_rows(vec![vec![1.0; 20]; 3]);
        let obj = objective(&big, &[ShotKind::LeftMedium; 3], &cfg);
        assert!(matches!(brute_force(&obj, INIT, 0, 20), Err(SolveError::TooLarge { .. })));
    }

    #[test]
    fn online_with_full_look_ahead_equals_offline() {
        let cfg = EditConfig { l_min: 3.0, l_max: 8.0, ..EditConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let kinds = [ShotKind::LeftMedium, ShotKind::SlideCloseUp, ShotKind::OverviewLong];
        let rows: Vec<Vec<f64>> = (0..3).map(|_| (0..50).map(|_| rng.random_range(0.0..2.0)).collect()).collect();
        let m = ScoreMatrix::from_rows(rows);
        let obj = objective(&m, &kinds, &cfg);
        let off = solve_exact_dp(&obj, INIT, 0, 50, cfg.l_cap()).unwrap();
        for la in [LookAhead::Infinite, LookAhead::Finite(50), LookAhead::Finite(80)] {
            let on = run_online(&obj, INIT, la, SolverChoice::Exact).unwrap();
            assert_eq!(on.sequence, off.sequence);
            assert_eq!(on.total_reward, off.total_reward);
        }
        for la in [1, 3, 7, 20] {
            let on = run_online(&obj, INIT, LookAhead::Finite(la), SolverChoice::Exact).unwrap();
            assert!(on.total_reward <= off.total_reward);
        }
    }

    #[test]
    fn online_look_ahead_one_is_greedy() {
        let cfg = EditConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let kinds = [ShotKind::LeftMedium, ShotKind::SlideCloseUp, ShotKind::StudentLong];
        let rows: Vec<Vec<f64>> = (0..3).map(|_| (0..30).map(|_| rng.random_range(0.0..2.0)).collect()).collect();
        let m = ScoreMatrix::from_rows(rows);
        let obj = objective(&m, &kinds, &cfg);
        let on = run_online(&obj, INIT, LookAhead::Finite(1), SolverChoice::Paper).unwrap();
        let mut state = INIT;
        for (t, &c) in on.sequence.iter().enumerate() {
            let mut best = 0;
            for k in 1..3 {
                if obj.step_reward(state.camera, k, t, state.run_length)
                    > obj.step_reward(state.camera, best, t, state.run_length)
                {
                    best = k;
                }
            }
            assert_eq!(c, best, "t={t}");
            state = final_state(&[c], state);
        }
    }

    #[test]
    fn initial_state_policy() {
        let cfg = EditConfig::default();
        let m = ScoreMatrix::from_rows(vec![vec![0.2], vec![1.0], vec![1.0]]);
        let obj = objective(&m, &[ShotKind::OverviewLong, ShotKind::SlideCloseUp, ShotKind::SlideCloseUp], &cfg);
        let ids: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        assert_eq!(initial_state(&obj, &ids).unwrap(), InitState { camera: 1, run_length: 1 });
        let mut named = cfg.clone();
        named.initial.camera = Some("c".into());
        named.initial.run_length = 9;
        let obj = objective(&m, &[ShotKind::OverviewLong, ShotKind::SlideCloseUp, ShotKind::SlideCloseUp], &named);
        assert_eq!(initial_state(&obj, &ids).unwrap(), InitState { camera: 2, run_length: 9 });
    }
}
