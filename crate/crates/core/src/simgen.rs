//! Seeded synthetic lectures.
//!
//! An [`EventScript`] lists lecture events; [`generate`] turns it into a
//! seven-camera [`Scenario`] whose indicators mark the events and whose
//! feature streams are built so that the detectors recover them:
//!
//! | event                  | camera(s) | stream                                   |
//! |------------------------|-----------|------------------------------------------|
//! | `writing_lb`/`_rb`     | lb / rb   | writing probability, high while writing  |
//! | `slide_change`         | sc        | 32x32 slide frames, new page at onset    |
//! | `student_motion`       | sl        | 32x32 flow, coherent moving block        |
//! | `visitor_in_ms`        | lm, rm    | person counts above one                  |
//! | `presenter_off_podium` | ol        | presenter position outside the band      |
//!
//! Slide frames and flow fields are large; [`FeatureDetail::Scores`] keeps
//! only their detector score series (gradient difference and motion
//! entropy), computed from the same in-memory grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::detectors::{grad_diff_score, motion_entropy_score, FlowField, FrameGrid};
use crate::error::ScriptError;
use crate::model::{Camera, FeatureStreams, Scenario, ShotKind};

/// Side length of synthetic slide frames and flow fields.
pub const GRID: usize = 32;
/// Orientation bins used for the motion entropy series in compact output.
pub const ENTROPY_BINS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    WritingLb,
    WritingRb,
    SlideChange,
    StudentMotion,
    VisitorInMs,
    PresenterOffPodium,
}

impl EventKind {
    pub const ALL: [EventKind; 6] = [
        EventKind::WritingLb,
        EventKind::WritingRb,
        EventKind::SlideChange,
        EventKind::StudentMotion,
        EventKind::VisitorInMs,
        EventKind::PresenterOffPodium,
    ];

    /// Shot kinds whose indicator the event sets.
    pub fn shots(self) -> &'static [ShotKind] {
        match self {
            EventKind::WritingLb => &[ShotKind::LeftBlackboardCloseUp],
            EventKind::WritingRb => &[ShotKind::RightBlackboardCloseUp],
            EventKind::SlideChange => &[ShotKind::SlideCloseUp],
            EventKind::StudentMotion => &[ShotKind::StudentLong],
            EventKind::VisitorInMs => &[ShotKind::LeftMedium, ShotKind::RightMedium],
            EventKind::PresenterOffPodium => &[ShotKind::OverviewLong],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Event {
    pub kind: EventKind,
    pub start: usize,
    pub duration: usize,
}

impl Event {
    pub fn end(&self) -> usize {
        self.start + self.duration
    }
}

/// Standard deviation of the Gaussian noise added to each stream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseLevels {
    pub prob: f64,
    pub frame: f64,
    pub flow: f64,
    pub count: f64,
    pub position: f64,
}

impl Default for NoiseLevels {
    fn default() -> Self {
        NoiseLevels { prob: 0.05, frame: 0.02, flow: 0.01, count: 0.1, position: 0.02 }
    }
}

impl NoiseLevels {
    pub fn zero() -> Self {
        NoiseLevels { prob: 0.0, frame: 0.0, flow: 0.0, count: 0.0, position: 0.0 }
    }

    fn validate(&self) -> Result<(), ScriptError> {
        for (name, v) in [
            ("prob", self.prob),
            ("frame", self.frame),
            ("flow", self.flow),
            ("count", self.count),
            ("position", self.position),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ScriptError::Invalid(format!("noise level `{name}` must be finite and >= 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// How much of the synthesized signal goes into the scenario.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureDetail {
    /// Full slide frames and flow fields.
    Raw,
    /// Score series in place of frames and flow fields.
    #[default]
    Scores,
    /// Indicators only.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EventScript {
    #[serde(rename = "T")]
    pub len: usize,
    #[serde(default)]
    pub events: Vec<Event>,
    #[serde(default)]
    pub noise: NoiseLevels,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default)]
    pub features: FeatureDetail,
}

impl EventScript {
    pub fn validate(&self) -> Result<(), ScriptError> {
        if self.len == 0 {
            return Err(ScriptError::Invalid("T must be at least 1".into()));
        }
        self.noise.validate()?;
        for (index, e) in self.events.iter().enumerate() {
            let fail = |msg: String| Err(ScriptError::Event { index, msg });
            if e.duration == 0 {
                return fail("duration must be at least 1".into());
            }
            if e.end() > self.len {
                return fail(format!("{}..{} exceeds T = {}", e.start, e.end(), self.len));
            }
            if e.kind == EventKind::SlideChange {
                if e.duration != 1 {
                    return fail("slide_change marks a single instance; duration must be 1".into());
                }
                if e.start == 0 {
                    return fail("slide_change needs a preceding frame; start must be at least 1".into());
                }
            }
        }
        Ok(())
    }

    /// Scripted indicator per shot kind.
    pub fn indicators(&self) -> [Vec<u8>; 7] {
        let mut out: [Vec<u8>; 7] = std::array::from_fn(|_| vec![0; self.len]);
        for e in &self.events {
            for &shot in e.kind.shots() {
                out[shot.index()][e.start..e.end()].fill(1);
            }
        }
        out
    }
}

fn gauss(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    if sd == 0.0 {
        0.0
    } else {
        let z: f64 = StandardNormal.sample(rng);
        sd * z
    }
}

fn camera_rng(seed: u64, shot: ShotKind) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shot.index() as u64 + 1);
    rng
}

fn events_of(script: &EventScript, kind: EventKind) -> impl Iterator<Item = &Event> {
    script.events.iter().filter(move |e| e.kind == kind)
}

fn writing_probs(script: &EventScript, active: &[u8], shot: ShotKind) -> Vec<f64> {
    let mut rng = camera_rng(script.rng_seed, shot);
    active
        .iter()
        .map(|&a| {
            let base = if a == 1 { 0.9 } else { 0.1 };
            (base + gauss(&mut rng, script.noise.prob)).clamp(0.0, 1.0)
        })
        .collect()
}

/// A slide: a few horizontal bars of random intensity on a dark background.
fn slide_page(rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut page = vec![0.0; GRID * GRID];
    for _ in 0..rng.random_range(3..=6) {
        let r0 = rng.random_range(2..GRID - 4);
        let h = rng.random_range(1..=3);
        let c0 = rng.random_range(2..10);
        let c1 = rng.random_range(18..GRID - 2);
        let level = rng.random_range(0.3..1.0);
        for r in r0..r0 + h {
            page[r * GRID + c0..r * GRID + c1].fill(level);
        }
    }
    page
}

struct SlideStreams {
    frames: Option<Vec<FrameGrid>>,
    scores: Vec<f64>,
}

fn slide_streams(script: &EventScript, keep_frames: bool) -> SlideStreams {
    let mut rng = camera_rng(script.rng_seed, ShotKind::SlideCloseUp);
    let mut changes: Vec<usize> = events_of(script, EventKind::SlideChange).map(|e| e.start).collect();
    changes.sort_unstable();
    let mut page = slide_page(&mut rng);
    let mut next = changes.iter().peekable();
    let mut frames = keep_frames.then(|| Vec::with_capacity(script.len));
    let mut scores = Vec::with_capacity(script.len);
    let mut prev: Option<FrameGrid> = None;
    for t in 0..script.len {
        while next.peek().is_some_and(|&&s| s == t) {
            page = slide_page(&mut rng);
            next.next();
        }
        let noisy: Vec<f64> = page.iter().map(|&x| x + gauss(&mut rng, script.noise.frame)).collect();
        let frame = FrameGrid::new(GRID, GRID, 1, noisy).expect("grid dimensions are fixed");
        if let Some(p) = &prev {
            scores.push(grad_diff_score(p, &frame).expect("frames share a shape"));
        }
        if let Some(f) = frames.as_mut() {
            f.push(frame.clone());
        }
        prev = Some(frame);
    }
    // the first instance has no predecessor and repeats the second score
    let first = scores.first().copied().unwrap_or(0.0);
    scores.insert(0, first);
    SlideStreams { frames, scores }
}

struct Block {
    start: usize,
    end: usize,
    rows: usize,
    cols: usize,
    row0: usize,
    col0: usize,
    speed: f64,
}

struct FlowStreams {
    flow: Option<Vec<FlowField>>,
    scores: Vec<f64>,
}

fn flow_streams(script: &EventScript, keep_flow: bool) -> FlowStreams {
    let mut rng = camera_rng(script.rng_seed, ShotKind::StudentLong);
    let blocks: Vec<Block> = events_of(script, EventKind::StudentMotion)
        .map(|e| {
            let rows = rng.random_range(8..=14);
            let cols = rng.random_range(8..=14);
            Block {
                start: e.start,
                end: e.end(),
                rows,
                cols,
                row0: rng.random_range(0..=GRID - rows),
                col0: rng.random_range(0..=GRID - cols),
                speed: rng.random_range(1.0..2.0),
            }
        })
        .collect();
    let mut flows = keep_flow.then(|| Vec::with_capacity(script.len));
    let mut scores = Vec::with_capacity(script.len);
    for t in 0..script.len {
        let mut u: Vec<f64> = (0..GRID * GRID).map(|_| gauss(&mut rng, script.noise.flow)).collect();
        let mut v: Vec<f64> = (0..GRID * GRID).map(|_| gauss(&mut rng, script.noise.flow)).collect();
        for b in blocks.iter().filter(|b| (b.start..b.end).contains(&t)) {
            // the block drifts upward, wrapping inside the grid
            let span = GRID - b.rows + 1;
            let shift = (b.speed * (t - b.start) as f64) as usize;
            let top = (b.row0 + span - shift % span) % span;
            for r in top..top + b.rows {
                for c in b.col0..b.col0 + b.cols {
                    v[r * GRID + c] = -b.speed;
                    u[r * GRID + c] = 0.0;
                }
            }
        }
        let field = FlowField::new(GRID, GRID, std::mem::take(&mut u), std::mem::take(&mut v)).expect("fixed shape");
        scores.push(motion_entropy_score(&field, ENTROPY_BINS).expect("valid field"));
        if let Some(f) = flows.as_mut() {
            f.push(field);
        }
    }
    FlowStreams { flow: flows, scores }
}

fn person_counts(script: &EventScript, shot: ShotKind) -> Vec<u32> {
    let mut rng = camera_rng(script.rng_seed, shot);
    let mut extra = vec![0.0; script.len];
    for e in events_of(script, EventKind::VisitorInMs) {
        let visitors = rng.random_range(1..=2) as f64;
        for x in &mut extra[e.start..e.end()] {
            *x = visitors;
        }
    }
    extra.iter().map(|&x| (1.0 + x + gauss(&mut rng, script.noise.count)).round().max(0.0) as u32).collect()
}

fn presenter_positions(script: &EventScript) -> Vec<f64> {
    let mut rng = camera_rng(script.rng_seed, ShotKind::OverviewLong);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    let mut off = vec![None; script.len];
    for e in events_of(script, EventKind::PresenterOffPodium) {
        let side = if rng.random_bool(0.5) { 0.9 } else { 0.1 };
        off[e.start..e.end()].fill(Some(side));
    }
    (0..script.len)
        .map(|t| {
            let base = off[t].unwrap_or_else(|| 0.5 + 0.15 * (std::f64::consts::TAU * t as f64 / 240.0 + phase).sin());
            (base + gauss(&mut rng, script.noise.position)).clamp(0.0, 1.0)
        })
        .collect()
}

/// Builds the seven-camera scenario for `script`; camera ids are the shot
/// codes (`lb`, `rb`, ...).
pub fn generate(script: &EventScript) -> Result<Scenario, ScriptError> {
    script.validate()?;
    let indicators = script.indicators();
    let detail = script.features;
    let cameras = ShotKind::ALL
        .into_iter()
        .map(|kind| {
            let indicator = indicators[kind.index()].clone();
            let features = if detail == FeatureDetail::None {
                FeatureStreams::default()
            } else {
                match kind {
                    ShotKind::LeftBlackboardCloseUp | ShotKind::RightBlackboardCloseUp => FeatureStreams {
                        scalar: Some(writing_probs(script, &indicator, kind)),
                        ..Default::default()
                    },
                    ShotKind::SlideCloseUp => {
                        let s = slide_streams(script, detail == FeatureDetail::Raw);
                        match s.frames {
                            Some(frames) => FeatureStreams { frames: Some(frames), ..Default::default() },
                            None => FeatureStreams { scalar: Some(s.scores), ..Default::default() },
                        }
                    }
                    ShotKind::StudentLong => {
                        let s = flow_streams(script, detail == FeatureDetail::Raw);
                        match s.flow {
                            Some(flow) => FeatureStreams { flow: Some(flow), ..Default::default() },
                            None => FeatureStreams { scalar: Some(s.scores), ..Default::default() },
                        }
                    }
                    ShotKind::LeftMedium | ShotKind::RightMedium => {
                        FeatureStreams { counts: Some(person_counts(script, kind)), ..Default::default() }
                    }
                    ShotKind::OverviewLong => {
                        FeatureStreams { positions: Some(presenter_positions(script)), ..Default::default() }
                    }
                }
            };
            Camera { id: kind.code().to_string(), kind, indicator, features }
        })
        .collect();
    Ok(Scenario { instances_per_second: 1.0, len: script.len, cameras })
}

/// Timeline length of every suite scenario.
pub const SUITE_LEN: usize = 3000;
/// Number of scenarios in the suite.
pub const SUITE_SIZE: usize = 10;
/// No event starts before this instance, leaving the detectors a full
/// history window.
pub const WARMUP: usize = 64;

/// Per-kind event density ranges used by [`benchmark_scripts`]:
/// `(count range, duration range, minimum gap between events of the kind)`.
pub fn suite_ranges(kind: EventKind) -> ((usize, usize), (usize, usize), usize) {
    match kind {
        EventKind::WritingLb | EventKind::WritingRb => ((4, 8), (20, 90), 10),
        EventKind::SlideChange => ((8, 20), (1, 1), 60),
        EventKind::StudentMotion => ((1, 3), (6, 20), 80),
        EventKind::VisitorInMs => ((1, 4), (10, 40), 10),
        EventKind::PresenterOffPodium => ((2, 5), (10, 40), 10),
    }
}

fn place_events(rng: &mut ChaCha8Rng, kind: EventKind, len: usize) -> Vec<Event> {
    let ((lo, hi), (dlo, dhi), gap) = suite_ranges(kind);
    let count = rng.random_range(lo..=hi);
    let mut placed: Vec<Event> = Vec::with_capacity(count);
    let mut attempts = 0;
    while placed.len() < count && attempts < 10_000 {
        attempts += 1;
        let duration = rng.random_range(dlo..=dhi);
        let start = rng.random_range(WARMUP..=len - duration - 1);
        let e = Event { kind, start, duration };
        if placed.iter().all(|p| e.start >= p.end() + gap || p.start >= e.end() + gap) {
            placed.push(e);
        }
    }
    placed.sort_by_key(|e| e.start);
    placed
}

/// Random script of suite length with events drawn from [`suite_ranges`].
pub fn random_script(seed: u64, noise: NoiseLevels, features: FeatureDetail) -> EventScript {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let events = EventKind::ALL.iter().flat_map(|&k| place_events(&mut rng, k, SUITE_LEN)).collect();
    EventScript { len: SUITE_LEN, events, noise, rng_seed: rng.random(), features }
}

/// The ten benchmark scripts derived from `seed`.
pub fn benchmark_scripts(seed: u64, noise: NoiseLevels, features: FeatureDetail) -> Vec<EventScript> {
    let mut root = ChaCha8Rng::seed_from_u64(seed);
    (0..SUITE_SIZE).map(|_| random_script(root.random(), noise, features)).collect()
}

/// The ten-scenario benchmark suite at default noise.
pub fn benchmark_suite(seed: u64, features: FeatureDetail) -> Vec<Scenario> {
    benchmark_scripts(seed, NoiseLevels::default(), features)
        .iter()
        .map(|s| generate(s).expect("suite scripts are valid"))
        .collect()
}

/// Onset-level agreement between a scripted and a detected indicator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkAgreement {
    pub scripted: usize,
    pub detected: usize,
    /// Scripted onsets with a detected onset within the tolerance.
    pub recalled: usize,
    /// Detected onsets with a scripted onset within the tolerance.
    pub confirmed: usize,
}

impl MarkAgreement {
    /// Fraction of all onsets (scripted and detected) that are matched; 1
    /// when neither side has any.
    pub fn rate(&self) -> f64 {
        let total = self.scripted + self.detected;
        if total == 0 {
            1.0
        } else {
            (self.recalled + self.confirmed) as f64 / total as f64
        }
    }

    pub fn merge(self, other: MarkAgreement) -> MarkAgreement {
        MarkAgreement {
            scripted: self.scripted + other.scripted,
            detected: self.detected + other.detected,
            recalled: self.recalled + other.recalled,
            confirmed: self.confirmed + other.confirmed,
        }
    }
}

/// Instances where a run of ones begins.
pub fn onsets(indicator: &[u8]) -> Vec<usize> {
    (0..indicator.len()).filter(|&t| indicator[t] == 1 && (t == 0 || indicator[t - 1] == 0)).collect()
}

/// Matches onsets of the two indicators within `tolerance` instances, in
/// both directions.
pub fn onset_agreement(scripted: &[u8], detected: &[u8], tolerance: usize) -> MarkAgreement {
    let a = onsets(scripted);
    let b = onsets(detected);
    let near = |x: usize, ys: &[usize]| ys.iter().any(|&y| x.abs_diff(y) <= tolerance);
    MarkAgreement {
        scripted: a.len(),
        detected: b.len(),
        recalled: a.iter().filter(|&&x| near(x, &b)).count(),
        confirmed: b.iter().filter(|&&x| near(x, &a)).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{detect_scenario, frame_score_series, flow_score_series, DetectorParams};

    fn script(events: Vec<Event>, noise: NoiseLevels, features: FeatureDetail) -> EventScript {
        EventScript { len: 400, events, noise, rng_seed: 42, features }
    }

    fn ev(kind: EventKind, start: usize, duration: usize) -> Event {
        Event { kind, start, duration }
    }

    #[test]
    fn empty_script_zero_noise_is_flat() {
        let s = generate(&script(vec![], NoiseLevels::zero(), FeatureDetail::Scores)).unwrap();
        assert_eq!(s.cameras.len(), 7);
        for cam in &s.cameras {
            assert!(cam.indicator.iter().all(|&x| x == 0));
            let f = &cam.features;
            if let Some(xs) = &f.scalar {
                assert!(xs.iter().all(|&x| x == xs[0]), "{}", cam.id);
            }
            if let Some(xs) = &f.counts {
                assert!(xs.iter().all(|&x| x == 1));
            }
        }
    }

    #[test]
    fn single_slide_change_round_trips() {
        let sc = script(vec![ev(EventKind::SlideChange, 120, 1)], NoiseLevels::zero(), FeatureDetail::Raw);
        let d = detect_scenario(&generate(&sc).unwrap(), &DetectorParams::default()).unwrap();
        let marks = onsets(&d.cameras[ShotKind::SlideCloseUp.index()].indicator);
        assert_eq!(marks, vec![120]);
        // with noise the change is still found, though isolated false marks may appear
        let noisy = EventScript { noise: NoiseLevels::default(), ..sc };
        let d = detect_scenario(&generate(&noisy).unwrap(), &DetectorParams::default()).unwrap();
        let marks = onsets(&d.cameras[ShotKind::SlideCloseUp.index()].indicator);
        assert!(marks.iter().any(|&t| t.abs_diff(120) <= 1), "{marks:?}");
    }

    #[test]
    fn compact_scores_match_raw_streams() {
        let events = vec![ev(EventKind::SlideChange, 100, 1), ev(EventKind::StudentMotion, 200, 12)];
        let raw = generate(&script(events.clone(), NoiseLevels::default(), FeatureDetail::Raw)).unwrap();
        let compact = generate(&script(events, NoiseLevels::default(), FeatureDetail::Scores)).unwrap();
        let sc = ShotKind::SlideCloseUp.index();
        let sl = ShotKind::StudentLong.index();
        let frames = raw.cameras[sc].features.frames.as_ref().unwrap();
        assert_eq!(&frame_score_series(frames).unwrap(), compact.cameras[sc].features.scalar.as_ref().unwrap());
        let flow = raw.cameras[sl].features.flow.as_ref().unwrap();
        assert_eq!(
            &flow_score_series(flow, ENTROPY_BINS).unwrap(),
            compact.cameras[sl].features.scalar.as_ref().unwrap()
        );
    }

    #[test]
    fn same_seed_same_scenario() {
        let sc = random_script(5, NoiseLevels::default(), FeatureDetail::Scores);
        assert_eq!(generate(&sc).unwrap(), generate(&sc).unwrap());
    }

    #[test]
    fn validation() {
        let bad = |events| generate(&script(events, NoiseLevels::default(), FeatureDetail::None)).unwrap_err();
        assert!(matches!(bad(vec![ev(EventKind::WritingLb, 390, 20)]), ScriptError::Event { index: 0, .. }));
        assert!(matches!(bad(vec![ev(EventKind::VisitorInMs, 10, 0)]), ScriptError::Event { .. }));
        assert!(matches!(bad(vec![ev(EventKind::SlideChange, 10, 3)]), ScriptError::Event { .. }));
        let mut noisy = script(vec![], NoiseLevels::default(), FeatureDetail::None);
        noisy.noise.flow = -1.0;
        assert!(matches!(generate(&noisy), Err(ScriptError::Invalid(_))));
    }

    #[test]
    fn visitor_marks_both_medium_shots() {
        let s = generate(&script(vec![ev(EventKind::VisitorInMs, 50, 5)], NoiseLevels::zero(), FeatureDetail::None))
            .unwrap();
        for kind in [ShotKind::LeftMedium, ShotKind::RightMedium] {
            assert_eq!(onsets(&s.cameras[kind.index()].indicator), vec![50]);
        }
    }

    #[test]
    fn suite_scripts_respect_ranges() {
        for sc in benchmark_scripts(1, NoiseLevels::default(), FeatureDetail::None) {
            sc.validate().unwrap();
            for kind in EventKind::ALL {
                let ((lo, hi), (dlo, dhi), gap) = suite_ranges(kind);
                let es: Vec<&Event> = sc.events.iter().filter(|e| e.kind == kind).collect();
                assert!((lo..=hi).contains(&es.len()), "{kind:?} count {}", es.len());
                for e in &es {
                    assert!((dlo..=dhi).contains(&e.duration) && e.start >= WARMUP);
                }
                for w in es.windows(2) {
                    assert!(w[1].start >= w[0].end() + gap);
                }
            }
        }
    }

    #[test]
    fn onset_agreement_counts_both_directions() {
        let a = [0, 1, 1, 0, 0, 0, 0, 0, 1, 0];
        let b = [0, 0, 0, 1, 1, 1, 0, 0, 0, 0];
        let m = onset_agreement(&a, &b, 2);
        assert_eq!(m, MarkAgreement { scripted: 2, detected: 1, recalled: 1, confirmed: 1 });
        assert_eq!(m.rate(), 2.0 / 3.0);
        assert_eq!(onset_agreement(&[0, 0], &[0, 0], 2).rate(), 1.0);
    }
}
