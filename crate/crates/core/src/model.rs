//! Scenario, edit configuration and edit-decision-list types.
//!
//! Everything here is plain data: it is built once (usually by deserializing a
//! file) and then shared read-only by the detectors, scorers and solvers.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::detectors::{FlowField, FrameGrid};
use crate::error::{ConfigError, EdlError};

/// The seven shot types of the lecture recording setup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ShotKind {
    #[serde(rename = "lb")]
    LeftBlackboardCloseUp,
    #[serde(rename = "rb")]
    RightBlackboardCloseUp,
    #[serde(rename = "sc")]
    SlideCloseUp,
    #[serde(rename = "sl")]
    StudentLong,
    #[serde(rename = "lm")]
    LeftMedium,
    #[serde(rename = "rm")]
    RightMedium,
    #[serde(rename = "ol")]
    OverviewLong,
}

impl ShotKind {
    pub const ALL: [ShotKind; 7] = [
        ShotKind::LeftBlackboardCloseUp,
        ShotKind::RightBlackboardCloseUp,
        ShotKind::SlideCloseUp,
        ShotKind::StudentLong,
        ShotKind::LeftMedium,
        ShotKind::RightMedium,
        ShotKind::OverviewLong,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ShotKind::LeftBlackboardCloseUp => "lb",
            ShotKind::RightBlackboardCloseUp => "rb",
            ShotKind::SlideCloseUp => "sc",
            ShotKind::StudentLong => "sl",
            ShotKind::LeftMedium => "lm",
            ShotKind::RightMedium => "rm",
            ShotKind::OverviewLong => "ol",
        }
    }

    /// Position in [`ShotKind::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_close_up(self) -> bool {
        matches!(
            self,
            ShotKind::LeftBlackboardCloseUp | ShotKind::RightBlackboardCloseUp | ShotKind::SlideCloseUp
        )
    }
}

impl fmt::Display for ShotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ShotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ShotKind::ALL
            .into_iter()
            .find(|k| k.code() == s)
            .ok_or_else(|| format!("unknown shot kind `{s}` (expected one of lb|rb|sc|sl|lm|rm|ol)"))
    }
}

/// One value per [`ShotKind`], serialized as a map keyed by kind code.
///
/// Deserialization requires every kind to be present so that a config can
/// never silently fall back to a positional default.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerKind<T>(pub [T; 7]);

impl<T: Copy> PerKind<T> {
    pub fn uniform(value: T) -> Self {
        PerKind([value; 7])
    }

    pub fn get(&self, kind: ShotKind) -> T {
        self.0[kind.index()]
    }

    pub fn set(&mut self, kind: ShotKind, value: T) {
        self.0[kind.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (ShotKind, T)> + '_ {
        ShotKind::ALL.into_iter().map(move |k| (k, self.get(k)))
    }
}

impl<T: Serialize> Serialize for PerKind<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(7))?;
        for kind in ShotKind::ALL {
            map.serialize_entry(kind.code(), &self.0[kind.index()])?;
        }
        map.end()
    }
}

impl<'de, T: Deserialize<'de> + Copy + Default> Deserialize<'de> for PerKind<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PerKindVisitor<T>(std::marker::PhantomData<T>);

        impl<'de, T: Deserialize<'de> + Copy + Default> Visitor<'de> for PerKindVisitor<T> {
            type Value = PerKind<T>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map with one entry per shot kind (lb, rb, sc, sl, lm, rm, ol)")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut values = [T::default(); 7];
                let mut seen = [false; 7];
                while let Some(kind) = access.next_key::<ShotKind>()? {
                    if seen[kind.index()] {
                        return Err(de::Error::custom(format!("duplicate shot kind `{kind}`")));
                    }
                    seen[kind.index()] = true;
                    values[kind.index()] = access.next_value()?;
                }
                if let Some(missing) = ShotKind::ALL.into_iter().find(|k| !seen[k.index()]) {
                    return Err(de::Error::custom(format!("missing shot kind `{missing}`")));
                }
                Ok(PerKind(values))
            }
        }

        deserializer.deserialize_map(PerKindVisitor(std::marker::PhantomData))
    }
}

/// A synchronized lecture recording reduced to per-camera event indicators and
/// optional raw feature streams.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_rate")]
    pub instances_per_second: f64,
    /// Timeline length in instances.
    #[serde(rename = "T")]
    pub len: usize,
    pub cameras: Vec<Camera>,
}

fn default_rate() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Camera {
    pub id: String,
    pub kind: ShotKind,
    pub indicator: Vec<u8>,
    #[serde(default, skip_serializing_if = "FeatureStreams::is_empty")]
    pub features: FeatureStreams,
}

/// Raw per-camera signals from which indicators are derived.
///
/// `scalar` holds whatever one-dimensional series feeds the camera's detector:
/// writing-event probabilities for blackboard close-ups, the gradient
/// difference series for the slide close-up, the motion entropy series for the
/// student long shot.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeatureStreams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frames: Option<Vec<FrameGrid>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<Vec<FlowField>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<f64>>,
}

impl FeatureStreams {
    pub fn is_empty(&self) -> bool {
        self.frames.is_none()
            && self.flow.is_none()
            && self.scalar.is_none()
            && self.counts.is_none()
            && self.positions.is_none()
    }
}

/// A single broken scenario invariant.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    EmptyTimeline,
    NoCameras,
    BadRate(f64),
    DuplicateCamera { camera: String },
    IndicatorLength { camera: String, expected: usize, found: usize },
    NonBinary { camera: String, t: usize, value: u8 },
    StreamLength { camera: String, stream: &'static str, expected: usize, found: usize },
    NonFinite { camera: String, stream: &'static str, t: usize },
    GridShape { camera: String, stream: &'static str, t: usize, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyTimeline => write!(f, "timeline length T must be at least 1"),
            Violation::NoCameras => write!(f, "scenario has no cameras"),
            Violation::BadRate(r) => write!(f, "instances_per_second must be finite and > 0, got {r}"),
            Violation::DuplicateCamera { camera } => write!(f, "camera id `{camera}` is used more than once"),
            Violation::IndicatorLength { camera, expected, found } => {
                write!(f, "camera `{camera}`: indicator has {found} entries, expected {expected}")
            }
            Violation::NonBinary { camera, t, value } => {
                write!(f, "camera `{camera}`: indicator entry at t={t} is {value}, expected 0 or 1")
            }
            Violation::StreamLength { camera, stream, expected, found } => {
                write!(f, "camera `{camera}`: `{stream}` stream has {found} entries, expected {expected}")
            }
            Violation::NonFinite { camera, stream, t } => {
                write!(f, "camera `{camera}`: `{stream}` stream has a non-finite value at t={t}")
            }
            Violation::GridShape { camera, stream, t, reason } => {
                write!(f, "camera `{camera}`: `{stream}` grid at t={t}: {reason}")
            }
        }
    }
}

/// Checks every scenario invariant and reports all violations found.
pub fn validate_scenario(s: &Scenario) -> Vec<Violation> {
    let mut out = Vec::new();
    if s.len == 0 {
        out.push(Violation::EmptyTimeline);
    }
    if !(s.instances_per_second.is_finite() && s.instances_per_second > 0.0) {
        out.push(Violation::BadRate(s.instances_per_second));
    }
    if s.cameras.is_empty() {
        out.push(Violation::NoCameras);
    }
    let mut ids = HashSet::new();
    for cam in &s.cameras {
        if !ids.insert(cam.id.as_str()) {
            out.push(Violation::DuplicateCamera { camera: cam.id.clone() });
        }
        if cam.indicator.len() != s.len {
            out.push(Violation::IndicatorLength {
                camera: cam.id.clone(),
                expected: s.len,
                found: cam.indicator.len(),
            });
        }
        for (t, &v) in cam.indicator.iter().enumerate() {
            if v > 1 {
                out.push(Violation::NonBinary { camera: cam.id.clone(), t, value: v });
            }
        }
        validate_features(cam, s.len, &mut out);
    }
    out
}

fn validate_features(cam: &Camera, len: usize, out: &mut Vec<Violation>) {
    let f = &cam.features;
    let check_len = |stream: &'static str, found: usize, out: &mut Vec<Violation>| {
        if found != len {
            out.push(Violation::StreamLength { camera: cam.id.clone(), stream, expected: len, found });
        }
    };
    let finite_series = |stream: &'static str, xs: &[f64], out: &mut Vec<Violation>| {
        if let Some(t) = xs.iter().position(|x| !x.is_finite()) {
            out.push(Violation::NonFinite { camera: cam.id.clone(), stream, t });
        }
    };
    if let Some(frames) = &f.frames {
        check_len("frames", frames.len(), out);
        let first = frames.first().map(|g| (g.rows(), g.cols(), g.channels()));
        for (t, g) in frames.iter().enumerate() {
            if let Err(e) = g.check() {
                out.push(Violation::GridShape { camera: cam.id.clone(), stream: "frames", t, reason: e.to_string() });
            } else if Some((g.rows(), g.cols(), g.channels())) != first {
                out.push(Violation::GridShape {
                    camera: cam.id.clone(),
                    stream: "frames",
                    t,
                    reason: "shape differs from the first frame".into(),
                });
            }
        }
    }
    if let Some(flow) = &f.flow {
        check_len("flow", flow.len(), out);
        for (t, g) in flow.iter().enumerate() {
            if let Err(e) = g.check() {
                out.push(Violation::GridShape { camera: cam.id.clone(), stream: "flow", t, reason: e.to_string() });
            }
        }
    }
    if let Some(xs) = &f.scalar {
        check_len("scalar", xs.len(), out);
        finite_series("scalar", xs, out);
    }
    if let Some(xs) = &f.counts {
        check_len("counts", xs.len(), out);
    }
    if let Some(xs) = &f.positions {
        check_len("positions", xs.len(), out);
        finite_series("positions", xs, out);
    }
}

impl Scenario {
    pub fn num_cameras(&self) -> usize {
        self.cameras.len()
    }

    pub fn kinds(&self) -> Vec<ShotKind> {
        self.cameras.iter().map(|c| c.kind).collect()
    }

    pub fn camera_index(&self, id: &str) -> Option<usize> {
        self.cameras.iter().position(|c| c.id == id)
    }

    pub fn camera_ids(&self) -> Vec<String> {
        self.cameras.iter().map(|c| c.id.clone()).collect()
    }

    /// The same scenario with every feature stream dropped.
    pub fn without_features(&self) -> Scenario {
        let mut s = self.clone();
        for cam in &mut s.cameras {
            cam.features = FeatureStreams::default();
        }
        s
    }
}

/// Look-ahead horizon of the online driver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LookAhead {
    Finite(usize),
    Infinite,
}

impl LookAhead {
    /// Chunk length for a timeline of `len` instances.
    pub fn chunk(self, len: usize) -> usize {
        match self {
            LookAhead::Finite(l) => l.min(len).max(1),
            LookAhead::Infinite => len.max(1),
        }
    }
}

impl fmt::Display for LookAhead {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LookAhead::Finite(l) => write!(f, "{l}"),
            LookAhead::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for LookAhead {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            LookAhead::Finite(l) => serializer.serialize_u64(*l as u64),
            LookAhead::Infinite => serializer.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for LookAhead {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u64),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(n) => Ok(LookAhead::Finite(n as usize)),
            Raw::Word(w) if w == "infinite" => Ok(LookAhead::Infinite),
            Raw::Word(w) => Err(de::Error::custom(format!(
                "look_ahead must be a positive integer or \"infinite\", got \"{w}\""
            ))),
        }
    }
}

/// How the state before the first instance is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialPolicy {
    /// Camera id; `None` picks the camera with the highest semantic score at t = 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub camera: Option<String>,
    /// Instances the initial camera is assumed to have been on air already.
    #[serde(default = "one")]
    pub run_length: u32,
}

fn one() -> u32 {
    1
}

impl Default for InitialPolicy {
    fn default() -> Self {
        InitialPolicy { camera: None, run_length: 1 }
    }
}

/// Rule for resolving equal rewards. Only one rule exists; it is kept in the
/// config so that files state it explicitly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TieBreak {
    #[default]
    #[serde(rename = "lowest_index")]
    LowestIndex,
}

/// Editing objective parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditConfig {
    pub weights: PerKind<f64>,
    pub defaults: PerKind<f64>,
    pub epsilon: f64,
    pub c_sw: f64,
    pub c_broll: f64,
    /// Expected minimum segment length, in instances.
    pub l_min: f64,
    /// Expected maximum segment length, in instances.
    pub l_max: f64,
    /// B-roll trigger base; `(l_min + l_max) / 2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_mean: Option<f64>,
    pub broll_set: BTreeSet<ShotKind>,
    pub violation_sets: BTreeMap<ShotKind, BTreeSet<ShotKind>>,
    pub lambda_e: f64,
    pub lambda_sw: f64,
    pub lambda_b: f64,
    pub look_ahead: LookAhead,
    #[serde(default)]
    pub initial: InitialPolicy,
    #[serde(default)]
    pub tie_break: TieBreak,
    /// Run-length cap of the exact solver; `l_max + 40` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_cap: Option<usize>,
}

/// Default transition violations: a direct cut between the two blackboard
/// close-ups breaks the 180-degree rule, and any close-up to student long shot
/// cut (either direction) skips the medium shot in the order of shot sizes.
pub fn default_violation_sets() -> BTreeMap<ShotKind, BTreeSet<ShotKind>> {
    use ShotKind::*;
    let mut sets: BTreeMap<ShotKind, BTreeSet<ShotKind>> = BTreeMap::new();
    sets.entry(LeftBlackboardCloseUp).or_default().insert(RightBlackboardCloseUp);
    sets.entry(RightBlackboardCloseUp).or_default().insert(LeftBlackboardCloseUp);
    for cu in [LeftBlackboardCloseUp, RightBlackboardCloseUp, SlideCloseUp] {
        sets.entry(cu).or_default().insert(StudentLong);
        sets.entry(StudentLong).or_default().insert(cu);
    }
    sets
}

impl Default for EditConfig {
    fn default() -> Self {
        use ShotKind::*;
        let mut weights = PerKind::uniform(0.0);
        for (kind, v) in [
            (RightBlackboardCloseUp, 0.8),
            (LeftBlackboardCloseUp, 0.8),
            (SlideCloseUp, 1.0),
            (StudentLong, 0.4),
            (LeftMedium, 0.6),
            (RightMedium, 0.6),
            (OverviewLong, 0.2),
        ] {
            weights.set(kind, v);
        }
        EditConfig {
            weights,
            defaults: weights,
            epsilon: 1.0,
            c_sw: 1.0,
            c_broll: 1.0,
            l_min: 20.0,
            l_max: 60.0,
            l_mean: None,
            broll_set: [StudentLong, OverviewLong, SlideCloseUp].into_iter().collect(),
            violation_sets: default_violation_sets(),
            lambda_e: 0.3,
            lambda_sw: 0.4,
            lambda_b: 0.3,
            look_ahead: LookAhead::Infinite,
            initial: InitialPolicy::default(),
            tie_break: TieBreak::LowestIndex,
            l_cap: None,
        }
    }
}

impl EditConfig {
    pub fn l_mean(&self) -> f64 {
        self.l_mean.unwrap_or((self.l_min + self.l_max) / 2.0)
    }

    pub fn l_cap(&self) -> usize {
        self.l_cap.unwrap_or(self.l_max.ceil() as usize + 40)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |field: &str, msg: String| Err(ConfigError::Field { field: field.to_string(), msg });
        for (name, w) in [("weights", &self.weights), ("defaults", &self.defaults)] {
            for (kind, v) in w.iter() {
                if !(v.is_finite() && v >= 0.0) {
                    return bad(name, format!("entry `{kind}` must be finite and >= 0, got {v}"));
                }
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return bad("epsilon", format!("must be finite and > 0, got {}", self.epsilon));
        }
        for (name, v) in [
            ("c_sw", self.c_sw),
            ("c_broll", self.c_broll),
            ("lambda_e", self.lambda_e),
            ("lambda_sw", self.lambda_sw),
            ("lambda_b", self.lambda_b),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(name, format!("must be finite and >= 0, got {v}"));
            }
        }
        if !(self.l_min.is_finite() && self.l_max.is_finite() && 0.0 < self.l_min && self.l_min < self.l_max) {
            return bad("l_min", format!("need 0 < l_min < l_max, got l_min={} l_max={}", self.l_min, self.l_max));
        }
        if let Some(m) = self.l_mean {
            if !(m.is_finite() && m > 0.0) {
                return bad("l_mean", format!("must be finite and > 0, got {m}"));
            }
        }
        if self.look_ahead == LookAhead::Finite(0) {
            return bad("look_ahead", "must be at least 1".into());
        }
        if self.initial.run_length == 0 {
            return bad("initial", "run_length must be at least 1".into());
        }
        if let Some(cap) = self.l_cap {
            let min = min_l_cap(self);
            if (cap as f64) < min {
                return bad("l_cap", format!("must be at least {min} for this config, got {cap}"));
            }
        }
        Ok(())
    }
}

/// Smallest run-length cap at which the switch penalty is saturated to within
/// 1e-9 and the B-roll threshold has been crossed.
pub fn min_l_cap(cfg: &EditConfig) -> f64 {
    let saturation = (1e9f64).ln();
    (cfg.l_max + saturation).max(cfg.l_mean() / 2.0 + 1.0).ceil()
}

/// One shot of the edited output: `camera` is on air for `start..end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub camera: String,
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EditDecisionList {
    pub segments: Vec<Segment>,
}

impl EditDecisionList {
    /// Run-length encodes a per-instance camera index sequence.
    pub fn from_sequence(camera_ids: &[String], sequence: &[usize]) -> Self {
        let mut segments: Vec<Segment> = Vec::new();
        for (t, &c) in sequence.iter().enumerate() {
            match segments.last_mut() {
                Some(last) if last.camera == camera_ids[c] => last.end = t + 1,
                _ => segments.push(Segment { camera: camera_ids[c].clone(), start: t, end: t + 1 }),
            }
        }
        EditDecisionList { segments }
    }

    /// Timeline length covered (end of the last segment).
    pub fn len(&self) -> usize {
        self.segments.last().map_or(0, |s| s.end)
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn num_cuts(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    /// Checks contiguity from 0, positive lengths and that adjacent segments
    /// use different cameras.
    pub fn validate(&self) -> Result<(), EdlError> {
        let mut expected = 0;
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.start != expected {
                return Err(if seg.start < expected {
                    EdlError::Overlap { index: i, start: seg.start, prev_end: expected }
                } else {
                    EdlError::Gap { index: i, start: seg.start, prev_end: expected }
                });
            }
            if seg.end <= seg.start {
                return Err(EdlError::EmptySegment { index: i });
            }
            if i > 0 && self.segments[i - 1].camera == seg.camera {
                return Err(EdlError::RepeatedCamera { index: i, camera: seg.camera.clone() });
            }
            expected = seg.end;
        }
        Ok(())
    }

    /// Expands to a per-instance camera index sequence over `scenario`'s cameras.
    pub fn to_sequence(&self, scenario: &Scenario) -> Result<Vec<usize>, EdlError> {
        self.validate()?;
        if self.len() != scenario.len {
            return Err(EdlError::Coverage { covered: self.len(), expected: scenario.len });
        }
        let mut seq = Vec::with_capacity(scenario.len);
        for seg in &self.segments {
            let c = scenario
                .camera_index(&seg.camera)
                .ok_or_else(|| EdlError::UnknownCamera(seg.camera.clone()))?;
            seq.extend(std::iter::repeat_n(c, seg.len()));
        }
        Ok(seq)
    }
}
