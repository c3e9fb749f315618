//! Signal-level event detectors.
//!
//! Each detector turns one numeric feature stream into a binary indicator
//! vector of the same length. All comparisons against thresholds are strict.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::DetectorError;
use crate::model::{Scenario, ShotKind};

/// A single video frame as a dense `rows x cols x channels` array.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Vec<f64>>>", into = "Vec<Vec<Vec<f64>>>")]
pub struct FrameGrid {
    rows: usize,
    cols: usize,
    channels: usize,
    data: Vec<f64>,
}

impl FrameGrid {
    /// `data` is row-major with interleaved channels.
    pub fn new(rows: usize, cols: usize, channels: usize, data: Vec<f64>) -> Result<Self, DetectorError> {
        let g = FrameGrid { rows, cols, channels, data };
        g.check()?;
        Ok(g)
    }

    pub fn from_fn(rows: usize, cols: usize, channels: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols * channels);
        for r in 0..rows {
            for c in 0..cols {
                for ch in 0..channels {
                    data.push(f(r, c, ch));
                }
            }
        }
        FrameGrid { rows, cols, channels, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn shape(&self) -> (usize, usize, usize) {
        (self.rows, self.cols, self.channels)
    }

    pub fn get(&self, r: usize, c: usize, ch: usize) -> f64 {
        self.data[(r * self.cols + c) * self.channels + ch]
    }

    pub fn check(&self) -> Result<(), DetectorError> {
        if self.rows < 2 || self.cols < 2 {
            return Err(DetectorError::DegenerateGrid { rows: self.rows, cols: self.cols });
        }
        if self.channels != 1 && self.channels != 3 {
            return Err(DetectorError::Channels { channels: self.channels });
        }
        let expected = self.rows * self.cols * self.channels;
        if self.data.len() != expected {
            return Err(DetectorError::DataLength { expected, found: self.data.len() });
        }
        if self.data.iter().any(|x| !x.is_finite()) {
            return Err(DetectorError::NonFinite);
        }
        Ok(())
    }

    fn channel_plane(&self, ch: usize) -> Vec<f64> {
        self.data.iter().skip(ch).step_by(self.channels).copied().collect()
    }
}

impl TryFrom<Vec<Vec<Vec<f64>>>> for FrameGrid {
    type Error = String;

    fn try_from(nested: Vec<Vec<Vec<f64>>>) -> Result<Self, Self::Error> {
        let rows = nested.len();
        let cols = nested.first().map_or(0, Vec::len);
        let channels = nested.first().and_then(|r| r.first()).map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * cols * channels);
        for row in &nested {
            if row.len() != cols {
                return Err(format!("ragged frame grid: row of {} columns, expected {cols}", row.len()));
            }
            for px in row {
                if px.len() != channels {
                    return Err(format!("ragged frame grid: pixel of {} channels, expected {channels}", px.len()));
                }
                data.extend_from_slice(px);
            }
        }
        FrameGrid::new(rows, cols, channels, data).map_err(|e| e.to_string())
    }
}

impl From<FrameGrid> for Vec<Vec<Vec<f64>>> {
    fn from(g: FrameGrid) -> Self {
        (0..g.rows)
            .map(|r| (0..g.cols).map(|c| (0..g.channels).map(|ch| g.get(r, c, ch)).collect()).collect())
            .collect()
    }
}

/// Dense optical flow between two consecutive frames.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<[f64; 2]>>", into = "Vec<Vec<[f64; 2]>>")]
pub struct FlowField {
    rows: usize,
    cols: usize,
    u: Vec<f64>,
    v: Vec<f64>,
}

impl FlowField {
    pub fn new(rows: usize, cols: usize, u: Vec<f64>, v: Vec<f64>) -> Result<Self, DetectorError> {
        let f = FlowField { rows, cols, u, v };
        f.check()?;
        Ok(f)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        FlowField { rows, cols, u: vec![0.0; rows * cols], v: vec![0.0; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn check(&self) -> Result<(), DetectorError> {
        if self.rows < 2 || self.cols < 2 {
            return Err(DetectorError::DegenerateGrid { rows: self.rows, cols: self.cols });
        }
        let expected = self.rows * self.cols;
        for ch in [&self.u, &self.v] {
            if ch.len() != expected {
                return Err(DetectorError::DataLength { expected, found: ch.len() });
            }
            if ch.iter().any(|x| !x.is_finite()) {
                return Err(DetectorError::NonFinite);
            }
        }
        Ok(())
    }
}

impl TryFrom<Vec<Vec<[f64; 2]>>> for FlowField {
    type Error = String;

    fn try_from(nested: Vec<Vec<[f64; 2]>>) -> Result<Self, Self::Error> {
        let rows = nested.len();
        let cols = nested.first().map_or(0, Vec::len);
        let mut u = Vec::with_capacity(rows * cols);
        let mut v = Vec::with_capacity(rows * cols);
        for row in &nested {
            if row.len() != cols {
                return Err(format!("ragged flow grid: row of {} columns, expected {cols}", row.len()));
            }
            for [a, b] in row {
                u.push(*a);
                v.push(*b);
            }
        }
        FlowField::new(rows, cols, u, v).map_err(|e| e.to_string())
    }
}

impl From<FlowField> for Vec<Vec<[f64; 2]>> {
    fn from(f: FlowField) -> Self {
        (0..f.rows)
            .map(|r| (0..f.cols).map(|c| [f.u[r * f.cols + c], f.v[r * f.cols + c]]).collect())
            .collect()
    }
}

/// Tunables for every detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectorParams {
    /// History length of the autoregressive anomaly detector.
    pub ar_window: usize,
    /// Residual multiplier: an instance is anomalous when its residual exceeds
    /// `ar_threshold` in-window residual standard deviations.
    pub ar_threshold: f64,
    pub ar_sigma_floor: f64,
    pub entropy_bins: usize,
    pub drop_window: usize,
    /// Mean drop that counts as anomalous; `None` uses half the series
    /// standard deviation.
    pub drop_threshold: Option<f64>,
    pub count_min: u32,
    pub position_bounds: (f64, f64),
    pub prob_threshold: f64,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            ar_window: 50,
            ar_threshold: 4.0,
            ar_sigma_floor: 1e-6,
            entropy_bins: 9,
            drop_window: 25,
            drop_threshold: None,
            count_min: 1,
            position_bounds: (0.2, 0.8),
            prob_threshold: 0.5,
        }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<(), DetectorError> {
        let bad = |name, msg: String| Err(DetectorError::Param { name, msg });
        if self.ar_window < 3 {
            return bad("ar_window", format!("must be at least 3, got {}", self.ar_window));
        }
        if !(self.ar_threshold.is_finite() && self.ar_threshold > 0.0) {
            return bad("ar_threshold", format!("must be > 0, got {}", self.ar_threshold));
        }
        if !(self.ar_sigma_floor.is_finite() && self.ar_sigma_floor > 0.0) {
            return bad("ar_sigma_floor", format!("must be > 0, got {}", self.ar_sigma_floor));
        }
        if self.entropy_bins < 2 {
            return bad("entropy_bins", format!("must be at least 2, got {}", self.entropy_bins));
        }
        if self.drop_window < 1 {
            return bad("drop_window", "must be at least 1".into());
        }
        if let Some(d) = self.drop_threshold {
            if !(d.is_finite() && d > 0.0) {
                return bad("drop_threshold", format!("must be > 0, got {d}"));
            }
        }
        if self.count_min < 1 {
            return bad("count_min", "must be at least 1".into());
        }
        let (lo, hi) = self.position_bounds;
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return bad("position_bounds", format!("need 0 <= low <= high <= 1, got ({lo}, {hi})"));
        }
        if !(self.prob_threshold > 0.0 && self.prob_threshold < 1.0) {
            return bad("prob_threshold", format!("must lie in (0, 1), got {}", self.prob_threshold));
        }
        Ok(())
    }
}

/// Central-difference gradients with replicated borders.
fn gradients(plane: &[f64], rows: usize, cols: usize) -> (Vec<f64>, Vec<f64>) {
    let at = |r: usize, c: usize| plane[r * cols + c];
    let mut gx = Vec::with_capacity(rows * cols);
    let mut gy = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (up, down) = (r.saturating_sub(1), (r + 1).min(rows - 1));
        for c in 0..cols {
            let (left, right) = (c.saturating_sub(1), (c + 1).min(cols - 1));
            gx.push((at(r, right) - at(r, left)) / 2.0);
            gy.push((at(down, c) - at(up, c)) / 2.0);
        }
    }
    (gx, gy)
}

fn gradient_magnitude(plane: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let (gx, gy) = gradients(plane, rows, cols);
    gx.iter().zip(&gy).map(|(x, y)| x.hypot(*y)).collect()
}

/// Gradient difference score between two frames: the per-channel Euclidean
/// norm of the gradient-magnitude difference, averaged over channels.
pub fn grad_diff_score(a: &FrameGrid, b: &FrameGrid) -> Result<f64, DetectorError> {
    a.check()?;
    b.check()?;
    if a.shape() != b.shape() {
        return Err(DetectorError::ShapeMismatch(a.shape(), b.shape()));
    }
    let (rows, cols, channels) = a.shape();
    let mut total = 0.0;
    for ch in 0..channels {
        let ga = gradient_magnitude(&a.channel_plane(ch), rows, cols);
        let gb = gradient_magnitude(&b.channel_plane(ch), rows, cols);
        let sq: f64 = ga.iter().zip(&gb).map(|(x, y)| (x - y) * (x - y)).sum();
        total += sq.sqrt();
    }
    Ok(total / channels as f64)
}

/// Gradient difference series of a frame sequence. Entry `t` compares frames
/// `t - 1` and `t`; entry 0 has no predecessor and repeats entry 1.
pub fn frame_score_series(frames: &[FrameGrid]) -> Result<Vec<f64>, DetectorError> {
    let mut out = Vec::with_capacity(frames.len());
    for pair in frames.windows(2) {
        out.push(grad_diff_score(&pair[0], &pair[1])?);
    }
    match out.first().copied() {
        Some(first) => out.insert(0, first),
        None => out.extend(frames.first().map(|_| 0.0)),
    }
    Ok(out)
}

/// Unsigned-orientation histogram of one flow channel's spatial gradients,
/// magnitude weighted, over the whole grid.
pub fn orientation_histogram(plane: &[f64], rows: usize, cols: usize, bins: usize) -> Vec<f64> {
    let (gx, gy) = gradients(plane, rows, cols);
    let mut hist = vec![0.0; bins];
    let width = std::f64::consts::PI / bins as f64;
    for (x, y) in gx.iter().zip(&gy) {
        let mag = x.hypot(*y);
        if mag == 0.0 {
            continue;
        }
        let mut theta = y.atan2(*x);
        if theta < 0.0 {
            theta += std::f64::consts::PI;
        }
        let bin = ((theta / width) as usize).min(bins - 1);
        hist[bin] += mag;
    }
    hist
}

/// Shannon entropy (nats) of `softmax(h)`.
pub fn softmax_entropy(h: &[f64]) -> f64 {
    let m = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = h.iter().map(|x| (x - m).exp()).collect();
    let z: f64 = exps.iter().sum();
    // H = ln Z - sum p_i (h_i - m); exact ln(n) for a constant histogram.
    let weighted: f64 = exps.iter().zip(h).map(|(e, x)| e / z * (x - m)).sum();
    (z.ln() - weighted).clamp(0.0, (h.len() as f64).ln())
}

/// Motion entropy of a flow field: softmax-normalized orientation histograms
/// of the `u` and `v` channels, entropies summed. Lies in `(0, 2 ln n]`.
pub fn motion_entropy_score(flow: &FlowField, bins: usize) -> Result<f64, DetectorError> {
    flow.check()?;
    if bins < 2 {
        return Err(DetectorError::Param { name: "entropy_bins", msg: format!("must be at least 2, got {bins}") });
    }
    let hu = orientation_histogram(&flow.u, flow.rows, flow.cols, bins);
    let hv = orientation_histogram(&flow.v, flow.rows, flow.cols, bins);
    Ok(softmax_entropy(&hu) + softmax_entropy(&hv))
}

pub fn flow_score_series(flows: &[FlowField], bins: usize) -> Result<Vec<f64>, DetectorError> {
    flows.iter().map(|f| motion_entropy_score(f, bins)).collect()
}

/// Least-squares AR(2) fit with intercept over `window`; returns the
/// prediction for the instance following the window and the residual
/// standard deviation of the fit.
fn ar2_fit_predict(window: &[f64]) -> (f64, f64) {
    let rows = window.len() - 2;
    let lag1: Vec<f64> = window[1..window.len() - 1].to_vec();
    let lag2: Vec<f64> = window[..rows].to_vec();
    let target: Vec<f64> = window[2..].to_vec();
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let (m1, m2, my) = (mean(&lag1), mean(&lag2), mean(&target));
    let x = DMatrix::from_fn(rows, 2, |i, j| if j == 0 { lag1[i] - m1 } else { lag2[i] - m2 });
    let y = DVector::from_fn(rows, |i, _| target[i] - my);
    let svd = x.svd(true, true);
    let tol = svd.singular_values.max() * 1e-9;
    let coef = svd.solve(&y, tol).unwrap_or_else(|_| DVector::zeros(2));
    let (b1, b2) = (coef[0], coef[1]);
    let intercept = my - b1 * m1 - b2 * m2;
    let sse: f64 = (0..rows)
        .map(|i| {
            let e = target[i] - (intercept + b1 * lag1[i] + b2 * lag2[i]);
            e * e
        })
        .sum();
    let n = window.len();
    let prediction = intercept + b1 * window[n - 1] + b2 * window[n - 2];
    (prediction, (sse / rows as f64).sqrt())
}

/// Autoregressive anomaly detector: instance `t >= ar_window` is marked when
/// its residual against an AR(2) model fitted on the preceding `ar_window`
/// values exceeds `ar_threshold` residual standard deviations.
pub fn ar_anomaly_detect(series: &[f64], p: &DetectorParams) -> Result<Vec<u8>, DetectorError> {
    p.validate()?;
    let tau = p.ar_window;
    if series.len() <= tau {
        return Err(DetectorError::SeriesTooShort { len: series.len(), need: tau });
    }
    let mut out = vec![0u8; series.len()];
    for t in tau..series.len() {
        let (pred, sigma) = ar2_fit_predict(&series[t - tau..t]);
        let residual = (series[t] - pred).abs();
        if residual > p.ar_threshold * sigma.max(p.ar_sigma_floor) {
            out[t] = 1;
        }
    }
    Ok(out)
}

/// Population standard deviation over the sorted values, so the result does
/// not depend on the order of the input.
fn order_free_std(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let mut dev: Vec<f64> = v.iter().map(|x| (x - mean) * (x - mean)).collect();
    dev.sort_by(f64::total_cmp);
    (dev.iter().sum::<f64>() / v.len() as f64).sqrt()
}

/// Threshold the drop detector will use on `scores`.
pub fn drop_threshold(scores: &[f64], p: &DetectorParams) -> f64 {
    p.drop_threshold.unwrap_or_else(|| (0.5 * order_free_std(scores)).max(1e-9))
}

/// Window mean-drop detector: `t` is marked when the mean of
/// `scores[t-2w ..= t-w-1]` exceeds the mean of `scores[t-w ..= t]` by more
/// than the drop threshold. Instances before `2w` are never marked.
pub fn window_drop_detect(scores: &[f64], p: &DetectorParams) -> Result<Vec<u8>, DetectorError> {
    p.validate()?;
    let w = p.drop_window;
    if scores.len() < 2 * w {
        return Err(DetectorError::SeriesTooShort { len: scores.len(), need: 2 * w - 1 });
    }
    let delta = drop_threshold(scores, p);
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let mut out = vec![0u8; scores.len()];
    for t in 2 * w..scores.len() {
        let lead = mean(&scores[t - 2 * w..t - w]);
        let trail = mean(&scores[t - w..=t]);
        if lead - trail > delta {
            out[t] = 1;
        }
    }
    Ok(out)
}

/// Marks instances where more than `count_min` persons are visible.
pub fn count_indicator(counts: &[u32], p: &DetectorParams) -> Vec<u8> {
    counts.iter().map(|&n| u8::from(n > p.count_min)).collect()
}

/// Marks instances where the presenter is strictly outside the normal band.
pub fn position_indicator(positions: &[f64], p: &DetectorParams) -> Vec<u8> {
    let (lo, hi) = p.position_bounds;
    positions.iter().map(|&x| u8::from(x < lo || x > hi)).collect()
}

/// Thresholds externally supplied event probabilities.
pub fn prob_indicator(probs: &[f64], p: &DetectorParams) -> Result<Vec<u8>, DetectorError> {
    probs
        .iter()
        .enumerate()
        .map(|(t, &x)| {
            if (0.0..=1.0).contains(&x) {
                Ok(u8::from(x > p.prob_threshold))
            } else {
                Err(DetectorError::ProbabilityRange { t, value: x })
            }
        })
        .collect()
}

/// Runs the detector matching each camera's shot kind on its feature
/// streams, replacing the indicator. Cameras without a usable stream keep
/// their indicator.
pub fn detect_scenario(s: &Scenario, p: &DetectorParams) -> Result<Scenario, DetectorError> {
    p.validate()?;
    let mut out = s.clone();
    for cam in &mut out.cameras {
        let f = &cam.features;
        let detected = match cam.kind {
            ShotKind::LeftBlackboardCloseUp | ShotKind::RightBlackboardCloseUp => {
                f.scalar.as_deref().map(|xs| prob_indicator(xs, p)).transpose()?
            }
            ShotKind::SlideCloseUp => {
                let series = match (&f.frames, &f.scalar) {
                    (Some(frames), _) => Some(frame_score_series(frames)?),
                    (None, Some(xs)) => Some(xs.clone()),
                    _ => None,
                };
                series.map(|xs| ar_anomaly_detect(&xs, p)).transpose()?
            }
            ShotKind::StudentLong => {
                let series = match (&f.flow, &f.scalar) {
                    (Some(flow), _) => Some(flow_score_series(flow, p.entropy_bins)?),
                    (None, Some(xs)) => Some(xs.clone()),
                    _ => None,
                };
                series.map(|xs| window_drop_detect(&xs, p)).transpose()?
            }
            ShotKind::LeftMedium | ShotKind::RightMedium => f.counts.as_deref().map(|xs| count_indicator(xs, p)),
            ShotKind::OverviewLong => f.positions.as_deref().map(|xs| position_indicator(xs, p)),
        };
        if let Some(ind) = detected {
            cam.indicator = ind;
        }
    }
    Ok(out)
}
