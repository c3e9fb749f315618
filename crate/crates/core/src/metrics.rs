//! Edit statistics, comparison tables and timeline figures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{EdlError, Error};
use crate::model::EditDecisionList;
use crate::scoring::Objective;
use crate::solver::{rescore, InitState};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    /// Objective reward per instance.
    #[serde(rename = "R_avg")]
    pub r_avg: f64,
    /// Fraction of instances on the best-scoring camera.
    pub r_max: f64,
    /// Fraction of cuts that are favorable transitions (1 with no cuts).
    pub r_trans: f64,
    pub n_sw: usize,
    /// Mean shot length in instances.
    #[serde(rename = "L_avg")]
    pub l_avg: f64,
    #[serde(rename = "T")]
    pub len: usize,
    pub total_reward: f64,
}

/// Maps an edit list to camera indices, checking it covers the whole
/// objective timeline.
pub fn edl_to_sequence(edl: &EditDecisionList, camera_ids: &[String], len: usize) -> Result<Vec<usize>, EdlError> {
    edl.validate()?;
    if edl.len() != len {
        return Err(EdlError::Coverage { covered: edl.len(), expected: len });
    }
    let mut seq = Vec::with_capacity(len);
    for seg in &edl.segments {
        let c = camera_ids
            .iter()
            .position(|id| *id == seg.camera)
            .ok_or_else(|| EdlError::UnknownCamera(seg.camera.clone()))?;
        seq.extend(std::iter::repeat_n(c, seg.len()));
    }
    Ok(seq)
}

pub fn compute_metrics(
    edl: &EditDecisionList,
    camera_ids: &[String],
    obj: &Objective,
    init: InitState,
) -> Result<MetricsReport, Error> {
    if camera_ids.len() != obj.cameras() {
        return Err(Error::Invalid(format!(
            "{} camera ids for a score matrix with {} cameras",
            camera_ids.len(),
            obj.cameras()
        )));
    }
    let seq = edl_to_sequence(edl, camera_ids, obj.len())?;
    let len = seq.len();
    let total_reward = rescore(obj, &seq, init, 0)?;
    let on_max = seq.iter().enumerate().filter(|&(t, &c)| obj.scores().argmax_at(t) == c).count();
    let kinds = obj.kinds();
    let (mut cuts, mut favorable) = (0usize, 0usize);
    for w in seq.windows(2) {
        if w[0] != w[1] {
            cuts += 1;
            if obj.transitions().is_favorable(kinds[w[0]], kinds[w[1]]) {
                favorable += 1;
            }
        }
    }
    Ok(MetricsReport {
        r_avg: total_reward / len as f64,
        r_max: on_max as f64 / len as f64,
        r_trans: if cuts == 0 { 1.0 } else { favorable as f64 / cuts as f64 },
        n_sw: cuts,
        l_avg: len as f64 / (cuts + 1) as f64,
        len,
        total_reward,
    })
}

/// The five statistics as plain numbers; `n_sw` may be a mean over runs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    #[serde(rename = "R_avg")]
    pub r_avg: f64,
    pub r_max: f64,
    pub r_trans: f64,
    pub n_sw: f64,
    #[serde(rename = "L_avg")]
    pub l_avg: f64,
}

impl From<&MetricsReport> for Summary {
    fn from(r: &MetricsReport) -> Self {
        Summary { r_avg: r.r_avg, r_max: r.r_max, r_trans: r.r_trans, n_sw: r.n_sw as f64, l_avg: r.l_avg }
    }
}

impl Summary {
    /// Column-wise mean; `None` for an empty slice.
    pub fn mean(reports: &[MetricsReport]) -> Option<Summary> {
        if reports.is_empty() {
            return None;
        }
        let n = reports.len() as f64;
        let mut acc = Summary { r_avg: 0.0, r_max: 0.0, r_trans: 0.0, n_sw: 0.0, l_avg: 0.0 };
        for r in reports {
            acc.r_avg += r.r_avg;
            acc.r_max += r.r_max;
            acc.r_trans += r.r_trans;
            acc.n_sw += r.n_sw as f64;
            acc.l_avg += r.l_avg;
        }
        Some(Summary {
            r_avg: acc.r_avg / n,
            r_max: acc.r_max / n,
            r_trans: acc.r_trans / n,
            n_sw: acc.n_sw / n,
            l_avg: acc.l_avg / n,
        })
    }
}

/// One method in a comparison; `error` is set when it produced no result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<Summary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CompareRow {
    pub fn ok(method: impl Into<String>, summary: Summary) -> Self {
        CompareRow { method: method.into(), summary: Some(summary), error: None }
    }

    pub fn failed(method: impl Into<String>, error: impl Into<String>) -> Self {
        CompareRow { method: method.into(), summary: None, error: Some(error.into()) }
    }
}

/// Which of R_avg, r_max, r_trans each row holds the column maximum of.
pub fn best_flags(rows: &[CompareRow]) -> Vec<[bool; 3]> {
    let col = |s: &Summary, i: usize| [s.r_avg, s.r_max, s.r_trans][i];
    let mut max = [f64::NEG_INFINITY; 3];
    for s in rows.iter().filter_map(|r| r.summary.as_ref()) {
        for (i, m) in max.iter_mut().enumerate() {
            *m = m.max(col(s, i));
        }
    }
    rows.iter()
        .map(|r| match &r.summary {
            Some(s) => [0, 1, 2].map(|i| col(s, i) == max[i]),
            None => [false; 3],
        })
        .collect()
}

const BEST_NAMES: [&str; 3] = ["R_avg", "r_max", "r_trans"];

pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("method,R_avg,r_max,r_trans,n_sw,L_avg,status,best\n");
    for (row, best) in rows.iter().zip(best_flags(rows)) {
        let tags: Vec<&str> = (0..3).filter(|&i| best[i]).map(|i| BEST_NAMES[i]).collect();
        match &row.summary {
            Some(s) => writeln!(
                out,
                "{},{:.6},{:.6},{:.6},{:.3},{:.3},ok,{}",
                csv_field(&row.method),
                s.r_avg,
                s.r_max,
                s.r_trans,
                s.n_sw,
                s.l_avg,
                tags.join(";")
            ),
            None => writeln!(
                out,
                "{},,,,,,{},",
                csv_field(&row.method),
                csv_field(&format!("failed: {}", row.error.as_deref().unwrap_or("unknown error")))
            ),
        }
        .expect("writing to a String");
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Aligned plain-text table; column maxima are marked with `*`.
pub fn compare_text(rows: &[CompareRow]) -> String {
    let header = ["method", "R_avg", "r_max", "r_trans", "n_sw", "L_avg"];
    let flags = best_flags(rows);
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|h| h.to_string()).collect()];
    for (row, best) in rows.iter().zip(&flags) {
        let mark = |v: f64, b: bool| format!("{v:.4}{}", if b { "*" } else { " " });
        cells.push(match &row.summary {
            Some(s) => vec![
                row.method.clone(),
                mark(s.r_avg, best[0]),
                mark(s.r_max, best[1]),
                mark(s.r_trans, best[2]),
                format!("{:.2}", s.n_sw),
                format!("{:.2}", s.l_avg),
            ],
            None => vec![
                row.method.clone(),
                format!("FAILED: {}", row.error.as_deref().unwrap_or("unknown error")),
            ],
        });
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|i| cells.iter().filter(|r| r.len() == header.len()).map(|r| r[i].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if row.len() < header.len() && i == row.len() - 1 {
                    c.clone()
                } else if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

const PALETTE: [&str; 7] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1"];

/// Camera-selection timeline: time runs left to right, one lane per camera.
pub fn timeline_svg(edl: &EditDecisionList, camera_ids: &[String]) -> Result<String, EdlError> {
    edl.validate()?;
    let len = edl.len().max(1);
    let (label_w, plot_w, lane_h, pad) = (60.0, 900.0, 18.0, 10.0);
    let height = pad * 2.0 + lane_h * camera_ids.len() as f64 + 20.0;
    let width = label_w + plot_w + pad * 2.0;
    let x = |t: usize| label_w + pad + plot_w * t as f64 / len as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (i, id) in camera_ids.iter().enumerate() {
        let y = pad + lane_h * i as f64;
        let _ = writeln!(
            s,
            r##"<text x="{}" y="{}" text-anchor="end">{}</text><line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#ddd"/>"##,
            label_w,
            y + lane_h * 0.7,
            xml_escape(id),
            x(0),
            y + lane_h / 2.0,
            x(len),
            y + lane_h / 2.0
        );
    }
    for seg in &edl.segments {
        let lane = camera_ids.iter().position(|id| *id == seg.camera).ok_or_else(|| EdlError::UnknownCamera(seg.camera.clone()))?;
        let y = pad + lane_h * lane as f64 + 2.0;
        let _ = writeln!(
            s,
            r#"<rect x="{:.3}" y="{}" width="{:.3}" height="{}" fill="{}"><title>{} {}..{}</title></rect>"#,
            x(seg.start),
            y,
            x(seg.end) - x(seg.start),
            lane_h - 4.0,
            PALETTE[lane % PALETTE.len()],
            xml_escape(&seg.camera),
            seg.start,
            seg.end
        );
    }
    let axis_y = pad + lane_h * camera_ids.len() as f64 + 14.0;
    let _ = writeln!(s, r#"<text x="{}" y="{axis_y}">0</text>"#, x(0));
    let _ = writeln!(s, r#"<text x="{}" y="{axis_y}" text-anchor="end">{}</text>"#, x(len), len);
    s.push_str("</svg>\n");
    Ok(s)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
