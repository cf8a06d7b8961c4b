//! Artifact writers. Every artifact starts with the same metadata: `#`
//! comment lines for CSV, `%` lines for coordinate matrices, a leading
//! `{"meta": ...}` object for JSON and JSON lines.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use horw::dismantle::DismantleResult;
use horw::epidemic::EpidemicSummary;
use horw::graph::{GraphStats, LabelMap};
use horw::resolution::{ResolutionReport, SweepResult};
use horw::simplicial::Simplex;
use horw::sparse::SparseMatrix;
use horw::RankResult;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub config_sha256: String,
    pub rng_seed: u64,
    pub input_sha256: String,
}

impl Metadata {
    pub fn new(config: &ExperimentConfig) -> Self {
        Self {
            tool: "horw",
            version: env!("CARGO_PKG_VERSION"),
            command: config.command,
            config_sha256: config.hash(),
            rng_seed: config.rng_seed,
            input_sha256: config.input_sha256.clone(),
        }
    }

    fn comment_lines(&self, marker: &str) -> String {
        format!(
            "{marker} tool: {} {}\n{marker} command: {}\n{marker} config_sha256: {}\n{marker} rng_seed: {}\n{marker} input_sha256: {}\n",
            self.tool, self.version, self.command, self.config_sha256, self.rng_seed, self.input_sha256
        )
    }

    pub fn csv(&self, header: &str, rows: &str) -> String {
        format!("{}{header}\n{rows}", self.comment_lines("#"))
    }

    pub fn json(&self, body: impl Serialize) -> String {
        let mut text = serde_json::to_string_pretty(&json!({ "meta": self, "result": body })).expect("serializable");
        text.push('\n');
        text
    }
}

/// Where artifacts go: a directory, or stdout for the one selected artifact.
pub struct Sink<'a> {
    pub dir: Option<&'a Path>,
}

impl Sink<'_> {
    /// Writes `name` into the output directory, or to stdout when there is
    /// none and `primary` is set.
    pub fn emit(&self, name: &str, contents: &str, primary: bool) -> io::Result<()> {
        match self.dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                fs::write(dir.join(name), contents)
            }
            None if primary => {
                let mut out = io::stdout().lock();
                out.write_all(contents.as_bytes())?;
                out.flush()
            }
            None => Ok(()),
        }
    }
}

/// JSON with non-finite numbers written as strings.
fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!(x.to_string())
    }
}

pub fn stats_csv(meta: &Metadata, s: &GraphStats, components: usize, beta_c: Option<f64>) -> String {
    let beta = beta_c.map(|b| b.to_string()).unwrap_or_default();
    meta.csv(
        "n,m,mean_degree,mean_sq_degree,clustering,components,beta_c",
        &format!(
            "{},{},{},{},{},{components},{beta}\n",
            s.n, s.m, s.mean_degree, s.mean_sq_degree, s.clustering
        ),
    )
}

pub fn stats_json(meta: &Metadata, s: &GraphStats, components: usize, beta_c: Option<f64>) -> String {
    meta.json(json!({
        "n": s.n,
        "m": s.m,
        "mean_degree": s.mean_degree,
        "mean_sq_degree": s.mean_sq_degree,
        "clustering": s.clustering,
        "components": components,
        "beta_c": beta_c,
    }))
}

/// CSV-quotes a label when needed.
fn field(label: &str) -> String {
    if label.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", label.replace('"', "\"\""))
    } else {
        label.to_string()
    }
}

pub fn rank_csv(meta: &Metadata, r: &RankResult, labels: &LabelMap) -> String {
    let mut rows = String::new();
    for (pos, &v) in r.order.iter().enumerate() {
        writeln!(rows, "{},{},{}", field(labels.label(v)), r.scores[v], pos + 1).unwrap();
    }
    meta.csv("label,score,rank", &rows)
}

pub fn rank_json(meta: &Metadata, r: &RankResult, labels: &LabelMap) -> String {
    let nodes: Vec<Value> = r
        .order
        .iter()
        .enumerate()
        .map(|(pos, &v)| json!({ "label": labels.label(v), "score": r.scores[v], "rank": pos + 1 }))
        .collect();
    meta.json(json!({
        "method": r.name(),
        "iterations": r.iterations,
        "residual": r.residual,
        "degenerate": r.degenerate,
        "nodes": nodes,
    }))
}

pub fn cliques_jsonl(meta: &Metadata, simplices: &[Simplex], labels: &LabelMap) -> String {
    let mut out = serde_json::to_string(&json!({ "meta": meta })).unwrap();
    out.push('\n');
    for s in simplices {
        let members: Vec<&str> = s.members.iter().map(|&v| labels.label(v)).collect();
        out.push_str(&serde_json::to_string(&json!({ "id": s.id, "members": members })).unwrap());
        out.push('\n');
    }
    out
}

/// Coordinate matrix with the metadata as `%` comments after the header.
pub fn matrix_text(meta: &Metadata, m: &SparseMatrix, pattern: bool) -> String {
    let mut buf = Vec::new();
    if pattern {
        m.write_coordinate_pattern(&mut buf).unwrap();
    } else {
        m.write_coordinate(&mut buf).unwrap();
    }
    let text = String::from_utf8(buf).unwrap();
    let (header, body) = text.split_once('\n').unwrap();
    format!("{header}\n{}{body}", meta.comment_lines("%"))
}

pub fn node_labels_csv(meta: &Metadata, labels: &LabelMap) -> String {
    let mut rows = String::new();
    for (i, l) in labels.labels().iter().enumerate() {
        writeln!(rows, "{i},{}", field(l)).unwrap();
    }
    meta.csv("index,label", &rows)
}

pub fn epidemic_csv(meta: &Metadata, s: &EpidemicSummary) -> String {
    let mut rows = String::new();
    for (t, r) in s.mean_r.iter().enumerate() {
        writeln!(rows, "{t},{r}").unwrap();
    }
    meta.csv("step,mean_r", &rows)
}

pub fn epidemic_json(
    meta: &Metadata,
    s: &EpidemicSummary,
    beta: f64,
    beta2: f64,
    beta_c: Option<f64>,
    seeds: &[&str],
) -> String {
    meta.json(json!({
        "beta": beta,
        "beta2": beta2,
        "beta_c": beta_c,
        "seeds": seeds,
        "summary": s,
    }))
}

pub fn dismantle_json(meta: &Metadata, method: &str, r: &DismantleResult, labels: &LabelMap) -> String {
    let removed: Vec<&str> = r.removed.iter().map(|&v| labels.label(v)).collect();
    meta.json(json!({
        "method": method,
        "n": labels.len(),
        "target": r.target,
        "threshold": r.threshold,
        "proportion": (r.proportion * 1000.0).round() / 1000.0,
        "proportion_exact": r.proportion,
        "removed_count": r.removed.len(),
        "removed_before_reinsertion": r.removed_before_reinsertion,
        "final_gcc": r.final_gcc,
        "removed": removed,
        "gcc_trajectory": r.gcc_trajectory,
    }))
}

pub fn trajectory_csv(meta: &Metadata, r: &DismantleResult, labels: &LabelMap) -> String {
    let mut rows = String::new();
    for (k, &gcc) in r.gcc_trajectory.iter().enumerate() {
        writeln!(rows, "{},{},{gcc}", k + 1, field(labels.label(r.removal_sequence[k]))).unwrap();
    }
    meta.csv("step,removed,gcc", &rows)
}

pub fn resolution_csv(meta: &Metadata, reports: &[ResolutionReport]) -> String {
    let mut rows = String::new();
    for r in reports {
        writeln!(
            rows,
            "{},{},{},{},{}",
            field(&r.method),
            r.kl,
            r.slope_top,
            r.slope_mid,
            r.slope_bottom
        )
        .unwrap();
    }
    meta.csv("method,kl,slope_top,slope_mid,slope_bottom", &rows)
}

fn report_value(r: &ResolutionReport) -> Value {
    json!({
        "method": r.method,
        "kl": finite(r.kl),
        "degenerate": r.degenerate,
        "slope_top": r.slope_top,
        "slope_mid": r.slope_mid,
        "slope_bottom": r.slope_bottom,
        "window": r.window,
    })
}

fn sweep_value(s: &SweepResult) -> Value {
    let points: Vec<Value> = s
        .points
        .iter()
        .map(|p| json!({ "s": p.s, "kl": finite(p.kl), "degenerate": p.degenerate }))
        .collect();
    json!({ "best_s": s.best_s, "best_kl": finite(s.best_kl), "points": points })
}

pub fn resolution_json(meta: &Metadata, reports: &[ResolutionReport], sweep: Option<&SweepResult>) -> String {
    let reports: Vec<Value> = reports.iter().map(report_value).collect();
    meta.json(json!({ "methods": reports, "sweep": sweep.map(sweep_value) }))
}

pub fn sweep_json(meta: &Metadata, sweep: &SweepResult) -> String {
    meta.json(sweep_value(sweep))
}
