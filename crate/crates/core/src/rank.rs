//! Score vectors with a deterministic node ordering.

use serde::Serialize;

use crate::graph::{LabelMap, NodeId};

/// Relative gap below which two scores are treated as tied when ordering.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Per-node scores for one ranking method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankResult {
    pub method: String,
    /// Tuning parameter, for the higher-order walk.
    pub s: Option<f64>,
    /// Nonnegative, summing to 1.
    pub scores: Vec<f64>,
    /// Nodes by descending score; ties by ascending label.
    pub order: Vec<NodeId>,
    pub iterations: usize,
    pub residual: f64,
    /// Raw scores were all zero and were replaced by the uniform vector.
    pub degenerate: bool,
}

impl RankResult {
    /// Normalizes `raw` to sum 1 (all-zero input becomes uniform) and orders
    /// the nodes.
    pub fn from_raw(method: impl Into<String>, raw: Vec<f64>, labels: &LabelMap) -> Self {
        assert_eq!(raw.len(), labels.len(), "one score per node");
        let total: f64 = raw.iter().sum();
        let n = raw.len();
        let (scores, degenerate) = if total > 0.0 {
            (raw.iter().map(|&x| x / total).collect(), false)
        } else {
            (vec![1.0 / n as f64; n], true)
        };
        let order = ranking_order(&scores, labels);
        Self {
            method: method.into(),
            s: None,
            scores,
            order,
            iterations: 0,
            residual: 0.0,
            degenerate,
        }
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = Some(s);
        self
    }

    pub fn with_convergence(mut self, iterations: usize, residual: f64) -> Self {
        self.iterations = iterations;
        self.residual = residual;
        self
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// The `k` highest-ranked nodes.
    pub fn top(&self, k: usize) -> &[NodeId] {
        &self.order[..k.min(self.order.len())]
    }

    /// 1-based rank position of every node.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i + 1;
        }
        pos
    }

    /// Scores sorted in descending order.
    pub fn sorted_scores(&self) -> Vec<f64> {
        self.order.iter().map(|&v| self.scores[v]).collect()
    }

    /// Display name, e.g. `horw(s=0.5)` or `degree`.
    pub fn name(&self) -> String {
        match self.s {
            Some(s) => format!("{}(s={s})", self.method),
            None => self.method.clone(),
        }
    }
}

/// Nodes by descending score. Scores within [`TIE_TOLERANCE`] (relative) of
/// their predecessor join its tie group; each group is ordered by label.
pub fn ranking_order(scores: &[f64], labels: &LabelMap) -> Vec<NodeId> {
    let mut order: Vec<NodeId> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .total_cmp(&scores[a])
            .then_with(|| labels.rank(a).cmp(&labels.rank(b)))
    });
    let near = |a: f64, b: f64| (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs());
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || !near(scores[order[i - 1]], scores[order[i]]) {
            order[start..i].sort_by_key(|&v| labels.rank(v));
            start = i;
        }
    }
    order
}
