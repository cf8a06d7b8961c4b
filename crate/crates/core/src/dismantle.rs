//! Node-removal dismantling with greedy reinsertion.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::methods::Method;
use crate::walk::WalkOptions;

pub const DEFAULT_TARGET: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DismantleResult {
    /// Removed nodes after reinsertion, in removal order.
    pub removed: Vec<NodeId>,
    /// Nodes removed before reinsertion, in order.
    pub removal_sequence: Vec<NodeId>,
    /// GCC size after each entry of `removal_sequence`.
    pub gcc_trajectory: Vec<usize>,
    /// Nodes removed before reinsertion.
    pub removed_before_reinsertion: usize,
    pub proportion: f64,
    pub target: f64,
    /// Largest GCC size that counts as dismantled, `ceil(target * n)`.
    pub threshold: usize,
    pub final_gcc: usize,
}

/// `ceil(target * n)`.
pub fn gcc_threshold(n: usize, target: f64) -> usize {
    // the slack keeps 0.01 * 300 from becoming 4
    (target * n as f64 - 1e-9).ceil().max(0.0) as usize
}

fn check_target(target: f64) -> Result<()> {
    if target > 0.0 && target < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "target",
            range: "(0,1)",
        })
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return self.size[a];
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.size[a]
    }
}

/// Size of the largest component among nodes not flagged as removed.
pub fn gcc_without(g: &Graph, removed: &[bool]) -> usize {
    let n = g.node_count();
    let mut seen = removed.to_vec();
    let mut best = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

/// GCC size after removing each prefix of `order`; entry `k` is for the
/// first `k` nodes removed. Built by adding nodes back in reverse.
pub fn prefix_gcc(g: &Graph, order: &[NodeId]) -> Vec<usize> {
    let n = g.node_count();
    let mut sets = DisjointSets::new(n);
    let mut present = vec![false; n];
    let mut gcc = vec![0; order.len() + 1];
    let mut best = 0;
    for k in (0..order.len()).rev() {
        let v = order[k];
        present[v] = true;
        best = best.max(1);
        for &w in g.neighbors(v) {
            if present[w] {
                best = best.max(sets.union(v, w));
            }
        }
        gcc[k] = best;
    }
    gcc
}

fn check_permutation(n: usize, order: &[NodeId]) -> Result<()> {
    if order.len() != n {
        return Err(Error::InvalidOrder(format!("{} entries for {n} nodes", order.len())));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidOrder(format!("node {v} is out of range or repeated")));
        }
    }
    Ok(())
}

/// Removes the shortest prefix of `order` that brings the GCC down to
/// `ceil(target * n)`. No reinsertion.
pub fn dismantle(g: &Graph, order: &[NodeId], target: f64) -> Result<DismantleResult> {
    check_target(target)?;
    let n = g.node_count();
    check_permutation(n, order)?;
    let threshold = gcc_threshold(n, target);
    let gcc = prefix_gcc(g, order);
    let k = gcc
        .iter()
        .position(|&s| s <= threshold)
        .expect("removing every node leaves an empty graph");
    Ok(DismantleResult {
        removed: order[..k].to_vec(),
        removal_sequence: order[..k].to_vec(),
        gcc_trajectory: gcc[1..=k].to_vec(),
        removed_before_reinsertion: k,
        proportion: k as f64 / n as f64,
        target,
        threshold,
        final_gcc: gcc[k],
    })
}

/// Greedy reinsertion: repeatedly returns the removed node whose return
/// gives the smallest GCC, as long as that GCC stays within
/// `ceil(target * n)`. Ties go to the smaller label. Returns the nodes still
/// removed, in their original order.
pub fn reinsert(g: &Graph, removed: &[NodeId], target: f64) -> Result<Vec<NodeId>> {
    check_target(target)?;
    let n = g.node_count();
    let threshold = gcc_threshold(n, target);
    let mut out = vec![false; n];
    for &v in removed {
        if v >= n || std::mem::replace(&mut out[v], true) {
            return Err(Error::InvalidOrder(format!("node {v} is out of range or repeated")));
        }
    }
    let mut sets = DisjointSets::new(n);
    let mut gcc = 0;
    for v in (0..n).filter(|&v| !out[v]) {
        gcc = gcc.max(1);
        for &w in g.neighbors(v) {
            if w < v && !out[w] {
                gcc = gcc.max(sets.union(v, w));
            }
        }
    }
    if gcc > threshold {
        return Err(Error::InvalidParameter {
            name: "removed",
            message: format!("remaining GCC {gcc} exceeds threshold {threshold}"),
        });
    }
    let labels = g.labels();
    let mut pending: Vec<NodeId> = removed.to_vec();
    let mut roots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (idx, &v) in pending.iter().enumerate() {
            roots.clear();
            for &w in g.neighbors(v) {
                if !out[w] {
                    roots.push(sets.find(w));
                }
            }
            roots.sort_unstable();
            roots.dedup();
            let merged = 1 + roots.iter().map(|&r| sets.size[r]).sum::<usize>();
            let key = (merged.max(gcc), labels.rank(v), idx);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        match best {
            Some((size, _, idx)) if size <= threshold => {
                let v = pending.remove(idx);
                out[v] = false;
                for &w in g.neighbors(v) {
                    if !out[w] {
                        sets.union(v, w);
                    }
                }
                gcc = size;
            }
            _ => break,
        }
    }
    Ok(pending)
}

/// Removal followed by reinsertion for a fixed removal order.
pub fn dismantle_with_order(g: &Graph, order: &[NodeId], target: f64) -> Result<DismantleResult> {
    let mut result = dismantle(g, order, target)?;
    result.removed = reinsert(g, &result.removed, target)?;
    let mut flags = vec![false; g.node_count()];
    for &v in &result.removed {
        flags[v] = true;
    }
    result.final_gcc = gcc_without(g, &flags);
    result.proportion = result.removed.len() as f64 / g.node_count() as f64;
    Ok(result)
}

/// Ranks with `method` (CoreHD adaptively, everything else once up front),
/// dismantles, and reinserts.
pub fn run_dismantling(g: &Graph, method: &Method, target: f64, opts: WalkOptions) -> Result<DismantleResult> {
    check_target(target)?;
    g.require_connected()?;
    let order = method.removal_order(g, opts)?;
    dismantle_with_order(g, &order, target)
}
