//! Baseline node rankings: degree, closeness, betweenness, eigenvector,
//! PageRank, coreness, and the CoreHD removal order.

use std::cmp::Reverse;
use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::rank::RankResult;
use crate::walk::WalkOptions;

/// Sources per parallel task in [`betweenness`]. Partial sums are reduced in
/// task order, so the result does not depend on the thread count.
const SOURCE_CHUNK: usize = 64;

pub const DEFAULT_DAMPING: f64 = 0.85;

pub fn degree_centrality(g: &Graph) -> RankResult {
    let raw = g.degrees().into_iter().map(|k| k as f64).collect();
    RankResult::from_raw("degree", raw, g.labels())
}

/// Hop distances from `source`; `usize::MAX` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, source: NodeId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::from([source]);
    dist[source] = 0;
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `1 / sum_j d(i, j)` for each node, normalized.
pub fn closeness_centrality(g: &Graph) -> Result<RankResult> {
    g.require_connected()?;
    let raw: Vec<f64> = (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let total: usize = bfs_distances(g, i).iter().sum();
            if total == 0 {
                0.0
            } else {
                1.0 / total as f64
            }
        })
        .collect();
    Ok(RankResult::from_raw("closeness", raw, g.labels()))
}

/// Unnormalized betweenness, each unordered pair of endpoints counted once.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let sources: Vec<NodeId> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            let mut scratch = BrandesScratch::new(n);
            for &s in chunk {
                scratch.accumulate(g, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    total.iter_mut().for_each(|b| *b /= 2.0);
    total
}

struct BrandesScratch {
    dist: Vec<usize>,
    sigma: Vec<f64>,
    delta: Vec<f64>,
    stack: Vec<NodeId>,
    queue: VecDeque<NodeId>,
}

impl BrandesScratch {
    fn new(n: usize) -> Self {
        Self {
            dist: vec![usize::MAX; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            stack: Vec::with_capacity(n),
            queue: VecDeque::with_capacity(n),
        }
    }

    fn accumulate(&mut self, g: &Graph, s: NodeId, acc: &mut [f64]) {
        let Self {
            dist,
            sigma,
            delta,
            stack,
            queue,
        } = self;
        dist.fill(usize::MAX);
        sigma.fill(0.0);
        delta.fill(0.0);
        stack.clear();
        dist[s] = 0;
        sigma[s] = 1.0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            stack.push(v);
            for &w in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                }
            }
        }
        while let Some(w) = stack.pop() {
            for &v in g.neighbors(w) {
                if dist[v] != usize::MAX && dist[v] + 1 == dist[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
            }
            if w != s {
                acc[w] += delta[w];
            }
        }
    }
}

pub fn betweenness_centrality(g: &Graph) -> RankResult {
    RankResult::from_raw("betweenness", betweenness(g), g.labels())
}

/// Principal eigenvector of the adjacency matrix.
///
/// Iterates on `A + I`, which has the same eigenvectors and a strictly
/// dominant top eigenvalue on bipartite graphs too.
pub fn eigenvector_centrality(g: &Graph, opts: WalkOptions) -> Result<RankResult> {
    g.require_connected()?;
    let n = g.node_count();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut delta = f64::INFINITY;
    for it in 1..=opts.max_iter {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = x[i] + g.neighbors(i).iter().map(|&j| x[j]).sum::<f64>();
        }
        let total: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= total);
        delta = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut y);
        if delta < opts.tol {
            return Ok(RankResult::from_raw("eigenvector", x, g.labels()).with_convergence(it, delta));
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: delta,
    })
}

/// Fixed point of `PR_i = (1 - a) / n + a * sum_{j ~ i} PR_j / k_j`.
pub fn pagerank(g: &Graph, damping: f64, opts: WalkOptions) -> Result<RankResult> {
    if !(0.0..=1.0).contains(&damping) {
        return Err(Error::OutOfRange {
            name: "damping",
            range: "[0,1]",
        });
    }
    g.require_connected()?;
    let n = g.node_count();
    let teleport = (1.0 - damping) / n as f64;
    let inv_degree: Vec<f64> = (0..n).map(|j| 1.0 / g.degree(j) as f64).collect();
    let mut x = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut delta = f64::INFINITY;
    for it in 1..=opts.max_iter {
        for (i, yi) in y.iter_mut().enumerate() {
            let inflow: f64 = g.neighbors(i).iter().map(|&j| x[j] * inv_degree[j]).sum();
            *yi = teleport + damping * inflow;
        }
        delta = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut x, &mut y);
        if delta < opts.tol {
            return Ok(RankResult::from_raw("pagerank", x, g.labels()).with_convergence(it, delta));
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual: delta,
    })
}

/// k-core number of every node (bucket peeling).
pub fn core_numbers(g: &Graph) -> Vec<usize> {
    let n = g.node_count();
    let mut degree = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut bins = vec![0usize; max_degree + 2];
    for &d in &degree {
        bins[d + 1] += 1;
    }
    for d in 1..bins.len() {
        bins[d] += bins[d - 1];
    }
    // bins[d] = first position of degree-d nodes in `order`
    let mut pos = vec![0usize; n];
    let mut order = vec![0usize; n];
    let mut next = bins.clone();
    for v in 0..n {
        pos[v] = next[degree[v]];
        order[pos[v]] = v;
        next[degree[v]] += 1;
    }
    for i in 0..n {
        let v = order[i];
        for &u in g.neighbors(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bins[du];
                let w = order[pw];
                if u != w {
                    order.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bins[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

pub fn coreness(g: &Graph) -> RankResult {
    let raw = core_numbers(g).into_iter().map(|c| c as f64).collect();
    RankResult::from_raw("coreness", raw, g.labels())
}

/// CoreHD removal sequence, a permutation of all nodes.
///
/// While the 2-core is nonempty, removes its node of highest 2-core degree
/// (ties by label) and re-peels. The remaining forest is then broken by
/// repeatedly removing the centroid of its largest tree, i.e. the node whose
/// removal leaves the smallest largest piece. Isolated nodes come last, by
/// label.
pub fn corehd_order(g: &Graph) -> Vec<NodeId> {
    let n = g.node_count();
    let labels = g.labels();
    let mut present = vec![true; n];
    let mut order = Vec::with_capacity(n);

    // 2-core maintenance
    let mut in_core = vec![true; n];
    let mut core_degree = g.degrees();
    let mut heap: BTreeSet<(Reverse<usize>, usize, NodeId)> = BTreeSet::new();
    let mut peel: Vec<NodeId> = (0..n).filter(|&v| core_degree[v] < 2).collect();
    for (v, &d) in core_degree.iter().enumerate() {
        if d >= 2 {
            heap.insert((Reverse(d), labels.rank(v), v));
        }
    }
    let drop_from_core = |v: NodeId,
                          in_core: &mut Vec<bool>,
                          core_degree: &mut Vec<usize>,
                          heap: &mut BTreeSet<(Reverse<usize>, usize, NodeId)>,
                          peel: &mut Vec<NodeId>| {
        in_core[v] = false;
        heap.remove(&(Reverse(core_degree[v]), labels.rank(v), v));
        for &w in g.neighbors(v) {
            if in_core[w] {
                let was = core_degree[w];
                core_degree[w] -= 1;
                if heap.remove(&(Reverse(was), labels.rank(w), w)) {
                    if core_degree[w] >= 2 {
                        heap.insert((Reverse(core_degree[w]), labels.rank(w), w));
                    } else {
                        peel.push(w);
                    }
                }
            }
        }
    };
    let drain = |in_core: &mut Vec<bool>,
                 core_degree: &mut Vec<usize>,
                 heap: &mut BTreeSet<(Reverse<usize>, usize, NodeId)>,
                 peel: &mut Vec<NodeId>| {
        while let Some(v) = peel.pop() {
            if in_core[v] {
                drop_from_core(v, in_core, core_degree, heap, peel);
            }
        }
    };
    drain(&mut in_core, &mut core_degree, &mut heap, &mut peel);
    while let Some(&(_, _, v)) = heap.iter().next() {
        present[v] = false;
        order.push(v);
        drop_from_core(v, &mut in_core, &mut core_degree, &mut heap, &mut peel);
        drain(&mut in_core, &mut core_degree, &mut heap, &mut peel);
    }

    // tree breaking
    while let Some(tree) = largest_present_component(g, &present) {
        if tree.len() < 2 {
            break;
        }
        let v = tree_centroid(g, &present, &tree);
        present[v] = false;
        order.push(v);
    }
    let mut rest: Vec<NodeId> = (0..n).filter(|&v| present[v]).collect();
    rest.sort_by_key(|&v| labels.rank(v));
    order.extend(rest);
    order
}

/// Largest connected component among present nodes; ties go to the one
/// holding the smallest label.
fn largest_present_component(g: &Graph, present: &[bool]) -> Option<Vec<NodeId>> {
    let labels = g.labels();
    let n = g.node_count();
    let mut seen = vec![false; n];
    let mut best: Option<(usize, usize, Vec<NodeId>)> = None;
    for start in 0..n {
        if !present[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut i = 0;
        while i < comp.len() {
            let v = comp[i];
            i += 1;
            for &w in g.neighbors(v) {
                if present[w] && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        let min_label = comp.iter().map(|&v| labels.rank(v)).min().unwrap();
        let better = match &best {
            None => true,
            Some((size, label, _)) => comp.len() > *size || (comp.len() == *size && min_label < *label),
        };
        if better {
            best = Some((comp.len(), min_label, comp));
        }
    }
    best.map(|(_, _, c)| c)
}

/// Node of `tree` minimizing the largest piece left after its removal.
fn tree_centroid(g: &Graph, present: &[bool], tree: &[NodeId]) -> NodeId {
    let n = g.node_count();
    let size = tree.len();
    let root = tree[0];
    let mut parent = vec![usize::MAX; n];
    let mut visit = vec![root];
    parent[root] = root;
    let mut i = 0;
    while i < visit.len() {
        let v = visit[i];
        i += 1;
        for &w in g.neighbors(v) {
            if present[w] && parent[w] == usize::MAX {
                parent[w] = v;
                visit.push(w);
            }
        }
    }
    let mut subtree = vec![1usize; n];
    let mut heaviest_child = vec![0usize; n];
    for &v in visit.iter().rev() {
        if v != root {
            let p = parent[v];
            subtree[p] += subtree[v];
            heaviest_child[p] = heaviest_child[p].max(subtree[v]);
        }
    }
    let labels = g.labels();
    *visit
        .iter()
        .min_by_key(|&&v| (heaviest_child[v].max(size - subtree[v]), labels.rank(v)))
        .expect("tree is nonempty")
}
