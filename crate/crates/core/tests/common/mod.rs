#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::PathBuf;

use horw::graph::{parse_edge_list, EdgeListFormat};
use horw::{Graph, NodeId};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture(name: &str) -> Graph {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_edge_list(&bytes, &EdgeListFormat::default()).unwrap().0
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Each pair independently with probability `p`; may be disconnected.
pub fn random_gnp(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn dense_adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut a = vec![vec![false; n]; n];
    for (i, j) in g.edges() {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

/// All-pairs hop distances by BFS over the dense adjacency.
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let a = dense_adjacency(g);
    let n = a.len();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(v) = q.pop_front() {
                for w in 0..n {
                    if a[v][w] && d[w] == usize::MAX {
                        d[w] = d[v] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Largest component after deleting `removed`, by plain flood fill.
pub fn gcc_from_scratch(g: &Graph, removed: &[bool]) -> usize {
    let a = dense_adjacency(g);
    let n = a.len();
    let mut seen = removed.to_vec();
    let mut best = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for w in 0..n {
                if a[v][w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

pub fn brute_cliques(g: &Graph) -> Vec<Vec<NodeId>> {
    let n = g.node_count();
    let a = dense_adjacency(g);
    let nbr: Vec<u32> = (0..n)
        .map(|i| (0..n).filter(|&j| a[i][j]).fold(0u32, |m, j| m | 1 << j))
        .collect();
    let mut is_clique = vec![false; 1 << n];
    is_clique[0] = true;
    for mask in 1u32..(1 << n) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        is_clique[mask as usize] = is_clique[rest as usize] && nbr[low] & rest == rest;
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        if !is_clique[mask as usize] {
            continue;
        }
        let extendable = (0..n).any(|v| mask & 1 << v == 0 && nbr[v] & mask == mask);
        // isolated nodes form no simplex
        if !extendable && mask.count_ones() >= 2 {
            out.push((0..n).filter(|&v| mask & 1 << v != 0).collect());
        }
    }
    out.sort();
    out
}

pub fn dense(m: &horw::sparse::SparseMatrix) -> DMatrix<f64> {
    let rows = m.to_dense();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rows[i][j])
}

/// Solves `M x = x`, `sum x = 1` directly.
pub fn dense_stationary(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut a = m - DMatrix::<f64>::identity(n, n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a.lu().solve(&b).expect("unique stationary vector");
    x.iter().copied().collect()
}

/// Exact distribution of the number of ever-infected nodes, by enumerating
/// every joint outcome of every synchronous step.
pub struct ExactSir<'a> {
    g: &'a Graph,
    triangles: Vec<Vec<(NodeId, NodeId)>>,
    beta: f64,
    beta2: f64,
    gamma: f64,
    memo: HashMap<Vec<u8>, BTreeMap<usize, f64>>,
}

impl<'a> ExactSir<'a> {
    pub fn new(g: &'a Graph, triangles: &[[NodeId; 3]], beta: f64, beta2: f64, gamma: f64) -> Self {
        let mut by_node = vec![Vec::new(); g.node_count()];
        for &[a, b, c] in triangles {
            by_node[a].push((b, c));
            by_node[b].push((a, c));
            by_node[c].push((a, b));
        }
        Self {
            g,
            triangles: by_node,
            beta,
            beta2,
            gamma,
            memo: HashMap::new(),
        }
    }

    fn final_size(&mut self, state: Vec<u8>) -> BTreeMap<usize, f64> {
        if let Some(d) = self.memo.get(&state) {
            return d.clone();
        }
        let n = state.len();
        let infected: Vec<usize> = (0..n).filter(|&v| state[v] == 1).collect();
        if infected.is_empty() {
            let r = state.iter().filter(|&&x| x == 2).count();
            return BTreeMap::from([(r, 1.0)]);
        }
        let mut exposed = Vec::new();
        for v in (0..n).filter(|&v| state[v] == 0) {
            let n1 = self.g.neighbors(v).iter().filter(|&&w| state[w] == 1).count() as i32;
            let n2 = self.triangles[v]
                .iter()
                .filter(|&&(a, b)| state[a] == 1 && state[b] == 1)
                .count() as i32;
            let p = 1.0 - (1.0 - self.beta).powi(n1) * (1.0 - self.beta2).powi(n2);
            if p > 0.0 {
                exposed.push((v, p));
            }
        }
        let k = exposed.len() + infected.len();
        let mut stay = 0.0;
        let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
        for mask in 0u32..(1 << k) {
            let mut prob = 1.0;
            let mut next = state.clone();
            for (bit, &(v, p)) in exposed.iter().enumerate() {
                if mask & 1 << bit != 0 {
                    prob *= p;
                    next[v] = 1;
                } else {
                    prob *= 1.0 - p;
                }
            }
            for (bit, &v) in infected.iter().enumerate() {
                if mask & 1 << (bit + exposed.len()) != 0 {
                    prob *= self.gamma;
                    next[v] = 2;
                } else {
                    prob *= 1.0 - self.gamma;
                }
            }
            if prob == 0.0 {
                continue;
            }
            if mask == 0 {
                stay = prob;
                continue;
            }
            for (r, q) in self.final_size(next) {
                *acc.entry(r).or_default() += prob * q;
            }
        }
        for q in acc.values_mut() {
            *q /= 1.0 - stay;
        }
        self.memo.insert(state, acc.clone());
        acc
    }

    pub fn final_sizes(&mut self, seeds: &[NodeId]) -> BTreeMap<usize, f64> {
        let mut state = vec![0u8; self.g.node_count()];
        for &s in seeds {
            state[s] = 1;
        }
        self.final_size(state)
    }
}

/// Every outcome frequency within 3 sigma of its exact probability.
pub fn check_against_exact(exact: &BTreeMap<usize, f64>, finals: &[f64], n: usize) -> Result<(), String> {
    let runs = finals.len() as f64;
    let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
    for &f in finals {
        *counts.entry((f * n as f64).round() as usize).or_default() += 1.0;
    }
    if let Some(r) = counts.keys().find(|r| !exact.contains_key(r)) {
        return Err(format!("impossible outcome {r}"));
    }
    for (&r, &p) in exact {
        let freq = counts.get(&r).copied().unwrap_or(0.0) / runs;
        let sigma = (p * (1.0 - p) / runs).sqrt();
        if (freq - p).abs() > 3.0 * sigma + 1e-12 {
            return Err(format!("outcome {r}: {freq} vs {p}"));
        }
    }
    let mean: f64 = exact.iter().map(|(&r, &p)| p * r as f64 / n as f64).sum();
    let var: f64 = exact
        .iter()
        .map(|(&r, &p)| p * (r as f64 / n as f64 - mean).powi(2))
        .sum();
    let got = finals.iter().sum::<f64>() / runs;
    if (got - mean).abs() > 3.0 * (var / runs).sqrt() {
        return Err(format!("mean {got} vs {mean}"));
    }
    Ok(())
}
