//! Maximal simplices of the clique complex and the node-simplex incidence
//! structure they induce.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::sparse::SparseMatrix;

/// Default cap on the number of maximal cliques before enumeration aborts.
pub const DEFAULT_MAX_CLIQUES: usize = 10_000_000;

/// A maximal clique with at least two members.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simplex {
    pub id: usize,
    /// Strictly increasing node indices.
    pub members: Vec<NodeId>,
}

impl Simplex {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// All maximal cliques of size >= 2, sorted lexicographically by member list,
/// with the default clique cap.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<Simplex>> {
    maximal_cliques_capped(g, DEFAULT_MAX_CLIQUES)
}

/// [`maximal_cliques`] that fails with [`Error::CliqueLimit`] once more than
/// `limit` cliques have been found.
pub fn maximal_cliques_capped(g: &Graph, limit: usize) -> Result<Vec<Simplex>> {
    let order = degeneracy_order(g);
    let mut position = vec![0usize; g.node_count()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    let found = AtomicUsize::new(0);
    let aborted = AtomicBool::new(false);
    let per_root: Vec<Vec<Vec<NodeId>>> = order
        .par_iter()
        .map(|&v| {
            let (mut p, mut x) = (Vec::new(), Vec::new());
            for &w in g.neighbors(v) {
                if position[w] > position[v] {
                    p.push(w);
                } else {
                    x.push(w);
                }
            }
            let mut search = Search {
                g,
                out: Vec::new(),
                found: &found,
                aborted: &aborted,
                limit,
            };
            search.expand(&mut vec![v], p, x);
            search.out
        })
        .collect();
    if aborted.load(AtomicOrdering::Relaxed) {
        return Err(Error::CliqueLimit { limit });
    }

    let mut cliques: Vec<Vec<NodeId>> = per_root
        .into_iter()
        .flatten()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    cliques.sort_unstable();
    Ok(cliques
        .into_iter()
        .enumerate()
        .map(|(id, members)| Simplex { id, members })
        .collect())
}

/// Nodes in smallest-last (degeneracy) order.
fn degeneracy_order(g: &Graph) -> Vec<NodeId> {
    let n = g.node_count();
    let mut degree = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<NodeId>> = vec![Vec::new(); max_degree + 1];
    // reversed so that pops yield ascending node index within a bucket
    for v in (0..n).rev() {
        buckets[degree[v]].push(v);
    }
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut low = 0;
    while order.len() < n {
        low = low.min(max_degree);
        while buckets[low].is_empty() {
            low += 1;
        }
        let v = buckets[low].pop().unwrap();
        if removed[v] || degree[v] != low {
            continue; // stale entry
        }
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
                buckets[degree[w]].push(w);
                low = low.min(degree[w]);
            }
        }
    }
    order
}

struct Search<'a> {
    g: &'a Graph,
    out: Vec<Vec<NodeId>>,
    found: &'a AtomicUsize,
    aborted: &'a AtomicBool,
    limit: usize,
}

impl Search<'_> {
    /// Bron–Kerbosch with Tomita pivoting. `p` and `x` are sorted.
    fn expand(&mut self, r: &mut Vec<NodeId>, mut p: Vec<NodeId>, mut x: Vec<NodeId>) {
        if self.aborted.load(AtomicOrdering::Relaxed) {
            return;
        }
        if p.is_empty() {
            if x.is_empty() && r.len() >= 2 {
                if self.found.fetch_add(1, AtomicOrdering::Relaxed) >= self.limit {
                    self.aborted.store(true, AtomicOrdering::Relaxed);
                    return;
                }
                self.out.push(r.clone());
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| (intersect(&p, self.g.neighbors(u)).len(), std::cmp::Reverse(u)))
            .expect("p is nonempty");
        let candidates: Vec<NodeId> = p.iter().copied().filter(|&v| !self.g.has_edge(pivot, v)).collect();
        for v in candidates {
            let nbrs = self.g.neighbors(v);
            r.push(v);
            self.expand(r, intersect(&p, nbrs), intersect(&x, nbrs));
            r.pop();
            let at = p.binary_search(&v).expect("candidate in p");
            p.remove(at);
            let at = x.binary_search(&v).unwrap_err();
            x.insert(at, v);
        }
    }
}

fn intersect(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Maximal simplices together with their node incidence.
///
/// `B[a][j] = 1` iff node `j` belongs to simplex `a`; `node_degrees` are the
/// column sums of `B` and `simplex_sizes` its row sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplicialCover {
    n: usize,
    simplices: Vec<Simplex>,
    node_simplices: Vec<Vec<usize>>,
    node_degrees: Vec<usize>,
    simplex_sizes: Vec<usize>,
}

/// Enumerates the maximal cliques of `g` and builds their cover.
pub fn build_cover(g: &Graph) -> Result<SimplicialCover> {
    SimplicialCover::from_simplices(g.node_count(), maximal_cliques(g)?)
}

/// [`build_cover`] with an explicit clique cap.
pub fn build_cover_capped(g: &Graph, limit: usize) -> Result<SimplicialCover> {
    SimplicialCover::from_simplices(g.node_count(), maximal_cliques_capped(g, limit)?)
}

impl SimplicialCover {
    /// Validates simplices over nodes `0..n` and indexes them. Every node must
    /// belong to at least one simplex.
    pub fn from_simplices(n: usize, simplices: Vec<Simplex>) -> Result<Self> {
        let mut node_simplices = vec![Vec::new(); n];
        for (a, s) in simplices.iter().enumerate() {
            if s.id != a {
                return Err(Error::InvalidCover(format!("simplex at position {a} has id {}", s.id)));
            }
            if s.members.len() < 2 {
                return Err(Error::InvalidCover(format!("simplex {a} has fewer than 2 members")));
            }
            if !s.members.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidCover(format!(
                    "simplex {a} members not strictly increasing"
                )));
            }
            if let Some(&bad) = s.members.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidCover(format!("simplex {a} references node {bad} >= {n}")));
            }
            for &v in &s.members {
                node_simplices[v].push(a);
            }
        }
        if let Some(v) = node_simplices.iter().position(Vec::is_empty) {
            return Err(Error::InvalidCover(format!("node {v} lies in no simplex")));
        }
        let node_degrees = node_simplices.iter().map(Vec::len).collect();
        let simplex_sizes = simplices.iter().map(Simplex::len).collect();
        Ok(Self {
            n,
            simplices,
            node_simplices,
            node_degrees,
            simplex_sizes,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Simplices containing `node`, ascending.
    pub fn simplices_of(&self, node: NodeId) -> &[usize] {
        &self.node_simplices[node]
    }

    /// Number of simplices containing each node.
    pub fn node_degrees(&self) -> &[usize] {
        &self.node_degrees
    }

    /// Cardinality of each simplex.
    pub fn simplex_sizes(&self) -> &[usize] {
        &self.simplex_sizes
    }

    /// Incidence matrix `B` (simplices x nodes) with unit entries.
    pub fn incidence(&self) -> SparseMatrix {
        SparseMatrix::from_triplets(
            self.simplices.len(),
            self.n,
            self.simplices
                .iter()
                .flat_map(|s| s.members.iter().map(move |&v| (s.id, v, 1.0))),
        )
    }

    /// Sum over simplices of `|a|^2`, the number of products forming `D U`.
    pub fn product_work(&self) -> usize {
        self.simplex_sizes.iter().map(|&k| k * k).sum()
    }

    /// All 2-faces of the simplices (every triangle of the clique complex),
    /// sorted and without duplicates.
    pub fn triangle_faces(&self) -> Vec<[NodeId; 3]> {
        let mut faces = Vec::new();
        for s in &self.simplices {
            let m = &s.members;
            for a in 0..m.len() {
                for b in a + 1..m.len() {
                    for c in b + 1..m.len() {
                        faces.push([m[a], m[b], m[c]]);
                    }
                }
            }
        }
        faces.sort_unstable();
        faces.dedup();
        faces
    }
}
