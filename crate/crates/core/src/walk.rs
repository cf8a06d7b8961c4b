//! The higher-order augmented random walk: pairwise transition `C = A K^-1`,
//! upward walk `U = B Λv^-1`, downward walk `D = B^T Λs^-1`, the two-step
//! node-simplex-node walk `W = D U`, and the mixture `M(s) = s W + (1 - s) C`
//! whose stationary vector ranks the nodes.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rank::RankResult;
use crate::simplicial::{build_cover, SimplicialCover};
use crate::sparse::{LinearOperator, SparseMatrix};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Above this many scalar products (`sum |a|^2` over simplices) `W` is applied
/// as `D (U x)` instead of being materialized.
pub const MATERIALIZE_LIMIT: usize = 50_000_000;

/// Iterations between stagnation checks in [`stationary`].
const STAGNATION_WINDOW: usize = 64;

/// Power-iteration stopping rule: L1 residual `|M x - x|` below `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for WalkOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// `C[i][j] = A[i][j] / k_j`.
pub fn pairwise_transition(g: &Graph) -> Result<SparseMatrix> {
    let n = g.node_count();
    if let Some(node) = (0..n).find(|&j| g.degree(j) == 0) {
        return Err(Error::ZeroDegree { node });
    }
    Ok(SparseMatrix::from_triplets(
        n,
        n,
        (0..n).flat_map(|j| {
            let w = 1.0 / g.degree(j) as f64;
            g.neighbors(j).iter().map(move |&i| (i, j, w))
        }),
    ))
}

/// Upward walk `U` (simplices x nodes): `U[a][j] = B[a][j] / Λv[j]`.
pub fn upstream_transition(cover: &SimplicialCover) -> SparseMatrix {
    let degrees = cover.node_degrees();
    SparseMatrix::from_triplets(
        cover.simplex_count(),
        cover.node_count(),
        cover
            .simplices()
            .iter()
            .flat_map(|s| s.members.iter().map(move |&j| (s.id, j, 1.0 / degrees[j] as f64))),
    )
}

/// Downward walk `D` (nodes x simplices): `D[i][a] = B[a][i] / |a|`.
pub fn downstream_transition(cover: &SimplicialCover) -> SparseMatrix {
    SparseMatrix::from_triplets(
        cover.node_count(),
        cover.simplex_count(),
        cover.simplices().iter().flat_map(|s| {
            let w = 1.0 / s.len() as f64;
            s.members.iter().map(move |&i| (i, s.id, w))
        }),
    )
}

/// Two-step walk node -> simplex -> node, `W = D U`.
pub fn bipartite_transition(cover: &SimplicialCover) -> SparseMatrix {
    downstream_transition(cover)
        .matmul(&upstream_transition(cover))
        .expect("D is n x m and U is m x n")
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "s",
            range: "[0,1]",
        })
    }
}

/// `s W + (1 - s) C`.
pub fn augmented_transition(c: &SparseMatrix, w: &SparseMatrix, s: f64) -> Result<SparseMatrix> {
    check_s(s)?;
    if (c.rows(), c.cols()) != (w.rows(), w.cols()) {
        return Err(Error::Dimension(format!(
            "C is {}x{}, W is {}x{}",
            c.rows(),
            c.cols(),
            w.rows(),
            w.cols()
        )));
    }
    if s == 0.0 {
        return Ok(c.clone());
    }
    if s == 1.0 {
        return Ok(w.clone());
    }
    SparseMatrix::combine(s, w, 1.0 - s, c)
}

/// Result of [`stationary`].
#[derive(Debug, Clone, PartialEq)]
pub struct Stationary {
    pub scores: Vec<f64>,
    pub iterations: usize,
    /// `|M x - x|_1` of the returned vector.
    pub residual: f64,
    /// The iteration switched to `(M + I) / 2` after stagnating.
    pub lazy: bool,
}

/// Power iteration `x <- M x` from the uniform vector until
/// `|M x - x|_1 < tol`.
///
/// If the residual fails to decrease over a window of iterations (a periodic
/// chain, e.g. the pairwise walk on a bipartite graph) the iteration restarts
/// on the lazy chain `(M + I) / 2`, which has the same fixed points.
pub fn stationary<O: LinearOperator + ?Sized>(op: &O, opts: WalkOptions) -> Result<Stationary> {
    let n = op.dim();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let uniform = 1.0 / n as f64;
    let mut x = vec![uniform; n];
    let mut y = vec![0.0; n];
    let mut lazy = false;
    let mut window_start = f64::INFINITY;
    let mut residual = f64::INFINITY;
    for it in 1..=opts.max_iter {
        op.apply(&x, &mut y);
        residual = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum();
        if residual < opts.tol {
            return Ok(Stationary {
                scores: x,
                iterations: it,
                residual,
                lazy,
            });
        }
        if lazy {
            y.iter_mut().zip(&x).for_each(|(b, a)| *b = 0.5 * (*a + *b));
        }
        let total: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= total);
        std::mem::swap(&mut x, &mut y);

        if it % STAGNATION_WINDOW == 0 {
            if !lazy && residual >= window_start * (1.0 - 1e-9) {
                lazy = true;
                x.fill(uniform);
                window_start = f64::INFINITY;
            } else {
                window_start = residual;
            }
        }
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        residual,
    })
}

/// The two-step walk, either as one matrix or as its factors.
#[derive(Debug, Clone, PartialEq)]
pub enum BipartiteWalk {
    Materialized(SparseMatrix),
    Factored { up: SparseMatrix, down: SparseMatrix },
}

impl BipartiteWalk {
    pub fn new(cover: &SimplicialCover) -> Self {
        if cover.product_work() <= MATERIALIZE_LIMIT {
            Self::Materialized(bipartite_transition(cover))
        } else {
            Self::Factored {
                up: upstream_transition(cover),
                down: downstream_transition(cover),
            }
        }
    }
}

impl LinearOperator for BipartiteWalk {
    fn dim(&self) -> usize {
        match self {
            Self::Materialized(w) => w.rows(),
            Self::Factored { down, .. } => down.rows(),
        }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match self {
            Self::Materialized(w) => w.mul_vec(x, y),
            Self::Factored { up, down } => {
                let mut mid = vec![0.0; up.rows()];
                up.mul_vec(x, &mut mid);
                down.mul_vec(&mid, y);
            }
        }
    }
}

/// Pairwise and two-step walks of one graph; mixtures for any `s` are formed
/// on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionSystem {
    pub c: SparseMatrix,
    pub w: BipartiteWalk,
}

/// `s W + (1 - s) C` applied without forming the sum.
struct Mixture<'a> {
    s: f64,
    c: &'a SparseMatrix,
    w: &'a BipartiteWalk,
}

impl LinearOperator for Mixture<'_> {
    fn dim(&self) -> usize {
        self.c.rows()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let mut wy = vec![0.0; y.len()];
        self.w.apply(x, &mut wy);
        self.c.mul_vec(x, y);
        for (a, b) in y.iter_mut().zip(wy) {
            *a = self.s * b + (1.0 - self.s) * *a;
        }
    }
}

impl TransitionSystem {
    pub fn new(g: &Graph, cover: &SimplicialCover) -> Result<Self> {
        if cover.node_count() != g.node_count() {
            return Err(Error::Dimension(format!(
                "cover has {} nodes, graph has {}",
                cover.node_count(),
                g.node_count()
            )));
        }
        Ok(Self {
            c: pairwise_transition(g)?,
            w: BipartiteWalk::new(cover),
        })
    }

    /// Materialized `M(s)`, when `W` is materialized.
    pub fn augmented(&self, s: f64) -> Result<Option<SparseMatrix>> {
        match &self.w {
            BipartiteWalk::Materialized(w) => augmented_transition(&self.c, w, s).map(Some),
            BipartiteWalk::Factored { .. } => {
                check_s(s)?;
                Ok(None)
            }
        }
    }

    pub fn stationary(&self, s: f64, opts: WalkOptions) -> Result<Stationary> {
        match self.augmented(s)? {
            Some(m) => stationary(&m, opts),
            None => stationary(
                &Mixture {
                    s,
                    c: &self.c,
                    w: &self.w,
                },
                opts,
            ),
        }
    }
}

/// Ranks the nodes of a connected graph by the stationary distribution of
/// the augmented walk with tuning parameter `s`.
pub fn rank(g: &Graph, s: f64, opts: WalkOptions) -> Result<RankResult> {
    check_s(s)?;
    g.require_connected()?;
    let cover = build_cover(g)?;
    rank_with_cover(g, &cover, s, opts)
}

/// [`rank`] with a precomputed cover.
pub fn rank_with_cover(g: &Graph, cover: &SimplicialCover, s: f64, opts: WalkOptions) -> Result<RankResult> {
    check_s(s)?;
    g.require_connected()?;
    let system = TransitionSystem::new(g, cover)?;
    rank_with_system(g, &system, s, opts)
}

pub(crate) fn rank_with_system(g: &Graph, system: &TransitionSystem, s: f64, opts: WalkOptions) -> Result<RankResult> {
    let st = system.stationary(s, opts)?;
    Ok(RankResult::from_raw("horw", st.scores, g.labels())
        .with_s(s)
        .with_convergence(st.iterations, st.residual))
}
