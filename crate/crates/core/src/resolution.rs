//! How well a ranking separates nodes: KL divergence of the sorted score
//! profile from the line `y = 1 - x`, and least-squares slopes over the top,
//! middle and bottom of the profile.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rank::{RankResult, TIE_TOLERANCE};
use crate::walk::{TransitionSystem, WalkOptions};

/// Added to every entry before the profiles become distributions.
pub const SMOOTHING: f64 = 1e-12;

/// `(x - min) / (max - min)`. A constant input (up to round-off) maps to
/// zeros and sets the flag.
pub fn minmax_normalize(xs: &[f64]) -> Result<(Vec<f64>, bool)> {
    if xs.len() < 2 {
        return Err(Error::Dimension(format!("need at least 2 scores, got {}", xs.len())));
    }
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let spread = max - min;
    if spread <= TIE_TOLERANCE * max.abs().max(min.abs()) {
        return Ok((vec![0.0; xs.len()], true));
    }
    Ok((xs.iter().map(|x| (x - min) / spread).collect(), false))
}

/// Scores sorted descending and min-max normalized.
pub fn profile(scores: &[f64]) -> Result<(Vec<f64>, bool)> {
    let mut sorted = scores.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    minmax_normalize(&sorted)
}

/// `1 - i / (n - 1)` for `i = 0..n`.
pub fn benchmark(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 - i as f64 / (n - 1) as f64).collect()
}

/// `sum p_i ln(p_i / q_i)` after smoothing and normalizing both vectors.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    let to_dist = |v: &[f64]| {
        let total: f64 = v.iter().map(|x| x + SMOOTHING).sum();
        v.iter().map(|x| (x + SMOOTHING) / total).collect::<Vec<_>>()
    };
    let p = to_dist(p);
    let q = to_dist(q);
    p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum::<f64>().max(0.0)
}

/// KL divergence of the score profile from the benchmark line; infinite
/// (with the flag set) when all scores are equal.
pub fn kl_to_benchmark(scores: &[f64]) -> Result<(f64, bool)> {
    let (prof, degenerate) = profile(scores)?;
    if degenerate {
        return Ok((f64::INFINITY, true));
    }
    Ok((kl_divergence(&prof, &benchmark(prof.len())), false))
}

/// Least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slopes {
    pub top: f64,
    pub mid: f64,
    pub bottom: f64,
}

/// Slopes of the profile (abscissa `i / (n - 1)`) over the first, middle and
/// last `window` positions.
pub fn segment_slopes(scores: &[f64], window: usize) -> Result<Slopes> {
    let n = scores.len();
    if window < 2 {
        return Err(Error::InvalidParameter {
            name: "window",
            message: "must be at least 2".into(),
        });
    }
    if n < 3 * window {
        return Err(Error::Dimension(format!(
            "{n} nodes is fewer than 3 windows of {window}"
        )));
    }
    let (prof, _) = profile(scores)?;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let fit = |start: usize| ls_slope(&xs[start..start + window], &prof[start..start + window]);
    Ok(Slopes {
        top: fit(0),
        mid: fit(n / 2 - window / 2),
        bottom: fit(n - window),
    })
}

/// 1% of `n` rounded to the nearest even number, at least 2.
pub fn default_window(n: usize) -> usize {
    let w = (n as f64 / 100.0 / 2.0).round() as usize * 2;
    w.max(2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub method: String,
    pub kl: f64,
    pub degenerate: bool,
    pub slope_top: f64,
    pub slope_mid: f64,
    pub slope_bottom: f64,
    pub window: usize,
}

pub fn resolution_report(rank: &RankResult, window: usize) -> Result<ResolutionReport> {
    let (kl, degenerate) = kl_to_benchmark(&rank.scores)?;
    let slopes = segment_slopes(&rank.scores, window)?;
    Ok(ResolutionReport {
        method: rank.name(),
        kl,
        degenerate,
        slope_top: slopes.top,
        slope_mid: slopes.mid,
        slope_bottom: slopes.bottom,
        window,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub s: f64,
    pub kl: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    /// First grid point attaining the smallest KL.
    pub best_s: f64,
    pub best_kl: f64,
    pub points: Vec<SweepPoint>,
}

/// `a, a + step, ...` up to `b` inclusive (with round-off slack).
pub fn grid(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    let valid = step > 0.0 && a <= b && a.is_finite() && b.is_finite();
    if !valid {
        return Err(Error::InvalidParameter {
            name: "sweep",
            message: format!("bad grid {a}:{b}:{step}"),
        });
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    // multiply rather than accumulate so 0.01 steps land on round values
    Ok((0..=count).map(|i| a + i as f64 * step).collect())
}

/// KL of the higher-order walk's ranking at every `s` of the grid.
pub fn sweep_s(system: &TransitionSystem, s_grid: &[f64], opts: WalkOptions) -> Result<SweepResult> {
    if s_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "sweep",
            message: "empty grid".into(),
        });
    }
    let points: Vec<SweepPoint> = s_grid
        .par_iter()
        .map(|&s| {
            let stat = system.stationary(s, opts)?;
            let (kl, degenerate) = kl_to_benchmark(&stat.scores)?;
            Ok(SweepPoint { s, kl, degenerate })
        })
        .collect::<Result<_>>()?;
    let best = points
        .iter()
        .fold(points[0], |best, p| if p.kl < best.kl { *p } else { best });
    Ok(SweepResult {
        best_s: best.s,
        best_kl: best.kl,
        points,
    })
}
