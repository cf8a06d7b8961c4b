//! End-to-end acceptance gate. Prints one PASS/FAIL/SKIP line per criterion
//! and fails if any criterion fails.
//!
//! Dataset-backed criteria read `polbooks.txt`, `usair.txt`, `grid.txt` and
//! `lastfm.txt` from `HORW_DATA_DIR` (default `<workspace>/data`, filled by
//! `scripts/fetch_datasets.sh`). Missing files turn those criteria into SKIP
//! unless `HORW_REQUIRE_DATASETS=1`, in which case they fail.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use common::*;
use horw::dismantle::run_dismantling;
use horw::epidemic::{select_seeds, simulate_hsir, simulate_sir, spreading_threshold, EpidemicParams};
use horw::graph::{giant_component, parse_edge_list, stats, EdgeListFormat};
use horw::resolution::{benchmark, grid, kl_to_benchmark, segment_slopes, sweep_s};
use horw::simplicial::{build_cover, maximal_cliques};
use horw::walk::{self, TransitionSystem, WalkOptions};
use horw::{Graph, Method, NodeId};
use rand::Rng;

const TIGHT: WalkOptions = WalkOptions {
    tol: 1e-14,
    max_iter: 1_000_000,
};

const FIXTURES: [&str; 7] = [
    "k3.txt",
    "p3.txt",
    "karate.txt",
    "lesmis.txt",
    "florentine.txt",
    "toy_simplices.txt",
    "toy_pqr.txt",
];

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

type Check = Result<Outcome, String>;
type Criterion = (&'static str, fn(&mut Datasets) -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Datasets {
    dir: PathBuf,
    required: bool,
    cache: BTreeMap<&'static str, Option<Graph>>,
}

impl Datasets {
    fn new() -> Self {
        let dir = std::env::var_os("HORW_DATA_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"));
        let dir = dir.canonicalize().unwrap_or(dir);
        let required = std::env::var("HORW_REQUIRE_DATASETS").is_ok_and(|v| v == "1");
        Self {
            dir,
            required,
            cache: BTreeMap::new(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(format!("{name}.txt"))
    }

    /// The giant component of a dataset, if the file is present.
    fn get(&mut self, name: &'static str) -> Option<Graph> {
        let path = self.path(name);
        self.cache
            .entry(name)
            .or_insert_with(|| {
                let bytes = std::fs::read(path).ok()?;
                let (g, _) = parse_edge_list(&bytes, &EdgeListFormat::default()).expect("dataset parses");
                Some(giant_component(&g).0)
            })
            .clone()
    }

    /// Outcome when some datasets were missing and everything else passed.
    fn partial(&self, missing: &[&str], ran: String) -> Outcome {
        if missing.is_empty() {
            return Outcome::Pass(ran);
        }
        let note = format!("{ran}; missing {} in {}", missing.join(", "), self.dir.display());
        if self.required {
            Outcome::Fail(note)
        } else {
            Outcome::Skip(note)
        }
    }
}

fn random_graphs(seed: u64, count: usize, max_n: usize) -> Vec<Graph> {
    let mut r = rng(seed);
    (0..count)
        .map(|round| {
            let n = r.random_range(3..=max_n);
            let p = [0.02, 0.05, 0.2, 0.5][round % 4];
            random_connected(&mut r, n, p)
        })
        .collect()
}

fn horw_bin(args: &[&str]) -> Result<(), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_horw"))
        .args(args)
        .env_remove("HORW_OUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr).trim())
    })
}

fn stochasticity(_: &mut Datasets) -> Check {
    let start = Instant::now();
    let graphs = random_graphs(101, 100, 200);
    for (k, g) in graphs.iter().enumerate() {
        let cover = build_cover(g).map_err(|e| e.to_string())?;
        let c = walk::pairwise_transition(g).map_err(|e| e.to_string())?;
        let w = walk::bipartite_transition(&cover);
        let mut mats = vec![
            ("U", walk::upstream_transition(&cover)),
            ("D", walk::downstream_transition(&cover)),
            ("C", c.clone()),
            ("W", w.clone()),
        ];
        for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
            mats.push(("M", walk::augmented_transition(&c, &w, s).map_err(|e| e.to_string())?));
        }
        for (name, m) in &mats {
            let worst = m.column_sums().iter().map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
            ensure(worst <= 1e-12, || format!("graph {k}: {name} column off by {worst:e}"))?;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(Outcome::Pass(format!("100 graphs, {secs:.2}s")))
}

fn degree_proportional(data: &mut Datasets) -> Check {
    let mut graphs: Vec<(String, Graph)> = FIXTURES.iter().map(|f| (f.to_string(), fixture(f))).collect();
    graphs.extend(
        random_graphs(202, 100, 200)
            .into_iter()
            .enumerate()
            .map(|(k, g)| (format!("random {k}"), g)),
    );
    let mut missing = Vec::new();
    for name in ["polbooks", "usair", "grid", "lastfm"] {
        match data.get(name) {
            Some(g) => graphs.push((name.to_string(), g)),
            None => missing.push(name),
        }
    }
    let mut worst: f64 = 0.0;
    for (name, g) in &graphs {
        let r = walk::rank(g, 0.0, TIGHT).map_err(|e| format!("{name}: {e}"))?;
        let two_m = 2.0 * g.edge_count() as f64;
        for (v, x) in r.scores.iter().enumerate() {
            let k = g.degree(v) as f64 / two_m;
            worst = worst.max((x - k).abs() / k);
        }
        ensure(worst <= 1e-8, || format!("{name}: relative error {worst:e}"))?;
    }
    // the pairwise walk is exact on every graph, so datasets only widen coverage
    Ok(Outcome::Pass(format!(
        "{} graphs, max relative error {worst:.1e}{}",
        graphs.len(),
        if missing.is_empty() {
            String::new()
        } else {
            format!(" (datasets absent: {})", missing.join(", "))
        }
    )))
}

fn oracle_equivalence(_: &mut Datasets) -> Check {
    let mut worst: f64 = 0.0;
    for (k, g) in random_graphs(303, 100, 200).iter().enumerate() {
        let system =
            TransitionSystem::new(g, &build_cover(g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        for s in [0.0, 0.5, 1.0] {
            let m = system
                .augmented(s)
                .map_err(|e| e.to_string())?
                .expect("small graphs materialize");
            let exact = dense_stationary(&dense(&m));
            let got = system.stationary(s, TIGHT).map_err(|e| e.to_string())?;
            let err = l1(&got.scores, &exact);
            worst = worst.max(err);
            ensure(err < 1e-8, || format!("graph {k}, s={s}: L1 {err:e}"))?;
        }
    }
    Ok(Outcome::Pass(format!("100 graphs x 3 values of s, max L1 {worst:.1e}")))
}

fn clique_oracle(_: &mut Datasets) -> Check {
    let mut r = rng(404);
    for round in 0..50 {
        let n = r.random_range(1..=20);
        let p = [0.1, 0.3, 0.5, 0.8][round % 4];
        let g = random_gnp(&mut r, n, p);
        let mut got: Vec<Vec<NodeId>> = maximal_cliques(&g)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|s| s.members)
            .collect();
        got.sort();
        ensure(got == brute_cliques(&g), || format!("round {round}, n={n}"))?;
    }
    Ok(Outcome::Pass("50 graphs".into()))
}

/// N, M, <k>, <k^2>, clustering as printed.
const PUBLISHED_STATS: [(&str, usize, usize, f64, f64, f64); 4] = [
    ("polbooks", 105, 441, 8.40, 100.25, 0.49),
    ("usair", 500, 2980, 11.92, 641.12, 0.62),
    ("grid", 4941, 6594, 2.67, 10.33, 0.08),
    ("lastfm", 7624, 27806, 7.29, 185.44, 0.22),
];

fn table_stats(data: &mut Datasets) -> Check {
    let start = Instant::now();
    let mut missing = Vec::new();
    let mut checked = Vec::new();
    for (name, n, m, k, k2, c) in PUBLISHED_STATS {
        let path = data.path(name);
        let Ok(bytes) = std::fs::read(&path) else {
            missing.push(name);
            continue;
        };
        // the CLI must accept the file as well
        horw_bin(&["stats", "--graph", path.to_str().unwrap()])?;
        let (g, _) = parse_edge_list(&bytes, &EdgeListFormat::default()).map_err(|e| e.to_string())?;
        let s = stats(&g);
        // two printed decimals: agree to half a unit in the last place
        let near = |x: f64, printed: f64| (x - printed).abs() <= 0.005 + 1e-12;
        ensure(s.n == n && s.m == m, || format!("{name}: N={} M={}", s.n, s.m))?;
        ensure(near(s.mean_degree, k), || format!("{name}: <k>={}", s.mean_degree))?;
        ensure(near(s.mean_sq_degree, k2), || {
            format!("{name}: <k2>={}", s.mean_sq_degree)
        })?;
        ensure(near(s.clustering, c), || format!("{name}: C={}", s.clustering))?;
        checked.push(name);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(data.partial(&missing, format!("checked [{}] in {secs:.1}s", checked.join(", "))))
}

fn beta_c(data: &mut Datasets) -> Check {
    let mut missing = Vec::new();
    let mut notes = Vec::new();
    for (name, expected) in [("polbooks", 0.0915), ("usair", 0.0189)] {
        let Some(g) = data.get(name) else {
            missing.push(name);
            continue;
        };
        let b = spreading_threshold(&stats(&g)).map_err(|e| e.to_string())?;
        ensure((b - expected).abs() <= 0.0005, || {
            format!("{name}: {b:.5} vs {expected}")
        })?;
        notes.push(format!("{name} {b:.4}"));
    }
    // the same formula on the printed moments
    for (name, _, _, k, k2, _) in &PUBLISHED_STATS[..2] {
        let b = k / (k2 - k);
        let expected = if *name == "polbooks" { 0.0915 } else { 0.0189 };
        ensure((b - expected).abs() <= 0.0005, || {
            format!("{name} from printed moments: {b:.5}")
        })?;
    }
    Ok(data.partial(&missing, format!("[{}]", notes.join(", "))))
}

const TOP10_POLBOOKS: [(&str, [&str; 10]); 5] = [
    ("horw(s=0)", ["12", "8", "3", "84", "66", "72", "73", "30", "11", "47"]),
    (
        "horw(s=0.5)",
        ["8", "12", "84", "3", "66", "73", "72", "30", "40", "11"],
    ),
    ("horw(s=1)", ["8", "84", "12", "66", "73", "3", "72", "75", "40", "30"]),
    ("degree", ["8", "12", "3", "84", "72", "66", "73", "30", "11", "40"]),
    ("pagerank", ["12", "8", "3", "84", "72", "66", "73", "30", "11", "47"]),
];

const TOP10_USAIR: [(&str, [&str; 10]); 5] = [
    ("horw(s=0)", ["7", "6", "1", "2", "3", "8", "21", "18", "11", "14"]),
    ("horw(s=0.5)", ["6", "7", "3", "1", "2", "21", "10", "8", "11", "18"]),
    ("horw(s=1)", ["3", "1", "7", "6", "2", "18", "8", "21", "10", "11"]),
    ("degree", ["1", "2", "3", "7", "6", "8", "18", "21", "11", "10"]),
    ("pagerank", ["6", "7", "3", "1", "2", "21", "11", "8", "10", "18"]),
];

fn top10_method(name: &str) -> Method {
    match name {
        "horw(s=0)" => Method::Horw { s: 0.0 },
        "horw(s=0.5)" => Method::Horw { s: 0.5 },
        "horw(s=1)" => Method::Horw { s: 1.0 },
        "degree" => Method::Degree,
        _ => Method::PageRank { damping: 0.85 },
    }
}

fn top10(data: &mut Datasets) -> Check {
    let mut missing = Vec::new();
    let mut notes = Vec::new();
    for (name, table) in [("polbooks", &TOP10_POLBOOKS), ("usair", &TOP10_USAIR)] {
        let Some(g) = data.get(name) else {
            missing.push(name);
            continue;
        };
        for (method, expected) in table {
            let r = top10_method(method).rank(&g, TIGHT).map_err(|e| e.to_string())?;
            let got: BTreeSet<&str> = r.top(10).iter().map(|&v| g.label(v)).collect();
            let overlap = expected.iter().filter(|l| got.contains(*l)).count();
            ensure(overlap >= 8, || {
                format!("{name} {method}: overlap {overlap}/10, got {got:?}")
            })?;
            notes.push(format!("{name}/{method} {overlap}"));
        }
    }
    Ok(data.partial(&missing, format!("overlaps [{}]", notes.join(", "))))
}

fn dismantling(data: &mut Datasets) -> Check {
    let cases: [(&str, Method, f64); 8] = [
        ("polbooks", Method::Horw { s: 0.5 }, 0.610),
        ("usair", Method::Horw { s: 0.5 }, 0.188),
        ("grid", Method::Horw { s: 0.5 }, 0.061),
        ("lastfm", Method::Horw { s: 0.5 }, 0.171),
        ("polbooks", Method::Betweenness, 0.670),
        ("usair", Method::Betweenness, 0.198),
        ("polbooks", Method::CoreHd, 0.620),
        ("usair", Method::CoreHd, 0.202),
    ];
    let mut missing = BTreeSet::new();
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for (name, method, expected) in cases {
        let Some(g) = data.get(name) else {
            missing.insert(name);
            continue;
        };
        let r = run_dismantling(&g, &method, 0.01, WalkOptions::default()).map_err(|e| e.to_string())?;
        let line = format!("{name}/{method} {:.3} vs {expected:.3}", r.proportion);
        if (r.proportion - expected).abs() > 0.03 {
            failures.push(line);
        } else {
            notes.push(line);
        }
    }
    if !failures.is_empty() {
        return Ok(Outcome::Fail(format!(
            "outside 0.03: [{}]; within: [{}]",
            failures.join(", "),
            notes.join(", ")
        )));
    }
    let missing: Vec<&str> = missing.into_iter().collect();
    Ok(data.partial(&missing, format!("[{}]", notes.join(", "))))
}

fn seeds_by_horw(g: &Graph, fraction: f64) -> Result<Vec<NodeId>, String> {
    let r = walk::rank(g, 0.5, WalkOptions::default()).map_err(|e| e.to_string())?;
    select_seeds(&r, fraction).map_err(|e| e.to_string())
}

fn pooled(a: f64, b: f64) -> f64 {
    (a * a + b * b).sqrt()
}

fn sir_sanity(data: &mut Datasets) -> Check {
    // zero transmission leaves exactly the seeds recovered, on every graph at hand
    let mut graphs: Vec<(String, Graph)> = FIXTURES.iter().map(|f| (f.to_string(), fixture(f))).collect();
    if let Some(g) = data.get("polbooks") {
        graphs.push(("polbooks".into(), g));
    }
    for (name, g) in &graphs {
        let seeds = seeds_by_horw(g, 0.1)?;
        let params = EpidemicParams {
            beta: 0.0,
            runs: 100,
            ..EpidemicParams::default()
        };
        let out = simulate_sir(g, &seeds, &params).map_err(|e| e.to_string())?;
        let fraction = seeds.len() as f64 / g.node_count() as f64;
        ensure(out.traces.iter().all(|t| t.final_r == fraction), || {
            format!("{name}: beta=0 changed final_r")
        })?;
    }
    let Some(g) = data.get("polbooks") else {
        return Ok(data.partial(&["polbooks"], "beta=0 checked on fixtures".into()));
    };
    let bc = spreading_threshold(&stats(&g)).map_err(|e| e.to_string())?;
    let seeds = seeds_by_horw(&g, 0.1)?;
    let run = |beta: f64| {
        let params = EpidemicParams {
            beta,
            gamma: 1.0,
            runs: 100,
            ..EpidemicParams::default()
        };
        simulate_sir(&g, &seeds, &params).map_err(|e| e.to_string())
    };
    let low = run(bc)?;
    let high = run((4.0 * bc).min(1.0))?;
    let gap = high.final_r_mean - low.final_r_mean;
    let se = pooled(low.final_r_stderr, high.final_r_stderr);
    ensure(gap >= 3.0 * se, || format!("gap {gap:.4} < 3 x {se:.4}"))?;
    Ok(Outcome::Pass(format!(
        "polbooks final_r {:.4} at beta_c vs {:.4} at 4 beta_c (se {se:.4})",
        low.final_r_mean, high.final_r_mean
    )))
}

fn hsir_reduction(data: &mut Datasets) -> Check {
    let mut graphs: Vec<(String, Graph)> = FIXTURES.iter().map(|f| (f.to_string(), fixture(f))).collect();
    let mut missing = Vec::new();
    match data.get("polbooks") {
        Some(g) => graphs.push(("polbooks".into(), g)),
        None => missing.push("polbooks"),
    }
    let mut notes = Vec::new();
    for (name, g) in &graphs {
        let triangles = build_cover(g).map_err(|e| e.to_string())?.triangle_faces();
        let seeds = seeds_by_horw(g, 0.1)?;
        for (beta, gamma) in [(0.1, 1.0), (0.3, 0.5), (0.7, 0.2)] {
            let params = EpidemicParams {
                beta,
                beta2: 0.0,
                gamma,
                runs: 100,
                rng_seed: 7,
                ..EpidemicParams::default()
            };
            let sir = simulate_sir(g, &seeds, &params).map_err(|e| e.to_string())?;
            let hsir = simulate_hsir(g, &triangles, &seeds, &params).map_err(|e| e.to_string())?;
            let same_bits = sir
                .mean_r
                .iter()
                .map(|x| x.to_bits())
                .eq(hsir.mean_r.iter().map(|x| x.to_bits()));
            ensure(sir.traces == hsir.traces && same_bits, || {
                format!("{name}: traces differ at beta2=0")
            })?;
        }
        let Ok(bc) = spreading_threshold(&stats(g)) else {
            continue;
        };
        let beta = bc.min(1.0);
        let params = EpidemicParams {
            beta,
            gamma: 1.0,
            runs: 100,
            ..EpidemicParams::default()
        };
        let sir = simulate_sir(g, &seeds, &params).map_err(|e| e.to_string())?;
        let with_triangles = EpidemicParams {
            beta2: 0.8 * beta,
            ..params
        };
        let hsir = simulate_hsir(g, &triangles, &seeds, &with_triangles).map_err(|e| e.to_string())?;
        let se = pooled(sir.final_r_stderr, hsir.final_r_stderr);
        ensure(hsir.final_r_mean >= sir.final_r_mean - se, || {
            format!(
                "{name}: hsir {:.4} < sir {:.4} - {se:.4}",
                hsir.final_r_mean, sir.final_r_mean
            )
        })?;
        notes.push(format!("{name} {:.3}/{:.3}", sir.final_r_mean, hsir.final_r_mean));
    }
    let absent = if missing.is_empty() { "" } else { " (polbooks absent)" };
    Ok(Outcome::Pass(format!(
        "bitwise on {} graphs; final_r sir/hsir [{}]{absent}",
        graphs.len(),
        notes.join(", ")
    )))
}

fn micro_oracle(_: &mut Datasets) -> Check {
    let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
    let exact = ExactSir::new(&g, &[], 0.5, 0.0, 1.0).final_sizes(&[1]);
    ensure(exact == BTreeMap::from([(1, 0.25), (2, 0.5), (3, 0.25)]), || {
        format!("{exact:?}")
    })?;
    let params = EpidemicParams {
        beta: 0.5,
        beta2: 0.0,
        gamma: 1.0,
        seed_fraction: 0.3,
        runs: 10_000,
        rng_seed: 42,
    };
    let sir = simulate_sir(&g, &[1], &params).map_err(|e| e.to_string())?;
    let finals: Vec<f64> = sir.traces.iter().map(|t| t.final_r).collect();
    check_against_exact(&exact, &finals, 3)?;

    let h = Graph::from_edges(6, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4), (4, 5)]);
    let triangles = build_cover(&h).map_err(|e| e.to_string())?.triangle_faces();
    let exact = ExactSir::new(&h, &triangles, 0.2, 0.6, 0.5).final_sizes(&[0, 1]);
    let params = EpidemicParams {
        beta: 0.2,
        beta2: 0.6,
        gamma: 0.5,
        ..params
    };
    let hsir = simulate_hsir(&h, &triangles, &[0, 1], &params).map_err(|e| e.to_string())?;
    let finals: Vec<f64> = hsir.traces.iter().map(|t| t.final_r).collect();
    check_against_exact(&exact, &finals, 6)?;
    Ok(Outcome::Pass(
        "P3 SIR and two-triangle HSIR within 3 sigma over 10^4 runs".into(),
    ))
}

fn resolution(data: &mut Datasets) -> Check {
    for n in [10, 101, 1000] {
        let linear: Vec<f64> = (0..n).map(|i| 3.0 * i as f64 + 1.0).collect();
        let (kl, _) = kl_to_benchmark(&linear).map_err(|e| e.to_string())?;
        ensure(kl.abs() <= 1e-9, || format!("n={n}: KL {kl:e}"))?;
    }
    let b = benchmark(1000);
    let s = segment_slopes(&b, 10).map_err(|e| e.to_string())?;
    for x in [s.top, s.mid, s.bottom] {
        ensure((x + 1.0).abs() <= 1e-9, || format!("benchmark slope {x}"))?;
    }
    let Some(g) = data.get("grid") else {
        return Ok(data.partial(&["grid"], "linear profile and benchmark slopes checked".into()));
    };
    let system = TransitionSystem::new(&g, &build_cover(&g).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let s_grid = grid(0.0, 1.0, 0.05).map_err(|e| e.to_string())?;
    let sweep = sweep_s(&system, &s_grid, WalkOptions::default()).map_err(|e| e.to_string())?;
    ensure(sweep.points.len() == s_grid.len(), || "incomplete sweep".into())?;
    ensure(sweep.points.iter().all(|p| p.kl.is_finite()), || "non-finite KL".into())?;
    Ok(Outcome::Pass(format!(
        "grid sweep argmin s={:.2} (KL {:.4}); reference value 0.2 is a soft check",
        sweep.best_s, sweep.best_kl
    )))
}

fn determinism(_: &mut Datasets) -> Check {
    let lesmis = fixture_path("lesmis.txt");
    let karate = fixture_path("karate.txt");
    let runs: [Vec<&str>; 10] = [
        vec!["stats", "--graph", &lesmis],
        vec!["cliques", "--graph", &lesmis],
        vec!["export-matrix", "--graph", &lesmis, "--matrix", "m", "--s", "0.3"],
        vec!["rank", "--graph", &lesmis, "--format", "json"],
        vec!["simulate-sir", "--graph", &lesmis, "--runs", "50", "--rng", "11"],
        vec!["simulate-hsir", "--graph", &lesmis, "--runs", "50", "--rng", "11"],
        vec!["dismantle", "--graph", &lesmis, "--method", "corehd"],
        vec!["resolution", "--graph", &lesmis, "--sweep", "0:1:0.1"],
        vec!["rank", "--graph", &karate, "--method", "betweenness"],
        vec![
            "dismantle",
            "--graph",
            &karate,
            "--method",
            "pagerank",
            "--format",
            "json",
        ],
    ];
    let base = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (k, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let dir = base.path().join(format!("{k}-{rep}"));
            let mut full = args.clone();
            let d = dir.to_str().unwrap().to_owned();
            full.extend(["--out", &d]);
            horw_bin(&full)?;
            let mut contents = BTreeMap::new();
            for e in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
                let e = e.map_err(|e| e.to_string())?;
                contents.insert(e.file_name(), std::fs::read(e.path()).map_err(|e| e.to_string())?);
            }
            outputs.push(contents);
        }
        ensure(!outputs[0].is_empty() && outputs[0] == outputs[1], || {
            format!("{args:?} differs between runs")
        })?;
        files += outputs[0].len();
    }
    Ok(Outcome::Pass(format!(
        "{} commands, {files} artifacts byte-identical",
        runs.len()
    )))
}

fn fixture_path(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 13] = [
        ("stochasticity", stochasticity),
        ("degree-proportional stationarity", degree_proportional),
        ("dense oracle equivalence", oracle_equivalence),
        ("clique oracle", clique_oracle),
        ("dataset statistics", table_stats),
        ("spreading threshold", beta_c),
        ("top-10 overlap", top10),
        ("dismantling proportions", dismantling),
        ("SIR sanity", sir_sanity),
        ("HSIR reduction", hsir_reduction),
        ("HSIR micro-oracle", micro_oracle),
        ("resolution", resolution),
        ("determinism", determinism),
    ];
    let mut data = Datasets::new();
    let mut failed = Vec::new();
    let mut out = std::io::stdout().lock();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = match catch_unwind(AssertUnwindSafe(|| check(&mut data))) {
            Ok(Ok(o)) => o,
            Ok(Err(msg)) => Outcome::Fail(msg),
            Err(_) => Outcome::Fail("panicked".into()),
        };
        let (status, note) = match outcome {
            Outcome::Pass(n) => ("PASS", n),
            Outcome::Skip(n) => ("SKIP", n),
            Outcome::Fail(n) => {
                failed.push(k + 1);
                ("FAIL", n)
            }
        };
        // written to the handle directly so the harness does not capture it
        writeln!(
            out,
            "acceptance {:>2} {status} {name} ({:.1}s): {note}",
            k + 1,
            start.elapsed().as_secs_f64()
        )
        .unwrap();
        out.flush().unwrap();
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
